import logging
import math
import time
from argparse import ArgumentParser
from pathlib import Path
from typing import Any, Optional

from django.conf import settings
from django.core.management.base import CommandError, CommandParser

from tropical_cp.core.exceptions import (
    InvalidVertexError,
    MatrixFormatError,
    NotCompletelyPositiveError,
    TropicalError,
)
from tropical_cp.core.matrices import SymTropMatrix
from tropical_cp.core.services.cp_analysis_service import CpAnalysisService
from tropical_cp.graphs.pattern_graph import PatternGraph, diameter, pattern_graph
from tropical_cp.graphs.services.clique_cover_service import CliqueCover, CliqueCoverService
from tropical_cp.graphs.services.edge_clique_cover_service import EdgeCliqueCoverService
from tropical_cp.graphs.services.instance_generator import generate_instance
from tropical_cp.graphs.services.witness_service import diameter_witness_matrix
from tropical_cp.ranks.services.decomposition_service import DecompositionService
from tropical_cp.ranks.services.exact_rank_service import ExactRankService, RankStatus
from tropical_cp.cli.services.matrix_format_service import (
    looks_like_graph,
    parse_graph,
    parse_matrix,
    render_graph,
    render_matrix,
    render_scalar,
)
from tropical_cp.cli.services.report_service import (
    Report,
    ReportService,
    ReportStatus,
    digest,
    encode_certificate,
    matrix_digest,
)
from tropical_cp.cli.services.selftest_service import SelftestService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_UNDETERMINED = 3

EXIT_CODES = {
    ReportStatus.OK: EXIT_OK,
    ReportStatus.REFUTED: EXIT_OK,
    ReportStatus.FALSE: EXIT_FALSE,
    ReportStatus.ERROR: EXIT_USAGE,
    ReportStatus.UNDETERMINED: EXIT_UNDETERMINED,
}


def add_subcommands(parser: ArgumentParser) -> None:
    parser.add_argument("--report", help="also write the JSON report to this path")
    subcommands = parser.add_subparsers(dest="subcommand", required=True)

    check = subcommands.add_parser("check", help="completely positive membership")
    check.add_argument("matrix")

    normalize = subcommands.add_parser("normalize", help="C(A) and its normalization record")
    normalize.add_argument("matrix")
    normalize.add_argument("--out", help="write C(A) to this matrix file")

    graph = subcommands.add_parser("graph", help="pattern graph G(A) and its diameter")
    graph.add_argument("matrix")
    graph.add_argument("--out", help="write G(A) to this graph file")

    bound = subcommands.add_parser("bound", help="theta-minimising cover and CP-rank upper bound")
    bound.add_argument("matrix")

    decompose = subcommands.add_parser("decompose", help="constructive rank-one factors")
    decompose.add_argument("matrix")

    rank = subcommands.add_parser("rank", help="exact CP-rank by search")
    rank.add_argument("matrix")
    rank.add_argument("--max-r", type=int, default=8)
    rank.add_argument("--node-limit", type=int, default=None)
    rank.add_argument("--timeout-s", type=float, default=None)
    rank.add_argument("--threads", type=int, default=None)

    cc = subcommands.add_parser("cc", help="edge clique cover number")
    cc.add_argument("path", help="graph file or matrix file")

    witness = subcommands.add_parser("witness", help="diameter witness matrix")
    witness.add_argument("graph")
    witness.add_argument("u", type=int)
    witness.add_argument("v", type=int)
    witness.add_argument("--out", help="write the matrix to this file")

    gen = subcommands.add_parser("gen", help="random normalized CP matrix with a given pattern")
    gen.add_argument("graph")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--low", type=int, default=1)
    gen.add_argument("--high", type=int, default=6)
    gen.add_argument("--denominator", type=int, default=2)
    gen.add_argument("--out", help="write the matrix to this file")

    selftest = subcommands.add_parser("selftest", help="run the reference corpus")
    selftest.add_argument("--include-slow", action="store_true")

    verify = subcommands.add_parser("verify", help="re-verify the certificates in a report")
    verify.add_argument("report_file")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc.strerror}", returncode=EXIT_USAGE)


def _write(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text)


def _rank_value(rank: Optional[float]) -> Any:
    if rank is None:
        return None
    return "inf" if rank == math.inf else int(rank)


def _cover_payload(cover: Optional[CliqueCover]) -> Optional[list[list[int]]]:
    if cover is None:
        return None
    return [[v + 1 for v in clique] for clique in cover.cliques]


class CommandService:
    """Runs one ``tropcp`` subcommand and turns the outcome into a Report."""

    def execute(self, options: dict[str, Any]) -> tuple[Report, int]:
        name = options["subcommand"]
        handler = getattr(self, f"run_{name}")
        started = time.perf_counter()
        try:
            report = handler(options)
        except MatrixFormatError as exc:
            report = Report(name, ReportStatus.ERROR, {"error": str(exc), "location": exc.location})
        except InvalidVertexError as exc:
            report = Report(name, ReportStatus.ERROR, {"error": str(exc)})
        except NotCompletelyPositiveError as exc:
            report = Report(name, ReportStatus.FALSE, {"completely_positive": False, "error": str(exc)})
        except CommandError as exc:
            report = Report(name, ReportStatus.ERROR, {"error": str(exc)})
        except TropicalError as exc:
            logger.error(f"{name} failed: {exc}")
            report = Report(name, ReportStatus.FALSE, {"error": str(exc)})
        report.elapsed_s = round(time.perf_counter() - started, 3)
        _write(options.get("report"), report.to_json() + "\n")
        return report, EXIT_CODES[report.status]

    def _matrix(self, options) -> tuple[SymTropMatrix, str]:
        a = parse_matrix(_read(options["matrix"]))
        return a, matrix_digest(a)

    def run_check(self, options) -> Report:
        a, input_digest = self._matrix(options)
        cp = CpAnalysisService.is_completely_positive(a)
        payload = {
            "completely_positive": cp,
            "normalized": CpAnalysisService.is_normalized(a),
            "rank_one": CpAnalysisService.cp_rank_is_one(a) if cp else False,
        }
        status = ReportStatus.OK if cp else ReportStatus.FALSE
        return Report("check", status, payload, input_digest)

    def run_normalize(self, options) -> Report:
        a, input_digest = self._matrix(options)
        normalization = CpAnalysisService.normalize(a)
        record = normalization.record
        rendered = (
            render_matrix(normalization.matrix) if normalization.matrix is not None else None
        )
        if rendered:
            _write(options.get("out"), rendered)
        payload = {
            "matrix": rendered,
            "deleted_indices": sorted(i + 1 for i in record.deleted_indices),
            "shifts": {str(i + 1): str(s) for i, s in zip(record.surviving_indices, record.shifts)},
        }
        return Report("normalize", ReportStatus.OK, payload, input_digest)

    def run_graph(self, options) -> Report:
        a, input_digest = self._matrix(options)
        graph = pattern_graph(a)
        _write(options.get("out"), render_graph(graph))
        d = diameter(graph)
        payload = {
            "n": graph.n,
            "edges": [[u + 1, v + 1] for u, v in graph.sorted_edges()],
            "diameter": "inf" if d == math.inf else d,
            "graph": render_graph(graph),
        }
        return Report("graph", ReportStatus.OK, payload, input_digest)

    def run_bound(self, options) -> Report:
        a, input_digest = self._matrix(options)
        c = CpAnalysisService.normalize(a).matrix
        if c is None:
            payload = {"bound": 1, "cover": None, "theta": None, "empty_pattern_exact": False}
            return Report("bound", ReportStatus.OK, payload, input_digest)
        bound = CliqueCoverService().theta_bound(c)
        payload = {
            "bound": bound.bound,
            "cover": _cover_payload(bound.cover),
            "theta": bound.cover.theta if bound.cover else None,
            "empty_pattern_exact": bound.empty_pattern_exact,
        }
        return Report("bound", ReportStatus.OK, payload, input_digest)

    def run_decompose(self, options) -> Report:
        a, input_digest = self._matrix(options)
        decomposition, cover = DecompositionService().decompose(a)
        payload = {
            "rank": decomposition.rank,
            "verified": decomposition.verified,
            "cover": _cover_payload(cover),
            "certificate": encode_certificate(decomposition),
        }
        return Report("decompose", ReportStatus.OK, payload, input_digest)

    def run_rank(self, options) -> Report:
        a, input_digest = self._matrix(options)
        service = ExactRankService(
            node_limit=options.get("node_limit"),
            timeout_s=options.get("timeout_s"),
            threads=options.get("threads") or settings.TROPCP_THREADS,
        )
        rank, certificate = service.cp_rank_exact(a, options["max_r"])
        payload = {
            "rank": _rank_value(rank),
            "lower_bound": certificate.lower_bound,
            "refuted": certificate.refuted,
            "attempts": [
                {"r": attempt.r, "status": str(attempt.status), "stats": attempt.stats.as_dict()}
                for attempt in certificate.attempts
            ],
            "stats": certificate.stats.as_dict(),
        }
        if certificate.decomposition is not None:
            payload["certificate"] = encode_certificate(certificate.decomposition)

        status = {
            RankStatus.OK: ReportStatus.OK,
            RankStatus.NOT_CP: ReportStatus.FALSE,
            RankStatus.UNDETERMINED: ReportStatus.UNDETERMINED,
        }[certificate.status]
        return Report("rank", status, payload, input_digest)

    def run_cc(self, options) -> Report:
        text = _read(options["path"])
        if looks_like_graph(text):
            graph = parse_graph(text)
        else:
            graph = pattern_graph(parse_matrix(text))
        cc, cover = EdgeCliqueCoverService().edge_clique_cover_number(graph)
        payload = {"cc": cc, "cliques": [[v + 1 for v in c] for c in cover.cliques]}
        return Report("cc", ReportStatus.OK, payload, digest(render_graph(graph)))

    def run_witness(self, options) -> Report:
        graph = parse_graph(_read(options["graph"]))
        matrix = diameter_witness_matrix(graph, options["u"] - 1, options["v"] - 1)
        rendered = render_matrix(matrix)
        _write(options.get("out"), rendered)
        payload = {"matrix": rendered, "n": graph.n}
        return Report("witness", ReportStatus.OK, payload, digest(render_graph(graph)))

    def run_gen(self, options) -> Report:
        graph = parse_graph(_read(options["graph"]))
        try:
            matrix = generate_instance(
                graph,
                options["seed"],
                (options["low"], options["high"]),
                options["denominator"],
            )
        except ValueError as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE)
        rendered = render_matrix(matrix)
        _write(options.get("out"), rendered)
        payload = {"matrix": rendered, "seed": options["seed"]}
        return Report("gen", ReportStatus.OK, payload, digest(render_graph(graph)))

    def run_selftest(self, options) -> Report:
        results = SelftestService().run(include_slow=options.get("include_slow", False))
        payload = {
            "cases": [
                {"name": r.name, "passed": r.passed, "detail": r.detail, "elapsed_s": round(r.elapsed_s, 3)}
                for r in results
            ],
            "passed": sum(r.passed for r in results),
            "failed": sum(not r.passed for r in results),
        }
        status = ReportStatus.OK if all(r.passed for r in results) else ReportStatus.FALSE
        return Report("selftest", status, payload)

    def run_verify(self, options) -> Report:
        text = _read(options["report_file"])
        report, checks = ReportService().load(text)
        if not checks:
            payload = {
                "operation": report.operation,
                "error": "report carries no certificates to verify",
            }
            return Report("verify", ReportStatus.ERROR, payload, digest(text))
        payload = {
            "operation": report.operation,
            "certificates": {check.key: check.verified for check in checks},
        }
        status = ReportStatus.OK if all(check.verified for check in checks) else ReportStatus.FALSE
        return Report("verify", status, payload, digest(text))


def build_parser() -> CommandParser:
    parser = CommandParser(prog="tropcp", called_from_command_line=False)
    add_subcommands(parser)
    return parser


def run_command(argv: list[str]) -> tuple[Report, int]:
    """Parse ``argv`` (without the program name) and run it."""
    try:
        options = vars(build_parser().parse_args(argv))
    except CommandError as exc:
        return Report("usage", ReportStatus.ERROR, {"error": str(exc)}), EXIT_USAGE
    return CommandService().execute(options)
