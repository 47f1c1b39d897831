import logging
import time
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

from tropical_cp.core.matrices import SymTropMatrix, TropVector, rank_one_product
from tropical_cp.core.services.cp_analysis_service import CpAnalysisService
from tropical_cp.graphs.pattern_graph import (
    PatternGraph,
    diameter_graphs,
    distance,
    pattern_graph,
)
from tropical_cp.graphs.services.clique_cover_service import CliqueCover, CliqueCoverService
from tropical_cp.graphs.services.edge_clique_cover_service import EdgeCliqueCoverService
from tropical_cp.graphs.services.witness_service import diameter_witness_matrix
from tropical_cp.ranks.services.decomposition_service import empty_pattern_01_decomposition
from tropical_cp.ranks.services.exact_rank_service import ExactRankService, RankStatus
from tropical_cp.cli.services import corpus

logger = logging.getLogger(__name__)


class CaseResult(NamedTuple):
    name: str
    passed: bool
    detail: str
    elapsed_s: float


@dataclass(frozen=True)
class SelftestCase:
    name: str
    check: Callable[["SelftestService"], tuple[bool, str]]
    slow: bool = False


class SelftestService:
    """Runs every reference case with a known answer."""

    def __init__(self, exact_rank_service: Optional[ExactRankService] = None):
        self.ranks = exact_rank_service or ExactRankService()
        self.covers = CliqueCoverService()
        self.edge_covers = EdgeCliqueCoverService()

    def run(self, include_slow: bool = False) -> list[CaseResult]:
        results = []
        for case in CASES:
            if case.slow and not include_slow:
                continue
            started = time.perf_counter()
            try:
                passed, detail = case.check(self)
            except Exception as exc:
                logger.exception(f"selftest case {case.name} raised")
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            elapsed = time.perf_counter() - started
            level = logging.INFO if passed else logging.ERROR
            logger.log(level, f"{case.name}: {'pass' if passed else 'FAIL'} ({detail})")
            results.append(CaseResult(case.name, passed, detail, elapsed))
        return results

    def rank(self, a: SymTropMatrix, r_max: int = 8) -> Optional[float]:
        rank, _ = self.ranks.cp_rank_exact(a, r_max)
        return rank

    def cc(self, graph: PatternGraph) -> int:
        return self.edge_covers.edge_clique_cover_number(graph)[0]


def _rank_one(service: SelftestService) -> tuple[bool, str]:
    a = corpus.exca_a()
    b = CpAnalysisService.extract_rank_one_factor(a)
    ok = (
        CpAnalysisService.cp_rank_is_one(a)
        and rank_one_product(b) == a
        and b == TropVector.of([0, 1, 2])
        and CpAnalysisService.normalize(a).matrix == SymTropMatrix.zeros(3)
    )
    return ok, f"factor {b}"


def _exca_b(service: SelftestService) -> tuple[bool, str]:
    b = corpus.exca_b()
    normalized = CpAnalysisService.normalize(b).matrix
    rank = service.rank(b)
    ok = (
        not CpAnalysisService.cp_rank_is_one(b)
        and normalized == corpus.exca_b_normalized()
        and rank == 2
    )
    return ok, f"rank {rank}"


def _paw_theta(service: SelftestService) -> tuple[bool, str]:
    gamma_1 = CliqueCover(4, ((0, 1, 2), (3,)))
    gamma_2 = CliqueCover(4, ((0, 1), (2, 3)))
    _, best = service.covers.min_theta_cover(PatternGraph.paw())
    ok = gamma_1.theta == 2 and gamma_2.theta == 4 and best == 2
    return ok, f"theta {gamma_1.theta}, {gamma_2.theta}; minimum {best}"


def _paw_rank(service: SelftestService) -> tuple[bool, str]:
    rank = service.rank(corpus.paw_matrix(1, 2))
    return rank == 2, f"rank {rank}"


def _cprk6(service: SelftestService) -> tuple[bool, str]:
    a = corpus.cprk6()
    rank, certificate = service.ranks.cp_rank_exact(a, 8)
    ok = (
        rank == 6
        and certificate.refuted == [5]
        and certificate.decomposition is not None
        and certificate.decomposition.verified
    )
    return ok, f"rank {rank}, refuted {certificate.refuted}"


def _empty_pattern(service: SelftestService) -> tuple[bool, str]:
    details, ok = [], True
    for n in (3, 4, 5):
        a = corpus.empty_pattern_01(n)
        zero_one = service.ranks.zero_one_rank(a)
        exact = service.rank(a)
        built = empty_pattern_01_decomposition(n)
        ok &= zero_one == n and exact == n and built.verified and built.rank == n
        details.append(f"n={n}: {zero_one}/{exact}")
    return ok, ", ".join(details)


def _edge_clique_covers(service: SelftestService) -> tuple[bool, str]:
    expected = {
        "paw": (PatternGraph.paw(), 2),
        "S6": (PatternGraph.star(6), 5),
        "bowtie": (PatternGraph.bowtie(), 2),
        "P3": (PatternGraph.path(3), 2),
    }
    expected.update({f"K{n}": (PatternGraph.complete(n), 1) for n in range(2, 9)})
    found = {name: service.cc(graph) for name, (graph, _) in expected.items()}
    ok = all(found[name] == value for name, (_, value) in expected.items())
    return ok, ", ".join(f"{name}={value}" for name, value in found.items())


def _bowtie(service: SelftestService) -> tuple[bool, str]:
    d = corpus.bowtie_d()
    rank = service.rank(d)
    ok = rank is not None and rank > 2 and service.cc(pattern_graph(d)) == 2
    return ok, f"rank {rank}"


def _diameter_witnesses(service: SelftestService) -> tuple[bool, str]:
    checked = 0
    for graph in diameter_graphs(5):
        u, v = max(
            ((u, v) for u in range(graph.n) for v in range(u + 1, graph.n)),
            key=lambda pair: distance(graph, *pair),
        )
        rank = service.rank(diameter_witness_matrix(graph, u, v), r_max=graph.n**2)
        if rank is None or rank <= service.cc(graph):
            return False, f"{graph}: rank {rank}"
        checked += 1
    return checked > 0, f"{checked} graphs"


def _s6_chain(service: SelftestService) -> tuple[bool, str]:
    a = corpus.s6_matrix()
    rank, certificate = service.ranks.cp_rank_exact(a, 8)
    cc = service.cc(pattern_graph(a))
    ok = rank == 6 and cc == 5 and certificate.status == RankStatus.OK
    return ok, f"rank {rank}, cc {cc}"


CASES = [
    SelftestCase("rank_one_factorization", _rank_one),
    SelftestCase("normalized_rank_two", _exca_b),
    SelftestCase("paw_theta", _paw_theta),
    SelftestCase("paw_rank", _paw_rank),
    SelftestCase("empty_pattern_rank_six", _cprk6),
    SelftestCase("empty_pattern_01", _empty_pattern),
    SelftestCase("edge_clique_covers", _edge_clique_covers),
    SelftestCase("bowtie_rank_above_cc", _bowtie),
    SelftestCase("diameter_witnesses", _diameter_witnesses, slow=True),
    SelftestCase("star_join_chain", _s6_chain, slow=True),
]
