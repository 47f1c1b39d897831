"""Text formats for matrices (``.tmat``) and pattern graphs (``.graph``).

A matrix file holds ``n`` on its first line followed by ``n`` rows of ``n``
whitespace-separated tokens: ``inf``, an integer, ``p/q`` or a finite
decimal. A graph file holds ``n m`` followed by ``m`` lines ``i j`` with
1-based vertices. Blank lines and lines starting with ``#`` are ignored.
"""

import re
from fractions import Fraction
from typing import Iterator

from tropical_cp.core.exceptions import MatrixFormatError
from tropical_cp.core.matrices import SymTropMatrix, TropVector
from tropical_cp.core.scalars import INFINITY, TropScalar
from tropical_cp.graphs.pattern_graph import PatternGraph

TOKEN = re.compile(r"^(inf|[+-]?\d+|[+-]?\d+/\d+|[+-]?\d*\.\d+|[+-]?\d+\.\d*)$")


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            yield number, stripped


def parse_scalar(token: str, line: int = 0, column: int = 0) -> TropScalar:
    if not TOKEN.match(token):
        raise MatrixFormatError(
            "line %(line)s, column %(column)s: malformed token %(token)r",
            code="bad_token",
            params={"line": line, "column": column, "token": token},
        )
    if token == "inf":
        return INFINITY
    try:
        return TropScalar(Fraction(token))
    except ZeroDivisionError:
        raise MatrixFormatError(
            "line %(line)s, column %(column)s: zero denominator in %(token)r",
            code="bad_token",
            params={"line": line, "column": column, "token": token},
        )


def render_scalar(x: TropScalar) -> str:
    return str(x)


def render_vector(b: TropVector) -> list[str]:
    return [render_scalar(x) for x in b]


def _parse_header(lines: list[tuple[int, str]], fields: int, kind: str) -> list[int]:
    if not lines:
        raise MatrixFormatError(f"empty {kind} file", code="empty", params={"line": 1})
    number, header = lines[0]
    parts = header.split()
    if len(parts) != fields or not all(p.isdigit() for p in parts):
        raise MatrixFormatError(
            "line %(line)s: expected a %(kind)s header of %(fields)s non-negative integers",
            code="bad_header",
            params={"line": number, "kind": kind, "fields": fields},
        )
    return [int(p) for p in parts]


def parse_matrix(text: str) -> SymTropMatrix:
    lines = list(_content_lines(text))
    (n,) = _parse_header(lines, 1, "matrix")
    if n < 1:
        raise MatrixFormatError(
            "line %(line)s: dimension must be at least 1",
            code="bad_header",
            params={"line": lines[0][0]},
        )

    rows = lines[1:]
    if len(rows) != n:
        last = rows[-1][0] if rows else lines[0][0]
        raise MatrixFormatError(
            "line %(line)s: expected %(n)s rows, found %(found)s",
            code="row_count",
            params={"line": last, "n": n, "found": len(rows)},
        )

    parsed: list[list[TropScalar]] = []
    for number, row in rows:
        tokens = row.split()
        if len(tokens) != n:
            raise MatrixFormatError(
                "line %(line)s: expected %(n)s entries, found %(found)s",
                code="row_length",
                params={"line": number, "n": n, "found": len(tokens)},
            )
        parsed.append(
            [parse_scalar(t, number, column) for column, t in enumerate(tokens, start=1)]
        )

    for i in range(n):
        for j in range(i + 1, n):
            if parsed[i][j] != parsed[j][i]:
                raise MatrixFormatError(
                    "line %(line)s, column %(column)s: entry %(token)s differs from "
                    "%(mirror)s at row %(column)s, column %(row)s",
                    code="asymmetric",
                    params={
                        "line": rows[i][0],
                        "row": i + 1,
                        "column": j + 1,
                        "token": str(parsed[i][j]),
                        "mirror": str(parsed[j][i]),
                    },
                )
    return SymTropMatrix.from_function(n, lambda i, j: parsed[i][j])


def render_matrix(a: SymTropMatrix) -> str:
    """Canonical text: integers, ``p/q`` in lowest terms and ``inf``, single spaces."""
    body = "\n".join(" ".join(render_scalar(x) for x in row) for row in a.rows)
    return f"{a.n}\n{body}\n"


def parse_graph(text: str) -> PatternGraph:
    lines = list(_content_lines(text))
    n, m = _parse_header(lines, 2, "graph")
    edges = lines[1:]
    if len(edges) != m:
        raise MatrixFormatError(
            "line %(line)s: expected %(m)s edges, found %(found)s",
            code="edge_count",
            params={"line": edges[-1][0] if edges else lines[0][0], "m": m, "found": len(edges)},
        )

    seen: set[tuple[int, int]] = set()
    for number, line in edges:
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise MatrixFormatError(
                "line %(line)s: expected two vertex numbers", code="bad_edge", params={"line": number}
            )
        u, v = (int(p) for p in parts)
        for column, w in enumerate((u, v), start=1):
            if not 1 <= w <= n:
                raise MatrixFormatError(
                    "line %(line)s, column %(column)s: vertex %(token)s outside 1..%(n)s",
                    code="bad_vertex",
                    params={"line": number, "column": column, "token": str(w), "n": n},
                )
        if u == v:
            raise MatrixFormatError(
                "line %(line)s: loop at vertex %(token)s",
                code="loop",
                params={"line": number, "token": str(u)},
            )
        edge = (min(u, v) - 1, max(u, v) - 1)
        if edge in seen:
            raise MatrixFormatError(
                "line %(line)s: repeated edge %(token)s",
                code="repeated_edge",
                params={"line": number, "token": f"{u} {v}"},
            )
        seen.add(edge)
    return PatternGraph.from_edges(n, seen)


def render_graph(graph: PatternGraph) -> str:
    edges = "".join(f"{u + 1} {v + 1}\n" for u, v in graph.sorted_edges())
    return f"{graph.n} {len(graph.edges)}\n{edges}"


def looks_like_graph(text: str) -> bool:
    """True when the first content line is a two-number graph header."""
    first = next(_content_lines(text), None)
    return first is not None and len(first[1].split()) == 2
