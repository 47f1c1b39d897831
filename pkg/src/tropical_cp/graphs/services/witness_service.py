from tropical_cp.core.exceptions import InvalidVertexError
from tropical_cp.core.matrices import SymTropMatrix
from tropical_cp.graphs.pattern_graph import PatternGraph


def diameter_witness_matrix(graph: PatternGraph, u: int, v: int) -> SymTropMatrix:
    """Normalized CP matrix with pattern ``graph``: 0 on edges and the diagonal,
    1 at {u, v}, 2 at every other non-edge.

    When d(u, v) >= 3 its CP-rank exceeds cc(graph).
    """
    for w in (u, v):
        if not 0 <= w < graph.n:
            raise InvalidVertexError(f"vertex {w + 1} outside 1..{graph.n}")
    if u == v:
        raise InvalidVertexError("witness pair needs two distinct vertices")
    if graph.has_edge(u, v):
        raise InvalidVertexError(f"vertices {u + 1} and {v + 1} are adjacent")

    def entry(i: int, j: int) -> int:
        if i == j or graph.has_edge(i, j):
            return 0
        if {i, j} == {u, v}:
            return 1
        return 2

    return SymTropMatrix.from_function(graph.n, entry)
