import logging
import random
from fractions import Fraction

from tropical_cp.core.matrices import SymTropMatrix
from tropical_cp.core.scalars import INFINITY, ZERO, TropScalar
from tropical_cp.graphs.pattern_graph import PatternGraph

logger = logging.getLogger(__name__)


def generate_instance(
    graph: PatternGraph,
    seed: int,
    entry_range: tuple[int, int] = (1, 6),
    denominator: int = 2,
    infinite_rate: float = 0.0,
) -> SymTropMatrix:
    """Random normalized CP matrix whose pattern graph is ``graph``.

    Off-edge entries are ``randint(*entry_range) / denominator`` (or infinity
    with probability ``infinite_rate``), drawn in row-major order from a
    generator seeded with ``seed``.
    """
    low, high = entry_range
    if low < 1 or high < low:
        raise ValueError(f"entry range {entry_range} must satisfy 1 <= low <= high")
    if denominator < 1:
        raise ValueError("denominator must be positive")

    rng = random.Random(seed)
    entries: dict[tuple[int, int], TropScalar] = {}
    for i in range(graph.n):
        for j in range(i + 1, graph.n):
            if graph.has_edge(i, j):
                continue
            if infinite_rate and rng.random() < infinite_rate:
                entries[i, j] = INFINITY
            else:
                entries[i, j] = TropScalar(Fraction(rng.randint(low, high), denominator))

    def entry(i: int, j: int) -> TropScalar:
        if i == j or graph.has_edge(i, j):
            return ZERO
        return entries[min(i, j), max(i, j)]

    logger.debug(f"generated instance for {graph} with seed {seed}")
    return SymTropMatrix.from_function(graph.n, entry)
