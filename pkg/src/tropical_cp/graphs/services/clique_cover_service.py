from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from django.conf import settings

from tropical_cp.core.exceptions import InvalidCoverError
from tropical_cp.core.matrices import SymTropMatrix
from tropical_cp.core.services.cp_analysis_service import CpAnalysisService
from tropical_cp.graphs.pattern_graph import PatternGraph, pattern_graph

logger = logging.getLogger(__name__)

Clique = tuple[int, ...]


def canonical_order(cliques: Iterable[Iterable[int]]) -> tuple[Clique, ...]:
    """Cliques sorted by size descending, then lexicographically."""
    return tuple(sorted((tuple(sorted(c)) for c in cliques), key=lambda c: (-len(c), c)))


@dataclass(frozen=True)
class CliqueCover:
    """Vertex clique cover (K_q1, ..., K_qk, l K_1) with q1 >= ... >= qk >= 2."""

    n: int
    cliques: tuple[Clique, ...]

    def __post_init__(self):
        if any(len(c) == 0 for c in self.cliques):
            raise InvalidCoverError("a clique cover cannot contain an empty clique")
        object.__setattr__(self, "cliques", canonical_order(self.cliques))
        covered = {v for clique in self.cliques for v in clique}
        if covered != set(range(self.n)):
            missing = sorted(set(range(self.n)) - covered)
            raise InvalidCoverError(
                f"vertices {[v + 1 for v in missing]} are not covered"
                if missing
                else "cover mentions vertices outside the graph"
            )

    @property
    def sizes(self) -> list[int]:
        """q_1 >= ... >= q_k, the sizes of the cliques with at least two vertices."""
        return [len(c) for c in self.cliques if len(c) >= 2]

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def l(self) -> int:  # noqa: E743
        return sum(1 for c in self.cliques if len(c) == 1)

    @property
    def big_cliques(self) -> tuple[Clique, ...]:
        return self.cliques[: self.k]

    @property
    def singletons(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.cliques[self.k :])

    @property
    def is_partition(self) -> bool:
        return sum(len(c) for c in self.cliques) == self.n

    def is_valid_for(self, graph: PatternGraph) -> bool:
        return graph.n == self.n and all(graph.is_clique(c) for c in self.cliques)

    def require_valid_for(self, graph: PatternGraph) -> None:
        if graph.n != self.n:
            raise InvalidCoverError(f"cover of {self.n} vertices for a graph on {graph.n}")
        for clique in self.cliques:
            if not graph.is_clique(clique):
                raise InvalidCoverError(
                    f"{[v + 1 for v in clique]} is not a clique of the pattern graph"
                )

    def disjoint(self) -> CliqueCover:
        """Partition obtained by keeping each vertex only in its first clique.

        Dropping a shared vertex from a later clique never increases theta.
        """
        seen: set[int] = set()
        blocks = []
        for clique in self.cliques:
            block = tuple(v for v in clique if v not in seen)
            seen.update(block)
            if block:
                blocks.append(block)
        return CliqueCover(self.n, tuple(blocks))

    @property
    def theta(self) -> int:
        return theta(self)

    def __str__(self) -> str:
        parts = ["{" + ",".join(str(v + 1) for v in c) + "}" for c in self.cliques]
        return f"({', '.join(parts)})"


def theta(cover: CliqueCover) -> int:
    """k + sum_i (i-1) q_i + k l + floor(l^2 / 4)."""
    k, l = cover.k, cover.l
    return k + sum(i * q for i, q in enumerate(cover.sizes)) + k * l + l * l // 4


def theta_from_sizes(sizes: list[int], singletons: int) -> int:
    """theta for clique sizes taken in the given order (no re-sorting)."""
    k = len(sizes)
    return k + sum(i * q for i, q in enumerate(sizes)) + k * singletons + singletons**2 // 4


class ThetaBound(NamedTuple):
    bound: int
    cover: Optional[CliqueCover]
    empty_pattern_exact: bool


class CliqueCoverService:
    """Vertex clique covers: theta, the theta-minimising cover and the upper bound."""

    def __init__(self, max_n: Optional[int] = None):
        self.max_n = max_n or getattr(settings, "TROPCP_COVER_SEARCH_MAX_N", 12)

    def min_theta_cover(self, graph: PatternGraph) -> tuple[CliqueCover, int]:
        """Exact search over clique partitions; ties go to the canonically smallest cover.

        Searching partitions loses no minimiser: dropping a shared vertex from
        the later of two cliques strictly lowers theta, so every cover with
        minimal theta is a partition.
        """
        if graph.n > self.max_n:
            logger.warning(
                f"theta cover search on {graph.n} vertices exceeds the configured "
                f"{self.max_n}; this may take very long"
            )
        search = _ThetaSearch(graph)
        search.run()
        cover = CliqueCover(graph.n, search.best_cover)
        logger.info(f"min theta cover {cover} with theta {search.best_theta}")
        return cover, search.best_theta

    def min_vertex_clique_cover_size(self, graph: PatternGraph) -> int:
        """Fewest cliques covering every vertex (chromatic number of the complement)."""
        search = _BlockCountSearch(graph)
        search.run()
        return search.best

    def theta_bound(self, a: SymTropMatrix) -> ThetaBound:
        CpAnalysisService.require_normalized(a)
        graph = pattern_graph(a)
        if not graph.edges and a.n <= 4:
            return ThetaBound(a.n, None, True)
        cover, best = self.min_theta_cover(graph)
        ceiling = max(a.n, a.n * a.n // 4)
        if best > ceiling:
            logger.warning(f"theta {best} above max(n, n^2/4) = {ceiling}; clamping")
        return ThetaBound(min(best, ceiling), cover, False)

    def cp_rank_upper_bound(self, a: SymTropMatrix) -> int:
        return self.theta_bound(a).bound


def _theta_lower_bound(blocks: int, big_blocks: int) -> int:
    """Smallest theta any completion of a partial partition can reach.

    Blocks never disappear and blocks of size >= 2 stay big, so with final
    counts k >= big_blocks and k + l >= blocks, and q_i >= 2,
    theta >= k + k(k-1) + k l + floor(l^2/4).
    """
    best = math.inf
    for k in range(big_blocks, max(big_blocks, blocks) + 1):
        l = max(0, blocks - k)
        best = min(best, k * k + k * l + l * l // 4)
    return best


class _ThetaSearch:
    def __init__(self, graph: PatternGraph):
        self.graph = graph
        self.best_theta: float = math.inf
        self.best_cover: tuple[Clique, ...] = ()

    def run(self) -> None:
        self._extend(0, [])

    def _extend(self, vertex: int, blocks: list[list[int]]) -> None:
        if vertex == self.graph.n:
            cover = canonical_order(blocks)
            sizes = [len(c) for c in cover if len(c) >= 2]
            value = theta_from_sizes(sizes, len(cover) - len(sizes))
            if value < self.best_theta or (
                value == self.best_theta and cover < self.best_cover
            ):
                self.best_theta, self.best_cover = value, cover
            return

        big = sum(1 for b in blocks if len(b) >= 2)
        if _theta_lower_bound(len(blocks), big) > self.best_theta:
            return

        neighbours = self.graph.adjacency[vertex]
        for block in blocks:
            if all(u in neighbours for u in block):
                block.append(vertex)
                self._extend(vertex + 1, blocks)
                block.pop()
        blocks.append([vertex])
        self._extend(vertex + 1, blocks)
        blocks.pop()


class _BlockCountSearch:
    def __init__(self, graph: PatternGraph):
        self.graph = graph
        self.best = graph.n

    def run(self) -> None:
        if self.graph.n:
            self._extend(0, [])

    def _extend(self, vertex: int, blocks: list[list[int]]) -> None:
        if len(blocks) >= self.best:
            return
        if vertex == self.graph.n:
            self.best = len(blocks)
            return
        neighbours = self.graph.adjacency[vertex]
        for block in blocks:
            if all(u in neighbours for u in block):
                block.append(vertex)
                self._extend(vertex + 1, blocks)
                block.pop()
        blocks.append([vertex])
        self._extend(vertex + 1, blocks)
        blocks.pop()
