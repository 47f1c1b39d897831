from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable

import networkx as nx

from tropical_cp.core.exceptions import InvalidCoverError
from tropical_cp.graphs.pattern_graph import Edge, PatternGraph
from tropical_cp.graphs.services.clique_cover_service import Clique, canonical_order

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EdgeCliqueCover:
    """Cliques Q_1..Q_c whose edge sets jointly cover E(G)."""

    cliques: tuple[Clique, ...]

    def __post_init__(self):
        object.__setattr__(self, "cliques", canonical_order(self.cliques))

    @property
    def size(self) -> int:
        return len(self.cliques)

    def covered_edges(self) -> set[Edge]:
        return {edge for clique in self.cliques for edge in _clique_edges(clique)}

    def require_valid_for(self, graph: PatternGraph) -> None:
        for clique in self.cliques:
            if not graph.is_clique(clique):
                raise InvalidCoverError(
                    f"{[v + 1 for v in clique]} is not a clique of the graph"
                )
        uncovered = graph.edges - self.covered_edges()
        if uncovered:
            u, v = min(uncovered)
            raise InvalidCoverError(f"edge {u + 1}-{v + 1} is not covered")

    def __str__(self) -> str:
        return ", ".join("{" + ",".join(str(v + 1) for v in c) + "}" for c in self.cliques)


def _clique_edges(clique: Iterable[int]) -> list[Edge]:
    members = sorted(clique)
    return [(u, v) for i, u in enumerate(members) for v in members[i + 1 :]]


class EdgeCliqueCoverService:
    """Exact edge clique cover number cc(G).

    Maximal cliques come from networkx (Bron-Kerbosch); an optimal cover can
    always be taken from them. The set cover over edges is solved by
    branch-and-bound seeded with the greedy cover.
    """

    def edge_clique_cover_number(self, graph: PatternGraph) -> tuple[int, EdgeCliqueCover]:
        if not graph.edges:
            return 0, EdgeCliqueCover(())

        candidates = sorted(
            (tuple(sorted(c)) for c in nx.find_cliques(graph.nx_graph) if len(c) >= 2),
            key=lambda c: (-len(c), c),
        )
        edge_sets = [frozenset(_clique_edges(c)) for c in candidates]
        covering: dict[Edge, list[int]] = {e: [] for e in graph.edges}
        for index, edges in enumerate(edge_sets):
            for edge in edges:
                covering[edge].append(index)

        search = _SetCoverSearch(edge_sets, covering)
        search.best = self._greedy(graph.edges, edge_sets)
        search.run(frozenset(graph.edges), [])

        cover = EdgeCliqueCover(tuple(candidates[i] for i in search.best))
        cover.require_valid_for(graph)
        logger.info(
            f"cc = {cover.size} from {len(candidates)} maximal cliques "
            f"({search.nodes} nodes)"
        )
        return cover.size, cover

    @staticmethod
    def _greedy(edges: frozenset[Edge], edge_sets: list[frozenset[Edge]]) -> list[int]:
        uncovered = set(edges)
        chosen = []
        while uncovered:
            best = max(range(len(edge_sets)), key=lambda i: (len(edge_sets[i] & uncovered), -i))
            chosen.append(best)
            uncovered -= edge_sets[best]
        return chosen


class _SetCoverSearch:
    def __init__(self, edge_sets: list[frozenset[Edge]], covering: dict[Edge, list[int]]):
        self.edge_sets = edge_sets
        self.covering = covering
        self.largest = max(len(s) for s in edge_sets)
        self.best: list[int] = []
        self.nodes = 0

    def run(self, uncovered: frozenset[Edge], chosen: list[int]) -> None:
        self.nodes += 1
        if not uncovered:
            if len(chosen) < len(self.best):
                self.best = list(chosen)
            return
        if len(chosen) + math.ceil(len(uncovered) / self.largest) >= len(self.best):
            return
        # Branch on the uncovered edge with the fewest candidate cliques.
        edge = min(uncovered, key=lambda e: (len(self.covering[e]), e))
        for index in self.covering[edge]:
            chosen.append(index)
            self.run(uncovered - self.edge_sets[index], chosen)
            chosen.pop()
