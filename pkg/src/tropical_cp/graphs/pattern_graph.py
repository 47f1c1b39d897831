from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable

import networkx as nx

from tropical_cp.core.exceptions import InvalidVertexError
from tropical_cp.core.matrices import SymTropMatrix
from tropical_cp.core.scalars import ZERO

Edge = tuple[int, int]


@dataclass(frozen=True)
class PatternGraph:
    """Simple undirected graph on vertices 0..n-1.

    Edges are stored as sorted pairs. Algorithms run on the networkx view
    returned by :attr:`nx_graph`.
    """

    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise InvalidVertexError(f"loop at vertex {u + 1}")
            for w in (u, v):
                if not 0 <= w < self.n:
                    raise InvalidVertexError(f"vertex {w + 1} outside 1..{self.n}")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> PatternGraph:
        return cls(n, frozenset(tuple(e) for e in edges))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> PatternGraph:
        order = {v: k for k, v in enumerate(sorted(graph.nodes))}
        return cls.from_edges(len(order), ((order[u], order[v]) for u, v in graph.edges))

    @classmethod
    def empty(cls, n: int) -> PatternGraph:
        return cls(n, frozenset())

    @classmethod
    def complete(cls, n: int) -> PatternGraph:
        return cls.from_edges(n, combinations(range(n), 2))

    @classmethod
    def path(cls, n: int) -> PatternGraph:
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def star(cls, n: int) -> PatternGraph:
        """Star S_n: leaves 0..n-2 joined to the centre n-1 (E_{n-1} v w)."""
        return cls.from_edges(n, ((i, n - 1) for i in range(n - 1)))

    @classmethod
    def paw(cls) -> PatternGraph:
        """Triangle 0-1-2 with the pendant vertex 3 hanging off 2."""
        return cls.from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)])

    @classmethod
    def bowtie(cls) -> PatternGraph:
        """Two triangles 0-1-2 and 0-3-4 sharing vertex 0."""
        return cls.from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])

    @cached_property
    def nx_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(self.nx_graph.neighbors(v)) for v in range(self.n))

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vertices = list(vertices)
        return all(self.has_edge(u, v) for u, v in combinations(vertices, 2))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def __str__(self) -> str:
        edges = ", ".join(f"{u + 1}-{v + 1}" for u, v in self.sorted_edges())
        return f"PatternGraph(n={self.n}, edges=[{edges}])"


def pattern_graph(a: SymTropMatrix) -> PatternGraph:
    """G(A): {i, j} is an edge exactly when the off-diagonal entry a_ij is the real 0."""
    return PatternGraph.from_edges(
        a.n, ((i, j) for i, j in a.pairs(include_diagonal=False) if a[i, j] == ZERO)
    )


def diameter(graph: PatternGraph) -> int | float:
    """Largest shortest-path distance; ``math.inf`` when disconnected, 0 for one vertex."""
    if graph.n == 1:
        return 0
    if not nx.is_connected(graph.nx_graph):
        return math.inf
    lengths = dict(nx.all_pairs_shortest_path_length(graph.nx_graph))
    return max(max(row.values()) for row in lengths.values())


def distance(graph: PatternGraph, u: int, v: int) -> int | float:
    try:
        return nx.shortest_path_length(graph.nx_graph, u, v)
    except nx.NetworkXNoPath:
        return math.inf


def induced_subgraph(graph: PatternGraph, vertices: Iterable[int]) -> PatternGraph:
    """Subgraph on ``vertices``, relabelled 0..|S|-1 in increasing order."""
    chosen = sorted(set(vertices))
    for v in chosen:
        if not 0 <= v < graph.n:
            raise InvalidVertexError(f"vertex {v + 1} outside 1..{graph.n}")
    position = {v: k for k, v in enumerate(chosen)}
    return PatternGraph.from_edges(
        len(chosen),
        (
            (position[u], position[v])
            for u, v in graph.edges
            if u in position and v in position
        ),
    )


def join_vertex(graph: PatternGraph) -> PatternGraph:
    """G v w: a new vertex n adjacent to every existing vertex."""
    return PatternGraph.from_edges(
        graph.n + 1, list(graph.edges) + [(v, graph.n) for v in range(graph.n)]
    )


def diameter_graphs(max_n: int, min_diameter: int = 3) -> list[PatternGraph]:
    """Connected graphs with at most ``max_n`` vertices (one per isomorphism class)
    whose diameter is at least ``min_diameter``, from the networkx graph atlas."""
    if max_n > 7:
        raise ValueError("the graph atlas covers graphs with at most 7 vertices")
    found = []
    for graph in nx.graph_atlas_g():
        if graph.number_of_nodes() < 2 or graph.number_of_nodes() > max_n:
            continue
        if not nx.is_connected(graph):
            continue
        if nx.diameter(graph) >= min_diameter:
            found.append(PatternGraph.from_networkx(graph))
    return found
