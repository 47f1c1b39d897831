import math

import pytest

from tropical_cp.cli.services import corpus
from tropical_cp.core.exceptions import InvalidVertexError
from tropical_cp.core.matrices import SymTropMatrix
from tropical_cp.graphs.factories import PatternGraphFactory
from tropical_cp.graphs.pattern_graph import (
    PatternGraph,
    diameter,
    diameter_graphs,
    distance,
    induced_subgraph,
    join_vertex,
    pattern_graph,
)


class TestPatternGraph:
    def test_edges_are_stored_sorted(self):
        graph = PatternGraph.from_edges(3, [(2, 0), (1, 2)])
        assert graph.sorted_edges() == [(0, 2), (1, 2)]
        assert graph.has_edge(0, 2) and graph.has_edge(2, 0)
        assert not graph.has_edge(0, 1)

    def test_loops_and_foreign_vertices_are_rejected(self):
        with pytest.raises(InvalidVertexError):
            PatternGraph.from_edges(3, [(1, 1)])
        with pytest.raises(InvalidVertexError):
            PatternGraph.from_edges(3, [(0, 3)])

    def test_named_graphs(self):
        assert len(PatternGraph.complete(5).edges) == 10
        assert PatternGraph.path(4).sorted_edges() == [(0, 1), (1, 2), (2, 3)]
        assert PatternGraph.star(4).sorted_edges() == [(0, 3), (1, 3), (2, 3)]
        assert PatternGraph.paw().is_clique([0, 1, 2])
        assert not PatternGraph.paw().is_clique([1, 2, 3])
        assert PatternGraph.bowtie().adjacency[0] == frozenset({1, 2, 3, 4})

    def test_str_is_one_based(self):
        assert str(PatternGraph.path(3)) == "PatternGraph(n=3, edges=[1-2, 2-3])"

    def test_factory_graphs_are_simple(self):
        for _ in range(20):
            graph = PatternGraphFactory()
            assert all(u < v < graph.n for u, v in graph.edges)
            assert graph.nx_graph.number_of_nodes() == graph.n


class TestPatternGraphOfMatrix:
    def test_paw_pattern(self, paw_matrix):
        assert pattern_graph(paw_matrix) == PatternGraph.paw()

    def test_only_real_zeros_are_edges(self):
        a = SymTropMatrix.from_rows([[0, "inf", 0], ["inf", 0, 1], [0, 1, 0]])
        assert pattern_graph(a).sorted_edges() == [(0, 2)]

    def test_star_pattern_of_joined_matrix(self, s6_matrix, cprk6):
        assert pattern_graph(cprk6) == PatternGraph.empty(5)
        assert pattern_graph(s6_matrix) == PatternGraph.star(6)
        assert pattern_graph(corpus.bowtie_d()) == PatternGraph.bowtie()


class TestGraphOperations:
    def test_diameter_and_distance(self):
        assert diameter(PatternGraph.path(4)) == 3
        assert diameter(PatternGraph.complete(3)) == 1
        assert diameter(PatternGraph.empty(1)) == 0
        assert diameter(PatternGraph.empty(2)) == math.inf
        assert distance(PatternGraph.path(4), 0, 3) == 3
        assert distance(PatternGraph.empty(2), 0, 1) == math.inf

    def test_induced_subgraph_relabels(self):
        assert induced_subgraph(PatternGraph.paw(), [3, 0, 2]) == PatternGraph.path(3)
        with pytest.raises(InvalidVertexError):
            induced_subgraph(PatternGraph.paw(), [4])

    def test_join_vertex(self):
        assert join_vertex(PatternGraph.empty(5)) == PatternGraph.star(6)
        assert join_vertex(PatternGraph.complete(3)) == PatternGraph.complete(4)

    def test_diameter_graphs(self):
        small = diameter_graphs(4)
        assert len(small) == 1
        assert diameter(small[0]) == 3
        assert all(diameter(graph) >= 3 for graph in diameter_graphs(6))

    def test_diameter_graphs_limit(self):
        with pytest.raises(ValueError):
            diameter_graphs(8)
