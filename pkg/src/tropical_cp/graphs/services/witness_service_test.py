import pytest

from tropical_cp.core.exceptions import InvalidVertexError
from tropical_cp.core.matrices import SymTropMatrix
from tropical_cp.core.services.cp_analysis_service import CpAnalysisService
from tropical_cp.graphs.pattern_graph import PatternGraph, pattern_graph
from tropical_cp.graphs.services.witness_service import diameter_witness_matrix


class TestDiameterWitnessMatrix:
    def test_path_witness(self):
        a = diameter_witness_matrix(PatternGraph.path(4), 0, 3)
        assert a == SymTropMatrix.from_rows(
            [[0, 0, 2, 1], [0, 0, 0, 2], [2, 0, 0, 0], [1, 2, 0, 0]]
        )

    def test_witness_is_normalized_with_same_pattern(self):
        graph = PatternGraph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5)])
        a = diameter_witness_matrix(graph, 4, 0)
        assert CpAnalysisService.is_normalized(a)
        assert CpAnalysisService.is_completely_positive(a)
        assert pattern_graph(a) == graph
        assert a[0, 4] == 1

    @pytest.mark.parametrize("u, v", [(0, 0), (0, 1), (0, 4), (-1, 2)])
    def test_invalid_pairs(self, u, v):
        with pytest.raises(InvalidVertexError):
            diameter_witness_matrix(PatternGraph.path(4), u, v)
