from .pattern_graph_factory import PatternGraphFactory
from .normalized_matrix_factory import NormalizedMatrixFactory

__all__ = ["PatternGraphFactory", "NormalizedMatrixFactory"]
