from .trop_vector_factory import TropVectorFactory
from .cp_matrix_factory import CpMatrixFactory

__all__ = ["TropVectorFactory", "CpMatrixFactory"]
