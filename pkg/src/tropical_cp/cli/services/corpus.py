"""Reference matrices with known CP-ranks, shared by the selftest and the tests."""

from fractions import Fraction

from tropical_cp.core.matrices import SymTropMatrix
from tropical_cp.core.scalars import ScalarLike

HALF = Fraction(1, 2)


def exca_a() -> SymTropMatrix:
    """b ⊙ bᵀ for b = [0, 1, 2]; CP-rank 1."""
    return SymTropMatrix.from_rows([[0, 1, 2], [1, 2, 3], [2, 3, 4]])


def exca_b() -> SymTropMatrix:
    """CP-rank 2; normalizes to [[0,1/2,1/2],[1/2,0,0],[1/2,0,0]]."""
    return SymTropMatrix.from_rows([[0, 1, 1], [1, 1, 1], [1, 1, 1]])


def exca_b_normalized() -> SymTropMatrix:
    return SymTropMatrix.from_rows([[0, HALF, HALF], [HALF, 0, 0], [HALF, 0, 0]])


def paw_matrix(a: ScalarLike = 1, b: ScalarLike = 2) -> SymTropMatrix:
    """Pattern graph is the paw (triangle 1-2-3, pendant 4 on 3); CP-rank 2 for a, b > 0."""
    return SymTropMatrix.from_rows(
        [[0, 0, 0, a], [0, 0, 0, b], [0, 0, 0, 0], [a, b, 0, 0]]
    )


def cprk6() -> SymTropMatrix:
    """Empty pattern graph on five vertices with CP-rank 6."""
    return SymTropMatrix.from_rows(
        [
            [0, 1, 1, 3, 3],
            [1, 0, 3, 1, 1],
            [1, 3, 0, 1, 1],
            [3, 1, 1, 0, 3],
            [3, 1, 1, 3, 0],
        ]
    )


def s6_matrix() -> SymTropMatrix:
    """cprk6() with a sixth vertex joined by zeros; its pattern is the star S_6."""
    return cprk6().join_zero_vertex()


def bowtie_d() -> SymTropMatrix:
    """Pattern graph is the bowtie (triangles 1-2-3 and 1-4-5); CP-rank above cc = 2."""
    return SymTropMatrix.from_rows(
        [
            [0, 0, 0, 0, 0],
            [0, 0, 0, 1, 2],
            [0, 0, 0, 2, 2],
            [0, 1, 2, 0, 0],
            [0, 2, 2, 0, 0],
        ]
    )


def p3_matrix(a: ScalarLike = 1) -> SymTropMatrix:
    """Path 1-2-3 as pattern graph, a > 0 between the endpoints."""
    return SymTropMatrix.from_rows([[0, 0, a], [0, 0, 0], [a, 0, 0]])


def empty_pattern_01(n: int) -> SymTropMatrix:
    return SymTropMatrix.from_function(n, lambda i, j: 0 if i == j else 1)
