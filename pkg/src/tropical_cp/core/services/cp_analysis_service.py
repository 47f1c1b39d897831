from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from tropical_cp.core.exceptions import (
    DecompositionError,
    NotCompletelyPositiveError,
    NotNormalizedError,
)
from tropical_cp.core.matrices import (
    Decomposition,
    SymTropMatrix,
    TropVector,
    rank_one_product,
)
from tropical_cp.core.scalars import INFINITY, ZERO, TropScalar

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
ONE = TropScalar(Fraction(1))


@dataclass(frozen=True)
class NormalizationRecord:
    """What C(A) removed from A: deleted infinite-diagonal indices and the
    half-diagonal shift subtracted from every surviving row and column."""

    original_n: int
    deleted_indices: frozenset[int]
    surviving_indices: tuple[int, ...]
    shifts: tuple[Fraction, ...]  # aligned with surviving_indices

    def denormalize(self, normalized: Optional[SymTropMatrix]) -> SymTropMatrix:
        """Rebuild A from C(A)."""
        position = {original: k for k, original in enumerate(self.surviving_indices)}

        def entry(i: int, j: int) -> TropScalar:
            if i not in position or j not in position:
                return INFINITY
            c = normalized[position[i], position[j]]
            return c * self.shifts[position[i]] * self.shifts[position[j]]

        return SymTropMatrix.from_function(self.original_n, entry)

    def lift_vector(self, factor: TropVector) -> TropVector:
        """Map a factor of C(A) to a factor of A: (c)_i = (b)_i + ½a_ii, ∞ at deleted rows."""
        lifted = [INFINITY] * self.original_n
        for k, original in enumerate(self.surviving_indices):
            lifted[original] = factor[k] * self.shifts[k]
        return TropVector(tuple(lifted))

    def lift_decomposition(
        self, decomposition: Optional[Decomposition], original: SymTropMatrix
    ) -> Decomposition:
        if decomposition is None:
            factors = [TropVector.infinite(self.original_n)]
        else:
            factors = [self.lift_vector(b) for b in decomposition.factors]
        return Decomposition.certified(original, factors)


class Normalization(NamedTuple):
    matrix: Optional[SymTropMatrix]  # None when every diagonal entry was infinite
    record: NormalizationRecord


class CpAnalysisService:
    """CP membership, rank-one characterisation, C(A) and Supp(A)."""

    @staticmethod
    def is_completely_positive(a: SymTropMatrix) -> bool:
        """2a_ij >= a_ii + a_jj for all i, j (tropically: a_ij ⊙ a_ij >= a_ii ⊙ a_jj)."""
        return all(
            a[i, j] ** 2 >= a[i, i] * a[j, j] for i, j in a.pairs(include_diagonal=False)
        )

    @staticmethod
    def is_normalized(a: SymTropMatrix) -> bool:
        """Zero diagonal and nonnegative (or infinite) off-diagonal entries."""
        return all(x == ZERO for x in a.diagonal) and all(
            a[i, j] >= ZERO for i, j in a.pairs(include_diagonal=False)
        )

    @classmethod
    def require_completely_positive(cls, a: SymTropMatrix) -> None:
        if not cls.is_completely_positive(a):
            raise NotCompletelyPositiveError(
                f"{a.n}x{a.n} matrix violates 2a_ij >= a_ii + a_jj"
            )

    @classmethod
    def require_normalized(cls, a: SymTropMatrix) -> None:
        if not cls.is_normalized(a):
            raise NotNormalizedError(
                f"{a.n}x{a.n} matrix is not normalized; apply normalize() first"
            )

    @classmethod
    def cp_rank_is_one(cls, a: SymTropMatrix) -> bool:
        cls.require_completely_positive(a)
        n = a.n
        for i in range(n):
            for k in range(i + 1, n):
                for j1 in range(n):
                    for j2 in range(j1 + 1, n):
                        if a[i, j1] * a[k, j2] != a[k, j1] * a[i, j2]:
                            return False
        return True

    @classmethod
    def extract_rank_one_factor(cls, a: SymTropMatrix) -> TropVector:
        """Recover b with b ⊙ bᵀ = A from the first row with a finite diagonal entry."""
        anchor = next((j for j in range(a.n) if a[j, j].is_finite), None)
        if anchor is None:
            return TropVector.infinite(a.n)
        half_anchor = a[anchor, anchor] ** -HALF
        b = TropVector(tuple(a[j, anchor] * half_anchor for j in range(a.n)))
        if rank_one_product(b) != a:
            raise DecompositionError("matrix does not have CP-rank one")
        return b

    @classmethod
    def normalize(cls, a: SymTropMatrix) -> Normalization:
        """C(A): drop infinite-diagonal indices, then subtract ½a_ii from row and column i."""
        cls.require_completely_positive(a)
        deleted = frozenset(i for i in range(a.n) if a[i, i].is_infinite)
        surviving = tuple(i for i in range(a.n) if i not in deleted)
        shifts = tuple(a[i, i].value * HALF for i in surviving)
        record = NormalizationRecord(a.n, deleted, surviving, shifts)
        if not surviving:
            logger.info(f"all {a.n} diagonal entries are infinite; C(A) is empty")
            return Normalization(None, record)

        unshift = [TropScalar(-s) for s in shifts]
        normalized = SymTropMatrix.from_function(
            len(surviving),
            lambda i, j: a[surviving[i], surviving[j]] * unshift[i] * unshift[j],
        )
        if deleted:
            logger.info(f"normalize deleted indices {sorted(deleted)}")
        return Normalization(normalized, record)

    @staticmethod
    def support(a: SymTropMatrix) -> SymTropMatrix:
        """Supp(A): 0 where a_ij = 0, 1 elsewhere (including infinite entries)."""
        return SymTropMatrix(a.n, tuple(ZERO if x == ZERO else ONE for x in a.upper))

    @staticmethod
    def is_zero_one(a: SymTropMatrix) -> bool:
        return all(x == ZERO or x == ONE for x in a.upper)