from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Iterable, Iterator, Sequence

from tropical_cp.core.exceptions import DecompositionError, DimensionMismatchError
from tropical_cp.core.scalars import INFINITY, ZERO, ScalarLike, TropScalar, trop_add


@dataclass(frozen=True)
class TropVector:
    entries: tuple[TropScalar, ...]

    def __post_init__(self):
        if len(self.entries) < 1:
            raise ValueError("a tropical vector needs at least one entry")

    @classmethod
    def of(cls, values: Iterable[ScalarLike]) -> TropVector:
        return cls(tuple(TropScalar.of(v) for v in values))

    @classmethod
    def infinite(cls, n: int) -> TropVector:
        return cls((INFINITY,) * n)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: int) -> TropScalar:
        return self.entries[index]

    def __iter__(self) -> Iterator[TropScalar]:
        return iter(self.entries)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, x in enumerate(self.entries) if x.is_finite)

    @property
    def zero_set(self) -> frozenset[int]:
        return frozenset(i for i, x in enumerate(self.entries) if x == ZERO)

    def __str__(self) -> str:
        return "[" + " ".join(str(x) for x in self.entries) + "]"


@dataclass(frozen=True)
class SymTropMatrix:
    """Symmetric n x n tropical matrix, stored as its upper triangle.

    Indices are 0-based; ``m[i, j] == m[j, i]`` for every pair.
    """

    n: int
    upper: tuple[TropScalar, ...] = field(repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a matrix needs dimension n >= 1")
        if len(self.upper) != self.n * (self.n + 1) // 2:
            raise ValueError(f"upper triangle of a {self.n}x{self.n} matrix has wrong length")

    @staticmethod
    def _offset(n: int, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return i * n - i * (i - 1) // 2 + (j - i)

    @classmethod
    def from_function(
        cls, n: int, entry: Callable[[int, int], ScalarLike]
    ) -> SymTropMatrix:
        upper = tuple(
            TropScalar.of(entry(i, j)) for i in range(n) for j in range(i, n)
        )
        return cls(n, upper)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[ScalarLike]]) -> SymTropMatrix:
        """Build from full rows, rejecting (not repairing) asymmetric input."""
        n = len(rows)
        parsed = [[TropScalar.of(x) for x in row] for row in rows]
        for i, row in enumerate(parsed):
            if len(row) != n:
                raise DimensionMismatchError(
                    f"row {i + 1} has {len(row)} entries, expected {n}"
                )
        for i in range(n):
            for j in range(i + 1, n):
                if parsed[i][j] != parsed[j][i]:
                    raise ValueError(
                        f"matrix is not symmetric at row {i + 1}, column {j + 1}: "
                        f"{parsed[i][j]} != {parsed[j][i]}"
                    )
        return cls.from_function(n, lambda i, j: parsed[i][j])

    @classmethod
    def zeros(cls, n: int) -> SymTropMatrix:
        return cls(n, (ZERO,) * (n * (n + 1) // 2))

    @classmethod
    def infinite(cls, n: int) -> SymTropMatrix:
        return cls(n, (INFINITY,) * (n * (n + 1) // 2))

    def __getitem__(self, index: tuple[int, int]) -> TropScalar:
        i, j = index
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"index ({i}, {j}) out of range for n={self.n}")
        return self.upper[self._offset(self.n, i, j)]

    @property
    def rows(self) -> list[list[TropScalar]]:
        return [[self[i, j] for j in range(self.n)] for i in range(self.n)]

    @property
    def diagonal(self) -> list[TropScalar]:
        return [self[i, i] for i in range(self.n)]

    def pairs(self, include_diagonal: bool = True) -> Iterator[tuple[int, int]]:
        start = 0 if include_diagonal else 1
        for i in range(self.n):
            for j in range(i + start, self.n):
                yield i, j

    def permuted(self, order: Sequence[int]) -> SymTropMatrix:
        """The matrix P A P^T whose i-th index is ``order[i]`` of this one."""
        return SymTropMatrix.from_function(
            len(order), lambda i, j: self[order[i], order[j]]
        )

    def principal_submatrix(self, indices: Sequence[int]) -> SymTropMatrix:
        return self.permuted(list(indices))

    def join_zero_vertex(self) -> SymTropMatrix:
        """Append a vertex whose row is all zeros (pattern G v w)."""
        n = self.n
        return SymTropMatrix.from_function(
            n + 1, lambda i, j: ZERO if j == n or i == n else self[i, j]
        )

    def dominates(self, other: SymTropMatrix) -> bool:
        """True when every entry of this matrix is >= the matching entry of ``other``."""
        _check_same_dimension([self, other])
        return all(a >= b for a, b in zip(self.upper, other.upper))

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.rows)


def rank_one_product(b: TropVector) -> SymTropMatrix:
    """The rank-one matrix b ⊙ bᵀ."""
    return SymTropMatrix.from_function(len(b), lambda i, j: b[i] * b[j])


def trop_matrix_sum(ms: Sequence[SymTropMatrix]) -> SymTropMatrix:
    """Entrywise tropical sum (minimum) of equally sized matrices."""
    if not ms:
        raise ValueError("cannot sum an empty list of matrices")
    _check_same_dimension(ms)
    upper = tuple(reduce(trop_add, column) for column in zip(*(m.upper for m in ms)))
    return SymTropMatrix(ms[0].n, upper)


def _check_same_dimension(ms: Sequence[SymTropMatrix]) -> None:
    sizes = {m.n for m in ms}
    if len(sizes) > 1:
        raise DimensionMismatchError(f"matrices of different sizes: {sorted(sizes)}")


@dataclass(frozen=True)
class Decomposition:
    """Factors b_1..b_r claimed to satisfy target = ⊕ b_i ⊙ b_iᵀ.

    The claim is checked when the object is built and the outcome kept in
    ``verified``; use :meth:`certified` where an unverified certificate is an
    error.
    """

    target: SymTropMatrix
    factors: tuple[TropVector, ...]
    verified: bool = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for factor in self.factors:
            if len(factor) != self.target.n:
                raise DimensionMismatchError(
                    f"factor of length {len(factor)} for a {self.target.n}x{self.target.n} target"
                )
        object.__setattr__(self, "verified", _reconstructs(self.target, self.factors))

    @classmethod
    def certified(
        cls, target: SymTropMatrix, factors: Iterable[TropVector]
    ) -> Decomposition:
        decomposition = cls(target, tuple(factors))
        if not decomposition.verified:
            raise DecompositionError(
                f"{decomposition.rank} factors do not reproduce the {target.n}x{target.n} target"
            )
        return decomposition

    @property
    def rank(self) -> int:
        return len(self.factors)

    def reconstruction(self) -> SymTropMatrix:
        if not self.factors:
            return SymTropMatrix.infinite(self.target.n)
        return trop_matrix_sum([rank_one_product(b) for b in self.factors])


def _reconstructs(target: SymTropMatrix, factors: Sequence[TropVector]) -> bool:
    if not factors:
        return target == SymTropMatrix.infinite(target.n)
    return trop_matrix_sum([rank_one_product(b) for b in factors]) == target


def verify_decomposition(d: Decomposition) -> bool:
    """Exact check that the factors of ``d`` reproduce its target."""
    return _reconstructs(d.target, d.factors)
