from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from tropical_cp.core.matrices import SymTropMatrix, TropVector
from tropical_cp.core.scalars import INFINITY, TropScalar

Row = dict[int, Fraction]


@dataclass(frozen=True)
class LinearConstraint:
    """sum(c * x_v) >= rhs, or == rhs when ``equality`` is set."""

    coefficients: tuple[tuple[int, Fraction], ...]
    rhs: Fraction
    equality: bool = False

    @classmethod
    def pair_sum(cls, k: int, l: int, value: Fraction, equality: bool = False) -> LinearConstraint:
        """x_k + x_l (2 x_k when k == l) against ``value``."""
        if k == l:
            return cls(((k, Fraction(2)),), Fraction(value), equality)
        return cls(((k, Fraction(1)), (l, Fraction(1))), Fraction(value), equality)

    @classmethod
    def bound(cls, k: int, value: Fraction, equality: bool = False) -> LinearConstraint:
        return cls(((k, Fraction(1)),), Fraction(value), equality)

    def as_row(self) -> Row:
        row: Row = {}
        for v, c in self.coefficients:
            row[v] = row.get(v, Fraction(0)) + c
        return {v: c for v, c in row.items() if c}


@dataclass(frozen=True)
class FactorConstraintSystem:
    """Exact linear system for one factor b of length ``n``.

    Coordinates outside ``support`` are infinite in any solution; the
    constraints mention support coordinates only.
    """

    n: int
    support: frozenset[int]
    constraints: tuple[LinearConstraint, ...] = field(default=())

    @classmethod
    def for_factor(
        cls,
        a: SymTropMatrix,
        zeros: Iterable[int],
        achieved: Iterable[tuple[int, int]],
    ) -> Optional[FactorConstraintSystem]:
        """System for a factor with the given zero coordinates that achieves
        a_kl exactly for every pair in ``achieved``.

        Returns None when the support holds a pair with an infinite entry,
        which no finite coordinates can dominate.
        """
        zeros = frozenset(zeros)
        achieved = frozenset(achieved)
        support = zeros | {v for pair in achieved for v in pair}
        ordered = sorted(support)

        constraints = [LinearConstraint.bound(v, Fraction(0), equality=True) for v in sorted(zeros)]
        for k, l in sorted(achieved):
            constraints.append(LinearConstraint.pair_sum(k, l, a[k, l].value, equality=True))
        for i, k in enumerate(ordered):
            for l in ordered[i:]:
                if a[k, l].is_infinite:
                    return None
                constraints.append(LinearConstraint.pair_sum(k, l, a[k, l].value))
        return cls(a.n, support, tuple(constraints))


def solve_factor_system(system: FactorConstraintSystem) -> Optional[TropVector]:
    """Exact solution of ``system`` or None when it is infeasible.

    Equalities are removed by substitution, the remaining inequalities by
    Fourier-Motzkin elimination; a point is then rebuilt backwards.
    """
    rows: list[tuple[Row, Fraction, bool]] = [
        (c.as_row(), c.rhs, c.equality) for c in system.constraints
    ]
    for v in _mentioned(rows):
        if v not in system.support:
            raise ValueError(f"constraint on coordinate {v + 1} outside the support")

    substitutions: list[tuple[int, Row, Fraction]] = []
    while True:
        pivot = next((r for r in rows if r[2] and r[0]), None)
        if pivot is None:
            break
        row, rhs, _ = pivot
        var = min(row)
        coefficient = row[var]
        # var = (rhs - sum(others)) / coefficient
        expression = {v: -c / coefficient for v, c in row.items() if v != var}
        constant = rhs / coefficient
        substitutions.append((var, expression, constant))
        rows = [_substitute(r, var, expression, constant) for r in rows if r is not pivot]

    inequalities: list[tuple[Row, Fraction]] = []
    for row, rhs, equality in rows:
        if not row:
            if (equality and rhs != 0) or (not equality and rhs > 0):
                return None
            continue
        inequalities.append((row, rhs))

    free = sorted(_mentioned([(r, b, False) for r, b in inequalities]))
    stages: list[tuple[int, list[tuple[Row, Fraction]]]] = []
    current = _dedupe(inequalities)
    for var in free:
        stages.append((var, current))
        current = _eliminate(current, var)
        if current is None:
            return None

    values: dict[int, Fraction] = {}
    for var, constraints in reversed(stages):
        values[var] = _pick_value(var, constraints, values)
    for var, expression, constant in reversed(substitutions):
        values[var] = constant + sum(
            (c * values.get(v, Fraction(0)) for v, c in expression.items()), Fraction(0)
        )
    for v in system.support:
        values.setdefault(v, Fraction(0))

    entries = [TropScalar(values[i]) if i in system.support else INFINITY for i in range(system.n)]
    return TropVector(tuple(entries))


def _mentioned(rows) -> set[int]:
    return {v for row, _, _ in rows for v in row}


def _substitute(
    constraint: tuple[Row, Fraction, bool], var: int, expression: Row, constant: Fraction
) -> tuple[Row, Fraction, bool]:
    row, rhs, equality = constraint
    if var not in row:
        return constraint
    c = row[var]
    updated = {v: x for v, x in row.items() if v != var}
    for v, e in expression.items():
        updated[v] = updated.get(v, Fraction(0)) + c * e
    return {v: x for v, x in updated.items() if x}, rhs - c * constant, equality


def _dedupe(constraints: list[tuple[Row, Fraction]]) -> list[tuple[Row, Fraction]]:
    """Scale each row so its first coefficient is +-1 and keep the tightest rhs."""
    tightest: dict[tuple, Fraction] = {}
    for row, rhs in constraints:
        scale = abs(row[min(row)])
        key = tuple(sorted((v, c / scale) for v, c in row.items()))
        value = rhs / scale
        if key not in tightest or value > tightest[key]:
            tightest[key] = value
    return [(dict(key), rhs) for key, rhs in tightest.items()]


def _eliminate(
    constraints: list[tuple[Row, Fraction]], var: int
) -> Optional[list[tuple[Row, Fraction]]]:
    lower, upper, rest = [], [], []
    for row, rhs in constraints:
        c = row.get(var, Fraction(0))
        if c > 0:
            lower.append((row, rhs))
        elif c < 0:
            upper.append((row, rhs))
        else:
            rest.append((row, rhs))

    combined = list(rest)
    for low_row, low_rhs in lower:
        for up_row, up_rhs in upper:
            p, q = low_row[var], -up_row[var]
            row: Row = {}
            for v in set(low_row) | set(up_row):
                if v == var:
                    continue
                x = q * low_row.get(v, Fraction(0)) + p * up_row.get(v, Fraction(0))
                if x:
                    row[v] = x
            combined.append((row, q * low_rhs + p * up_rhs))

    remaining = []
    for row, rhs in combined:
        if not row:
            if rhs > 0:
                return None
            continue
        remaining.append((row, rhs))
    return _dedupe(remaining)


def _pick_value(var: int, constraints: list[tuple[Row, Fraction]], values: dict[int, Fraction]) -> Fraction:
    """Largest lower bound on ``var`` given the later variables, else the smallest upper bound, else 0."""
    lows, highs = [], []
    for row, rhs in constraints:
        c = row.get(var, Fraction(0))
        if not c:
            continue
        rest = sum((x * values[v] for v, x in row.items() if v != var), Fraction(0))
        bound = (rhs - rest) / c
        (lows if c > 0 else highs).append(bound)
    if lows:
        return max(lows)
    if highs:
        return min(highs)
    return Fraction(0)
