from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Optional

from django.conf import settings

from tropical_cp.core.exceptions import DecompositionError, SearchBudgetExceeded
from tropical_cp.core.matrices import Decomposition, SymTropMatrix, TropVector
from tropical_cp.core.scalars import INFINITY, ZERO, TropScalar
from tropical_cp.core.services.cp_analysis_service import CpAnalysisService
from tropical_cp.graphs.pattern_graph import pattern_graph
from tropical_cp.graphs.services.clique_cover_service import CliqueCover, CliqueCoverService
from tropical_cp.ranks.services.exact_rank_service import ExactRankService

logger = logging.getLogger(__name__)


class BlockCounts(NamedTuple):
    a1: int
    a2: int
    a3: int
    a4: int

    @property
    def total(self) -> int:
        return sum(self)


@dataclass(frozen=True)
class BlockPlan:
    """A clique partition relabelled so each clique occupies consecutive indices.

    ``permutation[p]`` is the original index placed at position p. Cliques
    of size >= 2 come first in canonical order, followed by the singletons.
    """

    cover: CliqueCover
    permutation: tuple[int, ...]

    @classmethod
    def for_cover(cls, cover: CliqueCover) -> BlockPlan:
        partition = cover.disjoint()
        order = tuple(v for clique in partition.cliques for v in clique)
        position = {v: p for p, v in enumerate(order)}
        relabelled = CliqueCover(
            partition.n, tuple(tuple(position[v] for v in c) for c in partition.cliques)
        )
        return cls(relabelled, order)

    @property
    def n(self) -> int:
        return self.cover.n

    @property
    def k(self) -> int:
        return self.cover.k

    @property
    def l(self) -> int:  # noqa: E743
        return self.cover.l

    @property
    def cliques(self) -> list[range]:
        """Index range of clique i: q_1 + ... + q_{i-1} up to q_1 + ... + q_i."""
        ranges, start = [], 0
        for q in self.cover.sizes:
            ranges.append(range(start, start + q))
            start += q
        return ranges

    @property
    def singletons(self) -> range:
        return range(self.n - self.l, self.n)

    @property
    def counts(self) -> BlockCounts:
        k, l = self.k, self.l
        return BlockCounts(
            k, sum(i * q for i, q in enumerate(self.cover.sizes)), k * l, l * l // 4
        )

    def relabel(self, a: SymTropMatrix) -> SymTropMatrix:
        return a.permuted(self.permutation)

    def restore(self, factor: TropVector) -> TropVector:
        entries = [INFINITY] * self.n
        for p, original in enumerate(self.permutation):
            entries[original] = factor[p]
        return TropVector(tuple(entries))


def _vector(n: int, values: dict[int, TropScalar]) -> TropVector:
    return TropVector(tuple(values.get(i, INFINITY) for i in range(n)))


def _dominates(a: SymTropMatrix, factor: TropVector) -> bool:
    support = sorted(factor.support)
    return all(
        factor[k] * factor[l] >= a[k, l] for i, k in enumerate(support) for l in support[i:]
    )


def build_block_A1(a: SymTropMatrix, plan: BlockPlan) -> list[TropVector]:
    """x^(i): 0 over clique i, infinite elsewhere."""
    return [_vector(a.n, {t: ZERO for t in clique}) for clique in plan.cliques]


def build_block_A2(a: SymTropMatrix, plan: BlockPlan) -> list[TropVector]:
    """y^(i,j,s) for i < j: 0 at vertex s of clique j and a_ts over clique i."""
    factors = []
    cliques = plan.cliques
    for j, target in enumerate(cliques):
        for s in target:
            for source in cliques[:j]:
                values = {t: a[t, s] for t in source}
                values[s] = ZERO
                factors.append(_vector(a.n, values))
    return factors


def build_block_A3(a: SymTropMatrix, plan: BlockPlan) -> list[TropVector]:
    """z^(i,j): 0 at singleton j and a_ts over clique i."""
    factors = []
    for source in plan.cliques:
        for s in plan.singletons:
            values = {t: a[t, s] for t in source}
            values[s] = ZERO
            factors.append(_vector(a.n, values))
    return factors


class DecompositionService:
    """Rank-one factors for A = A1 ⊕ A2 ⊕ A3 ⊕ A4 built from a vertex clique cover."""

    def __init__(
        self,
        block_search_max_l: Optional[int] = None,
        block_search_node_limit: Optional[int] = None,
        exact_rank_service: Optional[ExactRankService] = None,
    ):
        self.block_search_max_l = (
            block_search_max_l
            if block_search_max_l is not None
            else getattr(settings, "TROPCP_BLOCK_SEARCH_MAX_L", 6)
        )
        self.block_search_node_limit = block_search_node_limit or getattr(
            settings, "TROPCP_BLOCK_SEARCH_NODE_LIMIT", 200_000
        )
        self.exact_rank_service = exact_rank_service or ExactRankService()

    def build_block_A4(self, a: SymTropMatrix, plan: BlockPlan) -> list[TropVector]:
        """Factors covering the singleton-to-singleton entries."""
        l = plan.l
        if l <= 1:
            return []
        singletons = list(plan.singletons)
        finite = all(a[s, t].is_finite for s, t in combinations(singletons, 2))

        if l == 2 and finite and plan.k >= 1:
            s, t = singletons
            return [_vector(a.n, {s: ZERO, t: a[s, t]})]

        if l == 3 and finite and plan.k >= 1:
            pairs = list(combinations(singletons, 2))
            largest = max(a[s, t] for s, t in pairs)
            q, s = [pair for pair in pairs if a[pair] == largest][-1]
            (p,) = [v for v in singletons if v not in (q, s)]
            return [
                _vector(a.n, {p: ZERO, q: a[p, q]}),
                _vector(a.n, {p: a[p, s], q: a[q, s], s: ZERO}),
            ]

        return self._singleton_fallback(a, plan)

    def _singleton_fallback(self, a: SymTropMatrix, plan: BlockPlan) -> list[TropVector]:
        singletons = list(plan.singletons)
        factors = [
            _vector(a.n, {s: ZERO, t: a[s, t]})
            for s, t in combinations(singletons, 2)
            if a[s, t].is_finite
        ]
        factors = self._greedy_merge(a, factors)

        quarter = plan.l**2 // 4
        if 4 <= plan.l <= self.block_search_max_l and len(factors) > quarter:
            searched = self._search_singleton_block(a, singletons, quarter)
            if searched is not None:
                factors = searched
        elif plan.l >= 4 and len(factors) > quarter:
            logger.warning(
                f"singleton block of {plan.l} exceeds {self.block_search_max_l}; "
                f"keeping {len(factors)} merged pair factors"
            )
        return factors

    @staticmethod
    def _greedy_merge(a: SymTropMatrix, factors: list[TropVector]) -> list[TropVector]:
        """Replace two factors by their entrywise minimum while it still dominates A."""
        factors = list(factors)
        merged = True
        while merged:
            merged = False
            for i in range(len(factors)):
                for j in range(i + 1, len(factors)):
                    candidate = TropVector(
                        tuple(x + y for x, y in zip(factors[i], factors[j]))
                    )
                    if _dominates(a, candidate):
                        factors[i] = candidate
                        del factors[j]
                        merged = True
                        break
                if merged:
                    break
        return factors

    def _search_singleton_block(
        self, a: SymTropMatrix, singletons: list[int], target: int
    ) -> Optional[list[TropVector]]:
        """Exact decomposition of the singleton principal submatrix with at most
        ``target`` factors, embedded back into the coordinates of A."""
        block = a.principal_submatrix(singletons)
        searcher = ExactRankService(
            node_limit=self.block_search_node_limit,
            timeout_s=self.exact_rank_service.timeout_s,
            threads=self.exact_rank_service.threads,
        )
        try:
            found = searcher.cp_rank_leq(block, target)
        except SearchBudgetExceeded as exceeded:
            logger.warning(f"singleton block search stopped: {exceeded}")
            return None
        if found is None:
            return None
        return [
            _vector(a.n, {s: f[p] for p, s in enumerate(singletons) if f[p].is_finite})
            for f in found.factors
        ]

    def construct_decomposition(self, a: SymTropMatrix, cover: CliqueCover) -> Decomposition:
        CpAnalysisService.require_normalized(a)
        graph = pattern_graph(a)
        cover.require_valid_for(graph)

        if not graph.edges and a.n <= 4:
            return self._exact(a, a.n)

        plan = BlockPlan.for_cover(cover)
        if plan.k == 0 and plan.l in (2, 3):
            return self._exact(a, plan.counts.total)

        relabelled = plan.relabel(a)
        factors = (
            build_block_A1(relabelled, plan)
            + build_block_A2(relabelled, plan)
            + build_block_A3(relabelled, plan)
            + self.build_block_A4(relabelled, plan)
        )
        if plan.k == 0:
            covered = {i for f in factors for i in f.zero_set}
            factors += [
                _vector(a.n, {s: ZERO}) for s in plan.singletons if s not in covered
            ]

        decomposition = Decomposition.certified(a, [plan.restore(f) for f in factors])
        bound = plan.counts.total
        if decomposition.rank > bound:
            logger.warning(
                f"constructed {decomposition.rank} factors, above theta = {bound} for {cover}"
            )
        else:
            logger.info(f"constructed {decomposition.rank} factors for {cover} (theta {bound})")
        return decomposition

    def decompose(self, a: SymTropMatrix) -> tuple[Decomposition, Optional[CliqueCover]]:
        """Decompose any CP matrix: normalize, use a theta-minimising cover of
        G(C(A)), then lift the factors back to A."""
        normalization = CpAnalysisService.normalize(a)
        if normalization.matrix is None:
            return normalization.record.lift_decomposition(None, a), None
        c = normalization.matrix
        graph = pattern_graph(c)
        if not graph.edges and c.n <= 4:
            cover = CliqueCover(c.n, tuple((v,) for v in range(c.n)))
        else:
            cover, _ = CliqueCoverService().min_theta_cover(graph)
        decomposition = self.construct_decomposition(c, cover)
        return normalization.record.lift_decomposition(decomposition, a), cover

    def _exact(self, a: SymTropMatrix, r: int) -> Decomposition:
        found = self.exact_rank_service.cp_rank_leq(a, r)
        if found is None:
            raise DecompositionError(f"no decomposition with {r} factors exists")
        return found


def empty_pattern_01_decomposition(n: int) -> Decomposition:
    """v^(i): 0 at i and 1 elsewhere, for the 0/1 matrix with an empty pattern graph."""
    if n < 1:
        raise ValueError("n must be at least 1")
    one = TropScalar.of(1)
    target = SymTropMatrix.from_function(n, lambda i, j: ZERO if i == j else one)
    factors = [TropVector(tuple(ZERO if j == i else one for j in range(n))) for i in range(n)]
    return Decomposition.certified(target, factors)
