from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional

from django.conf import settings
from django.db import models

from tropical_cp.core.exceptions import NotZeroOneError, SearchBudgetExceeded
from tropical_cp.core.matrices import Decomposition, SymTropMatrix, TropVector
from tropical_cp.core.services.cp_analysis_service import CpAnalysisService
from tropical_cp.graphs.pattern_graph import pattern_graph
from tropical_cp.graphs.services.clique_cover_service import CliqueCoverService
from tropical_cp.graphs.services.edge_clique_cover_service import EdgeCliqueCoverService
from tropical_cp.ranks.services.factor_system import (
    FactorConstraintSystem,
    solve_factor_system,
)

logger = logging.getLogger(__name__)

# Number of independent subtrees the search is split into before the
# branches are run, sequentially or on worker processes.
FRONTIER_WIDTH = 16
DEADLINE_CHECK_EVERY = 512


class RankStatus(models.TextChoices):
    OK = "ok", "Determined"
    NOT_CP = "not_cp", "Not completely positive"
    REFUTED = "refuted", "Refuted"
    UNDETERMINED = "undetermined", "Undetermined"


class Requirement(NamedTuple):
    """Entry a_kl (k <= l) some factor must achieve exactly."""

    k: int
    l: int  # noqa: E741
    value: Fraction

    @property
    def is_zero(self) -> bool:
        return self.value == 0


class FactorState(NamedTuple):
    """Zero coordinates of a factor and the positive entries it is designated to achieve."""

    zeros: frozenset[int]
    achieved: frozenset[tuple[int, int]]

    @property
    def is_empty(self) -> bool:
        return not self.zeros and not self.achieved


EMPTY_FACTOR = FactorState(frozenset(), frozenset())


@dataclass
class SearchStats:
    nodes: int = 0
    refutations: int = 0
    branches: int = 0
    undetermined_branches: int = 0
    elapsed_s: float = 0.0

    def absorb(self, other: SearchStats) -> None:
        self.nodes += other.nodes
        self.refutations += other.refutations

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "refutations": self.refutations,
            "branches": self.branches,
            "undetermined_branches": self.undetermined_branches,
            "elapsed_s": round(self.elapsed_s, 3),
        }


@dataclass(frozen=True)
class CoverAssignment:
    """Designated achiever of every requirement: ``achievers[t]`` is the index
    of the factor that attains ``requirements[t]`` exactly."""

    requirements: tuple[Requirement, ...]
    achievers: tuple[int, ...]

    @classmethod
    def from_factors(
        cls, requirements: tuple[Requirement, ...], factors: tuple[FactorState, ...]
    ) -> CoverAssignment:
        achievers = []
        for q in requirements:
            if q.is_zero:
                index = next(i for i, f in enumerate(factors) if {q.k, q.l} <= f.zeros)
            else:
                index = next(i for i, f in enumerate(factors) if (q.k, q.l) in f.achieved)
            achievers.append(index)
        return cls(requirements, tuple(achievers))


class LeqOutcome(NamedTuple):
    decomposition: Optional[Decomposition]
    assignment: Optional[CoverAssignment]
    stats: SearchStats


@dataclass
class RankAttempt:
    r: int
    status: RankStatus
    stats: SearchStats


@dataclass
class RankCertificate:
    """Upper certificate (a verified decomposition) and the exhaustion record
    of every smaller r that was refuted."""

    status: RankStatus
    rank: Optional[float]
    decomposition: Optional[Decomposition] = None
    lower_bound: Optional[int] = None
    assignment: Optional[CoverAssignment] = None
    attempts: list[RankAttempt] = field(default_factory=list)

    @property
    def refuted(self) -> list[int]:
        return [a.r for a in self.attempts if a.status == RankStatus.REFUTED]

    @property
    def stats(self) -> SearchStats:
        total = SearchStats()
        for attempt in self.attempts:
            total.absorb(attempt.stats)
            total.branches += attempt.stats.branches
            total.undetermined_branches += attempt.stats.undetermined_branches
            total.elapsed_s += attempt.stats.elapsed_s
        return total


def requirements_for(a: SymTropMatrix) -> tuple[Requirement, ...]:
    """Finite entries in search order: zero edges, diagonals, then positive
    entries ascending by value and lexicographically."""
    edges, diagonal, positive = [], [], []
    for k, l in a.pairs():
        entry = a[k, l]
        if entry.is_infinite:
            continue
        requirement = Requirement(k, l, entry.value)
        if k == l:
            diagonal.append(requirement)
        elif requirement.is_zero:
            edges.append(requirement)
        else:
            positive.append(requirement)
    positive.sort(key=lambda q: (q.value, q.k, q.l))
    return tuple(edges + diagonal + positive)


class _BranchSearch:
    """Depth-first assignment of requirements to factors for one subtree."""

    def __init__(
        self,
        a: SymTropMatrix,
        requirements: tuple[Requirement, ...],
        node_limit: Optional[int],
        deadline: Optional[float],
    ):
        self.a = a
        self.requirements = requirements
        self.node_limit = node_limit
        self.deadline = deadline
        self.stats = SearchStats()
        self._solutions: dict[FactorState, Optional[TropVector]] = {}

    def solve(self, state: FactorState) -> Optional[TropVector]:
        if state not in self._solutions:
            system = FactorConstraintSystem.for_factor(self.a, state.zeros, state.achieved)
            self._solutions[state] = None if system is None else solve_factor_system(system)
        return self._solutions[state]

    def covered(self, factors: tuple[FactorState, ...], requirement: Requirement) -> bool:
        if not requirement.is_zero:
            return False
        return any(
            requirement.k in f.zeros and requirement.l in f.zeros for f in factors
        )

    def next_open(self, factors: tuple[FactorState, ...], index: int) -> int:
        while index < len(self.requirements) and self.covered(factors, self.requirements[index]):
            index += 1
        return index

    def children(
        self, factors: tuple[FactorState, ...], requirement: Requirement
    ) -> Iterator[tuple[FactorState, ...]]:
        seen: set[FactorState] = set()
        for i, state in enumerate(factors):
            # factors in the same state are interchangeable
            if state in seen:
                continue
            seen.add(state)
            self._tick()
            if requirement.is_zero:
                updated = FactorState(state.zeros | {requirement.k, requirement.l}, state.achieved)
            else:
                updated = FactorState(
                    state.zeros, state.achieved | {(requirement.k, requirement.l)}
                )
            if self.solve(updated) is None:
                self.stats.refutations += 1
                continue
            yield factors[:i] + (updated,) + factors[i + 1 :]

    def run(self, factors: tuple[FactorState, ...], index: int) -> Optional[tuple[FactorState, ...]]:
        index = self.next_open(factors, index)
        if index == len(self.requirements):
            return factors
        for child in self.children(factors, self.requirements[index]):
            found = self.run(child, index + 1)
            if found is not None:
                return found
        return None

    def _tick(self) -> None:
        self.stats.nodes += 1
        if self.node_limit is not None and self.stats.nodes > self.node_limit:
            raise SearchBudgetExceeded(f"node limit {self.node_limit} reached", self.stats)
        if (
            self.deadline is not None
            and self.stats.nodes % DEADLINE_CHECK_EVERY == 0
            and time.time() > self.deadline
        ):
            raise _DeadlineReached(self.stats)


class _DeadlineReached(Exception):
    def __init__(self, stats: SearchStats):
        super().__init__("deadline reached")
        self.stats = stats


class BranchResult(NamedTuple):
    factors: Optional[tuple[FactorState, ...]]
    vectors: Optional[list[TropVector]]
    stats: SearchStats
    outcome: str  # "found", "refuted", "node_limit" or "deadline"


def run_branch(
    a: SymTropMatrix,
    requirements: tuple[Requirement, ...],
    factors: tuple[FactorState, ...],
    index: int,
    node_limit: Optional[int],
    deadline: Optional[float],
) -> BranchResult:
    """Search one frontier subtree; module level so worker processes can run it."""
    search = _BranchSearch(a, requirements, node_limit, deadline)
    try:
        found = search.run(factors, index)
    except SearchBudgetExceeded:
        return BranchResult(None, None, search.stats, "node_limit")
    except _DeadlineReached:
        return BranchResult(None, None, search.stats, "deadline")
    if found is None:
        return BranchResult(None, None, search.stats, "refuted")
    vectors = [search.solve(state) for state in found if not state.is_empty]
    return BranchResult(found, vectors, search.stats, "found")


class ExactRankService:
    """Exact CP-rank of small normalized matrices.

    ``cp_rank_leq`` assigns every finite entry a designated achiever among
    r factors and checks each factor's exact linear system, so a failed
    search is a proof that no r-factor decomposition exists. Resource guards
    raise ``SearchBudgetExceeded`` instead of reporting a refutation.
    """

    def __init__(
        self,
        node_limit: Optional[int] = None,
        timeout_s: Optional[float] = None,
        threads: Optional[int] = None,
    ):
        self.node_limit = node_limit or getattr(settings, "TROPCP_NODE_LIMIT", 10_000_000)
        self.timeout_s = timeout_s or getattr(settings, "TROPCP_TIMEOUT_S", 300.0)
        self.threads = threads or getattr(settings, "TROPCP_THREADS", 1)

    def rank_lower_bound(self, a: SymTropMatrix) -> int:
        """max(cc(G(A)), fewest cliques covering every vertex, 1)."""
        CpAnalysisService.require_normalized(a)
        graph = pattern_graph(a)
        cc, _ = EdgeCliqueCoverService().edge_clique_cover_number(graph)
        vertex_cover = CliqueCoverService().min_vertex_clique_cover_size(graph)
        return max(cc, vertex_cover, 1)

    def cp_rank_leq(self, a: SymTropMatrix, r: int) -> Optional[Decomposition]:
        """A verified decomposition with at most ``r`` factors, or None when none exists."""
        return self.search(a, r).decomposition

    def search(self, a: SymTropMatrix, r: int) -> LeqOutcome:
        CpAnalysisService.require_normalized(a)
        if r < 1:
            raise ValueError("r must be at least 1")

        started = time.time()
        deadline = started + self.timeout_s
        requirements = requirements_for(a)
        stats = SearchStats()

        try:
            frontier = self._frontier(a, requirements, r, deadline, stats)
        except _DeadlineReached as exceeded:
            stats.elapsed_s = time.time() - started
            raise SearchBudgetExceeded(
                f"deadline of {self.timeout_s}s reached while splitting the search", stats
            ) from exceeded
        except SearchBudgetExceeded as exceeded:
            stats.absorb(exceeded.stats)
            stats.undetermined_branches += 1
            stats.elapsed_s = time.time() - started
            raise SearchBudgetExceeded(
                f"node limit {self.node_limit} reached while splitting the search at r={r}",
                stats,
            ) from exceeded
        stats.branches = len(frontier)

        # one node budget per call, shared by the split and every branch
        found: Optional[BranchResult] = None
        results = self._run_frontier(a, requirements, frontier, deadline, stats.nodes)
        try:
            for position, result in enumerate(results, start=1):
                stats.absorb(result.stats)
                if result.outcome == "deadline":
                    stats.elapsed_s = time.time() - started
                    raise SearchBudgetExceeded(
                        f"deadline of {self.timeout_s}s reached at r={r}", stats
                    )
                if result.outcome == "node_limit" or stats.nodes > self.node_limit:
                    stats.undetermined_branches += 1
                    stats.elapsed_s = time.time() - started
                    raise SearchBudgetExceeded(
                        f"node limit {self.node_limit} reached in branch "
                        f"{position} of {stats.branches} at r={r}",
                        stats,
                    )
                if result.outcome == "found":
                    found = result
                    break
        finally:
            results.close()
        stats.elapsed_s = time.time() - started

        if found is not None:
            decomposition = Decomposition.certified(a, found.vectors)
            logger.info(
                f"r={r}: decomposition with {decomposition.rank} factors "
                f"({stats.nodes} nodes, {stats.elapsed_s:.2f}s)"
            )
            assignment = CoverAssignment.from_factors(requirements, found.factors)
            return LeqOutcome(decomposition, assignment, stats)
        logger.info(f"r={r}: refuted ({stats.nodes} nodes, {stats.refutations} infeasible factors)")
        return LeqOutcome(None, None, stats)

    def cp_rank_exact(self, a: SymTropMatrix, r_max: int) -> tuple[Optional[float], RankCertificate]:
        """Smallest r <= r_max with an r-factor decomposition of A.

        Returns ``math.inf`` for matrices that are not CP and None when the
        rank is not determined within r_max or the resource guards.
        """
        if not CpAnalysisService.is_completely_positive(a):
            return math.inf, RankCertificate(RankStatus.NOT_CP, math.inf)

        normalization = CpAnalysisService.normalize(a)
        if normalization.matrix is None:
            decomposition = normalization.record.lift_decomposition(None, a)
            return 1, RankCertificate(RankStatus.OK, 1, decomposition, lower_bound=1)

        c = normalization.matrix
        lower = self.rank_lower_bound(c)
        certificate = RankCertificate(RankStatus.UNDETERMINED, None, lower_bound=lower)
        for r in range(lower, r_max + 1):
            try:
                outcome = self.search(c, r)
            except SearchBudgetExceeded as exceeded:
                certificate.attempts.append(
                    RankAttempt(r, RankStatus.UNDETERMINED, exceeded.stats or SearchStats())
                )
                logger.warning(f"rank undetermined at r={r}: {exceeded}")
                return None, certificate

            if outcome.decomposition is None:
                certificate.attempts.append(RankAttempt(r, RankStatus.REFUTED, outcome.stats))
                continue

            certificate.attempts.append(RankAttempt(r, RankStatus.OK, outcome.stats))
            certificate.status = RankStatus.OK
            certificate.rank = outcome.decomposition.rank
            certificate.assignment = outcome.assignment
            certificate.decomposition = normalization.record.lift_decomposition(
                outcome.decomposition, a
            )
            return certificate.rank, certificate

        logger.warning(f"CP-rank exceeds r_max={r_max}; left undetermined")
        return None, certificate

    def zero_one_rank(self, a: SymTropMatrix) -> int:
        """CP-rank of a normalized 0/1 matrix: cc(G(A)) plus one factor per isolated vertex."""
        CpAnalysisService.require_normalized(a)
        if not CpAnalysisService.is_zero_one(a):
            raise NotZeroOneError(f"{a.n}x{a.n} matrix has entries other than 0 and 1")
        graph = pattern_graph(a)
        cc, _ = EdgeCliqueCoverService().edge_clique_cover_number(graph)
        isolated = sum(1 for neighbours in graph.adjacency if not neighbours)
        return cc + isolated

    def _frontier(
        self,
        a: SymTropMatrix,
        requirements: tuple[Requirement, ...],
        r: int,
        deadline: float,
        stats: SearchStats,
    ) -> list[tuple[tuple[FactorState, ...], int]]:
        """Breadth-first split of the search tree into at most a few dozen subtrees.

        The split does not depend on the worker count, so every run visits the
        branches in the same order and reports the same certificate.
        """
        splitter = _BranchSearch(a, requirements, self.node_limit, deadline)
        frontier = [((EMPTY_FACTOR,) * r, 0)]
        while len(frontier) < FRONTIER_WIDTH:
            expanded = []
            progressed = False
            for factors, index in frontier:
                index = splitter.next_open(factors, index)
                if index == len(requirements):
                    expanded.append((factors, index))
                    continue
                progressed = True
                expanded.extend(
                    (child, index + 1)
                    for child in splitter.children(factors, requirements[index])
                )
            frontier = expanded
            if not progressed or not frontier:
                break
        stats.absorb(splitter.stats)
        return frontier

    def _run_frontier(self, a, requirements, frontier, deadline, spent: int) -> Iterator[BranchResult]:
        """Branch results in frontier order.

        Run in turn, each branch gets what is left of the node budget after
        ``spent`` and the branches before it. Worker processes all get what is
        left after the split; the caller checks the running total, so both
        ways stop at the same branch.
        """
        if self.threads <= 1 or len(frontier) <= 1:
            for factors, index in frontier:
                result = run_branch(
                    a, requirements, factors, index, self.node_limit - spent, deadline
                )
                spent += result.stats.nodes
                yield result
            return

        budget = self.node_limit - spent
        executor = ProcessPoolExecutor(max_workers=self.threads)
        try:
            futures = [
                executor.submit(run_branch, a, requirements, factors, index, budget, deadline)
                for factors, index in frontier
            ]
            # index order keeps the reported certificate independent of timing
            for future in futures:
                yield future.result()
        finally:
            executor.shutdown(wait=False, cancel_futures=True)
