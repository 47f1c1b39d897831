"""Cross-checks between the bounds, the constructive decomposition and the
exact search on generated matrices."""

from fractions import Fraction
from itertools import combinations, product
from math import comb

import pytest
from factory.random import randgen

from tropical_cp.cli.services import corpus
from tropical_cp.core.factories import CpMatrixFactory
from tropical_cp.core.matrices import SymTropMatrix, TropVector, rank_one_product
from tropical_cp.core.scalars import INFINITY, TropScalar
from tropical_cp.core.services.cp_analysis_service import CpAnalysisService
from tropical_cp.graphs.factories import NormalizedMatrixFactory
from tropical_cp.graphs.pattern_graph import diameter_graphs, distance, pattern_graph
from tropical_cp.graphs.services.clique_cover_service import CliqueCoverService
from tropical_cp.graphs.services.edge_clique_cover_service import EdgeCliqueCoverService
from tropical_cp.graphs.services.witness_service import diameter_witness_matrix
from tropical_cp.ranks.services.decomposition_service import DecompositionService

OFF_DIAGONAL = [0, 1, 2, "inf"]
LATTICE = [TropScalar(Fraction(k, 2)) for k in range(5)] + [INFINITY]


def _brute_force_rank(a: SymTropMatrix) -> int:
    """Fewest dominating lattice vectors whose rank-one products attain every finite entry."""
    finite = [(k, l) for k, l in a.pairs() if a[k, l].is_finite]
    attained = set()
    for entries in product(LATTICE, repeat=a.n):
        m = rank_one_product(TropVector(entries))
        if m.dominates(a):
            attained.add(frozenset(pair for pair in finite if m[pair] == a[pair]))
    for r in range(1, a.n + 1):
        for chosen in combinations(attained, r):
            if frozenset().union(*chosen) == frozenset(finite):
                return r
    raise AssertionError(f"no decomposition of\n{a}\nwith at most {a.n} factors")


def _small_normalized(count: int, max_n: int = 4):
    return [
        NormalizedMatrixFactory(graph__n=n, entry_range=(1, 3))
        for n in range(2, max_n + 1)
        for _ in range(count)
    ]


def _random_normalized(count: int, max_n: int):
    return [
        NormalizedMatrixFactory(graph__n=randgen.randint(1, max_n), entry_range=(1, 3))
        for _ in range(count)
    ]


def _check_sandwich(service, instances):
    covers = CliqueCoverService()
    edge_covers = EdgeCliqueCoverService()
    for a in instances:
        rank, certificate = service.cp_rank_exact(a, a.n * a.n)
        assert edge_covers.edge_clique_cover_number(pattern_graph(a))[0] <= rank
        assert service.rank_lower_bound(a) <= rank
        assert rank <= covers.cp_rank_upper_bound(a)
        assert certificate.decomposition.verified


def _check_normalization(service, instances):
    for a in instances:
        rank = service.cp_rank_exact(a, 16)[0]
        normalized = CpAnalysisService.normalize(a).matrix
        if normalized is None:
            assert rank == 1
            continue
        again = CpAnalysisService.normalize(normalized)
        assert again.matrix == normalized
        assert all(shift == 0 for shift in again.record.shifts)
        assert rank == service.cp_rank_exact(normalized, 16)[0]


def _check_join_vertex(service, instances):
    for a in instances:
        rank = service.cp_rank_exact(a, a.n * a.n)[0]
        joined = a.join_zero_vertex()
        assert service.cp_rank_exact(joined, joined.n * joined.n)[0] == rank


def _check_principal_submatrix(service, instances):
    for a in instances:
        if a.n < 2:
            continue
        rank = service.cp_rank_exact(a, a.n * a.n)[0]
        sub = a.principal_submatrix(range(a.n - 1))
        assert service.cp_rank_exact(sub, a.n * a.n)[0] <= rank


class TestRankBounds:
    def test_lower_bound_rank_and_theta_are_ordered(self, exact_rank_service):
        _check_sandwich(exact_rank_service, _small_normalized(5))

    def test_rank_is_invariant_under_normalization(self, exact_rank_service):
        _check_normalization(exact_rank_service, CpMatrixFactory.build_batch(10, n=3, rank=2))

    def test_rank_is_invariant_under_relabelling(self, exact_rank_service):
        for a in _small_normalized(3):
            reversed_a = a.permuted(list(reversed(range(a.n))))
            assert (
                exact_rank_service.cp_rank_exact(a, 16)[0]
                == exact_rank_service.cp_rank_exact(reversed_a, 16)[0]
            )

    def test_joining_a_zero_vertex_keeps_the_rank(self, exact_rank_service):
        _check_join_vertex(exact_rank_service, _small_normalized(2, max_n=3))

    def test_principal_submatrices_never_need_more_factors(self, exact_rank_service):
        _check_principal_submatrix(exact_rank_service, _small_normalized(2))

    def test_theta_bound_never_exceeds_the_quarter_square(self):
        covers = CliqueCoverService()
        for a in _random_normalized(200, max_n=7):
            ceiling = max(a.n, a.n * a.n // 4)
            assert covers.cp_rank_upper_bound(a) <= ceiling
            if pattern_graph(a).edges or a.n > 4:
                assert covers.min_theta_cover(pattern_graph(a))[1] <= ceiling


@pytest.mark.slow
class TestRankBoundsAtScale:
    def test_sandwich(self, exact_rank_service):
        _check_sandwich(exact_rank_service, _random_normalized(200, max_n=4))

    def test_normalization(self, exact_rank_service):
        _check_normalization(exact_rank_service, CpMatrixFactory.build_batch(200))

    def test_join_vertex(self, exact_rank_service):
        _check_join_vertex(exact_rank_service, _random_normalized(50, max_n=4))

    def test_principal_submatrix(self, exact_rank_service):
        _check_principal_submatrix(exact_rank_service, _random_normalized(50, max_n=5))


class TestBruteForceOracle:
    @pytest.mark.parametrize("entries", list(product(OFF_DIAGONAL, repeat=3)))
    def test_three_by_three(self, exact_rank_service, entries):
        x, y, z = entries
        a = SymTropMatrix.from_rows([[0, x, y], [x, 0, z], [y, z, 0]])
        assert exact_rank_service.cp_rank_exact(a, 3)[0] == _brute_force_rank(a)

    @pytest.mark.parametrize("x", OFF_DIAGONAL)
    def test_two_by_two(self, exact_rank_service, x):
        a = SymTropMatrix.from_rows([[0, x], [x, 0]])
        assert exact_rank_service.cp_rank_exact(a, 2)[0] == _brute_force_rank(a)


class TestConstructiveDecomposition:
    def test_factor_count_per_block(self):
        service = DecompositionService(block_search_max_l=0)
        for a in _random_normalized(1000, max_n=7):
            d, cover = service.decompose(a)
            assert d.verified
            if not pattern_graph(a).edges and a.n <= 4:
                assert d.rank <= a.n
                continue
            k, l = cover.k, cover.l
            bound = k + sum(i * q for i, q in enumerate(cover.sizes)) + k * l + comb(l, 2)
            assert d.rank <= bound

    def test_decompose_any_cp_matrix(self):
        service = DecompositionService()
        for _ in range(100):
            a = CpMatrixFactory()
            d, _ = service.decompose(a)
            assert d.target == a
            assert d.verified


@pytest.mark.slow
class TestWitnessMatrices:
    def test_distant_pairs_push_rank_above_cc(self, exact_rank_service):
        edge_covers = EdgeCliqueCoverService()
        for graph in diameter_graphs(5):
            u, v = max(
                ((u, v) for u in range(graph.n) for v in range(u + 1, graph.n)),
                key=lambda pair: distance(graph, *pair),
            )
            a = diameter_witness_matrix(graph, u, v)
            rank = exact_rank_service.cp_rank_exact(a, graph.n**2)[0]
            assert rank > edge_covers.edge_clique_cover_number(graph)[0]

    def test_star_of_six(self, exact_rank_service):
        rank, certificate = exact_rank_service.cp_rank_exact(corpus.s6_matrix(), 8)
        assert rank == 6
        assert certificate.decomposition.verified
        assert EdgeCliqueCoverService().edge_clique_cover_number(
            pattern_graph(corpus.s6_matrix())
        )[0] == 5
