from itertools import combinations

import pytest

from tropical_cp.core.exceptions import InvalidCoverError, NotNormalizedError
from tropical_cp.core.matrices import SymTropMatrix
from tropical_cp.graphs.factories import PatternGraphFactory
from tropical_cp.graphs.pattern_graph import PatternGraph
from tropical_cp.graphs.services.clique_cover_service import (
    CliqueCover,
    CliqueCoverService,
    canonical_order,
    theta,
    theta_from_sizes,
)


class TestCliqueCover:
    def test_cliques_are_kept_in_canonical_order(self):
        cover = CliqueCover(5, ((4,), (2, 3), (1, 0)))
        assert cover.cliques == ((0, 1), (2, 3), (4,))
        assert canonical_order([[3], [2, 1, 0]]) == ((0, 1, 2), (3,))

    def test_sizes_and_counts(self):
        cover = CliqueCover(6, ((0, 1, 2), (3, 4), (5,)))
        assert cover.sizes == [3, 2]
        assert cover.k == 2
        assert cover.l == 1
        assert cover.big_cliques == ((0, 1, 2), (3, 4))
        assert cover.singletons == (5,)
        assert cover.is_partition

    def test_uncovered_vertex_is_rejected(self):
        with pytest.raises(InvalidCoverError):
            CliqueCover(3, ((0, 1),))
        with pytest.raises(InvalidCoverError):
            CliqueCover(2, ((0, 1, 2),))
        with pytest.raises(InvalidCoverError):
            CliqueCover(1, ((0,), ()))

    def test_validity_for_a_graph(self):
        paw = PatternGraph.paw()
        assert CliqueCover(4, ((0, 1, 2), (3,))).is_valid_for(paw)
        bad = CliqueCover(4, ((1, 2, 3), (0,)))
        assert not bad.is_valid_for(paw)
        with pytest.raises(InvalidCoverError):
            bad.require_valid_for(paw)
        with pytest.raises(InvalidCoverError):
            CliqueCover(3, ((0, 1, 2),)).require_valid_for(paw)

    def test_disjoint_keeps_first_occurrence(self):
        cover = CliqueCover(4, ((0, 1, 2), (2, 3)))
        assert not cover.is_partition
        disjoint = cover.disjoint()
        assert disjoint.cliques == ((0, 1, 2), (3,))
        assert disjoint.theta <= cover.theta

    def test_str_is_one_based(self):
        assert str(CliqueCover(4, ((0, 1, 2), (3,)))) == "({1,2,3}, {4})"


class TestTheta:
    def test_paw_covers(self):
        assert theta(CliqueCover(4, ((0, 1, 2), (3,)))) == 2
        assert theta(CliqueCover(4, ((0, 1), (2, 3)))) == 4

    def test_complete_and_empty(self):
        assert CliqueCover(6, (tuple(range(6)),)).theta == 1
        assert CliqueCover(5, tuple((v,) for v in range(5))).theta == 6
        assert CliqueCover(4, tuple((v,) for v in range(4))).theta == 4

    def test_theta_from_sizes(self):
        assert theta_from_sizes([3, 2], 1) == 2 + 2 + 2 + 0
        assert theta_from_sizes([], 7) == 12


class TestCliqueCoverService:
    def test_min_theta_cover_of_paw(self):
        service = CliqueCoverService()
        cover, value = service.min_theta_cover(PatternGraph.paw())
        assert value == 2
        assert cover.cliques == ((0, 1, 2), (3,))

    def test_min_theta_cover_of_complete_graph(self):
        service = CliqueCoverService()
        cover, value = service.min_theta_cover(PatternGraph.complete(5))
        assert value == 1
        assert cover.k == 1

    def test_min_theta_cover_of_path(self):
        service = CliqueCoverService()
        cover, value = service.min_theta_cover(PatternGraph.path(4))
        assert value == 4
        # every partition of P4 ties; the canonically smallest one wins
        assert cover.cliques == ((0,), (1,), (2,), (3,))

    def test_min_theta_matches_exhaustive_partitions(self):
        service = CliqueCoverService()
        for _ in range(25):
            graph = PatternGraphFactory()
            cover, value = service.min_theta_cover(graph)
            assert cover.is_partition
            assert cover.is_valid_for(graph)
            assert cover.theta == value
            assert value == min(
                c.theta for c in _clique_partitions(graph)
            )

    @pytest.mark.parametrize(
        "graph",
        [PatternGraph.paw(), PatternGraph.path(4), PatternGraph.bowtie(), PatternGraph.star(5)],
        ids=["paw", "p4", "bowtie", "s5"],
    )
    def test_overlapping_covers_never_reach_the_minimum(self, graph):
        cover, value = CliqueCoverService().min_theta_cover(graph)
        covers = _all_clique_covers(graph)
        assert min(c.theta for c in covers) == value
        minimisers = [c for c in covers if c.theta == value]
        assert all(c.is_partition for c in minimisers)
        assert cover.cliques == min(c.cliques for c in minimisers)

    def test_overlapping_covers_never_reach_the_minimum_on_random_graphs(self):
        service = CliqueCoverService()
        for _ in range(10):
            graph = PatternGraphFactory(n=4)
            _, value = service.min_theta_cover(graph)
            overlapping = [c for c in _all_clique_covers(graph) if not c.is_partition]
            assert all(c.theta > value for c in overlapping)

    def test_min_vertex_clique_cover_size(self):
        service = CliqueCoverService()
        assert service.min_vertex_clique_cover_size(PatternGraph.paw()) == 2
        assert service.min_vertex_clique_cover_size(PatternGraph.empty(5)) == 5
        assert service.min_vertex_clique_cover_size(PatternGraph.complete(4)) == 1
        assert service.min_vertex_clique_cover_size(PatternGraph.path(5)) == 3

    def test_theta_bound(self, paw_matrix, cprk6):
        service = CliqueCoverService()
        assert service.cp_rank_upper_bound(paw_matrix) == 2
        assert service.cp_rank_upper_bound(cprk6) == 6
        assert service.cp_rank_upper_bound(SymTropMatrix.zeros(4)) == 1

    def test_small_empty_pattern_bound_is_n(self):
        service = CliqueCoverService()
        a = SymTropMatrix.from_function(3, lambda i, j: 0 if i == j else 1)
        bound = service.theta_bound(a)
        assert bound.bound == 3
        assert bound.empty_pattern_exact
        assert bound.cover is None

    def test_theta_bound_requires_normalized(self, exca_b):
        with pytest.raises(NotNormalizedError):
            CliqueCoverService().theta_bound(exca_b)


def _clique_partitions(graph):
    def extend(vertex, blocks):
        if vertex == graph.n:
            yield CliqueCover(graph.n, tuple(tuple(b) for b in blocks))
            return
        for block in blocks:
            if graph.is_clique(block + [vertex]):
                block.append(vertex)
                yield from extend(vertex + 1, blocks)
                block.pop()
        blocks.append([vertex])
        yield from extend(vertex + 1, blocks)
        blocks.pop()

    return list(extend(0, []))


def _all_clique_covers(graph):
    """Every set of cliques whose union is the vertex set, overlapping or not."""
    cliques = [
        c
        for size in range(1, graph.n + 1)
        for c in combinations(range(graph.n), size)
        if graph.is_clique(c)
    ]
    return [
        CliqueCover(graph.n, chosen)
        for count in range(1, len(cliques) + 1)
        for chosen in combinations(cliques, count)
        if len({v for c in chosen for v in c}) == graph.n
    ]
