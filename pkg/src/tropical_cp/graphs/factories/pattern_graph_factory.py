from itertools import combinations

import factory
from factory.random import randgen

from tropical_cp.graphs.pattern_graph import PatternGraph


class PatternGraphFactory(factory.Factory):
    class Meta:
        model = PatternGraph

    class Params:
        density = 0.5

    n = factory.Faker("random_int", min=1, max=6)
    edges = factory.LazyAttribute(
        lambda o: frozenset(
            pair for pair in combinations(range(o.n), 2) if randgen.random() < o.density
        )
    )
