import factory

from tropical_cp.core.matrices import SymTropMatrix
from tropical_cp.graphs.factories.pattern_graph_factory import PatternGraphFactory
from tropical_cp.graphs.services.instance_generator import generate_instance


class NormalizedMatrixFactory(factory.Factory):
    """Normalized CP matrix for a random (or given) pattern graph."""

    class Meta:
        model = SymTropMatrix

    graph = factory.SubFactory(PatternGraphFactory)
    seed = factory.Faker("random_int", min=0, max=2**31)
    entry_range = (1, 4)
    infinite_rate = 0.0

    @classmethod
    def _create(cls, model_class, graph, seed, entry_range, infinite_rate, **kwargs):
        return generate_instance(graph, seed, entry_range, infinite_rate=infinite_rate)

    _build = _create
