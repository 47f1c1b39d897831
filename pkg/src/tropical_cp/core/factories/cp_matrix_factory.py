import factory

from tropical_cp.core.factories.trop_vector_factory import TropVectorFactory
from tropical_cp.core.matrices import SymTropMatrix, rank_one_product, trop_matrix_sum


class CpMatrixFactory(factory.Factory):
    """Completely positive matrix built as a tropical sum of ``rank`` random outer products."""

    class Meta:
        model = SymTropMatrix

    n = factory.Faker("random_int", min=1, max=4)
    rank = factory.Faker("random_int", min=1, max=3)
    infinite_rate = 0.1

    @classmethod
    def _create(cls, model_class, n, rank, infinite_rate, **kwargs):
        factors = TropVectorFactory.build_batch(rank, n=n, infinite_rate=infinite_rate)
        return trop_matrix_sum([rank_one_product(b) for b in factors])

    _build = _create
