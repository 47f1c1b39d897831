from fractions import Fraction

import factory
from factory.random import randgen

from tropical_cp.core.matrices import TropVector
from tropical_cp.core.scalars import INFINITY, TropScalar


def _random_entry(o) -> TropScalar:
    if randgen.random() < o.infinite_rate:
        return INFINITY
    return TropScalar(Fraction(randgen.randint(-o.max_numerator, o.max_numerator), o.denominator))


class TropVectorFactory(factory.Factory):
    class Meta:
        model = TropVector

    class Params:
        n = 3
        infinite_rate = 0.2
        max_numerator = 8
        denominator = 2

    entries = factory.LazyAttribute(lambda o: tuple(_random_entry(o) for _ in range(o.n)))
