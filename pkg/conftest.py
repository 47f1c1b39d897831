from pathlib import Path

import factory.random
import pytest

from tropical_cp.cli.services import corpus
from tropical_cp.ranks.services.exact_rank_service import ExactRankService

DATA_DIR = Path(__file__).resolve().parent / "data"


@pytest.fixture(autouse=True)
def seeded_factories():
    factory.random.reseed_random("tropical-cp")


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def exca_a():
    return corpus.exca_a()


@pytest.fixture
def exca_b():
    return corpus.exca_b()


@pytest.fixture
def paw_matrix():
    return corpus.paw_matrix(1, 2)


@pytest.fixture
def cprk6():
    return corpus.cprk6()


@pytest.fixture
def bowtie_d():
    return corpus.bowtie_d()


@pytest.fixture
def s6_matrix():
    return corpus.s6_matrix()


@pytest.fixture
def exact_rank_service():
    return ExactRankService(node_limit=2_000_000, timeout_s=300, threads=1)
