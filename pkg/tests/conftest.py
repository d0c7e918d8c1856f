import numpy as np
import pytest

from sarnaklab import Alphabet, SymbolSequence, gen_iid, gen_liouville


@pytest.fixture(scope="session")
def iid_1e6():
    return gen_iid(Alphabet.pm1(), [0.5, 0.5], 10**6, seed=20240601)


@pytest.fixture(scope="session")
def liouville_1e6():
    return gen_liouville(10**6)


@pytest.fixture(scope="session")
def alternating_1e6():
    return SymbolSequence(Alphabet.pm1(), np.tile(np.array([0, 1], dtype=np.uint8), 5 * 10**5))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
