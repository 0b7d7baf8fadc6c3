import pytest

from sglab import FiniteDistribution, builtin_instances, get_instance


@pytest.fixture(scope="session")
def catalog():
    return builtin_instances()


@pytest.fixture(scope="session")
def real_line():
    return get_instance("euclidean1")


@pytest.fixture(scope="session")
def bernoulli_pair(real_line):
    """Two iid uniform{0,1} variables on the real line: the worked oracle
    with U in {0, 1, 1, 2} over the four outcomes."""
    law = FiniteDistribution.uniform(real_line, (0.0, 1.0))
    return [law, law]
