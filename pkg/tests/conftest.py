import numpy as np
import pytest

from rswork.cat import (disjoint_union, graph_category, multiplicative_monoid_category,
                        one_object_category, pair_groupoid)
from rswork.rsem import (cyclic_group_table, group_with_zero, partial_surjections,
                         semilattice, symmetric_inverse_monoid, transformations_with_zero)

DIAMOND = [[0, 1, 2, 3], [1, 1, 3, 3], [2, 3, 2, 3], [3, 3, 3, 3]]


@pytest.fixture(scope="session")
def i2():
    return symmetric_inverse_monoid([1, 2])


@pytest.fixture(scope="session")
def i3():
    return symmetric_inverse_monoid([1, 2, 3])


@pytest.fixture(scope="session")
def j2():
    return partial_surjections(["a", "b"])


@pytest.fixture(scope="session")
def fab():
    return transformations_with_zero(["a", "b"])


@pytest.fixture(scope="session")
def diamond():
    return semilattice(DIAMOND, ["1", "e", "f", "0"])


@pytest.fixture(scope="session")
def z2zero():
    return group_with_zero(cyclic_group_table(2), ["1", "g"])


@pytest.fixture(scope="session")
def p2():
    return pair_groupoid([1, 2], "p2")


@pytest.fixture(scope="session")
def z2():
    return one_object_category(cyclic_group_table(2), ["1", "g"], name="z2")


@pytest.fixture(scope="session")
def loops3():
    return graph_category(["v"], [(f"x{i}", "v", "v") for i in (1, 2, 3)], 3)


@pytest.fixture(scope="session")
def arrow():
    return graph_category(["u", "v"], [("a", "u", "v")], 1)


@pytest.fixture(scope="session")
def nmult():
    return multiplicative_monoid_category(3)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
