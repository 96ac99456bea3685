import pytest

from colorproof.graphs import extend_with_gadgets, make_graph


@pytest.fixture(scope="session")
def k3():
    return make_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture(scope="session")
def k4():
    return make_graph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])


@pytest.fixture(scope="session")
def c5():
    return make_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])


@pytest.fixture(scope="session")
def path3():
    return make_graph(3, [(0, 1), (1, 2)])


@pytest.fixture(scope="session")
def ext_path3(path3):
    return extend_with_gadgets(path3)
