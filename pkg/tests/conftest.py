"""
Shared gallery fixtures; everything is deterministic, so most are built once
per session
"""
import pytest

from src.core.finite_space import build_grid_space
from src.ingestion.gallery import gallery

SMALL_FIXTURES = [
    ("ray5", None),
    ("ray5shift", None),
    ("line5shift", None),
    ("twosinks", None),
    ("cycle3", None),
    ("bintree", 2),
    ("bintree", 3),
    ("morse-circle", 8),
    ("morse-circle", 16),
]
MAP_FIXTURES = [(name, n) for name, n in SMALL_FIXTURES if name not in ("ray5", "bintree")]


@pytest.fixture(scope="session")
def line5():
    """Open interval of five cells, no dynamics"""
    return build_grid_space((5,), range(5), name="line5")


@pytest.fixture(scope="session")
def ray5():
    return gallery("ray5")


@pytest.fixture(scope="session")
def ray5shift():
    return gallery("ray5shift")


@pytest.fixture(scope="session")
def line5shift():
    return gallery("line5shift")


@pytest.fixture(scope="session")
def twosinks():
    return gallery("twosinks")


@pytest.fixture(scope="session")
def cycle3():
    return gallery("cycle3")


@pytest.fixture(scope="session")
def morse16():
    return gallery("morse-circle", 16)


@pytest.fixture(scope="session")
def bintree2():
    return gallery("bintree", 2)


@pytest.fixture(scope="session")
def limit_cycle_grid():
    return gallery("limit-cycle-grid", 32)


@pytest.fixture(scope="session")
def double_well():
    return gallery("double-well", 32)


@pytest.fixture(params=SMALL_FIXTURES, ids=lambda p: p[0] if p[1] is None else f"{p[0]}-{p[1]}")
def small_fixture(request):
    name, n = request.param
    return gallery(name, n)


@pytest.fixture(params=MAP_FIXTURES, ids=lambda p: p[0] if p[1] is None else f"{p[0]}-{p[1]}")
def map_fixture(request):
    name, n = request.param
    return gallery(name, n)
