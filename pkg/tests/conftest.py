from functools import lru_cache

import pytest

from wopskit.functionals import LaguerreJacobi, SimplexJacobi, appell_type
from wopskit.pearson import appell_pair, appell_type_pair, example2_pair, example2_wedge_pair
from wopskit.wops import build_monic_wops


@lru_cache(maxsize=None)
def basis_for(name: str, N: int):
    return build_monic_wops(FAMILIES[name][0], N)


TRIANGLE = SimplexJacobi([0, 0], 0)
APPELL_TYPE = appell_type([0, 0], 0, 1)
LJ = LaguerreJacobi([0, 0])

FAMILIES = {
    "appell": (TRIANGLE, appell_pair(2, [0, 0], 0)),
    "appell_type_1": (APPELL_TYPE, appell_type_pair(2, [0, 0], 0, 1)),
    "appell_type_2": (APPELL_TYPE, appell_type_pair(2, [0, 0], 0, 2)),
    "wedge": (LJ, example2_wedge_pair(2, [0, 0])),
    "example2": (LJ, example2_pair(2, [0, 0])),
}


@pytest.fixture(scope="session")
def triangle():
    return TRIANGLE


@pytest.fixture(scope="session")
def triangle_basis():
    return basis_for("appell", 6)


@pytest.fixture(scope="session")
def families():
    return FAMILIES


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "ACCEPTANCE_LINES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
