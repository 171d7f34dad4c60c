import pytest

from ppforge.field import TowerCtx, build_field


@pytest.fixture(scope="session")
def gf9():
    return build_field(3, 2)


@pytest.fixture(scope="session")
def gf3():
    return build_field(3, 1)


@pytest.fixture(scope="session")
def tower32():
    return TowerCtx(3, 2)

