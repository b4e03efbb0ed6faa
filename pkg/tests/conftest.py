import pytest

from threshold_lab.core.family import triangle_free_family
from threshold_lab.model import Direction, GroundSet, MonotoneFamily, up_closure


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long acceptance suites, selected with -m slow")


def pytest_collection_modifyitems(config, items):
    if "slow" in (config.getoption("markexpr") or ""):
        return
    skip = pytest.mark.skip(reason="slow suite, run with -m slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def two_singletons_down():
    """{∅, {0}, {1}} on a ground set of two elements."""
    ground = GroundSet(2)
    return MonotoneFamily.from_members(
        ground, Direction.DOWN, [ground.from_bitstring(b).bits for b in ("00", "10", "01")], label="down-2"
    )


@pytest.fixture
def two_singletons_up():
    """The up-set generated by {0} and {1}."""
    return up_closure(GroundSet(2), [0b01, 0b10], label="up-2")


@pytest.fixture
def triangle_free_3():
    return triangle_free_family(3)


@pytest.fixture
def downset_file(tmp_path):
    path = tmp_path / "downset.json"
    path.write_text(
        '{"kind": "explicit", "ground_size": 2, "direction": "down", "members": ["00", "10", "01"]}\n'
    )
    return path
