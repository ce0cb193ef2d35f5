from fractions import Fraction

import pytest
from hypothesis import settings

from ffbench.caps import BoxCap, CapBox, assign_layout, build_cs_4cap, lower_to_vertex_cap

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def two_box_cap() -> BoxCap:
    """Box A at depths [0,1] and box B at [1,2] hanging to its right, both with cones at depth 2."""
    return assign_layout(
        BoxCap(
            2,
            [
                CapBox("A", 0, 1, 2, weight={"A"}),
                CapBox("B", 1, 1, 2, "A", "R", weight={"B"}),
            ],
        )
    )


@pytest.fixture(scope="session")
def two_box():
    return two_box_cap()


@pytest.fixture(scope="session")
def two_box_vertices():
    return lower_to_vertex_cap(two_box_cap())


@pytest.fixture(scope="session")
def cs_cap():
    return build_cs_4cap()


@pytest.fixture(scope="session")
def cap_45():
    from ffbench.quasicap import certify_r

    recipe, qc = certify_r(Fraction(9, 2), Fraction(4, 5), execute=True)
    return recipe, qc


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
