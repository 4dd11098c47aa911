import pytest

from casimir_rough.combined_force import ScenarioConfig
from casimir_rough.roughness import RoughnessLevels, solve_zero_level


@pytest.fixture
def ref_levels():
    return RoughnessLevels(h1=40.0, h2=20.0, h0=10.0, v1=0.11, v2=0.25, v0=0.64)


@pytest.fixture
def ref_model(ref_levels):
    return solve_zero_level(ref_levels)


@pytest.fixture
def scenario():
    return ScenarioConfig()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
