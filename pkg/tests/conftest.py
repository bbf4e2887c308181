import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hetnet_alloc.channel import ScenarioConfig, generate_scenario, realize_channel

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

TOY = ScenarioConfig(n_pbs=1, n_prbs_per_bs=2, n_users=3, n_normal_users=2)


def toy(seed):
    rng = np.random.default_rng(seed)
    sc = generate_scenario(TOY, rng)
    return sc, realize_channel(sc, rng)


@pytest.fixture(scope="session")
def default_scenario():
    return generate_scenario()


@pytest.fixture(scope="session")
def default_channel(default_scenario):
    return realize_channel(default_scenario, np.random.default_rng(11))


# one line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
