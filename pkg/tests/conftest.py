import pytest

from prefopt import windfarm
from prefopt.alloc import alloc_encoding, build_problem as build_alloc_problem, fixture_instance
from prefopt.oracle import enumerate_alloc, enumerate_windfarm


@pytest.fixture(scope="session")
def alloc_instance():
    return fixture_instance()


@pytest.fixture(scope="session")
def alloc_problem(alloc_instance):
    return build_alloc_problem(alloc_instance)


@pytest.fixture(scope="session")
def alloc_report(alloc_problem):
    return enumerate_alloc(alloc_problem)


@pytest.fixture(scope="session")
def alloc_keys(alloc_instance):
    return alloc_encoding(alloc_instance)


@pytest.fixture(scope="session")
def windfarm_params():
    return windfarm.default_params()


@pytest.fixture(scope="session")
def windfarm_coarse_problem(windfarm_params):
    # grid step beyond both ranges: endpoints only, 144 candidates
    return windfarm.build_problem(windfarm_params, anchor_grid_step=6.0)


@pytest.fixture(scope="session")
def windfarm_coarse_report(windfarm_coarse_problem):
    return enumerate_windfarm(windfarm_coarse_problem, 6.0)


@pytest.fixture(scope="session")
def windfarm_fine_problem(windfarm_params):
    return windfarm.build_problem(windfarm_params, anchor_grid_step=0.1)


@pytest.fixture(scope="session")
def windfarm_fine_report(windfarm_fine_problem):
    return enumerate_windfarm(windfarm_fine_problem, 0.1)
