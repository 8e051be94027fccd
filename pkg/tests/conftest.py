"""Shared fixtures: problem instances and constants computed once per session."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from attainkit.classify import ConstantSet, resolve_constants
from attainkit.constants import fractional_constant, gns_constant_estimate
from attainkit.params import ProblemParams

settings.register_profile(
    "kit",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("kit")


@pytest.fixture(scope="session")
def crit5() -> ProblemParams:
    return ProblemParams.local_critical(N=5, p=2.0, gamma=2.5, alpha=1.0)


@pytest.fixture(scope="session")
def sub224() -> ProblemParams:
    return ProblemParams.local(N=2, p=2.0, q=4.0, gamma=1.5, alpha=1.0)


@pytest.fixture(scope="session")
def constants_crit5(crit5) -> ConstantSet:
    return resolve_constants(crit5)


@pytest.fixture(scope="session")
def constants_crit3() -> ConstantSet:
    return resolve_constants(
        ProblemParams.local_critical(N=3, p=2.0, gamma=3.0, alpha=1.0))


@pytest.fixture(scope="session")
def gns_small():
    """Cheap interpolation-constant estimate for wiring tests (not sharp)."""
    return gns_constant_estimate(2, 2.0, 4.0, budget=400, grid_n=100)


@pytest.fixture(scope="session")
def constants_sub224(gns_small) -> ConstantSet:
    return ConstantSet(interpolation=gns_small)


@pytest.fixture(scope="session")
def suite_constants(constants_crit5, constants_crit3, constants_sub224):
    return {
        "critical": constants_crit5,
        "nonexistence": constants_crit3,
        "subcritical": constants_sub224,
        "fractional": ConstantSet(fractional=fractional_constant(1.7)),
    }
