"""Shared fixtures: the two market regimes used throughout the suite."""

import math

import pytest

from pbk.market import MarketParams


@pytest.fixture(scope="session")
def market():
    """The workhorse regime: beta = -0.75, gamma = 0.06125."""
    return MarketParams(sigma=0.2, r=0.05)


@pytest.fixture(scope="session")
def market_beta0():
    """sigma^2 = 2r, so the tilt vanishes and both families are orthonormal."""
    m = MarketParams(sigma=0.2, r=0.02)
    assert math.isclose(m.beta, 0.0, abs_tol=1e-15)
    return m
