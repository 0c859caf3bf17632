"""Shared parameter sets used across the test modules.

All four sets use the primed-detuning pathway (beta = 0, so delta_L /
delta_R hold the shifted detunings directly).  Frequencies in rad/us.
"""

import pytest

from memrabi import SystemParams, TWO_PI


@pytest.fixture
def fig2_params() -> SystemParams:
    """Transparent-membrane operating point used for the trajectory and
    spectrum checks: resonant tunnelling splitting 2J = omega_m."""
    return SystemParams(
        gamma_c=TWO_PI * 10.0,
        gamma_at=TWO_PI * 0.01,
        gamma_m=TWO_PI * 0.001,
        omega_m=TWO_PI * 1000.0,
        J=TWO_PI * 500.0,
        g1=TWO_PI * 1.0,
        g_coll=TWO_PI * 10.0,
        delta_L=-TWO_PI * 100.0,
        delta_R=TWO_PI * 100.0,
        Delta_L=TWO_PI * 10.0,
        Delta_R=TWO_PI * 10.0,
        alpha_L=1.0,
        alpha_R=1.0,
    )


@pytest.fixture
def case1_params() -> SystemParams:
    """Tunnelling-dominated exchange regime; alpha -> 0 is represented
    by a small but nonzero amplitude."""
    return SystemParams(
        gamma_c=TWO_PI * 10.0,
        gamma_at=TWO_PI * 0.01,
        gamma_m=TWO_PI * 0.001,
        omega_m=TWO_PI * 1000.0,
        J=TWO_PI * 500.0,
        g1=TWO_PI * 1.0,
        g_coll=TWO_PI * 6.3,
        delta_L=-TWO_PI * 50.0,
        delta_R=TWO_PI * 50.0,
        Delta_L=TWO_PI * 10.0,
        Delta_R=TWO_PI * 10.0,
        alpha_L=1e-3,
        alpha_R=1e-3,
    )


@pytest.fixture
def case2_params() -> SystemParams:
    """Membrane-mediated coupling regime: negligible tunnelling, large
    classical amplitude."""
    return SystemParams(
        gamma_c=TWO_PI * 10.0,
        gamma_at=TWO_PI * 0.01,
        gamma_m=TWO_PI * 0.001,
        omega_m=TWO_PI * 1000.0,
        J=TWO_PI * 0.1,
        g1=TWO_PI * 1.0,
        g_coll=TWO_PI * 6.3,
        delta_L=-TWO_PI * 50.0,
        delta_R=TWO_PI * 50.0,
        Delta_L=TWO_PI * 10.0,
        Delta_R=TWO_PI * 10.0,
        alpha_L=10.0,
        alpha_R=10.0,
    )


def make_params(**overrides) -> SystemParams:
    """Baseline valid parameter set with individual fields overridden."""
    base = dict(
        gamma_c=TWO_PI * 10.0,
        gamma_at=TWO_PI * 0.01,
        gamma_m=TWO_PI * 0.001,
        omega_m=TWO_PI * 1000.0,
    )
    base.update(overrides)
    return SystemParams(**base)
