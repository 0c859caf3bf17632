"""Drift matrices, time evolution, Rabi-period extraction and comparison."""

import math
from dataclasses import replace

import numpy as np
import pytest
import scipy.linalg

from memrabi import (
    EFFECTIVE_BASIS,
    EffectiveParams,
    FULL_BASIS,
    InsufficientDataError,
    InvalidModelError,
    REDUCED_BASIS,
    TWO_PI,
    build_effective_drift,
    build_full_drift,
    build_reduced_drift,
    compare,
    effective_params,
    initial_state,
    integrate,
    rabi_period,
)

from conftest import make_params


def exchange_only_params(e, omega_m, delta_atoms):
    """Effective parameters with only the atom-atom exchange retained."""
    return EffectiveParams(
        Lambda=0.0, omega_m_tilde=omega_m, G_eff=0j, G_bar_eff=0j,
        G_eff_R=0.0, G_bar_eff_R=0.0, Delta_L_prime_R=delta_atoms,
        Delta_R_prime_R=delta_atoms, C=e.C, gamma_at_eff=0.0,
        antisymmetric=True)


@pytest.fixture
def fig2_effective(fig2_params):
    return effective_params(fig2_params)


# ------------------------------------------------------------- drift: full

def test_full_decoupled_is_diagonal():
    p = make_params(gamma_c=TWO_PI * 10.0, delta_L=-TWO_PI * 50.0,
                    delta_R=TWO_PI * 50.0, J=0.0, g1=0.0, g_coll=0.0,
                    Delta_L=TWO_PI * 10.0, Delta_R=TWO_PI * 10.0)
    m = build_full_drift(p)
    assert m.basis == FULL_BASIS
    diag = {
        "a_L": -p.gamma_c / 2.0 - 1j * p.delta_L,
        "a_R": -p.gamma_c / 2.0 - 1j * p.delta_R,
        "b": -p.gamma_m / 2.0 - 1j * p.omega_m,
        "c_L": -p.gamma_at / 2.0 - 1j * p.Delta_L,
        "c_R": -p.gamma_at / 2.0 - 1j * p.Delta_R,
    }
    expected = np.zeros((10, 10), dtype=complex)
    for label, value in diag.items():
        i = m.index(label)
        expected[i, i] = value
        expected[i + 1, i + 1] = np.conj(value)
    assert np.array_equal(m.entries, expected)


def test_full_reference_point_is_stable(fig2_params):
    eigenvalues = np.linalg.eigvals(build_full_drift(fig2_params).entries)
    assert np.all(eigenvalues.real < 0.0)


def test_full_membrane_decouples_without_single_photon_coupling():
    p = make_params(g1=0.0, J=0.0, g_coll=TWO_PI * 10.0,
                    delta_L=-TWO_PI * 100.0, delta_R=TWO_PI * 100.0,
                    alpha_L=1.0, alpha_R=1.0)
    m = build_full_drift(p)
    i = m.index("b")
    off_row = np.delete(m.entries[i], (i, i + 1))
    off_col = np.delete(m.entries[:, i], (i, i + 1))
    assert np.all(off_row == 0.0)
    assert np.all(off_col == 0.0)


def test_full_conjugate_pairing_structure(fig2_params):
    m = build_full_drift(fig2_params)
    assert m.conjugate_pairing_residual() == 0.0


# ---------------------------------------------------------- drift: reduced

def test_reduced_no_tunnelling_dark_cavity_decouples():
    p = make_params(J=0.0, alpha_L=0.0, alpha_R=0.0,
                    g_coll=TWO_PI * 10.0, delta_L=-TWO_PI * 100.0,
                    delta_R=TWO_PI * 100.0)
    m = build_reduced_drift(p, effective_params(p))
    atoms_L = slice(2, 4)
    atoms_R = slice(4, 6)
    assert np.all(m.entries[atoms_L, atoms_R] == 0.0)
    assert np.all(m.entries[atoms_R, atoms_L] == 0.0)
    assert np.all(m.entries[0:2, 2:6] == 0.0)
    assert np.all(m.entries[2:6, 0:2] == 0.0)


def test_reduced_reference_cross_coupling_magnitude(fig2_params,
                                                    fig2_effective):
    m = build_reduced_drift(fig2_params, fig2_effective)
    cross = m.entries[m.index("c_L"), m.index("c_R")]
    assert abs(cross) == pytest.approx(1.2081886947754228, rel=1e-13)


def test_reduced_equals_effective_for_lossless_cavity():
    p = make_params(gamma_c=0.0, delta_L=-TWO_PI * 100.0,
                    delta_R=TWO_PI * 100.0, J=TWO_PI * 500.0,
                    g1=TWO_PI * 1.0, g_coll=TWO_PI * 10.0,
                    alpha_L=1.0, alpha_R=1.0,
                    Delta_L=TWO_PI * 10.0, Delta_R=TWO_PI * 10.0)
    e = effective_params(p)
    m_red = build_reduced_drift(p, e)
    m_eff = build_effective_drift(e, p)
    assert m_red.basis == m_eff.basis == REDUCED_BASIS == EFFECTIVE_BASIS
    # the two builders compute the couplings through different expressions,
    # so agreement is to rounding, not bitwise
    np.testing.assert_allclose(m_red.entries, m_eff.entries,
                               rtol=1e-12, atol=1e-12)


# -------------------------------------------------------- drift: effective

def test_effective_exchange_only_eigenvalues(fig2_params, fig2_effective):
    delta = fig2_effective.Delta_L_prime_R
    c = fig2_effective.C
    e = exchange_only_params(fig2_effective, fig2_params.omega_m, delta)
    m = build_effective_drift(e, replace(fig2_params, gamma_m=0.0))
    eigenvalues = np.sort_complex(np.linalg.eigvals(m.entries))
    w = fig2_params.omega_m
    predicted = np.sort_complex(np.array(
        [-1j * (delta - c), -1j * (delta + c), 1j * (delta - c),
         1j * (delta + c), -1j * w, 1j * w]))
    np.testing.assert_allclose(eigenvalues, predicted, rtol=1e-12,
                               atol=1e-9)


def test_effective_reference_beat_splitting(fig2_params, fig2_effective):
    m = build_effective_drift(fig2_effective, fig2_params)
    eigenvalues = np.linalg.eigvals(m.entries)
    atomic = sorted((v for v in eigenvalues if -70.0 < v.imag < -55.0),
                    key=lambda v: v.imag)
    assert len(atomic) == 2
    beat = abs(atomic[0].imag - atomic[1].imag)
    d = fig2_effective.Delta_R_prime_R - fig2_effective.Delta_L_prime_R
    predicted = math.sqrt(4.0 * fig2_effective.C ** 2 + d ** 2)
    assert beat == pytest.approx(predicted, rel=1e-4)
    # the detuning asymmetry inflates the splitting only slightly
    assert beat == pytest.approx(2.0 * abs(fig2_effective.C), rel=0.025)


def test_effective_spring_shift_only_eigenvalues(fig2_params,
                                                 fig2_effective):
    e = EffectiveParams(
        Lambda=fig2_effective.Lambda,
        omega_m_tilde=fig2_effective.omega_m_tilde,
        G_eff=0j, G_bar_eff=0j, G_eff_R=0.0, G_bar_eff_R=0.0,
        Delta_L_prime_R=fig2_effective.Delta_L_prime_R,
        Delta_R_prime_R=fig2_effective.Delta_R_prime_R,
        C=0.0, gamma_at_eff=0.0, antisymmetric=True)
    m = build_effective_drift(e, fig2_params)
    eigenvalues = np.linalg.eigvals(m.entries)
    membrane = sorted((v for v in eigenvalues if abs(v.imag) > 1000.0),
                      key=lambda v: v.imag)
    predicted = math.sqrt(e.omega_m_tilde ** 2 - e.Lambda ** 2)
    assert len(membrane) == 2
    assert membrane[1].imag == pytest.approx(predicted, rel=1e-12)
    assert membrane[1].real == pytest.approx(-fig2_params.gamma_m / 2.0,
                                             rel=1e-6)


def test_effective_rejects_non_antisymmetric():
    p = make_params(delta_L=-TWO_PI * 100.0, delta_R=TWO_PI * 90.0,
                    J=TWO_PI * 500.0)
    e = effective_params(p)
    with pytest.raises(InvalidModelError):
        build_effective_drift(e, p)


# ------------------------------------------------------------ initial state

def test_initial_state_fills_conjugate_partner(fig2_params, fig2_effective):
    m = build_effective_drift(fig2_effective, fig2_params)
    x0 = initial_state(m, {"c_L": 0.6 + 0.2j})
    assert x0[m.index("c_L")] == 0.6 + 0.2j
    assert x0[m.index("c_L_dag")] == 0.6 - 0.2j
    assert np.all(x0[:2] == 0.0)
    assert np.all(x0[4:] == 0.0)


def test_initial_state_unknown_label(fig2_params, fig2_effective):
    m = build_effective_drift(fig2_effective, fig2_params)
    with pytest.raises(ValueError, match="unknown state label"):
        initial_state(m, {"a_L": 1.0})


# ---------------------------------------------------------------- integrate

def test_integrate_zero_state_stays_zero(fig2_params):
    m = build_full_drift(fig2_params)
    traj = integrate(m, np.zeros(10, dtype=complex), t_max=1.0, dt_out=0.01)
    assert traj.t[0] == 0.0 and traj.t[-1] == pytest.approx(1.0)
    assert np.all(traj.states == 0.0)
    assert np.all(traj.populations["pop_cL"] == 0.0)


def test_integrate_input_validation(fig2_params):
    m = build_full_drift(fig2_params)
    x0 = initial_state(m, {"c_L": 1.0})
    with pytest.raises(ValueError, match="shape"):
        integrate(m, x0[:6], t_max=1.0)
    with pytest.raises(ValueError, match="t_max must be positive"):
        integrate(m, x0, t_max=-1.0)
    with pytest.raises(ValueError, match="dt_out must be positive"):
        integrate(m, x0, t_max=1.0, dt_out=0.0)
    with pytest.raises(ValueError, match="exceeds t_max"):
        integrate(m, x0, t_max=1.0, dt_out=2.0)
    with pytest.raises(ValueError, match="not conjugate-paired"):
        bad = x0.copy()
        bad[m.index("c_L_dag")] = 0.5
        integrate(m, bad, t_max=1.0)
    with pytest.raises(ValueError, match="unknown method"):
        integrate(m, x0, t_max=1.0, method="euler")


def test_integrate_reference_exchange_antiphase(fig2_params):
    m = build_full_drift(fig2_params)
    traj = integrate(m, initial_state(m, {"c_L": 1.0}), t_max=2.6,
                     dt_out=1e-3)
    corr = np.corrcoef(traj.populations["pop_cL"],
                       traj.populations["pop_cR"])[0, 1]
    assert corr < -0.9
    assert traj.populations["pop_cR"].max() > 0.8


def test_integrate_rk4_matches_expm(fig2_params):
    m = build_full_drift(fig2_params)
    x0 = initial_state(m, {"c_L": 1.0})
    a = integrate(m, x0, t_max=20.0, dt_out=1e-3, method="rk4")
    b = integrate(m, x0, t_max=20.0, dt_out=1e-3, method="expm")
    assert np.abs(a.states - b.states).max() < 1e-8


def test_integrate_is_additive(fig2_params):
    m = build_full_drift(fig2_params)
    xa = initial_state(m, {"c_L": 1.0})
    xb = initial_state(m, {"b": 0.3 + 0.1j})
    ta = integrate(m, xa, t_max=1.0, dt_out=0.01)
    tb = integrate(m, xb, t_max=1.0, dt_out=0.01)
    tab = integrate(m, xa + xb, t_max=1.0, dt_out=0.01)
    np.testing.assert_allclose(tab.states, ta.states + tb.states,
                               rtol=1e-12, atol=1e-12)


def test_integrate_scaling_by_two_is_exact(fig2_params):
    m = build_full_drift(fig2_params)
    x0 = initial_state(m, {"c_L": 0.7})
    a = integrate(m, x0, t_max=1.0, dt_out=0.01)
    b = integrate(m, 2.0 * x0, t_max=1.0, dt_out=0.01)
    assert np.array_equal(b.states, 2.0 * a.states)


def test_integrate_preserves_conjugate_pairing(fig2_params, fig2_effective):
    rng = np.random.default_rng(7)
    models = (build_full_drift(fig2_params),
              build_reduced_drift(fig2_params, fig2_effective),
              build_effective_drift(fig2_effective, fig2_params))
    for m in models:
        values = {}
        for label in m.basis[::2]:
            re, im = rng.normal(size=2)
            values[label] = complex(re, im)
        x0 = initial_state(m, values)
        traj = integrate(m, x0, t_max=2.0, dt_out=0.01)
        final = traj.states[-1]
        pairs = final[::2] - np.conj(final[1::2])
        assert np.abs(pairs).max() < 1e-9


def test_propagator_preserves_bogoliubov_metric(fig2_params,
                                                fig2_effective):
    # with decays switched off the flow is symplectic: P K P^dag = K
    p = replace(fig2_params, gamma_c=0.0, gamma_at=0.0, gamma_m=0.0)
    e = effective_params(p)
    m = build_effective_drift(e, p)
    propagator = scipy.linalg.expm(m.entries * 0.5)
    K = m.metric()
    residual = np.abs(propagator @ K @ propagator.conj().T - K).max()
    assert residual < 1e-9


def test_energy_conserved_without_decay(fig2_params):
    from memrabi import effective_hamiltonian_coefficients
    p = replace(fig2_params, gamma_c=0.0, gamma_at=0.0, gamma_m=0.0)
    e = effective_params(p)
    m = build_effective_drift(e, p)
    q = effective_hamiltonian_coefficients(e).entries
    traj = integrate(m, initial_state(m, {"c_L": 1.0}), t_max=2.0,
                     dt_out=0.01)
    energy = np.einsum("ti,ij,tj->t", traj.states.conj(), q, traj.states)
    assert np.abs(energy.imag).max() < 1e-9
    assert np.abs(energy.real - energy.real[0]).max() < 1e-6 * abs(
        energy.real[0])


# -------------------------------------------------------------- rabi period

def test_rabi_period_pure_exchange(fig2_params, fig2_effective):
    e = exchange_only_params(fig2_effective, fig2_params.omega_m,
                             fig2_effective.Delta_L_prime_R)
    m = build_effective_drift(e, replace(fig2_params, gamma_m=0.0))
    traj = integrate(m, initial_state(m, {"c_L": 1.0}), t_max=9.0,
                     dt_out=1e-3)
    predicted = math.pi / abs(fig2_effective.C)
    assert rabi_period(traj) == pytest.approx(predicted, rel=1e-8)
    # exchange-only evolution keeps the pair population constant
    total = traj.populations["pop_cL"] + traj.populations["pop_cR"]
    assert np.abs(total - 1.0).max() < 1e-8


def test_rabi_period_reference_matches_prediction(fig2_params,
                                                  fig2_effective):
    m = build_full_drift(fig2_params)
    traj = integrate(m, initial_state(m, {"c_L": 1.0}), t_max=20.0,
                     dt_out=1e-3)
    period = rabi_period(traj)
    predicted = math.pi / abs(fig2_effective.C)
    assert period == pytest.approx(2.549731162930571, rel=1e-9)
    assert abs(period - predicted) / predicted < 0.1


def test_rabi_period_constant_signal(fig2_params, fig2_effective):
    # exchange-only evolution leaves the membrane population at zero
    e = exchange_only_params(fig2_effective, fig2_params.omega_m,
                             fig2_effective.Delta_L_prime_R)
    m = build_effective_drift(e, fig2_params)
    traj = integrate(m, initial_state(m, {"c_L": 1.0}), t_max=2.0,
                     dt_out=1e-3)
    with pytest.raises(InsufficientDataError, match="constant"):
        rabi_period(traj, observable="pop_b")


def test_rabi_period_unknown_observable(fig2_params, fig2_effective):
    m = build_effective_drift(fig2_effective, fig2_params)
    traj = integrate(m, initial_state(m, {"c_L": 1.0}), t_max=1.0,
                     dt_out=1e-3)
    with pytest.raises(ValueError, match="unknown observable"):
        rabi_period(traj, observable="pop_total")


# ------------------------------------------------------------------ compare

def test_compare_identical_trajectories(fig2_params):
    m = build_full_drift(fig2_params)
    traj = integrate(m, initial_state(m, {"c_L": 1.0}), t_max=1.0,
                     dt_out=0.01)
    stats = compare(traj, traj)
    assert set(stats) == {"pop_b", "pop_cL", "pop_cR", "pop_aL", "pop_aR"}
    for s in stats.values():
        assert s.max == 0.0 and s.rms == 0.0


def test_compare_models_over_one_period(fig2_params, fig2_effective):
    t_max = math.pi / abs(fig2_effective.C)
    kwargs = dict(t_max=t_max, dt_out=1e-3)
    m_full = build_full_drift(fig2_params)
    m_red = build_reduced_drift(fig2_params, fig2_effective)
    m_eff = build_effective_drift(fig2_effective, fig2_params)
    t_full = integrate(m_full, initial_state(m_full, {"c_L": 1.0}), **kwargs)
    t_red = integrate(m_red, initial_state(m_red, {"c_L": 1.0}), **kwargs)
    t_eff = integrate(m_eff, initial_state(m_eff, {"c_L": 1.0}), **kwargs)
    rms_fr = compare(t_full, t_red, labels=("pop_cL",))["pop_cL"].rms
    rms_fe = compare(t_full, t_eff, labels=("pop_cL",))["pop_cL"].rms
    rms_re = compare(t_red, t_eff, labels=("pop_cL",))["pop_cL"].rms
    assert rms_fr == pytest.approx(0.04442022810099447, rel=1e-6)
    assert rms_fe == pytest.approx(0.04442000329505966, rel=1e-6)
    assert rms_re < 1e-4
    assert max(rms_fr, rms_fe, rms_re) <= 0.05


def test_compare_rejects_mismatched_grids(fig2_params):
    m = build_full_drift(fig2_params)
    x0 = initial_state(m, {"c_L": 1.0})
    a = integrate(m, x0, t_max=1.0, dt_out=0.01)
    b = integrate(m, x0, t_max=2.0, dt_out=0.01)
    with pytest.raises(ValueError, match="different time grids"):
        compare(a, b)


def test_compare_unknown_label(fig2_params):
    m = build_full_drift(fig2_params)
    x0 = initial_state(m, {"c_L": 1.0})
    traj = integrate(m, x0, t_max=1.0, dt_out=0.01)
    with pytest.raises(ValueError, match="not present"):
        compare(traj, traj, labels=("pop_q",))
