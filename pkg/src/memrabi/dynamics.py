"""Linear drift matrices and expectation-value dynamics.

Three models of the same system, all of the form  xdot = M x  for the
vector of operator expectation values:

* full      -- 10 components, both cavity modes retained,
* reduced   -- 6 components, cavities adiabatically eliminated,
               complex coefficients kept in full,
* effective -- 6 components, Heisenberg equations of the Hermitian
               effective Hamiltonian plus phenomenological decays.

Adjoint expectation values are carried as separate components (so a
basis label "c_L" is always followed by "c_L_dag").  That keeps the
drift a plain linear system and makes the conjugate-pairing invariant
directly checkable: the row for O^dag is the conjugate of the row for O
with columns swapped under the dagger pairing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

import numpy as np
import scipy.linalg
import scipy.signal

from .effective import (
    EFFECTIVE_BASIS,
    EffectiveParams,
    effective_hamiltonian_coefficients,
    elimination_intermediates,
)
from .errors import InsufficientDataError
from .params import SystemParams, derived_detunings

FULL_BASIS = ("a_L", "a_L_dag", "a_R", "a_R_dag",
              "b", "b_dag", "c_L", "c_L_dag", "c_R", "c_R_dag")
REDUCED_BASIS = EFFECTIVE_BASIS

# Population columns in CSV order -> state label they square.
POPULATIONS = (
    ("pop_cL", "c_L"),
    ("pop_cR", "c_R"),
    ("pop_aL", "a_L"),
    ("pop_aR", "a_R"),
    ("pop_b", "b"),
)

PAIRING_TOL = 1e-9

# rk4 substep ceiling: never coarser than this (us), and never coarser
# than 0.01/||M|| so the fastest phase rotation stays resolved.
MAX_SUBSTEP = 1e-3
NORM_STEP_FACTOR = 0.01


def _dag_partner(index: int) -> int:
    """Index of the adjoint partner under interleaved (O, O_dag) ordering."""
    return index ^ 1


@dataclass(frozen=True)
class DriftMatrix:
    """Complex drift matrix with labeled operator basis (rad/us)."""

    basis: tuple[str, ...]
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (len(self.basis), len(self.basis)):
            raise ValueError(
                f"entries shape {self.entries.shape} does not match "
                f"basis of length {len(self.basis)}"
            )
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label: str) -> int:
        return self.basis.index(label)

    def metric(self) -> np.ndarray:
        """Diagonal symplectic metric: +1 on annihilation labels, -1 on
        adjoint labels."""
        return np.diag([-1.0 if lab.endswith("_dag") else 1.0
                        for lab in self.basis]).astype(complex)

    def conjugate_pairing_residual(self) -> float:
        """Max deviation from the adjoint-row pairing, absolute."""
        m = self.entries
        res = 0.0
        for i in range(0, self.dim, 2):
            for j in range(self.dim):
                res = max(res, abs(m[i + 1, _dag_partner(j)] - np.conj(m[i, j])))
        return res


def _with_conjugate_rows(basis: tuple[str, ...],
                         m: np.ndarray) -> np.ndarray:
    """Fill every adjoint row from the corresponding annihilation row."""
    for i in range(0, len(basis), 2):
        for j in range(len(basis)):
            m[i + 1, _dag_partner(j)] = np.conj(m[i, j])
    return m


def build_full_drift(p: SystemParams) -> DriftMatrix:
    """Pre-elimination drift: both cavities, membrane, both ensembles.

    Implements the linearized input-output equations with the classical
    amplitude alpha_R in the right-cavity radiation-pressure term (the
    general form; with alpha_L = alpha_R it makes no difference).
    """
    d = derived_detunings(p)
    idx = {lab: i for i, lab in enumerate(FULL_BASIS)}
    m = np.zeros((10, 10), dtype=complex)

    # left cavity
    row = idx["a_L"]
    m[row, idx["a_L"]] = -(p.gamma_c / 2.0 + 1j * d.delta_L_prime)
    m[row, idx["c_L"]] = -1j * p.g_coll
    m[row, idx["a_R"]] = 1j * p.J
    m[row, idx["b"]] = 1j * p.g1 * p.alpha_L
    m[row, idx["b_dag"]] = 1j * p.g1 * p.alpha_L

    # right cavity: opposite sign on the radiation-pressure term
    row = idx["a_R"]
    m[row, idx["a_R"]] = -(p.gamma_c / 2.0 + 1j * d.delta_R_prime)
    m[row, idx["c_R"]] = -1j * p.g_coll
    m[row, idx["a_L"]] = 1j * p.J
    m[row, idx["b"]] = -1j * p.g1 * p.alpha_R
    m[row, idx["b_dag"]] = -1j * p.g1 * p.alpha_R

    # membrane
    row = idx["b"]
    m[row, idx["b"]] = -(p.gamma_m / 2.0 + 1j * p.omega_m)
    m[row, idx["a_L"]] = 1j * p.g1 * p.alpha_L
    m[row, idx["a_L_dag"]] = 1j * p.g1 * p.alpha_L
    m[row, idx["a_R"]] = -1j * p.g1 * p.alpha_R
    m[row, idx["a_R_dag"]] = -1j * p.g1 * p.alpha_R

    # ensembles
    row = idx["c_L"]
    m[row, idx["c_L"]] = -(p.gamma_at / 2.0 + 1j * p.Delta_L)
    m[row, idx["a_L"]] = -1j * p.g_coll
    row = idx["c_R"]
    m[row, idx["c_R"]] = -(p.gamma_at / 2.0 + 1j * p.Delta_R)
    m[row, idx["a_R"]] = -1j * p.g_coll

    return DriftMatrix(FULL_BASIS, _with_conjugate_rows(FULL_BASIS, m))


def build_reduced_drift(p: SystemParams, e: EffectiveParams) -> DriftMatrix:
    """Post-elimination drift with complex coefficients retained.

    The ensemble detunings pick up complex shifts
    Delta'_L = Delta_L - g_coll^2 y/z  (and x/z for the right side);
    their imaginary parts carry the cavity-induced decay, so gamma_at/2
    stays the bare rate here.
    """
    ints = elimination_intermediates(p)
    x, y, z = ints.x, ints.y, ints.z
    g2N = p.g_coll ** 2
    Delta_L_c = p.Delta_L - g2N * y / z
    Delta_R_c = p.Delta_R - g2N * x / z
    cross = 1j * g2N * p.J / z

    idx = {lab: i for i, lab in enumerate(REDUCED_BASIS)}
    m = np.zeros((6, 6), dtype=complex)

    row = idx["b"]
    m[row, idx["b"]] = -1j * e.omega_m_tilde - p.gamma_m / 2.0
    m[row, idx["b_dag"]] = -1j * e.Lambda
    m[row, idx["c_L"]] = -1j * e.G_eff
    m[row, idx["c_L_dag"]] = -1j * np.conj(e.G_eff)
    m[row, idx["c_R"]] = 1j * e.G_bar_eff
    m[row, idx["c_R_dag"]] = 1j * np.conj(e.G_bar_eff)

    row = idx["c_L"]
    m[row, idx["c_L"]] = -1j * Delta_L_c - p.gamma_at / 2.0
    m[row, idx["b"]] = -1j * e.G_eff
    m[row, idx["b_dag"]] = -1j * e.G_eff
    m[row, idx["c_R"]] = cross

    row = idx["c_R"]
    m[row, idx["c_R"]] = -1j * Delta_R_c - p.gamma_at / 2.0
    m[row, idx["b"]] = 1j * e.G_bar_eff
    m[row, idx["b_dag"]] = 1j * e.G_bar_eff
    m[row, idx["c_L"]] = cross

    return DriftMatrix(REDUCED_BASIS, _with_conjugate_rows(REDUCED_BASIS, m))


def build_effective_drift(e: EffectiveParams, p: SystemParams) -> DriftMatrix:
    """Drift of the Hermitian effective model: -i K Q plus decays.

    Q is the quadratic-form coefficient matrix of the effective
    Hamiltonian and K the symplectic metric, so with decays switched off
    the propagator is symplectic by construction.  Decays are
    phenomenological: gamma_m/2 on the membrane rows, the
    cavity-modified gamma_at_eff/2 on the ensemble rows.
    """
    coeff = effective_hamiltonian_coefficients(e)
    K = np.diag([1.0, -1.0, 1.0, -1.0, 1.0, -1.0]).astype(complex)
    drift = -1j * K @ coeff.entries
    decays = np.repeat([p.gamma_m / 2.0, e.gamma_at_eff / 2.0,
                        e.gamma_at_eff / 2.0], 2)
    drift -= np.diag(decays).astype(complex)
    return DriftMatrix(EFFECTIVE_BASIS, drift)


class Trajectory(NamedTuple):
    """Time grid (us), complex states (one row per sample, columns in
    ``basis`` order) and derived populations |<O>|^2 for the modes
    present in the basis."""

    t: np.ndarray
    basis: tuple[str, ...]
    states: np.ndarray
    populations: dict[str, np.ndarray]


def _populations(basis: tuple[str, ...], states: np.ndarray) -> dict[str, np.ndarray]:
    pops = {}
    for pop_label, state_label in POPULATIONS:
        if state_label in basis:
            col = basis.index(state_label)
            pops[pop_label] = np.abs(states[:, col]) ** 2
    return pops


def initial_state(m: DriftMatrix,
                  values: Mapping[str, complex]) -> np.ndarray:
    """Conjugate-paired state vector from a {label: value} mapping.

    Adjoint components not given explicitly are filled with the
    conjugate of their partner.  Unknown labels raise ValueError.
    """
    x0 = np.zeros(m.dim, dtype=complex)
    seen = set()
    for label, value in values.items():
        try:
            i = m.index(label)
        except ValueError:
            raise ValueError(
                f"unknown state label {label!r}; basis is {m.basis}"
            ) from None
        x0[i] = complex(value)
        seen.add(i)
    for i in seen.copy():
        partner = _dag_partner(i)
        if partner not in seen:
            x0[partner] = np.conj(x0[i])
    return x0


def _pairing_residual(x: np.ndarray) -> float:
    res = 0.0
    for i in range(0, x.size, 2):
        res = max(res, abs(x[i + 1] - np.conj(x[i])))
    return res


def _rk4_step_matrix(m: np.ndarray, h: float) -> np.ndarray:
    """One-step RK4 update matrix for xdot = Mx.

    For a linear autonomous system classic RK4 is exactly the quartic
    Taylor polynomial of exp(hM), so the whole step collapses to a
    constant matrix that can be reused (and powered) instead of stepping
    state by state.
    """
    eye = np.eye(m.shape[0], dtype=complex)
    a = h * m
    r = eye + a / 4.0
    r = eye + (a / 3.0) @ r
    r = eye + (a / 2.0) @ r
    return eye + a @ r


def integrate(m: DriftMatrix, x0: np.ndarray, t_max: float,
              dt_out: float = 1e-3, method: str = "rk4") -> Trajectory:
    """Propagate x0 under the drift and sample every dt_out.

    method "rk4" uses fixed substeps h = dt_out/n chosen so that
    h <= min(MAX_SUBSTEP, NORM_STEP_FACTOR/||M||_2); the per-sample
    propagator is the n-th power of the one-step matrix.  method "expm"
    uses the exact matrix exponential over dt_out and serves as the
    accuracy oracle for rk4.
    """
    x0 = np.asarray(x0, dtype=complex)
    if x0.shape != (m.dim,):
        raise ValueError(
            f"initial state has shape {x0.shape}, drift expects ({m.dim},)"
        )
    if t_max <= 0.0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if dt_out <= 0.0:
        raise ValueError(f"dt_out must be positive, got {dt_out}")
    if dt_out > t_max:
        raise ValueError(f"dt_out = {dt_out} exceeds t_max = {t_max}")
    residual = _pairing_residual(x0)
    if residual > PAIRING_TOL:
        raise ValueError(
            "initial state is not conjugate-paired "
            f"(residual {residual:.3e} > {PAIRING_TOL})"
        )

    if method == "rk4":
        norm = np.linalg.norm(m.entries, 2)
        h_cap = MAX_SUBSTEP if norm == 0.0 else min(
            MAX_SUBSTEP, NORM_STEP_FACTOR / norm)
        n_sub = max(1, math.ceil(dt_out / h_cap))
        step = _rk4_step_matrix(m.entries, dt_out / n_sub)
        propagator = np.linalg.matrix_power(step, n_sub)
    elif method == "expm":
        propagator = scipy.linalg.expm(m.entries * dt_out)
    else:
        raise ValueError(f"unknown method {method!r}; use 'rk4' or 'expm'")

    n_out = int(math.floor(t_max / dt_out + 1e-9))
    t = np.arange(n_out + 1) * dt_out
    states = np.empty((n_out + 1, m.dim), dtype=complex)
    states[0] = x0
    for k in range(n_out):
        states[k + 1] = propagator @ states[k]

    t.setflags(write=False)
    states.setflags(write=False)
    return Trajectory(t=t, basis=m.basis, states=states,
                      populations=_populations(m.basis, states))


# Fraction of the series range a maximum must rise above its surroundings
# to count as a Rabi peak.  The full model superposes a fast, tiny cavity
# admixture on the slow exchange envelope; plain local maxima pick up
# dozens of those ripples near t = 0.
PEAK_PROMINENCE_FRACTION = 0.05


def rabi_period(traj: Trajectory, observable: str = "pop_cL") -> float:
    """Oscillation period (us) of a population from successive maxima.

    Discrete peaks are refined by a 3-point quadratic fit; the first
    peak is skipped when three or more are found, to avoid transient
    bias.  Raises InsufficientDataError with fewer than two peaks.
    """
    if observable not in traj.populations:
        raise ValueError(
            f"unknown observable {observable!r}; "
            f"have {sorted(traj.populations)}"
        )
    series = traj.populations[observable]
    span = float(series.max() - series.min())
    if span <= 0.0:
        raise InsufficientDataError(
            f"{observable} is constant; no oscillation to measure"
        )
    peaks, _ = scipy.signal.find_peaks(
        series, prominence=PEAK_PROMINENCE_FRACTION * span)
    if len(peaks) < 2:
        raise InsufficientDataError(
            f"found {len(peaks)} peak(s) in {observable}; "
            "need at least two full oscillations"
        )

    dt = float(traj.t[1] - traj.t[0])
    times = []
    for k in peaks:
        offset = 0.0
        if 0 < k < len(series) - 1:
            y0, y1, y2 = series[k - 1], series[k], series[k + 1]
            denom = y0 - 2.0 * y1 + y2
            if denom != 0.0:
                offset = float(np.clip(0.5 * (y0 - y2) / denom, -1.0, 1.0))
        times.append(float(traj.t[k]) + offset * dt)
    if len(times) >= 3:
        times = times[1:]
    return float(np.diff(times).mean())


class DifferenceStats(NamedTuple):
    max: float
    rms: float


def compare(a: Trajectory, b: Trajectory,
            labels: Iterable[str] | None = None) -> dict[str, DifferenceStats]:
    """Per-observable max and RMS absolute differences of two trajectories.

    Labels may be population names ("pop_cL") or state labels present in
    both bases ("c_L"); state differences are moduli of the complex
    difference.  Defaults to the populations the trajectories share.
    Time grids must match exactly.
    """
    if a.t.shape != b.t.shape or not np.array_equal(a.t, b.t):
        raise ValueError("trajectories are on different time grids")
    if labels is None:
        labels = [lab for lab, _ in POPULATIONS
                  if lab in a.populations and lab in b.populations]

    out = {}
    for label in labels:
        if label in a.populations and label in b.populations:
            diff = np.abs(a.populations[label] - b.populations[label])
        elif label in a.basis and label in b.basis:
            diff = np.abs(a.states[:, a.basis.index(label)]
                          - b.states[:, b.basis.index(label)])
        else:
            raise ValueError(
                f"label {label!r} not present in both trajectories"
            )
        out[label] = DifferenceStats(
            max=float(diff.max()),
            rms=float(np.sqrt(np.mean(diff ** 2))),
        )
    return out
