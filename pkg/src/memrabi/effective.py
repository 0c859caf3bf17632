"""Adiabatic elimination of the cavity modes and regime classification.

Eliminating the strongly damped cavity fluctuations leaves the membrane
mode and the two collective ensemble modes coupled through the cavity
response.  The response enters through

    x = i gamma_c/2 - delta'_L,   y = i gamma_c/2 - delta'_R,
    z = x*y - J**2,

and every effective quantity is a ratio against z (or against |Re z| for
the real-part, Hermitian-model variants).  The headline result is the
tunnelling-mediated ensemble-ensemble exchange coupling

    C = -g_coll**2 * J / |z_R|,

which survives even as the classical cavity amplitude alpha -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidModelError, SingularEliminationError
from .params import SystemParams, derived_detunings

# |z| below this (rad^2/us^2) counts as singular.
SINGULAR_Z_TOL = 1e-12

# Raman resonance window: |2J - omega_m| / omega_m within this fraction.
RESONANCE_WINDOW = 0.05

# Factor demanded between the two sides of a ">>" regime condition.
DOMINANCE_FACTOR = 5.0


@dataclass(frozen=True)
class EliminationIntermediates:
    """Cavity response factors of the adiabatic elimination.

    z_R is Re(z); in the antisymmetric configuration it equals
    -(gamma_c**2/4 + delta'_L**2 + J**2) exactly.  ``z_R_variant`` keeps
    the frequently quoted variant with a gamma_c**2/2 prefactor so the
    two can be compared; the difference is below 0.01% for deep-detuned
    parameter sets but is not silently absorbed.
    """

    x: complex
    y: complex
    z: complex
    z_R: float
    z_R_variant: float

    @property
    def z_R_discrepancy(self) -> float:
        """Relative difference between z_R and the gamma_c**2/2 variant."""
        if self.z_R_variant == 0.0:
            return math.inf if self.z_R != 0.0 else 0.0
        return abs(self.z_R - self.z_R_variant) / abs(self.z_R_variant)


@dataclass(frozen=True)
class EffectiveParams:
    """Coefficients of the post-elimination dynamics.

    Complex forms (G_eff, G_bar_eff) keep the full cavity response;
    the _R fields are the real-part variants entering the Hermitian
    effective model, valid in the antisymmetric configuration where z is
    real.  All values in rad/us.

    Attributes
    ----------
    Lambda : float
        Mechanical frequency-shift / squeezing coefficient
        g1^2 alpha^2 Re((x + y - 2J)/z).
    omega_m_tilde : float
        Shifted membrane frequency omega_m + Lambda.
    G_eff, G_bar_eff : complex
        Membrane coupling to the left/right ensemble mode,
        g1 g_coll (alpha/z)(y - J) and g1 g_coll (alpha/z)(x - J).
    G_eff_R, G_bar_eff_R : float
        Real-part variants g1 g_coll alpha (delta'_R + J)/|z_R| and
        g1 g_coll alpha (delta'_L + J)/|z_R|.
    Delta_L_prime_R, Delta_R_prime_R : float
        Stark-shifted ensemble detunings Delta_L - g_coll^2 delta'_R/|z_R|
        and Delta_R - g_coll^2 delta'_L/|z_R| (note the crossed primes).
    C : float
        Direct ensemble-ensemble exchange coupling -g_coll^2 J/|z_R|.
    gamma_at_eff : float
        Cavity-modified ensemble decay gamma_at - g_coll^2 gamma_c/|z_R|.
    antisymmetric : bool
        Whether delta'_L = -delta'_R held for the input parameters; the
        Hermitian effective model requires it.
    """

    Lambda: float
    omega_m_tilde: float
    G_eff: complex
    G_bar_eff: complex
    G_eff_R: float
    G_bar_eff_R: float
    Delta_L_prime_R: float
    Delta_R_prime_R: float
    C: float
    gamma_at_eff: float
    antisymmetric: bool


class RamanSplitting(NamedTuple):
    """Normal-mode splitting of the coupled cavity modes and whether it is
    Raman-resonant with the membrane (within RESONANCE_WINDOW)."""

    splitting: float
    resonant: bool


@dataclass(frozen=True)
class RegimeReport:
    """Regime classification with the raw condition ratios.

    case is "CaseI" (tunnelling-dominated exchange: Raman-resonant
    splitting and |C| above both membrane couplings), "CaseII"
    (membrane-mediated coupling: negligible tunnelling and g1*alpha
    dominating g_coll*J/|delta'_L|), or "Neither".  The ratios let a
    caller apply different cutoffs.
    """

    case: str
    raman_deviation: float
    coupling_dominance: float
    tunnelling_ratio: float
    membrane_coupling_ratio: float


def elimination_intermediates(p: SystemParams) -> EliminationIntermediates:
    """Cavity response factors x, y, z for the adiabatic elimination.

    Raises SingularEliminationError when |z| < SINGULAR_Z_TOL, i.e. when
    the shifted cavity resonances are degenerate with the tunnelling
    splitting and the elimination is ill defined.
    """
    d = derived_detunings(p)
    x = 1j * p.gamma_c / 2.0 - d.delta_L_prime
    y = 1j * p.gamma_c / 2.0 - d.delta_R_prime
    z = x * y - p.J ** 2
    if abs(z) < SINGULAR_Z_TOL:
        raise SingularEliminationError(
            f"cavity response singular: |z| = {abs(z):.3e} rad^2/us^2 "
            "(shifted cavity resonances degenerate with the tunnelling splitting)"
        )
    z_R_variant = -(0.5 * p.gamma_c ** 2 + d.delta_L_prime ** 2 + p.J ** 2)
    return EliminationIntermediates(x=x, y=y, z=z, z_R=z.real,
                                    z_R_variant=z_R_variant)


def effective_params(p: SystemParams) -> EffectiveParams:
    """All post-elimination coefficients for the parameter set.

    The formulas take a single classical amplitude alpha; alpha_L is used
    (validate() warns when alpha_L != alpha_R).
    """
    ints = elimination_intermediates(p)
    d = derived_detunings(p)
    alpha = p.alpha_L
    x, y, z = ints.x, ints.y, ints.z
    if ints.z_R == 0.0:
        raise SingularEliminationError(
            "Re(z) = 0: real-part effective quantities undefined "
            "(strongly asymmetric detunings)"
        )
    abs_zR = abs(ints.z_R)
    g2N = p.g_coll ** 2

    Lambda = p.g1 ** 2 * alpha ** 2 * ((x + y - 2.0 * p.J) / z).real
    G_eff = p.g1 * p.g_coll * (alpha / z) * (y - p.J)
    G_bar_eff = p.g1 * p.g_coll * (alpha / z) * (x - p.J)
    G_eff_R = p.g1 * p.g_coll * alpha * (d.delta_R_prime + p.J) / abs_zR
    G_bar_eff_R = p.g1 * p.g_coll * alpha * (d.delta_L_prime + p.J) / abs_zR

    return EffectiveParams(
        Lambda=Lambda,
        omega_m_tilde=p.omega_m + Lambda,
        G_eff=G_eff,
        G_bar_eff=G_bar_eff,
        G_eff_R=G_eff_R,
        G_bar_eff_R=G_bar_eff_R,
        Delta_L_prime_R=p.Delta_L - g2N * d.delta_R_prime / abs_zR,
        Delta_R_prime_R=p.Delta_R - g2N * d.delta_L_prime / abs_zR,
        C=-g2N * p.J / abs_zR,
        gamma_at_eff=p.gamma_at - g2N * p.gamma_c / abs_zR,
        antisymmetric=d.antisymmetric,
    )


def raman_splitting(p: SystemParams) -> RamanSplitting:
    """Cavity normal-mode splitting 2J and its resonance with omega_m."""
    splitting = 2.0 * p.J
    if p.omega_m <= 0.0:
        return RamanSplitting(splitting, False)
    deviation = abs(splitting - p.omega_m) / p.omega_m
    return RamanSplitting(splitting, deviation <= RESONANCE_WINDOW)


def regime_classify(p: SystemParams) -> RegimeReport:
    """Classify the parameter set as CaseI, CaseII or Neither.

    CaseI: the normal-mode splitting 2J is Raman-resonant with omega_m
    and the direct exchange |C| exceeds both real-part membrane
    couplings.  CaseII: tunnelling is negligible (J/|delta'_L| within
    RESONANCE_WINDOW) and g1*alpha dominates g_coll*J/|delta'_L| by
    DOMINANCE_FACTOR.  CaseI takes precedence if both hold.
    """
    e = effective_params(p)
    d = derived_detunings(p)
    splitting, resonant = raman_splitting(p)
    raman_deviation = (abs(splitting - p.omega_m) / p.omega_m
                       if p.omega_m > 0.0 else math.inf)

    g_max = max(abs(e.G_eff_R), abs(e.G_bar_eff_R))
    coupling_dominance = abs(e.C) / g_max if g_max > 0.0 else math.inf
    case1 = resonant and abs(e.C) > g_max

    dpl = abs(d.delta_L_prime)
    if dpl > 0.0:
        tunnelling_ratio = p.J / dpl
        rhs = p.g_coll * p.J / dpl
    else:
        tunnelling_ratio = 0.0 if p.J == 0.0 else math.inf
        rhs = 0.0 if p.J == 0.0 else math.inf
    lhs = p.g1 * p.alpha_L
    membrane_coupling_ratio = lhs / rhs if rhs > 0.0 else math.inf
    case2 = (tunnelling_ratio <= RESONANCE_WINDOW
             and lhs >= DOMINANCE_FACTOR * rhs)

    case = "CaseI" if case1 else ("CaseII" if case2 else "Neither")
    return RegimeReport(
        case=case,
        raman_deviation=raman_deviation,
        coupling_dominance=coupling_dominance,
        tunnelling_ratio=tunnelling_ratio,
        membrane_coupling_ratio=membrane_coupling_ratio,
    )


@dataclass(frozen=True)
class HamiltonianCoefficients:
    """Quadratic-form coefficient table of the effective Hamiltonian.

    H = (1/2) sum_ij Q[i, j] v_i^dag v_j over the interleaved basis
    ``basis`` = (b, b_dag, c_L, c_L_dag, c_R, c_R_dag), where v_i^dag is
    the adjoint of the i-th basis operator.  Q is Hermitian and carries
    the doubled (particle/hole) structure, so the zero-decay drift is
    -i K Q with K = diag(+1, -1, ...).
    """

    basis: tuple[str, ...]
    entries: np.ndarray

    def __post_init__(self):
        self.entries.setflags(write=False)

    def hermiticity_residual(self) -> float:
        """Max |Q - Q^dag| entry, relative to the largest coefficient."""
        scale = np.abs(self.entries).max()
        if scale == 0.0:
            return 0.0
        return float(np.abs(self.entries - self.entries.conj().T).max() / scale)


EFFECTIVE_BASIS = ("b", "b_dag", "c_L", "c_L_dag", "c_R", "c_R_dag")


def effective_hamiltonian_coefficients(e: EffectiveParams) -> HamiltonianCoefficients:
    """Coefficient matrix of the Hermitian effective Hamiltonian.

    Contains the shifted oscillator terms (omega_m_tilde, Stark-shifted
    ensemble detunings), the membrane-ensemble couplings
    (G_eff_R (c_L + c_L^dag) - G_bar_eff_R (c_R + c_R^dag)) (b + b^dag),
    the mechanical squeezing term (Lambda/2)(b^dag^2 + b^2) and the
    ensemble exchange -C (c_L c_R^dag + c_R c_L^dag).  Only defined in
    the antisymmetric configuration.
    """
    if not e.antisymmetric:
        raise InvalidModelError(
            "effective Hamiltonian requires delta'_L = -delta'_R; "
            "run validate() for the configuration warning"
        )
    # single-particle block A (b, c_L, c_R) and pairing block B
    A = np.array([
        [e.omega_m_tilde, e.G_eff_R, -e.G_bar_eff_R],
        [e.G_eff_R, e.Delta_L_prime_R, -e.C],
        [-e.G_bar_eff_R, -e.C, e.Delta_R_prime_R],
    ], dtype=complex)
    B = np.array([
        [e.Lambda, e.G_eff_R, -e.G_bar_eff_R],
        [e.G_eff_R, 0.0, 0.0],
        [-e.G_bar_eff_R, 0.0, 0.0],
    ], dtype=complex)

    Q = np.zeros((6, 6), dtype=complex)
    for i in range(3):
        for j in range(3):
            Q[2 * i, 2 * j] = A[i, j]
            Q[2 * i, 2 * j + 1] = B[i, j]
            Q[2 * i + 1, 2 * j] = np.conj(B[i, j])
            Q[2 * i + 1, 2 * j + 1] = np.conj(A[i, j])
    return HamiltonianCoefficients(basis=EFFECTIVE_BASIS, entries=Q)
