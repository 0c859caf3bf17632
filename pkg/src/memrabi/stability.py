"""Classical steady state and spectral stability of the coupled system.

Three layers, matching how the analysis is actually carried out:

1. classical_steady_state: the nonlinear mean-field fixed point under a
   coherent pump.  Weakly nonlinear (only through the membrane
   displacement), solved by damped fixed-point iteration on the
   radiation shift with a secant fallback.
2. stability_matrix_M: the 2x2 drift of the cavity fluctuations alone,
   membrane and ensembles replaced by their mean values.  Has a closed
   form for antisymmetric detunings: lambda_pm = -gamma_c/2
   +- i sqrt(J^2 + (delta_L - r)^2), always stable.
3. spectrum_full: eigenvalues of the 10x10 drift, split into the fast
   cavity-dominated group and the six slow ones, which are checked
   against the reduced model's spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.optimize

from .dynamics import build_full_drift, build_reduced_drift
from .effective import effective_params
from .errors import NumericalError
from .params import ANTISYMMETRY_TOL, SystemParams

STEADY_STATE_TOL = 1e-10
STEADY_STATE_MAX_ITER = 10_000
FIXED_POINT_DAMPING = 0.5

# Fraction of total eigenvector weight on the cavity components needed to
# call a fast eigenvalue cavity-dominated.
DOMINANCE_THRESHOLD = 0.9

CAVITY_LABELS = ("a_L", "a_L_dag", "a_R", "a_R_dag")


@dataclass(frozen=True)
class ClassicalSteadyState:
    """Mean-field fixed point under a coherent pump on the left cavity.

    r is the radiation shift 2 g1^2 omega_m (|alpha_L|^2 - |alpha_R|^2)
    / (omega_m^2 + (gamma_m/2)^2), the quantity the cavity detunings are
    dressed by in the stability matrix.  residual is the max modulus of
    the five mean-equation right-hand sides at the returned amplitudes;
    convergence means residual <= STEADY_STATE_TOL.  A non-converged
    result is returned as-is (large residual flags proximity to
    instability or bistability) rather than raised.
    """

    alpha_L: complex
    alpha_R: complex
    beta: complex
    xi_L: complex
    xi_R: complex
    r: float
    iterations: int
    residual: float

    @property
    def converged(self) -> bool:
        return self.residual <= STEADY_STATE_TOL


def _mean_equation_residual(p: SystemParams, eps: float, alpha_L: complex,
                            alpha_R: complex, beta: complex,
                            xi_L: complex, xi_R: complex) -> float:
    """Max modulus of the five steady-state equation right-hand sides."""
    disp = beta + np.conj(beta)
    f_aL = (-(p.gamma_c / 2.0 + 1j * p.delta_L) * alpha_L
            + 1j * p.g1 * disp * alpha_L
            - 1j * p.g_coll * xi_L + 1j * p.J * alpha_R - 1j * eps)
    f_aR = (-(p.gamma_c / 2.0 + 1j * p.delta_R) * alpha_R
            - 1j * p.g1 * disp * alpha_R
            - 1j * p.g_coll * xi_R + 1j * p.J * alpha_L)
    f_b = (-(p.gamma_m / 2.0 + 1j * p.omega_m) * beta
           + 1j * p.g1 * (abs(alpha_L) ** 2 - abs(alpha_R) ** 2))
    f_cL = -(p.gamma_at / 2.0 + 1j * p.Delta_L) * xi_L - 1j * p.g_coll * alpha_L
    f_cR = -(p.gamma_at / 2.0 + 1j * p.Delta_R) * xi_R - 1j * p.g_coll * alpha_R
    return max(abs(f_aL), abs(f_aR), abs(f_b), abs(f_cL), abs(f_cR))


def classical_steady_state(p: SystemParams,
                           epsilon: float | None = None) -> ClassicalSteadyState:
    """Solve the mean-field fixed point for pump amplitude epsilon.

    epsilon defaults to p.epsilon.  Given the radiation shift u the
    remaining equations are linear: the ensembles follow the cavities,
    xi = -g_coll alpha / (Delta - i gamma_at/2), and the cavity pair
    satisfies a 2x2 linear system.  The only nonlinearity is the
    self-consistency u = 2 g1 Re(beta), iterated with damping and, if
    that stalls, handed to a secant root-finder.
    """
    eps = p.epsilon if epsilon is None else float(epsilon)
    if eps == 0.0:
        return ClassicalSteadyState(0j, 0j, 0j, 0j, 0j,
                                    r=0.0, iterations=0, residual=0.0)

    sigma_L = p.g_coll ** 2 / (p.Delta_L - 0.5j * p.gamma_at)
    sigma_R = p.g_coll ** 2 / (p.Delta_R - 0.5j * p.gamma_at)
    evaluations = 0

    def solve_given_shift(u: float):
        nonlocal evaluations
        evaluations += 1
        a = np.array([
            [p.delta_L - 0.5j * p.gamma_c - u - sigma_L, -p.J],
            [-p.J, p.delta_R - 0.5j * p.gamma_c + u - sigma_R],
        ], dtype=complex)
        rhs = np.array([-eps, 0.0], dtype=complex)
        try:
            alpha_L, alpha_R = np.linalg.solve(a, rhs)
        except np.linalg.LinAlgError as ex:
            raise NumericalError(
                f"cavity mean-field system singular at shift u = {u!r}: {ex}"
            ) from ex
        beta = (p.g1 * (abs(alpha_L) ** 2 - abs(alpha_R) ** 2)
                / (p.omega_m - 0.5j * p.gamma_m))
        return alpha_L, alpha_R, beta

    def assemble(u: float) -> ClassicalSteadyState:
        alpha_L, alpha_R, beta = solve_given_shift(u)
        xi_L = -p.g_coll * alpha_L / (p.Delta_L - 0.5j * p.gamma_at)
        xi_R = -p.g_coll * alpha_R / (p.Delta_R - 0.5j * p.gamma_at)
        r = (2.0 * p.g1 ** 2 * p.omega_m
             * (abs(alpha_L) ** 2 - abs(alpha_R) ** 2)
             / (p.omega_m ** 2 + (p.gamma_m / 2.0) ** 2))
        residual = _mean_equation_residual(p, eps, alpha_L, alpha_R,
                                           beta, xi_L, xi_R)
        return ClassicalSteadyState(
            alpha_L=complex(alpha_L), alpha_R=complex(alpha_R),
            beta=complex(beta), xi_L=complex(xi_L), xi_R=complex(xi_R),
            r=r, iterations=evaluations, residual=residual,
        )

    u = 0.0
    for _ in range(STEADY_STATE_MAX_ITER):
        alpha_L, alpha_R, beta = solve_given_shift(u)
        u_new = 2.0 * p.g1 * beta.real
        if abs(u_new - u) <= 0.5 * STEADY_STATE_TOL:
            state = assemble(u_new)
            if state.converged:
                return state
            break
        u += FIXED_POINT_DAMPING * (u_new - u)

    # Damped iteration stalled or cycled; chase the root of
    # f(u) = u_new(u) - u directly.
    def mismatch(u_try: float) -> float:
        _, _, beta_try = solve_given_shift(u_try)
        return 2.0 * p.g1 * beta_try.real - u_try

    try:
        u_root = scipy.optimize.newton(mismatch, u, tol=1e-14, maxiter=200)
        return assemble(float(u_root))
    except (RuntimeError, NumericalError):
        return assemble(u)


@dataclass(frozen=True)
class CavityModeStability:
    """The 2x2 cavity-fluctuation drift and its eigenvalues.

    eigenvalues is the numeric pair ordered by descending imaginary
    part; closed_form carries -gamma_c/2 +- i sqrt(J^2 + (delta_L-r)^2)
    in the same order when delta_L = -delta_R, and None otherwise.
    """

    matrix: np.ndarray
    eigenvalues: tuple[complex, complex]
    closed_form: tuple[complex, complex] | None
    r: float
    stable: bool

    def __post_init__(self):
        self.matrix.setflags(write=False)


def stability_matrix_M(p: SystemParams, r: float = 0.0) -> CavityModeStability:
    """Drift of the cavity fluctuations with frozen mean values.

    The bare detunings are dressed by the radiation shift r (either the
    converged ClassicalSteadyState.r or a scan value): delta_L - r on
    the left mode and delta_R + r on the right.  For antisymmetric
    detunings the real parts are exactly -gamma_c/2, so this subsystem
    is stable no matter the pump.
    """
    m = np.array([
        [-1j * (p.delta_L - r) - p.gamma_c / 2.0, 1j * p.J],
        [1j * p.J, -1j * (p.delta_R + r) - p.gamma_c / 2.0],
    ], dtype=complex)
    eig = np.linalg.eigvals(m)
    eig = eig[np.argsort(-eig.imag)]
    closed_form = None
    if abs(p.delta_L + p.delta_R) <= ANTISYMMETRY_TOL:
        root = math.sqrt(p.J ** 2 + (p.delta_L - r) ** 2)
        closed_form = (complex(-p.gamma_c / 2.0, root),
                       complex(-p.gamma_c / 2.0, -root))
    return CavityModeStability(
        matrix=m,
        eigenvalues=(complex(eig[0]), complex(eig[1])),
        closed_form=closed_form,
        r=r,
        stable=bool(np.all(eig.real < 0.0)),
    )


@dataclass(frozen=True)
class StabilityReport:
    """Spectral analysis of the full drift at radiation shift r.

    spectrum holds all ten eigenvalues sorted by ascending real part, so
    fast_indices is simply the first four; cavity_dominance gives, for
    each fast eigenvalue, the squared eigenvector weight on the cavity
    components.  reduced_spectrum and max_slow_deviation quantify how
    well the six slow eigenvalues are reproduced by the post-elimination
    model (relative deviation after optimal pairing).
    """

    spectrum: tuple[complex, ...]
    stable: bool
    fast_indices: tuple[int, ...]
    slow_indices: tuple[int, ...]
    cavity_dominance: tuple[float, ...]
    lambda_plus: complex
    lambda_minus: complex
    reduced_spectrum: tuple[complex, ...]
    max_slow_deviation: float
    r: float


def spectrum_full(p: SystemParams, r: float = 0.0) -> StabilityReport:
    """Eigenvalues of the 10x10 drift, grouped fast/slow.

    A nonzero r dresses the cavity detunings exactly as in
    stability_matrix_M before the drift matrices are built.  The four
    eigenvalues with the most negative real parts form the fast group;
    the other six are matched one-to-one (minimum total distance)
    against the reduced-model spectrum.
    """
    p_shifted = replace(p, delta_L=p.delta_L - r, delta_R=p.delta_R + r)
    full = build_full_drift(p_shifted)
    reduced = build_reduced_drift(p_shifted, effective_params(p_shifted))

    try:
        values, vectors = np.linalg.eig(full.entries)
        reduced_values = np.linalg.eigvals(reduced.entries)
    except np.linalg.LinAlgError as ex:
        try:
            cond = float(np.linalg.cond(full.entries))
        except np.linalg.LinAlgError:
            cond = math.inf
        raise NumericalError(
            f"eigendecomposition failed: {ex} "
            f"(drift condition number {cond:.3e})"
        ) from ex

    order = np.argsort(values.real)
    values = values[order]
    vectors = vectors[:, order]

    cavity_cols = [full.basis.index(lab) for lab in CAVITY_LABELS]
    dominance = []
    for k in range(4):
        v = vectors[:, k]
        weight = float(np.sum(np.abs(v[cavity_cols]) ** 2)
                       / np.sum(np.abs(v) ** 2))
        dominance.append(weight)

    slow = values[4:]
    cost = np.abs(slow[:, None] - reduced_values[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    deviations = [
        cost[i, j] / max(abs(reduced_values[j]), 1e-300)
        for i, j in zip(rows, cols)
    ]

    cavity = stability_matrix_M(p, r)
    return StabilityReport(
        spectrum=tuple(complex(v) for v in values),
        stable=bool(np.all(values.real < 0.0)),
        fast_indices=tuple(range(4)),
        slow_indices=tuple(range(4, 10)),
        cavity_dominance=tuple(dominance),
        lambda_plus=cavity.eigenvalues[0],
        lambda_minus=cavity.eigenvalues[1],
        reduced_spectrum=tuple(complex(v) for v in reduced_values),
        max_slow_deviation=float(max(deviations)),
        r=r,
    )
