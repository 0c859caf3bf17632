"""Physical parameter set: definition, validation, unit handling, config I/O.

Internally every rate and detuning is an angular frequency in rad/us and
time is measured in us.  Config files, by default, take plain numbers that
are interpreted as "value x 2pi MHz" (so ``gamma_c = 10`` means
gamma_c = 2pi x 10 MHz = 62.83 rad/us); a per-file ``units = rad_per_us``
key switches the file to raw internal units.  Amplitudes (alpha, beta),
occupancies and temperatures are never rescaled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from scipy.constants import hbar, k as k_B

from .errors import ConfigError

TWO_PI = 2.0 * math.pi

# |delta'_L + delta'_R| below this (rad/us) counts as antisymmetric.
ANTISYMMETRY_TOL = 1e-9

# "much larger" threshold used by the adiabatic-regime warnings.
HIERARCHY_RATIO = 5.0


@dataclass(frozen=True)
class SystemParams:
    """Complete parameter set of the linearized two-mode cavity model.

    Attributes
    ----------
    gamma_c : float
        Amplitude decay rate of each cavity mode (rad/us); both modes are
        taken equal.
    gamma_at : float
        Decay rate of each collective ensemble mode (rad/us).
    gamma_m : float
        Mechanical dissipation rate of the membrane mode (rad/us).
    omega_m : float
        Membrane frequency (rad/us).
    J : float
        Photon tunnelling rate between the left and right cavity modes.
    g1 : float
        Single-photon optomechanical coupling (rad/us).
    g_coll : float
        Collective atom-cavity coupling, i.e. the single-atom coupling
        enhanced by sqrt(N).  Only this product enters the dynamics; the
        bare coupling and atom number are optional metadata.
    delta_L, delta_R : float
        Bare cavity-laser detunings (rad/us).
    Delta_L, Delta_R : float
        Ensemble-laser detunings (rad/us).
    alpha_L, alpha_R : float
        Classical (mean-field) cavity amplitudes, real by phase convention.
    beta : float
        Classical membrane displacement amplitude, real by convention.
    epsilon : float
        Pump amplitude (rad/us); only the steady-state solver uses it.
    n_th : float
        Thermal occupancy of the mechanical bath.  Recorded for
        completeness; the mean-value dynamics do not depend on it.
    g_bar, n_atoms, T_kelvin : optional metadata
        Bare single-atom coupling, atom number and bath temperature, kept
        only for documentation output (``T_kelvin`` also feeds config
        round-trips).  ``None`` when unknown.
    """

    gamma_c: float
    gamma_at: float
    gamma_m: float
    omega_m: float
    J: float = 0.0
    g1: float = 0.0
    g_coll: float = 0.0
    delta_L: float = 0.0
    delta_R: float = 0.0
    Delta_L: float = 0.0
    Delta_R: float = 0.0
    alpha_L: float = 0.0
    alpha_R: float = 0.0
    beta: float = 0.0
    epsilon: float = 0.0
    n_th: float = 0.0
    g_bar: float | None = None
    n_atoms: float | None = None
    T_kelvin: float | None = None


@dataclass(frozen=True)
class DerivedDetunings:
    """Cavity detunings including the static optomechanical shift.

    delta_L_prime = delta_L - 2 g1 beta and
    delta_R_prime = delta_R + 2 g1 beta; the membrane displacement pushes
    the two mode frequencies in opposite directions.  ``antisymmetric`` is
    true when delta_L_prime = -delta_R_prime to within ANTISYMMETRY_TOL,
    which is the regime where the effective-Hamiltonian model applies.
    """

    delta_L_prime: float
    delta_R_prime: float
    antisymmetric: bool


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate(): hard errors and advisory warnings."""

    errors: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


def derived_detunings(p: SystemParams) -> DerivedDetunings:
    """Shifted detunings delta' = delta -/+ 2 g1 beta for the L/R modes."""
    shift = 2.0 * p.g1 * p.beta
    dl = p.delta_L - shift
    dr = p.delta_R + shift
    return DerivedDetunings(
        delta_L_prime=dl,
        delta_R_prime=dr,
        antisymmetric=abs(dl + dr) <= ANTISYMMETRY_TOL,
    )


def validate(p: SystemParams) -> ValidationReport:
    """Check hard invariants and the adiabatic-regime hierarchy.

    Hard errors: non-positive decay rates or mechanical frequency,
    negative couplings, negative thermal occupancy.  Warnings flag
    parameter sets where the adiabatic elimination of the cavity modes is
    not justified (gamma_c not much larger than gamma_at, gamma_m, or
    |delta'| not much larger than Delta; "much larger" means a factor of
    HIERARCHY_RATIO) and configurations where the effective-Hamiltonian
    model is unavailable.
    """
    errors = []
    warnings = []

    for name in ("gamma_c", "gamma_at", "gamma_m"):
        if getattr(p, name) <= 0.0:
            errors.append(f"non-positive decay rate: {name} = {getattr(p, name)!r}")
    if p.omega_m <= 0.0:
        errors.append(f"non-positive mechanical frequency: omega_m = {p.omega_m!r}")
    for name in ("J", "g1", "g_coll"):
        if getattr(p, name) < 0.0:
            errors.append(f"negative coupling: {name} = {getattr(p, name)!r}")
    if p.n_th < 0.0:
        errors.append(f"negative thermal occupancy: n_th = {p.n_th!r}")

    if errors:
        return ValidationReport(tuple(errors), tuple(warnings))

    for name in ("gamma_at", "gamma_m"):
        rate = getattr(p, name)
        if rate > 0.0 and p.gamma_c / rate < HIERARCHY_RATIO:
            warnings.append(
                "adiabatic hierarchy violated: "
                f"gamma_c/{name} = {p.gamma_c / rate:.3g} < {HIERARCHY_RATIO:g}"
            )
    d = derived_detunings(p)
    for dp, Delta, side in (
        (d.delta_L_prime, p.Delta_L, "L"),
        (d.delta_R_prime, p.Delta_R, "R"),
    ):
        if abs(dp) < HIERARCHY_RATIO * abs(Delta):
            warnings.append(
                "adiabatic hierarchy violated: "
                f"|delta'_{side}| = {abs(dp):.6g} rad/us is not >= "
                f"{HIERARCHY_RATIO:g} x |Delta_{side}| = {abs(Delta):.6g} rad/us"
            )
    if not d.antisymmetric:
        warnings.append(
            "modified detunings are not antisymmetric "
            f"(delta'_L + delta'_R = {d.delta_L_prime + d.delta_R_prime:.6g} rad/us); "
            "the effective-Hamiltonian model is invalid for this configuration"
        )
    if p.alpha_L != p.alpha_R:
        warnings.append(
            "alpha_L != alpha_R; the adiabatic-elimination formulas assume "
            "equal classical amplitudes and use alpha_L"
        )

    return ValidationReport(tuple(errors), tuple(warnings))


def pump_amplitude(power_watts: float, gamma_c: float, omega_l: float) -> float:
    """Pump amplitude epsilon = sqrt(2 gamma_c P / (hbar omega_l)).

    P / (hbar omega_l) is the photon flux of the drive.  ``power_watts``
    is in watts; ``gamma_c`` and ``omega_l`` are angular frequencies in
    rad/us, and the returned epsilon is in rad/us as well, so the flux is
    converted to photons per microsecond internally.
    """
    if gamma_c <= 0.0:
        raise ValueError(f"gamma_c must be positive, got {gamma_c!r}")
    if omega_l <= 0.0:
        raise ValueError(f"omega_l must be positive, got {omega_l!r}")
    if power_watts < 0.0:
        raise ValueError(f"power must be non-negative, got {power_watts!r}")
    omega_l_si = omega_l * 1e6                      # rad/s
    flux_per_us = power_watts / (hbar * omega_l_si) * 1e-6
    return math.sqrt(2.0 * gamma_c * flux_per_us)


def thermal_occupancy(omega_m: float, temperature_K: float) -> float:
    """Bose occupancy 1/(exp(hbar omega_m / k_B T) - 1) of the bath.

    ``omega_m`` in rad/us, ``temperature_K`` in kelvin.  Returns 0 at
    T = 0 (the zero-temperature limit of the formula).
    """
    if omega_m <= 0.0:
        raise ValueError(f"omega_m must be positive, got {omega_m!r}")
    if temperature_K < 0.0:
        raise ValueError(f"temperature must be non-negative, got {temperature_K!r}")
    if temperature_K == 0.0:
        return 0.0
    x = hbar * (omega_m * 1e6) / (k_B * temperature_K)
    if x > 700.0:  # expm1 would overflow; occupancy is e^-x to this accuracy
        return math.exp(-x)
    return 1.0 / math.expm1(x)


# --------------------------------------------------------------------------
# Config file handling.
#
# Format: flat "key = value" lines, '#' starts a comment, blank lines
# ignored.  Frequencies follow the file's unit convention; alpha and beta
# are dimensionless and T_kelvin is in kelvin regardless of convention.

_FREQUENCY_KEYS = (
    "gamma_c", "gamma_at", "gamma_m", "omega_m", "J", "g1", "g_coll",
    "delta_L", "delta_R", "delta_L_prime", "delta_R_prime",
    "Delta_L", "Delta_R", "epsilon",
)
_DIMENSIONLESS_KEYS = ("alpha", "beta")
_OTHER_KEYS = ("T_kelvin", "units")
CONFIG_KEYS = _FREQUENCY_KEYS + _DIMENSIONLESS_KEYS + _OTHER_KEYS

_REQUIRED_KEYS = ("gamma_c", "gamma_at", "gamma_m", "omega_m")

UNIT_CONVENTIONS = ("two_pi_MHz", "rad_per_us")


@dataclass(frozen=True)
class ParsedConfig:
    """A parsed config file: the parameter set, its unit convention and
    any advisory notes produced during parsing."""

    params: SystemParams
    units: str
    warnings: tuple[str, ...]

    def to_internal(self, value: float) -> float:
        """Convert a frequency in file units to rad/us."""
        return value * TWO_PI if self.units == "two_pi_MHz" else value

    def from_internal(self, value: float) -> float:
        """Convert a frequency in rad/us back to file units."""
        return value / TWO_PI if self.units == "two_pi_MHz" else value


def _parse_lines(text: str) -> dict[str, tuple[str, int]]:
    """Split config text into {key: (raw value, line number)}."""
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = (value, lineno)
    return entries


def parse_config(text: str) -> ParsedConfig:
    """Parse config text into a SystemParams.

    The two detuning pathways are mutually exclusive: either
    ``delta_L_prime``/``delta_R_prime`` (stored with beta = 0, so the
    derived detunings equal the given values) or ``delta_L``/``delta_R``
    with an optional ``beta``.  The primed pathway is the unambiguous one;
    combining a bare detuning with a nonzero static shift is accepted but
    flagged, because quoted "detuning" values in this regime frequently
    already include the shift.
    """
    entries = _parse_lines(text)
    warnings: list[str] = []

    units = "two_pi_MHz"
    if "units" in entries:
        raw, lineno = entries["units"]
        units = raw.strip("\"'")
        if units not in UNIT_CONVENTIONS:
            raise ConfigError(
                f"line {lineno}: units must be one of {UNIT_CONVENTIONS}, got {units!r}"
            )

    def get_float(key: str) -> float | None:
        if key not in entries:
            return None
        raw, lineno = entries[key]
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"line {lineno}: invalid number for {key!r}: {raw!r}") from None

    def to_internal(value: float) -> float:
        return value * TWO_PI if units == "two_pi_MHz" else value

    for key in _REQUIRED_KEYS:
        if key not in entries:
            raise ConfigError(f"missing required key {key!r}")

    prime_keys = [k for k in ("delta_L_prime", "delta_R_prime") if k in entries]
    bare_keys = [k for k in ("delta_L", "delta_R", "beta") if k in entries]
    if prime_keys and bare_keys:
        raise ConfigError(
            f"config mixes detuning pathways: {prime_keys} with {bare_keys}; "
            "give either delta_L_prime/delta_R_prime or delta_L/delta_R (+ beta)"
        )
    if prime_keys and len(prime_keys) != 2:
        raise ConfigError("delta_L_prime and delta_R_prime must be given together")

    values = {key: get_float(key) for key in CONFIG_KEYS
              if key not in ("units",) and key in entries}

    kwargs: dict[str, float] = {}
    for key in ("gamma_c", "gamma_at", "gamma_m", "omega_m", "J", "g1", "g_coll",
                "Delta_L", "Delta_R", "epsilon"):
        if key in values:
            kwargs[key] = to_internal(values[key])

    if prime_keys:
        # beta = 0 makes the derived detunings equal the primed inputs
        kwargs["delta_L"] = to_internal(values["delta_L_prime"])
        kwargs["delta_R"] = to_internal(values["delta_R_prime"])
        kwargs["beta"] = 0.0
    else:
        if "delta_L" in values:
            kwargs["delta_L"] = to_internal(values["delta_L"])
        if "delta_R" in values:
            kwargs["delta_R"] = to_internal(values["delta_R"])
        if "beta" in values:
            kwargs["beta"] = values["beta"]
        shift = 2.0 * kwargs.get("g1", 0.0) * kwargs.get("beta", 0.0)
        if shift != 0.0:
            warnings.append(
                "bare-detuning pathway with nonzero 2*g1*beta = "
                f"{shift:.6g} rad/us: the modified detunings differ from the "
                "inputs; if your quoted detunings already include the static "
                "shift, use delta_L_prime/delta_R_prime instead"
            )

    if "alpha" in values:
        kwargs["alpha_L"] = values["alpha"]
        kwargs["alpha_R"] = values["alpha"]

    if "T_kelvin" in values:
        temperature = values["T_kelvin"]
        _, lineno = entries["T_kelvin"]
        try:
            kwargs["n_th"] = thermal_occupancy(kwargs["omega_m"], temperature)
        except ValueError as ex:
            raise ConfigError(f"line {lineno}: {ex}") from None
        kwargs["T_kelvin"] = temperature

    return ParsedConfig(SystemParams(**kwargs), units, tuple(warnings))


def load_config(path: str) -> ParsedConfig:
    """Read and parse a config file."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_config(text)
    except ConfigError as ex:
        raise ConfigError(f"{path}: {ex}") from None


def dump_config(p: SystemParams, units: str = "two_pi_MHz") -> str:
    """Serialize a SystemParams to canonical config text.

    The output uses the bare-detuning pathway (delta_L/delta_R/beta),
    repr-precision floats (so values survive the round trip well beyond
    12 significant digits) and a fixed key order.  Parameter sets that the
    config format cannot express (unequal cavity amplitudes, or a nonzero
    n_th without a recorded temperature) raise ValueError.
    """
    if units not in UNIT_CONVENTIONS:
        raise ValueError(f"units must be one of {UNIT_CONVENTIONS}, got {units!r}")
    if p.alpha_L != p.alpha_R:
        raise ValueError("config format cannot express alpha_L != alpha_R")
    if p.T_kelvin is None and p.n_th != 0.0:
        raise ValueError("config format sets n_th via T_kelvin only; "
                         "n_th is nonzero but T_kelvin is not recorded")

    def from_internal(value: float) -> float:
        return value / TWO_PI if units == "two_pi_MHz" else value

    lines = [f"units = {units}"]
    for key in ("gamma_c", "gamma_at", "gamma_m", "omega_m", "J", "g1", "g_coll",
                "delta_L", "delta_R", "Delta_L", "Delta_R", "epsilon"):
        lines.append(f"{key} = {float(from_internal(getattr(p, key)))!r}")
    lines.append(f"beta = {float(p.beta)!r}")
    lines.append(f"alpha = {float(p.alpha_L)!r}")
    if p.T_kelvin is not None:
        lines.append(f"T_kelvin = {float(p.T_kelvin)!r}")
    return "\n".join(lines) + "\n"


def with_alpha(p: SystemParams, alpha: float) -> SystemParams:
    """Convenience copy with both classical cavity amplitudes set."""
    return replace(p, alpha_L=alpha, alpha_R=alpha)


def param_field_names() -> tuple[str, ...]:
    """Names of the scalar SystemParams fields (sweepable quantities)."""
    return tuple(f.name for f in fields(SystemParams)
                 if f.name not in ("g_bar", "n_atoms", "T_kelvin"))
