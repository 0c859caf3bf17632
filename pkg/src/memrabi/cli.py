"""Command-line front end.

Five subcommands over a shared flat config format:

* effective -- table of post-elimination coefficients plus the regime
  classification,
* simulate  -- trajectory CSV (plot-ready populations) and a summary
  with the extracted Rabi period,
* sweep     -- effective quantities or cavity eigenvalues versus one
  swept parameter, as CSV,
* stability -- spectrum of the full drift with fast/slow grouping, or a
  radiation-shift scan of the cavity 2x2 eigenvalues,
* regime    -- just the classification and its condition ratios.

Frequencies are printed in the config file's own unit convention
(2pi MHz by default).  Exit codes: 0 success, 1 config/usage/validation
error, 2 runtime or numerical failure.
"""

from __future__ import annotations

import argparse
import math
import json
import sys
from dataclasses import replace

import numpy as np

from .dynamics import (
    POPULATIONS,
    Trajectory,
    build_effective_drift,
    build_full_drift,
    build_reduced_drift,
    initial_state,
    integrate,
    rabi_period,
)
from .effective import (
    effective_params,
    elimination_intermediates,
    raman_splitting,
    regime_classify,
)
from .errors import (
    ConfigError,
    InsufficientDataError,
    InvalidModelError,
    NumericalError,
    SingularEliminationError,
)
from .params import (
    TWO_PI,
    ParsedConfig,
    dump_config,
    load_config,
    param_field_names,
    validate,
    with_alpha,
)
from .stability import classical_steady_state, spectrum_full, stability_matrix_M

_DIMENSIONLESS_VARS = frozenset(
    {"alpha", "alpha_L", "alpha_R", "beta", "n_th"})


class _Handled(Exception):
    """Internal control flow: command already finished with this code."""

    def __init__(self, code: int):
        super().__init__(code)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the documented contract reserves
    2 for runtime failures, so remap usage problems to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _freq_out(parsed: ParsedConfig):
    """Internal rad/us -> file-unit converter and its unit label."""
    if parsed.units == "two_pi_MHz":
        return (lambda v: v / TWO_PI), "2pi MHz"
    return (lambda v: v), "rad/us"


def _load(args) -> ParsedConfig:
    """Load the config; honor --dump-config; enforce validation."""
    parsed = load_config(args.config)
    for note in parsed.warnings:
        print(f"warning: {note}", file=sys.stderr)
    if args.dump_config:
        # Canonical form in raw internal units: repr round-trips floats
        # exactly, so re-parsing reproduces this parameter set bit for bit.
        sys.stdout.write(dump_config(parsed.params, units="rad_per_us"))
        raise _Handled(0)
    report = validate(parsed.params)
    for note in report.warnings:
        print(f"warning: {note}", file=sys.stderr)
    if report.errors:
        for note in report.errors:
            print(f"error: {note}", file=sys.stderr)
        raise _Handled(1)
    return parsed


def _write_output(args, body: str, summary: str | None = None) -> None:
    """Primary output to --out (or stdout); summary to stdout (or stderr).

    The summary never shares a stream with the body, so piping the CSV
    stays clean."""
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(body)
        if summary:
            sys.stdout.write(summary)
    else:
        sys.stdout.write(body)
        if summary:
            sys.stderr.write(summary)


def _json_value(x):
    """JSON-safe scalar: complex -> [re, im], non-finite -> string."""
    if isinstance(x, complex):
        return [_json_value(x.real), _json_value(x.imag)]
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def _json_dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------- effective

def cmd_effective(args) -> int:
    parsed = _load(args)
    p = parsed.params
    conv, unit = _freq_out(parsed)
    e = effective_params(p)
    ints = elimination_intermediates(p)
    reg = regime_classify(p)
    ram = raman_splitting(p)
    conv2 = (lambda v: v / TWO_PI ** 2) if parsed.units == "two_pi_MHz" \
        else (lambda v: v)

    if args.json:
        payload = {
            "units": parsed.units,
            "effective": {
                "Lambda": conv(e.Lambda),
                "omega_m_tilde": conv(e.omega_m_tilde),
                "G_eff": _json_value(complex(conv(e.G_eff.real),
                                             conv(e.G_eff.imag))),
                "G_bar_eff": _json_value(complex(conv(e.G_bar_eff.real),
                                                 conv(e.G_bar_eff.imag))),
                "G_eff_R": conv(e.G_eff_R),
                "G_bar_eff_R": conv(e.G_bar_eff_R),
                "Delta_L_prime_R": conv(e.Delta_L_prime_R),
                "Delta_R_prime_R": conv(e.Delta_R_prime_R),
                "C": conv(e.C),
                "gamma_at_eff": conv(e.gamma_at_eff),
                "antisymmetric": e.antisymmetric,
            },
            "elimination": {
                "z_R": conv2(ints.z_R),
                "z_R_variant": conv2(ints.z_R_variant),
                "z_R_discrepancy": _json_value(ints.z_R_discrepancy),
            },
            "regime": {
                "case": reg.case,
                "raman_deviation": _json_value(reg.raman_deviation),
                "coupling_dominance": _json_value(reg.coupling_dominance),
                "tunnelling_ratio": _json_value(reg.tunnelling_ratio),
                "membrane_coupling_ratio":
                    _json_value(reg.membrane_coupling_ratio),
            },
            "raman": {"splitting": conv(ram.splitting),
                      "resonant": ram.resonant},
        }
        _write_output(args, _json_dumps(payload))
        return 0

    def cplx(z: complex) -> str:
        sign = "+" if z.imag >= 0 else "-"
        return f"{conv(z.real):.10g} {sign} {abs(conv(z.imag)):.10g}i"

    lines = [f"effective parameters ({unit})"]
    rows = [
        ("Lambda", f"{conv(e.Lambda):.10g}"),
        ("omega_m_tilde", f"{conv(e.omega_m_tilde):.10g}"),
        ("G_eff", cplx(e.G_eff)),
        ("G_bar_eff", cplx(e.G_bar_eff)),
        ("G_eff_R", f"{conv(e.G_eff_R):.10g}"),
        ("G_bar_eff_R", f"{conv(e.G_bar_eff_R):.10g}"),
        ("Delta_L_prime_R", f"{conv(e.Delta_L_prime_R):.10g}"),
        ("Delta_R_prime_R", f"{conv(e.Delta_R_prime_R):.10g}"),
        ("C", f"{conv(e.C):.10g}"),
        ("gamma_at_eff", f"{conv(e.gamma_at_eff):.10g}"),
        ("antisymmetric", "yes" if e.antisymmetric else "no"),
    ]
    width = max(len(name) for name, _ in rows)
    lines += [f"  {name:<{width}}  {value}" for name, value in rows]
    lines.append(
        f"z_R = {conv2(ints.z_R):.10g} ({unit})^2; "
        f"variant with gamma_c^2/2 differs by {ints.z_R_discrepancy:.3%}"
    )
    lines.append(f"regime: {reg.case}")
    lines.append(
        f"  raman splitting 2J = {conv(ram.splitting):.10g} {unit} "
        f"({'resonant' if ram.resonant else 'off-resonant'}, "
        f"deviation {reg.raman_deviation:.4g})"
    )
    lines.append(f"  |C| / max|G_R|           = {reg.coupling_dominance:.6g}")
    lines.append(f"  J / |delta'_L|           = {reg.tunnelling_ratio:.6g}")
    lines.append(f"  membrane coupling margin = "
                 f"{reg.membrane_coupling_ratio:.6g}")
    _write_output(args, "\n".join(lines) + "\n")
    return 0


# ----------------------------------------------------------------- simulate

def _parse_inits(specs: list[str]) -> dict[str, complex]:
    values: dict[str, complex] = {}
    for spec in specs:
        label, sep, raw = spec.partition("=")
        label = label.strip()
        if not sep or not label or not raw.strip():
            raise ValueError(
                f"--init expects label=re[,im], got {spec!r}")
        parts = raw.split(",")
        if len(parts) > 2:
            raise ValueError(
                f"--init expects label=re[,im], got {spec!r}")
        try:
            real = float(parts[0])
            imag = float(parts[1]) if len(parts) == 2 else 0.0
        except ValueError:
            raise ValueError(
                f"--init expects numeric re[,im], got {spec!r}") from None
        if label in values:
            raise ValueError(f"--init given twice for label {label!r}")
        values[label] = complex(real, imag)
    return values


def _build_drift(p, model: str):
    if model == "full":
        return build_full_drift(p)
    if model == "reduced":
        return build_reduced_drift(p, effective_params(p))
    if model == "effective":
        return build_effective_drift(effective_params(p), p)
    raise ValueError(f"unknown model {model!r}")


def trajectory_csv(traj: Trajectory, normalize_time: bool = False) -> str:
    """Render a trajectory as CSV: time, re/im of every component, then
    all five population columns (zeros for modes the model lacks)."""
    time_label = "t_norm" if normalize_time else "t_us"
    header = [time_label]
    for label in traj.basis:
        header += [f"re_{label}", f"im_{label}"]
    header += [pop for pop, _ in POPULATIONS]

    scale = TWO_PI if normalize_time else 1.0
    lines = [",".join(header)]
    for k in range(traj.t.size):
        row = [repr(float(traj.t[k] * scale))]
        for col in range(len(traj.basis)):
            value = traj.states[k, col]
            row += [repr(float(value.real)), repr(float(value.imag))]
        for pop, _ in POPULATIONS:
            series = traj.populations.get(pop)
            row.append("0.0" if series is None else repr(float(series[k])))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def cmd_simulate(args) -> int:
    parsed = _load(args)
    p = parsed.params
    inits = _parse_inits(args.init) if args.init else {"c_L": complex(1.0)}
    drift = _build_drift(p, args.model)
    x0 = initial_state(drift, inits)
    traj = integrate(drift, x0, t_max=args.t_max, dt_out=args.dt_out,
                     method=args.method)

    summary_lines = []
    try:
        period = rabi_period(traj, "pop_cL")
        summary_lines.append(f"estimated Rabi period: {period:.6g} us")
    except InsufficientDataError as ex:
        summary_lines.append(f"estimated Rabi period: unavailable ({ex})")
    except ValueError:
        summary_lines.append(
            "estimated Rabi period: unavailable (no pop_cL in this model)")
    C = effective_params(p).C
    if C != 0.0:
        summary_lines.append(f"predicted pi/|C| period: "
                             f"{math.pi / abs(C):.6g} us")
    else:
        summary_lines.append("predicted pi/|C| period: n/a (C = 0)")
    cavity_max = 0.0
    for pop in ("pop_aL", "pop_aR"):
        series = traj.populations.get(pop)
        if series is not None:
            cavity_max = max(cavity_max, float(series.max()))
    summary_lines.append(f"max cavity population: {cavity_max:.6g}")

    _write_output(args, trajectory_csv(traj, args.normalize_time),
                  "\n".join(summary_lines) + "\n")
    return 0


# -------------------------------------------------------------------- sweep

def _sweep_registry():
    """Emittable column -> (function of params, 2pi-power for unit
    conversion).  Power 1 marks plain frequencies, 2 squared ones, 0
    dimensionless values."""

    def eff(attr, power=1):
        return (lambda p: getattr(effective_params(p), attr)), power

    registry = {
        "C": eff("C"),
        "abs_C": ((lambda p: abs(effective_params(p).C)), 1),
        "G_eff_R": eff("G_eff_R"),
        "G_bar_eff_R": eff("G_bar_eff_R"),
        "Lambda": eff("Lambda"),
        "omega_m_tilde": eff("omega_m_tilde"),
        "gamma_at_eff": eff("gamma_at_eff"),
        "Delta_L_prime_R": eff("Delta_L_prime_R"),
        "Delta_R_prime_R": eff("Delta_R_prime_R"),
        "z_R": ((lambda p: elimination_intermediates(p).z_R), 2),
        "lambda_plus_re":
            ((lambda p: stability_matrix_M(p).eigenvalues[0].real), 1),
        "lambda_plus_im":
            ((lambda p: stability_matrix_M(p).eigenvalues[0].imag), 1),
        "lambda_minus_re":
            ((lambda p: stability_matrix_M(p).eigenvalues[1].real), 1),
        "lambda_minus_im":
            ((lambda p: stability_matrix_M(p).eigenvalues[1].imag), 1),
    }
    return registry


def cmd_sweep(args) -> int:
    parsed = _load(args)
    p = parsed.params

    sweepable = param_field_names() + ("alpha",)
    if args.var not in sweepable:
        raise ValueError(
            f"unknown sweep variable {args.var!r}; "
            f"choose from {', '.join(sweepable)}")
    if args.steps < 2:
        raise ValueError(f"--steps must be >= 2, got {args.steps}")

    registry = _sweep_registry()
    emit = [name.strip() for name in args.emit.split(",") if name.strip()]
    if not emit:
        raise ValueError("--emit lists no columns")
    for name in emit:
        if name not in registry:
            raise ValueError(
                f"unknown output column {name!r}; "
                f"choose from {', '.join(sorted(registry))}")

    freq_var = args.var not in _DIMENSIONLESS_VARS
    if parsed.units == "two_pi_MHz":
        unit_scale = [1.0 / TWO_PI ** registry[name][1] for name in emit]
    else:
        unit_scale = [1.0] * len(emit)

    lines = [",".join([args.var] + emit)]
    for value in np.linspace(args.start, args.stop, args.steps):
        value = float(value)
        internal = parsed.to_internal(value) if freq_var else value
        if args.var == "alpha":
            point = with_alpha(p, internal)
        else:
            point = replace(p, **{args.var: internal})
        row = [repr(value)]
        for name, scale in zip(emit, unit_scale):
            func, _ = registry[name]
            row.append(repr(float(func(point) * scale)))
        lines.append(",".join(row))
    _write_output(args, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------- stability

def _parse_radiation_shifts(parsed: ParsedConfig, spec: str) -> list[float]:
    shifts = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        if token == "steady":
            state = classical_steady_state(parsed.params)
            if not state.converged:
                print(
                    "warning: steady state not converged "
                    f"(residual {state.residual:.3e}); using its r anyway",
                    file=sys.stderr)
            shifts.append(state.r)
        else:
            try:
                shifts.append(parsed.to_internal(float(token)))
            except ValueError:
                raise ValueError(
                    f"--radiation-shift expects numbers or 'steady', "
                    f"got {token!r}") from None
    if not shifts:
        raise ValueError("--radiation-shift lists no values")
    return shifts


def _stability_report_text(report, parsed: ParsedConfig) -> str:
    conv, unit = _freq_out(parsed)
    lines = [
        f"stability at radiation shift r = {conv(report.r):.10g} {unit}",
        f"verdict: {'STABLE' if report.stable else 'UNSTABLE'}",
        "cavity 2x2 eigenvalues:",
        f"  lambda_plus  = {conv(report.lambda_plus.real):.10g} "
        f"{'+' if report.lambda_plus.imag >= 0 else '-'} "
        f"{abs(conv(report.lambda_plus.imag)):.10g}i",
        f"  lambda_minus = {conv(report.lambda_minus.real):.10g} "
        f"{'+' if report.lambda_minus.imag >= 0 else '-'} "
        f"{abs(conv(report.lambda_minus.imag)):.10g}i",
        f"full drift spectrum (10 eigenvalues, {unit}):",
        f"  {'re':>24} {'im':>24}  group",
    ]
    for k, value in enumerate(report.spectrum):
        if k in report.fast_indices:
            weight = report.cavity_dominance[report.fast_indices.index(k)]
            group = f"fast (cavity weight {weight:.4f})"
        else:
            group = "slow"
        lines.append(f"  {repr(float(conv(value.real))):>24} "
                     f"{repr(float(conv(value.imag))):>24}  {group}")
    lines.append(
        "reduced-model match of the slow group: "
        f"max relative deviation {report.max_slow_deviation:.4g}")
    return "\n".join(lines) + "\n"


def cmd_stability(args) -> int:
    parsed = _load(args)
    conv, _ = _freq_out(parsed)
    shifts = _parse_radiation_shifts(parsed, args.radiation_shift)

    if len(shifts) == 1:
        report = spectrum_full(parsed.params, shifts[0])
        if args.json:
            payload = {
                "r": conv(report.r),
                "units": parsed.units,
                "stable": report.stable,
                "spectrum": [_json_value(complex(conv(v.real), conv(v.imag)))
                             for v in report.spectrum],
                "fast_indices": list(report.fast_indices),
                "slow_indices": list(report.slow_indices),
                "cavity_dominance": [float(w)
                                     for w in report.cavity_dominance],
                "lambda_plus": _json_value(
                    complex(conv(report.lambda_plus.real),
                            conv(report.lambda_plus.imag))),
                "lambda_minus": _json_value(
                    complex(conv(report.lambda_minus.real),
                            conv(report.lambda_minus.imag))),
                "reduced_spectrum": [
                    _json_value(complex(conv(v.real), conv(v.imag)))
                    for v in report.reduced_spectrum],
                "max_slow_deviation": float(report.max_slow_deviation),
            }
            _write_output(args, _json_dumps(payload))
        else:
            _write_output(args, _stability_report_text(report, parsed))
        return 0

    # radiation-shift scan: one row of cavity eigenvalues per value
    rows = []
    for r in shifts:
        cav = stability_matrix_M(parsed.params, r)
        rows.append((r, cav))
    if args.json:
        payload = {
            "units": parsed.units,
            "scan": [
                {
                    "r": conv(r),
                    "lambda_plus": _json_value(
                        complex(conv(cav.eigenvalues[0].real),
                                conv(cav.eigenvalues[0].imag))),
                    "lambda_minus": _json_value(
                        complex(conv(cav.eigenvalues[1].real),
                                conv(cav.eigenvalues[1].imag))),
                    "stable": cav.stable,
                }
                for r, cav in rows
            ],
        }
        _write_output(args, _json_dumps(payload))
    else:
        lines = [",".join(["r", "re_lambda_plus", "im_lambda_plus",
                           "re_lambda_minus", "im_lambda_minus", "stable"])]
        for r, cav in rows:
            lines.append(",".join([
                repr(float(conv(r))),
                repr(float(conv(cav.eigenvalues[0].real))),
                repr(float(conv(cav.eigenvalues[0].imag))),
                repr(float(conv(cav.eigenvalues[1].real))),
                repr(float(conv(cav.eigenvalues[1].imag))),
                "true" if cav.stable else "false",
            ]))
        _write_output(args, "\n".join(lines) + "\n")
    return 0


# ------------------------------------------------------------------- regime

def cmd_regime(args) -> int:
    parsed = _load(args)
    p = parsed.params
    conv, unit = _freq_out(parsed)
    reg = regime_classify(p)
    ram = raman_splitting(p)

    if args.json:
        payload = {
            "case": reg.case,
            "raman_deviation": _json_value(reg.raman_deviation),
            "coupling_dominance": _json_value(reg.coupling_dominance),
            "tunnelling_ratio": _json_value(reg.tunnelling_ratio),
            "membrane_coupling_ratio":
                _json_value(reg.membrane_coupling_ratio),
            "raman_splitting": conv(ram.splitting),
            "raman_resonant": ram.resonant,
            "units": parsed.units,
        }
        _write_output(args, _json_dumps(payload))
        return 0

    lines = [
        f"regime: {reg.case}",
        f"  raman splitting 2J = {conv(ram.splitting):.10g} {unit} "
        f"({'resonant' if ram.resonant else 'off-resonant'} with omega_m, "
        f"deviation {reg.raman_deviation:.4g})",
        f"  coupling dominance |C|/max|G_R|   = {reg.coupling_dominance:.6g}",
        f"  tunnelling ratio J/|delta'_L|     = {reg.tunnelling_ratio:.6g}",
        f"  membrane margin g1*alpha/(rhs)    = "
        f"{reg.membrane_coupling_ratio:.6g}",
    ]
    _write_output(args, "\n".join(lines) + "\n")
    return 0


# -------------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="memrabi",
        description="Membrane-mediated ensemble coupling: effective "
                    "parameters, dynamics, sweeps and stability analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH",
                        help="parameter file (flat key = value)")
    common.add_argument("--dump-config", action="store_true",
                        help="print the parsed config in canonical form "
                             "(rad_per_us units) and exit")
    common.add_argument("--out", metavar="PATH",
                        help="write the primary output to this file "
                             "instead of stdout")

    jsonable = argparse.ArgumentParser(add_help=False)
    jsonable.add_argument("--json", action="store_true",
                          help="emit machine-readable JSON instead of a table")

    sp = sub.add_parser("effective", parents=[common, jsonable],
                        help="effective couplings, elimination details, "
                             "regime classification")
    sp.set_defaults(handler=cmd_effective)

    sp = sub.add_parser("simulate", parents=[common],
                        help="integrate a model and emit the trajectory CSV")
    sp.add_argument("--model", choices=("full", "reduced", "effective"),
                    default="full", help="which drift to integrate")
    sp.add_argument("--t-max", type=float, default=20.0, metavar="US",
                    help="integration time in us (default 20)")
    sp.add_argument("--dt-out", type=float, default=1e-3, metavar="US",
                    help="output sampling step in us (default 1e-3)")
    sp.add_argument("--init", action="append", metavar="LABEL=RE[,IM]",
                    help="initial expectation value; repeatable; adjoint "
                         "partners are filled in by conjugation "
                         "(default c_L=1)")
    sp.add_argument("--method", choices=("rk4", "expm"), default="rk4",
                    help="integrator (default rk4)")
    sp.add_argument("--normalize-time", action="store_true",
                    help="emit the time column as the dimensionless "
                         "2pi*MHz*t instead of us")
    sp.set_defaults(handler=cmd_simulate)

    sp = sub.add_parser("sweep", parents=[common],
                        help="sweep one parameter, emit chosen quantities "
                             "as CSV")
    sp.add_argument("--var", required=True, metavar="NAME",
                    help="parameter to sweep (any scalar field, or "
                         "'alpha' for both amplitudes)")
    sp.add_argument("--start", required=True, type=float,
                    help="first value, in config-file units")
    sp.add_argument("--stop", required=True, type=float,
                    help="last value, in config-file units")
    sp.add_argument("--steps", required=True, type=int,
                    help="number of points (>= 2)")
    sp.add_argument("--emit", default="C", metavar="COL[,COL...]",
                    help="comma-separated output columns (default C)")
    sp.set_defaults(handler=cmd_sweep)

    sp = sub.add_parser("stability", parents=[common, jsonable],
                        help="full-spectrum stability report or "
                             "radiation-shift scan")
    sp.add_argument("--radiation-shift", default="0", metavar="R[,R...]",
                    help="radiation shift value(s) in config-file units; "
                         "'steady' solves the classical steady state and "
                         "uses its shift (default 0; several values give "
                         "a scan table)")
    sp.set_defaults(handler=cmd_stability)

    sp = sub.add_parser("regime", parents=[common, jsonable],
                        help="classify the parameter set (CaseI / CaseII / "
                             "Neither)")
    sp.set_defaults(handler=cmd_regime)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        # argparse help/usage paths exit directly; surface the code instead
        return int(ex.code or 0)
    try:
        return args.handler(args)
    except _Handled as handled:
        return handled.code
    except (ConfigError, InvalidModelError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1
    except (SingularEliminationError, NumericalError,
            InsufficientDataError, np.linalg.LinAlgError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2
    except OSError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2
    except ValueError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
