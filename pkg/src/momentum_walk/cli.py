"""Command-line driver: reproducible CSV datasets for the walk experiments.

Subcommands
-----------
evolve               time series of variance / mean / participation / leak
distribution         final momentum distribution (+ fit sidecar)
variance-scan        growth exponent per scale-parameter value
near-resonance-scan  localization witnesses vs. offset from a rational
anderson-check       stationary-state verification chain over a quasienergy grid
kinetic-stats        diagonal-term statistics along the lattice

Every CSV starts with a comment line carrying the resolved run settings, uses
17-significant-digit floats, '.' decimals and LF line endings, so reruns are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import floquet, observables
from .errors import ConfigurationError, NumericError, ValidationError
from .evolution import evolve, markov_evolve
from .phases import TWO_PI, Omega
from .state import InitialCondition, ProbabilityField, WalkParams, new_state


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _write_csv(path: str, runspec: dict, header: list, rows: list):
    lines = ["# RunSpec: " + json.dumps(runspec, sort_keys=True)]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(x) if not isinstance(x, str) else x for x in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_json(path: str, payload: dict):
    with open(path, "w", newline="") as fh:
        fh.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _parse_rational(text: str):
    num, _, den = text.partition("/")
    try:
        return int(num), int(den)
    except ValueError:
        raise ConfigurationError(
            f"--omega expects an integer ratio like 1/9, got {text!r}"
        ) from None


def _parse_init(text: str) -> InitialCondition:
    body, _, site = text.partition("@")
    parts = body.split(",")
    if len(parts) != 4 or not site:
        raise ConfigurationError(
            "--init expects cL_re,cL_im,cR_re,cR_im@k0, "
            "e.g. 0.70710678118654746,0,0,0.70710678118654746@0"
        )
    vals = [float(p) for p in parts]
    return InitialCondition(int(site), (complex(vals[0], vals[1]),
                                        complex(vals[2], vals[3])))


def _resolve_omega(args, delta: float = 0.0) -> Omega:
    given = [name for name, val in (("--omega", args.omega),
                                    ("--omega-dec", args.omega_dec),
                                    ("--two-pi-omega", args.two_pi_omega))
             if val is not None]
    if len(given) != 1:
        raise ConfigurationError(
            "supply exactly one of --omega, --omega-dec, --two-pi-omega"
        )
    if args.omega is not None:
        p, q = _parse_rational(args.omega)
        return Omega.rational(p, q, delta)
    if delta != 0.0:
        raise ConfigurationError("--delta requires a rational base (--omega p/q)")
    if args.omega_dec is not None:
        return Omega.decimal(args.omega_dec)
    return Omega.two_pi(args.two_pi_omega)


def _omega_list(args) -> list:
    out = []
    if args.omega:
        for token in args.omega.split(","):
            p, q = _parse_rational(token)
            out.append(Omega.rational(p, q))
    if args.omega_dec:
        out.extend(Omega.decimal(float(t)) for t in args.omega_dec.split(","))
    if args.two_pi_omega:
        out.extend(Omega.two_pi(float(t)) for t in args.two_pi_omega.split(","))
    if not out:
        raise ConfigurationError("supply at least one scale-parameter value")
    return out


def _make_params(args, omega: Omega) -> WalkParams:
    half_width = args.half_width if args.half_width else args.steps + 64
    return WalkParams(omega, half_width, args.steps,
                      boundary_tolerance=args.boundary_tolerance)


def _initial(args) -> InitialCondition:
    return _parse_init(args.init) if args.init else InitialCondition()


def _init_spelling(init: InitialCondition) -> str:
    c_l, c_r = init.chirality
    return (f"{_fmt(c_l.real)},{_fmt(c_l.imag)},{_fmt(c_r.real)},{_fmt(c_r.imag)}"
            f"@{init.site}")


def _runspec(args, command: str, omega=None, **extra) -> dict:
    spec = {
        "command": command,
        "steps": args.steps,
        "half_width": args.half_width if args.half_width else args.steps + 64,
        "stride": getattr(args, "stride", 1),
        "init": _init_spelling(_initial(args)),
        "boundary_tolerance": args.boundary_tolerance,
    }
    if omega is not None:
        spec["omega"] = omega.spelling if isinstance(omega, Omega) else omega
    spec.update(extra)
    return spec


def _fit_payload(fit) -> dict:
    return {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "n_points": fit.n_points,
        "localization_length": fit.derived_quantity,
        "localized": fit.localized,
    }


# ---------------------------------------------------------------- commands

def _cmd_evolve(args) -> int:
    delta = float(args.delta) if args.delta else 0.0
    omega = _resolve_omega(args, delta)
    params = _make_params(args, omega)
    init = _initial(args)
    record = ("variance", "mean", "participation", "boundary_leak")
    if args.mode == "markov":
        F = np.zeros(params.n_sites)
        F[init.site + params.half_width] = (abs(init.chirality[0]) ** 2
                                            + abs(init.chirality[1]) ** 2)
        field = ProbabilityField(-params.half_width, F)
        series, _ = markov_evolve(field, params.steps,
                                  boundary_tolerance=params.boundary_tolerance,
                                  record=record, stride=args.stride)
    else:
        series, _ = evolve(new_state(params, init), params,
                           record=record, stride=args.stride)
    header = ["t", "variance", "mean", "participation", "boundary_leak"]
    columns = [series.times] + [series.column(n) for n in record]
    if args.markov_baseline:
        header.append("sigma2_markov")
        columns.append(series.times.astype(np.float64))
    rows = list(zip(*columns))
    spec = _runspec(args, "evolve", omega, mode=args.mode,
                    markov_baseline=bool(args.markov_baseline), delta=delta)
    _write_csv(args.out, spec, header, rows)
    return 0


def _cmd_distribution(args) -> int:
    delta = float(args.delta) if args.delta else 0.0
    omega = _resolve_omega(args, delta)
    params = _make_params(args, omega)
    init = _initial(args)
    _, final = evolve(new_state(params, init), params,
                      record=("variance",), stride=params.steps)
    field = observables.distribution(final)
    k = field.k_values()
    nz = field.F > 0.0
    rows = list(zip(k[nz], field.F[nz]))
    spec = _runspec(args, "distribution", omega, delta=delta,
                    q=args.q if args.q else None)
    _write_csv(args.out, spec, ["k", "F"], rows)

    sidecar = {"runspec": spec}
    try:
        sidecar["exponential_fit"] = _fit_payload(
            observables.localization_length_fit(field))
    except Exception as exc:
        sidecar["exponential_fit"] = {"error": str(exc)}
    if args.q:
        report = observables.resonance_peaks(field, args.q)
        sidecar["peak_report"] = {
            "q": report.q,
            "n_top": report.n_top,
            "top_positions": list(report.top_positions),
            "aligned": report.aligned,
            "n_peaks": len(report.positions),
        }
    _write_json(args.out + ".fit.json", sidecar)
    return 0


def _cmd_variance_scan(args) -> int:
    omegas = _omega_list(args)
    t_min = args.fit_min if args.fit_min else max(1, args.steps // 4)
    t_max = args.fit_max if args.fit_max else args.steps
    init = _initial(args)
    rows = []
    for omega in omegas:
        params = _make_params(args, omega)
        series, _ = evolve(new_state(params, init), params,
                           record=("variance",), stride=args.stride)
        fit = observables.growth_exponent_fit(series, t_min, t_max)
        rows.append((omega.spelling, fit.derived_quantity, fit.r_squared))
    if args.include_markov:
        params = _make_params(args, omegas[0])
        F = np.zeros(params.n_sites)
        F[init.site + params.half_width] = 1.0
        series, _ = markov_evolve(ProbabilityField(-params.half_width, F),
                                  params.steps, record=("variance",),
                                  stride=args.stride)
        fit = observables.growth_exponent_fit(series, t_min, t_max)
        rows.append(("markov", fit.derived_quantity, fit.r_squared))
    spec = _runspec(args, "variance-scan",
                    omega=",".join(o.spelling for o in omegas),
                    fit_window=[t_min, t_max],
                    include_markov=bool(args.include_markov))
    _write_csv(args.out, spec, ["omega", "gamma", "r_squared"], rows)
    return 0


def _cmd_near_resonance_scan(args) -> int:
    if args.omega is None:
        raise ConfigurationError("near-resonance-scan needs a rational base: --omega p/q")
    if not args.delta:
        raise ValidationError("supply --delta with at least one offset")
    deltas = [float(t) for t in args.delta.split(",")]
    if any(d < 0 for d in deltas):
        raise ValidationError("offsets must be >= 0")
    p, q = _parse_rational(args.omega)
    init = _initial(args)
    rows = []
    for d in deltas:
        omega = Omega.rational(p, q, d)
        params = _make_params(args, omega)
        _, final = evolve(new_state(params, init), params,
                          record=("variance",), stride=params.steps)
        field = observables.distribution(final)
        var = observables.variance(field)
        part = observables.participation_number(field)
        try:
            ell = observables.localization_length_fit(field).derived_quantity
        except Exception:
            ell = math.nan
        rows.append((d, ell, part, var))
    spec = _runspec(args, "near-resonance-scan", omega=f"{p}/{q}",
                    deltas=deltas)
    _write_csv(args.out, spec,
               ["delta", "localization_length", "participation", "variance_at_t"],
               rows)
    return 0


def _cmd_anderson_check(args) -> int:
    omega = _resolve_omega(args)
    if args.w_count < 1:
        raise ValidationError("--w-count must be >= 1")
    k_range = (-args.k_window, args.k_window)
    rows = []
    findings = []
    any_failed = False
    for j in range(args.w_count):
        w = floquet.QuasiEnergy(TWO_PI * j / args.w_count)
        try:
            pair = floquet.floquet_recursion(omega, w, (1.0, 0.0), k_range)
            coeffs = floquet.coefficients(omega, w, k_range)
            tp = floquet.transform(pair, coeffs)
            rep_a = floquet.second_order_residual(tp.alpha, coeffs, "alpha")
            rep_b = floquet.second_order_residual(tp.beta, coeffs, "beta")
            rep_and = floquet.anderson_residual(tp.alpha, coeffs)
        except NumericError as exc:
            rows.append((w.w, "nan", "nan", "nan", "failed"))
            findings.append(f"w={_fmt(w.w)}: recursion failed: {exc}")
            any_failed = True
            continue
        second = max(rep_a.max_residual, rep_b.max_residual)
        degenerate = coeffs.degenerate or rep_a.degenerate
        rows.append((w.w, pair.residual, second, rep_and.max_residual,
                     1 if degenerate else 0))
        if not degenerate:
            if second > floquet.SECOND_ORDER_RESIDUAL_TOL:
                findings.append(f"w={_fmt(w.w)}: three-term residual {_fmt(second)} "
                                f"exceeds {_fmt(floquet.SECOND_ORDER_RESIDUAL_TOL)}")
            if rep_and.max_residual > floquet.ANDERSON_RESIDUAL_TOL:
                findings.append(f"w={_fmt(w.w)}: lattice-form residual "
                                f"{_fmt(rep_and.max_residual)} exceeds "
                                f"{_fmt(floquet.ANDERSON_RESIDUAL_TOL)}")
    spec = {
        "command": "anderson-check",
        "omega": omega.spelling,
        "w_count": args.w_count,
        "k_window": args.k_window,
        "seed": "1,0",
    }
    _write_csv(args.out, spec,
               ["w", "eq9_residual", "eq11_residual", "anderson_residual",
                "degenerate_flag"],
               rows)
    if findings:
        with open(args.out + ".discrepancy.txt", "w", newline="") as fh:
            fh.write("\n".join(findings) + "\n")
        print(f"{len(findings)} finding(s) written to {args.out}.discrepancy.txt",
              file=sys.stderr)
    return 1 if any_failed else 0


def _cmd_kinetic_stats(args) -> int:
    omega = _resolve_omega(args)
    stats = floquet.kinetic_statistics(omega, floquet.QuasiEnergy(args.w), args.sites)
    rows = list(zip(range(args.sites), stats.values))
    spec = {
        "command": "kinetic-stats",
        "omega": omega.spelling,
        "w": args.w,
        "sites": args.sites,
    }
    _write_csv(args.out, spec, ["k", "T"], rows)
    _write_json(args.out + ".stats.json", {
        "runspec": spec,
        "median": stats.median,
        "iqr": stats.iqr,
        "value_range": stats.value_range,
        "lag1_autocorrelation": stats.lag1_autocorrelation,
        "narrowly_peaked": stats.narrowly_peaked,
        "pseudo_random": stats.pseudo_random,
        "degenerate": stats.degenerate,
        "histogram": {
            "counts": stats.histogram_counts.tolist(),
            "edges": stats.histogram_edges.tolist(),
        },
    })
    return 0


# ---------------------------------------------------------------- parser

def _add_omega_flags(p: argparse.ArgumentParser):
    p.add_argument("--omega", help="exact rational p/q (comma list where a scan allows)")
    p.add_argument("--omega-dec", help="decimal value")
    p.add_argument("--two-pi-omega", help="value of the whole product 2*pi*omega")


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--half-width", type=int, default=0,
                   help="lattice half width (default: steps + 64)")
    p.add_argument("--init", help="cL_re,cL_im,cR_re,cR_im@k0 "
                                  "(default: the symmetric spinor at the origin)")
    p.add_argument("--stride", type=int, default=1,
                   help="record observables every this many steps")
    p.add_argument("--boundary-tolerance", type=float, default=1e-12)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momentum-walk",
        description="Discrete-time quantum walk in momentum space with a "
                    "quadratic drift phase: deterministic CSV experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="record observables along a run")
    _add_omega_flags(p)
    _add_run_flags(p)
    p.add_argument("--delta", help="decimal offset added to a rational base")
    p.add_argument("--mode", choices=["coherent", "markov"], default="coherent")
    p.add_argument("--markov-baseline", action="store_true",
                   help="append the diffusive baseline column sigma2_markov = t")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("distribution", help="final momentum distribution")
    _add_omega_flags(p)
    _add_run_flags(p)
    p.add_argument("--delta", help="decimal offset added to a rational base")
    p.add_argument("--q", type=int, default=0,
                   help="also report peak alignment against multiples of q")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_distribution)

    p = sub.add_parser("variance-scan", help="growth exponent per omega")
    _add_omega_flags(p)
    _add_run_flags(p)
    p.add_argument("--fit-min", type=int, default=0,
                   help="fit window start (default: steps / 4)")
    p.add_argument("--fit-max", type=int, default=0,
                   help="fit window end (default: steps)")
    p.add_argument("--include-markov", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_variance_scan)

    p = sub.add_parser("near-resonance-scan",
                       help="localization witnesses vs. offset from a rational")
    _add_omega_flags(p)
    _add_run_flags(p)
    p.add_argument("--delta", required=True,
                   help="comma list of offsets, e.g. 1e-4,1e-5,1e-6,1e-9")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_near_resonance_scan)

    p = sub.add_parser("anderson-check",
                       help="stationary-state verification chain over a w grid")
    _add_omega_flags(p)
    p.add_argument("--w-count", type=int, default=64)
    p.add_argument("--k-window", type=int, default=200)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_anderson_check)

    p = sub.add_parser("kinetic-stats", help="diagonal-term statistics")
    _add_omega_flags(p)
    p.add_argument("--w", type=float, default=0.0)
    p.add_argument("--sites", type=int, default=1000)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_kinetic_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, ValidationError, NumericError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # lattice overflow, fit failures, ...
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
