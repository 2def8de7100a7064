"""Command-line entry point.

Subcommands: table1 (step-size study of the splitting integral), scan
(phase-angle and quadrature values over an alpha range), reduce (metric
and orbit to normalized parameters), euler (coadjoint flow with
conservation telemetry), verify (invariant suites).  All tabular output
is CSV with shortest-roundtrip float formatting; exit codes are 0 on
success, 1 on a failed verification, 2 on usage or precondition errors,
3 on numeric failures.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import verify as verify_mod
from .dynamics import sech_squared_profile
from .errors import NumericFailure, PhaseNearSingular, PreconditionError
from .integrators import StepperConfig, rk4_integrate
from .lie_poisson import (
    CoadjointPoint,
    DiagonalMetric,
    OrbitId,
    casimirs,
    euler_field,
    hamiltonian,
    reduce_params,
)
from .melnikov import (
    PhaseConfig,
    default_phase_config,
    melnikov_limit,
    melnikov_quadrature,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

DEFAULT_H_LIST = (0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125)
TABLE1_HEADER = "h,I,H0_min,H0_max,H1_min,H1_max,H0_drift,H1_drift"
SCAN_HEADER = "alpha,B,I_phase,I_quad,delta"
EULER_HEADER = "t,pu,pv,pw,px,py,pz,K1,K2,H"


def fmt(x: float) -> str:
    """Shortest decimal string that round-trips the double."""
    return repr(float(x))


def _write(lines: list[str], out_path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _parse_h_list(spec: str) -> list[float]:
    try:
        values = [float(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError as exc:
        raise PreconditionError(f"bad h list {spec!r}: {exc}") from None
    if not values:
        raise PreconditionError("empty h list")
    return values


def cmd_table1(args) -> int:
    h_list = _parse_h_list(args.h_list) if args.h_list else list(DEFAULT_H_LIST)
    profile = sech_squared_profile()
    lines = [TABLE1_HEADER]
    for h in h_list:
        res = melnikov_quadrature(args.alpha, profile, h=h, T=args.T)
        d = res.diagnostics
        lines.append(",".join([
            fmt(h), fmt(res.value),
            fmt(d["H0_min"]), fmt(d["H0_max"]),
            fmt(d["H1_min"]), fmt(d["H1_max"]),
            fmt(d["H0_drift"]), fmt(d["H1_drift"]),
        ]))
    _write(lines, args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.steps < 2:
        raise PreconditionError(f"scan needs at least 2 steps, got {args.steps}")
    if not 0.0 < args.alpha_min < args.alpha_max:
        raise PreconditionError(
            f"need 0 < alpha_min < alpha_max, got [{args.alpha_min}, {args.alpha_max}]"
        )
    profile = sech_squared_profile()
    alphas = np.linspace(args.alpha_min, args.alpha_max, args.steps)
    lines = [SCAN_HEADER]
    for alpha in alphas:
        alpha = float(alpha)
        quad = melnikov_quadrature(alpha, profile, h=args.quad_h, T=args.T)
        base = default_phase_config(alpha)
        cfg = PhaseConfig(t_lo=base.t_lo, t_hi=base.t_hi, h=args.phase_h)
        try:
            limit = melnikov_limit(alpha, profile, cfg)
            b = limit.diagnostics["B"]
            row = [fmt(alpha), fmt(b), fmt(limit.value), fmt(quad.value),
                   fmt(abs(limit.value - quad.value))]
        except PhaseNearSingular:
            row = [fmt(alpha), "", "", fmt(quad.value), ""]
        lines.append(",".join(row))
    _write(lines, args.out)
    return EXIT_OK


def _metric_from_args(args) -> DiagonalMetric:
    return DiagonalMetric(a12=args.a12, a13=args.a13, a14=args.a14,
                          a23=args.a23, a24=args.a24, a34=args.a34)


def cmd_reduce(args) -> int:
    metric = _metric_from_args(args)
    k = OrbitId(k1=args.k1, k2=args.k2)
    if k.k1 * k.k2 == 0.0:
        raise PreconditionError("regular coadjoint orbit requires k1*k2 != 0")
    params = reduce_params(metric, k)
    fields = [
        ("lambda", params.lam), ("mu", params.mu), ("xi", params.xi),
        ("omega", params.omega), ("nu", params.nu), ("c", params.c),
        ("alpha", params.alpha), ("xi_nu_norm", params.xi_normalization),
    ]
    if args.format == "csv":
        lines = [",".join(name for name, _ in fields),
                 ",".join(fmt(val) for _, val in fields)]
    else:
        width = max(len(name) for name, _ in fields)
        lines = [f"{name:<{width}}  {fmt(val)}" for name, val in fields]
    _write(lines, args.out)
    return EXIT_OK


def cmd_euler(args) -> int:
    metric = _metric_from_args(args)
    p0 = CoadjointPoint(pu=args.pu, pv=args.pv, pw=args.pw,
                        px=args.px, py=args.py, pz=args.pz)

    def ode(t, s):
        return euler_field(metric, np.asarray(s))

    cfg = StepperConfig(h=args.h, T=args.T, method="rk4",
                        record_stride=args.stride)
    traj = rk4_integrate(p0.as_array(), ode, cfg)
    lines = [EULER_HEADER]
    k1s, k2s, hs = [], [], []
    for t, state in zip(traj.times, traj.states):
        pt = CoadjointPoint.from_array(state)
        k1, k2 = casimirs(pt)
        energy = hamiltonian(metric, pt)
        k1s.append(k1)
        k2s.append(k2)
        hs.append(energy)
        lines.append(",".join([fmt(t)] + [fmt(v) for v in state]
                              + [fmt(k1), fmt(k2), fmt(energy)]))
    dk1 = max(abs(v - k1s[0]) for v in k1s)
    dk2 = max(abs(v - k2s[0]) for v in k2s)
    dh = max(abs(v - hs[0]) for v in hs)
    lines.append(f"# max_abs_dK1={fmt(dk1)} max_abs_dK2={fmt(dk2)} max_abs_dH={fmt(dh)}")
    _write(lines, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in verify_mod.SUITES:
        sys.stderr.write(
            f"unknown suite {args.suite!r}; choose from {', '.join(verify_mod.SUITES)}\n"
        )
        return EXIT_USAGE
    results = verify_mod.run_suite(args.suite)
    lines = [r.summary_line() for r in results]
    _write(lines, args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilflow",
        description="Splitting integrals and coadjoint flows of diagonal "
                    "metrics on the triangular nilpotent group",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", help="step-size study of the splitting integral")
    p.add_argument("--h-list", help="comma-separated step sizes "
                                    "(default: 0.5 halved down to 0.0078125)")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--T", type=float, default=35.0)
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(fn=cmd_table1)

    p = sub.add_parser("scan", help="phase angle and integral over an alpha range")
    p.add_argument("--alpha-min", type=float, default=0.5)
    p.add_argument("--alpha-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=96)
    p.add_argument("--T", type=float, default=35.0)
    p.add_argument("--quad-h", type=float, default=0.015625)
    p.add_argument("--phase-h", type=float, default=2e-3)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("reduce", help="orbit parameters of a diagonal metric")
    for name, default in (("a12", 1.0), ("a13", 0.0), ("a14", 0.0),
                          ("a23", 1.0), ("a24", 0.0), ("a34", 1.0)):
        p.add_argument(f"--{name}", type=float, default=default)
    p.add_argument("--k1", type=float, required=True)
    p.add_argument("--k2", type=float, required=True)
    p.add_argument("--format", choices=("csv", "pretty"), default="pretty")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("euler", help="integrate the coadjoint flow")
    for name, default in (("a12", 1.0), ("a13", 0.0), ("a14", 0.0),
                          ("a23", 1.0), ("a24", 0.0), ("a34", 1.0)):
        p.add_argument(f"--{name}", type=float, default=default)
    for name in ("pu", "pv", "pw", "px", "py", "pz"):
        p.add_argument(f"--{name}", type=float, default=0.0)
    p.add_argument("--h", type=float, default=1e-3)
    p.add_argument("--T", type=float, default=10.0)
    p.add_argument("--stride", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_euler)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except PreconditionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except NumericFailure as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
