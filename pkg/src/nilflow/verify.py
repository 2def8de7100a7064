"""Named invariant suites behind the `verify` CLI command.

Each suite runs a handful of independent consistency checks and returns
one CheckResult per check; the CLI turns them into summary lines and an
exit status.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dynamics, integrators, lie_poisson, melnikov

SUITES = ("poisson", "separatrix", "variational", "melnikov", "splitting", "all")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def summary_line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return f"{self.name} {status} {self.detail}"


def _jacobi_defect() -> int:
    """Max absolute coefficient of the Jacobi identity over basis triples.

    {{pa,pb},pc} is linear in p with integer coefficients; the cyclic
    sum must vanish identically.  Exact integer arithmetic.
    """
    def bracket_linear(vec, c):
        # bracket of a linear combination sum vec[k] p_k with coordinate c
        out = np.zeros(6, dtype=np.int64)
        for k in range(6):
            if vec[k]:
                out += vec[k] * lie_poisson.coordinate_bracket(k, c)
        return out

    worst = 0
    for a in range(6):
        for b in range(6):
            for c in range(6):
                total = (
                    bracket_linear(lie_poisson.coordinate_bracket(a, b), c)
                    + bracket_linear(lie_poisson.coordinate_bracket(b, c), a)
                    + bracket_linear(lie_poisson.coordinate_bracket(c, a), b)
                )
                worst = max(worst, int(np.max(np.abs(total))))
    return worst


def suite_poisson() -> list[CheckResult]:
    results = []
    defect = _jacobi_defect()
    results.append(CheckResult(
        "poisson.jacobi_identity", defect == 0, f"max_coefficient_defect={defect}"))

    skew = 0
    for a in range(6):
        for b in range(6):
            s = lie_poisson.coordinate_bracket(a, b) + lie_poisson.coordinate_bracket(b, a)
            skew = max(skew, int(np.max(np.abs(s))))
    results.append(CheckResult(
        "poisson.skew_symmetry", skew == 0, f"max_coefficient_defect={skew}"))

    rng = np.random.default_rng(2)
    metric = lie_poisson.DiagonalMetric.riemannian()
    worst = 0.0
    for _ in range(25):
        p = lie_poisson.CoadjointPoint.from_array(rng.uniform(-3, 3, 6))
        e = lie_poisson.euler_field(metric, p)
        dk1 = np.array([0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
        dk2 = np.array([-p.pz, 0.0, p.py, 0.0, p.pw, -p.pu])
        worst = max(worst, abs(float(dk1 @ e)), abs(float(dk2 @ e)))
    results.append(CheckResult(
        "poisson.casimirs_annihilated", worst <= 1e-12, f"max_pairing={worst:.2e}"))
    return results


def suite_separatrix() -> list[CheckResult]:
    results = []
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(200):
        sc = dynamics.SeparatrixCoords(
            t0=float(rng.uniform(-3, 3)), sign=int(rng.choice([1, -1])))
        t = float(rng.uniform(-8, 8))
        s = dynamics.separatrix_state(sc, t)
        worst = max(worst, abs(dynamics.duffing_energy(s.X, s.x) - 0.25))
    results.append(CheckResult(
        "separatrix.energy_quarter", worst <= 1e-10, f"max_err={worst:.2e}"))

    # central finite differences of the closed form against the eps=0 field
    fd = 1e-5
    worst = 0.0
    for _ in range(50):
        sc = dynamics.SeparatrixCoords(
            t0=float(rng.uniform(-2, 2)), sign=int(rng.choice([1, -1])))
        t = float(rng.uniform(-5, 5))
        sp = dynamics.separatrix_state(sc, t + fd)
        sm = dynamics.separatrix_state(sc, t - fd)
        s0 = dynamics.separatrix_state(sc, t)
        f = dynamics.field_X_eps(s0, alpha=1.0, eps=0.0)
        worst = max(worst,
                    abs((sp.X - sm.X) / (2 * fd) - f[0]),
                    abs((sp.x - sm.x) / (2 * fd) - f[1]))
    results.append(CheckResult(
        "separatrix.satisfies_field", worst <= 1e-8, f"max_residual={worst:.2e}"))

    start = dynamics.separatrix_state(dynamics.SeparatrixCoords(t0=0.0, sign=1), -5.0)
    cfg = integrators.StepperConfig(h=1e-4, T=10.0, method="rk4")
    traj = integrators.rk4_integrate(
        start.as_array(), dynamics.perturbed_ode(1.0, 0.0), cfg, t0=-5.0,
        invariant=lambda s: dynamics.duffing_energy(s[0], s[1]))
    dev = max(abs(traj.drift[0] - 0.25), abs(traj.drift[1] - 0.25))
    results.append(CheckResult(
        "separatrix.integrated_energy", dev <= 1e-6, f"max_dev={dev:.2e}"))
    return results


def suite_variational() -> list[CheckResult]:
    results = []
    profile = dynamics.sech_squared_profile()
    zero = dynamics.zero_profile()

    sol = dynamics.variational_solutions(1.0, zero, dynamics.TimeGrid(0.0, 10.0, 1e-3))
    ts = sol.times
    err = max(
        float(np.max(np.abs(sol.samples[:, 0] - np.cos(ts)))),
        float(np.max(np.abs(sol.samples[:, 2] - np.sin(ts)))),
    )
    results.append(CheckResult(
        "variational.harmonic_closed_form", err <= 1e-8, f"max_err={err:.2e}"))

    sol = dynamics.variational_solutions(1.0, profile, dynamics.TimeGrid(-10.0, 10.0, 1e-3))
    n = len(sol.times)
    rev = sol.samples[::-1]
    par = max(
        float(np.max(np.abs(sol.samples[:, 0] - rev[:, 0]))),
        float(np.max(np.abs(sol.samples[:, 2] + rev[:, 2]))),
    )
    results.append(CheckResult(
        "variational.parity", par <= 1e-8, f"max_err={par:.2e}"))

    wron = sol.wronskian_samples()
    werr = float(np.max(np.abs(wron - 1.0)))
    results.append(CheckResult(
        "variational.unit_wronskian", werr <= 1e-8, f"max_err={werr:.2e}"))

    c0, c1 = 0.7, -1.3
    ode = dynamics.variational_ode(1.0, profile)
    cfg = integrators.StepperConfig(h=1e-3, T=10.0, method="rk4")
    combo = integrators.rk4_integrate((c0, c1, 0.0, 0.0), ode, cfg)
    lin = c0 * sol.samples[sol.times >= 0.0][:, 0] + c1 * sol.samples[sol.times >= 0.0][:, 2]
    lerr = float(np.max(np.abs(combo.states[:, 0] - lin[: len(combo.states)])))
    results.append(CheckResult(
        "variational.linearity", lerr <= 1e-10, f"max_err={lerr:.2e}"))
    return results


def suite_melnikov() -> list[CheckResult]:
    results = []
    profile = dynamics.sech_squared_profile()
    quad = melnikov.melnikov_quadrature(1.0, profile, h=0.015625, T=35.0)
    limit = melnikov.melnikov_limit(1.0, profile)
    gap = abs(quad.value - limit.value)
    results.append(CheckResult(
        "melnikov.method_agreement", gap <= 5e-3,
        f"quadrature={quad.value:.8f} phase={limit.value:.8f} gap={gap:.2e}"))

    sc = dynamics.SeparatrixCoords(t0=0.0, sign=1, c0=1.0, c1=1.0)
    m0 = melnikov.melnikov_full_line(sc, 1.0, profile, h=1e-3, T=20.0)
    sc_shift = dynamics.SeparatrixCoords(t0=1.3, sign=1, c0=1.0, c1=1.0)
    m1 = melnikov.melnikov_full_line(sc_shift, 1.0, profile, h=1e-3, T=20.0)
    shift_gap = abs(m0 - m1)
    results.append(CheckResult(
        "melnikov.t0_shift_invariance", shift_gap <= 1e-6, f"gap={shift_gap:.2e}"))

    sc_odd = dynamics.SeparatrixCoords(t0=0.0, sign=1, c0=1.0, c1=0.0)
    modd = melnikov.melnikov_full_line(sc_odd, 1.0, profile, h=1e-3, T=20.0)
    results.append(CheckResult(
        "melnikov.odd_combination_vanishes", abs(modd) <= 1e-8, f"value={modd:.2e}"))

    leg = melnikov.melnikov_legendre_substitution(1.0)
    leg_gap = abs(leg.value - quad.value)
    results.append(CheckResult(
        "melnikov.legendre_substitution", leg_gap <= 1e-4, f"gap={leg_gap:.2e}"))
    return results


def suite_splitting() -> list[CheckResult]:
    results = []
    sc = dynamics.SeparatrixCoords(t0=0.0, sign=1, c0=1.0, c1=1.0)
    report = melnikov.verify_splitting(1.0, [0.0, 1e-3, 5e-4, 2.5e-4], sc, T=5.0)
    zero_row = report.rows[0]
    results.append(CheckResult(
        "splitting.unperturbed_conserved", abs(zero_row.delta_h) <= 1e-10,
        f"delta_h={zero_row.delta_h:.2e}"))
    errs = report.errors
    within = all(e <= 0.10 for e in errs)
    decreasing = all(b <= a + 1e-12 for a, b in zip(errs, errs[1:]))
    results.append(CheckResult(
        "splitting.first_order_agreement", within and decreasing,
        f"prediction={report.prediction:.4f} errors={[f'{e:.3%}' for e in errs]}"))

    sc0 = dynamics.SeparatrixCoords(t0=0.0, sign=1, c0=0.0, c1=1.0)
    rep0 = melnikov.verify_splitting(1.0, [1e-3, 5e-4], sc0, T=5.0)
    # first-order term vanishes here, so delta_h must scale like eps^2
    d_big, d_small = (abs(r.delta_h) for r in rep0.rows)
    quadratic = d_small > 0.0 and 3.0 <= d_big / d_small <= 5.0
    results.append(CheckResult(
        "splitting.vanishes_on_zero_locus",
        abs(rep0.prediction) <= 1e-6 and quadratic,
        f"prediction={rep0.prediction:.2e} delta_h_ratio={d_big / max(d_small, 1e-300):.2f}"))
    return results


def run_suite(name: str) -> list[CheckResult]:
    table = {
        "poisson": suite_poisson,
        "separatrix": suite_separatrix,
        "variational": suite_variational,
        "melnikov": suite_melnikov,
        "splitting": suite_splitting,
    }
    if name == "all":
        out = []
        for fn in table.values():
            out.extend(fn())
        return out
    if name not in table:
        raise KeyError(name)
    return table[name]()
