"""Fixed-step time integration and zero location.

Two engines: a 4th-order symplectic drift-kick composition for the
split extended Hamiltonian (used for the quadrature experiments, with
the energy recorded at every step as the error monitor), and classical
RK4 for generic fields.  Zeros of a trajectory component are located by
interval halving, re-integrating inside the bracket rather than
interpolating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .dynamics import ExtendedState, PotentialProfile, extended_hamiltonian
from .errors import GridMismatch, NonfiniteState, SuspectedDoubleZero

# Composition parameter of the 4th-order scheme.
THETA = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))

# Drift (position) weights and kick (momentum) weights of one step.
FR_DRIFT = (0.5 * THETA, 0.5 * (1.0 - THETA), 0.5 * (1.0 - THETA), 0.5 * THETA)
FR_KICK = (THETA, 1.0 - 2.0 * THETA, THETA, 0.0)

BISECTION_WIDTH = 1e-12
DOUBLE_ZERO_SLOPE = 1e-10


@dataclass(frozen=True)
class StepperConfig:
    """Step size, horizon, method tag, and recording stride."""

    h: float
    T: float
    method: str = "rk4"
    record_stride: int = 1

    def __post_init__(self):
        if self.h <= 0.0 or self.T <= 0.0:
            raise ValueError(f"h and T must be positive, got h={self.h}, T={self.T}")
        if self.method not in ("forest_ruth", "rk4"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")

    @property
    def n_steps(self) -> int:
        return round(self.T / self.h)

    def require_exact_grid(self) -> int:
        """Number of steps when T must be an exact multiple of h."""
        n = self.T / self.h
        n_int = round(n)
        if n_int < 1 or abs(n - n_int) > 4.0 * np.finfo(float).eps * max(n, 1.0):
            raise GridMismatch(
                f"step {self.h} does not divide horizon {self.T}: "
                f"T/h = {n} must be an integer"
            )
        return n_int


@dataclass(frozen=True)
class Trajectory:
    """Recorded samples of one integration run.

    conserved holds the designated invariant at the recorded samples;
    drift is its (min, max) over every step taken, recorded or not.
    """

    times: np.ndarray
    states: np.ndarray
    conserved: np.ndarray | None = None
    drift: tuple[float, float] | None = None

    def __post_init__(self):
        if len(self.times) > 1:
            steps = np.diff(self.times)
            if not (np.all(steps > 0.0) or np.all(steps < 0.0)):
                raise ValueError("trajectory times must be strictly monotone")

    @property
    def drift_magnitude(self) -> float:
        if self.drift is None:
            return 0.0
        return self.drift[1] - self.drift[0]


def forest_ruth_integrate(initial: ExtendedState, alpha: float,
                          profile: PotentialProfile,
                          cfg: StepperConfig) -> Trajectory:
    """Symplectic integration of the extended oscillator.

    The energy splits into a drift part p^2/2 + u, which advances z and
    tau, and a kick part [alpha^2 - q(tau)] z^2 / 2, which advances p
    and u (the u update +s*qdot(tau)*z^2/2 keeps the total autonomous
    energy the monitored invariant).  Energy is evaluated at every step
    end; states are recorded each record_stride steps.
    """
    if cfg.method != "forest_ruth":
        raise ValueError("config method must be 'forest_ruth'")
    q, qdot = profile.q, profile.qdot
    a2 = alpha * alpha
    h = cfg.h
    n = cfg.n_steps
    z, p, tau, u = initial.z, initial.p, initial.tau, initial.u

    times = [0.0]
    states = [(z, p, tau, u)]
    energy0 = 0.5 * p * p + 0.5 * (a2 - q(tau)) * z * z + u
    conserved = [energy0]
    emin = emax = energy0
    try:
        for i in range(n):
            for c, d in zip(FR_DRIFT, FR_KICK):
                z += c * h * p
                tau += c * h
                if d != 0.0:
                    w = a2 - q(tau)
                    p -= d * h * w * z
                    u += d * h * 0.5 * qdot(tau) * z * z
            energy = 0.5 * p * p + 0.5 * (a2 - q(tau)) * z * z + u
            emin = min(emin, energy)
            emax = max(emax, energy)
            if (i + 1) % cfg.record_stride == 0 or i == n - 1:
                times.append((i + 1) * h)
                states.append((z, p, tau, u))
                conserved.append(energy)
    except OverflowError as exc:
        raise NonfiniteState(f"overflow during step {i + 1} at t={tau}") from exc
    if not (math.isfinite(z) and math.isfinite(p) and math.isfinite(u)):
        raise NonfiniteState(f"nonfinite state at t={tau}: z={z}, p={p}, u={u}")
    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        conserved=np.array(conserved),
        drift=(emin, emax),
    )


def rk4_step(f: Callable, t: float, state: Sequence[float], h: float) -> list[float]:
    """One classical RK4 step for f(t, state)."""
    k1 = f(t, state)
    s2 = [si + 0.5 * h * ki for si, ki in zip(state, k1)]
    k2 = f(t + 0.5 * h, s2)
    s3 = [si + 0.5 * h * ki for si, ki in zip(state, k2)]
    k3 = f(t + 0.5 * h, s3)
    s4 = [si + h * ki for si, ki in zip(state, k3)]
    k4 = f(t + h, s4)
    return [si + h / 6.0 * (a + 2.0 * b + 2.0 * c + d)
            for si, a, b, c, d in zip(state, k1, k2, k3, k4)]


def rk4_integrate(initial: Sequence[float], ode: Callable, cfg: StepperConfig,
                  t0: float = 0.0, direction: int = 1,
                  invariant: Callable | None = None,
                  escape_radius: float | None = None) -> Trajectory:
    """Classical fixed-step RK4 over [t0, t0 + direction*T].

    invariant, when given, is a callable of the state monitored like the
    symplectic engine monitors energy.  escape_radius aborts with
    TrajectoryEscape when any coordinate magnitude exceeds it.
    """
    from .errors import TrajectoryEscape

    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    h = direction * cfg.h
    n = cfg.n_steps
    state = [float(v) for v in initial]
    times = [t0]
    states = [tuple(state)]
    cmin = cmax = invariant(state) if invariant is not None else 0.0
    conserved = [cmin] if invariant is not None else None
    try:
        for i in range(n):
            t = t0 + i * h
            state = rk4_step(ode, t, state, h)
            if invariant is not None:
                c = invariant(state)
                cmin = min(cmin, c)
                cmax = max(cmax, c)
            if escape_radius is not None and any(abs(v) > escape_radius for v in state):
                raise TrajectoryEscape(
                    f"state magnitude exceeded {escape_radius} at t={t + h}"
                )
            if (i + 1) % cfg.record_stride == 0 or i == n - 1:
                times.append(t0 + (i + 1) * h)
                states.append(tuple(state))
                if conserved is not None:
                    conserved.append(c)
    except OverflowError as exc:
        raise NonfiniteState(f"overflow during RK4 step {i + 1}") from exc
    if not all(math.isfinite(v) for v in state):
        raise NonfiniteState(f"nonfinite state at t={times[-1]}: {state}")
    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        conserved=None if conserved is None else np.array(conserved),
        drift=None if invariant is None else (cmin, cmax),
    )


@dataclass(frozen=True)
class ZeroRecord:
    """A located zero crossing of a trajectory component."""

    index: int
    t: float
    slope: float
    bracket: tuple[float, float] = field(repr=False, default=(0.0, 0.0))


def locate_zeros(traj: Trajectory, component: int, refine: Callable,
                 width: float = BISECTION_WIDTH) -> list[ZeroRecord]:
    """Find zeros of states[:, component] by bracketing and interval halving.

    Each sign change between consecutive recorded samples is halved to
    the requested bracket width.  Midpoint values are obtained by a
    fresh RK4 step of the refine field from the last grid sample before
    the bracket, never by interpolation.  Raises SuspectedDoubleZero
    when a bracket closes on a crossing whose slope is numerically zero.
    """
    times = traj.times
    states = traj.states
    records: list[ZeroRecord] = []
    if len(times) == 0:
        return records

    def value_at(t: float, anchor_t: float, anchor_state) -> list[float]:
        if t == anchor_t:
            return list(anchor_state)
        return rk4_step(refine, anchor_t, anchor_state, t - anchor_t)

    for k in range(len(times) - 1):
        f_lo = states[k, component]
        f_hi = states[k + 1, component]
        anchor_t = times[k]
        anchor_state = states[k]
        if f_lo == 0.0:
            slope = refine(anchor_t, anchor_state)[component]
            if abs(slope) < DOUBLE_ZERO_SLOPE:
                raise SuspectedDoubleZero(
                    f"grid-exact zero at t={anchor_t} with slope {slope}"
                )
            records.append(ZeroRecord(index=len(records), t=anchor_t, slope=slope,
                                      bracket=(anchor_t, anchor_t)))
            continue
        if f_lo * f_hi >= 0.0:
            continue
        lo, hi = times[k], times[k + 1]
        v_lo = f_lo
        while hi - lo > width:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            v_mid = value_at(mid, anchor_t, anchor_state)[component]
            if v_lo * v_mid <= 0.0:
                hi = mid
            else:
                lo, v_lo = mid, v_mid
        t_zero = 0.5 * (lo + hi)
        state_zero = value_at(t_zero, anchor_t, anchor_state)
        slope = refine(t_zero, state_zero)[component]
        if abs(slope) < DOUBLE_ZERO_SLOPE:
            raise SuspectedDoubleZero(
                f"sign change near t={t_zero} with slope {slope}"
            )
        records.append(ZeroRecord(index=len(records), t=t_zero, slope=slope,
                                  bracket=(lo, hi)))
    return records
