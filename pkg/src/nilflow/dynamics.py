"""Concrete vector fields and closed-form solutions of the normalized system.

The phase space is (X, x, Y, y): a Duffing factor (X, x) carrying a
homoclinic loop, weakly coupled to a transverse linear factor (Y, y)
with frequency alpha.  The module provides the perturbed family of
vector fields, the hyperbolic-secant separatrix, the fundamental
solutions of the transverse variational equation, the extended
autonomous Hamiltonian used for symplectic error monitoring, and a
sampling-based hypothesis check for potential profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

STATE_ORDER = ("X", "x", "Y", "y")


@dataclass(frozen=True)
class PhasePoint4:
    """Point of the four-dimensional normalized phase space."""

    X: float
    x: float
    Y: float
    y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.X, self.x, self.Y, self.y])


def field_X_eps(state, alpha: float, eps: float) -> np.ndarray:
    """Right-hand side of the perturbed family.

    Xdot = x
    xdot = X - 2 X^3 + 2 eps X Y^2
    Ydot = y
    ydot = (-alpha^2 + 2 X^2) Y + 2 eps Y^3

    The plane {x = X = 0} is invariant for every eps.
    """
    if isinstance(state, PhasePoint4):
        X, x, Y, y = state.X, state.x, state.Y, state.y
    else:
        X, x, Y, y = state
    return np.array([
        x,
        X - 2.0 * X**3 + 2.0 * eps * X * Y * Y,
        y,
        (-alpha * alpha + 2.0 * X * X) * Y + 2.0 * eps * Y**3,
    ])


def perturbed_ode(alpha: float, eps: float) -> Callable:
    """Time-independent ODE callable f(t, state) for the integrators."""
    a2 = alpha * alpha

    def f(t, s):
        X, x, Y, y = s
        return (
            x,
            X - 2.0 * X**3 + 2.0 * eps * X * Y * Y,
            y,
            (-a2 + 2.0 * X * X) * Y + 2.0 * eps * Y**3,
        )

    return f


def duffing_energy(X: float, x: float) -> float:
    """First integral h = x^2 + (X^2 - 1/2)^2 of the unperturbed Duffing factor."""
    return x * x + (X * X - 0.5) ** 2


@dataclass(frozen=True)
class PotentialProfile:
    """Decaying potential q(t) with its derivative in closed form.

    Metadata flags record what the profile claims about itself; the
    hypothesis_check operation verifies the claims by sampling.
    t_decay is a time after which |q| has dropped below 1% of |q(0)|.
    """

    q: Callable[[float], float]
    qdot: Callable[[float], float]
    name: str
    t_decay: float | None = None
    even: bool | None = None
    monotone_decreasing: bool | None = None


def sech_squared_profile() -> PotentialProfile:
    """The canonical profile q(t) = 2 sech(t)^2, qdot = -4 sech(t)^2 tanh(t)."""

    def q(t: float) -> float:
        s = 1.0 / math.cosh(t)
        return 2.0 * s * s

    def qdot(t: float) -> float:
        s = 1.0 / math.cosh(t)
        return -4.0 * s * s * math.tanh(t)

    return PotentialProfile(
        q=q, qdot=qdot, name="2sech^2", t_decay=3.0,
        even=True, monotone_decreasing=True,
    )


def zero_profile() -> PotentialProfile:
    """q identically zero: the transverse factor is a pure harmonic oscillator."""
    return PotentialProfile(
        q=lambda t: 0.0, qdot=lambda t: 0.0, name="zero", t_decay=0.0,
        even=True, monotone_decreasing=True,
    )


@dataclass(frozen=True)
class ExtendedState:
    """Autonomous extension of the transverse oscillator: (z, p) plus the
    time variable tau and its conjugate momentum u."""

    z: float
    p: float
    tau: float = 0.0
    u: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.z, self.p, self.tau, self.u])


def extended_hamiltonian(es, alpha: float, profile: PotentialProfile) -> float:
    """Conserved energy (1/2) p^2 + (1/2)[alpha^2 - q(tau)] z^2 + u."""
    if isinstance(es, ExtendedState):
        z, p, tau, u = es.z, es.p, es.tau, es.u
    else:
        z, p, tau, u = es
    return 0.5 * p * p + 0.5 * (alpha * alpha - profile.q(tau)) * z * z + u


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling grid for the variational solutions."""

    t_min: float
    t_max: float
    h: float = 1e-3

    def __post_init__(self):
        if self.h <= 0.0 or self.t_max <= self.t_min:
            raise ValueError(f"bad grid {self}")


class VariationalSolutions:
    """Fundamental solutions of zddot + [alpha^2 - q(t)] z = 0 on a grid.

    y0 has y0(0) = 1, y0'(0) = 0; y1 has y1(0) = 0, y1'(0) = 1.  Values
    between grid nodes come from cubic Hermite interpolation of the
    stored (value, derivative) pairs, so the dense output carries the
    integrator's accuracy.
    """

    def __init__(self, times: np.ndarray, samples: np.ndarray,
                 alpha: float, profile: PotentialProfile):
        self.times = times
        self.samples = samples        # columns: y0, dy0, y1, dy1
        self.alpha = alpha
        self.profile = profile
        self._h = times[1] - times[0]

    def _interp(self, t: float, col: int) -> tuple[float, float]:
        """Hermite value and derivative of column pair (col, col+1) at t."""
        times = self.times
        if t <= times[0] or t >= times[-1]:
            if t < times[0] - 1e-12 or t > times[-1] + 1e-12:
                raise ValueError(f"t={t} outside sampled range [{times[0]}, {times[-1]}]")
            idx = 0 if t <= times[0] else len(times) - 2
        else:
            idx = int(np.searchsorted(times, t) - 1)
        t0 = times[idx]
        hstep = times[idx + 1] - t0
        s = (t - t0) / hstep
        y0, d0 = self.samples[idx, col], self.samples[idx, col + 1]
        y1, d1 = self.samples[idx + 1, col], self.samples[idx + 1, col + 1]
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        val = h00 * y0 + h10 * hstep * d0 + h01 * y1 + h11 * hstep * d1
        dh00 = 6 * s * (s - 1)
        dh10 = (1 - s) * (1 - 3 * s)
        dh01 = -dh00
        dh11 = s * (3 * s - 2)
        der = (dh00 * y0 / hstep + dh10 * d0 + dh01 * y1 / hstep + dh11 * d1)
        return val, der

    def y0(self, t: float) -> float:
        return self._interp(t, 0)[0]

    def dy0(self, t: float) -> float:
        return self._interp(t, 0)[1]

    def y1(self, t: float) -> float:
        return self._interp(t, 2)[0]

    def dy1(self, t: float) -> float:
        return self._interp(t, 2)[1]

    def combination(self, c0: float, c1: float, t: float) -> tuple[float, float]:
        """Value and derivative of c0*y0 + c1*y1 at t."""
        v0, d0 = self._interp(t, 0)
        v1, d1 = self._interp(t, 2)
        return c0 * v0 + c1 * v1, c0 * d0 + c1 * d1

    def wronskian_samples(self) -> np.ndarray:
        s = self.samples
        return s[:, 0] * s[:, 3] - s[:, 2] * s[:, 1]


def variational_ode(alpha: float, profile: PotentialProfile) -> Callable:
    """Joint ODE for the fundamental pair: state (y0, dy0, y1, dy1)."""
    a2 = alpha * alpha
    q = profile.q

    def f(t, s):
        w = a2 - q(t)
        return (s[1], -w * s[0], s[3], -w * s[2])

    return f


def variational_solutions(alpha: float, profile: PotentialProfile,
                          grid: TimeGrid) -> VariationalSolutions:
    """Integrate the fundamental solutions over the grid with RK4.

    The grid may start at a negative time; integration always starts
    from the initial data at t = 0 and proceeds in both directions.
    """
    from .integrators import StepperConfig, rk4_integrate

    if grid.t_min > 0.0 or grid.t_max < 0.0:
        raise ValueError("grid must contain t = 0 where the initial data live")
    f = variational_ode(alpha, profile)
    init = (1.0, 0.0, 0.0, 1.0)

    parts = []
    if grid.t_max > 0.0:
        cfg = StepperConfig(h=grid.h, T=grid.t_max, method="rk4")
        fwd = rk4_integrate(init, f, cfg)
        parts.append((fwd.times, fwd.states))
    if grid.t_min < 0.0:
        cfg = StepperConfig(h=grid.h, T=-grid.t_min, method="rk4")
        bwd = rk4_integrate(init, f, cfg, direction=-1)
        parts.insert(0, (bwd.times[::-1][:-1], bwd.states[::-1][:-1]))
    times = np.concatenate([p[0] for p in parts])
    states = np.concatenate([p[1] for p in parts])
    return VariationalSolutions(times, states, alpha, profile)


@dataclass(frozen=True)
class SeparatrixCoords:
    """Coordinates on the unperturbed homoclinic manifold: time offset,
    branch sign, and coefficients of the even/odd transverse solutions."""

    t0: float = 0.0
    sign: int = 1
    c0: float = 0.0
    c1: float = 0.0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


def separatrix_state(sc: SeparatrixCoords, t: float,
                     variational: VariationalSolutions | None = None) -> PhasePoint4:
    """State on the homoclinic manifold at time t.

    X = sign * sech(t + t0) and x = -sign * sech(t + t0) * tanh(t + t0),
    which is the time derivative of X; the transverse component is
    c0*y0 + c1*y1 evaluated through the variational solver.
    """
    s = t + sc.t0
    sech = 1.0 / math.cosh(s)
    X = sc.sign * sech
    x = -sc.sign * sech * math.tanh(s)
    if sc.c0 == 0.0 and sc.c1 == 0.0:
        Y, y = 0.0, 0.0
    else:
        if variational is None:
            raise ValueError("nonzero transverse coefficients need a variational solver")
        Y, y = variational.combination(sc.c0, sc.c1, s)
    return PhasePoint4(X=X, x=x, Y=Y, y=y)


@dataclass(frozen=True)
class ProfileReport:
    """Result of sampling-based checks on a potential profile."""

    even: bool
    monotone_decreasing: bool
    decays: bool
    decay_rate: float
    decay_amplitude: float
    max_abs: float


def hypothesis_check(profile: PotentialProfile, t_max: float = 20.0,
                     n: int = 4001) -> ProfileReport:
    """Sample q and report evenness, monotone decay, and an exponential fit.

    Evenness is |q(t) - q(-t)| <= 1e-12 on the sample; monotonicity is
    non-increase of |q| on [0, t_max]; the decay rate comes from a
    log-linear fit of |q| on t in [5, t_max].
    """
    ts = np.linspace(0.0, t_max, n)
    qs = np.array([profile.q(float(t)) for t in ts])
    qneg = np.array([profile.q(float(-t)) for t in ts])
    even = bool(np.max(np.abs(qs - qneg)) <= 1e-12)
    diffs = np.diff(np.abs(qs))
    monotone = bool(np.all(diffs <= 1e-12))
    max_abs = float(np.max(np.abs(qs)))

    if max_abs == 0.0:
        return ProfileReport(even=even, monotone_decreasing=monotone, decays=True,
                             decay_rate=math.inf, decay_amplitude=0.0, max_abs=0.0)

    tail = (ts >= 5.0) & (np.abs(qs) > 0.0)
    if np.count_nonzero(tail) >= 10:
        slope, intercept = np.polyfit(ts[tail], np.log(np.abs(qs[tail])), 1)
        rate = -float(slope)
        amplitude = float(math.exp(intercept))
    else:
        rate = 0.0
        amplitude = max_abs
    tail_max = float(np.max(np.abs(qs[ts >= 0.75 * t_max]), initial=0.0))
    decays = tail_max <= 1e-6 * max_abs
    return ProfileReport(even=even, monotone_decreasing=monotone, decays=decays,
                         decay_rate=rate, decay_amplitude=amplitude, max_abs=max_abs)
