"""Poisson geometry of the dual of the 4x4 upper-triangular nilpotent Lie algebra.

The algebra has basis (U, V, W, X, Y, Z) with nonzero commutators
[X,Y] = Z, [Y,V] = U, [X,U] = W, [Z,V] = W.  Dual coordinates are
(pu, pv, pw, px, py, pz).  This module provides the linear Poisson
bracket, Euler vector fields of diagonal quadratic Hamiltonians, the
two Casimirs, the canonical chart on regular orbits, and the reduction
of a diagonal metric to the normalized parameters (lambda, mu, xi,
omega, nu, c, alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ChartMismatch,
    IncompatibleMetric,
    NonpositiveAlphaSquared,
    SingularOrbit,
)

BASIS = ("u", "v", "w", "x", "y", "z")
_I = {name: i for i, name in enumerate(BASIS)}

# Sparse table of structure constants: (i, j) -> ((k, sign), ...) meaning
# [e_i, e_j] = sum sign * e_k.  Single source of truth for every bracket.
STRUCTURE_CONSTANTS: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}


def _add_commutator(a: str, b: str, c: str) -> None:
    i, j, k = _I[a], _I[b], _I[c]
    STRUCTURE_CONSTANTS[(i, j)] = STRUCTURE_CONSTANTS.get((i, j), ()) + ((k, 1),)
    STRUCTURE_CONSTANTS[(j, i)] = STRUCTURE_CONSTANTS.get((j, i), ()) + ((k, -1),)


_add_commutator("x", "y", "z")
_add_commutator("y", "v", "u")
_add_commutator("x", "u", "w")
_add_commutator("z", "v", "w")

COMPATIBILITY_TOL = 1e-12   # construction-time constraint check (relative)
ORBIT_MATCH_TOL = 1e-10     # runtime orbit-membership check


@dataclass(frozen=True)
class CoadjointPoint:
    """A point of the dual space in coordinates (pu, pv, pw, px, py, pz)."""

    pu: float = 0.0
    pv: float = 0.0
    pw: float = 0.0
    px: float = 0.0
    py: float = 0.0
    pz: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.pu, self.pv, self.pw, self.px, self.py, self.pz])

    @staticmethod
    def from_array(p) -> "CoadjointPoint":
        pu, pv, pw, px, py, pz = (float(v) for v in p)
        return CoadjointPoint(pu, pv, pw, px, py, pz)


@dataclass(frozen=True)
class DiagonalMetric:
    """Coefficients of a diagonal quadratic Hamiltonian.

    The energy is 4H(p) = a12 px^2 + a23 py^2 + a13 pz^2 + a24 pu^2
    + a34 pv^2 + a14 pw^2.  Construction enforces nonnegativity and the
    compatibility constraint a13*a34 == a12*a24.
    """

    a12: float
    a13: float
    a14: float
    a23: float
    a24: float
    a34: float

    def __post_init__(self):
        coeffs = (self.a12, self.a13, self.a14, self.a23, self.a24, self.a34)
        if any(c < 0.0 for c in coeffs):
            raise ValueError(f"metric coefficients must be nonnegative, got {coeffs}")
        lhs = self.a13 * self.a34
        rhs = self.a12 * self.a24
        scale = max(abs(lhs), abs(rhs), 1.0)
        if abs(lhs - rhs) > COMPATIBILITY_TOL * scale:
            raise IncompatibleMetric(
                f"a13*a34 = {lhs} differs from a12*a24 = {rhs}"
            )

    @staticmethod
    def riemannian() -> "DiagonalMetric":
        """All coefficients one."""
        return DiagonalMetric(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)

    @staticmethod
    def subriemannian() -> "DiagonalMetric":
        """a12 = a23 = a34 = 1, all other coefficients zero."""
        return DiagonalMetric(1.0, 0.0, 0.0, 1.0, 0.0, 1.0)


@dataclass(frozen=True)
class OrbitId:
    """Casimir values (k1, k2) labelling a coadjoint orbit."""

    k1: float
    k2: float

    @property
    def regular(self) -> bool:
        return self.k1 * self.k2 != 0.0


def poisson_bracket(f_grad, g_grad, p: CoadjointPoint) -> float:
    """Linear Poisson bracket {f, g}(p) = -<p, [df, dg]>.

    Gradients are coefficient vectors over the basis (U, V, W, X, Y, Z).
    """
    pv = p.as_array() if isinstance(p, CoadjointPoint) else np.asarray(p, dtype=float)
    total = 0.0
    for (i, j), terms in STRUCTURE_CONSTANTS.items():
        fi = f_grad[i]
        gj = g_grad[j]
        if fi == 0.0 or gj == 0.0:
            continue
        for k, sign in terms:
            total -= fi * gj * sign * pv[k]
    return total


def coordinate_bracket(i: int, j: int) -> np.ndarray:
    """Bracket of two coordinate functions as an integer coefficient vector.

    {p_i, p_j} is linear in p; the returned length-6 vector c satisfies
    {p_i, p_j}(p) = sum_k c[k] * p_k.  Exact integers, suitable for the
    Jacobi identity check.
    """
    out = np.zeros(6, dtype=np.int64)
    for k, sign in STRUCTURE_CONSTANTS.get((i, j), ()):
        out[k] -= sign
    return out


def hamiltonian(metric: DiagonalMetric, p: CoadjointPoint) -> float:
    """Quadratic energy H(p), including the 1/4 normalization."""
    return 0.25 * (
        metric.a12 * p.px**2
        + metric.a23 * p.py**2
        + metric.a13 * p.pz**2
        + metric.a24 * p.pu**2
        + metric.a34 * p.pv**2
        + metric.a14 * p.pw**2
    )


# dH/dp_a = (1/2) * coeff(a) * p_a with coefficients in basis order.
_GRAD_COEFF_FIELDS = ("a24", "a34", "a14", "a12", "a23", "a13")

# Precompiled Euler terms: pdot_i += -sign * dH_j * p_k for each structure
# entry (i, j) -> (k, sign).  Derived once from the table.
_EULER_TERMS: list[tuple[int, int, int, int]] = [
    (i, j, k, sign)
    for (i, j), terms in STRUCTURE_CONSTANTS.items()
    for k, sign in terms
]


def hamiltonian_gradient(metric: DiagonalMetric, p: CoadjointPoint) -> np.ndarray:
    pv = p.as_array()
    coeffs = np.array([getattr(metric, f) for f in _GRAD_COEFF_FIELDS])
    return 0.5 * coeffs * pv


def euler_field(metric: DiagonalMetric, p) -> np.ndarray:
    """Euler vector field pdot_a = {p_a, H} of the diagonal Hamiltonian.

    Accepts a CoadjointPoint or a length-6 array in basis order and
    returns the tangent vector as an array.  The expansion is generated
    from the structure-constant table, so the field is exactly the
    bracket of the coordinates with H.
    """
    pv = p.as_array() if isinstance(p, CoadjointPoint) else np.asarray(p, dtype=float)
    halfco = (
        0.5 * metric.a24, 0.5 * metric.a34, 0.5 * metric.a14,
        0.5 * metric.a12, 0.5 * metric.a23, 0.5 * metric.a13,
    )
    out = np.zeros(6)
    for i, j, k, sign in _EULER_TERMS:
        out[i] -= sign * halfco[j] * pv[j] * pv[k]
    return out


def casimirs(p: CoadjointPoint) -> tuple[float, float]:
    """The two invariants K1 = pw and K2 = pw*py - pz*pu."""
    return p.pw, p.pw * p.py - p.pz * p.pu


@dataclass(frozen=True)
class ChartPoint:
    """Canonical coordinates (a, A, b, B) on a regular orbit, with the
    chart scales (lam, mu) they were produced with."""

    a: float
    A: float
    b: float
    B: float
    lam: float
    mu: float

    def __post_init__(self):
        if self.lam <= 0.0 or self.mu <= 0.0:
            raise ValueError("chart scales lam, mu must be positive")


def chart_coordinates(
    p: CoadjointPoint, k1: float, lam: float, mu: float
) -> tuple[float, float, float, float]:
    """Raw chart formulas (a, A, b, B), extended off the orbit.

    a = -lam*px, A = pu/(k1*lam), b = mu*pv, B = pz/(k1*mu).  No orbit
    membership check: the ambient extension is what finite-difference
    gradients of the chart functions are taken of.
    """
    if k1 == 0.0:
        raise SingularOrbit("chart requires k1 != 0")
    return (-lam * p.px, p.pu / (k1 * lam), mu * p.pv, p.pz / (k1 * mu))


def chart_to_canonical(
    p: CoadjointPoint, k: OrbitId, lam: float, mu: float
) -> ChartPoint:
    """Map an orbit point to canonical coordinates.

    The sign of b differs from the inverse map one would naively read
    off the pair (a, A): this is the choice that makes both pullback
    brackets {a, A} and {b, B} equal +1 on the orbit.
    """
    if not k.regular:
        raise SingularOrbit(f"regular coadjoint orbit requires k1*k2 != 0, got {k}")
    c1, c2 = casimirs(p)
    scale = max(abs(k.k1), abs(k.k2), 1.0)
    if abs(c1 - k.k1) > ORBIT_MATCH_TOL * scale or abs(c2 - k.k2) > ORBIT_MATCH_TOL * scale:
        raise ChartMismatch(
            f"point has casimirs ({c1}, {c2}), chart is for ({k.k1}, {k.k2})"
        )
    a, A, b, B = chart_coordinates(p, k.k1, lam, mu)
    return ChartPoint(a=a, A=A, b=b, B=B, lam=lam, mu=mu)


def chart_from_canonical(q: ChartPoint, k: OrbitId) -> CoadjointPoint:
    """Inverse chart; the output lies on the orbit k by construction."""
    if k.k1 == 0.0:
        raise SingularOrbit("chart requires k1 != 0")
    if not k.regular:
        raise SingularOrbit(f"regular coadjoint orbit requires k1*k2 != 0, got {k}")
    lam, mu = q.lam, q.mu
    return CoadjointPoint(
        pu=k.k1 * lam * q.A,
        pv=q.b / mu,
        pw=k.k1,
        px=-q.a / lam,
        py=(k.k2 + k.k1**2 * lam * mu * q.A * q.B) / k.k1,
        pz=k.k1 * mu * q.B,
    )


def default_scales(metric: DiagonalMetric) -> tuple[float, float]:
    """Chart scales lam^2 = 2*a12, mu^2 = 2*a34 used by the reduction."""
    return math.sqrt(2.0 * metric.a12), math.sqrt(2.0 * metric.a34)


def rotate_chart(a: float, A: float, b: float, B: float) -> tuple[float, float, float, float]:
    """45-degree symplectic rotation (a,A,b,B) -> (x,X,y,Y)."""
    s = 1.0 / math.sqrt(2.0)
    return s * (a + b), s * (A + B), s * (b - a), s * (B - A)


def unrotate_chart(x: float, X: float, y: float, Y: float) -> tuple[float, float, float, float]:
    s = 1.0 / math.sqrt(2.0)
    return s * (x - y), s * (X - Y), s * (x + y), s * (X + Y)


@dataclass(frozen=True)
class ReducedParams:
    """Orbit-level quantities derived from a metric and an orbit label.

    xi, omega, nu, c are the coefficients of the reduced quartic
    Hamiltonian; alpha is the normalized transverse frequency,
    alpha^2 = 1 + 2*c*nu^(1/3).  xi_normalization = xi * nu^(-2/3) is
    recorded as a diagnostic: the normal form assumes it equals 1, which
    singles out particular orbits, and it is reported rather than
    asserted.
    """

    lam: float
    mu: float
    xi: float
    omega: float
    nu: float
    c: float
    alpha: float
    xi_normalization: float = field(repr=False, default=float("nan"))

    def __post_init__(self):
        if self.lam <= 0.0 or self.mu <= 0.0:
            raise ValueError("chart scales must be positive")
        if self.alpha <= 0.0:
            raise ValueError("alpha must be positive")


def reduce_params(metric: DiagonalMetric, k: OrbitId) -> ReducedParams:
    """Reduce a diagonal metric on a regular orbit to (lam, mu, xi, omega, nu, c, alpha)."""
    if metric.a12 <= 0.0 or metric.a23 <= 0.0 or metric.a34 <= 0.0:
        raise IncompatibleMetric(
            "reduction requires a12, a23, a34 > 0 "
            f"(got {metric.a12}, {metric.a23}, {metric.a34})"
        )
    if not k.regular:
        raise SingularOrbit(f"regular coadjoint orbit requires k1*k2 != 0, got {k}")
    lam, mu = default_scales(metric)
    root = math.sqrt(metric.a12 * metric.a34)
    xi = -(metric.a13 * metric.a34 * k.k1**2 + metric.a23 * k.k2 * root)
    omega = metric.a13 * metric.a34 * k.k1**2 - metric.a23 * k.k2 * root
    nu = metric.a12 * metric.a23 * metric.a34 * k.k1**2
    c = metric.a13 / (metric.a12 * metric.a23)
    alpha_sq = 1.0 + 2.0 * c * nu ** (1.0 / 3.0)
    if alpha_sq <= 0.0:
        raise NonpositiveAlphaSquared(f"1 + 2*c*nu^(1/3) = {alpha_sq} <= 0")
    return ReducedParams(
        lam=lam,
        mu=mu,
        xi=xi,
        omega=omega,
        nu=nu,
        c=c,
        alpha=math.sqrt(alpha_sq),
        xi_normalization=xi * nu ** (-2.0 / 3.0),
    )


def reduced_hamiltonian(
    metric: DiagonalMetric, k: OrbitId, x: float, X: float, y: float, Y: float
) -> float:
    """Energy H expressed in the rotated chart coordinates (x, X, y, Y).

    This is the exact pullback of H through the chart and rotation:
    H = (x^2 + y^2)/8 - (xi/2) X^2 + (omega/2) Y^2
        + (nu/4)(X^4 + Y^4 - 2 X^2 Y^2) + const,
    with the orbit-dependent constant carrying the Casimir terms.  The
    canonical Hamiltonian field of this function is the pushforward of
    the Euler field through the chart.
    """
    params = reduce_params(metric, k)
    const = 0.25 * (metric.a23 * k.k2**2 / k.k1**2 + metric.a14 * k.k1**2)
    return (
        0.125 * (x * x + y * y)
        - 0.5 * params.xi * X * X
        + 0.5 * params.omega * Y * Y
        + 0.25 * params.nu * (X**4 + Y**4 - 2.0 * X * X * Y * Y)
        + const
    )
