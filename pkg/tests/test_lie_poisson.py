import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from nilflow.errors import ChartMismatch, IncompatibleMetric, SingularOrbit
from nilflow.lie_poisson import (
    BASIS,
    ChartPoint,
    CoadjointPoint,
    DiagonalMetric,
    OrbitId,
    casimirs,
    chart_coordinates,
    chart_from_canonical,
    chart_to_canonical,
    coordinate_bracket,
    default_scales,
    euler_field,
    hamiltonian,
    poisson_bracket,
    reduce_params,
    reduced_hamiltonian,
    rotate_chart,
    unrotate_chart,
)

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)


def grad(name):
    g = np.zeros(6)
    g[BASIS.index(name)] = 1.0
    return g


class TestBracket:
    def test_px_py_is_minus_pz(self):
        p = CoadjointPoint(pz=1.0)
        assert poisson_bracket(grad("x"), grad("y"), p) == -1.0

    def test_pz_pv_is_minus_pw(self):
        p = CoadjointPoint(pw=2.0)
        assert poisson_bracket(grad("z"), grad("v"), p) == -2.0

    def test_same_function_vanishes(self):
        p = CoadjointPoint(pu=1.0, pv=2.0, pw=3.0, px=4.0, py=5.0, pz=6.0)
        assert poisson_bracket(grad("x"), grad("x"), p) == 0.0

    @given(f=st.lists(finite, min_size=6, max_size=6),
           g=st.lists(finite, min_size=6, max_size=6),
           p=st.lists(finite, min_size=6, max_size=6))
    def test_skew_symmetry(self, f, g, p):
        pt = CoadjointPoint.from_array(p)
        lhs = poisson_bracket(f, g, pt)
        rhs = poisson_bracket(g, f, pt)
        assert lhs == pytest.approx(-rhs, abs=1e-9)

    def test_jacobi_identity_exact(self):
        # {{pa,pb},pc} + cyclic = 0 with exact integer coefficient vectors
        def lin_bracket(vec, c):
            out = np.zeros(6, dtype=np.int64)
            for k in range(6):
                if vec[k]:
                    out += vec[k] * coordinate_bracket(k, c)
            return out

        for a in range(6):
            for b in range(6):
                for c in range(6):
                    total = (
                        lin_bracket(coordinate_bracket(a, b), c)
                        + lin_bracket(coordinate_bracket(b, c), a)
                        + lin_bracket(coordinate_bracket(c, a), b)
                    )
                    assert np.all(total == 0), (a, b, c, total)


def _symbolic_euler_oracle():
    """Independent expansion of {p_a, H} by the Leibniz rule in sympy."""
    pu, pv, pw, px, py, pz = sp.symbols("pu pv pw px py pz")
    coords = {"u": pu, "v": pv, "w": pw, "x": px, "y": py, "z": pz}
    table = {
        ("x", "y"): -pz, ("y", "v"): -pu, ("x", "u"): -pw, ("z", "v"): -pw,
    }

    def pb(a, b):
        if (a, b) in table:
            return table[(a, b)]
        if (b, a) in table:
            return -table[(b, a)]
        return sp.Integer(0)

    a12, a13, a14, a23, a24, a34 = sp.symbols("a12 a13 a14 a23 a24 a34")
    quad = [(a12, "x"), (a23, "y"), (a13, "z"), (a24, "u"), (a34, "v"), (a14, "w")]
    fields = {}
    for name in BASIS:
        # {p_a, H} with H = (1/4) sum coeff * p_b^2; Leibniz gives
        # (1/2) sum coeff * p_b * {p_a, p_b}
        expr = sum(sp.Rational(1, 2) * coeff * coords[b] * pb(name, b)
                   for coeff, b in quad)
        fields[name] = sp.lambdify(
            (a12, a13, a14, a23, a24, a34, pu, pv, pw, px, py, pz), expr)
    return fields


ORACLE_FIELDS = _symbolic_euler_oracle()


class TestEulerField:
    def test_zero_point_is_equilibrium(self):
        m = DiagonalMetric.riemannian()
        assert np.all(euler_field(m, CoadjointPoint()) == 0.0)

    def test_known_component(self):
        m = DiagonalMetric.riemannian()
        p = CoadjointPoint(py=1.0, pz=1.0)
        e = euler_field(m, p)
        assert e[BASIS.index("x")] == pytest.approx(-0.5, abs=1e-15)

    def test_against_symbolic_leibniz_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            coeffs = rng.uniform(0.1, 2.0, 4)   # a12, a13, a23, a34 free
            a12, a13, a23, a34 = (float(v) for v in coeffs)
            a24 = a13 * a34 / a12               # compatibility
            a14 = float(rng.uniform(0.0, 2.0))
            m = DiagonalMetric(a12=a12, a13=a13, a14=a14, a23=a23, a24=a24, a34=a34)
            p = rng.uniform(-3, 3, 6)
            e = euler_field(m, p)
            for i, name in enumerate(BASIS):
                want = ORACLE_FIELDS[name](a12, a13, a14, a23, a24, a34, *p)
                assert e[i] == pytest.approx(want, abs=1e-12)

    def test_casimirs_annihilated(self):
        rng = np.random.default_rng(5)
        m = DiagonalMetric.riemannian()
        for _ in range(50):
            arr = rng.uniform(-5, 5, 6)
            p = CoadjointPoint.from_array(arr)
            e = euler_field(m, p)
            dk1 = np.array([0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
            dk2 = np.array([-p.pz, 0.0, p.py, 0.0, p.pw, -p.pu])
            assert abs(dk1 @ e) <= 1e-13
            assert abs(dk2 @ e) <= 1e-12


class TestCasimirs:
    def test_simple(self):
        assert casimirs(CoadjointPoint(pw=1.0, py=1.0)) == (1.0, 1.0)

    def test_zero(self):
        assert casimirs(CoadjointPoint()) == (0.0, 0.0)

    def test_mixed(self):
        p = CoadjointPoint(pu=2.0, pw=3.0, py=1.0, pz=1.0)
        assert casimirs(p) == (3.0, 1.0)


class TestChart:
    def test_origin_maps_to_reference_point(self):
        q = ChartPoint(a=0.0, A=0.0, b=0.0, B=0.0, lam=1.0, mu=1.0)
        p = chart_from_canonical(q, OrbitId(1.0, 1.0))
        assert p.as_array() == pytest.approx([0.0, 0.0, 1.0, 0.0, 1.0, 0.0])
        assert casimirs(p) == (1.0, 1.0)

    def test_roundtrip_orbit_side(self):
        rng = np.random.default_rng(21)
        worst = 0.0
        for _ in range(100):
            arr = rng.uniform(-10, 10, 6)
            arr[2] = rng.uniform(0.5, 10) * rng.choice([-1, 1])   # keep |k1| away from 0
            p = CoadjointPoint.from_array(arr)
            k1, k2 = casimirs(p)
            if abs(k2) < 1e-6:
                continue
            k = OrbitId(k1, k2)
            lam = float(rng.uniform(0.2, 5))
            mu = float(rng.uniform(0.2, 5))
            q = chart_to_canonical(p, k, lam, mu)
            back = chart_from_canonical(q, k)
            worst = max(worst, float(np.max(np.abs(back.as_array() - p.as_array()))))
        assert worst <= 1e-12

    def test_roundtrip_chart_side(self):
        rng = np.random.default_rng(22)
        worst = 0.0
        for _ in range(100):
            a, A, b, B = rng.uniform(-10, 10, 4)
            lam = float(rng.uniform(0.2, 5))
            mu = float(rng.uniform(0.2, 5))
            k = OrbitId(float(rng.uniform(0.3, 5) * rng.choice([-1, 1])),
                        float(rng.uniform(0.3, 5) * rng.choice([-1, 1])))
            q = ChartPoint(a=a, A=A, b=b, B=B, lam=lam, mu=mu)
            p = chart_from_canonical(q, k)
            q2 = chart_to_canonical(p, k, lam, mu)
            worst = max(worst, abs(q2.a - a), abs(q2.A - A),
                        abs(q2.b - b), abs(q2.B - B))
        assert worst <= 1e-12

    def test_output_lies_on_orbit_exactly(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            q = ChartPoint(*rng.uniform(-5, 5, 4), lam=1.3, mu=0.7)
            k = OrbitId(2.0, -3.0)
            p = chart_from_canonical(q, k)
            k1, k2 = casimirs(p)
            assert k1 == k.k1
            assert abs(k2 - k.k2) <= 1e-12 * max(1.0, abs(k.k2))

    def test_canonical_brackets_by_finite_differences(self):
        # pullback gradients of the chart functions via central differences
        k = OrbitId(1.5, -2.0)
        lam, mu = 1.1, 0.8
        rng = np.random.default_rng(24)
        fd = 1e-6

        def chart_coords(p_arr):
            return np.array(chart_coordinates(
                CoadjointPoint.from_array(p_arr), k.k1, lam, mu))

        for _ in range(10):
            q0 = ChartPoint(*rng.uniform(-2, 2, 4), lam=lam, mu=mu)
            p0 = chart_from_canonical(q0, k).as_array()
            grads = np.zeros((4, 6))
            for i in range(6):
                dp = np.zeros(6)
                dp[i] = fd
                grads[:, i] = (chart_coords(p0 + dp) - chart_coords(p0 - dp)) / (2 * fd)
            pt = CoadjointPoint.from_array(p0)
            assert poisson_bracket(grads[0], grads[1], pt) == pytest.approx(1.0, abs=1e-6)
            assert poisson_bracket(grads[2], grads[3], pt) == pytest.approx(1.0, abs=1e-6)
            for i, j in ((0, 2), (0, 3), (1, 2), (1, 3)):
                assert poisson_bracket(grads[i], grads[j], pt) == pytest.approx(0.0, abs=1e-6)

    def test_singular_orbit_rejected(self):
        q = ChartPoint(a=0.0, A=0.0, b=0.0, B=0.0, lam=1.0, mu=1.0)
        with pytest.raises(SingularOrbit):
            chart_from_canonical(q, OrbitId(0.0, 1.0))
        with pytest.raises(SingularOrbit):
            chart_to_canonical(CoadjointPoint(pw=1.0, py=1.0), OrbitId(1.0, 0.0), 1.0, 1.0)

    def test_chart_mismatch_rejected(self):
        p = CoadjointPoint(pw=1.0, py=1.0)   # casimirs (1, 1)
        with pytest.raises(ChartMismatch):
            chart_to_canonical(p, OrbitId(2.0, 1.0), 1.0, 1.0)


class TestReduceParams:
    def test_subriemannian_alpha_is_one(self):
        m = DiagonalMetric.subriemannian()
        for k in (OrbitId(1.0, 1.0), OrbitId(-2.0, 3.0), OrbitId(0.5, -0.25)):
            params = reduce_params(m, k)
            assert params.alpha == 1.0
            assert params.c == 0.0

    def test_all_ones_metric(self):
        params = reduce_params(DiagonalMetric.riemannian(), OrbitId(1.0, 1.0))
        assert params.c == 1.0
        assert params.nu == 1.0
        assert params.alpha == pytest.approx(math.sqrt(3.0), abs=1e-12)

    def test_negative_k1_allowed(self):
        params = reduce_params(DiagonalMetric.riemannian(), OrbitId(-1.0, 1.0))
        assert params.nu == 1.0
        assert params.alpha == pytest.approx(math.sqrt(3.0), abs=1e-12)

    def test_incompatible_metric_rejected(self):
        with pytest.raises(IncompatibleMetric):
            DiagonalMetric(a12=1.0, a13=1.0, a14=0.0, a23=1.0, a24=1.0, a34=2.0)

    def test_singular_orbit_rejected(self):
        with pytest.raises(SingularOrbit):
            reduce_params(DiagonalMetric.riemannian(), OrbitId(0.0, 1.0))

    def test_omega_identity(self):
        rng = np.random.default_rng(31)
        for _ in range(30):
            a12, a13, a23, a34 = rng.uniform(0.1, 3.0, 4)
            a24 = a13 * a34 / a12
            m = DiagonalMetric(a12=float(a12), a13=float(a13), a14=0.0,
                               a23=float(a23), a24=float(a24), a34=float(a34))
            k = OrbitId(float(rng.uniform(0.2, 3)), float(rng.uniform(-3, 3) or 1.0))
            if not k.regular:
                continue
            params = reduce_params(m, k)
            lhs = params.omega
            rhs = params.xi + 2.0 * params.c * params.nu
            assert abs(lhs - rhs) <= 1e-14 * max(1.0, abs(lhs))
            assert params.nu > 0.0
            assert params.alpha**2 == pytest.approx(
                1.0 + 2.0 * params.c * params.nu ** (1 / 3), rel=1e-14)

    def test_scaling_identity_on_normalized_orbit(self):
        # On the orbit where xi * nu^(-2/3) = 1 the quartic normal form is
        # exact: Hk(g(w)) - nu^(1/3) * Hnorm(w) must be constant in w.
        m = DiagonalMetric.riemannian()
        k = OrbitId(1.0, -2.0)
        params = reduce_params(m, k)
        assert params.xi_normalization == pytest.approx(1.0, abs=1e-14)
        a = params.nu ** (1.0 / 6.0)

        def h_k(w):
            x, X, y, Y = w
            return 0.5 * (x * x - params.xi * X * X + params.nu * X**4
                          + y * y + params.omega * Y * Y + params.nu * Y**4
                          - 2.0 * params.nu * X * X * Y * Y)

        def h_norm(w):
            x, X, y, Y = w
            return 0.5 * (x * x + (X * X - 0.5) ** 2 + y * y
                          + params.alpha**2 * Y * Y + Y**4 - 2.0 * X * X * Y * Y)

        rng = np.random.default_rng(32)
        w0 = rng.uniform(-2, 2, 4)

        def transformed(w):
            x, X, y, Y = w
            return h_k((a * x, X / a, a * y, Y / a))

        base = transformed(w0) - params.nu ** (1 / 3) * h_norm(w0)
        for _ in range(20):
            w = rng.uniform(-2, 2, 4)
            diff = transformed(w) - params.nu ** (1 / 3) * h_norm(w)
            assert diff == pytest.approx(base, abs=1e-10)


class TestReducedHamiltonian:
    def test_matches_direct_pullback(self):
        # dual route: closed form against H evaluated through the chart
        m = DiagonalMetric.riemannian()
        k = OrbitId(1.0, -2.0)
        lam, mu = default_scales(m)
        rng = np.random.default_rng(41)
        for _ in range(30):
            x, X, y, Y = rng.uniform(-2, 2, 4)
            a, A, b, B = unrotate_chart(x, X, y, Y)
            p = chart_from_canonical(ChartPoint(a, A, b, B, lam, mu), k)
            direct = hamiltonian(m, p)
            closed = reduced_hamiltonian(m, k, x, X, y, Y)
            assert closed == pytest.approx(direct, abs=1e-12)

    def test_conjugacy_with_euler_field(self):
        # pushforward of the Euler field through the chart equals the
        # canonical Hamiltonian field of the reduced energy
        m = DiagonalMetric.riemannian()
        k = OrbitId(1.0, -2.0)
        lam, mu = default_scales(m)
        rng = np.random.default_rng(42)
        fd = 1e-6

        def to_xy(p_arr):
            coords = chart_coordinates(CoadjointPoint.from_array(p_arr), k.k1, lam, mu)
            return np.array(rotate_chart(*coords))

        for _ in range(15):
            w0 = rng.uniform(-2, 2, 4)
            a, A, b, B = unrotate_chart(*w0)
            p0 = chart_from_canonical(ChartPoint(a, A, b, B, lam, mu), k).as_array()
            e = euler_field(m, p0)
            jac = np.zeros((4, 6))
            for i in range(6):
                dp = np.zeros(6)
                dp[i] = fd
                jac[:, i] = (to_xy(p0 + dp) - to_xy(p0 - dp)) / (2 * fd)
            pushed = jac @ e

            def h_xy(w):
                return reduced_hamiltonian(m, k, *w)

            def deriv(i):
                wp, wm = w0.copy(), w0.copy()
                wp[i] += fd
                wm[i] -= fd
                return (h_xy(wp) - h_xy(wm)) / (2 * fd)

            canonical = np.array([deriv(1), -deriv(0), deriv(3), -deriv(2)])
            scale = max(1.0, float(np.max(np.abs(canonical))))
            assert float(np.max(np.abs(pushed - canonical))) / scale <= 1e-5
