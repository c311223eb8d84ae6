import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from acfheis.errors import CharacteristicAxis, Pole
from acfheis.heisenberg import HField, HPoint, dilate
from acfheis.polar import (
    AngularProfile,
    PolarCoord,
    from_polar,
    gradient_split,
    horizontal_frame,
    polar_field,
    polar_gradients,
    polar_sublaplacians,
    sublaplacian_polar,
    to_polar,
)
from acfheis.symbolic import RHO, PHI, THETA, SymbolicField, t, x, y
from acfheis.verify import random_off_axis


def off_axis(count, seed=0, **kw):
    return random_off_axis(count, np.random.default_rng(seed), **kw)


class TestCoordinates:
    def test_unit_x(self):
        c = to_polar(HPoint.h1(1.0, 0.0, 0.0))
        assert (float(c.rho), float(c.phi), float(c.theta)) == pytest.approx((1.0, math.pi / 2, 0.0), abs=1e-15)
        assert not c.on_axis

    def test_positive_t_axis(self):
        c = to_polar(HPoint.h1(0.0, 0.0, 1.0))
        assert float(c.rho) == 1.0 and float(c.phi) == 0.0
        assert c.on_axis and float(c.theta) == 0.0

    def test_negative_t_axis(self):
        c = to_polar(HPoint.h1(0.0, 0.0, -4.0))
        assert float(c.rho) == 2.0 and float(c.phi) == math.pi

    def test_origin_is_pole(self):
        with pytest.raises(Pole):
            to_polar(HPoint.origin(1))

    def test_roundtrip(self):
        rng = np.random.default_rng(4)
        z = rng.normal(size=(10**4, 3))
        P = HPoint.h1(*z.T)
        c = to_polar(P)
        keep = np.sin(c.phi) > 1e-3
        Q = from_polar(c)
        assert np.allclose(Q.x[keep], P.x[keep], atol=1e-12, rtol=0)
        assert np.allclose(Q.y[keep], P.y[keep], atol=1e-12, rtol=0)
        assert np.allclose(Q.t[keep], P.t[keep], atol=1e-12, rtol=0)

    def test_polar_roundtrip(self):
        c, P = off_axis(1000, seed=2)
        back = to_polar(P)
        assert np.allclose(back.rho, c.rho, rtol=1e-13)
        assert np.allclose(back.phi, c.phi, rtol=1e-12)
        assert np.allclose(back.theta, c.theta, atol=1e-12)

    def test_rejects_bad_coordinates(self):
        from acfheis.errors import InvalidArgument

        with pytest.raises(InvalidArgument):
            PolarCoord(-1.0, 0.5, 0.0)
        with pytest.raises(InvalidArgument):
            PolarCoord(1.0, 4.0, 0.0)


class TestGradients:
    def test_rho_at_111(self):
        g = polar_gradients(HPoint.h1(1.0, 1.0, 1.0))
        rho = 5**0.25
        assert np.sum(g.grad_rho**2) == pytest.approx(2 / rho**2, rel=1e-14)

    def test_identities(self):
        c, P = off_axis(2000, seed=5)
        g = polar_gradients(P)
        r2 = (P.x**2 + P.y**2)[:, 0]
        dot = lambda a, b: np.sum(a * b, -1)  # noqa: E731
        assert np.allclose(dot(g.grad_phi, g.grad_rho), 0.0, atol=1e-12 * np.max(dot(g.grad_phi, g.grad_phi)))
        assert np.allclose(dot(g.grad_phi, g.grad_phi), 4 * r2 / c.rho**4, rtol=1e-12)
        assert np.allclose(dot(g.grad_rho, g.grad_theta), -np.cos(c.phi) / c.rho, rtol=1e-10, atol=1e-14)
        assert np.allclose(dot(g.grad_phi, g.grad_theta), 2 * r2 / c.rho**4, rtol=1e-12)
        assert np.allclose(dot(g.grad_theta, g.grad_theta), 1 / r2, rtol=1e-12)

    def test_against_symbolic(self):
        _, P = off_axis(1000, seed=6)
        xs, ys, ts = P.x[:, 0], P.y[:, 0], P.t
        g = polar_gradients(P)
        for expr, got in ((RHO, g.grad_rho), (PHI, g.grad_phi), (THETA, g.grad_theta)):
            assert np.allclose(got, SymbolicField(expr).gradient(xs, ys, ts), rtol=1e-10, atol=1e-13)

    def test_sublaplacians(self):
        c, P = off_axis(2000, seed=7)
        xs, ys, ts = P.x[:, 0], P.y[:, 0], P.t
        d_rho, d_phi, d_theta = polar_sublaplacians(P)
        assert np.allclose(d_rho, SymbolicField(RHO).sublaplacian(xs, ys, ts), rtol=1e-10)
        assert np.allclose(d_phi, 4 * np.cos(c.phi) / c.rho**2, rtol=1e-10, atol=1e-13)
        assert np.allclose(d_phi, SymbolicField(PHI).sublaplacian(xs, ys, ts), rtol=1e-9, atol=1e-12)
        assert np.all(d_theta == 0)

    def test_axis_refused(self):
        with pytest.raises(CharacteristicAxis):
            polar_gradients(HPoint.h1(0.0, 0.0, 1.0))
        with pytest.raises(CharacteristicAxis):
            polar_sublaplacians(HPoint.h1(1e-12, 0.0, 1.0))

    def test_frame_orthonormal(self):
        _, P = off_axis(500, seed=8)
        f = horizontal_frame(P)
        assert np.allclose(np.sum(f.e_rho**2, -1), 1)
        assert np.allclose(np.sum(f.e_phi**2, -1), 1)
        assert np.allclose(np.sum(f.e_rho * f.e_phi, -1), 0, atol=1e-12)


class TestGradientSplit:
    def test_radial_field(self):
        for alpha in (-2.0, 0.5, 3.0):
            u = polar_field(alpha, np.ones_like, np.zeros_like)
            _, P = off_axis(200, seed=1)
            radial, angular = gradient_split(u, P)
            assert np.max(angular) < 1e-24 * np.max(radial) + 1e-28

    def test_t_at_unit_x(self):
        u = SymbolicField(t).hfield()
        radial, angular = gradient_split(u, HPoint.h1(1.0, 0.0, 0.0))
        assert float(radial + angular) == pytest.approx(4.0, rel=1e-15)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.integers(-3, 3), min_size=6, max_size=6))
    def test_random_polynomial(self, coeffs):
        monomials = [x, y, t, x * y, x**2 * t, y**3]
        expr = sum(c * m for c, m in zip(coeffs, monomials))
        if expr == 0:
            return
        u = SymbolicField(expr).hfield()
        _, P = off_axis(300, seed=3)
        radial, angular = gradient_split(u, P)
        full = u.grad_sq(P)
        assert np.allclose(radial + angular, full, rtol=1e-10, atol=1e-12)

    def test_axis_refused(self):
        with pytest.raises(CharacteristicAxis):
            gradient_split(SymbolicField(t).hfield(), HPoint.h1(0.0, 0.0, 2.0))


class TestSublaplacianPolar:
    def test_t_is_harmonic(self):
        c, _ = off_axis(500, seed=9)
        f = AngularProfile.phi_only(np.cos, lambda p: -np.sin(p), lambda p: -np.cos(p))
        assert np.max(np.abs(sublaplacian_polar(2.0, f, c))) < 1e-12

    def test_fundamental_solution(self):
        c, _ = off_axis(500, seed=10)
        f = AngularProfile.phi_only(np.ones_like, np.zeros_like, np.zeros_like)
        assert np.max(np.abs(sublaplacian_polar(-2.0, f, c))) < 1e-12

    @settings(max_examples=20, deadline=None)
    @given(st.floats(-1.5, 3.5), st.lists(st.floats(-2, 2), min_size=4, max_size=4))
    def test_phi_profile_against_cartesian(self, alpha, coeffs):
        poly = np.polynomial.Polynomial(coeffs)
        d1, d2 = poly.deriv(1), poly.deriv(2)
        f = AngularProfile.phi_only(
            lambda p: poly(np.cos(p)),
            lambda p: -np.sin(p) * d1(np.cos(p)),
            lambda p: np.sin(p) ** 2 * d2(np.cos(p)) - np.cos(p) * d1(np.cos(p)),
        )
        c = sp.symbols("c")
        expr = RHO ** sp.nsimplify(alpha) * sum(sp.nsimplify(a) * c**k for k, a in enumerate(coeffs)).subs(c, t / RHO**2)
        sym = SymbolicField(expr)
        pc, P = off_axis(200, seed=11, rho=(0.3, 2.0), margin=0.1)
        got = sublaplacian_polar(alpha, f, pc)
        ref = sym.sublaplacian(P.x[:, 0], P.y[:, 0], P.t)
        scale = np.max(np.abs(ref)) + 1e-300
        assert np.max(np.abs(got - ref)) <= 1e-8 * scale + 1e-12

    def _theta_profile(self):
        # f = cos(theta) sin(phi) + sin(2 theta) cos(phi)
        return AngularProfile(
            lambda th, p: np.cos(th) * np.sin(p) + np.sin(2 * th) * np.cos(p),
            lambda th, p: -np.sin(th) * np.sin(p) + 2 * np.cos(2 * th) * np.cos(p),
            lambda th, p: np.cos(th) * np.cos(p) - np.sin(2 * th) * np.sin(p),
            lambda th, p: -np.cos(th) * np.sin(p) - 4 * np.sin(2 * th) * np.cos(p),
            lambda th, p: -np.cos(th) * np.sin(p) - np.sin(2 * th) * np.cos(p),
            lambda th, p: -np.sin(th) * np.cos(p) - 2 * np.cos(2 * th) * np.sin(p),
        )

    @pytest.mark.parametrize("alpha", [-1.0, 0.5, 2.0, 3.0])
    def test_theta_branch_against_cartesian(self, alpha):
        expr = RHO**alpha * (sp.cos(THETA) * sp.sin(PHI) + sp.sin(2 * THETA) * sp.cos(PHI))
        sym = SymbolicField(expr)
        pc, P = off_axis(300, seed=12, rho=(0.3, 2.0), margin=0.1)
        got = sublaplacian_polar(alpha, self._theta_profile(), pc)
        ref = sym.sublaplacian(P.x[:, 0], P.y[:, 0], P.t)
        assert np.allclose(got, ref, rtol=1e-8, atol=1e-10 * np.max(np.abs(ref)))

    def test_theta_branch_fd_fallback(self):
        full = self._theta_profile()
        bare = AngularProfile(full.f)
        pc, _ = off_axis(200, seed=13, margin=0.1)
        a = sublaplacian_polar(1.5, full, pc)
        b = sublaplacian_polar(1.5, bare, pc)
        assert np.allclose(a, b, rtol=1e-5, atol=1e-6)

    def test_accepts_hpoint(self):
        pc, P = off_axis(50, seed=14)
        f = AngularProfile.phi_only(np.cos, lambda p: -np.sin(p), lambda p: -np.cos(p))
        assert np.allclose(sublaplacian_polar(3.0, f, pc), sublaplacian_polar(3.0, f, P), rtol=1e-12)

    def test_axis_refused(self):
        f = AngularProfile.phi_only(np.cos)
        with pytest.raises(CharacteristicAxis):
            sublaplacian_polar(2.0, f, PolarCoord(1.0, 0.0, 0.0))


class TestPolarField:
    def test_homogeneity(self):
        u = polar_field(1.7, np.cos, lambda p: -np.sin(p), support=(0.0, math.pi / 2))
        _, P = off_axis(500, seed=15)
        for lam in (0.3, 2.0):
            assert np.allclose(u(dilate(lam, P)), lam**1.7 * u(P), rtol=1e-13, atol=1e-300)

    def test_gradient_against_fd(self):
        u = polar_field(2.5, lambda p: np.cos(p) ** 2, lambda p: -2 * np.sin(p) * np.cos(p))
        _, P = off_axis(200, seed=16, margin=0.2)
        assert u.check_gradient(P) < 1e-6

    def test_zero_outside_support(self):
        u = polar_field(2.0, np.cos, lambda p: -np.sin(p), support=(0.0, math.pi / 2))
        P = HPoint.h1(0.3, 0.1, -0.5)
        assert float(u(P)) == 0.0
        assert np.all(u.grad(P) == 0.0)
        assert u.phi_breaks == (math.pi / 2,)

    def test_sublaplacian_of_eigen_profile(self):
        # rho^2 cos(phi) = t is harmonic through the polar formula
        u = polar_field(2.0, np.cos, lambda p: -np.sin(p), lambda p: -np.cos(p))
        _, P = off_axis(200, seed=17)
        assert np.max(np.abs(u.sublap(P))) < 1e-12

    def test_value_matches_t(self):
        u = polar_field(2.0, np.cos, lambda p: -np.sin(p))
        _, P = off_axis(200, seed=18)
        assert np.allclose(u(P), P.t, rtol=1e-12, atol=1e-14)
        ref = HField(lambda x, y, t: t, horizontal_gradient=lambda x, y, t: np.concatenate([2 * y, -2 * x], -1))
        assert np.allclose(u.grad(P), ref.grad(P), rtol=1e-12, atol=1e-13)

    def test_origin_value(self):
        u = polar_field(1.5, np.cos, lambda p: -np.sin(p))
        P = HPoint.h1(np.array([0.0, 0.0]), np.array([0.0, 0.0]), np.array([0.0, 1.0]))
        assert u(P).tolist() == [0.0, 1.0]
        with pytest.raises(Pole):
            polar_field(-1.0, np.cos, lambda p: -np.sin(p))(HPoint.origin(1))
