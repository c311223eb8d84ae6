import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acfheis.errors import DegenerateField, InvalidArgument
from acfheis.heis_eigen import PhiInterval, sl_eigen
from acfheis.heis_mono import (
    HTwoPhasePair,
    beta_necessity,
    boundary_energy,
    boundary_quotient,
    cap_eigenfield,
    gradient_bound_diagnostic,
    j_beta,
    j_log_derivative,
    linear_pair,
    linear_part,
    lower_bound_check,
    restricted_field,
    t_pair,
    t_part,
    weighted_energy,
    zero_hfield,
)
from acfheis.heisenberg import HField

from oracles import koranyi_ball_mc

TOP, BOTTOM = PhiInterval(0.0, math.pi / 3), PhiInterval(2 * math.pi / 3, math.pi)
CAP_LAMBDA = 19.744167461612886


@pytest.fixture(scope="module")
def cap_lams():
    return sl_eigen(TOP).lam, sl_eigen(BOTTOM).lam


@pytest.fixture(scope="module")
def cap_pair_h():
    return HTwoPhasePair(cap_eigenfield(TOP), cap_eigenfield(BOTTOM))


def log_fd(f, h=1e-3):
    vals = [math.log(f(1.0 - k * h)) for k in range(3)]
    return (3 * vals[0] - 4 * vals[1] + vals[2]) / (2 * h)


class TestEnergies:
    def test_t_plus_closed_form(self):
        assert weighted_energy(t_part(), 1.0) == pytest.approx(2 * math.pi, rel=1e-12)

    def test_x_plus_closed_form(self):
        assert weighted_energy(linear_part(1, 0), 1.0) == pytest.approx(math.pi**2 / 2, rel=1e-12)

    def test_t_plus_against_monte_carlo(self):
        def integrand(x, y, t):
            r2 = x * x + y * y
            return np.where(t > 0, 4 * r2 / np.sqrt(r2 * r2 + t * t), 0.0)

        assert weighted_energy(t_part(), 1.0) == pytest.approx(koranyi_ball_mc(integrand), rel=1e-3)

    def test_x_plus_against_monte_carlo(self):
        def integrand(x, y, t):
            r2 = x * x + y * y
            return np.where(x > 0, 1 / np.sqrt(r2 * r2 + t * t), 0.0)

        assert weighted_energy(linear_part(1, 0), 1.0) == pytest.approx(koranyi_ball_mc(integrand), rel=2e-3)

    def test_boundary_energy_t_plus(self):
        # |grad_H t|^2 = 4 sin(phi) on the unit sphere, over the upper half
        assert boundary_energy(t_part()) == pytest.approx(2 * math.pi * 4, rel=1e-12)


class TestBoundaryQuotient:
    @pytest.mark.parametrize("a,b", [(1, 0), (0, 1), (0.6, -0.8), (-2, 3)])
    def test_linear(self, a, b):
        assert boundary_quotient(linear_part(a, b)) == pytest.approx(2.0, rel=1e-6)

    def test_t_plus(self):
        assert boundary_quotient(t_part()) == pytest.approx(4.0, rel=1e-12)
        assert boundary_quotient(t_part(1.0, -1)) == pytest.approx(4.0, rel=1e-12)

    def test_scale_invariant(self):
        assert boundary_quotient(t_part(7.0)) == pytest.approx(boundary_quotient(t_part()), rel=1e-12)
        u = linear_part(1, 2)
        assert boundary_quotient(u.scaled(7.0)) == pytest.approx(boundary_quotient(u), rel=1e-12)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0, 2 * math.pi))
    def test_rotation_invariant(self, angle):
        q = boundary_quotient(linear_part(math.cos(angle), math.sin(angle)))
        assert q == pytest.approx(2.0, rel=1e-6)

    def test_cap_eigenfield_quotient(self, cap_pair_h, cap_lams):
        # for a homogeneous field of degree gamma the quotient is 2 gamma
        alpha = math.sqrt(1 + cap_lams[0]) - 1
        assert boundary_quotient(cap_pair_h.plus) == pytest.approx(2 * alpha, rel=1e-6)

    def test_zero_field(self):
        with pytest.raises(DegenerateField):
            boundary_quotient(zero_hfield())


class TestJBeta:
    @pytest.mark.parametrize("r", [0.1, 0.25, 0.5, 0.9, 1.0])
    def test_linear_pair_constant_at_4(self, r):
        ref = j_beta(linear_pair(), 1.0, 4)
        assert j_beta(linear_pair(), r, 4) == pytest.approx(ref, rel=1e-12)

    @pytest.mark.parametrize("r", [0.1, 0.25, 0.5, 0.9, 1.0])
    def test_t_pair_constant_at_8(self, r):
        assert j_beta(t_pair(), r, 8) == pytest.approx(4 * math.pi**2, rel=1e-12)

    def test_linear_pair_value(self):
        assert j_beta(linear_pair(), 1.0, 4) == pytest.approx((math.pi**2 / 2) ** 2, rel=1e-12)

    def test_zero_phase(self):
        pair = HTwoPhasePair(linear_part(1, 0), zero_hfield())
        assert j_beta(pair, 0.5, 4) == 0.0

    @pytest.mark.parametrize("beta", [3.0, 4.5, 6.0])
    def test_one_homogeneous_scaling(self, beta):
        pair = linear_pair(1, 1)
        for r in (0.2, 0.7):
            assert j_beta(pair, r, beta) == pytest.approx(r ** (4 - beta) * j_beta(pair, 1.0, beta), rel=1e-10)

    @pytest.mark.parametrize("r,beta", [(0.0, 4), (1.2, 4), (0.5, 0.0), (0.5, -1.0)])
    def test_rejects(self, r, beta):
        with pytest.raises(InvalidArgument):
            j_beta(linear_pair(), r, beta)


class TestLogDerivative:
    def test_linear_pair(self):
        assert j_log_derivative(linear_pair(), 4) == pytest.approx(0.0, abs=1e-10)
        assert j_log_derivative(linear_pair(), 4.5) == pytest.approx(-0.5, abs=1e-10)

    def test_t_pair(self):
        assert j_log_derivative(t_pair(), 8) == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize("beta", [4.0, 6.0])
    def test_matches_numerical_derivative_linear(self, beta):
        pair = linear_pair(0.3, 1.0)
        fd = log_fd(lambda r: j_beta(pair, r, beta))
        assert j_log_derivative(pair, beta) == pytest.approx(fd, abs=1e-3)

    def test_matches_numerical_derivative_caps(self, cap_pair_h):
        fd = log_fd(lambda r: j_beta(cap_pair_h, r, 8))
        assert j_log_derivative(cap_pair_h, 8) == pytest.approx(fd, abs=1e-3)


class TestLowerBound:
    def test_t_pair_equality(self):
        rep = lower_bound_check(t_pair(), [8.0, 8.0])
        assert rep.left == pytest.approx(8.0, abs=1e-12)
        assert rep.right == pytest.approx(8.0, abs=1e-12)
        assert rep.passed and not rep.degenerate

    def test_cap_eigenvalues(self, cap_lams):
        assert cap_lams[0] == pytest.approx(CAP_LAMBDA, rel=1e-9)
        assert cap_lams[1] == pytest.approx(CAP_LAMBDA, rel=1e-9)

    def test_cap_eigenfields_equality(self, cap_pair_h, cap_lams):
        rep = lower_bound_check(cap_pair_h, cap_lams)
        assert rep.passed
        assert rep.left == pytest.approx(rep.right, abs=1e-6)
        assert rep.right == pytest.approx(14.2183, abs=1e-4)

    def test_faster_growth_is_strict(self, cap_lams):
        pair = HTwoPhasePair(cap_eigenfield(TOP, 1.0), cap_eigenfield(BOTTOM, 1.0))
        rep = lower_bound_check(pair, cap_lams)
        assert rep.passed
        assert rep.left == pytest.approx(rep.right + 4.0, abs=1e-6)

    def test_restricted_t_is_not_admissible(self, cap_lams):
        # t cut to the cones jumps across their walls, so it is not a competitor
        # and the inequality is expected to fail for it
        pair = HTwoPhasePair(
            restricted_field(t_part(), (TOP.phi0, TOP.phi1)),
            restricted_field(t_part(1.0, -1), (BOTTOM.phi0, BOTTOM.phi1)),
        )
        rep = lower_bound_check(pair, cap_lams)
        assert rep.left == pytest.approx(8.0, rel=1e-9)
        assert rep.passed is False

    def test_degenerate_phase(self):
        rep = lower_bound_check(HTwoPhasePair(t_part(), zero_hfield()), [8.0, 8.0])
        assert rep.degenerate and rep.passed is None
        assert math.isnan(rep.left)

    def test_needs_two_estimates(self):
        with pytest.raises(InvalidArgument):
            lower_bound_check(t_pair(), [8.0])


class TestGradientBound:
    RHOS = (0.1, 0.2, 0.3, 0.4, 0.5)

    @pytest.mark.parametrize("u", [t_part(), linear_part(1, 0)], ids=["t+", "x+"])
    def test_scale_free_ratio(self, u):
        rep = gradient_bound_diagnostic(u, self.RHOS)
        assert len(rep.ratios) == len(self.RHOS)
        assert rep.variation < 0.1
        assert rep.sup == max(rep.ratios) > 0

    def test_zero_field(self):
        with pytest.raises(DegenerateField):
            gradient_bound_diagnostic(zero_hfield(), self.RHOS)

    @pytest.mark.parametrize("rho", [0.0, 0.6])
    def test_rejects(self, rho):
        with pytest.raises(InvalidArgument):
            gradient_bound_diagnostic(t_part(), [rho])


class TestBetaNecessity:
    def test_violators(self, cap_pair_h):
        pairs = [linear_pair(), linear_pair(1, 1), t_pair(), cap_pair_h]
        out = dict(beta_necessity([4.0, 4.01, 4.5, 6.0, 8.0, 9.0], pairs))
        assert out[4.0] == []
        for beta in (4.01, 4.5, 6.0, 8.0, 9.0):
            assert out[beta]
        assert len(out[9.0]) == 3


class TestPairs:
    @pytest.mark.parametrize("make", [linear_pair, t_pair], ids=["linear", "t"])
    def test_hypotheses(self, make):
        rep = make().check()
        assert rep["overlap"] == 0.0
        assert rep["min_value"] >= 0.0
        assert rep["value_at_origin"] == 0.0
        assert rep["min_sublaplacian_on_support"] >= 0.0

    def test_cap_pair_hypotheses(self, cap_pair_h):
        rep = cap_pair_h.check()
        assert rep["overlap"] == 0.0 and rep["value_at_origin"] == 0.0
        assert rep["min_sublaplacian_on_support"] > -1e-4

    def test_t_pair_is_flagged(self):
        assert t_pair().notes

    def test_rejects(self):
        with pytest.raises(InvalidArgument):
            linear_part(0, 0)
        with pytest.raises(InvalidArgument):
            t_part(0.0)

    def test_custom_field(self):
        u = HField(lambda x, y, t: np.maximum(x[..., 0], 0.0))
        assert boundary_quotient(u) == pytest.approx(2.0, rel=1e-4)
