"""The Heisenberg candidate functional J_beta on H^1 and the beta <= 4 harness.

Q = 4 throughout, so the kernel is |zeta|^{-2}. In polar coordinates the
weighted energy is

    int_0^r int_0^pi int_0^2pi |grad_H u|^2 rho dtheta dphi drho,

and on the unit sphere sqrt(x^2 + y^2) = sqrt(sin phi) cancels the
perimeter density, so the boundary numerator is just
int |grad_H u|^2 dtheta dphi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateField, InvalidArgument
from .heis_eigen import alpha_h1
from .heisenberg import HField, HPoint
from .polar import polar_field, polar_to_xyt, to_polar
from .quadrature import (
    DEFAULT_N_PHI,
    DEFAULT_N_RHO,
    DEFAULT_N_THETA,
    composite_gauss,
    koranyi_ball_grid,
    pairwise_sum,
    periodic_midpoint,
)

Q = 4
NOT_CLASSICAL = "not a classical two-phase solution: the origin is a characteristic point of {t = 0}"


@dataclass(frozen=True)
class HTwoPhasePair:
    plus: HField
    minus: HField
    notes: tuple = ()

    @property
    def phi_breaks(self):
        return tuple(sorted({*self.plus.phi_breaks, *self.minus.phi_breaks}))

    def check(self, k: int = 10, rng=None) -> dict:
        """Spot-check the hypotheses on a k^3 lattice of the unit Korányi ball."""
        rng = np.random.default_rng(0) if rng is None else rng
        s = (np.arange(k) + 0.5) / k * 2 - 1
        x, y, t = (a.ravel() for a in np.meshgrid(s, s, s, indexing="ij"))
        P = HPoint.h1(x, y, t)
        P_in = HPoint.h1(x[_inside(P)], y[_inside(P)], t[_inside(P)])
        up, um = self.plus(P_in), self.minus(P_in)
        origin = HPoint.h1(0.0, 0.0, 0.0)
        sub_min = np.inf
        for u in (self.plus, self.minus):
            pts = rng.uniform(-0.8, 0.8, size=(200, 3))
            Q_ = HPoint.h1(*pts.T)
            inside = u(Q_) > 1e-3
            if np.any(inside):
                Qi = HPoint.h1(*pts[inside].T)
                sub_min = min(sub_min, float(np.min(u.sublap(Qi))))
        return {
            "overlap": float(np.max(np.abs(up * um))),
            "min_value": float(min(up.min(), um.min())),
            "value_at_origin": float(max(abs(self.plus(origin)), abs(self.minus(origin)))),
            "min_sublaplacian_on_support": sub_min,
        }


def _inside(P: HPoint):
    r2 = P.x[..., 0] ** 2 + P.y[..., 0] ** 2
    return r2 * r2 + P.t**2 < 1.0


def _grid_points(grid):
    rho, phi, theta = grid.coords
    return HPoint.h1(*polar_to_xyt(rho, phi, theta)), rho


def weighted_energy(u: HField, r: float, n_rho=DEFAULT_N_RHO, n_phi=DEFAULT_N_PHI, n_theta=DEFAULT_N_THETA, breaks=None):
    """int_{B_r} |grad_H u|^2 / |zeta|^2 dzeta."""
    grid = koranyi_ball_grid(r, n_rho, n_phi, n_theta, phi_breaks=u.phi_breaks if breaks is None else breaks)
    P, rho = _grid_points(grid)
    return grid.integrate(u.grad_sq(P) / rho**2)


def j_beta(pair: HTwoPhasePair, r: float, beta: float, n_rho=DEFAULT_N_RHO, n_phi=DEFAULT_N_PHI, n_theta=DEFAULT_N_THETA) -> float:
    if not 0 < r <= 1:
        raise InvalidArgument(f"r must lie in (0, 1], got {r}")
    if not beta > 0:
        raise InvalidArgument(f"beta must be positive, got {beta}")
    br = pair.phi_breaks
    e1 = weighted_energy(pair.plus, r, n_rho, n_phi, n_theta, br)
    e2 = weighted_energy(pair.minus, r, n_rho, n_phi, n_theta, br)
    return r**-beta * e1 * e2


def boundary_energy(u: HField, n_phi=DEFAULT_N_PHI, n_theta=DEFAULT_N_THETA) -> float:
    """int_{dB_1} |grad_H u|^2 / sqrt(x^2 + y^2) dP = int |grad_H u|^2 dtheta dphi."""
    rp = composite_gauss(n_phi, 0.0, math.pi, u.phi_breaks)
    rt = periodic_midpoint(n_theta)
    phi, theta = (a.ravel() for a in np.meshgrid(rp.nodes, rt.nodes, indexing="ij"))
    w = np.outer(rp.weights, rt.weights).ravel()
    P = HPoint.h1(*polar_to_xyt(1.0, phi, theta))
    return pairwise_sum(w * u.grad_sq(P))


def boundary_quotient(u: HField, n_rho=DEFAULT_N_RHO, n_phi=DEFAULT_N_PHI, n_theta=DEFAULT_N_THETA) -> float:
    den = weighted_energy(u, 1.0, n_rho, n_phi, n_theta)
    if not den > 1e-300:
        raise DegenerateField(f"{u.name}: weighted horizontal energy vanishes")
    return boundary_energy(u, n_phi, n_theta) / den


def j_log_derivative(pair: HTwoPhasePair, beta: float, **grid) -> float:
    """J'(1) / J(1) = quotient(u+) + quotient(u-) - beta."""
    return boundary_quotient(pair.plus, **grid) + boundary_quotient(pair.minus, **grid) - beta


@dataclass(frozen=True)
class LowerBoundReport:
    left: float
    right: float
    tolerance: float
    passed: bool | None
    degenerate: bool = False
    quotients: tuple = ()
    alphas: tuple = ()
    message: str = ""


def lower_bound_check(pair: HTwoPhasePair, lambda_estimates: Sequence[float], tolerance: float = 2e-3, **grid) -> LowerBoundReport:
    """Compare sum of boundary quotients with 2 sum (sqrt(1 + lam_i) - 1)."""
    if len(lambda_estimates) != 2:
        raise InvalidArgument("need one eigenvalue estimate per phase")
    alphas = tuple(alpha_h1(lam) for lam in lambda_estimates)
    right = 2.0 * sum(alphas)
    try:
        quotients = (boundary_quotient(pair.plus, **grid), boundary_quotient(pair.minus, **grid))
    except DegenerateField as exc:
        return LowerBoundReport(math.nan, right, tolerance, None, True, (), alphas, str(exc))
    left = sum(quotients)
    return LowerBoundReport(left, right, tolerance, bool(left >= right - tolerance), False, quotients, alphas)


@dataclass(frozen=True)
class GradientBoundReport:
    rhos: tuple
    ratios: tuple
    sup: float
    variation: float = field(default=0.0)


def gradient_bound_diagnostic(u: HField, rho_grid: Sequence[float], n_rho=32, n_phi=DEFAULT_N_PHI, n_theta=DEFAULT_N_THETA) -> GradientBoundReport:
    """For each rho: int_{B_rho} |grad u|^2 / |zeta|^2 divided by rho^{-Q} int_{B_2rho - B_rho} u^2."""
    ratios = []
    for r in rho_grid:
        if not 0 < r <= 0.5:
            raise InvalidArgument(f"rho values must lie in (0, 1/2], got {r}")
        num = weighted_energy(u, r, n_rho, n_phi, n_theta)
        shell = koranyi_ball_grid(2 * r, n_rho, n_phi, n_theta, r_inner=r, phi_breaks=u.phi_breaks)
        P, _ = _grid_points(shell)
        den = r**-Q * shell.integrate(u(P) ** 2)
        if not den > 1e-300:
            raise DegenerateField(f"{u.name}: field vanishes on the annulus")
        ratios.append(num / den)
    ratios = tuple(ratios)
    sup = max(ratios)
    return GradientBoundReport(tuple(rho_grid), ratios, sup, (sup - min(ratios)) / sup)


# ---------------------------------------------------------------- test fields


def linear_part(a: float, b: float, sign: int = 1) -> HField:
    """(sign (a x + b y))^+."""
    if a == 0 and b == 0:
        raise InvalidArgument("need (a, b) != (0, 0)")
    ca, cb = sign * a, sign * b

    def value(x, y, t):
        return np.maximum(ca * x[..., 0] + cb * y[..., 0], 0.0)

    def grad(x, y, t):
        on = (ca * x[..., 0] + cb * y[..., 0]) > 0
        return np.stack([np.where(on, ca, 0.0), np.where(on, cb, 0.0)], axis=-1)

    def sub(x, y, t):
        return np.zeros(np.shape(t))

    return HField(value, 1, grad, sub, name=f"({ca}x+{cb}y)+")


def t_part(coef: float = 1.0, sign: int = 1) -> HField:
    """coef * (sign t)^+; X t = 2y, Y t = -2x."""
    if not coef > 0:
        raise InvalidArgument("coefficient must be positive")
    c = coef * sign

    def value(x, y, t):
        return np.maximum(c * t, 0.0)

    def grad(x, y, t):
        on = (c * t > 0)[..., None]
        return np.where(on, c * np.concatenate([2 * y, -2 * x], axis=-1), 0.0)

    def sub(x, y, t):
        return np.zeros(np.shape(t))

    return HField(value, 1, grad, sub, phi_breaks=(math.pi / 2,), name=f"{coef}*t{'+' if sign > 0 else '-'}", notes=(NOT_CLASSICAL,))


def linear_pair(a: float = 1.0, b: float = 0.0) -> HTwoPhasePair:
    return HTwoPhasePair(linear_part(a, b, 1), linear_part(a, b, -1))


def t_pair(a: float = 1.0, b: float = 1.0) -> HTwoPhasePair:
    return HTwoPhasePair(t_part(a, 1), t_part(b, -1), notes=(NOT_CLASSICAL,))


def zero_hfield() -> HField:
    return HField(
        lambda x, y, t: np.zeros(np.shape(t)),
        1,
        lambda x, y, t: np.zeros(np.shape(t) + (2,)),
        lambda x, y, t: np.zeros(np.shape(t)),
        name="zero",
    )


def cap_eigenfield(interval, extra_homogeneity: float = 0.0, mesh: int = 1024) -> HField:
    """rho^gamma f(phi) with f the first eigenfunction on ``interval`` and
    gamma = alpha + extra_homogeneity; subharmonic whenever extra_homogeneity >= 0."""
    from .heis_eigen import sl_eigen

    sol = sl_eigen(interval, mesh)
    f, df = sol.profile()
    d2f = df.derivative()
    return polar_field(
        sol.alpha + extra_homogeneity,
        f,
        df,
        d2f,
        support=(interval.phi0, interval.phi1),
        name=f"cap({interval.phi0:.4g},{interval.phi1:.4g})",
    )


def restricted_field(u: HField, support: tuple) -> HField:
    """u multiplied by the indicator of the cone support[0] < phi < support[1]."""
    lo, hi = support

    def mask(x, y, t):
        phi = to_polar(HPoint(x, y, t)).phi
        return (phi > lo) & (phi < hi)

    def value(x, y, t):
        return np.where(mask(x, y, t), u.value(x, y, t), 0.0)

    def grad(x, y, t):
        return np.where(mask(x, y, t)[..., None], u.grad(HPoint(x, y, t)), 0.0)

    breaks = tuple(b for b in (lo, hi, *u.phi_breaks) if 0 < b < math.pi)
    return HField(value, 1, grad, None, phi_breaks=breaks, name=f"{u.name}|({lo:.4g},{hi:.4g})")


def beta_necessity(betas: Sequence[float], pairs: Sequence[HTwoPhasePair], **grid) -> list:
    """For each beta, the pairs whose log-derivative at r = 1 is negative (beyond 2e-3)."""
    logs = [(p, boundary_quotient(p.plus, **grid) + boundary_quotient(p.minus, **grid)) for p in pairs]
    out = []
    for beta in betas:
        violators = [p for p, s in logs if s - beta < -2e-3]
        out.append((beta, violators))
    return out
