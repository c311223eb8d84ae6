"""Korányi polar coordinates on H^1 and the horizontal calculus they induce.

    x = rho sqrt(sin phi) cos theta
    y = rho sqrt(sin phi) sin theta
    t = rho^2 cos phi

phi in [0, pi] measures the "latitude" on the Korányi sphere (phi = 0 is
the positive t-axis), theta is the angle in the (x, y)-plane. The
horizontal frame degenerates on the t-axis x = y = 0, so everything that
needs it refuses such points with :class:`CharacteristicAxis`.

Horizontal vectors are stored as coefficient pairs on (X, Y).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import CharacteristicAxis, InvalidArgument, Pole
from .heisenberg import HField, HPoint, gauge_norm

AXIS_TOL = 1e-18
FD_STEP_ANGLE = 1e-4


@dataclass(frozen=True)
class PolarCoord:
    rho: np.ndarray
    phi: np.ndarray
    theta: np.ndarray
    on_axis: np.ndarray = False

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        phi = np.asarray(self.phi, dtype=float)
        if np.any(rho <= 0):
            raise InvalidArgument("rho must be positive")
        if np.any((phi < 0) | (phi > np.pi)):
            raise InvalidArgument("phi must lie in [0, pi]")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "theta", np.asarray(self.theta, dtype=float))
        object.__setattr__(self, "on_axis", np.asarray(self.on_axis, dtype=bool))


@dataclass(frozen=True)
class HorizontalFrame:
    e_rho: np.ndarray
    e_phi: np.ndarray


@dataclass(frozen=True)
class PolarGradients:
    grad_rho: np.ndarray
    grad_phi: np.ndarray
    grad_theta: np.ndarray


def _xyt(P: HPoint):
    if P.n != 1:
        raise InvalidArgument("polar coordinates are implemented for H^1 only")
    return P.x[..., 0], P.y[..., 0], P.t


def to_polar(P: HPoint) -> PolarCoord:
    x, y, t = _xyt(P)
    rho = gauge_norm(P)
    if np.any(rho == 0):
        raise Pole("polar coordinates are undefined at the origin")
    r2 = x * x + y * y
    # phi = arccos(t / rho^2) written with atan2, accurate near both poles
    phi = np.arctan2(r2, t)
    on_axis = r2 <= AXIS_TOL * rho**2
    theta = np.where(on_axis, 0.0, np.mod(np.arctan2(y, x), 2 * np.pi))
    return PolarCoord(rho, phi, theta, on_axis)


def from_polar(c: PolarCoord) -> HPoint:
    s = np.sqrt(np.sin(c.phi))
    return HPoint.h1(c.rho * s * np.cos(c.theta), c.rho * s * np.sin(c.theta), c.rho**2 * np.cos(c.phi))


def polar_to_xyt(rho, phi, theta):
    """Array version of :func:`from_polar` returning plain (x, y, t)."""
    s = np.sqrt(np.sin(phi))
    return rho * s * np.cos(theta), rho * s * np.sin(theta), rho**2 * np.cos(phi)


def _require_off_axis(x, y, t):
    r2 = x * x + y * y
    rho4 = r2 * r2 + t * t
    if np.any(r2 <= AXIS_TOL * np.sqrt(rho4)):
        raise CharacteristicAxis("the polar frame is undefined on the t-axis")
    return r2, np.sqrt(np.sqrt(rho4))


def polar_gradients(P: HPoint) -> PolarGradients:
    x, y, t = _xyt(P)
    r2, rho = _require_off_axis(x, y, t)
    g_rho = np.stack([r2 * x + t * y, r2 * y - t * x], axis=-1) / rho[..., None] ** 3
    rot = np.stack([-y, x], axis=-1)
    g_phi = 2.0 / (rho * r2)[..., None] * (t[..., None] * g_rho + rho[..., None] * rot)
    g_theta = rot / r2[..., None]
    return PolarGradients(g_rho, g_phi, g_theta)


def polar_sublaplacians(P: HPoint):
    """Closed forms of (Delta rho, Delta phi, Delta theta)."""
    x, y, t = _xyt(P)
    r2, rho = _require_off_axis(x, y, t)
    return 3 * r2 / rho**3, 4 * t / rho**4, np.zeros_like(rho)


def horizontal_frame(P: HPoint) -> HorizontalFrame:
    g = polar_gradients(P)
    e_rho = g.grad_rho / np.linalg.norm(g.grad_rho, axis=-1, keepdims=True)
    e_phi = g.grad_phi / np.linalg.norm(g.grad_phi, axis=-1, keepdims=True)
    return HorizontalFrame(e_rho, e_phi)


def gradient_split(u: HField, P: HPoint):
    """Squared projections of the horizontal gradient on e_rho and e_phi."""
    frame = horizontal_frame(P)
    g = u.grad(P)
    radial = np.sum(g * frame.e_rho, axis=-1)
    angular = np.sum(g * frame.e_phi, axis=-1)
    return radial**2, angular**2


@dataclass(frozen=True)
class AngularProfile:
    """A function f(theta, phi) together with whichever derivatives are known.

    Missing derivatives are taken by central differences with step
    ``fd_step``. ``theta_independent`` selects the reduced phi-only formulas.
    """

    f: Callable
    f_theta: Optional[Callable] = None
    f_phi: Optional[Callable] = None
    f_theta_theta: Optional[Callable] = None
    f_phi_phi: Optional[Callable] = None
    f_phi_theta: Optional[Callable] = None
    theta_independent: bool = False
    fd_step: float = FD_STEP_ANGLE

    @classmethod
    def phi_only(cls, g, dg=None, d2g=None, fd_step=FD_STEP_ANGLE):
        zero = lambda theta, phi: np.zeros(np.broadcast(theta, phi).shape)  # noqa: E731
        return cls(
            lambda theta, phi: g(phi) + 0.0 * theta,
            zero,
            None if dg is None else (lambda theta, phi: dg(phi) + 0.0 * theta),
            zero,
            None if d2g is None else (lambda theta, phi: d2g(phi) + 0.0 * theta),
            zero,
            True,
            fd_step,
        )

    def jet(self, theta, phi):
        """(f, f_theta, f_phi, f_theta_theta, f_phi_phi, f_phi_theta)."""
        h = self.fd_step
        f = self.f
        val = f(theta, phi)

        def pick(fn, fallback):
            return fn(theta, phi) if fn is not None else fallback()

        f_t = pick(self.f_theta, lambda: (f(theta + h, phi) - f(theta - h, phi)) / (2 * h))
        f_p = pick(self.f_phi, lambda: (f(theta, phi + h) - f(theta, phi - h)) / (2 * h))
        f_tt = pick(self.f_theta_theta, lambda: (f(theta + h, phi) - 2 * val + f(theta - h, phi)) / h**2)
        f_pp = pick(self.f_phi_phi, lambda: (f(theta, phi + h) - 2 * val + f(theta, phi - h)) / h**2)
        f_pt = pick(
            self.f_phi_theta,
            lambda: (
                f(theta + h, phi + h) - f(theta + h, phi - h) - f(theta - h, phi + h) + f(theta - h, phi - h)
            )
            / (4 * h * h),
        )
        return val, f_t, f_p, f_tt, f_pp, f_pt


def sublaplacian_polar(alpha: float, f: AngularProfile, P) -> np.ndarray:
    """Sublaplacian of rho^alpha f(theta, phi) from the polar formula.

    ``P`` may be a :class:`PolarCoord` or an :class:`HPoint`.
    """
    c = P if isinstance(P, PolarCoord) else to_polar(P)
    s = np.sin(c.phi)
    if np.any(s <= 0) or np.any(c.on_axis):
        raise CharacteristicAxis("sin(phi) must be positive")
    co = np.cos(c.phi)
    val, f_t, f_p, f_tt, f_pp, f_pt = f.jet(c.theta, c.phi)
    if f.theta_independent:
        # 4 (sin f')' = 4 cos f' + 4 sin f''
        bracket = alpha * (alpha + 2) * s * val + 4 * (co * f_p + s * f_pp)
    else:
        bracket = (
            alpha * (alpha + 2) * s * val
            - 2 * alpha * co * f_t
            + f_tt / s
            + 4 * s * f_pt
            + 4 * s * f_pp
            + 4 * co * f_p
        )
    return c.rho ** (alpha - 2) * bracket


def polar_field(
    alpha: float,
    g: Callable,
    dg: Callable,
    d2g: Optional[Callable] = None,
    support: tuple = (0.0, np.pi),
    name: str = "polar",
) -> HField:
    """Field rho^alpha g(phi) on the cone support[0] < phi < support[1], zero elsewhere.

    Gradient is analytic: alpha rho^{alpha-1} g grad(rho) + rho^alpha g' grad(phi).
    If ``d2g`` is given, the sublaplacian uses the polar formula.
    """
    lo, hi = support

    # a cone reaching a pole contains the t-axis there
    def inside(phi):
        return ((phi > lo) | (lo <= 0.0)) & ((phi < hi) | (hi >= np.pi))

    def value(x, y, t):
        P = HPoint(x, y, t)
        at_origin = gauge_norm(P) == 0
        if np.any(at_origin):
            # positive homogeneity extends the field by continuity with u(0) = 0
            if alpha <= 0:
                raise Pole(f"{name}: rho^{alpha} is singular at the origin")
            safe = HPoint(x, y, np.where(at_origin, 1.0, t))
            return np.where(at_origin, 0.0, value(safe.x, safe.y, safe.t))
        c = to_polar(P)
        return np.where(inside(c.phi), c.rho**alpha * g(c.phi), 0.0)

    def grad(x, y, t):
        P = HPoint(x, y, t)
        c = to_polar(P)
        pg = polar_gradients(P)
        mask = inside(c.phi)[..., None]
        out = (alpha * c.rho ** (alpha - 1) * g(c.phi))[..., None] * pg.grad_rho + (c.rho**alpha * dg(c.phi))[
            ..., None
        ] * pg.grad_phi
        return np.where(mask, out, 0.0)

    sub = None
    if d2g is not None:
        profile = AngularProfile.phi_only(g, dg, d2g)

        def sub(x, y, t):
            c = to_polar(HPoint(x, y, t))
            return np.where(inside(c.phi), sublaplacian_polar(alpha, profile, c), 0.0)

    breaks = tuple(b for b in (lo, hi) if 0.0 < b < np.pi)
    return HField(value, 1, grad, sub, phi_breaks=breaks, name=name)
