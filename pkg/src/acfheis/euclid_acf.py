"""The Euclidean ACF functional Phi(r) in R^3 and its logarithmic derivative.

Fields take points of shape (..., 3) and return values of shape (...);
gradients return (..., 3).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DegenerateField, InvalidArgument
from .quadrature import (
    DEFAULT_N_PHI,
    DEFAULT_N_RHO,
    DEFAULT_N_THETA,
    euclid_ball_grid,
    euclid_sphere_grid,
    spherical_to_cartesian,
)

FD_STEP = 1e-5


@dataclass(frozen=True)
class EuclidField:
    value: Callable
    gradient: Optional[Callable] = None
    support_predicate: Optional[Callable] = None
    fd_step: float = FD_STEP
    phi_breaks: Sequence[float] = ()
    name: str = "field"

    def __call__(self, X):
        return np.asarray(self.value(np.asarray(X, dtype=float)), dtype=float)

    def grad(self, X):
        X = np.asarray(X, dtype=float)
        if self.gradient is not None:
            return np.asarray(self.gradient(X), dtype=float)
        return fd_gradient(self.value, X, self.fd_step)

    def support(self, X):
        if self.support_predicate is not None:
            return self.support_predicate(X)
        return self(X) > 0

    def check(self, rng=None, samples: int = 100) -> dict:
        """Spot checks of the field invariants: u >= 0, u(0) = 0, gradient vs FD."""
        rng = np.random.default_rng(0) if rng is None else rng
        X = rng.uniform(-1, 1, size=(samples, 3))
        X = X[np.linalg.norm(X, axis=-1) < 1]
        report = {
            "min_value": float(np.min(self(X))),
            "value_at_origin": float(self(np.zeros(3))),
            "gradient_mismatch": 0.0,
        }
        if self.gradient is not None:
            exact = self.grad(X)
            approx = fd_gradient(self.value, X, self.fd_step)
            scale = np.maximum(np.linalg.norm(exact, axis=-1), 1e-12)
            report["gradient_mismatch"] = float(np.max(np.linalg.norm(exact - approx, axis=-1) / scale))
        return report


def fd_gradient(value, X, h=FD_STEP):
    comps = []
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        comps.append((value(X + e) - value(X - e)) / (2 * h))
    return np.stack(comps, axis=-1)


@dataclass(frozen=True)
class TwoPhasePair:
    plus: EuclidField
    minus: EuclidField

    @property
    def phi_breaks(self):
        return tuple(sorted({*self.plus.phi_breaks, *self.minus.phi_breaks}))

    def overlap(self, k: int = 10) -> float:
        """max |u+ u-| on a k^3 lattice of the unit ball."""
        s = (np.arange(k) + 0.5) / k * 2 - 1
        X = np.stack(np.meshgrid(s, s, s, indexing="ij"), axis=-1).reshape(-1, 3)
        X = X[np.linalg.norm(X, axis=-1) < 1]
        return float(np.max(np.abs(self.plus(X) * self.minus(X))))


def _grad_sq(u: EuclidField, X):
    g = u.grad(X)
    return np.sum(g * g, axis=-1)


def weighted_energy(u: EuclidField, r: float, n_rho=DEFAULT_N_RHO, n_phi=DEFAULT_N_PHI, n_theta=DEFAULT_N_THETA, breaks=None):
    """int_{B_r} |grad u|^2 / |x| dx."""
    grid = euclid_ball_grid(r, 3, n_rho, n_phi, n_theta, u.phi_breaks if breaks is None else breaks)
    X = spherical_to_cartesian(*grid.coords)
    return grid.integrate(_grad_sq(u, X))


def phi_functional(pair: TwoPhasePair, r: float, n_rho=DEFAULT_N_RHO, n_phi=DEFAULT_N_PHI, n_theta=DEFAULT_N_THETA) -> float:
    """Phi(r) = r^{-4} I_1(r) I_2(r) with I_i = int_{B_r} |grad u_i|^2 |x|^{-1} dx."""
    if not 0 < r <= 1:
        raise InvalidArgument(f"r must lie in (0, 1], got {r}")
    br = pair.phi_breaks
    i1 = weighted_energy(pair.plus, r, n_rho, n_phi, n_theta, br)
    i2 = weighted_energy(pair.minus, r, n_rho, n_phi, n_theta, br)
    return r**-4 * i1 * i2


def rescale(u: EuclidField, r: float) -> EuclidField:
    """(u)_r(x) = u(r x) / r."""
    if not 0 < r <= 1:
        raise InvalidArgument(f"r must lie in (0, 1], got {r}")
    g = u.gradient
    sp = u.support_predicate
    return EuclidField(
        lambda X: u.value(r * X) / r,
        None if g is None else (lambda X: g(r * X)),
        None if sp is None else (lambda X: sp(r * X)),
        u.fd_step,
        u.phi_breaks,
        f"({u.name})_{r}",
    )


def j_ratio(u: EuclidField, n_rho=DEFAULT_N_RHO, n_phi=DEFAULT_N_PHI, n_theta=DEFAULT_N_THETA) -> float:
    """int_{dB_1} |grad u|^2 dsigma / int_{B_1} |grad u|^2 / |x| dx."""
    sphere = euclid_sphere_grid(n_phi, n_theta, u.phi_breaks)
    num = sphere.integrate(_grad_sq(u, spherical_to_cartesian(1.0, *sphere.coords)))
    den = weighted_energy(u, 1.0, n_rho, n_phi, n_theta)
    if not den > 1e-300:
        raise DegenerateField(f"{u.name}: weighted Dirichlet energy vanishes")
    return num / den


def phi_log_derivative(pair: TwoPhasePair, **grid) -> float:
    """-4 + J(u+) + J(u-), which equals r Phi'(r) / Phi(r) at r = 1."""
    return -4.0 + j_ratio(pair.plus, **grid) + j_ratio(pair.minus, **grid)


# ---------------------------------------------------------------- test fields


def half_space_field(direction=(0.0, 0.0, 1.0), sign: int = 1) -> EuclidField:
    """(sign * <d, x>)^+ for a unit direction d."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    d = sign * d
    breaks = (np.pi / 2,) if abs(abs(d[2]) - 1) < 1e-15 else ()

    def value(X):
        return np.maximum(X @ d, 0.0)

    def gradient(X):
        return np.where((X @ d)[..., None] > 0, d, 0.0)

    return EuclidField(value, gradient, lambda X: X @ d > 0, phi_breaks=breaks, name=f"half{tuple(d)}")


def zero_field() -> EuclidField:
    return EuclidField(lambda X: np.zeros(X.shape[:-1]), lambda X: np.zeros(X.shape), name="zero")


def axisymmetric_field(alpha: float, g: Callable, dg: Callable, support: tuple, name: str = "axisym") -> EuclidField:
    """rho^alpha g(phi) on the cone support[0] < phi < support[1], zero elsewhere."""
    lo, hi = support

    def polar(X):
        rho = np.linalg.norm(X, axis=-1)
        phi = np.arctan2(np.hypot(X[..., 0], X[..., 1]), X[..., 2])
        return rho, phi

    def value(X):
        rho, phi = polar(X)
        inside = (phi > lo) & (phi < hi)
        return np.where(inside, rho**alpha * g(np.clip(phi, lo, hi)), 0.0)

    def gradient(X):
        rho, phi = polar(X)
        inside = (phi > lo) & (phi < hi)
        theta = np.arctan2(X[..., 1], X[..., 0])
        sp, cp = np.sin(phi), np.cos(phi)
        e_rho = np.stack([sp * np.cos(theta), sp * np.sin(theta), cp], axis=-1)
        e_phi = np.stack([cp * np.cos(theta), cp * np.sin(theta), -sp], axis=-1)
        pc = np.clip(phi, lo, hi)
        out = (alpha * rho ** (alpha - 1) * g(pc))[..., None] * e_rho + (rho ** (alpha - 1) * dg(pc))[..., None] * e_phi
        return np.where(inside[..., None], out, 0.0)

    breaks = tuple(b for b in (lo, hi) if 0 < b < np.pi)
    return EuclidField(value, gradient, phi_breaks=breaks, name=name)


def cap_pair(phi0: float, mesh: int = 1024) -> TwoPhasePair:
    """Harmonic pair on complementary cones: rho^a1 F1(phi) on {phi < phi0} and
    rho^a2 F2(pi - phi) on {phi > phi0}, with (a_i, F_i) from the cap eigenproblems."""
    from .euclid_eigen import EuclidCap, cap_eigenvalue

    upper = cap_eigenvalue(EuclidCap(phi0, 3), mesh)
    lower = cap_eigenvalue(EuclidCap(np.pi - phi0, 3), mesh)
    F1, dF1 = upper.profile()
    F2, dF2 = lower.profile()
    plus = axisymmetric_field(upper.alpha, F1, dF1, (0.0, phi0), name=f"cap<{phi0:.4g}")
    minus = axisymmetric_field(
        lower.alpha,
        lambda p: F2(np.pi - p),
        lambda p: -dF2(np.pi - p),
        (phi0, np.pi),
        name=f"cap>{phi0:.4g}",
    )
    return TwoPhasePair(plus, minus)
