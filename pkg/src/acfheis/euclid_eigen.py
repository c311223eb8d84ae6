"""Spherical-cap eigenvalues, characteristic constants and the
Friedland-Hayman lower bound psi."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq
from scipy.special import betainc

from .errors import InvalidArgument
from .sturm import richardson


@dataclass(frozen=True)
class EuclidCap:
    """Cap {phi < phi0} on the unit sphere of R^n (phi = angle from the x_n axis)."""

    phi0: float
    n: int = 3

    def __post_init__(self):
        if not 0.0 < self.phi0 < math.pi:
            raise InvalidArgument(f"cap half-angle must lie in (0, pi), got {self.phi0}")
        if int(self.n) != self.n or self.n < 3:
            raise InvalidArgument(f"dimension must be an integer >= 3, got {self.n}")


@dataclass(frozen=True)
class EigenSolution:
    """First eigenpair of a one-dimensional angular problem.

    ``alpha`` is the characteristic constant attached to ``lam``;
    ``phi``/``eigenfunction`` sample the positive eigenfunction (max = 1) on
    the ``mesh`` grid.
    """

    lam: float
    alpha: float
    phi: np.ndarray
    eigenfunction: np.ndarray
    mesh: int
    est_error: float

    def profile(self):
        """Cubic-spline interpolant of the eigenfunction and its derivative."""
        spline = CubicSpline(self.phi, self.eigenfunction)
        return spline, spline.derivative()


def characteristic_constant(lam: float, n: int) -> float:
    """Nonnegative root of a^2 + (n-2) a - lam = 0."""
    if lam < 0:
        raise InvalidArgument(f"eigenvalue must be nonnegative, got {lam}")
    if n < 3:
        raise InvalidArgument(f"dimension must be >= 3, got {n}")
    m = n - 2
    # rationalised form of (-m + sqrt(m^2 + 4 lam)) / 2, no cancellation
    return 2.0 * lam / (m + math.sqrt(m * m + 4.0 * lam))


def beta_weight(lam: float, n: int) -> float:
    if lam <= 0:
        raise InvalidArgument(f"eigenvalue must be positive, got {lam}")
    if n < 3:
        raise InvalidArgument(f"dimension must be >= 3, got {n}")
    m = n - 2
    return (2.0 * math.sqrt(lam) / (m + math.sqrt(m * m + 4.0 * lam))) ** 2


def cap_eigenvalue(cap: EuclidCap, mesh: int = 1024, rtol: float = 1e-4) -> EigenSolution:
    """First Dirichlet eigenvalue of the Laplace-Beltrami operator on a cap.

    Solves F'' + (n-2) cot(phi) F' + lam F = 0 on (0, phi0), bounded at 0 and
    F(phi0) = 0, in the self-adjoint form (sin^{n-2} F')' = -lam sin^{n-2} F.
    """
    k = cap.n - 2

    def weight(phi):
        return np.sin(phi) ** k

    lam, est, coarse, _ = richardson(weight, weight, 0.0, cap.phi0, mesh, False, True, rtol=rtol)
    return EigenSolution(lam, characteristic_constant(lam, cap.n), coarse.nodes, coarse.values, coarse.mesh, est)


def psi(s: float) -> float:
    """Friedland-Hayman lower bound for the characteristic constant of a cap
    occupying the fraction ``s`` of the sphere."""
    if not 0.0 < s < 1.0:
        raise InvalidArgument(f"area fraction must lie in (0, 1), got {s}")
    if s <= 0.25:
        return 0.5 * math.log(1.0 / (4.0 * s)) + 1.5
    return 2.0 * (1.0 - s)


def cap_sum_bound(s1: float, s2: float) -> float:
    """psi(s1) + psi(s2) for two disjoint caps; never below 2."""
    if s1 + s2 > 1.0:
        raise InvalidArgument(f"area fractions of disjoint phases must sum to <= 1, got {s1} + {s2}")
    return psi(s1) + psi(s2)


def cap_area_fraction(phi0: float, n: int = 3) -> float:
    """Fraction of the unit sphere in R^n covered by the cap {phi < phi0}."""
    if not 0.0 <= phi0 <= math.pi:
        raise InvalidArgument(f"half-angle must lie in [0, pi], got {phi0}")
    if n == 3:
        return 0.5 * (1.0 - math.cos(phi0))
    half = 0.5 * betainc(0.5 * (n - 1), 0.5, math.sin(min(phi0, math.pi - phi0)) ** 2)
    return half if phi0 <= math.pi / 2 else 1.0 - half


def cap_half_angle(s: float, n: int = 3) -> float:
    """Inverse of :func:`cap_area_fraction`."""
    if not 0.0 < s < 1.0:
        raise InvalidArgument(f"area fraction must lie in (0, 1), got {s}")
    if n == 3:
        return math.acos(1.0 - 2.0 * s)
    return brentq(lambda p: cap_area_fraction(p, n) - s, 0.0, math.pi, xtol=1e-15, rtol=1e-15)
