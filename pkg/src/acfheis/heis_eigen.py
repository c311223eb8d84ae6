"""The phi-interval eigenproblem on the Korányi sphere and its Rayleigh quotients.

    4 (sin(phi) f')' = -lam sin(phi) f   on (phi0, phi1),

Dirichlet at interior endpoints, bounded (zero-flux) at phi = 0 or pi.
The Heisenberg characteristic constant is the positive root of
alpha (alpha + 2) = lam.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CharacteristicAxis, DegenerateField, InvalidArgument, SolverFailure
from .euclid_eigen import EigenSolution, EuclidCap, cap_eigenvalue
from .heisenberg import HField, HPoint
from .polar import AngularProfile, gradient_split, polar_to_xyt
from .quadrature import (
    DEFAULT_N_PHI,
    DEFAULT_N_THETA,
    gauss_legendre,
    koranyi_sphere_grid,
    pairwise_sum,
)
from .sturm import richardson

DIRICHLET = "dirichlet"
SINGULAR = "singular-regular"


@dataclass(frozen=True)
class PhiInterval:
    phi0: float
    phi1: float
    left: str = ""
    right: str = ""

    def __post_init__(self):
        if not 0.0 <= self.phi0 < self.phi1 <= math.pi:
            raise InvalidArgument(f"need 0 <= phi0 < phi1 <= pi, got ({self.phi0}, {self.phi1})")
        left = self.left or (SINGULAR if self.phi0 == 0.0 else DIRICHLET)
        right = self.right or (SINGULAR if self.phi1 == math.pi else DIRICHLET)
        for kind, end in ((left, self.phi0), (right, self.phi1)):
            if kind not in (DIRICHLET, SINGULAR):
                raise InvalidArgument(f"unknown endpoint kind {kind!r}")
            if kind == SINGULAR and end not in (0.0, math.pi):
                raise InvalidArgument("singular-regular endpoints must be 0 or pi")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)


def alpha_h1(lam: float) -> float:
    """Nonnegative root of a^2 + 2a - lam = 0, i.e. sqrt(1 + lam) - 1."""
    if lam < 0:
        raise InvalidArgument(f"eigenvalue must be nonnegative, got {lam}")
    return lam / (1.0 + math.sqrt(1.0 + lam))


def sl_eigen(interval: PhiInterval, mesh: int = 1024, rtol: float = 1e-4) -> EigenSolution:
    lam, est, coarse, _ = richardson(
        lambda phi: 4.0 * np.sin(phi),
        np.sin,
        interval.phi0,
        interval.phi1,
        mesh,
        interval.left == DIRICHLET,
        interval.right == DIRICHLET,
        rtol=rtol,
    )
    return EigenSolution(lam, alpha_h1(lam), coarse.nodes, coarse.values, coarse.mesh, est)


@dataclass(frozen=True)
class BridgeResult:
    lambda_h: float
    lambda_e: float
    heis: EigenSolution
    euclid: EigenSolution

    @property
    def ratio(self) -> float:
        return self.lambda_h / self.lambda_e

    @property
    def profile_mismatch(self) -> float:
        """Max difference of the two max-normalised eigenfunctions on the shared mesh."""
        return float(np.max(np.abs(self.heis.eigenfunction - self.euclid.eigenfunction)))


def euclid_bridge(phi0: float, mesh: int = 1024, rtol: float = 1e-4) -> BridgeResult:
    """Solve the phi-cap problem on (0, phi0) and the Euclidean cap problem in R^3.

    The two ODEs coincide up to the factor 4, so lambda_h = 4 lambda_e; a
    mismatch beyond both solvers' error estimates raises SolverFailure.
    """
    heis = sl_eigen(PhiInterval(0.0, phi0), mesh, rtol)
    euc = cap_eigenvalue(EuclidCap(phi0, 3), mesh, rtol)
    tol = heis.est_error + 4 * euc.est_error + 1e-12 * heis.lam
    if abs(heis.lam - 4 * euc.lam) > tol:
        raise SolverFailure(
            "bridge identity lambda_h = 4 lambda_e violated",
            {"lambda_h": heis.lam, "lambda_e": euc.lam, "tolerance": tol},
        )
    return BridgeResult(heis.lam, euc.lam, heis, euc)


def rayleigh_phi(
    u: HField,
    support: tuple = (0.0, math.pi),
    theta_range: tuple | None = None,
    n_phi: int = DEFAULT_N_PHI,
    n_theta: int = DEFAULT_N_THETA,
) -> float:
    """Evaluate the phi-Rayleigh quotient of ``u`` on a region of the unit Korányi sphere.

    numerator   = int |grad^phi u|^2 / sqrt(x^2 + y^2) dP
    denominator = int u^2 sqrt(x^2 + y^2) dP
    over support[0] < phi < support[1] (and theta in ``theta_range`` if given).
    """
    grid = koranyi_sphere_grid(n_phi, n_theta, phi_range=support, theta_range=theta_range)
    phi, theta = grid.coords
    P = HPoint.h1(*polar_to_xyt(1.0, phi, theta))
    horiz = np.sqrt(np.sin(phi))  # sqrt(x^2 + y^2) on the unit sphere
    _, angular = gradient_split(u, P)
    num = grid.integrate(angular / horiz)
    den = grid.integrate(u(P) ** 2 * horiz)
    if not den > 0:
        raise DegenerateField("field vanishes on the region")
    return num / den


def divergence_matrix(theta: float, phi: float, alpha: float) -> np.ndarray:
    s = math.sin(phi)
    if not s > 0:
        raise CharacteristicAxis("sin(phi) must be positive")
    return np.array([[1.0 / s, (4.0 + 2.0 * alpha) * s], [-2.0 * alpha * s, 4.0 * s]])


def rayleigh_2d_integrands(f: AngularProfile, theta, phi):
    _, f_t, f_p, *_ = f.jet(theta, phi)
    s = np.sin(phi)
    val = f.f(theta, phi)
    energy = f_t**2 / s + 4 * s * f_t * f_p + 4 * s * f_p**2
    return energy, s * val**2


def rayleigh_2d(
    f: AngularProfile,
    domain: tuple = (0.0, 2 * math.pi, 0.0, math.pi / 2),
    n_theta: int = DEFAULT_N_THETA,
    n_phi: int = DEFAULT_N_PHI,
) -> float:
    """Evaluate the (theta, phi) Rayleigh quotient of f over the rectangle
    ``domain = (theta0, theta1, phi0, phi1)``; evaluation only, no minimisation."""
    th0, th1, ph0, ph1 = domain
    if not (0.0 <= ph0 < ph1 <= math.pi and th0 < th1):
        raise InvalidArgument(f"bad domain {domain}")
    rt = gauss_legendre(n_theta, th0, th1)
    rp = gauss_legendre(n_phi, ph0, ph1)
    T, PH = np.meshgrid(rt.nodes, rp.nodes, indexing="ij")
    W = np.outer(rt.weights, rp.weights)
    energy, mass = rayleigh_2d_integrands(f, T, PH)
    den = pairwise_sum(W * mass)
    if not den > 0:
        raise DegenerateField("profile vanishes on the domain")
    return pairwise_sum(W * energy) / den
