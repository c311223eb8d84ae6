"""Deterministic tensor-product quadrature.

Every singular weight (the |x|^{2-n} kernel in R^3, the Koranyi kernel
|zeta|^{-2}, the perimeter density sqrt(sin phi)) is folded into the
polar volume element before discretisation, so no rule ever needs a node
at rho = 0 or at phi in {0, pi}.

Reductions go through :func:`pairwise_sum`, which flattens to a contiguous
1-D array first; numpy reduces such arrays with a fixed pairwise tree, so a
given grid always produces bit-identical totals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import InvalidArgument, UnsupportedDimension

DEFAULT_N_RHO = 64
DEFAULT_N_PHI = 128
DEFAULT_N_THETA = 128


def pairwise_sum(values) -> float:
    return float(np.add.reduce(np.ascontiguousarray(values, dtype=float).ravel()))


@dataclass(frozen=True)
class QuadratureRule1D:
    nodes: np.ndarray
    weights: np.ndarray
    order: int
    a: float
    b: float

    def __len__(self):
        return len(self.nodes)

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return pairwise_sum(self.weights * f(self.nodes))


def gauss_legendre(order: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule1D:
    """Gauss-Legendre rule with ``order`` nodes on (a, b).

    Exact for polynomials of degree <= 2*order - 1.
    """
    if int(order) != order or order < 1:
        raise InvalidArgument(f"order must be a positive integer, got {order!r}")
    if not a < b:
        raise InvalidArgument(f"need a < b, got a={a}, b={b}")
    x, w = leggauss(int(order))
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nodes = mid + half * x
    # leggauss returns exactly antisymmetric nodes; keep the mapped copy symmetric too
    nodes = 0.5 * (nodes + (a + b - nodes[::-1]))
    return QuadratureRule1D(nodes, half * w, int(order), float(a), float(b))


def composite_gauss(n: int, a: float, b: float, breaks: Sequence[float] = ()) -> QuadratureRule1D:
    """Gauss-Legendre on (a, b) split at interior ``breaks``.

    Nodes are shared out in proportion to sub-interval length (at least two
    per piece), so integrands with kinks or jumps at the breaks keep their
    spectral convergence on each piece.
    """
    cuts = sorted({float(c) for c in breaks if a < c < b})
    if not cuts:
        return gauss_legendre(n, a, b)
    edges = [float(a), *cuts, float(b)]
    lengths = np.diff(edges)
    counts = [max(2, int(round(n * ell / (b - a)))) for ell in lengths]
    rules = [gauss_legendre(k, lo, hi) for k, lo, hi in zip(counts, edges[:-1], edges[1:])]
    return QuadratureRule1D(
        np.concatenate([r.nodes for r in rules]),
        np.concatenate([r.weights for r in rules]),
        min(counts),
        float(a),
        float(b),
    )


def periodic_midpoint(n: int, a: float = 0.0, b: float = 2.0 * np.pi, shift: float = 0.5) -> QuadratureRule1D:
    """Uniform rule for periodic integrands, nodes offset by ``shift`` cells.

    Spectrally accurate for smooth periodic functions. The half-cell offset
    keeps nodes off the zero sets of linear fields such as x or y.
    """
    if int(n) != n or n < 1:
        raise InvalidArgument(f"node count must be a positive integer, got {n!r}")
    if not a < b:
        raise InvalidArgument(f"need a < b, got a={a}, b={b}")
    h = (b - a) / n
    nodes = a + (np.arange(n) + shift) * h
    return QuadratureRule1D(nodes, np.full(n, h), int(n), float(a), float(b))


@dataclass(frozen=True)
class ProductGrid:
    """Tensor product of 1-D rules times a pointwise measure density.

    ``coords`` are the flattened ('ij' ordered) node coordinates, one array per
    axis; ``weights`` already include ``weight_fn``.
    """

    axes: tuple
    weight_fn: Callable
    coords: tuple = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.axes) not in (2, 3):
            raise InvalidArgument("a product grid has 2 or 3 axes")
        mesh = np.meshgrid(*[ax.nodes for ax in self.axes], indexing="ij")
        wmesh = np.meshgrid(*[ax.weights for ax in self.axes], indexing="ij")
        coords = tuple(m.ravel() for m in mesh)
        w = np.prod([m.ravel() for m in wmesh], axis=0) * self.weight_fn(*coords)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return int(np.prod([len(ax) for ax in self.axes]))

    def integrate(self, f) -> float:
        """Integrate ``f(*coords)`` (or a precomputed array of node values)."""
        values = f(*self.coords) if callable(f) else np.asarray(f, dtype=float)
        return pairwise_sum(self.weights * values)


def _check_counts(*counts):
    for c in counts:
        if int(c) != c or c < 1:
            raise InvalidArgument(f"node counts must be positive integers, got {c!r}")


def koranyi_ball_grid(
    r: float,
    n_rho: int = DEFAULT_N_RHO,
    n_phi: int = DEFAULT_N_PHI,
    n_theta: int = DEFAULT_N_THETA,
    r_inner: float = 0.0,
    phi_breaks: Sequence[float] = (),
) -> ProductGrid:
    """Korányi ball (or shell r_inner < rho < r) in polar coordinates (rho, phi, theta).

    Lebesgue measure in these coordinates is rho^3 drho dphi dtheta.
    """
    if not r > 0:
        raise InvalidArgument(f"radius must be positive, got {r}")
    if not 0 <= r_inner < r:
        raise InvalidArgument(f"need 0 <= r_inner < r, got {r_inner}, {r}")
    _check_counts(n_rho, n_phi, n_theta)
    axes = (
        gauss_legendre(n_rho, r_inner, r),
        composite_gauss(n_phi, 0.0, np.pi, phi_breaks),
        periodic_midpoint(n_theta),
    )
    return ProductGrid(axes, lambda rho, phi, theta: rho**3)


def koranyi_sphere_grid(
    n_phi: int = DEFAULT_N_PHI,
    n_theta: int = DEFAULT_N_THETA,
    phi_range: tuple = (0.0, np.pi),
    theta_range: tuple | None = None,
    phi_breaks: Sequence[float] = (),
) -> ProductGrid:
    """Unit Korányi sphere with its H-perimeter measure sqrt(sin phi) dtheta dphi."""
    _check_counts(n_phi, n_theta)
    lo, hi = phi_range
    if not 0.0 <= lo < hi <= np.pi:
        raise InvalidArgument(f"phi range must satisfy 0 <= lo < hi <= pi, got {phi_range}")
    theta_rule = periodic_midpoint(n_theta) if theta_range is None else gauss_legendre(n_theta, *theta_range)
    axes = (composite_gauss(n_phi, lo, hi, phi_breaks), theta_rule)
    return ProductGrid(axes, lambda phi, theta: np.sqrt(np.sin(phi)))


def euclid_ball_grid(
    r: float,
    n: int = 3,
    n_rho: int = DEFAULT_N_RHO,
    n_phi: int = DEFAULT_N_PHI,
    n_theta: int = DEFAULT_N_THETA,
    phi_breaks: Sequence[float] = (),
) -> ProductGrid:
    """Ball B_r in R^3 with the kernel |x|^{2-n} absorbed into the weights.

    ``grid.integrate(f)`` returns the integral of f(x) |x|^{-1} over B_r;
    phi is the polar angle from the positive x3-axis.
    """
    if n != 3:
        raise UnsupportedDimension(f"ball quadrature is only implemented for n = 3, got n = {n}")
    if not r > 0:
        raise InvalidArgument(f"radius must be positive, got {r}")
    _check_counts(n_rho, n_phi, n_theta)
    axes = (
        gauss_legendre(n_rho, 0.0, r),
        composite_gauss(n_phi, 0.0, np.pi, phi_breaks),
        periodic_midpoint(n_theta),
    )
    # rho^2 sin(phi) Jacobian divided by the kernel |x| = rho
    return ProductGrid(axes, lambda rho, phi, theta: rho * np.sin(phi))


def euclid_sphere_grid(
    n_phi: int = DEFAULT_N_PHI,
    n_theta: int = DEFAULT_N_THETA,
    phi_breaks: Sequence[float] = (),
) -> ProductGrid:
    """Unit sphere S^2 with surface measure sin(phi) dphi dtheta."""
    _check_counts(n_phi, n_theta)
    axes = (composite_gauss(n_phi, 0.0, np.pi, phi_breaks), periodic_midpoint(n_theta))
    return ProductGrid(axes, lambda phi, theta: np.sin(phi))


def spherical_to_cartesian(rho, phi, theta):
    """Euclidean spherical coordinates to points of shape (..., 3)."""
    s = np.sin(phi)
    return np.stack([rho * s * np.cos(theta), rho * s * np.sin(theta), rho * np.cos(phi)], axis=-1)
