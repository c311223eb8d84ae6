"""Group calculus on the Heisenberg group H^n = R^{2n+1}.

Points are :class:`HPoint` values whose components may carry leading batch
dimensions: ``x`` and ``y`` have shape (..., n), ``t`` has shape (...).
Every operation here is vectorised over those batch dimensions.

Horizontal derivatives of fields without analytic formulas are taken along
the integral curves of the left-invariant fields, s -> P o exp(s X_i), which
in exponential coordinates are just group translations by (s e_i, 0, 0)
and (0, s e_i, 0). Central differences along these curves give X_i u and
X_i^2 u directly, with no mixed partials in Cartesian coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InvalidArgument, Pole

FD_STEP_FIRST = 1e-6
FD_STEP_SECOND = 1e-3


@dataclass(frozen=True)
class HPoint:
    x: np.ndarray
    y: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        t = np.asarray(self.t, dtype=float)
        if x.shape != y.shape:
            raise InvalidArgument(f"x and y must have the same shape, got {x.shape} and {y.shape}")
        if t.shape != x.shape[:-1]:
            raise InvalidArgument(f"t must have shape {x.shape[:-1]}, got {t.shape}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y)) and np.all(np.isfinite(t))):
            raise InvalidArgument("point components must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        return self.x.shape[-1]

    @classmethod
    def origin(cls, n: int = 1) -> "HPoint":
        return cls(np.zeros(n), np.zeros(n), 0.0)

    @classmethod
    def h1(cls, x, y, t) -> "HPoint":
        """Points of H^1 from scalar (or same-shaped array) coordinates."""
        x = np.asarray(x, dtype=float)
        return cls(x[..., None], np.asarray(y, dtype=float)[..., None], t)

    def inverse(self) -> "HPoint":
        return HPoint(-self.x, -self.y, -self.t)

    def allclose(self, other: "HPoint", atol=1e-12) -> bool:
        return bool(
            np.allclose(self.x, other.x, rtol=0, atol=atol)
            and np.allclose(self.y, other.y, rtol=0, atol=atol)
            and np.allclose(self.t, other.t, rtol=0, atol=atol)
        )


def group_mul(P: HPoint, M: HPoint) -> HPoint:
    """P o M = (x1 + x2, y1 + y2, t1 + t2 + 2(<x2, y1> - <x1, y2>))."""
    if P.n != M.n:
        raise InvalidArgument(f"dimension mismatch: H^{P.n} and H^{M.n}")
    twist = 2.0 * (np.sum(M.x * P.y, axis=-1) - np.sum(P.x * M.y, axis=-1))
    return HPoint(P.x + M.x, P.y + M.y, P.t + M.t + twist)


def dilate(r: float, P: HPoint) -> HPoint:
    if not r > 0:
        raise InvalidArgument(f"dilation factor must be positive, got {r}")
    return HPoint(r * P.x, r * P.y, r * r * P.t)


def _horizontal_sq(P: HPoint):
    return np.sum(P.x**2, axis=-1) + np.sum(P.y**2, axis=-1)


def gauge_norm(P: HPoint):
    """Korányi gauge ((|x|^2 + |y|^2)^2 + t^2)^{1/4}."""
    return np.sqrt(np.hypot(_horizontal_sq(P), P.t))


def koranyi_distance(P: HPoint, T: HPoint):
    return gauge_norm(group_mul(P.inverse(), T))


def homogeneous_dimension(n: int) -> int:
    return 2 * n + 2


def gauge_horizontal_gradient(P: HPoint):
    """(X_1 N, ..., X_n N, Y_1 N, ..., Y_n N) for N = |P|, shape (..., 2n)."""
    N = gauge_norm(P)
    if np.any(N == 0):
        raise Pole("the gauge is not differentiable at the origin")
    r2 = _horizontal_sq(P)[..., None]
    t = P.t[..., None]
    N3 = N[..., None] ** 3
    return np.concatenate([(r2 * P.x + t * P.y) / N3, (r2 * P.y - t * P.x) / N3], axis=-1)


def _gauge_second(P: HPoint):
    """X_i^2 N and Y_i^2 N (each shape (..., n))."""
    N = gauge_norm(P)[..., None]
    r2 = _horizontal_sq(P)[..., None]
    t = P.t[..., None]
    ax = r2 * P.x + t * P.y
    ay = r2 * P.y - t * P.x
    base = (2 * P.x**2 + r2 + 2 * P.y**2) / N**3
    return -3 * ax**2 / N**7 + base, -3 * ay**2 / N**7 + base


def gauge_sublaplacian(P: HPoint):
    """Sum of X_i^2 N + Y_i^2 N; equals (2n+1)(|x|^2+|y|^2)|P|^{-3}."""
    xx, yy = _gauge_second(P)
    return np.sum(xx + yy, axis=-1)


def fundamental_solution(P: HPoint):
    """|P|^{2-Q}, unnormalised."""
    N = gauge_norm(P)
    if np.any(N == 0):
        raise Pole("the fundamental solution has its pole at the origin")
    return N ** (2 - homogeneous_dimension(P.n))


@dataclass(frozen=True)
class HField:
    """Scalar field on H^n.

    ``value(x, y, t)`` is vectorised with x, y of shape (..., n) and t of
    shape (...). ``horizontal_gradient`` (same signature, returns (..., 2n))
    and ``sublaplacian`` (returns (...)) are optional analytic formulas; when
    absent they are computed by central differences along the horizontal
    flows. ``phi_breaks`` lists polar angles where the field has a kink or a
    support edge; quadrature splits there.
    """

    value: Callable
    n: int = 1
    horizontal_gradient: Optional[Callable] = None
    sublaplacian: Optional[Callable] = None
    fd_step: float = FD_STEP_FIRST
    phi_breaks: Sequence[float] = ()
    name: str = "field"
    notes: tuple = field(default=())

    def __call__(self, P: HPoint):
        return np.asarray(self.value(P.x, P.y, P.t), dtype=float)

    def grad(self, P: HPoint):
        if self.horizontal_gradient is not None:
            return np.asarray(self.horizontal_gradient(P.x, P.y, P.t), dtype=float)
        return fd_horizontal_gradient(self, P, self.fd_step)

    def sublap(self, P: HPoint):
        if self.sublaplacian is not None:
            return np.asarray(self.sublaplacian(P.x, P.y, P.t), dtype=float)
        return fd_sublaplacian(self, P)

    def grad_sq(self, P: HPoint):
        return np.sum(self.grad(P) ** 2, axis=-1)

    def scaled(self, c: float) -> "HField":
        g = self.horizontal_gradient
        s = self.sublaplacian
        return HField(
            lambda x, y, t: c * self.value(x, y, t),
            self.n,
            None if g is None else (lambda x, y, t: c * g(x, y, t)),
            None if s is None else (lambda x, y, t: c * s(x, y, t)),
            self.fd_step,
            self.phi_breaks,
            f"{c}*{self.name}",
            self.notes,
        )

    def check_gradient(self, P: HPoint, rtol: float = 1e-5) -> float:
        """Largest relative mismatch between the analytic and the finite-difference gradient."""
        if self.horizontal_gradient is None:
            return 0.0
        exact = self.grad(P)
        approx = fd_horizontal_gradient(self, P, self.fd_step)
        scale = np.maximum(np.linalg.norm(exact, axis=-1), 1e-300)
        return float(np.max(np.linalg.norm(exact - approx, axis=-1) / scale))


def _translate(P: HPoint, i: int, s, vertical_y: bool) -> HPoint:
    step = np.zeros(P.n)
    step[i] = 1.0
    s = np.asarray(s, dtype=float)[..., None]
    if vertical_y:
        return group_mul(P, HPoint(np.zeros_like(P.x), s * step + np.zeros_like(P.y), np.zeros_like(P.t)))
    return group_mul(P, HPoint(s * step + np.zeros_like(P.x), np.zeros_like(P.y), np.zeros_like(P.t)))


def _scale(P: HPoint):
    return np.maximum(1.0, gauge_norm(P))


def fd_horizontal_gradient(u: HField, P: HPoint, h: float = FD_STEP_FIRST):
    hs = h * _scale(P)
    comps = []
    for vertical_y in (False, True):
        for i in range(P.n):
            fp = u(_translate(P, i, hs, vertical_y))
            fm = u(_translate(P, i, -hs, vertical_y))
            comps.append((fp - fm) / (2 * hs))
    return np.stack(comps, axis=-1)


def fd_sublaplacian(u: HField, P: HPoint, h: float = FD_STEP_SECOND):
    """Fourth-order central stencil for X_i^2 + Y_i^2 along group translations."""
    hs = h * _scale(P)
    centre = u(P)
    total = 0.0
    for vertical_y in (False, True):
        for i in range(P.n):
            f1 = u(_translate(P, i, hs, vertical_y)) + u(_translate(P, i, -hs, vertical_y))
            f2 = u(_translate(P, i, 2 * hs, vertical_y)) + u(_translate(P, i, -2 * hs, vertical_y))
            total = total + (16 * f1 - f2 - 30 * centre) / (12 * hs**2)
    return total


def horizontal_gradient(u: HField, P: HPoint):
    return u.grad(P)


def sublaplacian(u: HField, P: HPoint):
    """Sum_i (X_i^2 + Y_i^2) u at P."""
    return u.sublap(P)


def fundamental_solution_residual(P: HPoint, n: Optional[int] = None, method: str = "analytic"):
    """Sublaplacian of |.|^{2-Q} at P; vanishes identically off the pole.

    ``method="analytic"`` chains the closed-form derivatives of the gauge,
    ``method="fd"`` differentiates |.|^{2-Q} numerically.
    """
    if n is not None and n != P.n:
        raise InvalidArgument(f"point lives in H^{P.n}, not H^{n}")
    N = gauge_norm(P)
    if np.any(N == 0):
        raise Pole("the fundamental solution has its pole at the origin")
    Q = homogeneous_dimension(P.n)
    if method == "fd":
        field_ = HField(lambda x, y, t: fundamental_solution(HPoint(x, y, t)), n=P.n)
        return fd_sublaplacian(field_, P)
    if method != "analytic":
        raise InvalidArgument(f"unknown method {method!r}")
    # X^2 g(N) = g''(N) (X N)^2 + g'(N) X^2 N with g(N) = N^{2-Q}
    d1 = (2 - Q) * N ** (1 - Q)
    d2 = (2 - Q) * (1 - Q) * N ** (-Q)
    grad_sq = np.sum(gauge_horizontal_gradient(P) ** 2, axis=-1)
    return d2 * grad_sq + d1 * gauge_sublaplacian(P)


def vector_fields_h1(P: HPoint):
    """Euclidean components of X and Y at points of H^1, shape (..., 3) each."""
    if P.n != 1:
        raise InvalidArgument("h-perimeter density is implemented for H^1")
    x = P.x[..., 0]
    y = P.y[..., 0]
    one = np.ones_like(x)
    zero = np.zeros_like(x)
    return np.stack([one, zero, 2 * y], axis=-1), np.stack([zero, one, -2 * x], axis=-1)


def h_perimeter_density(surface_normal, P: HPoint):
    """(<X, n_E>^2 + <Y, n_E>^2)^{1/2} for a unit Euclidean normal n_E."""
    nrm = np.asarray(surface_normal, dtype=float)
    length = np.linalg.norm(nrm, axis=-1)
    if np.any(length == 0):
        raise InvalidArgument("surface normal must be nonzero")
    nrm = nrm / length[..., None]
    X, Y = vector_fields_h1(P)
    return np.hypot(np.sum(X * nrm, axis=-1), np.sum(Y * nrm, axis=-1))
