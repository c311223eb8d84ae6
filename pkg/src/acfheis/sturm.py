"""First eigenpair of  -(p u')' = lam * w u  on an interval of the polar angle.

Used by both the Euclidean cap problem (p = w = sin^{n-2}) and the
Heisenberg phi-problem (p = 4 sin, w = sin).

Discretisation: vertex-centred finite volumes on a uniform mesh. Flux
coefficients p(phi_{i+1/2})/h, lumped masses are exact integrals of w over
each control volume (4-point Gauss per half cell). An endpoint at 0 or pi
where p vanishes is "singular-regular": its node is kept as an unknown and
the zero flux through the endpoint is the natural (bounded-solution)
condition. Dirichlet endpoints are dropped from the unknowns.

The tridiagonal eigenvalue is recomputed from the eigenvector as a
Rayleigh quotient in difference form; this avoids the O(eps / h^2)
cancellation of the matrix eigenvalue and keeps Richardson extrapolation
meaningful up to mesh ~ 10^4.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import eigh_tridiagonal

from .errors import InvalidArgument, SolverFailure

MIN_MESH = 16
MAX_MESH = 2**15

_GX, _GW = leggauss(4)


@dataclass(frozen=True)
class DiscreteEigen:
    lam: float
    nodes: np.ndarray
    values: np.ndarray
    mesh: int


def _cell_integral(w, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = mid[:, None] + half[:, None] * _GX[None, :]
    return half * (w(pts) @ _GW)


def first_eigen(
    p: Callable,
    w: Callable,
    a: float,
    b: float,
    mesh: int,
    left_dirichlet: bool = True,
    right_dirichlet: bool = True,
) -> DiscreteEigen:
    if mesh < MIN_MESH:
        raise InvalidArgument(f"mesh must be >= {MIN_MESH}, got {mesh}")
    if not a < b:
        raise InvalidArgument(f"need a < b, got {a}, {b}")
    n = int(mesh)
    x = np.linspace(a, b, n + 1)
    h = (b - a) / n
    xm = 0.5 * (x[:-1] + x[1:])
    kf = p(xm) / h
    lo = np.concatenate([[x[0]], xm])
    hi = np.concatenate([xm, [x[-1]]])
    mass = _cell_integral(w, lo, hi)

    diag = np.zeros(n + 1)
    diag[:-1] += kf
    diag[1:] += kf
    first = 1 if left_dirichlet else 0
    last = n - 1 if right_dirichlet else n
    idx = np.arange(first, last + 1)
    if len(idx) < 2:
        raise InvalidArgument("mesh too coarse for the requested boundary conditions")
    if np.any(mass[idx] <= 0):
        raise SolverFailure("non-positive lumped mass", {"mesh": n})

    s = 1.0 / np.sqrt(mass[idx])
    evals, evecs = eigh_tridiagonal(diag[idx] * s * s, -kf[idx[:-1]] * s[:-1] * s[1:], select="i", select_range=(0, 0))
    u = np.zeros(n + 1)
    u[idx] = evecs[:, 0] * s
    if u[idx].sum() < 0:
        u = -u
    energy = np.sum(kf * np.diff(u) ** 2)
    lam = energy / np.sum(mass * u**2)
    if not np.isfinite(lam) or abs(lam - evals[0]) > 1e-6 * max(1.0, abs(evals[0])):
        raise SolverFailure(
            "Rayleigh refinement disagrees with the matrix eigenvalue",
            {"mesh": n, "matrix": float(evals[0]), "rayleigh": float(lam)},
        )
    interior = u[idx[1:-1]] if len(idx) > 2 else u[idx]
    if np.any(interior <= 0):
        raise SolverFailure("first eigenvector is not positive in the interior", {"mesh": n})
    return DiscreteEigen(float(lam), x, u / np.max(u), n)


def richardson(p, w, a, b, mesh, left_dirichlet, right_dirichlet, rtol=1e-4, max_mesh=MAX_MESH):
    """Second-order Richardson extrapolation over meshes N and 2N.

    Doubles N until the error estimate |lam_2N - lam_N| / 3 is below
    ``rtol * lam`` (the estimate bounds the error of lam_2N; the
    extrapolated value is typically far better).

    Returns (lam_extrapolated, est_error, coarse, fine).
    """
    n = int(mesh)
    history = []
    while True:
        coarse = first_eigen(p, w, a, b, n, left_dirichlet, right_dirichlet)
        fine = first_eigen(p, w, a, b, 2 * n, left_dirichlet, right_dirichlet)
        lam = (4.0 * fine.lam - coarse.lam) / 3.0
        est = abs(fine.lam - coarse.lam) / 3.0
        history.append((n, lam, est))
        if est <= rtol * abs(lam):
            return lam, est, coarse, fine
        n *= 2
        if 2 * n > max_mesh:
            raise SolverFailure(
                "eigenvalue did not converge before the mesh cap",
                {"history": history, "rtol": rtol, "max_mesh": max_mesh},
            )
