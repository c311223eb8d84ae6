"""The acceptance suite: twelve checks, each returning rows of
(measured, expected, tolerance, passed).

Shared by ``acfheis verify`` and tests/test_acceptance.py. All random
draws use fixed seeds so repeated runs print identical tables.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import euclid_acf, heis_mono
from .euclid_eigen import EuclidCap, cap_eigenvalue, characteristic_constant, psi
from .heis_eigen import PhiInterval, euclid_bridge, sl_eigen
from .heisenberg import HPoint, fundamental_solution_residual, gauge_norm
from .polar import PolarCoord, from_polar, gradient_split, polar_gradients, polar_sublaplacians
from .quadrature import koranyi_ball_grid
from .symbolic import POLYNOMIAL_FIELDS, SymbolicField, polar_coordinate_fields

SEED = 20240601
MC_SAMPLES = 10**7
MC_CHUNK = 10**6


@dataclass(frozen=True)
class CheckRow:
    criterion: int
    check: str
    measured: float
    expected: float
    tolerance: float
    passed: bool

    def as_dict(self):
        return asdict(self)


def _abs(criterion, check, measured, expected, tol):
    measured = float(measured)
    return CheckRow(criterion, check, measured, float(expected), tol, bool(abs(measured - expected) <= tol))


def _rel(criterion, check, measured, expected, tol):
    measured = float(measured)
    ok = abs(measured - expected) <= tol * abs(expected)
    return CheckRow(criterion, check, measured, float(expected), tol, bool(ok))


def _max_rel(criterion, check, got, ref, tol, floor=1e-300):
    """Worst relative error over an array, reported as the measured value against 0."""
    got, ref = np.asarray(got, dtype=float), np.asarray(ref, dtype=float)
    err = float(np.max(np.abs(got - ref) / np.maximum(np.abs(ref), floor)))
    return CheckRow(criterion, check, err, 0.0, tol, bool(err <= tol))


def criterion_1():
    sol = sl_eigen(PhiInterval(0.0, math.pi / 2), mesh=2048)
    return [
        _rel(1, "sl_eigen(0, pi/2) lambda", sol.lam, 8.0, 1e-6),
        _abs(1, "sl_eigen(0, pi/2) alpha", sol.alpha, 2.0, 1e-8),
    ]


def criterion_2():
    sol = cap_eigenvalue(EuclidCap(math.pi / 2, 3), mesh=2048)
    return [
        _abs(2, "cap_eigenvalue(pi/2, 3) lambda", sol.lam, 2.0, 1e-8),
        _abs(2, "characteristic_constant(2, 3)", characteristic_constant(2.0, 3), 1.0, 1e-12),
    ]


def criterion_3():
    rows = []
    for k, label in ((6, "pi/6"), (4, "pi/4"), (3, "pi/3"), (2, "pi/2"), (1.5, "2pi/3")):
        res = euclid_bridge(math.pi / k)
        rows.append(_rel(3, f"bridge ratio at {label}", res.ratio, 4.0, 1e-5))
    return rows


def criterion_4():
    rng = np.random.default_rng(SEED + 4)
    rows = []
    coeffs = rng.normal(size=(5, 2))
    for a, b in coeffs:
        q = heis_mono.boundary_quotient(heis_mono.linear_part(a, b))
        rows.append(_abs(4, f"quotient (({a:.3f})x+({b:.3f})y)+", q, 2.0, 1e-3))
    a, b = coeffs[0]
    pair = heis_mono.linear_pair(a, b)
    rows.append(_abs(4, "j_log_derivative beta=4", heis_mono.j_log_derivative(pair, 4.0), 0.0, 2e-3))
    d = heis_mono.j_log_derivative(pair, 4.5)
    rows.append(CheckRow(4, "j_log_derivative beta=4.5 <= -0.5", d, -0.5, 2e-3, bool(d <= -0.5 + 2e-3)))
    return rows


def criterion_5():
    pair = heis_mono.t_pair(1.5, 0.5)
    radii = (0.25, 0.5, 0.75, 1.0)
    vals = [heis_mono.j_beta(pair, r, 8.0) for r in radii]
    ref = vals[-1]
    return [_rel(5, f"J_8 (1.5t+, 0.5t-) at r={r}", v, ref, 2e-3) for r, v in zip(radii, vals)]


def criterion_6():
    rows = [
        CheckRow(6, "psi(1/4) exact", psi(0.25), 1.5, 0.0, psi(0.25) == 1.5),
        CheckRow(6, "psi(1/2) exact", psi(0.5), 1.0, 0.0, psi(0.5) == 1.0),
    ]
    s = np.linspace(0, 1, 1002)[1:-1]
    v = np.array([psi(x) for x in s])
    d2 = float(np.min(v[2:] - 2 * v[1:-1] + v[:-2]))
    rows.append(CheckRow(6, "psi convex: min second difference", d2, 0.0, 1e-10, bool(d2 >= -1e-10)))
    d1 = float(np.max(np.diff(v)))
    rows.append(CheckRow(6, "psi decreasing: max first difference", d1, 0.0, 0.0, bool(d1 < 0)))
    rng = np.random.default_rng(SEED + 6)
    u = rng.uniform(size=(1000, 2))
    s1 = u[:, 0] * (1 - 1e-9) + 1e-12
    s2 = (1 - s1) * u[:, 1] * (1 - 1e-9) + 1e-12
    worst = min(psi(a) + psi(b) for a, b in zip(s1, s2))
    rows.append(CheckRow(6, "min psi(s1)+psi(s2), s1+s2<=1", worst, 2.0, 1e-12, bool(worst >= 2 - 1e-12)))
    return rows


def random_gauge_points(n, count, lo, hi, rng):
    """``count`` points of H^n with gauge norm uniform in [lo, hi]."""
    z = rng.normal(size=(count, 2 * n + 1))
    P = HPoint(z[:, :n], z[:, n : 2 * n], z[:, 2 * n])
    d = rng.uniform(lo, hi, size=count) / gauge_norm(P)
    return HPoint(d[:, None] * P.x, d[:, None] * P.y, d * d * P.t)


def criterion_7():
    rows = []
    rng = np.random.default_rng(SEED + 7)
    for n in (1, 2):
        P = random_gauge_points(n, 100, 0.5, 2.0, rng)
        ana = np.max(np.abs(fundamental_solution_residual(P, n, "analytic")))
        fd = np.max(np.abs(fundamental_solution_residual(P, n, "fd")))
        rows.append(CheckRow(7, f"residual analytic n={n}", float(ana), 0.0, 1e-10, bool(ana <= 1e-10)))
        rows.append(CheckRow(7, f"residual fd n={n}", float(fd), 0.0, 1e-5, bool(fd <= 1e-5)))
    return rows


def random_off_axis(count, rng, rho=(0.2, 3.0), margin=0.05):
    c = PolarCoord(
        rng.uniform(*rho, count),
        rng.uniform(margin, math.pi - margin, count),
        rng.uniform(0, 2 * math.pi, count),
    )
    return c, from_polar(c)


def criterion_8():
    rng = np.random.default_rng(SEED + 8)
    c, P = random_off_axis(10**4, rng)
    x, y, t = P.x[:, 0], P.y[:, 0], P.t
    rho, r2 = c.rho, x * x + y * y
    g = polar_gradients(P)
    s_rho, s_phi, s_theta = polar_coordinate_fields()
    # symbolic Cartesian route for the gradients and sublaplacians
    gr, gp, gt = s_rho.gradient(x, y, t), s_phi.gradient(x, y, t), s_theta.gradient(x, y, t)

    def dot(a, b):
        return np.sum(a * b, axis=-1)

    rows = [
        _max_rel(8, "|grad rho|^2 = r^2/rho^2", dot(gr, gr), r2 / rho**2, 1e-10),
        _max_rel(8, "|grad phi|^2 = 4r^2/rho^4", dot(gp, gp), 4 * r2 / rho**4, 1e-10),
        _max_rel(8, "|grad theta|^2 = 1/r^2", dot(gt, gt), 1 / r2, 1e-10),
    ]
    # <grad phi, grad rho> = 0: measured relative to |grad phi||grad rho|
    scale = np.sqrt(dot(gp, gp) * dot(gr, gr))
    orth = float(np.max(np.abs(dot(gp, gr)) / scale))
    rows.append(CheckRow(8, "<grad phi, grad rho> = 0", orth, 0.0, 1e-10, bool(orth <= 1e-10)))
    rows.append(_max_rel(8, "<grad rho, grad theta> = -cos(phi)/rho", dot(gr, gt), -np.cos(c.phi) / rho, 1e-10, 1e-12))
    rows.append(_max_rel(8, "<grad phi, grad theta> = 2r^2/rho^4", dot(gp, gt), 2 * r2 / rho**4, 1e-10))
    sym = (s_rho.sublaplacian(x, y, t), s_phi.sublaplacian(x, y, t), s_theta.sublaplacian(x, y, t))
    closed = polar_sublaplacians(P)
    rows.append(_max_rel(8, "Delta rho = 3r^2/rho^3", sym[0], closed[0], 1e-10))
    rows.append(_max_rel(8, "Delta phi = 4t/rho^4", sym[1], closed[1], 1e-10, 1.0 / rho**2))
    scale = 1.0 / r2
    flat = float(np.max(np.abs(sym[2]) / scale))
    rows.append(CheckRow(8, "Delta theta = 0", flat, 0.0, 1e-10, bool(flat <= 1e-10)))
    # hand-derived gradient formulas against the symbolic route
    for name, a, b in (("rho", g.grad_rho, gr), ("phi", g.grad_phi, gp), ("theta", g.grad_theta, gt)):
        err = float(np.max(np.linalg.norm(a - b, axis=-1) / np.linalg.norm(b, axis=-1)))
        rows.append(CheckRow(8, f"closed-form grad {name} vs symbolic", err, 0.0, 1e-10, bool(err <= 1e-10)))
    return rows


def monte_carlo_koranyi_volume(r=1.0, samples=MC_SAMPLES, seed=SEED + 9, chunk=MC_CHUNK):
    """Hit-or-miss estimate of |B_r| from the bounding box |x|,|y| <= r, |t| <= r^2."""
    rng = np.random.default_rng(seed)
    hits = 0
    left = samples
    while left > 0:
        m = min(chunk, left)
        p = rng.uniform(-1.0, 1.0, size=(m, 3))
        rr = p[:, 0] ** 2 + p[:, 1] ** 2
        hits += int(np.count_nonzero(rr * rr + p[:, 2] ** 2 < 1.0))
        left -= m
    return 8.0 * r**4 * hits / samples


def criterion_9():
    rows = []
    for r in (0.5, 1.0, 2.0):
        vol = koranyi_ball_grid(r, 16, 64, 8).integrate(lambda rho, phi, theta: np.ones_like(rho))
        rows.append(_rel(9, f"quadrature |B_{r}|", vol, math.pi**2 * r**4 / 2, 1e-6))
    mc = monte_carlo_koranyi_volume()
    rows.append(_rel(9, "Monte Carlo |B_1| (1e7 samples)", mc, math.pi**2 / 2, 1e-2))
    return rows


def criterion_10():
    pair = euclid_acf.TwoPhasePair(
        euclid_acf.half_space_field((0, 0, 1), 1), euclid_acf.half_space_field((0, 0, 1), -1)
    )
    rows = [_rel(10, f"Phi(x3+, x3-) at r={r}", euclid_acf.phi_functional(pair, r), math.pi**2, 1e-3) for r in (0.5, 1.0)]
    rows.append(_abs(10, "phi_log_derivative", euclid_acf.phi_log_derivative(pair), 0.0, 2e-3))
    return rows


def criterion_11():
    lams = (sl_eigen(PhiInterval(0.0, math.pi / 2)).lam, sl_eigen(PhiInterval(math.pi / 2, math.pi)).lam)
    rep = heis_mono.lower_bound_check(heis_mono.t_pair(), lams)
    return [
        _abs(11, "lower bound (t+, t-): left", rep.left, 8.0, 2e-3),
        _abs(11, "lower bound (t+, t-): right", rep.right, 8.0, 2e-3),
        CheckRow(11, "lower bound holds", rep.left - rep.right, 0.0, 2e-3, bool(rep.passed)),
    ]


def criterion_12():
    rng = np.random.default_rng(SEED + 12)
    _, P = random_off_axis(10**4, rng, rho=(0.1, 2.0), margin=1e-3)
    rows = []
    for expr in POLYNOMIAL_FIELDS:
        s = SymbolicField(expr)
        u = s.hfield()
        radial, angular = gradient_split(u, P)
        full = np.sum(u.grad(P) ** 2, axis=-1)
        rows.append(_max_rel(12, f"split sum for {expr}", radial + angular, full, 1e-10, 1e-12))
    return rows


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
    12: criterion_12,
}


def run(criteria=None):
    rows = []
    for k in criteria or sorted(CRITERIA):
        rows.extend(CRITERIA[k]())
    return rows


def format_table(rows) -> str:
    lines = [f"{'crit':>4}  {'result':6}  {'measured':>23}  {'expected':>23}  {'tol':>8}  check"]
    for r in rows:
        lines.append(
            f"{r.criterion:>4}  {'PASS' if r.passed else 'FAIL':6}  {r.measured:>23.16g}  {r.expected:>23.16g}  {r.tolerance:>8.1g}  {r.check}"
        )
    return "\n".join(lines)
