"""Symbolic horizontal calculus on H^1 (sympy), lambdified to numpy.

Serves as a route independent of the hand-derived polar formulas: every
derivative here is produced by sympy from the Cartesian expression.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
import sympy as sp

x, y, t = sp.symbols("x y t", real=True)

RHO = ((x**2 + y**2) ** 2 + t**2) ** sp.Rational(1, 4)
PHI = sp.acos(t / RHO**2)
THETA = sp.atan2(y, x)


def X(e):
    return sp.diff(e, x) + 2 * y * sp.diff(e, t)


def Y(e):
    return sp.diff(e, y) - 2 * x * sp.diff(e, t)


class SymbolicField:
    """Value, horizontal gradient and sublaplacian of a sympy expression in (x, y, t)."""

    def __init__(self, expr):
        self.expr = sp.sympify(expr)
        args = (x, y, t)
        self._value = sp.lambdify(args, self.expr, "numpy")
        self._X = sp.lambdify(args, X(self.expr), "numpy")
        self._Y = sp.lambdify(args, Y(self.expr), "numpy")
        self._sub = sp.lambdify(args, X(X(self.expr)) + Y(Y(self.expr)), "numpy")

    @staticmethod
    def _b(f, *a):
        return np.broadcast_to(np.asarray(f(*a), dtype=float), np.broadcast(*a).shape).copy()

    def value(self, x_, y_, t_):
        return self._b(self._value, x_, y_, t_)

    def gradient(self, x_, y_, t_):
        return np.stack([self._b(self._X, x_, y_, t_), self._b(self._Y, x_, y_, t_)], axis=-1)

    def sublaplacian(self, x_, y_, t_):
        return self._b(self._sub, x_, y_, t_)

    def hfield(self, name=None):
        from .heisenberg import HField

        return HField(
            lambda a, b, c: self.value(a[..., 0], b[..., 0], c),
            1,
            lambda a, b, c: self.gradient(a[..., 0], b[..., 0], c),
            lambda a, b, c: self.sublaplacian(a[..., 0], b[..., 0], c),
            name=name or str(self.expr),
        )


@lru_cache(maxsize=None)
def polar_coordinate_fields():
    """SymbolicField objects for rho, phi and theta."""
    return SymbolicField(RHO), SymbolicField(PHI), SymbolicField(THETA)


POLYNOMIAL_FIELDS = (
    "x**2*y - t",
    "t**2 + x*y",
    "x**3 - 3*x*y**2 + t*x",
    "(x**2 + y**2)**2 - t**2 + y",
    "t*y + x**4 - 2*x*t",
)
