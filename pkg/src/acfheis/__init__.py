"""Numerical toolkit for Alt-Caffarelli-Friedman type monotonicity formulas
in Euclidean space and in the first Heisenberg group."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ACFError,
    CharacteristicAxis,
    DegenerateField,
    InvalidArgument,
    Pole,
    SolverFailure,
    UnsupportedDimension,
)
