"""
Primitive Forge - Antiderivatives of continuous functions with error certificates.

A continuous f on [a, b] is interpolated linearly on nested dyadic partitions,
the interpolant is integrated exactly into a piecewise-quadratic Phi_n, and
the partition is refined until the total oscillation of f bounds
|F - Phi_n| below the requested tolerance.
"""

__version__ = "1.0.0"

from .construction.antiderivative import PiecewiseQuadratic, derivative_at, eval_Phi
from .construction.oscillation import Rigor, RigorMode
from .engine import (
    ConvergenceCertificate,
    LevelRow,
    construct_antiderivative,
    convergence_table,
    definite_integral,
    error_bound_at,
)
from .errors import ForgeError
from .expr import Expression, parse

__all__ = [
    "ConvergenceCertificate",
    "Expression",
    "ForgeError",
    "LevelRow",
    "PiecewiseQuadratic",
    "Rigor",
    "RigorMode",
    "construct_antiderivative",
    "convergence_table",
    "definite_integral",
    "derivative_at",
    "error_bound_at",
    "eval_Phi",
    "parse",
]
