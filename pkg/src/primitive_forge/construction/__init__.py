"""
Building blocks of the construction: dyadic partitions, the linear
interpolant phi_n, its exact antiderivative Phi_n, and oscillation estimates.
"""

from .antiderivative import PiecewiseQuadratic, integrate_pl, integrate_streaming
from .integrand import Integrand, as_integrand
from .interpolant import PiecewiseLinear, interpolate
from .oscillation import OscillationReport, RigorMode, total_oscillation
from .partition import DyadicPartition, build, locate, refine

__all__ = [
    "DyadicPartition",
    "Integrand",
    "OscillationReport",
    "PiecewiseLinear",
    "PiecewiseQuadratic",
    "RigorMode",
    "as_integrand",
    "build",
    "integrate_pl",
    "integrate_streaming",
    "interpolate",
    "locate",
    "refine",
    "total_oscillation",
]
