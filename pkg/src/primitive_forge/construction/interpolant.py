"""
Continuous piecewise-linear interpolant phi of f on a dyadic partition.

On member [a_i, a_{i+1}] phi(x) = m_i*x + b_i, with the chord through
(a_i, d_i) and (a_{i+1}, d_{i+1}). Slopes come from the knot values, so
continuity at the knots holds by construction.
"""

import logging
from dataclasses import dataclass
from typing import Union, overload

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import ConfigurationError, DomainError
from .integrand import Evaluable, as_integrand
from .partition import DyadicPartition, locate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PiecewiseLinear:
    """phi: knot values d_i and per-member (slope m_i, intercept b_i)."""

    partition: DyadicPartition
    values: NDArray[np.float64]
    slopes: NDArray[np.float64]
    intercepts: NDArray[np.float64]

    @property
    def knots(self) -> NDArray[np.float64]:
        return self.partition.knots


def from_values(p: DyadicPartition, values: ArrayLike) -> PiecewiseLinear:
    """
    Build phi from explicit data points (a_i, d_i).

    The values need not come from any particular f; interpolate() is the
    d_i = f(a_i) special case.

    Raises:
        ConfigurationError: If the number of values does not match the knots
            or a value is not finite
    """
    d = np.array(values, dtype=np.float64)
    if d.shape != (p.segments + 1,):
        raise ConfigurationError(
            f"Expected {p.segments + 1} knot values for level {p.level}, got shape {d.shape}"
        )
    if not np.all(np.isfinite(d)):
        raise ConfigurationError("Knot values must be finite")

    knots = p.knots
    slopes = (d[1:] - d[:-1]) / (knots[1:] - knots[:-1])
    intercepts = d[:-1] - slopes * knots[:-1]
    for array in (d, slopes, intercepts):
        array.flags.writeable = False
    return PiecewiseLinear(partition=p, values=d, slopes=slopes, intercepts=intercepts)


def interpolate(f: Evaluable, p: DyadicPartition) -> PiecewiseLinear:
    """
    Interpolate f at the knots of p.

    Args:
        f: Expression, callable or Integrand
        p: Dyadic partition

    Returns:
        phi with d_i = f(a_i)

    Raises:
        DomainError: If f fails at a knot; the message names the knot
    """
    integrand = as_integrand(f)
    try:
        values = integrand(p.knots)
    except DomainError as e:
        raise DomainError(f"cannot interpolate at knot: {e.reason}", point=e.point) from e
    logger.debug(f"Interpolated {integrand.name} on level {p.level} ({p.segments} members)")
    return from_values(p, values)


@overload
def eval_phi(pl: PiecewiseLinear, x: float) -> float: ...


@overload
def eval_phi(pl: PiecewiseLinear, x: NDArray[np.float64]) -> NDArray[np.float64]: ...


def eval_phi(
    pl: PiecewiseLinear, x: Union[float, ArrayLike]
) -> Union[float, NDArray[np.float64]]:
    """
    Evaluate phi at x (scalar or array).

    Computed as d_i + m_i*(x - a_i) and kept between d_i and d_{i+1}, which
    is where the exact chord lies; at every knot, b included, this returns
    the stored value exactly.

    Raises:
        OutOfDomainError: When x is outside [a, b]
    """
    points = np.asarray(x, dtype=np.float64)
    i = locate(pl.partition, points)
    p = pl.partition
    left = p.a + np.asarray(i, dtype=np.float64) * p.step
    d0 = pl.values[i]
    d1 = pl.values[np.asarray(i) + 1]
    result = d0 + pl.slopes[i] * (points - left)
    result = np.clip(result, np.minimum(d0, d1), np.maximum(d0, d1))
    result = np.where(points == p.b, pl.values[-1], result)
    if points.ndim == 0:
        return float(result)
    return result
