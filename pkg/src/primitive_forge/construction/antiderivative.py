"""
Piecewise-quadratic antiderivative Phi of a piecewise-linear phi.

On member i, Phi(x) = A_i*x**2 + B_i*x + C_i with A_i = m_i/2 and B_i = b_i.
The first constant makes Phi(a) = 0; every later constant is stitched so that
Phi is continuous at a_i:

    C_0 = -(m_0/2)*a_0**2 - b_0*a_0
    C_i = Phi(a_i) - (m_i/2)*a_i**2 - b_i*a_i

Phi(a_i) is accumulated left to right with compensated summation of the
exact member integrals (d_i + d_{i+1})/2 * (a_{i+1} - a_i).
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Union, overload

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import ConfigurationError
from ..utils.summation import CompensatedSum, prefix_sums
from .interpolant import PiecewiseLinear
from .partition import DyadicPartition, build, locate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PiecewiseQuadratic:
    """Phi: per-member raw coefficients plus the stitched values Phi(a_i)."""

    partition: DyadicPartition
    a2: NDArray[np.float64]
    a1: NDArray[np.float64]
    a0: NDArray[np.float64]
    knot_values: NDArray[np.float64]

    @property
    def total(self) -> float:
        """Phi(b), the definite integral of phi over [a, b]."""
        return float(self.knot_values[-1])


def _trapezoids(values: NDArray[np.float64], knots: NDArray[np.float64]) -> NDArray[np.float64]:
    return 0.5 * (values[:-1] + values[1:]) * (knots[1:] - knots[:-1])


def integrate_pl(pl: PiecewiseLinear) -> PiecewiseQuadratic:
    """
    Build Phi with Phi(a) = 0 and Phi' = phi (materialized mode).

    Args:
        pl: Piecewise-linear phi

    Returns:
        PiecewiseQuadratic holding (A_i, B_i, C_i) for every member
    """
    knots = pl.knots
    left = knots[:-1]
    knot_values = prefix_sums(_trapezoids(pl.values, knots))

    a2 = 0.5 * pl.slopes
    a1 = pl.intercepts.copy()
    a0 = knot_values[:-1] - a2 * left**2 - a1 * left

    for array in (a2, a1, a0, knot_values):
        array.flags.writeable = False
    logger.debug(
        f"Integrated level {pl.partition.level}: Phi(b) = {knot_values[-1]!r}"
    )
    return PiecewiseQuadratic(
        partition=pl.partition, a2=a2, a1=a1, a0=a0, knot_values=knot_values
    )


class StreamingIntegral:
    """
    Left-to-right fold of Phi(a_i) that keeps only the running value.

    Feed consecutive blocks of (knots, values) that overlap by one knot, as
    produced by a block sweep over the partition.
    """

    def __init__(self) -> None:
        self._acc = CompensatedSum()

    def add_block(self, knots: NDArray[np.float64], values: NDArray[np.float64]) -> None:
        self._acc.extend(_trapezoids(values, knots).tolist())

    @property
    def value(self) -> float:
        return self._acc.value


def integrate_streaming(
    f_values: Iterable[tuple[NDArray[np.float64], NDArray[np.float64]]],
) -> float:
    """
    Phi(b) without materializing segments (streaming mode).

    Args:
        f_values: Iterable of (knots, values) blocks, consecutive blocks
            sharing their boundary knot

    Returns:
        Phi(b)
    """
    fold = StreamingIntegral()
    for knots, values in f_values:
        fold.add_block(knots, values)
    return fold.value


def _centered(pq: PiecewiseQuadratic, i: Any, points: NDArray[np.float64]) -> Any:
    p = pq.partition
    left = p.a + np.asarray(i, dtype=np.float64) * p.step
    t = points - left
    a2 = pq.a2[i]
    slope = 2.0 * a2 * left + pq.a1[i]
    return (a2 * t + slope) * t + pq.knot_values[i]


@overload
def eval_Phi(pq: PiecewiseQuadratic, x: float) -> float: ...


@overload
def eval_Phi(pq: PiecewiseQuadratic, x: NDArray[np.float64]) -> NDArray[np.float64]: ...


def eval_Phi(
    pq: PiecewiseQuadratic, x: Union[float, ArrayLike]
) -> Union[float, NDArray[np.float64]]:
    """
    Evaluate Phi at x in the centered form A_i*t**2 + (2*A_i*a_i + B_i)*t + Phi(a_i),
    t = x - a_i, which avoids cancellation when |x| is large against the member length.
    At every knot, b included, the result is the accumulated Phi(a_i) itself.

    Raises:
        OutOfDomainError: When x is outside [a, b]
    """
    points = np.asarray(x, dtype=np.float64)
    result = _centered(pq, locate(pq.partition, points), points)
    result = np.where(points == pq.partition.b, pq.knot_values[-1], result)
    if points.ndim == 0:
        return float(result)
    return np.asarray(result, dtype=np.float64)


@overload
def derivative_at(pq: PiecewiseQuadratic, x: float) -> float: ...


@overload
def derivative_at(pq: PiecewiseQuadratic, x: NDArray[np.float64]) -> NDArray[np.float64]: ...


def derivative_at(
    pq: PiecewiseQuadratic, x: Union[float, ArrayLike]
) -> Union[float, NDArray[np.float64]]:
    """
    Phi'(x) = 2*A_i*x + B_i; both sides agree at interior knots.

    Raises:
        OutOfDomainError: When x is outside [a, b]
    """
    points = np.asarray(x, dtype=np.float64)
    i = locate(pq.partition, points)
    result = 2.0 * pq.a2[i] * points + pq.a1[i]
    if points.ndim == 0:
        return float(result)
    return np.asarray(result, dtype=np.float64)


def to_segments(pq: PiecewiseQuadratic) -> List[Dict[str, float]]:
    """Raw-basis rows {lo, hi, a2, a1, a0, value_lo} for export."""
    knots = pq.partition.knots
    return [
        {"lo": lo, "hi": hi, "a2": a2, "a1": a1, "a0": a0, "value_lo": value}
        for lo, hi, a2, a1, a0, value in zip(
            knots[:-1].tolist(),
            knots[1:].tolist(),
            pq.a2.tolist(),
            pq.a1.tolist(),
            pq.a0.tolist(),
            pq.knot_values[:-1].tolist(),
        )
    ]


def from_segments(
    a: float, b: float, level: int, segments: List[Dict[str, float]], total: float
) -> PiecewiseQuadratic:
    """
    Rebuild Phi from exported rows.

    Knots are recomputed from (a, b, level) by the partition formula, so the
    result evaluates bit-identically to the exported object.

    Raises:
        ConfigurationError: If the rows do not match the partition
    """
    p = build(a, b, level, max_level=max(level, 1))
    if len(segments) != p.segments:
        raise ConfigurationError(
            f"Level {level} has {p.segments} segments, file has {len(segments)}"
        )
    knots = p.knots
    for i, row in enumerate(segments):
        if row["lo"] != knots[i] or row["hi"] != knots[i + 1]:
            raise ConfigurationError(f"Segment {i} bounds do not match level {level} knots")

    def column(key: str) -> NDArray[np.float64]:
        array = np.array([row[key] for row in segments], dtype=np.float64)
        array.flags.writeable = False
        return array

    knot_values = np.append(column("value_lo"), float(total))
    knot_values.flags.writeable = False
    return PiecewiseQuadratic(
        partition=p,
        a2=column("a2"),
        a1=column("a1"),
        a0=column("a0"),
        knot_values=knot_values,
    )
