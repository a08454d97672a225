"""
Regular dyadic partitions of a closed interval.

Level n splits [a, b] into 2**(n-1) equal members. Knots are always recomputed
from the closed formula a + i*(b - a)/2**(n-1) (never accumulated), so every
knot of level n is bit-identical to the matching knot of any finer level.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Union, overload

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import InvalidIntervalError, LevelOutOfRangeError, OutOfDomainError

logger = logging.getLogger(__name__)

DEFAULT_MAX_LEVEL = 24
ABSOLUTE_MAX_LEVEL = 30


@dataclass(frozen=True)
class DyadicPartition:
    """The partition P_n of [a, b] into 2**(n-1) members of equal length."""

    a: float
    b: float
    level: int
    max_level: int = DEFAULT_MAX_LEVEL

    @property
    def segments(self) -> int:
        """Number of members N = 2**(level-1)."""
        return 1 << (self.level - 1)

    @property
    def step(self) -> float:
        # Division by a power of two is exact, which keeps the grids nested.
        return (self.b - self.a) / self.segments

    def knot(self, i: int) -> float:
        if i == self.segments:
            return self.b
        return self.a + i * self.step

    def knot_range(self, first: int, last: int) -> NDArray[np.float64]:
        """Knots with indices first..last inclusive, without materializing the rest."""
        knots = self.a + np.arange(first, last + 1, dtype=np.float64) * self.step
        if last == self.segments:
            knots[-1] = self.b
        return knots

    @cached_property
    def knots(self) -> NDArray[np.float64]:
        """All N+1 knots; knots[0] == a and knots[N] == b exactly."""
        knots = self.knot_range(0, self.segments)
        knots.flags.writeable = False
        return knots

    def contains(self, x: ArrayLike) -> bool:
        points = np.asarray(x, dtype=np.float64)
        return bool(np.all((points >= self.a) & (points <= self.b)))


def _validate_interval(a: float, b: float) -> None:
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidIntervalError(f"Interval endpoints must be finite, got [{a}, {b}]")
    if not a < b:
        raise InvalidIntervalError(f"Interval must satisfy a < b, got [{a}, {b}]")
    if not math.isfinite(b - a):
        raise InvalidIntervalError(f"Interval [{a}, {b}] is too wide to represent")


def build(a: float, b: float, n: int, max_level: int = DEFAULT_MAX_LEVEL) -> DyadicPartition:
    """
    Build the regular dyadic partition P_n of [a, b].

    Args:
        a: Left endpoint
        b: Right endpoint
        n: Level, 1 <= n <= max_level
        max_level: Cap on the level (memory ceiling for materialized arrays)

    Returns:
        The partition with 2**(n-1) + 1 knots

    Raises:
        InvalidIntervalError: If a >= b or either endpoint is not finite
        LevelOutOfRangeError: If n is outside [1, max_level] or the knots
            would not be distinct in floating point
    """
    a, b = float(a), float(b)
    _validate_interval(a, b)
    if not 1 <= max_level <= ABSOLUTE_MAX_LEVEL:
        raise LevelOutOfRangeError(
            f"max_level must be in [1, {ABSOLUTE_MAX_LEVEL}], got {max_level}"
        )
    if not 1 <= n <= max_level:
        raise LevelOutOfRangeError(f"Level must be in [1, {max_level}], got {n}")

    partition = DyadicPartition(a=a, b=b, level=n, max_level=max_level)
    step = partition.step
    if not (a + step > a and b - step < b):
        raise LevelOutOfRangeError(
            f"Level {n} spacing {step!r} is below floating-point resolution on [{a}, {b}]"
        )
    return partition


def refine(p: DyadicPartition) -> DyadicPartition:
    """
    Return P_{n+1}: every knot of p is a knot of the result.

    Raises:
        LevelOutOfRangeError: If p is already at its max_level
    """
    if p.level >= p.max_level:
        raise LevelOutOfRangeError(
            f"Cannot refine level {p.level}: max_level is {p.max_level}"
        )
    return build(p.a, p.b, p.level + 1, max_level=p.max_level)


@overload
def locate(p: DyadicPartition, x: float) -> int: ...


@overload
def locate(p: DyadicPartition, x: NDArray[np.float64]) -> NDArray[np.int64]: ...


def locate(
    p: DyadicPartition, x: Union[float, ArrayLike]
) -> Union[int, NDArray[np.int64]]:
    """
    Index of the member containing x.

    Members are half-open [x_i, x_{i+1}) except the last, which is closed.
    The index comes from the uniform spacing in O(1) and is then nudged by
    one where rounding put it on the wrong side of a knot.

    Raises:
        OutOfDomainError: When x < a or x > b (or x is nan)
    """
    points = np.asarray(x, dtype=np.float64)
    inside = (points >= p.a) & (points <= p.b)
    if not np.all(inside):
        bad = points if points.ndim == 0 else points[~inside][0]
        raise OutOfDomainError(f"x={float(bad)!r} is outside [{p.a}, {p.b}]")

    last = p.segments - 1
    index = np.clip(np.floor((points - p.a) / p.step), 0, last).astype(np.int64)

    left = p.a + index * p.step
    index = np.where((points < left) & (index > 0), index - 1, index)
    right = np.where(index + 1 > last, p.b, p.a + (index + 1) * p.step)
    index = np.where((points >= right) & (index < last), index + 1, index)

    if points.ndim == 0:
        return int(index)
    return index
