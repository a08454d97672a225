"""
Compensated (Kahan-Neumaier) summation.

Used for the running value of the antiderivative at the knots, where millions
of small trapezoid increments are added to a growing total.
"""

from typing import Iterable

import numpy as np
from numpy.typing import NDArray


class CompensatedSum:
    """
    Running sum that recycles the rounding error of every addition.

    Maintains a more accurate running sum than repeated += on a float: the
    low-order bits lost by each addition are kept in ``carry`` and folded back
    in when the total is read.
    """

    def __init__(self, start: float = 0.0):
        self.sum = float(start)
        self.carry = 0.0

    def add(self, value: float) -> None:
        total = self.sum + value
        if abs(self.sum) >= abs(value):
            self.carry += (self.sum - total) + value
        else:
            self.carry += (value - total) + self.sum
        self.sum = total

    def extend(self, values: Iterable[float]) -> None:
        for value in values:
            self.add(value)

    @property
    def value(self) -> float:
        return self.sum + self.carry


def prefix_sums(
    increments: NDArray[np.float64], start: float = 0.0, out_start: bool = True
) -> NDArray[np.float64]:
    """
    Compensated running totals of an array of increments.

    Args:
        increments: Values to accumulate, left to right
        start: Initial total
        out_start: Whether the result begins with ``start`` itself

    Returns:
        Array of length len(increments) + 1 (or len(increments) without the start)
    """
    acc = CompensatedSum(start)
    totals = np.empty(len(increments) + 1, dtype=np.float64)
    totals[0] = acc.value
    for i, inc in enumerate(increments.tolist(), start=1):
        acc.add(inc)
        totals[i] = acc.value
    return totals if out_start else totals[1:]
