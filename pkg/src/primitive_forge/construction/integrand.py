"""
Adapter turning the user's f into an array-in, array-out sampler.

f may be a parsed Expression (evaluated element-wise in one call) or any
Python callable. Every value handed back to the construction is finite; the
first non-finite or failing point raises DomainError naming that point.
"""

import logging
from typing import Any, Callable, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import DomainError
from ..expr import Expression, evaluate

logger = logging.getLogger(__name__)

Evaluable = Union[Expression, Callable[[Any], Any], "Integrand"]


class Integrand:
    """
    Evaluable function with evaluation counting and finiteness spot-checks.

    Args:
        func: Expression or callable f(x) -> real
        vectorized: Whether func accepts a numpy array and returns one of the
            same shape. Defaults to True for expressions, False for callables.
        name: Label used in log messages
    """

    def __init__(
        self,
        func: Evaluable,
        vectorized: Optional[bool] = None,
        name: Optional[str] = None,
    ):
        if isinstance(func, Integrand):
            vectorized = func.vectorized if vectorized is None else vectorized
            name = name or func.name
            func = func.func
        if isinstance(func, Expression):
            self.func: Callable[[Any], Any] = func
            self.vectorized = True if vectorized is None else vectorized
            self.name = name or str(func)
        elif callable(func):
            self.func = func
            self.vectorized = bool(vectorized)
            self.name = name or getattr(func, "__name__", repr(func))
        else:
            raise TypeError(f"f must be an Expression or a callable, got {type(func).__name__}")
        self.evaluations = 0

    def _call_vectorized(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        try:
            if isinstance(self.func, Expression):
                raw = evaluate(self.func, points)
            else:
                raw = self.func(points)
            values = np.asarray(raw, dtype=np.float64)
        except DomainError:
            raise
        except (ArithmeticError, ValueError, TypeError) as e:
            raise DomainError(f"evaluation of {self.name} failed: {e}") from e
        if values.shape != points.shape:
            values = np.broadcast_to(values, points.shape).copy()
        return values

    def _call_pointwise(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        values = np.empty_like(points)
        flat_in = points.reshape(-1)
        flat_out = values.reshape(-1)
        for i, x in enumerate(flat_in.tolist()):
            try:
                flat_out[i] = float(self.func(x))
            except DomainError:
                raise
            except (ArithmeticError, ValueError, TypeError) as e:
                raise DomainError(f"evaluation of {self.name} failed: {e}", point=x) from e
        return values

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        """Evaluate at every point of x; always returns a float64 array."""
        points = np.asarray(x, dtype=np.float64)
        with np.errstate(all="ignore"):
            if self.vectorized:
                values = self._call_vectorized(points)
            else:
                values = self._call_pointwise(points)
        self.evaluations += int(points.size)

        bad = ~np.isfinite(values)
        if bad.any():
            point = float(points.reshape(-1)[np.argmax(bad.reshape(-1))])
            raise DomainError(f"{self.name} is not finite", point=point)
        return values


def as_integrand(f: Evaluable, vectorized: Optional[bool] = None) -> Integrand:
    """Wrap f unless it already is an Integrand."""
    if isinstance(f, Integrand) and vectorized is None:
        return f
    return Integrand(f, vectorized=vectorized)
