"""
Element-wise evaluation of parsed expressions.

evaluate() accepts a scalar or a numpy array of points. Every intermediate
result is checked: a sub-expression that leaves the reals or overflows raises
DomainError naming the first offending point, never returns nan or inf.
"""

import logging
from typing import Callable, Dict, Union, overload

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import DomainError
from .nodes import BinaryOp, Call, Constant, Expression, Literal, Negate, Node, Variable

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]

_CONSTANT_VALUES: Dict[str, float] = {"pi": float(np.pi), "e": float(np.e)}

_UNARY_FUNCTIONS: Dict[str, Callable[[FloatArray], FloatArray]] = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}


def _fail(reason: str, x: FloatArray, bad: NDArray[np.bool_]) -> DomainError:
    point = float(x[np.argmax(bad)]) if x.ndim else float(x)
    return DomainError(reason, point=point)


def _check_finite(result: FloatArray, x: FloatArray, what: str) -> FloatArray:
    bad = ~np.isfinite(result)
    if bad.any():
        raise _fail(f"{what} is not finite", x, np.broadcast_to(bad, x.shape))
    return result


def _eval(node: Node, x: FloatArray) -> FloatArray:
    if isinstance(node, Literal):
        return np.full_like(x, node.value)
    if isinstance(node, Constant):
        return np.full_like(x, _CONSTANT_VALUES[node.name])
    if isinstance(node, Variable):
        return x
    if isinstance(node, Negate):
        return -_eval(node.operand, x)
    if isinstance(node, Call):
        arg = _eval(node.arg, x)
        if node.func == "log" and (arg <= 0).any():
            raise _fail("log of non-positive value", x, arg <= 0)
        if node.func == "sqrt" and (arg < 0).any():
            raise _fail("sqrt of negative value", x, arg < 0)
        return _check_finite(_UNARY_FUNCTIONS[node.func](arg), x, f"{node.func}(...)")
    if isinstance(node, BinaryOp):
        left = _eval(node.left, x)
        right = _eval(node.right, x)
        if node.op == "+":
            result = left + right
        elif node.op == "-":
            result = left - right
        elif node.op == "*":
            result = left * right
        elif node.op == "/":
            if (right == 0).any():
                raise _fail("division by zero", x, right == 0)
            result = left / right
        else:
            fractional = (left < 0) & (right != np.floor(right))
            if fractional.any():
                raise _fail("negative base with non-integer exponent", x, fractional)
            zero_negative = (left == 0) & (right < 0)
            if zero_negative.any():
                raise _fail("zero raised to a negative power", x, zero_negative)
            result = np.power(left, right)
        return _check_finite(result, x, f"'{node.op}' result")
    raise TypeError(f"Not an expression node: {node!r}")


@overload
def evaluate(expr: Expression, x: float) -> float: ...


@overload
def evaluate(expr: Expression, x: FloatArray) -> FloatArray: ...


def evaluate(expr: Expression, x: Union[float, ArrayLike]) -> Union[float, FloatArray]:
    """
    Evaluate an expression at a point or element-wise over an array.

    Args:
        expr: Parsed expression
        x: Real point or array of points

    Returns:
        float for scalar input, float64 array of the same shape otherwise

    Raises:
        DomainError: When any sub-expression leaves the reals at some point
    """
    points = np.asarray(x, dtype=np.float64)
    with np.errstate(all="ignore"):
        result = _eval(expr.root, points)
    if points.ndim == 0:
        return float(result)
    return result
