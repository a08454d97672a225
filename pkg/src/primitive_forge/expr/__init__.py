"""
Expression language for the integrand f.

Parses text such as "exp(x)*cos(x)" into an immutable AST and evaluates it
element-wise over numpy arrays.
"""

from .evaluator import evaluate
from .nodes import Expression, to_canonical
from .parser import parse

__all__ = ["Expression", "evaluate", "parse", "to_canonical"]
