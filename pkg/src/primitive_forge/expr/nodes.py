"""
AST node types for the expression grammar.

Nodes are frozen dataclasses: structural equality comes for free and a parsed
expression can be shared between threads without copying.
"""

from dataclasses import dataclass
from typing import Union

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "abs")
CONSTANTS = ("pi", "e")
BINARY_OPERATORS = ("+", "-", "*", "/", "^")
VARIABLE = "x"


@dataclass(frozen=True)
class Literal:
    """Numeric literal. Always non-negative; a leading minus parses as Negate."""
    value: float


@dataclass(frozen=True)
class Constant:
    name: str


@dataclass(frozen=True)
class Variable:
    name: str = VARIABLE


@dataclass(frozen=True)
class Negate:
    operand: "Node"


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Literal, Constant, Variable, Negate, BinaryOp, Call]


@dataclass(frozen=True)
class Expression:
    """A parsed expression for f together with the text it came from."""
    root: Node
    source: str

    def __str__(self) -> str:
        return to_canonical(self.root)

    def __call__(self, x):  # type: ignore[no-untyped-def]
        from .evaluator import evaluate

        return evaluate(self, x)


def to_canonical(node: Node) -> str:
    """
    Print a node as fully parenthesized infix.

    Literals use the shortest round-trip decimal, so parsing the output yields
    a structurally identical tree.
    """
    if isinstance(node, Literal):
        return repr(float(node.value))
    if isinstance(node, (Constant, Variable)):
        return node.name
    if isinstance(node, Negate):
        return f"(-{to_canonical(node.operand)})"
    if isinstance(node, BinaryOp):
        return f"({to_canonical(node.left)} {node.op} {to_canonical(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({to_canonical(node.arg)})"
    raise TypeError(f"Not an expression node: {node!r}")
