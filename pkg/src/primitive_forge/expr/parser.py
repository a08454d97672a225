"""
Tokenizer and recursive-descent parser for the expression grammar.

Grammar (lowest to highest precedence)::

    expression := term (("+" | "-") term)*
    term       := unary (("*" | "/") unary)*
    unary      := "-" unary | power
    power      := primary ("^" unary)?
    primary    := NUMBER | "pi" | "e" | "x" | FUNC "(" expression ")" | "(" expression ")"

"^" is right-associative and binds tighter than unary minus, so "-x^2" is
-(x^2) while "2^-x" is 2^(-x).
"""

import logging
import math
import re
from dataclasses import dataclass
from typing import List, Union

from ..errors import ExpressionSyntaxError, UnknownIdentifierError
from .nodes import (
    CONSTANTS,
    FUNCTIONS,
    VARIABLE,
    BinaryOp,
    Call,
    Constant,
    Expression,
    Literal,
    Negate,
    Node,
    Variable,
)

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^])
  | (?P<lparen>\()
  | (?P<rparen>\))
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int  # UTF-8 byte offset into the source


def tokenize(text: str) -> List[Token]:
    """Split text into tokens, ending with an 'end' token."""
    tokens: List[Token] = []
    pos = 0
    byte_pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ExpressionSyntaxError(
                f"unexpected character {text[pos]!r}",
                offset=byte_pos,
                expected="a number, name, operator or parenthesis",
            )
        kind = match.lastgroup or ""
        lexeme = match.group()
        if kind != "ws":
            tokens.append(Token(kind=kind, text=lexeme, offset=byte_pos))
        byte_pos += len(lexeme.encode("utf-8"))
        pos = match.end()
    tokens.append(Token(kind="end", text="", offset=byte_pos))
    return tokens


class _Parser:
    """Single-use parser over a token list."""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        if token.kind != "end":
            self.index += 1
        return token

    def _expect(self, kind: str, expected: str) -> Token:
        token = self.current
        if token.kind != kind:
            found = repr(token.text) if token.text else "end of input"
            raise ExpressionSyntaxError(
                f"unexpected {found}", offset=token.offset, expected=expected
            )
        return self._advance()

    def parse(self) -> Node:
        node = self._expression()
        self._expect("end", "an operator or end of input")
        return node

    def _expression(self) -> Node:
        node = self._term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self._advance().text
            node = BinaryOp(op, node, self._term())
        return node

    def _term(self) -> Node:
        node = self._unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self._advance().text
            node = BinaryOp(op, node, self._unary())
        return node

    def _unary(self) -> Node:
        if self.current.kind == "op" and self.current.text == "-":
            self._advance()
            return Negate(self._unary())
        return self._power()

    def _power(self) -> Node:
        base = self._primary()
        if self.current.kind == "op" and self.current.text == "^":
            self._advance()
            return BinaryOp("^", base, self._unary())
        return base

    def _primary(self) -> Node:
        token = self.current
        if token.kind == "number":
            self._advance()
            value = float(token.text)
            if not math.isfinite(value):
                raise ExpressionSyntaxError(
                    f"numeric literal {token.text!r} out of range",
                    offset=token.offset,
                    expected="a finite number",
                )
            return Literal(value)
        if token.kind == "name":
            return self._name()
        if token.kind == "lparen":
            self._advance()
            node = self._expression()
            self._expect("rparen", "')'")
            return node
        found = repr(token.text) if token.text else "end of input"
        raise ExpressionSyntaxError(
            f"unexpected {found}",
            offset=token.offset,
            expected="a number, 'x', a constant, a function or '('",
        )

    def _name(self) -> Node:
        token = self._advance()
        name = token.text
        if name == VARIABLE:
            return Variable()
        if name in CONSTANTS:
            return Constant(name)
        if name in FUNCTIONS:
            self._expect("lparen", f"'(' after {name}")
            arg = self._expression()
            self._expect("rparen", "')'")
            return Call(name, arg)
        raise UnknownIdentifierError(name, token.offset)


def parse(text: Union[str, bytes]) -> Expression:
    """
    Parse expression text into an Expression.

    Args:
        text: Expression source, as str or UTF-8 bytes

    Returns:
        Parsed, immutable Expression

    Raises:
        ExpressionSyntaxError: On malformed input, with byte offset and hint
        UnknownIdentifierError: For names outside the grammar
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ExpressionSyntaxError(
                "invalid UTF-8", offset=e.start, expected="UTF-8 text"
            ) from e

    root = _Parser(tokenize(text)).parse()
    logger.debug(f"Parsed expression {text!r}")
    return Expression(root=root, source=text)
