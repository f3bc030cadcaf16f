"""Arithmetic expressions over named variables.

Problem instances are written as plain text formulas (in config files and
catalog exports).  This module parses them into immutable ASTs and
evaluates them on floats or numpy arrays.  The grammar is a fixed
whitelist: numeric literals, the constant ``pi``, declared variables,
``+ - * / ^`` with conventional precedence (``^`` right-associative and
binding tighter than unary minus), and the functions
``abs sqrt exp log sin cos tan atan min max``.

There are deliberately no user-defined functions and no symbolic
manipulation; every expression is total and auditable.  ``^`` with a
negative base and a non-integer exponent is an evaluation error rather
than a NaN, so optimizers never see silent non-finite values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Expression",
    "Num",
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "ExpressionError",
    "ParseError",
    "EvaluationError",
    "parse",
    "evaluate",
    "to_string",
]

_UNARY_FUNCS = {
    "abs": np.absolute,
    "sqrt": np.sqrt,
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "atan": np.arctan,
}
_BINARY_FUNCS = {"min": np.minimum, "max": np.maximum}
_CONSTANTS = {"pi": math.pi}


class ExpressionError(ValueError):
    """Base class for malformed source text or invalid evaluation."""


class ParseError(ExpressionError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (column {position + 1})")
        self.position = position


class EvaluationError(ExpressionError):
    pass


class Expression:
    """Immutable AST node; use :func:`parse` to construct trees."""

    def variables(self) -> frozenset[str]:
        names: set[str] = set()
        _collect_vars(self, names)
        return frozenset(names)

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True)
class Num(Expression):
    value: float


@dataclass(frozen=True)
class Const(Expression):
    name: str


@dataclass(frozen=True)
class Var(Expression):
    name: str


@dataclass(frozen=True)
class Neg(Expression):
    operand: Expression


@dataclass(frozen=True)
class BinOp(Expression):
    op: str  # one of + - * / ^
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Call(Expression):
    func: str
    args: tuple[Expression, ...]


def _collect_vars(e: Expression, out: set[str]) -> None:
    if isinstance(e, Var):
        out.add(e.name)
    elif isinstance(e, Neg):
        _collect_vars(e.operand, out)
    elif isinstance(e, BinOp):
        _collect_vars(e.left, out)
        _collect_vars(e.right, out)
    elif isinstance(e, Call):
        for a in e.args:
            _collect_vars(a, out)


# ---------------------------------------------------------------------------
# Tokenizer


_TOK_NUM = "num"
_TOK_IDENT = "ident"
_TOK_OP = "op"
_TOK_LPAREN = "("
_TOK_RPAREN = ")"
_TOK_COMMA = ","
_TOK_END = "end"


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and src[i + 1].isdigit()):
            j = i
            while j < n and (src[j].isdigit() or src[j] == "."):
                j += 1
            if j < n and src[j] in "eE":
                k = j + 1
                if k < n and src[k] in "+-":
                    k += 1
                if k < n and src[k].isdigit():
                    j = k
                    while j < n and src[j].isdigit():
                        j += 1
            text = src[i:j]
            if text.count(".") > 1:
                raise ParseError(f"malformed number '{text}'", i)
            tokens.append((_TOK_NUM, text, i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append((_TOK_IDENT, src[i:j], i))
            i = j
            continue
        if ch in "+-*/^":
            tokens.append((_TOK_OP, ch, i))
        elif ch == "(":
            tokens.append((_TOK_LPAREN, ch, i))
        elif ch == ")":
            tokens.append((_TOK_RPAREN, ch, i))
        elif ch == ",":
            tokens.append((_TOK_COMMA, ch, i))
        else:
            raise ParseError(f"unexpected character '{ch}'", i)
        i += 1
    tokens.append((_TOK_END, "", n))
    return tokens


# ---------------------------------------------------------------------------
# Recursive-descent parser
#
# expression := term (('+'|'-') term)*          left-associative
# term       := unary (('*'|'/') unary)*        left-associative
# unary      := '-' unary | power
# power      := atom ('^' unary)?               right-associative
# atom       := NUMBER | IDENT | IDENT '(' expression (',' expression)* ')'
#             | '(' expression ')'


class _Parser:
    def __init__(self, tokens, variables):
        self.tokens = tokens
        self.pos = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind, what):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"expected {what}", tok[2])
        return self.advance()

    def expression(self) -> Expression:
        node = self.term()
        while self.peek()[0] == _TOK_OP and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expression:
        node = self.unary()
        while self.peek()[0] == _TOK_OP and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expression:
        tok = self.peek()
        if tok[0] == _TOK_OP and tok[1] == "-":
            self.advance()
            return Neg(self.unary())
        if tok[0] == _TOK_OP and tok[1] == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        if self.peek()[0] == _TOK_OP and self.peek()[1] == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expression:
        kind, text, pos = self.advance()
        if kind == _TOK_NUM:
            return Num(float(text))
        if kind == _TOK_LPAREN:
            node = self.expression()
            self.expect(_TOK_RPAREN, "')'")
            return node
        if kind == _TOK_IDENT:
            if self.peek()[0] == _TOK_LPAREN:
                return self.call(text, pos)
            if text in _UNARY_FUNCS or text in _BINARY_FUNCS:
                raise ParseError(f"function '{text}' requires parenthesized arguments", pos)
            if text in _CONSTANTS:
                return Const(text)
            if self.variables is not None and text not in self.variables:
                raise ParseError(f"unknown identifier '{text}'", pos)
            return Var(text)
        raise ParseError("expected a number, variable, function or '('", pos)

    def call(self, name: str, pos: int) -> Expression:
        if name not in _UNARY_FUNCS and name not in _BINARY_FUNCS:
            raise ParseError(f"unknown function '{name}'", pos)
        self.expect(_TOK_LPAREN, "'('")
        args = [self.expression()]
        while self.peek()[0] == _TOK_COMMA:
            self.advance()
            args.append(self.expression())
        self.expect(_TOK_RPAREN, "')'")
        want = 1 if name in _UNARY_FUNCS else 2
        if len(args) != want:
            raise ParseError(
                f"'{name}' expects {want} argument{'s' if want > 1 else ''}, got {len(args)}", pos
            )
        return Call(name, tuple(args))


def parse(source: str, variables=None) -> Expression:
    """Parse ``source`` into an :class:`Expression`.

    When ``variables`` is given, identifiers outside that collection (and
    outside the function/constant whitelist) are rejected.
    """
    if not isinstance(source, str) or not source.strip():
        raise ParseError("empty expression", 0)
    allowed = None if variables is None else frozenset(variables)
    parser = _Parser(_tokenize(source), allowed)
    node = parser.expression()
    kind, _, pos = parser.peek()
    if kind != _TOK_END:
        raise ParseError("unexpected trailing input", pos)
    return node


# ---------------------------------------------------------------------------
# Evaluation


def evaluate(e: Expression, bindings: dict):
    """Evaluate ``e`` with variables bound to floats or numpy arrays.

    Returns a float for scalar inputs, an ndarray otherwise.  Division by
    zero, log of a non-positive value, sqrt of a negative value and any
    non-finite intermediate raise :class:`EvaluationError`.
    """
    result = _eval(e, bindings)
    if not np.all(np.isfinite(result)):
        raise EvaluationError(f"non-finite result evaluating '{to_string(e)}'")
    if np.ndim(result) == 0:
        return float(result)
    return result


def _eval(e: Expression, b: dict):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Const):
        return _CONSTANTS[e.name]
    if isinstance(e, Var):
        try:
            return np.asarray(b[e.name], dtype=float)
        except KeyError:
            raise EvaluationError(f"unbound variable '{e.name}'") from None
    if isinstance(e, Neg):
        return -_eval(e.operand, b)
    if isinstance(e, BinOp):
        left = _eval(e.left, b)
        right = _eval(e.right, b)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if e.op == "/":
            if np.any(right == 0):
                raise EvaluationError("division by zero")
            return left / right
        if e.op == "^":
            return _power(left, right)
        raise EvaluationError(f"unknown operator '{e.op}'")
    if isinstance(e, Call):
        args = [_eval(a, b) for a in e.args]
        if e.func == "log" and np.any(args[0] <= 0):
            raise EvaluationError("log of a non-positive value")
        if e.func == "sqrt" and np.any(args[0] < 0):
            raise EvaluationError("sqrt of a negative value")
        fn = _UNARY_FUNCS.get(e.func) or _BINARY_FUNCS.get(e.func)
        return fn(*args)
    raise EvaluationError(f"cannot evaluate node {type(e).__name__}")


def _power(base, exponent):
    exp_arr = np.asarray(exponent, dtype=float)
    integral = np.all(np.floor(exp_arr) == exp_arr) and np.all(np.isfinite(exp_arr))
    if not integral and np.any(np.asarray(base) < 0):
        raise EvaluationError("negative base with non-integer exponent")
    with np.errstate(over="ignore", invalid="ignore"):
        return np.power(base, exponent)


# ---------------------------------------------------------------------------
# Pretty printer
#
# parse(to_string(parse(s))) == parse(s) for every accepted s.

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 9


def _is_negative_num(e: Expression) -> bool:
    return isinstance(e, Num) and math.copysign(1.0, e.value) < 0


def _prec(e: Expression) -> int:
    if isinstance(e, BinOp):
        if e.op in "+-":
            return _PREC_ADD
        if e.op in "*/":
            return _PREC_MUL
        return _PREC_POW
    if isinstance(e, Neg) or _is_negative_num(e):
        return _PREC_NEG
    return _PREC_ATOM


def to_string(e: Expression) -> str:
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, (Const, Var)):
        return e.name
    if isinstance(e, Neg):
        inner = to_string(e.operand)
        if _prec(e.operand) < _PREC_NEG or isinstance(e.operand, Neg) or _is_negative_num(e.operand):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, Call):
        return f"{e.func}({', '.join(to_string(a) for a in e.args)})"
    if isinstance(e, BinOp):
        p = _prec(e)
        left = to_string(e.left)
        right = to_string(e.right)
        if e.op == "^":
            if _prec(e.left) <= p:
                left = f"({left})"
            if _prec(e.right) < p:
                right = f"({right})"
            return f"{left}^{right}"
        if _prec(e.left) < p:
            left = f"({left})"
        if _prec(e.right) <= p:
            right = f"({right})"
        if e.op in "+-":
            return f"{left} {e.op} {right}"
        return f"{left}{e.op}{right}"
    raise TypeError(f"not an expression node: {e!r}")
