"""Expression trees produced by the parser and their normalization."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .rational import RationalFunction


class NormalizeError(ValueError):
    pass


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: "Expr"


Expr = Union[Num, Sym, Neg, BinOp, Pow]


def _int_exponent(e: "Expr") -> int:
    if isinstance(e, Num) and e.value.denominator == 1:
        return int(e.value)
    if isinstance(e, Neg):
        return -_int_exponent(e.operand)
    raise NormalizeError("exponents must be integer literals")


def normalize(expr: Expr, known: Callable[[str], bool] | None = None) -> RationalFunction:
    """Canonical rational function denoted by ``expr``.

    ``known`` filters identifiers; an identifier it rejects raises
    NormalizeError, as do division by zero and non-integer exponents.
    """
    if isinstance(expr, Num):
        return RationalFunction.const(expr.value)
    if isinstance(expr, Sym):
        if known is not None and not known(expr.name):
            raise NormalizeError(f"unknown identifier {expr.name!r}")
        return RationalFunction.var(expr.name)
    if isinstance(expr, Neg):
        return -normalize(expr.operand, known)
    if isinstance(expr, Pow):
        base = normalize(expr.base, known)
        k = _int_exponent(expr.exponent)
        if k < 0 and base.is_zero():
            raise NormalizeError("division by an identically zero expression")
        return base ** k
    if isinstance(expr, BinOp):
        a = normalize(expr.left, known)
        b = normalize(expr.right, known)
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        if expr.op == "*":
            return a * b
        if expr.op == "/":
            if b.is_zero():
                raise NormalizeError("division by an identically zero expression")
            return a / b
        raise NormalizeError(f"unknown operator {expr.op!r}")
    raise NormalizeError(f"not an expression: {expr!r}")
