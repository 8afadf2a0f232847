"""Exact symbolic kernel: rational functions over QQ, extension symbols, linear algebra."""

from . import extensions
from .expr import BinOp, Neg, NormalizeError, Num, Pow, Sym, normalize
from .extensions import ExtensionError, ExtensionSymbol, Relation
from .linalg import (
    LinearSystem,
    ansatz_system,
    collect_rows,
    reduced_basis,
    solve_affine,
    solve_nullspace,
)
from .monomial import Monomial
from .printing import format_rf, leading_sign, monomial_key
from .rational import (
    PoleError,
    RationalFunction,
    const,
    differentiate,
    evaluate,
    is_zero,
    sqrt_exact,
    var,
)

RF = RationalFunction

__all__ = [
    "BinOp", "ExtensionError", "ExtensionSymbol", "LinearSystem", "Monomial", "Neg",
    "NormalizeError", "Num", "PoleError", "Pow", "RF", "RationalFunction", "Relation", "Sym",
    "ansatz_system", "collect_rows", "const", "differentiate", "evaluate", "extensions",
    "format_rf", "is_zero", "leading_sign", "monomial_key", "normalize", "reduced_basis", "solve_affine",
    "solve_nullspace", "sqrt_exact", "var",
]
