"""Canonical text for rational functions.

Terms are printed in ascending graded-lex order with x < y < everything else.
A fraction is scaled so that all coefficients are coprime integers and the
denominator's leading term is positive.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import TYPE_CHECKING, Mapping

if TYPE_CHECKING:
    from .rational import RationalFunction


def monomial_key(exps: Mapping[str, int]):
    """Graded lex key; variables ranked by the global variable order."""
    from .rational import var_key

    ranked = sorted(exps.items(), key=lambda kv: var_key(kv[0]), reverse=True)
    return (sum(exps.values()), tuple((var_key(n), e) for n, e in ranked if e))


def format_monomial(exps: Mapping[str, int]) -> str:
    from .rational import var_key

    parts = []
    for n in sorted(exps, key=var_key):
        e = exps[n]
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _term(exps, c: Fraction) -> str:
    mono = format_monomial(exps)
    if not mono:
        return format_fraction(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{format_fraction(c)}*{mono}"


def sorted_terms(terms):
    return sorted(terms, key=lambda t: monomial_key(t[0]))


def format_terms(terms) -> str:
    terms = sorted_terms(terms)
    if not terms:
        return "0"
    out = _term(*terms[0])
    for exps, c in terms[1:]:
        out += f" - {_term(exps, -c)}" if c < 0 else f" + {_term(exps, c)}"
    return out


def integer_parts(f: "RationalFunction"):
    """Numerator and denominator terms scaled to coprime integer coefficients."""
    num, den = f.terms("num"), f.terms("den")
    scale = Fraction(lcm(*(c.denominator for _, c in num + den)))
    g = gcd(*(int(c * scale) for _, c in num + den))
    scale /= g
    lead = max(den, key=lambda t: monomial_key(t[0]))
    if lead[1] < 0:
        scale = -scale
    num = [(e, c * scale) for e, c in num]
    den = [(e, c * scale) for e, c in den]
    return num, den


def leading_sign(f: "RationalFunction") -> int:
    """Sign of the first printed numerator coefficient (0 for zero)."""
    if f.is_zero():
        return 0
    num, _ = integer_parts(f)
    return 1 if sorted_terms(num)[0][1] > 0 else -1


def format_rf(f: "RationalFunction") -> str:
    if f.is_zero():
        return "0"
    num, den = integer_parts(f)
    top = format_terms(num)
    if len(den) == 1 and not den[0][0]:
        c = den[0][1]
        if c == 1:
            return top
        return f"({top})/{c}" if len(num) > 1 else f"{top}/{c}"
    bottom = format_terms(den)
    if len(num) > 1:
        top = f"({top})"
    exps, c = den[0]
    if len(den) > 1 or c != 1 or len([e for e in exps.values() if e]) > 1:
        bottom = f"({bottom})"
    return f"{top}/{bottom}"
