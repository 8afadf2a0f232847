"""Extension symbols: named non-rational functions with declared derivatives.

An extension symbol such as ``s`` standing for sin(y) is an ordinary ring
variable whose partial derivatives are given rational functions (``ds/dy = c``)
and which may obey polynomial rewrite relations (``s^2 -> 1 - c^2``). The
registry is process-global; the parser declares into it and tests reset it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping

if TYPE_CHECKING:
    from .rational import RationalFunction


class ExtensionError(ValueError):
    pass


@dataclass(frozen=True)
class ExtensionSymbol:
    name: str
    derivatives: Mapping[str, "RationalFunction"] = field(default_factory=dict)


@dataclass(frozen=True)
class Relation:
    """Rewrite rule ``prod(sym**lead[sym]) -> replacement``."""

    lead: Mapping[str, int]
    replacement: "RationalFunction"

    def __str__(self):
        head = "*".join(f"{n}^{e}" if e > 1 else n for n, e in self.lead.items())
        return f"{head} -> {self.replacement}"


_SYMBOLS: dict[str, ExtensionSymbol] = {}
_ORDER: list[str] = []
_RELATIONS: list[Relation] = []


def get(name: str) -> ExtensionSymbol | None:
    return _SYMBOLS.get(name)


def names() -> tuple[str, ...]:
    return tuple(_ORDER)


def relations() -> tuple[Relation, ...]:
    return tuple(_RELATIONS)


def clear() -> None:
    _SYMBOLS.clear()
    _ORDER.clear()
    _RELATIONS.clear()


def declare(name: str, derivatives: Mapping[str, "RationalFunction"]) -> ExtensionSymbol:
    """Declare (or redeclare) an extension symbol.

    Earlier declarations rank higher in the relation term order, so with
    ``s`` declared before ``c`` the relation ``s^2 + c^2 = 1`` rewrites ``s^2``.
    """
    from .rational import RationalFunction

    if name in ("x", "y", "z") or name.startswith("y'"):
        raise ExtensionError(f"cannot declare coordinate {name!r} as an extension symbol")
    sym = ExtensionSymbol(name, {v: RationalFunction.coerce(d) for v, d in derivatives.items()})
    if name not in _SYMBOLS:
        _ORDER.append(name)
    _SYMBOLS[name] = sym
    return sym


def _rank(name: str) -> int:
    return len(_ORDER) - _ORDER.index(name)


def declare_relation(lhs: "RationalFunction", rhs: "RationalFunction" = 0) -> Relation:
    """Turn ``lhs = rhs`` into a rewrite rule on its leading extension monomial.

    The leading monomial is the largest pure extension-symbol monomial under
    graded order with earlier-declared symbols ranking higher; its coefficient
    must be a nonzero rational constant.
    """
    from .rational import RationalFunction, differentiate, to_fraction

    poly = RationalFunction.coerce(lhs) - RationalFunction.coerce(rhs)
    if not poly.is_polynomial():
        raise ExtensionError("relations must be polynomial")
    names_ = poly.names
    best = None
    for m, c in poly.num.items():
        lead = {n: e for n, e in zip(names_, m) if e}
        if not lead or any(n not in _SYMBOLS for n in lead):
            continue
        key = (sum(lead.values()), sorted(((_rank(n), e) for n, e in lead.items()), reverse=True))
        if best is None or key > best[0]:
            best = (key, lead, to_fraction(c))
    if best is None:
        raise ExtensionError("relation has no pure extension-symbol term")
    _, lead, coeff = best
    head = RationalFunction.monomial(lead, coeff)
    replacement = (head - poly) / coeff
    if replacement.variables() & set(lead) and any(
        all(t.get(n, 0) >= e for n, e in lead.items()) for t, _ in replacement.terms()
    ):
        raise ExtensionError("relation is not strictly reducing")
    rel = Relation(dict(lead), replacement)
    _RELATIONS.append(rel)
    # consistency with the declared derivatives
    for v in ("x", "y"):
        if not differentiate(poly, v).is_zero():
            _RELATIONS.pop()
            raise ExtensionError(f"relation {rel} is inconsistent with declared d/d{v}")
    return rel
