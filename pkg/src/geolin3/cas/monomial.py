"""Laurent monomials used as ansatz generators."""

from __future__ import annotations

from dataclasses import dataclass

from .printing import format_monomial, monomial_key
from .rational import RationalFunction


@dataclass(frozen=True)
class Monomial:
    """Product of variables with signed exponents; zero exponents are dropped."""

    exponents: tuple[tuple[str, int], ...]

    @classmethod
    def of(cls, **exps: int) -> "Monomial":
        return cls(tuple(sorted((n, e) for n, e in exps.items() if e)))

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def as_dict(self) -> dict[str, int]:
        return dict(self.exponents)

    def key(self):
        return monomial_key(self.as_dict())

    def __lt__(self, other: "Monomial") -> bool:
        return self.key() < other.key()

    def to_rf(self, coeff=1) -> RationalFunction:
        return RationalFunction.monomial(self.as_dict(), coeff)

    def __str__(self):
        pos = {n: e for n, e in self.exponents if e > 0}
        neg = {n: -e for n, e in self.exponents if e < 0}
        top = format_monomial(pos) or "1"
        if not neg:
            return top
        bottom = format_monomial(neg)
        return f"{top}/({bottom})" if len(neg) > 1 or max(neg.values()) < 0 else f"{top}/{bottom}"
