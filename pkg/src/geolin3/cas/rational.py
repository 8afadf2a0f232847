"""Canonical rational functions over QQ.

Numerator and denominator are sparse polynomials (sympy ``PolyElement`` over
QQ) living in a ring whose generators are the union of the variables the value
mentions. Every constructor and operation returns a reduced fraction whose
denominator has positive leading coefficient, with numerator and denominator
also reduced modulo any declared extension-symbol relations. Values are
immutable.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm
from numbers import Rational
from typing import Iterable, Mapping

from flint import fmpz_mpoly_ctx
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyRing

from . import extensions

COORDINATES = ("x", "y", "z")


class PoleError(ZeroDivisionError):
    """Evaluation hit a zero of the denominator."""


def var_key(name: str):
    """Global variable order: x < y < z < derivative symbols < everything else."""
    if name in COORDINATES:
        return (0, COORDINATES.index(name), "")
    if name.startswith("y'"):
        return (1, len(name), "")
    return (2, 0, name)


@lru_cache(maxsize=None)
def _ring(names: tuple[str, ...]) -> PolyRing:
    return PolyRing(names, QQ)


def _ring_for(names: Iterable[str]) -> PolyRing:
    return _ring(tuple(sorted(set(names), key=var_key)))


@lru_cache(maxsize=None)
def _names(ring: PolyRing) -> tuple[str, ...]:
    return tuple(str(s) for s in ring.symbols)


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _qq(value) -> object:
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Rational):
        return QQ(int(value.numerator), int(value.denominator))
    raise TypeError(f"not an exact rational: {value!r}")


def _reduce_relations(p):
    """Rewrite ``p`` with the declared relations until no term is reducible."""
    rels = extensions.relations()
    if not rels:
        return p
    names = _names(p.ring)
    active = []
    for rel in rels:
        if all(n in names for n in rel.lead):
            lead = tuple(rel.lead.get(n, 0) for n in names)
            rep = rel.replacement.num.set_ring(p.ring)
            active.append((lead, rep))
    if not active:
        return p
    ring = p.ring
    for _ in range(10_000):
        changed = False
        for lead, rep in active:
            hits = [(m, c) for m, c in p.items() if all(a >= b for a, b in zip(m, lead))]
            if not hits:
                continue
            changed = True
            for m, c in hits:
                quot = tuple(a - b for a, b in zip(m, lead))
                p = p - ring({m: c}) + rep.mul_term((quot, c))
        if not changed:
            return p
    raise RuntimeError("extension relations do not terminate")


def _needs_relations(ring: PolyRing) -> bool:
    rels = extensions.relations()
    if not rels:
        return False
    names = set(_names(ring))
    return any(set(rel.lead) <= names for rel in rels)


class RationalFunction:
    """A reduced fraction ``num/den`` of polynomials over QQ."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _canonical: bool = False):
        if den is None:
            den = num.ring.one
        if den.ring is not num.ring:
            ring = _ring_for(_names(num.ring) + _names(den.ring))
            num, den = num.set_ring(ring), den.set_ring(ring)
        if not den:
            raise ZeroDivisionError("denominator is the zero polynomial")
        if not _canonical:
            if _needs_relations(num.ring):
                ring = _ring_for(_names(num.ring) + _relation_names(num.ring))
                num, den = num.set_ring(ring), den.set_ring(ring)
                num, den = _reduce_relations(num), _reduce_relations(den)
                if not den:
                    raise ZeroDivisionError("denominator reduces to zero modulo relations")
            if not num:
                den = num.ring.one
            elif len(den) == 1:
                num, den = _monomial_cancel(num, den)
            else:
                g = _gcd(num, den)
                num, den = _content_normalized(_exquo(num, g), _exquo(den, g))
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, key, value):
        raise AttributeError("RationalFunction is immutable")

    # construction -------------------------------------------------------

    @classmethod
    def const(cls, value) -> "RationalFunction":
        ring = _ring(())
        q = to_fraction(_qq(value))
        return cls(ring(q.numerator), ring(q.denominator), _canonical=True)

    @classmethod
    def var(cls, name: str) -> "RationalFunction":
        ring = _ring((name,))
        return cls(ring.gens[0], ring.one, _canonical=True)

    @classmethod
    def monomial(cls, exponents: Mapping[str, int], coeff=1) -> "RationalFunction":
        """Laurent monomial; negative exponents go to the denominator."""
        names = tuple(sorted((n for n, e in exponents.items() if e), key=var_key))
        ring = _ring(names)
        top = tuple(max(exponents[n], 0) for n in names)
        bot = tuple(max(-exponents[n], 0) for n in names)
        return cls(ring({top: _qq(coeff)}), ring({bot: QQ(1)}))

    @classmethod
    def coerce(cls, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        return cls.const(value)

    # inspection ---------------------------------------------------------

    @property
    def names(self) -> tuple[str, ...]:
        return _names(self.num.ring)

    def variables(self) -> frozenset[str]:
        """Names the value actually depends on."""
        used = set()
        names = self.names
        for poly in (self.num, self.den):
            for m in poly.itermonoms():
                used.update(n for n, e in zip(names, m) if e)
        return frozenset(used)

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return not self.variables()

    def is_polynomial(self) -> bool:
        return self.den.is_ground

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return to_fraction(self.num.LC) / to_fraction(self.den.LC) if self.num else Fraction(0)

    def numerator(self) -> "RationalFunction":
        return RationalFunction(self.num, _canonical=True)

    def denominator(self) -> "RationalFunction":
        return RationalFunction(self.den, _canonical=True)

    def terms(self, which: str = "num") -> list[tuple[dict[str, int], Fraction]]:
        """Terms of the numerator (or denominator) as (exponent map, coefficient)."""
        poly = self.num if which == "num" else self.den
        names = self.names
        out = []
        for m, c in poly.items():
            out.append(({n: e for n, e in zip(names, m) if e}, to_fraction(c)))
        return out

    # arithmetic ---------------------------------------------------------

    def _pair(self, other):
        other = RationalFunction.coerce(other)
        if self.num.ring is other.num.ring:
            return self.num, self.den, other.num, other.den
        ring = _ring_for(self.names + other.names)
        return (self.num.set_ring(ring), self.den.set_ring(ring),
                other.num.set_ring(ring), other.den.set_ring(ring))

    def __add__(self, other):
        try:
            a, b, c, d = self._pair(other)
        except TypeError:
            return NotImplemented
        if _needs_relations(a.ring):
            if b == d:
                return RationalFunction(a + c, b)
            return RationalFunction(a * d + b * c, b * d)
        return _henrici_add(a, b, c, d)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        try:
            a, b, c, d = self._pair(other)
        except TypeError:
            return NotImplemented
        if _needs_relations(a.ring):
            if b == d:
                return RationalFunction(a - c, b)
            return RationalFunction(a * d - b * c, b * d)
        return _henrici_add(a, b, -c, d)

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        try:
            a, b, c, d = self._pair(other)
        except TypeError:
            return NotImplemented
        if _needs_relations(a.ring):
            return RationalFunction(a * c, b * d)
        return _henrici_mul(a, b, c, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            a, b, c, d = self._pair(other)
        except TypeError:
            return NotImplemented
        if not c:
            raise ZeroDivisionError("division by the zero function")
        if _needs_relations(a.ring):
            return RationalFunction(a * d, b * c)
        return _henrici_mul(a, b, d, c)

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer exponents are supported")
        if k < 0 and not self.num:
            raise ZeroDivisionError("negative power of the zero function")
        top, bot = (self.num, self.den) if k >= 0 else (self.den, self.num)
        k = abs(k)
        if _needs_relations(top.ring):
            return RationalFunction(top ** k, bot ** k)
        # powers of coprime integer polynomials stay coprime
        return RationalFunction(*_content_normalized(top ** k, bot ** k), _canonical=True)

    def __eq__(self, other):
        try:
            a, b, c, d = self._pair(other)
        except TypeError:
            return NotImplemented
        if a == c and b == d:
            return True
        if _needs_relations(a.ring):
            return not (self - RationalFunction.coerce(other)).num
        return a * d == b * c

    def __hash__(self):
        return hash(str(self))

    def __bool__(self):
        return bool(self.num)

    def __str__(self):
        from .printing import format_rf

        return format_rf(self)

    def __repr__(self):
        return f"RationalFunction({self})"

    # calculus and evaluation -------------------------------------------

    def diff(self, v: str) -> "RationalFunction":
        return differentiate(self, v)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        return evaluate(self, point)

    def subs(self, mapping: Mapping[str, object]) -> "RationalFunction":
        """Substitute rational functions (or numbers) for variables."""
        mapping = {k: RationalFunction.coerce(v) for k, v in mapping.items()}
        return _subs_poly(self.num, mapping) / _subs_poly(self.den, mapping)


def _monomial_cancel(num, den):
    """Canonical form of num/den for a one-term den, without a polynomial gcd.

    Matches ``cancel``: integer coefficients, no common factor (content
    included), positive leading denominator coefficient.
    """
    ring = num.ring
    [(dm, dc)] = den.items()
    items = list(num.items())
    coeffs = [to_fraction(c) for _, c in items]
    L = lcm(*(c.denominator for c in coeffs))
    ints = [c.numerator * (L // c.denominator) for c in coeffs]
    G = gcd(*ints)
    scale = Fraction(G, L) / to_fraction(dc)
    shift = [min([dm[i]] + [m[i] for m, _ in items]) for i in range(ring.ngens)]
    a, b = scale.numerator, scale.denominator
    p = ring({tuple(e - d for e, d in zip(m, shift)): QQ(a * (n // G)) for (m, _), n in zip(items, ints)})
    q = ring({tuple(e - d for e, d in zip(dm, shift)): QQ(b)})
    return p, q


def _content(poly) -> tuple[int, int]:
    """Rational content of poly as (gcd of numerators, lcm of denominators)."""
    coeffs = poly.values()
    return gcd(*(int(c.numerator) for c in coeffs)), lcm(*(int(c.denominator) for c in coeffs))


def _content_normalized(p, q):
    """Scale p/q (already coprime up to constants) to the canonical integer form."""
    if not p:
        return p, q.ring.one
    gp, lp = _content(p)
    gq, lq = _content(q)
    if q.LC < 0:
        gq = -gq
    ratio = Fraction(gp * lq, lp * gq)
    return (p.mul_ground(QQ(lp * ratio.numerator, gp)),
            q.mul_ground(QQ(lq * ratio.denominator, gq)))


def _exquo(f, g):
    if g.is_ground:
        return f if g == 1 else f.quo_ground(g.LC)
    return f.exquo(g)


def _monomial_content(f):
    """Split f into its largest monomial factor (as exponents) and the cofactor."""
    monos = f.monoms()
    low = list(monos[0])
    for mono in monos[1:]:
        low = [min(e, k) for e, k in zip(low, mono)]
    if not any(low):
        return low, f
    return low, f.ring({tuple(e - k for e, k in zip(m, low)): c for m, c in f.items()})


_GCD_CACHE: dict = {}


def _flint_gcd(f, g):
    """Multivariate gcd through FLINT; the result is defined up to a constant."""
    ring = f.ring
    ctx = fmpz_mpoly_ctx.get(_names(ring), "lex")
    _, fz = f.clear_denoms()
    _, gz = g.clear_denoms()
    h = ctx.from_dict({m: int(c) for m, c in fz.items()}).gcd(
        ctx.from_dict({m: int(c) for m, c in gz.items()}))
    return ring({tuple(map(int, m)): QQ(int(c)) for m, c in h.to_dict().items()})


def _gcd(f, g):
    """gcd up to a constant factor, skipping the general algorithm where structure allows."""
    ring = f.ring
    if f.is_ground or g.is_ground:
        return ring.one
    if f == g:
        return f
    mf, pf = _monomial_content(f)
    mg, pg = _monomial_content(g)
    mono = ring({tuple(min(a, b) for a, b in zip(mf, mg)): ring.domain.one})
    if pf.is_ground or pg.is_ground:
        return mono
    if pf == pg:
        return mono * pf
    # equal polynomials in different rings compare equal, so the ring is part of the key
    key = (ring, pf, pg)
    hit = _GCD_CACHE.get(key)
    if hit is None:
        hit = _flint_gcd(pf, pg)
        if hit.is_ground:
            hit = ring.one
        if len(_GCD_CACHE) > 4096:
            _GCD_CACHE.clear()
        _GCD_CACHE[key] = hit
    return mono * hit


def _henrici_mul(a, b, c, d) -> "RationalFunction":
    """(a/b)(c/d) for canonical inputs, cancelling only across the pairs."""
    if not a or not c:
        return RationalFunction(a.ring.zero, a.ring.one, _canonical=True)
    g1, g2 = _gcd(a, d), _gcd(c, b)
    p = _exquo(a, g1) * _exquo(c, g2)
    q = _exquo(b, g2) * _exquo(d, g1)
    return RationalFunction(*_content_normalized(p, q), _canonical=True)


def _henrici_add(a, b, c, d) -> "RationalFunction":
    """a/b + c/d for canonical inputs; only the common part of b and d can cancel."""
    if not a:
        return RationalFunction(c, d) if c else RationalFunction(a, b, _canonical=True)
    if not c:
        return RationalFunction(a, b, _canonical=True)
    g = _gcd(b, d)
    if g.is_ground:
        return RationalFunction(*_content_normalized(a * d + b * c, b * d), _canonical=True)
    b1, d1 = b.exquo(g), d.exquo(g)
    t = a * d1 + c * b1
    if not t:
        return RationalFunction(t, a.ring.one, _canonical=True)
    g2 = _gcd(t, g)
    return RationalFunction(*_content_normalized(_exquo(t, g2), b1 * d1 * _exquo(g, g2)),
                            _canonical=True)


def _quotient_derivative(a, b, gen, scale) -> "RationalFunction":
    """scale * d(a/b)/d(gen) for canonical a/b.

    With g = gcd(b, b'), the numerator a'(b/g) - a(b'/g) is coprime to b/g,
    so only its common part with g can cancel.
    """
    db = b.diff(gen)
    if not db:
        t = a.diff(gen).mul_ground(scale)
        if not t:
            return RationalFunction(t, a.ring.one, _canonical=True)
        h = _gcd(t, b)
        return RationalFunction(*_content_normalized(_exquo(t, h), _exquo(b, h)), _canonical=True)
    g = _gcd(db, b)
    b1 = _exquo(b, g)
    t = (a.diff(gen) * b1 - a * _exquo(db, g)).mul_ground(scale)
    if not t:
        return RationalFunction(t, a.ring.one, _canonical=True)
    h = _gcd(t, g)
    return RationalFunction(*_content_normalized(_exquo(t, h), _exquo(g, h) * b1 * b1),
                            _canonical=True)


def _relation_names(ring) -> tuple[str, ...]:
    names = set(_names(ring))
    out = set()
    for rel in extensions.relations():
        if set(rel.lead) <= names:
            out |= rel.replacement.variables()
    return tuple(out)


def _subs_poly(poly, mapping) -> RationalFunction:
    names = _names(poly.ring)
    if not any(n in mapping for n in names):
        return RationalFunction(poly, _canonical=True)
    keep = tuple(n for n in names if n not in mapping)
    ring = _ring(keep)
    idx = [names.index(n) for n in keep]
    powers: dict[tuple[str, int], RationalFunction] = {}
    total = RationalFunction.const(0)
    for m, c in poly.items():
        base = ring({tuple(m[i] for i in idx): c})
        term = RationalFunction(base, _canonical=True)
        for n, e in zip(names, m):
            if e and n in mapping:
                key = (n, e)
                if key not in powers:
                    powers[key] = mapping[n] ** e
                term = term * powers[key]
        total = total + term
    return total


def const(value) -> RationalFunction:
    return RationalFunction.const(value)


def var(name: str) -> RationalFunction:
    return RationalFunction.var(name)


def is_zero(f: RationalFunction) -> bool:
    """Exact zero test; values are canonical so this is a numerator check."""
    return not RationalFunction.coerce(f).num


def _generator_derivative(name: str, v: str) -> RationalFunction | None:
    if name == v:
        return RationalFunction.const(1)
    ext = extensions.get(name)
    if ext is None:
        return None
    return ext.derivatives.get(v)


def differentiate(f: RationalFunction, v: str) -> RationalFunction:
    """Exact partial derivative with respect to ``v``.

    Coordinates other than ``v`` and undeclared symbols are treated as
    independent of ``v``; extension symbols use their declared derivatives.
    """
    f = RationalFunction.coerce(f)
    names = f.names
    chain = []
    for i, n in enumerate(names):
        dn = _generator_derivative(n, v)
        if dn is not None and dn:
            chain.append((i, dn))
    if not chain:
        return RationalFunction.const(0)
    num, den = f.num, f.den
    if len(chain) == 1 and chain[0][1].is_constant():
        i, dn = chain[0]
        scale = _qq(dn.to_fraction())
        if _needs_relations(num.ring):
            top = (num.diff(num.ring.gens[i]) * den - num * den.diff(den.ring.gens[i])) * scale
            return RationalFunction(top, den * den)
        return _quotient_derivative(num, den, num.ring.gens[i], scale)
    d_num = RationalFunction.const(0)
    d_den = RationalFunction.const(0)
    for i, dn in chain:
        gen = num.ring.gens[i]
        d_num = d_num + RationalFunction(num.diff(gen), _canonical=True) * dn
        d_den = d_den + RationalFunction(den.diff(gen), _canonical=True) * dn
    n_rf = RationalFunction(num, _canonical=True)
    d_rf = RationalFunction(den, _canonical=True)
    return (d_num * d_rf - n_rf * d_den) / (d_rf * d_rf)


def evaluate(f: RationalFunction, point: Mapping[str, object]) -> Fraction:
    """Exact value at a rational point; raises PoleError at a pole."""
    f = RationalFunction.coerce(f)
    missing = f.variables() - set(point)
    if missing:
        raise KeyError(f"point does not assign {sorted(missing)}")
    names = f.names
    vals = [Fraction(point[n]) if n in point else Fraction(0) for n in names]

    def ev(poly) -> Fraction:
        total = Fraction(0)
        for m, c in poly.items():
            t = to_fraction(c)
            for val, e in zip(vals, m):
                if e:
                    t *= val ** e
            total += t
        return total

    d = ev(f.den)
    if d == 0:
        raise PoleError(f"denominator of {f} vanishes at {dict(point)}")
    return ev(f.num) / d


def _sqrt_fraction(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def sqrt_poly(p):
    """Exact square root of a polynomial by leading-term matching, or None."""
    ring = p.ring
    if not p:
        return p
    lm, lc = p.LM, to_fraction(p.LC)
    if any(e % 2 for e in lm):
        return None
    root_lc = _sqrt_fraction(lc)
    if root_lc is None:
        return None
    degrees = [sum(m) for m in p.itermonoms()]
    # every term of a square root has degree in [min/2, max/2]
    lo, hi = min(degrees), max(degrees)
    head = tuple(e // 2 for e in lm)
    q = ring({head: _qq(root_lc)})
    r = p - q * q
    while r:
        t = tuple(a - b for a, b in zip(r.LM, head))
        if any(e < 0 for e in t) or not lo <= 2 * sum(t) <= hi or t >= head:
            return None
        q = q + ring({t: _qq(to_fraction(r.LC) / (2 * root_lc))})
        r = p - q * q
    return q


def sqrt_exact(f: RationalFunction) -> RationalFunction | None:
    """``r`` with ``r*r == f`` when numerator and denominator are perfect squares.

    The returned representative has a positive leading numerator coefficient in
    the printing order; the caller is responsible for trying ``-r``.
    """
    f = RationalFunction.coerce(f)
    if not f.num:
        return f
    # make the denominator's content a square by scaling both parts
    lc = to_fraction(f.den.LC)
    num, den = f.num * _qq(1 / lc), f.den * _qq(1 / lc)
    top, bot = sqrt_poly(num), sqrt_poly(den)
    if top is None or bot is None:
        return None
    r = RationalFunction(top, bot)
    from .printing import leading_sign

    return -r if leading_sign(r) < 0 else r
