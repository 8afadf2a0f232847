"""Exact linear algebra for ansatz systems.

Rows are sparse. Over QQ the elimination is fraction-free: rows are kept as
primitive integer vectors and combined as ``a*row - b*pivot``. When the
coefficients involve named constants (k, l, ...) the same elimination runs
over the field of rational functions in those constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from . import extensions
from .printing import monomial_key
from .rational import RationalFunction, _names, _reduce_relations, _ring_for, to_fraction


@dataclass
class LinearSystem:
    """Rows ``sum(coeffs[u] * u) + constant = 0`` over the declared unknowns."""

    unknowns: list[str]
    rows: list[tuple[dict[str, object], object]] = field(default_factory=list)

    def add_row(self, coeffs: dict[str, object], constant: object = 0) -> None:
        undeclared = set(coeffs) - set(self.unknowns)
        if undeclared:
            raise ValueError(f"row references undeclared unknowns {sorted(undeclared)}")
        self.rows.append((coeffs, constant))

    def is_homogeneous(self) -> bool:
        return all(_is_zero(c) for _, c in self.rows)


def _is_zero(v) -> bool:
    if isinstance(v, RationalFunction):
        return v.is_zero()
    return v == 0


def _as_scalar(v):
    """Fraction when possible, otherwise a constant-field RationalFunction."""
    if isinstance(v, RationalFunction):
        return v.to_fraction() if v.is_constant() else v
    return Fraction(v)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = gcd(*row.values())
    if row[min(row)] < 0:
        g = -g
    if g != 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _integer_row(row: dict[int, Fraction]) -> dict[int, int]:
    m = lcm(*(v.denominator for v in row.values()))
    return _primitive({c: int(v * m) for c, v in row.items()})


def _nullspace_qq(rows: list[dict[int, Fraction]], ncols: int) -> list[list[Fraction]]:
    pivots: dict[int, dict[int, int]] = {}
    seen = set()
    for raw in rows:
        raw = {c: v for c, v in raw.items() if v}
        if not raw:
            continue
        row = _integer_row(raw)
        key = tuple(sorted(row.items()))
        if key in seen:
            continue
        seen.add(key)
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = row
                break
            a, b = piv[lead], row[lead]
            new = {c: a * v for c, v in row.items()}
            for c, v in piv.items():
                w = new.get(c, 0) - b * v
                if w:
                    new[c] = w
                else:
                    new.pop(c, None)
            row = _primitive(new) if new else new
    return _back_substitute(pivots, ncols, Fraction)


def _nullspace_field(rows: list[dict[int, object]], ncols: int) -> list[list[object]]:
    one = RationalFunction.const(1)
    pivots: dict[int, dict[int, RationalFunction]] = {}
    for raw in rows:
        row = {c: RationalFunction.coerce(v) for c, v in raw.items() if not _is_zero(v)}
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                inv = one / row[lead]
                pivots[lead] = {c: v * inv for c, v in row.items()}
                break
            b = row[lead]
            new = dict(row)
            for c, v in piv.items():
                w = new.get(c, 0) - b * v
                if _is_zero(w):
                    new.pop(c, None)
                else:
                    new[c] = w
            row = new
    basis = _back_substitute(pivots, ncols, RationalFunction.coerce)
    return [[_as_scalar(v) for v in vec] for vec in basis]


def _back_substitute(pivots, ncols, scalar):
    order = sorted(pivots, reverse=True)
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = {free: scalar(1)}
        for pc in order:
            row = pivots[pc]
            s = scalar(0)
            for c, v in row.items():
                if c != pc and c in vec:
                    s = s + v * vec[c]
            if not _is_zero(s):
                vec[pc] = -s / row[pc]
        basis.append([vec.get(c, scalar(0)) for c in range(ncols)])
    return basis


def solve_nullspace(sys: LinearSystem) -> list[list[object]]:
    """Basis of the solution space of a homogeneous system.

    One vector per free unknown (in column order), with that unknown set to 1
    and the other free unknowns to 0. Entries are Fractions, or constant-field
    RationalFunctions when the rows mention named constants.
    """
    if not sys.is_homogeneous():
        raise ValueError("solve_nullspace needs a homogeneous system; use solve_affine")
    index = {u: i for i, u in enumerate(sys.unknowns)}
    rows = []
    rational = True
    for coeffs, _ in sys.rows:
        row = {}
        for u, v in coeffs.items():
            v = _as_scalar(v)
            if isinstance(v, RationalFunction):
                rational = False
            row[index[u]] = v
        rows.append(row)
    if rational:
        return _nullspace_qq(rows, len(sys.unknowns))
    return _nullspace_field(rows, len(sys.unknowns))


def solve_affine(sys: LinearSystem):
    """Particular solution and homogeneous basis, or None if inconsistent.

    The particular solution has every free unknown set to zero.
    """
    one = "__one__"
    aug = LinearSystem(sys.unknowns + [one])
    for coeffs, constant in sys.rows:
        row = dict(coeffs)
        if not _is_zero(constant):
            row[one] = constant
        aug.rows.append((row, 0))
    basis = solve_nullspace(aug)
    particular = None
    homogeneous = []
    for vec in basis:
        if _is_zero(vec[-1]):
            homogeneous.append(vec[:-1])
        else:
            particular = vec[:-1]
    if particular is None:
        return None
    return particular, homogeneous


def reduced_basis(vectors: Sequence[Sequence[object]], from_end: bool = True) -> list[list[object]]:
    """Reduced row echelon form of a list of vectors (zero vectors dropped).

    With ``from_end`` the pivot of each vector is its last nonzero entry, so
    pivots sit on the highest columns. Output is sorted by pivot, highest first.
    """
    rows = [[_as_scalar(v) for v in vec] for vec in vectors]
    if not rows:
        return []
    n = len(rows[0])
    cols = range(n - 1, -1, -1) if from_end else range(n)
    out: list[list[object]] = []
    pivots: list[int] = []
    for col in cols:
        pick = next((r for r in rows if not _is_zero(r[col])), None)
        if pick is None:
            continue
        rows.remove(pick)
        inv = 1 / pick[col] if not isinstance(pick[col], RationalFunction) else RationalFunction.const(1) / pick[col]
        pick = [_as_scalar(v * inv) for v in pick]
        for other_list in (rows, out):
            for i, r in enumerate(other_list):
                if not _is_zero(r[col]):
                    f = r[col]
                    other_list[i] = [_as_scalar(a - f * b) for a, b in zip(r, pick)]
        rows = [r for r in rows if any(not _is_zero(v) for v in r)]
        out.append(pick)
        pivots.append(col)
    return out


def _split_names(names: Sequence[str]):
    ext = set(extensions.names())
    coord = [i for i, n in enumerate(names) if n in ("x", "y", "z") or n in ext]
    rest = [i for i, n in enumerate(names) if i not in coord]
    return coord, rest


def collect_rows(equations: Sequence[Sequence[RationalFunction]],
                 constants: Sequence[RationalFunction] | None = None) -> list[tuple[dict[int, object], object]]:
    """Rows of the linear system ``sum_j u_j * E[k][j] + C[k] = 0`` for all x, y.

    Each equation is multiplied by the lcm of its denominators and split by
    monomials in the coordinates and extension symbols; coefficients live in
    the field generated by the remaining named constants.
    """
    out = []
    for k, eq in enumerate(equations):
        items = list(eq)
        if constants is not None:
            items.append(RationalFunction.coerce(constants[k]))
        items = [RationalFunction.coerce(v) for v in items]
        ring = _ring_for(sum((f.names for f in items), ()))
        nums = [f.num.set_ring(ring) for f in items]
        dens = [f.den.set_ring(ring) for f in items]
        L = ring.one
        for d in dens:
            if d != L:
                L = L.lcm(d)
        names = _names(ring)
        coord, rest = _split_names(names)
        rest_ring = _ring_for([names[i] for i in rest])
        buckets: dict[tuple, dict[int, object]] = {}
        for j, (n, d) in enumerate(zip(nums, dens)):
            if not n:
                continue
            scaled = _reduce_relations(n * L.exquo(d))
            for m, c in scaled.items():
                cm = tuple(m[i] for i in coord)
                bucket = buckets.setdefault(cm, {})
                if rest:
                    term = RationalFunction(rest_ring({tuple(m[i] for i in rest): c}), _canonical=True)
                    bucket[j] = bucket.get(j, 0) + term
                else:
                    bucket[j] = bucket.get(j, Fraction(0)) + to_fraction(c)
        ncoef = len(eq)
        for cm in sorted(buckets):
            bucket = buckets[cm]
            row = {j: v for j, v in bucket.items() if j < ncoef and not _is_zero(v)}
            const = bucket.get(ncoef, 0) if constants is not None else 0
            if row or not _is_zero(const):
                out.append((row, const))
    return out


def ansatz_system(unknowns: list[str], equations, constants=None) -> LinearSystem:
    sys = LinearSystem(list(unknowns))
    for row, const in collect_rows(equations, constants):
        sys.add_row({unknowns[j]: v for j, v in row.items()}, const)
    return sys


__all__ = [
    "LinearSystem",
    "ansatz_system",
    "collect_rows",
    "monomial_key",
    "reduced_basis",
    "solve_affine",
    "solve_nullspace",
]
