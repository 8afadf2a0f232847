"""Laurent-ansatz solving of linear functional equations in x and y."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .cas import (
    LinearSystem,
    RationalFunction,
    ansatz_system,
    extensions,
    reduced_basis,
    solve_affine,
    solve_nullspace,
)
from .cas.rational import to_fraction
from .cas.monomial import Monomial

RF = RationalFunction


class WindowError(ValueError):
    pass


@dataclass(frozen=True)
class AnsatzWindow:
    """Exponent box for Laurent monomials ``x^i y^j`` (extension degree cap optional)."""

    x_range: tuple[int, int] = (-4, 4)
    y_range: tuple[int, int] = (-4, 4)
    ext_degree: int = 0
    max_size: int = 289

    def __post_init__(self):
        for lo, hi in (self.x_range, self.y_range):
            if lo > hi:
                raise WindowError(f"empty exponent range [{lo}..{hi}]")
        if self.ext_degree < 0:
            raise WindowError("extension degree cap must be >= 0")

    @classmethod
    def parse(cls, text: str) -> "AnsatzWindow":
        """``XMIN:XMAX,YMIN:YMAX``."""
        try:
            xs, ys = text.split(",")
            x0, x1 = (int(v) for v in xs.split(":"))
            y0, y1 = (int(v) for v in ys.split(":"))
        except ValueError as exc:
            raise WindowError(f"bad window {text!r}; expected XMIN:XMAX,YMIN:YMAX") from exc
        return cls((x0, x1), (y0, y1))

    def widened(self, by: int) -> "AnsatzWindow":
        return AnsatzWindow((self.x_range[0] - by, self.x_range[1] + by),
                            (self.y_range[0] - by, self.y_range[1] + by),
                            self.ext_degree, self.max_size)

    def monomials(self) -> list[Monomial]:
        """Support in ascending monomial order, reduced modulo extension relations."""
        base = [Monomial.of(x=i, y=j)
                for i in range(self.x_range[0], self.x_range[1] + 1)
                for j in range(self.y_range[0], self.y_range[1] + 1)]
        ext = extensions.names()
        ext_monos = [Monomial.of()]
        if self.ext_degree and ext:
            leads = [rel.lead for rel in extensions.relations()]
            for deg in range(1, self.ext_degree + 1):
                for combo in _compositions(len(ext), deg):
                    exps = dict(zip(ext, combo))
                    if any(all(exps.get(n, 0) >= e for n, e in lead.items()) for lead in leads):
                        continue
                    ext_monos.append(Monomial.of(**exps))
        out = [Monomial(tuple(sorted(b.exponents + e.exponents))) for e in ext_monos for b in base]
        if len(out) > self.max_size:
            raise WindowError(f"window {self} has {len(out)} monomials, cap is {self.max_size}")
        return sorted(out)

    def __str__(self):
        return f"{self.x_range[0]}:{self.x_range[1]},{self.y_range[0]}:{self.y_range[1]}"


def _compositions(n: int, total: int):
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(n - 1, total - first):
            yield (first,) + rest


def default_windows(window: AnsatzWindow | None = None) -> list[AnsatzWindow]:
    """The window followed by its two automatic widenings (+2, +4)."""
    window = window or AnsatzWindow()
    return [window, window.widened(2), window.widened(4)]


def solve_ansatz(equations: Callable[[Sequence[RF]], Sequence[RF]],
                 supports: Sequence[Sequence[RF]]):
    """Solve linear equations in unknown functions expanded over given supports.

    ``equations(values)`` must be affine in the function values. Returns
    ``(particular, homogeneous)`` where each entry is a list of functions, or
    None if the system is inconsistent within the supports.
    """
    nfun = len(supports)
    zero = [RF.const(0)] * nfun
    base = list(equations(zero))
    columns = []
    labels = []
    for f, support in enumerate(supports):
        for j, m in enumerate(support):
            vals = list(zero)
            vals[f] = m
            out = equations(vals)
            columns.append([o - b for o, b in zip(out, base)])
            labels.append((f, j))
    if not columns:
        return None
    eqs = [[col[k] for col in columns] for k in range(len(base))]
    unknowns = [f"u{i}" for i in range(len(columns))]
    sys = ansatz_system(unknowns, eqs, base)
    solved = solve_affine(sys)
    if solved is None:
        return None
    particular, homogeneous = solved

    def assemble(vec):
        funcs = [RF.const(0)] * nfun
        for coef, (f, j) in zip(vec, labels):
            if coef != 0:
                funcs[f] = funcs[f] + supports[f][j] * RF.coerce(coef)
        return funcs

    return assemble(particular), [assemble(v) for v in reduced_basis(homogeneous)]


def laurent_support(window: AnsatzWindow, multiplier: RF | None = None) -> list[RF]:
    monos = [m.to_rf() for m in window.monomials()]
    if multiplier is not None:
        monos = [m * multiplier for m in monos]
    return monos


def denominator_multiplier(values: Sequence[RF]) -> RF | None:
    """Reciprocal of the squarefree non-monomial part of the common denominator."""
    from .cas.rational import _ring_for

    items = [RF.coerce(v) for v in values if not RF.coerce(v).is_zero()]
    if not items:
        return None
    ring = _ring_for(sum((v.names for v in items), ()))
    L = ring.one
    for v in items:
        L = L.lcm(v.den.set_ring(ring))
    if L.is_monomial or L.is_ground:
        return None
    part = L.sqf_part()
    # strip monomial content; negative exponents already cover it
    for gen in ring.gens:
        while part and part.rem(gen) == 0 and not part.is_ground:
            part = part.exquo(gen)
    if part.is_ground:
        return None
    return RF.const(1) / RF(part)


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def solve_operator(operator: Sequence[dict[tuple[int, int, int], RF]],
                   supports: Sequence[Sequence[Monomial]]):
    """Homogeneous linear differential equations over Laurent monomial supports.

    Each equation maps ``(unknown, dx, dy)`` to its coefficient. This is a fast
    path for coefficients in x and y only: every equation is cleared of its
    denominator once, and each column is built by shifting exponents. Returns
    the homogeneous basis in the same form as ``solve_ansatz``, or None when a
    coefficient mentions other symbols or a support monomial does.
    """
    from .cas.rational import _ring_for

    ring = _ring_for(("x", "y"))
    names = tuple(str(g) for g in ring.gens)
    ix, iy = names.index("x"), names.index("y")
    cleared = []
    for eq in operator:
        coefs = {key: RF.coerce(c) for key, c in eq.items() if not RF.coerce(c).is_zero()}
        if any(set(c.names) - {"x", "y"} for c in coefs.values()):
            return None
        L = ring.one
        for c in coefs.values():
            L = L.lcm(c.den.set_ring(ring))
        terms = {}
        for key, c in coefs.items():
            poly = c.num.set_ring(ring) * L.exquo(c.den.set_ring(ring))
            terms[key] = [((m[ix], m[iy]), to_fraction(v)) for m, v in poly.items()]
        cleared.append(terms)
    columns = []
    labels = []
    for f, support in enumerate(supports):
        for j, mono in enumerate(support):
            exps = mono.as_dict()
            if set(exps) - {"x", "y"}:
                return None
            a, b = exps.get("x", 0), exps.get("y", 0)
            col: dict[tuple, Fraction] = {}
            for k, terms in enumerate(cleared):
                for (g, dx, dy), poly in terms.items():
                    if g != f:
                        continue
                    factor = _falling(a, dx) * _falling(b, dy)
                    if not factor:
                        continue
                    for (ex, ey), v in poly:
                        key = (k, ex + a - dx, ey + b - dy)
                        col[key] = col.get(key, 0) + factor * v
            columns.append(col)
            labels.append((f, j))
    unknowns = [f"u{i}" for i in range(len(columns))]
    rows: dict[tuple, dict[str, Fraction]] = {}
    for name, col in zip(unknowns, columns):
        for key, v in col.items():
            if v:
                rows.setdefault(key, {})[name] = v
    sys = LinearSystem(unknowns)
    for key in sorted(rows):
        sys.add_row(rows[key])
    basis = solve_nullspace(sys)
    nfun = len(supports)
    rfs = [[m.to_rf() for m in support] for support in supports]

    def assemble(vec):
        funcs = [RF.const(0)] * nfun
        for coef, (f, j) in zip(vec, labels):
            if coef != 0:
                funcs[f] = funcs[f] + rfs[f][j] * RF.coerce(coef)
        return funcs

    return [assemble(v) for v in reduced_basis(basis)]
