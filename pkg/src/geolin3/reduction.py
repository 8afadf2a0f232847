"""Projection of geodesic systems and the second-to-third-order pipeline.

The scalar second-order equation is ``y'' + c y'^3 - g y'^2 + h y' - d = 0``.
Differentiating it gives the semi-linear third-order form

    y''' + (A2 y'^2 - A1 y' + A0) y'' + B4 y'^4 - B3 y'^3 + B2 y'^2 - B1 y' + B0 = 0

and eliminating y'' with the second-order equation gives the quintic form

    y''' - alpha y'^5 + beta y'^4 - gamma y'^3 + delta y'^2 - epsilon y' + phi = 0.

The extraction functions invert these maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .ansatz import (
    AnsatzWindow,
    default_windows,
    denominator_multiplier,
    laurent_support,
    solve_ansatz,
)
from .cas import RationalFunction, differentiate, leading_sign, sqrt_exact
from .cas.rational import to_fraction
from .geometry import Connection

RF = RationalFunction
ZERO = RF.const(0)
P1, P2, P3 = "y'", "y''", "y'''"


def dx(f):
    return differentiate(f, "x")


def dy(f):
    return differentiate(f, "y")


def _coerce_fields(obj, names):
    for n in names:
        object.__setattr__(obj, n, RF.coerce(getattr(obj, n)))


@dataclass(frozen=True)
class ProjectedSystem:
    """Coefficients of the projected system, indexed from the second coordinate."""

    dim: int
    A: tuple  # A[b][c]
    B: tuple  # B[a][b][c]
    C: tuple  # C[a][b]
    D: tuple  # D[a]


@dataclass(frozen=True)
class SecondOrderCubic:
    """y'' + c y'^3 - g y'^2 + h y' - d = 0."""

    c: RF
    g: RF
    h: RF
    d: RF

    def __post_init__(self):
        _coerce_fields(self, "cghd")

    def as_tuple(self):
        return (self.c, self.g, self.h, self.d)

    def lhs(self) -> RF:
        p = RF.var(P1)
        return RF.var(P2) + self.c * p ** 3 - self.g * p ** 2 + self.h * p - self.d

    def rhs_y2(self) -> RF:
        """y'' solved from the equation."""
        p = RF.var(P1)
        return -self.c * p ** 3 + self.g * p ** 2 - self.h * p + self.d


@dataclass(frozen=True)
class QuinticForm:
    alpha: RF
    beta: RF
    gamma: RF
    delta: RF
    epsilon: RF
    phi: RF

    def __post_init__(self):
        _coerce_fields(self, ("alpha", "beta", "gamma", "delta", "epsilon", "phi"))

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma, self.delta, self.epsilon, self.phi)

    def lhs(self) -> RF:
        p = RF.var(P1)
        return (RF.var(P3) - self.alpha * p ** 5 + self.beta * p ** 4 - self.gamma * p ** 3
                + self.delta * p ** 2 - self.epsilon * p + self.phi)


@dataclass(frozen=True)
class SemilinearForm:
    A2: RF
    A1: RF
    A0: RF
    B4: RF
    B3: RF
    B2: RF
    B1: RF
    B0: RF

    def __post_init__(self):
        _coerce_fields(self, ("A2", "A1", "A0", "B4", "B3", "B2", "B1", "B0"))

    def as_tuple(self):
        return (self.A2, self.A1, self.A0, self.B4, self.B3, self.B2, self.B1, self.B0)

    def lhs(self) -> RF:
        p = RF.var(P1)
        return (RF.var(P3) + (self.A2 * p ** 2 - self.A1 * p + self.A0) * RF.var(P2)
                + self.B4 * p ** 4 - self.B3 * p ** 3 + self.B2 * p ** 2 - self.B1 * p + self.B0)


# -- projection ---------------------------------------------------------------

def project(conn: Connection) -> ProjectedSystem:
    """Eliminate the geodesic parameter using the first coordinate as parameter."""
    n = conn.dim
    if n < 2:
        raise ValueError("projection needs n >= 2")
    G = conn.gamma
    idx = range(1, n)
    delta = lambda i, j: 1 if i == j else 0
    A = tuple(tuple(-G[0][b][c] for c in idx) for b in idx)
    B = tuple(tuple(tuple(G[a][b][c] - (delta(a, c) * G[0][b][0] + delta(a, b) * G[0][c][0])
                          for c in idx) for b in idx) for a in idx)
    C = tuple(tuple(2 * G[a][0][b] - delta(a, b) * G[0][0][0] for b in idx) for a in idx)
    D = tuple(G[a][0][0] for a in idx)
    return ProjectedSystem(n, A, B, C, D)


def scalar_of(proj: ProjectedSystem) -> SecondOrderCubic:
    if proj.dim != 2:
        raise ValueError("scalar_of needs a two-dimensional projection")
    return SecondOrderCubic(c=proj.A[0][0], g=-proj.B[0][0][0], h=proj.C[0][0], d=-proj.D[0])


# -- forward maps -------------------------------------------------------------

def third_semilinear(eq2: SecondOrderCubic) -> SemilinearForm:
    """Total x-derivative of the second-order equation, kept linear in y''."""
    c, g, h, d = eq2.as_tuple()
    return SemilinearForm(
        A2=3 * c, A1=2 * g, A0=h,
        B4=dy(c), B3=dy(g) - dx(c), B2=dy(h) - dx(g), B1=dy(d) - dx(h), B0=-dx(d),
    )


def third_quintic(eq2: SecondOrderCubic) -> QuinticForm:
    """The differentiated equation with y'' eliminated."""
    c, g, h, d = eq2.as_tuple()
    return QuinticForm(
        alpha=3 * c * c,
        beta=5 * c * g + dy(c),
        gamma=4 * c * h + 2 * g * g + dy(g) - dx(c),
        delta=3 * c * d + 3 * g * h + dy(h) - dx(g),
        epsilon=2 * d * g + h * h + dy(d) - dx(h),
        phi=d * h - dx(d),
    )


# -- inverse maps ---------------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    """A recovered second-order equation with named consistency residuals."""

    eq2: SecondOrderCubic
    residuals: dict = field(default_factory=dict)
    sign: str = ""
    note: str = ""

    @property
    def passed(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values())

    def failing(self) -> list[str]:
        return [k for k, r in self.residuals.items() if not r.is_zero()]


@dataclass(frozen=True)
class Extraction:
    """Outcome of inverting a third-order form.

    status is ``ok`` (candidates present), ``not-in-class``, ``degenerate``
    (quintic with alpha = beta = 0, needs :func:`extract_degenerate`) or
    ``undecided``.
    """

    status: str
    candidates: tuple = ()
    reason: str = ""
    caveats: tuple = ()


def _quintic_branch(q: QuinticForm, c: RF, sign: str) -> Candidate:
    g = (q.beta - dy(c)) / (5 * c)
    h = (q.gamma - 2 * g * g - dy(g) + dx(c)) / (4 * c)
    d = (q.delta - 3 * g * h - dy(h) + dx(g)) / (3 * c)
    residuals = {
        "epsilon_match": q.epsilon - (2 * d * g + h * h + dy(d) - dx(h)),
        "phi_match": q.phi - (d * h - dx(d)),
    }
    return Candidate(SecondOrderCubic(c, g, h, d), residuals, sign)


def extract_quintic(q: QuinticForm) -> Extraction:
    """Recover (c, g, h, d) from a quintic form; both signs of c are tried, + first."""
    if q.alpha.is_zero():
        if not q.beta.is_zero():
            return Extraction("not-in-class", reason="alpha = 0 forces beta = 0, but beta is nonzero")
        return Extraction("degenerate", reason="alpha = beta = 0: cubic branch, coefficients not unique")
    root = sqrt_exact(q.alpha / 3)
    if root is None:
        return Extraction("not-in-class", reason=f"alpha/3 = {q.alpha / 3} is not the square of a rational function")
    cands = (_quintic_branch(q, root, "+"), _quintic_branch(q, -root, "-"))
    caveats = ()
    if not root.is_constant():
        caveats = (f"extracted coefficients have poles where c = ±({root}) vanishes",)
    return Extraction("ok", cands, caveats=caveats)


def _degenerate_checks(q: QuinticForm, g: RF, h: RF, d: RF) -> dict:
    return {
        "gamma_match": q.gamma - (2 * g * g + dy(g)),
        "delta_match": q.delta - (3 * g * h + dy(h) - dx(g)),
        "epsilon_match": q.epsilon - (2 * d * g + h * h + dy(d) - dx(h)),
        "phi_match": q.phi - (d * h - dx(d)),
    }


def _rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Rational roots of c0 + c1 a + c2 a^2 (not identically zero)."""
    c0, c1, c2 = (list(coeffs) + [Fraction(0)] * 3)[:3]
    if c2 == 0:
        if c1 == 0:
            return []
        return [-c0 / c1]
    disc = c1 * c1 - 4 * c2 * c0
    from .cas.rational import _sqrt_fraction

    root = _sqrt_fraction(disc)
    if root is None:
        return []
    return sorted({(-c1 + root) / (2 * c2), (-c1 - root) / (2 * c2)}, reverse=True)


def _search_g(gamma: RF, window: AnsatzWindow) -> list[RF]:
    """Monomial solutions g = a x^i y^j of g_y = gamma - 2 g^2 with rational a."""
    found = [] if not gamma.is_zero() else [ZERO]
    for mono in window.monomials():
        m = mono.to_rf()
        # gamma - 2 a^2 m^2 - a m_y, collected as a quadratic in a per monomial
        parts = [gamma, -dy(m), -2 * m * m]
        from .cas import collect_rows

        rows = collect_rows([parts[1:]], [parts[0]])
        polys = []
        rational = True
        for row, const in rows:
            vals = [const, row.get(0, 0), row.get(1, 0)]
            if any(isinstance(v, RF) and not v.is_constant() for v in vals):
                rational = False
                break
            polys.append([v.to_fraction() if isinstance(v, RF) else Fraction(v) for v in vals])
        if not rational or not polys:
            continue
        for a in _rational_roots(polys[0]):
            if a == 0:
                continue
            if all(p[0] + p[1] * a + p[2] * a * a == 0 for p in polys):
                cand = m * RF.const(a)
                if cand not in found:
                    found.append(cand)
    return found


def _solve_first_order_y(coef: RF, rhs: RF, window: AnsatzWindow) -> RF | None:
    """Rational w with w_y + coef*w = rhs inside the window (free part set to 0)."""
    mult = denominator_multiplier([coef, rhs])
    for win in default_windows(window):
        support = laurent_support(win, mult)
        solved = solve_ansatz(lambda v: [dy(v[0]) + coef * v[0] - rhs], [support])
        if solved is not None:
            return solved[0][0]
    return None


def extract_degenerate(q: QuinticForm, hint: SecondOrderCubic | None = None,
                       window: AnsatzWindow | None = None) -> Extraction:
    """Cubic branch (alpha = beta = 0): verify a hint or search a Laurent window."""
    if not (q.alpha.is_zero() and q.beta.is_zero()):
        raise ValueError("extract_degenerate needs alpha = beta = 0")
    if hint is not None:
        if not hint.c.is_zero():
            raise ValueError("degenerate hints must have c = 0")
        cand = Candidate(SecondOrderCubic(0, hint.g, hint.h, hint.d),
                         _degenerate_checks(q, hint.g, hint.h, hint.d), note="hint")
        return Extraction("ok", (cand,))
    search = window or AnsatzWindow((-2, 2), (-2, 2))
    cands = []
    for g in _search_g(q.gamma, search):
        h = _solve_first_order_y(3 * g, q.delta + dx(g), AnsatzWindow())
        if h is None:
            continue
        d = _solve_first_order_y(2 * g, q.epsilon - h * h + dx(h), AnsatzWindow())
        if d is None:
            continue
        cand = Candidate(SecondOrderCubic(0, g, h, d), _degenerate_checks(q, g, h, d), note="search")
        if cand.passed:
            cands.append(cand)
    if not cands:
        return Extraction("undecided", reason="no (g, h, d) found in the ansatz window; supply a hint")
    return Extraction("ok", tuple(cands))


@dataclass(frozen=True)
class SemilinearExtraction:
    """Recovered (c, g, h, d) from the semi-linear form; d is fixed up to a constant."""

    status: str
    candidate: Candidate | None = None
    reason: str = ""
    caveats: tuple = ()


def recover_d(s: SemilinearForm, h: RF, window: AnsatzWindow | None = None) -> RF | None:
    """Rational d with d_x = -B0 and d_y = B1 + h_x, without constant term."""
    dx_target, dy_target = -s.B0, s.B1 + dx(h)
    if dx_target.is_zero() and dy_target.is_zero():
        return ZERO
    mult = denominator_multiplier([dx_target, dy_target])
    for win in default_windows(window):
        support = [m for m in laurent_support(win, mult) if not m.is_constant()]
        solved = solve_ansatz(lambda v: [dx(v[0]) - dx_target, dy(v[0]) - dy_target], [support])
        if solved is not None:
            return solved[0][0]
    return None


def extract_semilinear(s: SemilinearForm, window: AnsatzWindow | None = None) -> SemilinearExtraction:
    c, g, h = s.A2 / 3, s.A1 / 2, s.A0
    residuals = {
        "B4_match": s.B4 - dy(c),
        "B3_match": s.B3 - (dy(g) - dx(c)),
        "B2_match": s.B2 - (dy(h) - dx(g)),
    }
    mixed = dy(-s.B0) - dx(s.B1 + dx(h))
    if not mixed.is_zero():
        cand = Candidate(SecondOrderCubic(c, g, h, 0), {**residuals, "d_integrability": mixed})
        return SemilinearExtraction("not-in-class", cand,
                                    reason="d_x = -B0 and d_y = B1 + h_x are not compatible")
    d = recover_d(s, h, window)
    if d is None:
        cand = Candidate(SecondOrderCubic(c, g, h, 0), residuals)
        return SemilinearExtraction("undecided", cand, reason="no rational d found in the ansatz window")
    cand = Candidate(SecondOrderCubic(c, g, h, d), residuals, note="d up to an additive constant")
    caveats = ("d is determined up to an additive constant",)
    return SemilinearExtraction("ok", cand, caveats=caveats)


def normalized_sign(f: RF) -> RF:
    """``f`` or ``-f``, whichever prints with a positive leading coefficient."""
    return -f if leading_sign(f) < 0 else f


__all__ = [
    "Candidate", "Extraction", "ProjectedSystem", "QuinticForm", "SecondOrderCubic",
    "SemilinearExtraction", "SemilinearForm", "extract_degenerate", "extract_quintic",
    "extract_semilinear", "normalized_sign", "project", "recover_d", "scalar_of",
    "third_quintic", "third_semilinear", "to_fraction",
]
