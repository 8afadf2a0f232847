"""Independent reference computations done directly in sympy.

Nothing here goes through geolin3's rational-function kernel except the two
converters, which only move terms across.
"""

from __future__ import annotations

from itertools import product

import sympy as sp

from geolin3.cas import RationalFunction as RF

x, y, p, q, t = sp.symbols("x y p q t")
_NAMES = {"y'": p, "y''": q, "y'''": t}


def to_sympy(f: RF) -> sp.Expr:
    def poly(which):
        out = sp.Integer(0)
        for exps, c in f.terms(which):
            term = sp.Rational(c.numerator, c.denominator)
            for n, e in exps.items():
                term *= _NAMES.get(n, sp.Symbol(n)) ** e
            out += term
        return out
    return poly("num") / poly("den")


def from_sympy(expr) -> RF:
    num, den = sp.fraction(sp.cancel(sp.together(sp.sympify(expr))))
    gens = sorted(num.free_symbols | den.free_symbols, key=str)
    rev = {v: k for k, v in _NAMES.items()}

    def poly(e):
        if not gens:
            return RF.const(sp.Rational(e).p) / sp.Rational(e).q
        out = RF.const(0)
        for monom, c in sp.Poly(e, *gens).terms():
            exps = {rev.get(g, str(g)): k for g, k in zip(gens, monom) if k}
            out = out + RF.monomial(exps, 1) * RF.const(c.p) / c.q
        return out
    return poly(num) / poly(den)


def is_zero(expr) -> bool:
    """Exact zero test: the numerator of the combined fraction expands to 0."""
    return sp.expand(sp.numer(sp.together(expr))) == 0


def second_order_rhs(c, g, h, d):
    """y'' solved from y'' + c y'^3 - g y'^2 + h y' - d = 0."""
    return -c * p**3 + g * p**2 - h * p + d


def total_derivative(expr, ypp=None):
    """d/dx along y(x), with y' = p and y'' = q (or ``ypp`` substituted)."""
    out = sp.diff(expr, x) + p * sp.diff(expr, y) + q * sp.diff(expr, p) + t * sp.diff(expr, q)
    if ypp is not None:
        out = out.subs(q, ypp)
    return sp.expand(out)


def eliminated_third(c, g, h, d):
    """y''' as a polynomial in y' along solutions of the second-order equation."""
    rhs = second_order_rhs(c, g, h, d)
    return sp.expand(sp.together(total_derivative(rhs, ypp=rhs)))


def christoffel(g, coords):
    n = len(coords)
    ginv = g.inv()
    return [[[sp.cancel(sum(ginv[i, m] * (sp.diff(g[j, m], coords[k]) + sp.diff(g[k, m], coords[j])
                                          - sp.diff(g[j, k], coords[m])) for m in range(n)) / 2)
              for k in range(n)] for j in range(n)] for i in range(n)]


def riemann(gam, coords):
    """R^i_jkl = Γ^i_jl,k − Γ^i_jk,l + Γ^i_mk Γ^m_jl − Γ^i_ml Γ^m_jk."""
    n = len(coords)
    R = {}
    for i, j, k, l in product(range(n), repeat=4):
        s = sp.diff(gam[i][j][l], coords[k]) - sp.diff(gam[i][j][k], coords[l])
        s += sum(gam[i][m][k] * gam[m][j][l] - gam[i][m][l] * gam[m][j][k] for m in range(n))
        R[i, j, k, l] = sp.cancel(sp.together(s))
    return R


def geodesic_gamma(a, b, c, d, e, f):
    return [[[-a, -b], [-b, -c]], [[-d, -e], [-e, -f]]]


def curvature_vanishes(a, b, c, d, e, f) -> bool:
    """In two dimensions the four components R^i_j12 carry all of the curvature."""
    gam = geodesic_gamma(a, b, c, d, e, f)
    for i in range(2):
        for j in range(2):
            s = sp.diff(gam[i][j][1], x) - sp.diff(gam[i][j][0], y)
            s += sum(gam[i][m][0] * gam[m][j][1] - gam[i][m][1] * gam[m][j][0] for m in range(2))
            if not is_zero(s):
                return False
    return True


def family_residual(u, v, lhs):
    """lhs evaluated on A*u + B*v = 1 by implicit differentiation, with B eliminated."""
    A, B = sp.symbols("A B")
    F = A * u + B * v - 1
    Y = sp.Function("Y")(x)
    G = F.subs(y, Y)
    d1 = sp.solve(sp.diff(G, x), sp.diff(Y, x))[0]
    d2 = sp.diff(d1, x).subs(sp.diff(Y, x), d1)
    d3 = sp.diff(d2, x).subs(sp.diff(Y, x), d1)
    values = {p: d1.subs(Y, y), q: d2.subs(Y, y), t: d3.subs(Y, y)}
    res = lhs.subs(values)
    return sp.together(res.subs(B, sp.solve(F, B)[0]))
