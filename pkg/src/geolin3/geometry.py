"""Metrics, Levi-Civita connections, curvature, and flat-coordinate conditions.

Indices are 0-based in code: coordinate 0 is x, 1 is y, 2 is z. All
components are exact :class:`RationalFunction` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .cas import RationalFunction, differentiate

RF = RationalFunction
COORDS = ("x", "y", "z")
ZERO = RF.const(0)


class GeometryError(ValueError):
    pass


class SingularMetricError(GeometryError):
    pass


def _tuple(a):
    if isinstance(a, (list, tuple)):
        return tuple(_tuple(v) for v in a)
    return RF.coerce(a)


def determinant(m) -> RF:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = ZERO
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def inverse(m):
    """Exact inverse via the adjugate."""
    n = len(m)
    det = determinant(m)
    if det.is_zero():
        raise SingularMetricError("matrix is singular (zero determinant)")
    if n == 2:
        return ((m[1][1] / det, -m[0][1] / det), (-m[1][0] / det, m[0][0] / det))
    inv = [[ZERO] * n for _ in range(n)]
    for i, j in product(range(n), repeat=2):
        minor = [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]
        cof = determinant(minor)
        inv[j][i] = cof / det if (i + j) % 2 == 0 else -cof / det
    return _tuple(inv)


@dataclass(frozen=True)
class Metric:
    components: tuple

    def __post_init__(self):
        comps = _tuple(self.components)
        object.__setattr__(self, "components", comps)
        n = len(comps)
        if n < 2 or any(len(row) != n for row in comps):
            raise GeometryError("metric must be a square matrix of size >= 2")
        for i, j in product(range(n), repeat=2):
            if comps[i][j] != comps[j][i]:
                raise GeometryError(f"metric is not symmetric at ({i + 1},{j + 1})")
        if determinant(comps).is_zero():
            raise SingularMetricError("metric determinant is identically zero")

    @classmethod
    def from_pqr(cls, p, q, r) -> "Metric":
        return cls(((p, q), (q, r)))

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def pqr(self) -> tuple[RF, RF, RF]:
        if self.dim != 2:
            raise GeometryError("p, q, r are only defined for n = 2")
        g = self.components
        return g[0][0], g[0][1], g[1][1]

    def det(self) -> RF:
        return determinant(self.components)


@dataclass(frozen=True)
class Connection:
    """Christoffel symbols ``gamma[i][j][k]`` = Γ^i_jk, symmetric in j, k."""

    gamma: tuple

    def __post_init__(self):
        gam = _tuple(self.gamma)
        object.__setattr__(self, "gamma", gam)
        n = len(gam)
        for i, j, k in product(range(n), repeat=3):
            if gam[i][j][k] != gam[i][k][j]:
                raise GeometryError(f"connection not symmetric in lower indices at {i + 1},{j + 1},{k + 1}")

    @property
    def dim(self) -> int:
        return len(self.gamma)

    @classmethod
    def zero(cls, n: int = 2) -> "Connection":
        return cls(tuple(tuple(tuple(ZERO for _ in range(n)) for _ in range(n)) for _ in range(n)))


@dataclass(frozen=True)
class RiemannTensor:
    """``mixed[i][j][k][l]`` = R^i_jkl; ``covariant`` filled by :func:`lower`."""

    mixed: tuple
    covariant: tuple | None = None

    @property
    def dim(self) -> int:
        return len(self.mixed)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in _flatten(self.mixed))


def _flatten(a):
    if isinstance(a, tuple):
        for v in a:
            yield from _flatten(v)
    else:
        yield a


@dataclass(frozen=True)
class GeodesicSystem2:
    """x'' = a x'^2 + 2b x'y' + c y'^2,  y'' = d x'^2 + 2e x'y' + f y'^2."""

    a: RF
    b: RF
    c: RF
    d: RF
    e: RF
    f: RF

    def __post_init__(self):
        for name in "abcdef":
            object.__setattr__(self, name, RF.coerce(getattr(self, name)))

    @classmethod
    def zero(cls) -> "GeodesicSystem2":
        return cls(0, 0, 0, 0, 0, 0)

    def as_tuple(self) -> tuple[RF, ...]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)

    def connection(self) -> Connection:
        a, b, c, d, e, f = self.as_tuple()
        return Connection((((-a, -b), (-b, -c)), ((-d, -e), (-e, -f))))

    @classmethod
    def from_connection(cls, conn: Connection) -> "GeodesicSystem2":
        if conn.dim != 2:
            raise GeometryError("geodesic systems are two-dimensional")
        g = conn.gamma
        return cls(-g[0][0][0], -g[0][0][1], -g[0][1][1], -g[1][0][0], -g[1][0][1], -g[1][1][1])


def _coords(n: int) -> tuple[str, ...]:
    if n > len(COORDS):
        raise GeometryError(f"dimension {n} not supported")
    return COORDS[:n]


def christoffel(metric: Metric) -> Connection:
    """Γ^i_jk = ½ g^im (g_jm,k + g_km,j − g_jk,m)."""
    n = metric.dim
    xs = _coords(n)
    g = metric.components
    ginv = inverse(g)
    dg = [[[differentiate(g[a][b], xs[m]) for b in range(n)] for a in range(n)] for m in range(n)]
    half = RF.const(1) / 2
    gamma = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for k in range(j, n):
            lowered = [dg[k][j][m] + dg[j][k][m] - dg[m][j][k] for m in range(n)]
            for i in range(n):
                s = ZERO
                for m in range(n):
                    if not ginv[i][m].is_zero() and not lowered[m].is_zero():
                        s = s + ginv[i][m] * lowered[m]
                gamma[i][j][k] = gamma[i][k][j] = s * half
    return Connection(gamma)


def _mixed_riemann(gam, n, xs):
    dgam = [[[[differentiate(gam[i][j][l], xs[k]) for k in range(n)] for l in range(n)]
             for j in range(n)] for i in range(n)]
    R = [[[[ZERO] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for i, j in product(range(n), repeat=2):
        for k in range(n):
            for l in range(k + 1, n):
                s = dgam[i][j][l][k] - dgam[i][j][k][l]
                for m in range(n):
                    s = s + gam[i][m][k] * gam[m][j][l] - gam[i][m][l] * gam[m][j][k]
                R[i][j][k][l] = s
                R[i][j][l][k] = -s
    return R


def riemann(conn: Connection, check: bool = True) -> RiemannTensor:
    """R^i_jkl = Γ^i_jl,k − Γ^i_jk,l + Γ^i_mk Γ^m_jl − Γ^i_ml Γ^m_jk.

    With ``check`` the antisymmetry in (k, l) and the first Bianchi identity
    are asserted exactly.
    """
    n = conn.dim
    xs = _coords(n)
    R = _mixed_riemann(conn.gamma, n, xs)
    if check:
        for i, j, k, l in product(range(n), repeat=4):
            if not (R[i][j][k][l] + R[i][j][l][k]).is_zero():
                raise GeometryError("Riemann tensor violates R^i_jkl = -R^i_jlk")
            if not (R[i][j][k][l] + R[i][k][l][j] + R[i][l][j][k]).is_zero():
                raise GeometryError("Riemann tensor violates the first Bianchi identity")
    return RiemannTensor(_tuple(R))


def lower(riem: RiemannTensor, metric: Metric, check: bool = True) -> RiemannTensor:
    """R_ijkl = g_im R^m_jkl, asserting R_ijkl = −R_jikl."""
    n = riem.dim
    if metric.dim != n:
        raise GeometryError("dimension mismatch between tensor and metric")
    g, R = metric.components, riem.mixed
    cov = [[[[ZERO] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for i, j, k, l in product(range(n), repeat=4):
        s = ZERO
        for m in range(n):
            if not g[i][m].is_zero() and not R[m][j][k][l].is_zero():
                s = s + g[i][m] * R[m][j][k][l]
        cov[i][j][k][l] = s
    if check:
        for i, j, k, l in product(range(n), repeat=4):
            if not (cov[i][j][k][l] + cov[j][i][k][l]).is_zero():
                raise GeometryError("covariant Riemann tensor violates R_ijkl = -R_jikl")
    return RiemannTensor(riem.mixed, _tuple(cov))


def _covariant_component(R, G, xs, i, j, k, l, m) -> RF:
    s = differentiate(R[i][j][k][l], xs[m])
    for p in range(len(xs)):
        for sign, coef, comp in ((1, G[i][p][m], R[p][j][k][l]), (-1, G[p][j][m], R[i][p][k][l]),
                                 (-1, G[p][k][m], R[i][j][p][l]), (-1, G[p][l][m], R[i][j][k][p])):
            if coef.is_zero() or comp.is_zero():
                continue
            s = s + coef * comp if sign > 0 else s - coef * comp
    return s


def covariant_derivative(riem: RiemannTensor, conn: Connection):
    """R^i_jkl;m as a nested list indexed [i][j][k][l][m]."""
    n = riem.dim
    xs = _coords(n)
    R, G = riem.mixed, conn.gamma
    out = [[[[[ZERO] * n for _ in range(n)] for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for i, j, k, l, m in product(range(n), repeat=5):
        out[i][j][k][l][m] = _covariant_component(R, G, xs, i, j, k, l, m)
    return out


def check_bianchi2(riem: RiemannTensor, conn: Connection) -> bool:
    """Whether R^i_jkl;m + R^i_jlm;k + R^i_jmk;l vanishes identically.

    Antisymmetry in (k, l) is checked first; given it, sums with a repeated
    index vanish and reversing (k, l, m) flips the sign, so one cyclic sum per
    increasing triple decides the identity.
    """
    n = riem.dim
    xs = _coords(n)
    R, G = riem.mixed, conn.gamma
    for i, j, k, l in product(range(n), repeat=4):
        if not (R[i][j][k][l] + R[i][j][l][k]).is_zero():
            return False
    for i, j in product(range(n), repeat=2):
        for k in range(n):
            for l in range(k + 1, n):
                for m in range(l + 1, n):
                    total = (_covariant_component(R, G, xs, i, j, k, l, m)
                             + _covariant_component(R, G, xs, i, j, l, m, k)
                             + _covariant_component(R, G, xs, i, j, m, k, l))
                    if not total.is_zero():
                        return False
    return True


def is_flat(conn: Connection) -> bool:
    """Vanishing of the full mixed curvature (for n = 2, the four R^i_j12)."""
    n = conn.dim
    xs = _coords(n)
    if n == 2:
        R = _mixed_riemann(conn.gamma, n, xs)
        return all(R[i][j][0][1].is_zero() for i in range(2) for j in range(2))
    return riemann(conn, check=False).is_zero()


def metric_residuals(sys: GeodesicSystem2, p, q, r) -> tuple[RF, ...]:
    """Left-minus-right sides of the six metric compatibility equations."""
    a, b, c, d, e, f = sys.as_tuple()
    p, q, r = RF.coerce(p), RF.coerce(q), RF.coerce(r)
    dx = lambda v: differentiate(v, "x")
    dy = lambda v: differentiate(v, "y")
    return (
        dx(p) + 2 * (a * p + d * q),
        dx(q) + b * p + (a + e) * q + d * r,
        dx(r) + 2 * (b * q + e * r),
        dy(p) + 2 * (b * p + e * q),
        dy(q) + c * p + (b + f) * q + e * r,
        dy(r) + 2 * (c * q + f * r),
    )


def covariant_hessian(conn: Connection, u) -> tuple[RF, RF, RF]:
    """(H11, H12, H22) with H_jk = u,jk − Γ^i_jk u,i; all zero iff u is affine."""
    if conn.dim != 2:
        raise GeometryError("covariant_hessian is implemented for n = 2")
    u = RF.coerce(u)
    G = conn.gamma
    ux, uy = differentiate(u, "x"), differentiate(u, "y")
    grad = (ux, uy)
    second = {
        (0, 0): differentiate(ux, "x"),
        (0, 1): differentiate(ux, "y"),
        (1, 1): differentiate(uy, "y"),
    }
    out = []
    for (j, k), v in second.items():
        for i in range(2):
            if not G[i][j][k].is_zero() and not grad[i].is_zero():
                v = v - G[i][j][k] * grad[i]
        out.append(v)
    return tuple(out)


def metric_operator(sys: GeodesicSystem2) -> list[dict[tuple[int, int, int], RF]]:
    """metric_residuals as linear operators on (p, q, r), keyed by (unknown, dx, dy)."""
    a, b, c, d, e, f = sys.as_tuple()
    P, Q, R = 0, 1, 2
    return [
        {(P, 1, 0): RF.const(1), (P, 0, 0): 2 * a, (Q, 0, 0): 2 * d},
        {(Q, 1, 0): RF.const(1), (P, 0, 0): b, (Q, 0, 0): a + e, (R, 0, 0): d},
        {(R, 1, 0): RF.const(1), (Q, 0, 0): 2 * b, (R, 0, 0): 2 * e},
        {(P, 0, 1): RF.const(1), (P, 0, 0): 2 * b, (Q, 0, 0): 2 * e},
        {(Q, 0, 1): RF.const(1), (P, 0, 0): c, (Q, 0, 0): b + f, (R, 0, 0): e},
        {(R, 0, 1): RF.const(1), (Q, 0, 0): 2 * c, (R, 0, 0): 2 * f},
    ]


def hessian_operator(conn: Connection) -> list[dict[tuple[int, int, int], RF]]:
    """covariant_hessian as linear operators on u, keyed by (0, dx, dy)."""
    if conn.dim != 2:
        raise GeometryError("hessian_operator is implemented for n = 2")
    G = conn.gamma
    out = []
    for j, k in ((0, 0), (0, 1), (1, 1)):
        orders = (2, 0) if (j, k) == (0, 0) else (1, 1) if (j, k) == (0, 1) else (0, 2)
        out.append({(0, *orders): RF.const(1),
                    (0, 1, 0): -G[0][j][k],
                    (0, 0, 1): -G[1][j][k]})
    return out
