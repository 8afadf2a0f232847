"""Constructive layer: metric recovery, flat coordinates, and exact verification.

Everything here works inside a Laurent ansatz window. Results are reported up
to the genuine degeneracies of the problem: metrics up to a constant factor
and flat coordinates up to affine mixing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .ansatz import (
    AnsatzWindow,
    WindowError,
    default_windows,
    laurent_support,
    solve_ansatz,
    solve_operator,
)
from .cas import RationalFunction, differentiate
from .cas.rational import _reduce_relations, _ring_for
from .criteria import lie_residuals
from .geometry import (
    GeodesicSystem2,
    Metric,
    christoffel,
    covariant_hessian,
    hessian_operator,
    metric_operator,
    metric_residuals,
)
from .reduction import (
    P1,
    P2,
    P3,
    QuinticForm,
    SecondOrderCubic,
    SemilinearForm,
    project,
    scalar_of,
    third_quintic,
    third_semilinear,
)

RF = RationalFunction
FOUND = "found"
NOT_FOUND = "not-found"


class SolverError(ValueError):
    pass


def _windows(window: AnsatzWindow | None) -> list[AnsatzWindow]:
    # an explicit window is used as given; only the default escalates
    return default_windows() if window is None else [window]


def _require_flat(gauge: GeodesicSystem2) -> None:
    bad = [k for k, r in lie_residuals(gauge).items() if not r.is_zero()]
    if bad:
        raise SolverError(f"gauge is not flat (nonzero {', '.join(bad)})")


# -- domain types -----------------------------------------------------------------

@dataclass(frozen=True)
class PointMap:
    """u = u(x, y), v = v(x, y) with a Jacobian that is not identically zero."""

    u: RF
    v: RF

    def __post_init__(self):
        object.__setattr__(self, "u", RF.coerce(self.u))
        object.__setattr__(self, "v", RF.coerce(self.v))
        if self.jacobian().is_zero():
            raise SolverError(f"degenerate point map: Jacobian of ({self.u}, {self.v}) vanishes")

    def jacobian(self) -> RF:
        dx = lambda f: differentiate(f, "x")
        dy = lambda f: differentiate(f, "y")
        return dx(self.u) * dy(self.v) - dy(self.u) * dx(self.v)

    def pullback(self) -> tuple[RF, RF, RF]:
        """(p, q, r) of du^2 + dv^2."""
        ux, uy = differentiate(self.u, "x"), differentiate(self.u, "y")
        vx, vy = differentiate(self.v, "x"), differentiate(self.v, "y")
        return ux * ux + vx * vx, ux * uy + vx * vy, uy * uy + vy * vy

    def __str__(self):
        return f"u = {self.u}; v = {self.v}"


@dataclass(frozen=True)
class SolutionFamily:
    """The implicit family A*u + B*v = 1 with free constants A and B."""

    u: RF
    v: RF
    constants: tuple[str, str] = ("A", "B")

    def relation(self) -> RF:
        """F = A*u + B*v - 1."""
        a, b = (RF.var(n) for n in self.constants)
        return a * self.u + b * self.v - 1

    def __str__(self):
        a, b = self.constants
        return f"{_scaled(a, self.u)} + {_scaled(b, self.v)} = 1"


def _scaled(name: str, f: RF) -> str:
    text = str(f)
    if text == "1":
        return name
    depth = 0
    bare_sum = text.startswith("-")
    for i, ch in enumerate(text):
        depth += (ch == "(") - (ch == ")")
        if depth == 0 and ch in "+-" and i > 0 and text[i - 1] == " ":
            bare_sum = True
    return f"{name}*({text})" if bare_sum else f"{name}*{text}"


# -- metric recovery -----------------------------------------------------------------

@dataclass(frozen=True)
class MetricBasis:
    basis: tuple  # of (p, q, r)
    window: AnsatzWindow

    @property
    def dimension(self) -> int:
        return len(self.basis)


def recover_metric(gauge: GeodesicSystem2, window: AnsatzWindow | None = None) -> MetricBasis:
    """Basis of window-supported (p, q, r) solving the metric compatibility equations."""
    _require_flat(gauge)
    last = None
    for win in _windows(window):
        funcs = solve_operator(metric_operator(gauge), [win.monomials()] * 3)
        if funcs is None:
            support = laurent_support(win)
            solved = solve_ansatz(lambda vals: metric_residuals(gauge, *vals), [support] * 3)
            funcs = solved[1] if solved is not None else []
        basis = tuple(tuple(t) for t in funcs)
        for triple in basis:
            if not all(r.is_zero() for r in metric_residuals(gauge, *triple)):
                raise SolverError("recovered metric fails re-verification")
        last = MetricBasis(basis, win)
        if basis:
            return last
    raise SolverError(f"no metric found in window {last.window if last else window}; widen with --window")


@dataclass(frozen=True)
class SelectedMetric:
    p: RF
    q: RF
    r: RF
    det: RF
    caveats: tuple = ()

    @property
    def pqr(self) -> tuple[RF, RF, RF]:
        return self.p, self.q, self.r


def select_metric(basis: Sequence[Sequence[RF]],
                  prefer: Sequence[RF] | None = None,
                  gauge: GeodesicSystem2 | None = None) -> SelectedMetric:
    """Deterministic nondegenerate metric from a basis.

    ``prefer`` (typically the Euclidean pullback through known flat
    coordinates) is taken first when ``gauge`` confirms it solves the same
    equations. Otherwise single elements are scanned, then pairwise sums.
    """
    if not basis:
        raise SolverError("empty metric basis")
    caveat = ("positivity of p*r - q^2 is not decided; the determinant is reported symbolically",)
    if prefer is not None and gauge is not None:
        p, q, r = (RF.coerce(v) for v in prefer)
        det = p * r - q * q
        if not det.is_zero() and all(v.is_zero() for v in metric_residuals(gauge, p, q, r)):
            return SelectedMetric(p, q, r, det, caveat)
    basis = [tuple(RF.coerce(v) for v in b) for b in basis]
    candidates = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            candidates.append(tuple(x + y for x, y in zip(basis[i], basis[j])))
    for p, q, r in candidates:
        det = p * r - q * q
        if not det.is_zero():
            return SelectedMetric(p, q, r, det, caveat)
    raise SolverError("every scanned metric combination is degenerate (p*r - q^2 = 0)")


# -- flat coordinates --------------------------------------------------------------

@dataclass(frozen=True)
class FlatCoordinates:
    status: str
    basis: tuple  # functions with vanishing covariant Hessian, constant 1 first
    point_map: PointMap | None
    window: AnsatzWindow

    @property
    def dimension(self) -> int:
        return len(self.basis)


def flat_coordinates(gauge: GeodesicSystem2, window: AnsatzWindow | None = None) -> FlatCoordinates:
    """Nullspace of the covariant Hessian within the window.

    On success the space is span{1, u, v}; u and v have no constant term and
    are ordered by descending leading monomial.
    """
    _require_flat(gauge)
    conn = gauge.connection()
    result = None
    for win in _windows(window):
        solved = solve_operator(hessian_operator(conn), [win.monomials()])
        if solved is None:
            support = laurent_support(win)
            solved = solve_ansatz(lambda vals: covariant_hessian(conn, vals[0]), [support])
            solved = solved[1] if solved is not None else []
        funcs = [f[0] for f in solved]
        constants = [f for f in funcs if f.is_constant()]
        others = [f for f in funcs if not f.is_constant()]
        basis = tuple(constants + others)
        point_map = None
        if len(basis) == 3 and len(others) == 2:
            try:
                point_map = PointMap(others[0], others[1])
            except SolverError:
                point_map = None
        result = FlatCoordinates(FOUND if point_map else NOT_FOUND, basis, point_map, win)
        if point_map is not None:
            return result
    return result


# -- verification --------------------------------------------------------------------

@dataclass(frozen=True)
class TransformationCheck:
    ok: bool
    scale: RF | None
    residuals: tuple


def verify_transformation(point_map: PointMap, metric: Sequence[RF]) -> TransformationCheck:
    """Whether du^2 + dv^2 equals lambda * (p, q, r) for one positive constant lambda."""
    induced = point_map.pullback()
    target = [RF.coerce(v) for v in metric]
    scale = None
    for lhs, rhs in zip(induced, target):
        if not rhs.is_zero():
            scale = lhs / rhs
            break
    if scale is None or scale.is_zero() or scale.variables() & {"x", "y"}:
        residuals = tuple(a - b for a, b in zip(induced, target))
        return TransformationCheck(False, scale, residuals)
    residuals = tuple(a - scale * b for a, b in zip(induced, target))
    ok = all(r.is_zero() for r in residuals)
    if ok and not scale.variables() and scale.to_fraction() < 0:
        ok = False
    return TransformationCheck(ok, scale, residuals)


def verify_hessian(gauge: GeodesicSystem2, point_map: PointMap) -> bool:
    conn = gauge.connection()
    return all(h.is_zero() for f in (point_map.u, point_map.v) for h in covariant_hessian(conn, f))


def solution_family(point_map: PointMap) -> SolutionFamily:
    return SolutionFamily(point_map.u, point_map.v)


@dataclass(frozen=True)
class SolutionCheck:
    ok: bool
    eliminant: str
    remainder: RF


def _total(w: RF, slope: RF) -> RF:
    return differentiate(w, "x") + slope * differentiate(w, "y")


def _den_names(f: RF) -> set[str]:
    names = f.names
    return {n for n, e in zip(names, map(max, zip(*f.den.monoms()))) if e > 0}


def _cleared_residual(lhs: RF, values: dict, F: RF):
    """Numerator of ``lhs`` after substituting derivative values, up to a nonzero factor.

    The substitution runs over a common denominator of the values, which avoids a
    gcd per term; the extra factor is a product of value denominators.
    """
    values = {str(k): RF.coerce(v) for k, v in values.items()}
    ring = _ring_for(lhs.names + F.names + tuple(n for v in values.values() for n in v.names))
    names = [str(g) for g in ring.gens]
    if set(values) & _den_names(lhs):
        residual = lhs.subs(values)
        return residual.num.set_ring(ring), ring
    order = [n for n in values if n in names]
    pos = [names.index(n) for n in order]
    groups: dict[tuple, object] = {}
    for m, c in lhs.num.set_ring(ring).items():
        key = tuple(m[i] for i in pos)
        base = list(m)
        for i in pos:
            base[i] = 0
        groups[key] = groups.get(key, ring.zero) + ring({tuple(base): c})
    top = [max(k[j] for k in groups) for j in range(len(order))]
    nums = [values[n].num.set_ring(ring) for n in order]
    dens = [values[n].den.set_ring(ring) for n in order]
    total = ring.zero
    for key, coef in groups.items():
        term = coef
        for e, t, n, d in zip(key, top, nums, dens):
            if e:
                term = term * n ** e
            if t - e:
                term = term * d ** (t - e)
        total += term
    return total, ring


def verify_solution(family: SolutionFamily, ode) -> SolutionCheck:
    """Substitute the implicit family into a third-order equation and reduce.

    y', y'', y''' come from implicit differentiation of F = A*u + B*v - 1. The
    numerator of the residual is pseudo-reduced by the numerator of F in the
    first of A, B, y that occurs in it.
    """
    if not isinstance(ode, (QuinticForm, SemilinearForm, SecondOrderCubic)):
        raise TypeError(f"cannot verify against {type(ode).__name__}")
    F = family.relation()
    Fx, Fy = differentiate(F, "x"), differentiate(F, "y")
    if Fy.is_zero():
        raise SolverError("F_y vanishes identically; the family does not define y(x)")
    y1 = -Fx / Fy
    y2 = _total(y1, y1)
    y3 = _total(y2, y1)
    num, ring = _cleared_residual(ode.lhs(), {P1: y1, P2: y2, P3: y3}, F)
    rel = F.num.set_ring(ring)
    names = [str(g) for g in ring.gens]
    eliminant = next((n for n in (*family.constants, "y")
                      if n in names and rel.degree(ring.gens[names.index(n)]) > 0), "")
    if eliminant and num:
        num = num.prem(rel, ring.gens[names.index(eliminant)])
    num = _reduce_relations(num)
    remainder = RF(num) if num else RF.const(0)
    return SolutionCheck(remainder.is_zero(), eliminant, remainder)


# -- generators -------------------------------------------------------------------------

@dataclass(frozen=True)
class FlatSample:
    """A flat geodesic system built from a known point map, with its downstream forms."""

    point_map: PointMap
    metric: tuple
    gauge: GeodesicSystem2
    eq2: SecondOrderCubic
    quintic: QuinticForm
    semilinear: SemilinearForm
    seed: int | None = None


def flat_pullback_generator(point_map: PointMap, seed: int | None = None) -> FlatSample:
    """Pull back the Euclidean metric through ``point_map`` and run the forward pipeline."""
    p, q, r = point_map.pullback()
    metric = Metric.from_pqr(p, q, r)
    conn = christoffel(metric)
    gauge = GeodesicSystem2.from_connection(conn)
    eq2 = scalar_of(project(conn))
    return FlatSample(point_map, (p, q, r), gauge, eq2, third_quintic(eq2), third_semilinear(eq2), seed)


@dataclass(frozen=True)
class MapFamily:
    """Random maps u = x + s*m1, v = y + t*m2 with small Laurent monomials m1, m2."""

    exponents: tuple[int, int] = (-1, 2)
    coefficients: tuple[int, ...] = (-2, -1, 1, 2)
    min_degree: int = 2


def random_point_map(seed: int, family: MapFamily = MapFamily()) -> PointMap:
    rng = random.Random(seed)
    lo, hi = family.exponents
    monos = [(i, j) for i in range(lo, hi + 1) for j in range(lo, hi + 1)
             if i + j >= family.min_degree or (i < 0 or j < 0) and (i, j) != (0, 0)]
    for _ in range(100):
        (i1, j1), (i2, j2) = rng.choice(monos), rng.choice(monos)
        s, t = rng.choice(family.coefficients), rng.choice(family.coefficients)
        u = RF.var("x") + RF.monomial({"x": i1, "y": j1}, s)
        v = RF.var("y") + RF.monomial({"x": i2, "y": j2}, t)
        try:
            return PointMap(u, v)
        except SolverError:
            continue
    raise SolverError(f"seed {seed}: no nondegenerate map drawn")


def random_flat_sample(seed: int, family: MapFamily = MapFamily(),
                       require_cubic: bool = True) -> FlatSample:
    """Seeded flat sample; with ``require_cubic`` redraws until c is nonzero."""
    for attempt in range(100):
        point_map = random_point_map(seed * 1000 + attempt, family)
        sample = flat_pullback_generator(point_map, seed)
        if not require_cubic or not sample.eq2.c.is_zero():
            return sample
    raise SolverError(f"seed {seed}: every draw had c = 0")


# -- pipeline -----------------------------------------------------------------------------

@dataclass
class Construction:
    """Stages of the constructive pipeline; later stages are None when skipped."""

    gauge: GeodesicSystem2
    metric_basis: MetricBasis | None = None
    metric: SelectedMetric | None = None
    flat: FlatCoordinates | None = None
    point_map: PointMap | None = None
    transformation: TransformationCheck | None = None
    hessian_ok: bool | None = None
    family: SolutionFamily | None = None
    solution: SolutionCheck | None = None
    caveats: list = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return bool(self.solution and self.solution.ok and self.transformation and self.transformation.ok)


def construct(gauge: GeodesicSystem2, ode=None, window: AnsatzWindow | None = None,
              point_map: PointMap | None = None) -> Construction:
    """Run metric recovery, flat coordinates, and verification for a flat gauge.

    A supplied ``point_map`` (for instance one using extension symbols) is
    verified directly instead of being searched for.
    """
    out = Construction(gauge)
    try:
        out.metric_basis = recover_metric(gauge, window)
    except (SolverError, WindowError) as exc:
        out.caveats.append(f"metric recovery: {exc}")
    if point_map is None:
        try:
            out.flat = flat_coordinates(gauge, window)
        except WindowError as exc:
            out.caveats.append(f"flat coordinates: {exc}")
        if out.flat is not None and out.flat.status == FOUND:
            point_map = out.flat.point_map
        else:
            out.caveats.append("transformation not found in ansatz; declare extension symbols "
                               "and supply a map to verify one")
    out.point_map = point_map
    prefer = point_map.pullback() if point_map is not None else None
    if out.metric_basis is not None and out.metric_basis.basis:
        try:
            out.metric = select_metric(out.metric_basis.basis, prefer, gauge)
        except SolverError as exc:
            out.caveats.append(f"metric selection: {exc}")
    elif prefer is not None:
        try:
            out.metric = select_metric([prefer], prefer, gauge)
        except SolverError as exc:
            out.caveats.append(f"metric selection: {exc}")
    if point_map is None:
        return out
    out.hessian_ok = verify_hessian(gauge, point_map)
    if out.metric is not None:
        out.transformation = verify_transformation(point_map, out.metric.pqr)
    out.family = solution_family(point_map)
    if ode is not None:
        out.solution = verify_solution(out.family, ode)
    return out


__all__ = [
    "Construction", "FOUND", "FlatCoordinates", "FlatSample", "MapFamily", "MetricBasis",
    "NOT_FOUND", "PointMap", "SelectedMetric", "SolutionCheck", "SolutionFamily", "SolverError",
    "TransformationCheck", "construct", "flat_coordinates", "flat_pullback_generator",
    "random_flat_sample", "random_point_map", "recover_metric", "select_metric",
    "solution_family", "verify_hessian", "verify_solution", "verify_transformation",
]
