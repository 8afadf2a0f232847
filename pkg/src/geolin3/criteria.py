"""Linearizability criteria and verdicts for the third-order forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .ansatz import AnsatzWindow
from .cas import RationalFunction
from .geometry import GeodesicSystem2
from .reduction import (
    Candidate,
    QuinticForm,
    SecondOrderCubic,
    SemilinearForm,
    dx,
    dy,
    extract_degenerate,
    extract_quintic,
    extract_semilinear,
    third_quintic,
)

RF = RationalFunction

LINEARIZABLE = "linearizable"
NOT_LINEARIZABLE = "not-linearizable"
NOT_IN_CLASS = "not-in-class"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class Gauge:
    """A split of (h, g) into (a, e) and (f, b) with h = a - 2e, g = f - 2b."""

    name: str
    system: GeodesicSystem2

    @classmethod
    def from_abef(cls, name: str, eq2: SecondOrderCubic, a, b, e, f) -> "Gauge":
        a, b, e, f = (RF.coerce(v) for v in (a, b, e, f))
        if a - 2 * e != eq2.h or f - 2 * b != eq2.g:
            raise ValueError(f"gauge {name} violates h = a - 2e, g = f - 2b")
        return cls(name, GeodesicSystem2(a, b, eq2.c, eq2.d, e, f))


@dataclass
class Verdict:
    status: str
    residuals: dict = field(default_factory=dict)
    caveats: list = field(default_factory=list)
    witness: Gauge | None = None
    eq2: SecondOrderCubic | None = None
    candidates: list = field(default_factory=list)
    chosen_constant: RF | None = None
    reason: str = ""

    def failing(self) -> list[str]:
        return [k for k, r in self.residuals.items() if not r.is_zero()]


# -- residual families ---------------------------------------------------------

def _lie_terms(sys: GeodesicSystem2):
    a, b, c, d, e, f = sys.as_tuple()
    yield "lie_1", dy(a) - dx(b) + b * e - c * d
    yield "lie_2", dy(b) - dx(c) + (a * c - b * b) + (b * f - c * e)
    yield "lie_3", dy(d) - dx(e) - (a * e - b * d) - (d * f - e * e)
    yield "lie_4", dx(b + f) - dy(a + e)


def lie_residuals(sys: GeodesicSystem2) -> dict[str, RF]:
    """The four flatness conditions on the coefficients a..f."""
    return dict(_lie_terms(sys))


def scalar_residuals(eq2: SecondOrderCubic) -> dict[str, RF]:
    """The two gauge-independent criteria on (c, g, h, d).

    These carry the terms 6*c*d_y and 6*d*c_x, which vanish on the worked
    examples but not on general flat systems; see :func:`scalar_residuals_short`.
    """
    c, g, h, d = eq2.as_tuple()
    return {
        "scalar_1": 3 * dx(c * h) + 3 * d * dy(c) + 6 * c * dy(d) - 2 * g * dx(g) - g * dy(h)
                    - 3 * dx(dx(c)) - 2 * dy(dx(g)) - dy(dy(h)),
        "scalar_2": 3 * dy(d * g) + 3 * c * dx(d) + 6 * d * dx(c) - 2 * h * dy(h) - h * dx(g)
                    - 3 * dy(dy(d)) - 2 * dy(dx(h)) - dx(dx(g)),
    }


def scalar_residuals_short(eq2: SecondOrderCubic) -> dict[str, RF]:
    """The scalar criteria without the c*d_y and d*c_x terms (cross-reference only)."""
    c, g, h, d = eq2.as_tuple()
    return {
        "scalar_1": 3 * dx(c * h) + 3 * d * dy(c) - 2 * g * dx(g) - g * dy(h)
                    - 3 * dx(dx(c)) - 2 * dy(dx(g)) - dy(dy(h)),
        "scalar_2": 3 * dy(d * g) + 3 * c * dx(d) - 2 * h * dy(h) - h * dx(g)
                    - 3 * dy(dy(d)) - 2 * dy(dx(h)) - dx(dx(g)),
    }


def gauge_candidates(eq2: SecondOrderCubic, extra: Sequence[Gauge] = ()) -> list[Gauge]:
    """Canonical gauges in search order: ab0, be0, ef0, af0, then user gauges."""
    c, g, h, d = eq2.as_tuple()
    return [
        Gauge.from_abef("ab0", eq2, a=0, b=0, e=-h / 2, f=g),
        Gauge.from_abef("be0", eq2, a=h, b=0, e=0, f=g),
        Gauge.from_abef("ef0", eq2, a=h, b=-g / 2, e=0, f=0),
        Gauge.from_abef("af0", eq2, a=0, b=-g / 2, e=-h / 2, f=0),
        *extra,
    ]


GAUGE_NAMES = ("ab0", "be0", "ef0", "af0")


def special_gauge_residuals_be0(eq2: SecondOrderCubic) -> dict[str, RF]:
    """Flatness of the b = e = 0 gauge, and the combined delta identity."""
    c, g, h, d = eq2.as_tuple()
    delta = third_quintic(eq2).delta
    return {
        "hy_cd": dy(h) - c * d,
        "cx_ch": dx(c) - c * h,
        "dy_dg": dy(d) - d * g,
        "gx_hy": dx(g) - dy(h),
        "hy_delta": dy(h) - (delta / 3 - g * h),
    }


def auxiliary_residuals_15a(sys: GeodesicSystem2) -> dict[str, RF]:
    """The scalar criteria written with the auxiliary variables g = f - 2b, h = a - 2e.

    Cross-reference only; verdicts never use these.
    """
    a, b, c, d, e, f = sys.as_tuple()
    h, g = a - 2 * e, f - 2 * b
    return {
        "aux_1": 3 * dx(b) - 2 * dx(g) + dy(h) - 3 * b * e - 3 * c * d,
        "aux_2": dy(b) - dx(c) + b * b + b * g + c * h - c * e,
        "aux_3": dy(d) + dx(e) - b * d - d * g - e * e + e * h,
        "aux_4": 3 * dy(e) - 2 * dy(h) - dx(g) + 3 * b * e + 3 * c * d,
    }


def find_witness(eq2: SecondOrderCubic, extra: Sequence[Gauge] = (),
                 order: Sequence[str] | None = None) -> Gauge | None:
    """First gauge (in search order) whose geodesic system is flat."""
    gauges = gauge_candidates(eq2, extra)
    if order is not None:
        gauges = [gg for name in order for gg in gauges if gg.name == name]
    for gauge in gauges:
        # lazy, so a gauge is rejected at its first nonzero residual
        if all(r.is_zero() for _, r in _lie_terms(gauge.system)):
            return gauge
    return None


# -- verdicts -------------------------------------------------------------------

@dataclass
class VerdictOptions:
    hint: SecondOrderCubic | None = None
    gauges: Sequence[Gauge] = ()
    gauge_order: Sequence[str] | None = None
    window: AnsatzWindow | None = None
    search_witness: bool = True


def _criteria_cascade(candidates: list[Candidate], options: VerdictOptions,
                      caveats: list) -> Verdict:
    passing = [c for c in candidates if c.passed]
    if not passing:
        best = candidates[-1] if candidates else None
        residuals = dict(best.residuals) if best else {}
        return Verdict(NOT_LINEARIZABLE, residuals, caveats, candidates=candidates,
                       eq2=best.eq2 if best else None,
                       reason="coefficient consistency fails for every candidate")
    results = []
    for cand in passing:
        res = {**cand.residuals, **scalar_residuals(cand.eq2)}
        results.append((cand, res))
    good = [(c, r) for c, r in results if all(v.is_zero() for v in r.values())]
    if not good:
        cand, res = results[-1]
        return Verdict(NOT_LINEARIZABLE, res, caveats, eq2=cand.eq2, candidates=candidates,
                       reason="scalar criteria fail")
    cand, res = good[0]
    if len(good) > 1:
        caveats = caveats + [f"{len(good)} sign branches pass; reporting all, first is primary"]
    witness = None
    if options.search_witness:
        witness = find_witness(cand.eq2, options.gauges, options.gauge_order)
        if witness is None:
            caveats = caveats + ["no flat gauge among the canonical choices; construction unavailable"]
        else:
            res = {**res, **lie_residuals(witness.system)}
    return Verdict(LINEARIZABLE, res, caveats, witness, cand.eq2, [c for c, _ in good])


def verdict_quintic(q: QuinticForm, options: VerdictOptions | None = None) -> Verdict:
    options = options or VerdictOptions()
    ext = extract_quintic(q)
    if ext.status == "degenerate":
        ext = extract_degenerate(q, options.hint, options.window)
    if ext.status == NOT_IN_CLASS:
        return Verdict(NOT_IN_CLASS, reason=ext.reason)
    if ext.status == UNDECIDED:
        return Verdict(UNDECIDED, reason=ext.reason)
    return _criteria_cascade(list(ext.candidates), options, list(ext.caveats))


def verdict_second(eq2: SecondOrderCubic, options: VerdictOptions | None = None) -> Verdict:
    options = options or VerdictOptions()
    return _criteria_cascade([Candidate(eq2)], options, [])


def _resolve_constant(eq2: SecondOrderCubic):
    """Constant d0 with scalar criteria vanishing for d + d0, if one exists."""
    base = scalar_residuals(eq2)
    shifted = scalar_residuals(SecondOrderCubic(eq2.c, eq2.g, eq2.h, eq2.d + 1))
    slopes = {k: shifted[k] - base[k] for k in base}
    d0 = None
    for k in base:
        if slopes[k].is_zero():
            continue
        value = -base[k] / slopes[k]
        if value.variables() & {"x", "y"}:
            return None
        d0 = value
        break
    return d0 if d0 is not None else RF.const(0)


def verdict_semilinear(s: SemilinearForm, options: VerdictOptions | None = None) -> Verdict:
    options = options or VerdictOptions()
    ext = extract_semilinear(s, options.window)
    if ext.status == NOT_IN_CLASS:
        return Verdict(NOT_IN_CLASS, dict(ext.candidate.residuals), reason=ext.reason)
    if ext.status == UNDECIDED:
        return Verdict(UNDECIDED, dict(ext.candidate.residuals), reason=ext.reason)
    cand = ext.candidate
    if not cand.passed:
        return Verdict(NOT_LINEARIZABLE, dict(cand.residuals), list(ext.caveats), eq2=cand.eq2,
                       reason="semi-linear coefficient constraints fail")
    d0 = _resolve_constant(cand.eq2)
    caveats = list(ext.caveats)
    if d0 is None:
        d0 = RF.const(0)
        caveats.append("no constant shift of d satisfies the scalar criteria")
    eq2 = SecondOrderCubic(cand.eq2.c, cand.eq2.g, cand.eq2.h, cand.eq2.d + d0)
    verdict = _criteria_cascade([Candidate(eq2, dict(cand.residuals))], options, caveats)
    verdict.chosen_constant = d0
    return verdict
