"""Command-line front end: check, linearize, generate, verify.

Exit codes: 0 linearizable (or all checks pass), 1 not linearizable (or a
check fails), 2 not in class, 3 undecided, 4 input error.

The text report is itself valid input: every report line is a ``#`` comment
except the echoed canonical input, so piping a report back through ``check``
reproduces the verdict.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .ansatz import AnsatzWindow, WindowError
from .cas import RationalFunction
from .cas.extensions import ExtensionError
from .criteria import (
    GAUGE_NAMES,
    LINEARIZABLE,
    NOT_IN_CLASS,
    NOT_LINEARIZABLE,
    UNDECIDED,
    Gauge,
    Verdict,
    VerdictOptions,
    verdict_quintic,
    verdict_second,
    verdict_semilinear,
)
from .geometry import GeodesicSystem2
from .parser import (
    OdeInput,
    ParseError,
    format_declarations,
    format_document,
    format_ode,
    format_value,
    parse,
)
from .reduction import QuinticForm, SecondOrderCubic, SemilinearForm, project, scalar_of
from .solver import (
    PointMap,
    SolverError,
    construct,
    flat_pullback_generator,
    random_flat_sample,
    solution_family,
    verify_solution,
    verify_transformation,
)

RF = RationalFunction
EXIT = {LINEARIZABLE: 0, NOT_LINEARIZABLE: 1, NOT_IN_CLASS: 2, UNDECIDED: 3}
INPUT_ERROR = 4


class InputError(ValueError):
    pass


@dataclass
class Report:
    """Ordered key/value report; values are strings, lists, or nested dicts."""

    command: str
    input: str = ""
    fields: dict = field(default_factory=dict)
    exit_code: int = 0

    def as_dict(self) -> dict:
        return {"command": self.command, **self.fields, "exit_code": self.exit_code,
                "input": self.input}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"# command: {self.command}"]
        for key, value in self.fields.items():
            lines.extend(_render(key, value, 0))
        lines.append(f"# exit_code: {self.exit_code}")
        if self.input:
            lines.append("# input:")
            lines.append(self.input.rstrip("\n"))
        return "\n".join(lines) + "\n"


def _render(key, value, depth):
    pad = "  " * depth
    if isinstance(value, dict):
        if not value:
            return [f"# {pad}{key}: {{}}"]
        out = [f"# {pad}{key}:"]
        for k, v in value.items():
            out.extend(_render(k, v, depth + 1))
        return out
    if isinstance(value, list):
        if not value:
            return [f"# {pad}{key}: []"]
        out = [f"# {pad}{key}:"]
        for item in value:
            if isinstance(item, dict):
                first = True
                for k, v in item.items():
                    sub = _render(k, v, depth + 2)
                    if first:
                        sub[0] = f"# {pad}  - " + sub[0][len(f'# {pad}    '):]
                        first = False
                    out.extend(sub)
            elif isinstance(item, str) and "\n" in item:
                body = item.rstrip("\n").split("\n")
                out.append(f"# {pad}  - {body[0]}")
                out.extend(f"# {pad}    {line}" for line in body[1:])
            else:
                out.append(f"# {pad}  - {item}")
        return out
    if isinstance(value, str) and "\n" in value:
        return [f"# {pad}{key}: |"] + [f"# {pad}  {line}" for line in value.rstrip("\n").split("\n")]
    return [f"# {pad}{key}: {value}"]


# -- serialization helpers ------------------------------------------------------------

def _rf(v) -> str:
    return str(v)


def _eq2(eq2: SecondOrderCubic | None):
    if eq2 is None:
        return {}
    return {"equation": format_ode(eq2), **{n: _rf(v) for n, v in zip("cghd", eq2.as_tuple())}}


def _residuals(res: dict) -> dict:
    return {k: _rf(v) for k, v in res.items()}


def _gauge(gauge: Gauge | None):
    if gauge is None:
        return {}
    return {"name": gauge.name, **{n: _rf(v) for n, v in zip("abcdef", gauge.system.as_tuple())}}


def _verdict_fields(verdict: Verdict) -> dict:
    out = {
        "status": verdict.status,
        "reason": verdict.reason or "-",
        "eq2": _eq2(verdict.eq2),
        "residuals": _residuals(verdict.residuals),
        "failing": verdict.failing(),
    }
    if len(verdict.candidates) > 1:
        out["branches"] = [_eq2(c.eq2) for c in verdict.candidates]
    if verdict.chosen_constant is not None:
        out["chosen_constant"] = _rf(verdict.chosen_constant)
    out["gauge"] = _gauge(verdict.witness)
    out["caveats"] = list(verdict.caveats)
    return out


# -- options ------------------------------------------------------------------------------

@dataclass
class Options:
    form: str = "auto"
    gauge: str = "auto"
    window: AnsatzWindow | None = None
    hint_text: str | None = None
    json: bool = False
    timing: bool = False


def load(text: str, options: Options) -> OdeInput:
    try:
        return parse(text, options.form)
    except (ParseError, ExtensionError) as exc:
        raise InputError(str(exc)) from exc


def _hint(doc: OdeInput, options: Options) -> SecondOrderCubic | None:
    if options.hint_text is None:
        return doc.payload.get("hint")
    # hint files may use the main file's declarations
    text = "\n".join(format_declarations(doc.declarations)) + "\n" + options.hint_text
    try:
        hint_doc = parse(text)
        parse(format_document(doc))  # restore the main file's registry
    except (ParseError, ExtensionError) as exc:
        raise InputError(f"hint: {exc}") from exc
    if "hint" not in hint_doc.payload:
        raise InputError("hint file has no hint: section")
    return hint_doc.payload["hint"]


def _verdict_options(doc: OdeInput, options: Options) -> VerdictOptions:
    order = None
    if options.gauge == "file":
        if "gauge" not in doc.payload:
            raise InputError("--gauge file needs a gauge: section in the input")
        order = ["file"]
    elif options.gauge != "auto":
        order = [options.gauge]
    return VerdictOptions(hint=_hint(doc, options), gauge_order=order, window=options.window)


def run_verdict(doc: OdeInput, options: Options) -> Verdict:
    ode = doc.ode
    vo = _verdict_options(doc, options)
    if isinstance(ode, QuinticForm):
        return _with_file_gauge(lambda o: verdict_quintic(ode, o), doc, vo)
    if isinstance(ode, SemilinearForm):
        return _with_file_gauge(lambda o: verdict_semilinear(ode, o), doc, vo)
    if isinstance(ode, SecondOrderCubic):
        return _with_file_gauge(lambda o: verdict_second(ode, o), doc, vo)
    if "geodesic" in doc.payload:
        system = doc.payload["geodesic"]
        vo.gauges = [Gauge("geodesic", system)]
        if vo.gauge_order is None:
            vo.gauge_order = ["geodesic", *GAUGE_NAMES]
        return verdict_second(scalar_of(project(system.connection())), vo)
    raise InputError("input has no ode: or geodesic: section")


def _with_file_gauge(run, doc: OdeInput, vo: VerdictOptions) -> Verdict:
    """With a gauge: section, learn eq2 first, then try the file gauge before the canonical ones."""
    spec = doc.payload.get("gauge")
    if spec is None:
        return run(vo)
    probe = run(VerdictOptions(vo.hint, (), None, vo.window, search_witness=False))
    if probe.status != LINEARIZABLE:
        return probe
    for cand in probe.candidates:
        try:
            gauge = Gauge.from_abef("file", cand.eq2, spec["a"], spec["b"], spec["e"], spec["f"])
        except ValueError:
            continue
        vo.gauges = [gauge]
        if vo.gauge_order is None:
            vo.gauge_order = ["file", *GAUGE_NAMES]
        return run(vo)
    verdict = run(vo)
    verdict.caveats = list(verdict.caveats) + ["gauge section matches no passing branch; ignored"]
    return verdict


# -- commands -------------------------------------------------------------------------------

def cmd_check(text: str, options: Options) -> Report:
    doc = load(text, options)
    report = Report("check", format_document(doc))
    report.fields["kind"] = doc.kind
    verdict = run_verdict(doc, options)
    report.fields.update(_verdict_fields(verdict))
    report.exit_code = EXIT[verdict.status]
    return report


def cmd_linearize(text: str, options: Options) -> Report:
    doc = load(text, options)
    report = Report("linearize", format_document(doc))
    report.fields["kind"] = doc.kind
    verdict = run_verdict(doc, options)
    report.fields.update(_verdict_fields(verdict))
    report.exit_code = EXIT[verdict.status]
    if verdict.status != LINEARIZABLE:
        return report
    if verdict.witness is None:
        report.fields["construction"] = {"status": "unavailable",
                                         "reason": "no flat gauge; supply one with --gauge file"}
        return report
    ode = doc.ode if doc.ode is not None else verdict.eq2
    try:
        built = construct(verdict.witness.system, ode, options.window, doc.payload.get("map"))
    except WindowError as exc:
        raise InputError(str(exc)) from exc
    report.fields["construction"] = _construction_fields(built)
    return report


def _construction_fields(built) -> dict:
    out: dict = {"status": "complete" if built.complete else "partial"}
    if built.metric_basis is not None:
        out["metric_space"] = {
            "dimension": str(built.metric_basis.dimension),
            "window": str(built.metric_basis.window),
            "basis": [format_value(tuple(b)) for b in built.metric_basis.basis],
        }
    if built.metric is not None:
        out["metric"] = {"p": _rf(built.metric.p), "q": _rf(built.metric.q), "r": _rf(built.metric.r),
                         "det": _rf(built.metric.det)}
    if built.flat is not None:
        out["flat_coordinates"] = {
            "status": built.flat.status,
            "dimension": str(built.flat.dimension),
            "window": str(built.flat.window),
            "basis": [_rf(f) for f in built.flat.basis],
        }
    if built.point_map is not None:
        out["point_map"] = format_value(built.point_map)
    verification = {}
    if built.hessian_ok is not None:
        verification["covariant_hessian"] = _bool(built.hessian_ok)
    if built.transformation is not None:
        verification["transformation"] = _bool(built.transformation.ok)
        verification["scale"] = _rf(built.transformation.scale)
    if built.family is not None:
        out["solution"] = str(built.family)
    if built.solution is not None:
        verification["solution"] = _bool(built.solution.ok)
        verification["eliminant"] = built.solution.eliminant or "-"
    out["verification"] = verification
    if built.family is not None and built.solution is not None:
        out["summary"] = f"{built.family}, {'verified' if built.solution.ok else 'NOT verified'}"
    out["caveats"] = list(built.caveats)
    return out


def _bool(b: bool) -> str:
    return "true" if b else "false"


def cmd_verify(text: str, options: Options) -> Report:
    doc = load(text, options)
    report = Report("verify", format_document(doc))
    ode = doc.ode
    if ode is None and "geodesic" in doc.payload:
        ode = scalar_of(project(doc.payload["geodesic"].connection()))
    checks = {}
    ok = True
    point_map = doc.payload.get("map")
    if point_map is not None and "metric" in doc.payload:
        tc = verify_transformation(point_map, doc.payload["metric"])
        checks["transformation"] = _bool(tc.ok)
        checks["scale"] = _rf(tc.scale)
        ok &= tc.ok
    if point_map is not None and ode is not None:
        sc = verify_solution(solution_family(point_map), ode)
        checks["map_family"] = _bool(sc.ok)
        checks["map_family_equation"] = str(solution_family(point_map))
        ok &= sc.ok
    if "solution" in doc.payload:
        if ode is None:
            raise InputError("a solution: section needs an ode: to verify against")
        try:
            sc = verify_solution(doc.payload["solution"], ode)
        except SolverError as exc:
            raise InputError(str(exc)) from exc
        checks["solution"] = _bool(sc.ok)
        checks["eliminant"] = sc.eliminant or "-"
        ok &= sc.ok
    if not checks:
        raise InputError("nothing to verify: give a map: and/or solution: section")
    report.fields["kind"] = doc.kind
    report.fields["checks"] = checks
    report.fields["status"] = "verified" if ok else "failed"
    report.exit_code = 0 if ok else 1
    return report


def _fixture(sample_eq2: SecondOrderCubic, gauge: GeodesicSystem2 | None,
             point_map: PointMap | None, label: str, decls: list[str]) -> dict:
    from .reduction import third_quintic, third_semilinear

    q = third_quintic(sample_eq2)
    s = third_semilinear(sample_eq2)
    out = {"label": label, "eq2": format_ode(sample_eq2), "quintic": format_ode(q),
           "semilinear": format_ode(s)}
    lines = list(decls) + [f"ode: {format_ode(q)};"]
    if gauge is not None:
        out["geodesic"] = format_value(gauge)
        lines.append(f"gauge: a = {gauge.a}; b = {gauge.b}; e = {gauge.e}; f = {gauge.f};")
    if point_map is not None:
        out["map"] = format_value(point_map)
        out["solution"] = str(solution_family(point_map))
        lines.append(f"map: {format_value(point_map)};")
        lines.append(f"solution: {solution_family(point_map)};")
    out["document"] = "\n".join(lines) + "\n"
    return out


def cmd_generate(text: str | None, options: Options, seed: int = 0, count: int = 1) -> Report:
    fixtures = []
    source = ""
    if text is not None:
        doc = load(text, options)
        source = format_document(doc)
        decls = format_declarations(doc.declarations)
        if "map" in doc.payload:
            sample = flat_pullback_generator(doc.payload["map"])
            fixtures.append(_fixture(sample.eq2, sample.gauge, sample.point_map, "map", decls))
        elif "geodesic" in doc.payload:
            system = doc.payload["geodesic"]
            eq2 = scalar_of(project(system.connection()))
            fixtures.append(_fixture(eq2, system, None, "geodesic", decls))
        elif isinstance(doc.ode, SecondOrderCubic):
            fixtures.append(_fixture(doc.ode, None, None, "eq2", decls))
        else:
            raise InputError("generate needs a map:, geodesic: or second-order ode: section")
    else:
        if count < 1:
            raise InputError("--count must be at least 1")
        for s in range(seed, seed + count):
            try:
                sample = random_flat_sample(s)
            except SolverError as exc:
                raise InputError(str(exc)) from exc
            fixtures.append(_fixture(sample.eq2, sample.gauge, sample.point_map, f"seed {s}", []))
    report = Report("generate", source)
    report.fields["count"] = str(len(fixtures))
    report.fields["fixtures"] = [{k: v for k, v in f.items() if k != "document"} for f in fixtures]
    report.fields["documents"] = [f["document"] for f in fixtures]
    return report


# -- argument handling ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="geolin3", description="Linearizability of third-order ODEs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_file=True):
        if needs_file:
            p.add_argument("file", help="input file in the equation language ('-' for stdin)")
        p.add_argument("--form", default="auto", choices=["auto", "quintic", "semilinear", "second", "geodesic"])
        p.add_argument("--gauge", default="auto", choices=["auto", *GAUGE_NAMES, "file"])
        p.add_argument("--window", default=None, help="XMIN:XMAX,YMIN:YMAX (disables auto-widening)")
        p.add_argument("--hint", default=None, help="file with a hint: section for the c = 0 branch")
        p.add_argument("--json", action="store_true", help="JSON instead of the commented text report")
        p.add_argument("--timing", action="store_true", help="append wall-clock timing (not reproducible)")

    for name in ("check", "linearize", "verify"):
        common(sub.add_parser(name))
    gen = sub.add_parser("generate")
    gen.add_argument("file", nargs="?", default=None, help="map:, geodesic: or second-order ode: source")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--documents", action="store_true", help="print only the generated input documents")
    common(gen, needs_file=False)
    return ap


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        window = AnsatzWindow.parse(args.window) if args.window else None
        options = Options(args.form, args.gauge, window,
                          _read(args.hint) if args.hint else None, args.json, args.timing)
        if args.command == "generate":
            seed = int(os.environ.get("GEOLIN3_SEED", args.seed))
            text = _read(args.file) if args.file else None
            report = cmd_generate(text, options, seed, args.count)
            if args.documents:
                sys.stdout.write("\n".join(report.fields["documents"]))
                return 0
        else:
            text = _read(args.file)
            report = {"check": cmd_check, "linearize": cmd_linearize, "verify": cmd_verify}[args.command](
                text, options)
    except (InputError, WindowError, ValueError) as exc:
        sys.stderr.write(f"geolin3: error: {exc}\n")
        return INPUT_ERROR
    if args.timing:
        report.fields["timing_seconds"] = f"{time.perf_counter() - start:.3f}"
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
