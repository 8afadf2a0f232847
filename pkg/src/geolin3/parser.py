"""Input language for equations, gauges, metrics, maps and solution families.

A file is a list of declarations followed by sections::

    const k;
    ext s(y): d/dy = c;
    ext c(y): d/dy = -s;
    rel s^2 + c^2 = 1;
    ode: y''' - 3*x^2*y'^5 - 7*y'^3 - (6/x^2)*y' = 0;
    map: u = x*c; v = x*s;

An equation after a section keyword may be followed by bare equations that
continue the same section (``map: u = x*y; v = x/y;``). Without any keyword
the section is inferred from the left-hand side. Parsing resets and then
fills the global extension registry.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .cas import BinOp, Neg, Num, Pow, RationalFunction, Sym, extensions, normalize
from .cas.extensions import ExtensionError
from .cas.printing import format_monomial
from .geometry import GeodesicSystem2
from .reduction import P1, P2, P3, QuinticForm, SecondOrderCubic, SemilinearForm
from .solver import PointMap, SolutionFamily, SolverError

RF = RationalFunction

QUINTIC = "quintic3"
SEMILINEAR = "semilinear3"
SECOND = "second-order-cubic"
GEODESIC = "geodesic-system"
METRIC = "metric"
POINT_MAP = "point-map"
SOLUTION = "implicit-solution"

FORMS = {"auto": None, "quintic": QUINTIC, "semilinear": SEMILINEAR, "second": SECOND,
         "geodesic": GEODESIC}
SECTIONS = ("ode", "metric", "map", "solution", "gauge", "hint", "geodesic")
ROLE_NAMES = {
    "metric": ("p", "q", "r"),
    "map": ("u", "v"),
    "geodesic": ("a", "b", "c", "d", "e", "f"),
    "gauge": ("a", "b", "e", "f"),
    "hint": ("g", "h", "d"),
}
COORDS = ("x", "y")
DERIVS = (P1, P2, P3)


class ParseError(ValueError):
    """Input error with a 1-based source location."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


class ShapeError(ParseError):
    """The equation has a term outside the target shape."""


# -- tokens ------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # ident, int, op, end
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<float>\d+\.\d*|\.\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<op>[-+*/^()=;:,])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "float":
            raise ParseError("floating-point literals are not supported; use fractions like 3/2", line, col)
        if kind != "ws":
            tok = m.group()
            if kind == "ident" and "'" in tok and tok not in DERIVS:
                raise ParseError(f"only y', y'', y''' may carry primes, got {tok!r}", line, col)
            out.append(Token(kind, tok, line, col))
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    out.append(Token("end", "", line, pos - line_start + 1))
    return out


# -- documents -------------------------------------------------------------------

@dataclass(frozen=True)
class Declarations:
    constants: tuple[str, ...] = ()
    symbols: tuple = ()  # ExtensionSymbol, in declaration order
    relations: tuple = ()  # Relation

    def names(self) -> set[str]:
        return set(self.constants) | {s.name for s in self.symbols}


@dataclass
class OdeInput:
    """Parsed file: the primary kind, payload by role, and declarations.

    Roles are ``ode``, ``metric``, ``map``, ``solution``, ``gauge``, ``hint``
    and ``geodesic``; values are domain objects.
    """

    kind: str
    payload: dict = field(default_factory=dict)
    declarations: Declarations = field(default_factory=Declarations)

    @property
    def ode(self):
        return self.payload.get("ode")


@dataclass
class _Stmt:
    section: str
    lhs: object
    rhs: object
    tok: Token


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.known: set[str] = set()

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "end":
            self.fail(f"expected {text!r}, found {self._show(self.tok)}")
        return self.take()

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            self.fail(f"expected an identifier, found {self._show(self.tok)}")
        return self.take()

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col)

    @staticmethod
    def _show(tok: Token) -> str:
        return "end of input" if tok.kind == "end" else repr(tok.text)

    # expressions
    def expr(self, extra: frozenset = frozenset()):
        node = self.term(extra)
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.take().text
            node = BinOp(op, node, self.term(extra))
        return node

    def term(self, extra):
        node = self.unary(extra)
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = self.take().text
            node = BinOp(op, node, self.unary(extra))
        return node

    def unary(self, extra):
        if self.tok.kind == "op" and self.tok.text in ("+", "-"):
            op = self.take().text
            inner = self.unary(extra)
            return Neg(inner) if op == "-" else inner
        return self.power(extra)

    def power(self, extra):
        base = self.atom(extra)
        if self.tok.kind == "op" and self.tok.text == "^":
            self.take()
            sign = 1
            if self.tok.text in ("+", "-") and self.tok.kind == "op":
                sign = -1 if self.take().text == "-" else 1
            if self.tok.kind != "int":
                self.fail("exponents must be integer literals")
            return Pow(base, Num(Fraction(sign * int(self.take().text))))
        return base

    def atom(self, extra):
        t = self.tok
        if t.kind == "int":
            self.take()
            return Num(Fraction(int(t.text)))
        if t.kind == "ident":
            self.take()
            if t.text not in self.known and t.text not in extra:
                self.fail(f"undeclared identifier {t.text!r}", t)
            return Sym(t.text)
        if t.text == "(":
            self.take()
            node = self.expr(extra)
            self.expect(")")
            return node
        self.fail(f"expected an expression, found {self._show(t)}")

    # declarations
    def scan_declarations(self) -> tuple[list[str], list[tuple[str, tuple, Token]]]:
        """First pass over leading declarations: names only."""
        consts, exts = [], []
        j = 0
        toks = self.toks
        while toks[j].kind == "ident" and toks[j].text in ("const", "ext", "rel"):
            word = toks[j].text
            if word in ("const", "ext") and toks[j + 1].kind == "ident":
                (consts if word == "const" else exts).append(toks[j + 1].text)
            while toks[j].kind != "end" and toks[j].text != ";":
                j += 1
            if toks[j].kind == "end":
                break
            j += 1
        return consts, exts

    def declarations(self) -> Declarations:
        consts, exts = self.scan_declarations()
        self.known = set(COORDS) | set(consts) | set(exts)
        extensions.clear()
        seen_consts: list[str] = []
        symbols = []
        relations = []
        pending_rels = []
        while self.tok.kind == "ident" and self.tok.text in ("const", "ext", "rel"):
            word = self.take()
            if word.text == "const":
                name = self.expect_ident()
                self._check_new_name(name, seen_consts, symbols)
                seen_consts.append(name.text)
                self.expect(";")
            elif word.text == "ext":
                name = self.expect_ident()
                self._check_new_name(name, seen_consts, symbols)
                self.expect("(")
                deps = [self.expect_ident()]
                while self.tok.text == ",":
                    self.take()
                    deps.append(self.expect_ident())
                for d in deps:
                    if d.text not in COORDS:
                        self.fail(f"extension symbols depend on x or y, not {d.text!r}", d)
                self.expect(")")
                self.expect(":")
                derivs = {}
                while True:
                    d_tok = self.expect_ident()
                    if d_tok.text != "d":
                        self.fail("expected a derivative like d/dy", d_tok)
                    self.expect("/")
                    wrt = self.expect_ident()
                    var = wrt.text[1:] if wrt.text.startswith("d") else ""
                    if var not in [d.text for d in deps]:
                        self.fail(f"derivative {wrt.text!r} is not with respect to a declared argument", wrt)
                    self.expect("=")
                    derivs[var] = self.expr()
                    if self.tok.text != ",":
                        break
                    self.take()
                missing = [d.text for d in deps if d.text not in derivs]
                if missing:
                    self.fail(f"extension {name.text!r} needs d/d{missing[0]}", name)
                self.expect(";")
                symbols.append((name, derivs))
                extensions.declare(name.text, {})
            else:
                lhs = self.expr()
                self.expect("=")
                rhs = self.expr()
                pending_rels.append((word, lhs, rhs))
                self.expect(";")
        declared = []
        for name, derivs in symbols:
            sym = extensions.declare(name.text, {v: normalize(e) for v, e in derivs.items()})
            declared.append(sym)
        for word, lhs, rhs in pending_rels:
            try:
                relations.append(extensions.declare_relation(normalize(lhs), normalize(rhs)))
            except ExtensionError as exc:
                self.fail(str(exc), word)
        return Declarations(tuple(seen_consts), tuple(declared), tuple(relations))

    def _check_new_name(self, name: Token, consts, symbols):
        taken = set(consts) | {t.text for t, _ in symbols}
        if name.text in taken:
            self.fail(f"{name.text!r} is declared twice", name)
        if name.text in COORDS or name.text in DERIVS or name.text in SECTIONS:
            self.fail(f"{name.text!r} is reserved", name)

    # statements
    def statements(self) -> list[_Stmt]:
        out = []
        section = None
        if self.tok.kind == "end":
            self.fail("expected at least one statement")
        while self.tok.kind != "end":
            t = self.tok
            if t.kind == "ident" and t.text in ("const", "ext", "rel"):
                self.fail("declarations must precede statements")
            if t.kind == "ident" and t.text in SECTIONS and self.peek().text == ":":
                section = self.take().text
                self.take()
            out.append(self.statement(section))
            if self.tok.kind != "end":
                self.expect(";")
        return out

    def statement(self, section: str | None) -> _Stmt:
        start = self.tok
        if self.tok.kind == "ident" and self.peek().text == "=" and section != "ode" and (
                section in ROLE_NAMES or section is None and _role_section(self.tok.text)):
            role = self.take()
            self.take()
            rhs = self.expr()
            return _Stmt(section or _role_section(role.text), role.text, rhs, start)
        extra = frozenset(("A", "B")) if section in (None, "solution") else frozenset()
        extra |= frozenset(DERIVS) if section in (None, "ode") else frozenset()
        lhs = self.expr(extra)
        rhs = Num(Fraction(0))
        if self.tok.text == "=":
            self.take()
            rhs = self.expr(extra)
        if section is None:
            names = _symbols(lhs) | _symbols(rhs)
            section = "ode" if names & set(DERIVS) else "solution" if names & {"A", "B"} else None
            if section is None:
                self.fail("cannot tell which section this equation belongs to; add a keyword", start)
        if section in ROLE_NAMES:
            self.fail(f"{section} entries look like 'name = expression'", start)
        return _Stmt(section, lhs, rhs, start)


def _role_section(name: str) -> str | None:
    for section in ("map", "metric", "geodesic", "hint"):
        if name in ROLE_NAMES[section]:
            return section
    return None


def _symbols(node) -> set[str]:
    if isinstance(node, Sym):
        return {node.name}
    if isinstance(node, Neg):
        return _symbols(node.operand)
    if isinstance(node, (BinOp,)):
        return _symbols(node.left) | _symbols(node.right)
    if isinstance(node, Pow):
        return _symbols(node.base)
    return set()


# -- shape extraction --------------------------------------------------------------

def _deriv_parts(f: RF, tok: Token) -> dict[tuple[int, int, int], RF]:
    """Split f into coefficients of y'^i y''^j y'''^k (coefficients free of derivatives)."""
    den = f.denominator()
    if den.variables() & set(DERIVS):
        raise ShapeError("derivatives may not appear in denominators", tok.line, tok.col)
    out: dict[tuple[int, int, int], RF] = {}
    for exps, coeff in f.terms():
        key = tuple(exps.get(n, 0) for n in DERIVS)
        rest = {n: e for n, e in exps.items() if n not in DERIVS}
        out[key] = out.get(key, RF.const(0)) + RF.monomial(rest, coeff)
    return {k: v / den for k, v in out.items() if not v.is_zero()}


def _shape_name(key: tuple[int, int, int]) -> str:
    bits = []
    for n, e in zip(DERIVS, key):
        if e:
            bits.append(n if e == 1 else f"{n}^{e}")
    return "*".join(bits) or "1"


def _mismatch(key, why: str, tok: Token):
    raise ShapeError(f"term {_shape_name(key)} {why}", tok.line, tok.col)


def extract_ode(lhs: RF, form: str | None, tok: Token):
    """Match ``lhs = 0`` against a target shape; returns the domain object."""
    parts = _deriv_parts(lhs, tok)
    if not parts:
        raise ShapeError("the equation is identically zero", tok.line, tok.col)
    third = any(k[2] for k in parts)
    second_present = any(k[1] for k in parts)
    if form is None:
        form = (SEMILINEAR if second_present else QUINTIC) if third else SECOND
    if form in (QUINTIC, SEMILINEAR):
        lead_key = (0, 0, 1)
        for key in parts:
            if key[2] > 1:
                _mismatch(key, "has y''' to a power above 1", tok)
            if key[2] == 1 and key != lead_key:
                _mismatch(key, "multiplies y''' by lower derivatives", tok)
        if lead_key not in parts:
            raise ShapeError("no y''' term for a third-order form", tok.line, tok.col)
        lead = parts.pop(lead_key)
        parts = {k: v / lead for k, v in parts.items()}
        if form == QUINTIC:
            for key in parts:
                if key[1]:
                    _mismatch(key, "contains y'' (not allowed in the quintic form)", tok)
                if key[0] > 5:
                    _mismatch(key, "exceeds degree 5 in y'", tok)
            co = [parts.get((i, 0, 0), RF.const(0)) for i in range(6)]
            return QuinticForm(alpha=-co[5], beta=co[4], gamma=-co[3], delta=co[2],
                               epsilon=-co[1], phi=co[0])
        for key in parts:
            if key[1] > 1:
                _mismatch(key, "is nonlinear in y''", tok)
            if key[1] == 1 and key[0] > 2:
                _mismatch(key, "exceeds degree 2 in y' inside the y'' coefficient", tok)
            if key[1] == 0 and key[0] > 4:
                _mismatch(key, "exceeds degree 4 in y'", tok)
        a = [parts.get((i, 1, 0), RF.const(0)) for i in range(3)]
        b = [parts.get((i, 0, 0), RF.const(0)) for i in range(5)]
        return SemilinearForm(A2=a[2], A1=-a[1], A0=a[0],
                              B4=b[4], B3=-b[3], B2=b[2], B1=-b[1], B0=b[0])
    if form == SECOND:
        for key in parts:
            if key[2]:
                _mismatch(key, "is third order (use a third-order form)", tok)
            if key[1] > 1 or key[1] == 1 and key[0]:
                _mismatch(key, "is not of the shape y'' + cubic in y'", tok)
            if key[0] > 3:
                _mismatch(key, "exceeds degree 3 in y'", tok)
        if (0, 1, 0) not in parts:
            raise ShapeError("no y'' term for a second-order form", tok.line, tok.col)
        lead = parts.pop((0, 1, 0))
        co = [parts.get((i, 0, 0), RF.const(0)) / lead for i in range(4)]
        return SecondOrderCubic(c=co[3], g=-co[2], h=co[1], d=-co[0])
    raise ParseError(f"form {form!r} does not apply to an ode section", tok.line, tok.col)


def _solution(lhs: RF, tok: Token) -> SolutionFamily:
    a, b = RF.var("A"), RF.var("B")
    zero = {"A": 0, "B": 0}
    k = lhs.subs(zero)
    if not k.is_constant() or k.is_zero():
        raise ShapeError("solution must read A*u + B*v = 1", tok.line, tok.col)
    u = (lhs.subs({"A": 1, "B": 0}) - k) / (-k)
    v = (lhs.subs({"A": 0, "B": 1}) - k) / (-k)
    if not (lhs / (-k) - (a * u + b * v - 1)).is_zero():
        raise ShapeError("solution must be affine in A and B", tok.line, tok.col)
    if u.variables() & {"A", "B"} or v.variables() & {"A", "B"}:
        raise ShapeError("solution must be affine in A and B", tok.line, tok.col)
    return SolutionFamily(u, v)


# -- entry points ---------------------------------------------------------------------

def parse(text: str, form: str = "auto") -> OdeInput:
    """Parse a source file into an :class:`OdeInput`.

    ``form`` is one of auto, quintic, semilinear, second, geodesic.
    """
    if form not in FORMS:
        raise ParseError(f"unknown form {form!r}; expected one of {', '.join(FORMS)}")
    target = FORMS[form]
    p = _Parser(text)
    decls = p.declarations()
    stmts = p.statements()
    groups: dict[str, list[_Stmt]] = {}
    order: list[str] = []
    for st in stmts:
        if st.section not in groups:
            order.append(st.section)
        groups.setdefault(st.section, []).append(st)
    payload = {}
    for section in order:
        items = groups[section]
        if section == "ode":
            if len(items) > 1:
                raise ParseError("only one ode per file", items[1].tok.line, items[1].tok.col)
            st = items[0]
            lhs = _value(st.lhs, st.tok) - _value(st.rhs, st.tok)
            payload["ode"] = extract_ode(lhs, None if target == GEODESIC else target, st.tok)
        elif section == "solution":
            st = items[-1]
            payload["solution"] = _solution(_value(st.lhs, st.tok) - _value(st.rhs, st.tok), st.tok)
        else:
            payload[section] = _roles(section, items)
    kind = _primary_kind(payload, target)
    return OdeInput(kind, payload, decls)


def _value(node, tok: Token) -> RF:
    try:
        return normalize(node)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), tok.line, tok.col) from exc


def _roles(section: str, items: list[_Stmt]):
    allowed = ROLE_NAMES[section]
    values = {}
    for st in items:
        if st.lhs not in allowed:
            raise ParseError(f"{section} entries are {', '.join(allowed)}; got {st.lhs!r}",
                             st.tok.line, st.tok.col)
        if st.lhs in values:
            raise ParseError(f"{st.lhs!r} given twice", st.tok.line, st.tok.col)
        values[st.lhs] = _value(st.rhs, st.tok)
    first = items[0].tok
    zero = RF.const(0)
    try:
        if section == "map":
            _need(values, allowed, first)
            return PointMap(values["u"], values["v"])
        if section == "metric":
            _need(values, allowed, first)
            return tuple(values[n] for n in allowed)
        if section == "geodesic":
            return GeodesicSystem2(*(values.get(n, zero) for n in allowed))
        if section == "gauge":
            return {n: values.get(n, zero) for n in allowed}
        if section == "hint":
            return SecondOrderCubic(0, values.get("g", zero), values.get("h", zero), values.get("d", zero))
    except SolverError as exc:
        raise ParseError(str(exc), first.line, first.col) from exc
    raise AssertionError(section)


def _need(values, names, tok):
    missing = [n for n in names if n not in values]
    if missing:
        raise ParseError(f"missing {', '.join(missing)}", tok.line, tok.col)


def _primary_kind(payload: dict, target: str | None) -> str:
    ode = payload.get("ode")
    if isinstance(ode, QuinticForm):
        return QUINTIC
    if isinstance(ode, SemilinearForm):
        return SEMILINEAR
    if isinstance(ode, SecondOrderCubic):
        return SECOND
    if "geodesic" in payload:
        return GEODESIC
    if "metric" in payload:
        return METRIC
    if "map" in payload:
        return POINT_MAP
    if "solution" in payload:
        return SOLUTION
    if target == GEODESIC:
        return GEODESIC
    return next(iter(payload), "")


# -- printing ------------------------------------------------------------------------

def _is_sum(text: str) -> bool:
    depth = 0
    for i, ch in enumerate(text):
        depth += (ch == "(") - (ch == ")")
        if depth == 0 and ch in "+-" and i > 0 and text[i - 1] == " ":
            return True
    return False


def _signed_terms(terms: list[tuple[RF, str]]) -> str:
    """Join ``coef*power`` pieces with explicit signs; zero coefficients vanish.

    A string in place of a coefficient is an already formatted positive piece.
    """
    from .cas import leading_sign

    out = []
    for coef, power in terms:
        if isinstance(coef, str):
            negative, piece = False, coef
        else:
            if coef.is_zero():
                continue
            negative = leading_sign(coef) < 0
            mag = -coef if negative else coef
            text = str(mag)
            if not power:
                piece = f"({text})" if _is_sum(text) else text
            elif text == "1":
                piece = power
            elif "/" in text or _is_sum(text):
                piece = f"({text})*{power}"
            else:
                piece = f"{text}*{power}"
        if not out:
            out.append("-" + piece if negative else piece)
        else:
            out.append(("- " if negative else "+ ") + piece)
    return " ".join(out) if out else "0"


def _powers(var: str, top: int) -> list[str]:
    return [f"{var}^{k}" if k > 1 else var if k == 1 else "" for k in range(top, -1, -1)]


def format_ode(ode) -> str:
    if isinstance(ode, QuinticForm):
        co = [-ode.alpha, ode.beta, -ode.gamma, ode.delta, -ode.epsilon, ode.phi]
        return _signed_terms([(RF.const(1), P3)] + list(zip(co, _powers(P1, 5)))) + " = 0"
    if isinstance(ode, SemilinearForm):
        inner = _signed_terms(list(zip([ode.A2, -ode.A1, ode.A0], _powers(P1, 2))))
        terms: list = [(RF.const(1), P3)]
        if inner != "0":
            terms.append((f"({inner})*{P2}", ""))
        terms += list(zip([ode.B4, -ode.B3, ode.B2, -ode.B1, ode.B0], _powers(P1, 4)))
        return _signed_terms(terms) + " = 0"
    if isinstance(ode, SecondOrderCubic):
        co = [ode.c, -ode.g, ode.h, -ode.d]
        return _signed_terms([(RF.const(1), P2)] + list(zip(co, _powers(P1, 3)))) + " = 0"
    raise TypeError(f"not an equation: {type(ode).__name__}")


def _assignments(names, values) -> str:
    return "; ".join(f"{n} = {v}" for n, v in zip(names, values))


def format_value(value) -> str:
    """Canonical text for any domain value (without a section keyword)."""
    if isinstance(value, (QuinticForm, SemilinearForm, SecondOrderCubic)):
        return format_ode(value)
    if isinstance(value, PointMap):
        return _assignments(("u", "v"), (value.u, value.v))
    if isinstance(value, SolutionFamily):
        return str(value)
    if isinstance(value, GeodesicSystem2):
        return _assignments("abcdef", value.as_tuple())
    if isinstance(value, RF):
        return str(value)
    if isinstance(value, tuple) and len(value) == 3:
        return _assignments(("p", "q", "r"), value)
    if isinstance(value, dict):
        return _assignments(list(value), list(value.values()))
    raise TypeError(f"cannot print {type(value).__name__}")


def format_declarations(decls: Declarations) -> list[str]:
    lines = [f"const {n};" for n in decls.constants]
    for sym in decls.symbols:
        args = ", ".join(v for v in COORDS if v in sym.derivatives)
        derivs = ", ".join(f"d/d{v} = {sym.derivatives[v]}" for v in COORDS if v in sym.derivatives)
        lines.append(f"ext {sym.name}({args}): {derivs};")
    for rel in decls.relations:
        lines.append(f"rel {format_monomial(rel.lead)} = {rel.replacement};")
    return lines


def format_document(doc: OdeInput) -> str:
    """Canonical source text; parsing it reproduces ``doc``."""
    lines = format_declarations(doc.declarations)
    for section in SECTIONS:
        if section not in doc.payload:
            continue
        value = doc.payload[section]
        if section == "hint":
            value = {"g": value.g, "h": value.h, "d": value.d}
        lines.append(f"{section}: {format_value(value)};")
    return "\n".join(lines) + "\n"


def format_print(value) -> str:
    """``print`` for every artifact: documents, equations, maps, metrics, families."""
    if isinstance(value, OdeInput):
        return format_document(value)
    return format_value(value)


__all__ = [
    "Declarations", "FORMS", "GEODESIC", "METRIC", "OdeInput", "POINT_MAP", "ParseError",
    "QUINTIC", "SECOND", "SEMILINEAR", "SOLUTION", "ShapeError", "Token", "extract_ode",
    "format_declarations", "format_document", "format_ode", "format_print", "format_value",
    "parse", "tokenize",
]
