"""Line-oriented presentation files and ``key: value`` certificates.

Presentation grammar (``#`` starts a comment)::

    prime: <int>
    generator: <name> degree=<int> height=<int|odd>
    deltabar: <name> = <term> ('+' <term>)*        # or '= 0'
    coaction: <name> = <term> ('+' <term>)*        # module files only

    <term> := [<coeff> '*'] <mono> '|' <mono>
    <mono> := '1' | <name>['^'<int>] ('*' <name>['^'<int>])*

Syntax problems raise ParseError, meaning problems (undeclared names,
unreduced coefficients, parity conflicts, ...) raise SemanticError; both
carry a line and column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .fplin import is_prime
from .hopf import ODD, Element, GenSpec, HopfPresentation, TensorElement, TruncatedAlgebra


class FormatError(Exception):
    exit_code = 1

    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, column {col}: {msg}" if line else msg)
        self.line = line
        self.col = col


class ParseError(FormatError):
    exit_code = 2


class SemanticError(FormatError):
    exit_code = 3


_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_RE_PRIME = re.compile(r"^prime:\s*(\S+)\s*$")
_RE_GEN = re.compile(rf"^generator:\s*({_NAME})\s+degree=(\S+)\s+height=(\S+)\s*$")
_RE_DEF = re.compile(rf"^(deltabar|coaction):\s*({_NAME})\s*=\s*(.*?)\s*$")
_RE_FACTOR = re.compile(rf"^({_NAME})(?:\^(\d+))?$")
_RE_INT = re.compile(r"^\d+$")


@dataclass
class _Line:
    number: int
    text: str  # comment stripped
    raw: str


@dataclass
class PresentationFile:
    prime: int
    generators: list[GenSpec]
    deltabar: dict[str, tuple[int, str]]  # name -> (line number, rhs text)
    coaction: dict[str, tuple[int, str]] = field(default_factory=dict)
    rhs_cols: dict[tuple[str, str], int] = field(default_factory=dict)


def _lines(text: str) -> list[_Line]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            out.append(_Line(i, body, raw))
    return out


def parse_file(text: str, default_prime: int | None = None) -> PresentationFile:
    """Tokenize and check declarations; term bodies are resolved later."""
    prime = None
    declared = False
    gens: list[GenSpec] = []
    seen = set()
    defs: dict[str, dict] = {"deltabar": {}, "coaction": {}}
    cols = {}
    for ln in _lines(text):
        s = ln.text.strip()
        col0 = len(ln.text) - len(ln.text.lstrip()) + 1
        if s.startswith("prime:"):
            m = _RE_PRIME.match(s)
            if not m or not _RE_INT.match(m.group(1)):
                raise ParseError("expected 'prime: <int>'", ln.number, col0)
            if declared:
                raise SemanticError("prime declared twice", ln.number, col0)
            if gens:
                raise SemanticError("prime declared after generators", ln.number, col0)
            declared = True
            prime = int(m.group(1))
            if not is_prime(prime):
                raise SemanticError(f"{prime} is not prime", ln.number, col0 + 7)
        elif s.startswith("generator:"):
            m = _RE_GEN.match(s)
            if not m:
                raise ParseError("expected 'generator: <name> degree=<int> height=<int|odd>'", ln.number, col0)
            name, deg, height = m.groups()
            if not _RE_INT.match(deg):
                raise ParseError("degree must be a non-negative integer", ln.number, col0 + s.index("degree="))
            if height != ODD and not _RE_INT.match(height):
                raise ParseError("height must be a positive integer or 'odd'", ln.number, col0 + s.index("height="))
            if name in seen:
                raise SemanticError(f"duplicate generator {name!r}", ln.number, col0 + s.index(name))
            if prime is None:
                if default_prime is None:
                    raise SemanticError("generator declared before prime", ln.number, col0)
                prime = default_prime
            deg_i = int(deg)
            hcol = col0 + s.index("height=")
            odd_forced = prime > 2 and deg_i % 2 == 1
            if height == ODD:
                if not odd_forced:
                    raise SemanticError("height=odd needs odd degree and p > 2", ln.number, hcol)
                h = ODD
            else:
                h = int(height)
                if h < 1:
                    raise SemanticError("height must be positive", ln.number, hcol)
                if odd_forced and h != 1:
                    raise SemanticError("odd-degree generator at p > 2 squares to zero; use height=odd", ln.number, hcol)
                if odd_forced:
                    h = ODD
            seen.add(name)
            gens.append(GenSpec(name, deg_i, h))
        elif s.startswith("deltabar:") or s.startswith("coaction:"):
            m = _RE_DEF.match(s)
            if not m:
                raise ParseError("expected '<kind>: <name> = <terms>'", ln.number, col0)
            kind, name, rhs = m.groups()
            if not rhs:
                raise ParseError("empty right-hand side", ln.number, col0 + len(s))
            if name in defs[kind]:
                raise SemanticError(f"{kind} for {name!r} given twice", ln.number, col0 + s.index(name))
            defs[kind][name] = (ln.number, rhs)
            cols[(kind, name)] = col0 + s.index("=", len(kind)) + 1
        else:
            raise ParseError("unknown declaration", ln.number, col0)
    if prime is None:
        if default_prime is None:
            raise SemanticError("missing 'prime:' declaration", 1, 1)
        prime = default_prime
    return PresentationFile(prime, gens, defs["deltabar"], defs["coaction"], cols)


def _parse_mono(alg: TruncatedAlgebra, text: str, line: int, col: int):
    """Monomial text -> (sign, exponents) or None when the product vanishes."""
    text = text.strip()
    if not text:
        raise ParseError("empty monomial", line, col)
    if text == "1":
        return 1, alg.one_mono
    sign, mono = 1, alg.one_mono
    for factor in text.split("*"):
        f = factor.strip()
        m = _RE_FACTOR.match(f)
        if not m:
            raise ParseError(f"bad factor {f!r}", line, col)
        name, e = m.group(1), int(m.group(2) or 1)
        if name not in alg.gen_index:
            raise SemanticError(f"undeclared generator {name!r}", line, col)
        if e == 0:
            continue
        g = alg.gen_index[name]
        if e >= alg.truncations[g]:
            return None
        fm = tuple(e if i == g else 0 for i in range(len(alg.generators)))
        r = alg.normalize_monomial_product(mono, fm)
        if r is None:
            return None
        sign, mono = sign * r[0], r[1]
    return sign, mono


def _split_terms(rhs: str) -> list[str]:
    return [part.strip() for part in rhs.split("+")]


def _parse_coeff(term: str, p: int, line: int, col: int) -> tuple[int, str]:
    m = re.match(r"^(\d+)\s*\*\s*(.*)$", term)
    if m and not _RE_FACTOR.match(m.group(1)):
        c = int(m.group(1))
        if c == 0 or c >= p:
            raise SemanticError(f"coefficient {c} is not reduced modulo {p}", line, col)
        return c, m.group(2)
    return 1, term


def parse_tensor(left: TruncatedAlgebra, right: TruncatedAlgebra, rhs: str, line: int = 0, col: int = 0) -> TensorElement:
    if rhs.strip() == "0":
        return TensorElement(left, right, {})
    terms: dict = {}
    for term in _split_terms(rhs):
        if not term:
            raise ParseError("empty term", line, col)
        c, body = _parse_coeff(term, left.p, line, col)
        if body.count("|") != 1:
            raise ParseError("a term needs exactly one '|'", line, col)
        lt, rt = body.split("|")
        a = _parse_mono(left, lt, line, col)
        b = _parse_mono(right, rt, line, col)
        if a is None or b is None:
            continue
        key = (a[1], b[1])
        terms[key] = terms.get(key, 0) + c * a[0] * b[0]
    return TensorElement(left, right, terms)


def parse_element(alg: TruncatedAlgebra, text: str) -> Element:
    """``[c*]mono + ...`` as an element of ``alg`` (used by kill lists)."""
    if text.strip() == "0":
        return alg.element()
    terms: dict = {}
    for term in _split_terms(text):
        if not term:
            raise ParseError(f"empty term in {text!r}")
        c, body = _parse_coeff(term, alg.p, 0, 0)
        r = _parse_mono(alg, body, 0, 0)
        if r is None:
            continue
        terms[r[1]] = terms.get(r[1], 0) + c * r[0]
    return alg.element(terms)


def parse_element_list(alg: TruncatedAlgebra, text: str) -> list[Element]:
    return [parse_element(alg, part) for part in text.split(",") if part.strip()]


def parse_presentation(text: str) -> HopfPresentation:
    pf = parse_file(text)
    if pf.coaction:
        line = min(v[0] for v in pf.coaction.values())
        raise SemanticError("coaction lines belong in a module file", line, 1)
    return build_presentation(pf)


def build_presentation(pf: PresentationFile) -> HopfPresentation:
    alg = TruncatedAlgebra(pf.prime, pf.generators)
    db = {}
    for name, (line, rhs) in pf.deltabar.items():
        col = pf.rhs_cols.get(("deltabar", name), 1)
        if name not in alg.gen_index:
            raise SemanticError(f"deltabar for undeclared generator {name!r}", line, 1)
        t = parse_tensor(alg, alg, rhs, line, col)
        deg = alg.generators[alg.gen_index[name]].degree
        for a, b in t.terms:
            if a == alg.one_mono or b == alg.one_mono:
                raise SemanticError(f"deltabar({name}) has a term outside I⊗I", line, col)
            if alg.monomial_degree(a) + alg.monomial_degree(b) != deg:
                raise SemanticError(f"deltabar({name}) is not homogeneous of degree {deg}", line, col)
        db[name] = [(c, a, b) for (a, b), c in t.terms.items()]
    try:
        return HopfPresentation(pf.prime, pf.generators, db)
    except ValueError as exc:
        raise SemanticError(str(exc), 1, 1) from None


def parse_module(text: str, h: HopfPresentation):
    """Module file: generators of R plus coaction lines with values in A ⊗ R."""
    from .cohomology import Comodule

    pf = parse_file(text, default_prime=h.p)
    if pf.prime != h.p:
        raise SemanticError(f"module prime {pf.prime} differs from {h.p}", 1, 1)
    if pf.deltabar:
        raise SemanticError("deltabar lines do not belong in a module file", min(v[0] for v in pf.deltabar.values()), 1)
    R = TruncatedAlgebra(h.p, pf.generators)
    coaction = {}
    for name, (line, rhs) in pf.coaction.items():
        if name not in R.gen_index:
            raise SemanticError(f"coaction for undeclared generator {name!r}", line, 1)
        coaction[name] = parse_tensor(h, R, rhs, line, pf.rhs_cols.get(("coaction", name), 1))
    try:
        return Comodule(h, R, coaction)
    except ValueError as exc:
        raise SemanticError(str(exc), 1, 1) from None


# -- printing -----------------------------------------------------------------------


def format_tensor(t: TensorElement) -> str:
    if t.is_zero():
        return "0"
    L, R = t.left, t.right
    items = sorted(t.terms.items(), key=lambda kc: (L.index[kc[0][0]], R.index[kc[0][1]]))
    parts = []
    for (a, b), c in items:
        prefix = f"{c}*" if c != 1 else ""
        parts.append(f"{prefix}{L.format_monomial(a)} | {R.format_monomial(b)}")
    return " + ".join(parts)


def format_presentation(h: HopfPresentation) -> str:
    lines = [f"prime: {h.p}"]
    for g in h.generators:
        lines.append(f"generator: {g.name} degree={g.degree} height={g.height}")
    for g in h.generators:
        t = h.deltabar_of(g.name)
        if not t.is_zero():
            lines.append(f"deltabar: {g.name} = {format_tensor(t)}")
    return "\n".join(lines) + "\n"


def format_element(e: Element) -> str:
    return repr(e)


# -- certificates -----------------------------------------------------------------------


@dataclass
class Section:
    items: list[tuple[str, str]]

    def get(self, key: str, default=None):
        for k, v in self.items:
            if k == key:
                return v
        return default

    def getall(self, key: str) -> list[str]:
        return [v for k, v in self.items if k == key]


def format_certificate(sections: list[list[tuple[str, object]]]) -> str:
    blocks = []
    for sec in sections:
        blocks.append("\n".join(f"{k}: {_fmt_value(v)}" for k, v in sec))
    return "\n---\n".join(blocks) + "\n"


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, np.ndarray):
        return " ".join(str(int(x)) for x in v.tolist())
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v)


def parse_certificate(text: str) -> list[Section]:
    sections = []
    cur: list[tuple[str, str]] = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "---":
            sections.append(Section(cur))
            cur = []
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", i, 1)
        k, v = line.split(":", 1)
        cur.append((k.strip(), v.strip()))
    sections.append(Section(cur))
    return sections


def matrix_rows(rows) -> list[tuple[str, np.ndarray]]:
    return [("row", np.asarray(r)) for r in rows]


def read_matrix(sec: Section, width: int) -> np.ndarray:
    rows = [np.array([int(x) for x in v.split()], dtype=np.int64) for v in sec.getall("row")]
    if not rows:
        return np.zeros((0, width), dtype=np.int64)
    return np.array(rows, dtype=np.int64).reshape(len(rows), width)
