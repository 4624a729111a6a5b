"""Finite, positively graded, graded-commutative, local Hopf algebras over F_p.

An algebra is presented as a truncated graded polynomial ring

    A = F_p[x_1, ..., x_n]^{gr} / (x_i^{p^{e_i}})

(odd-degree generators square to zero when p > 2) together with the reduced
comultiplication on generators.  Everything else -- the monomial basis,
structure constants, the coproduct on every basis element, duals, quotients
-- is derived from that data.

Basis monomials are exponent tuples in generator declaration order, sorted by
(internal degree, exponent tuple), so index 0 is always the unit.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .fplin import Prime, Subspace, inverse, kernel_basis, rank, reduce_mod

ODD = "odd"

#: coassociativity/counit are checked on every basis monomial up to this size;
#: above it they are checked on generators, which suffices for algebra maps.
FULL_BASIS_CHECK_LIMIT = 256

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class HopfError(Exception):
    """Base class for structural failures."""


class NotHopfIdeal(HopfError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class NotSubHopf(HopfError):
    pass


class NonNilpotentConvolution(HopfError):
    pass


class QuotientNotPresentable(HopfError):
    pass


@dataclass(frozen=True)
class GenSpec:
    name: str
    degree: int
    height: int | str = 1

    def truncation(self, p: int) -> int:
        """Exponent at which this generator vanishes."""
        if self.height == ODD:
            return 2
        return p ** int(self.height)


def _normalize_gens(p: int, generators) -> tuple[GenSpec, ...]:
    out = []
    seen = set()
    for g in generators:
        if not isinstance(g, GenSpec):
            g = GenSpec(*g)
        if not _NAME.match(g.name):
            raise ValueError(f"bad generator name {g.name!r}")
        if g.name in seen:
            raise ValueError(f"duplicate generator {g.name!r}")
        seen.add(g.name)
        if g.degree < 0:
            raise ValueError(f"generator {g.name} has negative degree")
        odd = p > 2 and g.degree % 2 == 1
        if g.height == ODD:
            if not odd:
                raise ValueError(f"height=odd on {g.name} needs odd degree and p > 2")
        elif odd:
            # x^2 = 0 is forced by graded commutativity
            g = GenSpec(g.name, g.degree, ODD)
        elif int(g.height) < 1:
            raise ValueError(f"generator {g.name} needs height >= 1")
        out.append(g)
    return tuple(out)


class TruncatedAlgebra:
    """Graded-commutative truncated polynomial algebra with its monomial basis."""

    def __init__(self, prime, generators: Iterable):
        self.prime = prime if isinstance(prime, Prime) else Prime(int(prime))
        self.p = self.prime.p
        self.generators = _normalize_gens(self.p, generators)
        self.names = tuple(g.name for g in self.generators)
        self.gen_index = {g.name: i for i, g in enumerate(self.generators)}
        self.gen_degrees = np.array([g.degree for g in self.generators], dtype=np.int64)
        self.truncations = np.array([g.truncation(self.p) for g in self.generators], dtype=np.int64)

    # -- basis -------------------------------------------------------------

    @cached_property
    def basis(self) -> list[tuple[int, ...]]:
        ranges = [range(int(t)) for t in self.truncations]
        monos = list(itertools.product(*ranges))
        monos.sort(key=lambda m: (self.monomial_degree(m), m))
        return monos

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {m: i for i, m in enumerate(self.basis)}

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([self.monomial_degree(m) for m in self.basis], dtype=np.int64)

    @property
    def dim(self) -> int:
        return int(np.prod(self.truncations)) if len(self.generators) else 1

    @property
    def one_mono(self) -> tuple[int, ...]:
        return (0,) * len(self.generators)

    def monomial_degree(self, m) -> int:
        return int(sum(e * d for e, d in zip(m, self.gen_degrees)))

    def normalize_monomial_product(self, m1, m2):
        """Product of two basis monomials as ``(sign, monomial)``, or None if zero.

        Reordering into declaration order only costs a sign when two
        odd-degree generators pass each other.
        """
        exps = tuple(a + b for a, b in zip(m1, m2))
        if any(e >= t for e, t in zip(exps, self.truncations)):
            return None
        odd = self.gen_degrees % 2
        s = 0
        for a in range(len(m1)):
            if m1[a] and odd[a]:
                for b in range(a):
                    if m2[b] and odd[b]:
                        s += m1[a] * m2[b]
        return (-1 if s % 2 else 1), exps

    @cached_property
    def _mult_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """``(idx, sign)``: e_i e_j = sign[i,j] e_{idx[i,j]}, idx = -1 when zero."""
        n = self.dim
        g = len(self.generators)
        if g == 0:
            return np.zeros((1, 1), dtype=np.int64), np.ones((1, 1), dtype=np.int64)
        E = np.array(self.basis, dtype=np.int64).reshape(n, g)
        trunc = self.truncations
        radix = np.ones(g, dtype=np.int64)
        for a in range(g - 2, -1, -1):
            radix[a] = radix[a + 1] * trunc[a + 1]
        codes = E @ radix
        lookup = np.empty(int(np.prod(trunc)), dtype=np.int64)
        lookup[codes] = np.arange(n)
        ok = np.ones((n, n), dtype=bool)
        for a in range(g):
            ok &= (E[:, a][:, None] + E[:, a][None, :]) < trunc[a]
        idx = np.where(ok, lookup[np.clip(codes[:, None] + codes[None, :], 0, lookup.size - 1)], -1)
        Eo = (E * (self.gen_degrees % 2)) % 2
        lower = np.tril(np.ones((g, g), dtype=np.int64), -1)
        sign = 1 - 2 * ((Eo @ lower @ Eo.T) % 2)
        return idx, sign

    def mul_basis(self, i: int, j: int):
        idx, sign = self._mult_tables
        k = int(idx[i, j])
        if k < 0:
            return None
        return int(sign[i, j]), k

    # -- vectors and elements ---------------------------------------------

    def multiply_vectors(self, u, v) -> np.ndarray:
        idx, sign = self._mult_tables
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        iu = np.flatnonzero(u)
        iv = np.flatnonzero(v)
        out = np.zeros(self.dim, dtype=np.int64)
        if iu.size == 0 or iv.size == 0:
            return out
        sub_idx = idx[np.ix_(iu, iv)]
        vals = np.outer(u[iu], v[iv]) * sign[np.ix_(iu, iv)]
        mask = sub_idx >= 0
        np.add.at(out, sub_idx[mask], vals[mask])
        return out % self.p

    def left_mult_matrix(self, u) -> np.ndarray:
        """Matrix of ``v -> u v`` acting on column vectors."""
        idx, sign = self._mult_tables
        u = np.asarray(u, dtype=np.int64)
        n = self.dim
        out = np.zeros((n, n), dtype=np.int64)
        for i in np.flatnonzero(u):
            cols = np.flatnonzero(idx[i] >= 0)
            np.add.at(out, (idx[i, cols], cols), u[i] * sign[i, cols])
        return out % self.p

    def element(self, terms: Mapping | None = None) -> "Element":
        return Element(self, dict(terms or {}))

    def one(self) -> "Element":
        return Element(self, {self.one_mono: 1})

    def gen(self, name: str) -> "Element":
        m = [0] * len(self.generators)
        m[self.gen_index[name]] = 1
        return Element(self, {tuple(m): 1})

    def from_vector(self, v) -> "Element":
        v = reduce_mod(v, self.p)
        return Element(self, {self.basis[i]: int(v[i]) for i in np.flatnonzero(v)})

    def format_monomial(self, m) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def basis_labels(self) -> list[str]:
        return [self.format_monomial(m) for m in self.basis]


class Element:
    """An element of a truncated algebra: ``{monomial: coefficient}``."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: TruncatedAlgebra, terms: Mapping):
        p = algebra.p
        self.algebra = algebra
        self.terms = {}
        for m, c in terms.items():
            c %= p
            if c:
                self.terms[tuple(m)] = c

    def __add__(self, other):
        if isinstance(other, int):
            other = self.algebra.one() * other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Element(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return Element(self.algebra, {m: c * int(other) for m, c in self.terms.items()})
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        out = self.algebra.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.algebra.one() * other
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {self.algebra.monomial_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("element is not homogeneous (or is zero)")
        return ds.pop()

    def coefficient(self, m) -> int:
        return self.terms.get(tuple(m), 0)

    def vector(self) -> np.ndarray:
        v = np.zeros(self.algebra.dim, dtype=np.int64)
        for m, c in self.terms.items():
            v[self.algebra.index[m]] = c
        return v

    def __repr__(self):
        if not self.terms:
            return "0"
        alg = self.algebra
        items = sorted(self.terms.items(), key=lambda mc: alg.index[mc[0]])
        return " + ".join(
            (f"{c}*" if c != 1 else "") + alg.format_monomial(m) for m, c in items
        )


class TensorElement:
    """Element of L ⊗ R as ``{(left monomial, right monomial): coefficient}``."""

    __slots__ = ("left", "right", "terms")

    def __init__(self, left: TruncatedAlgebra, right: TruncatedAlgebra, terms: Mapping):
        self.left = left
        self.right = right
        p = left.p
        self.terms = {}
        for k, c in terms.items():
            c %= p
            if c:
                self.terms[(tuple(k[0]), tuple(k[1]))] = c

    @classmethod
    def pure(cls, a: Element, b: Element) -> "TensorElement":
        terms = {}
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                terms[(ma, mb)] = terms.get((ma, mb), 0) + ca * cb
        return cls(a.algebra, b.algebra, terms)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return TensorElement(self.left, self.right, out)

    def __neg__(self):
        return TensorElement(self.left, self.right, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return TensorElement(self.left, self.right, {k: c * int(other) for k, c in self.terms.items()})
        return tensor_multiply(self, other)

    def __pow__(self, k: int):
        one = TensorElement(self.left, self.right, {(self.left.one_mono, self.right.one_mono): 1})
        out, base = one, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, ml, mr) -> int:
        return self.terms.get((tuple(ml), tuple(mr)), 0)

    def matrix(self) -> np.ndarray:
        out = np.zeros((self.left.dim, self.right.dim), dtype=np.int64)
        for (a, b), c in self.terms.items():
            out[self.left.index[a], self.right.index[b]] = c
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kc: (self.left.index[kc[0][0]], self.right.index[kc[0][1]]))
        return " + ".join(
            (f"{c}*" if c != 1 else "")
            + f"{self.left.format_monomial(a)} | {self.right.format_monomial(b)}"
            for (a, b), c in items
        )


def multiply(a: Element, b: Element) -> Element:
    alg = a.algebra
    if b.algebra is not alg:
        raise ValueError("elements of different algebras")
    out: dict = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            r = alg.normalize_monomial_product(m1, m2)
            if r is None:
                continue
            s, m = r
            out[m] = out.get(m, 0) + s * c1 * c2
    return Element(alg, out)


def tensor_multiply(s: TensorElement, t: TensorElement) -> TensorElement:
    """Koszul rule: (a⊗b)(c⊗d) = (-1)^{|b||c|} ac ⊗ bd."""
    L, R = s.left, s.right
    out: dict = {}
    for (a, b), c1 in s.terms.items():
        db = R.monomial_degree(b)
        for (c, d), c2 in t.terms.items():
            ac = L.normalize_monomial_product(a, c)
            if ac is None:
                continue
            bd = R.normalize_monomial_product(b, d)
            if bd is None:
                continue
            sign = -1 if (db * L.monomial_degree(c)) % 2 else 1
            key = (ac[1], bd[1])
            out[key] = out.get(key, 0) + sign * ac[0] * bd[0] * c1 * c2
    return TensorElement(L, R, out)


class HopfPresentation(TruncatedAlgebra):
    """Truncated graded polynomial algebra with reduced coproduct on generators.

    ``deltabar`` maps generator names to TensorElements of ``self ⊗ self`` or
    to iterables of ``(coeff, left_exponents, right_exponents)``.  Missing
    generators are primitive.  The counit is zero on every generator.
    """

    def __init__(self, prime, generators, deltabar: Mapping | None = None):
        super().__init__(prime, generators)
        db = {}
        for name, val in (deltabar or {}).items():
            if name not in self.gen_index:
                raise ValueError(f"deltabar given for undeclared generator {name!r}")
            if isinstance(val, TensorElement):
                t = TensorElement(self, self, val.terms)
            else:
                t = TensorElement(self, self, {})
                acc: dict = {}
                for c, ml, mr in val:
                    acc[(tuple(ml), tuple(mr))] = acc.get((tuple(ml), tuple(mr)), 0) + c
                t = TensorElement(self, self, acc)
            db[name] = t
        self._deltabar = {g.name: db.get(g.name, TensorElement(self, self, {})) for g in self.generators}
        self._validate_deltabar()

    @classmethod
    def from_text(cls, text: str) -> "HopfPresentation":
        from .fileformat import parse_presentation

        return parse_presentation(text)

    def _validate_deltabar(self):
        one = self.one_mono
        for g in self.generators:
            for (a, b), _ in self._deltabar[g.name].terms.items():
                for m in (a, b):
                    if len(m) != len(self.generators) or any(
                        e < 0 or e >= t for e, t in zip(m, self.truncations)
                    ):
                        raise ValueError(f"deltabar({g.name}) has a monomial outside the basis")
                if a == one or b == one:
                    raise ValueError(f"deltabar({g.name}) has a term outside I⊗I")
                if self.monomial_degree(a) + self.monomial_degree(b) != g.degree:
                    raise ValueError(f"deltabar({g.name}) is not homogeneous of degree {g.degree}")

    def deltabar_of(self, name: str) -> TensorElement:
        return self._deltabar[name]

    def generator_coproduct(self, name: str) -> TensorElement:
        x = self.gen(name)
        one = self.one()
        return TensorElement.pure(x, one) + TensorElement.pure(one, x) + self._deltabar[name]

    def is_connected(self) -> bool:
        return all(g.degree > 0 for g in self.generators)

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.degree}/{g.height}" for g in self.generators)
        return f"HopfPresentation(p={self.p}, [{gens}], dim={self.dim})"

    # -- coproduct on the monomial basis -----------------------------------

    @cached_property
    def coproduct_table(self) -> list[dict[tuple[int, int], int]]:
        """Δ(e_b) as ``{(i, j): c}`` for every basis index b."""
        n = self.dim
        p = self.p
        idx, sign = self._mult_tables
        degs = self.degrees
        gen_cop = []
        for g in self.generators:
            t = self.generator_coproduct(g.name)
            gen_cop.append([((self.index[a], self.index[b]), c) for (a, b), c in t.terms.items()])
        table: list = [None] * n
        table[0] = {(0, 0): 1}
        for bi in range(1, n):
            m = self.basis[bi]
            k = max(a for a, e in enumerate(m) if e)
            prev = list(m)
            prev[k] -= 1
            left = table[self.index[tuple(prev)]]
            out: dict = {}
            for (i, j), c1 in left.items():
                dj = degs[j]
                for (kk, ll), c2 in gen_cop[k]:
                    ik = idx[i, kk]
                    if ik < 0:
                        continue
                    jl = idx[j, ll]
                    if jl < 0:
                        continue
                    s = sign[i, kk] * sign[j, ll]
                    if (dj * degs[kk]) % 2:
                        s = -s
                    key = (int(ik), int(jl))
                    out[key] = (out.get(key, 0) + s * c1 * c2) % p
            table[bi] = {key: c for key, c in out.items() if c}
        return table

    def coproduct_matrix(self, v) -> np.ndarray:
        """Δ(v) as an n×n matrix T with T[i, j] the coefficient of e_i ⊗ e_j."""
        n = self.dim
        out = np.zeros((n, n), dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        for b in np.flatnonzero(v % self.p):
            for (i, j), c in self.coproduct_table[b].items():
                out[i, j] += v[b] * c
        return out % self.p

    @cached_property
    def mult_tensor(self) -> np.ndarray:
        """c[i, j, k]: coefficient of e_k in e_i e_j."""
        n = self.dim
        idx, sign = self._mult_tables
        c = np.zeros((n, n, n), dtype=np.int64)
        ii, jj = np.nonzero(idx >= 0)
        c[ii, jj, idx[ii, jj]] = sign[ii, jj] % self.p
        return c

    @cached_property
    def comult_tensor(self) -> np.ndarray:
        """D[k, i, j]: coefficient of e_i ⊗ e_j in Δ(e_k)."""
        n = self.dim
        D = np.zeros((n, n, n), dtype=np.int64)
        for k, terms in enumerate(self.coproduct_table):
            for (i, j), c in terms.items():
                D[k, i, j] = c
        return D


# -- Hopf structure on elements --------------------------------------------


def delta(a: Element) -> TensorElement:
    h = a.algebra
    out: dict = {}
    for m, c in a.terms.items():
        for (i, j), d in h.coproduct_table[h.index[m]].items():
            key = (h.basis[i], h.basis[j])
            out[key] = out.get(key, 0) + c * d
    return TensorElement(h, h, out)


def deltabar(a: Element) -> TensorElement:
    one = a.algebra.one()
    return delta(a) - TensorElement.pure(a, one) - TensorElement.pure(one, a)


def counit(a: Element) -> int:
    return a.coefficient(a.algebra.one_mono)


# -- axioms -----------------------------------------------------------------


@dataclass
class AxiomReport:
    passed: bool
    checks: dict[str, bool]
    failure: str | None = None
    scope: str = "basis"

    def lines(self) -> list[str]:
        out = [f"{name}: {'pass' if ok else 'fail'}" for name, ok in self.checks.items()]
        out.append(f"scope: {self.scope}")
        out.append(f"result: {'pass' if self.passed else 'fail'}")
        if self.failure:
            out.append(f"failure: {self.failure}")
        return out


def _apply_left(h: HopfPresentation, terms: dict) -> dict:
    """(Δ ⊗ id) on a two-fold tensor given as an index dict."""
    out: dict = {}
    for (i, j), c in terms.items():
        for (k, l), d in h.coproduct_table[i].items():
            key = (k, l, j)
            out[key] = (out.get(key, 0) + c * d) % h.p
    return {k: v for k, v in out.items() if v}


def _apply_right(h: HopfPresentation, terms: dict) -> dict:
    out: dict = {}
    for (i, j), c in terms.items():
        for (k, l), d in h.coproduct_table[j].items():
            key = (i, k, l)
            out[key] = (out.get(key, 0) + c * d) % h.p
    return {k: v for k, v in out.items() if v}


def check_hopf_axioms(h: HopfPresentation, full_basis_limit: int = FULL_BASIS_CHECK_LIMIT) -> AxiomReport:
    """Verify the bialgebra axioms; never raises on a failed axiom.

    Coassociativity and the counit laws are checked on every basis monomial
    when ``dim <= full_basis_limit``, otherwise on the generators (both sides
    are algebra maps once relation compatibility holds).
    """
    checks: dict[str, bool] = {}
    failure = None

    def fail(name, msg):
        nonlocal failure
        checks[name] = False
        if failure is None:
            failure = msg

    checks["positive_grading"] = all(g.degree >= 0 for g in h.generators)

    checks["deltabar_in_IxI"] = True
    checks["homogeneity"] = True
    for g in h.generators:
        for (a, b) in h.deltabar_of(g.name).terms:
            if a == h.one_mono or b == h.one_mono:
                fail("deltabar_in_IxI", f"deltabar({g.name}) has a term with a unit factor")
            if h.monomial_degree(a) + h.monomial_degree(b) != g.degree:
                fail("homogeneity", f"deltabar({g.name}) is not of degree {g.degree}")

    checks["relation_compatibility"] = True
    for g in h.generators:
        t = h.generator_coproduct(g.name) ** g.truncation(h.p)
        if not t.is_zero():
            fail("relation_compatibility", f"Δ({g.name})^{g.truncation(h.p)} = {t} != 0")

    scope = "basis" if h.dim <= full_basis_limit else "generators"
    if scope == "basis":
        targets = list(range(h.dim))
    else:
        targets = [h.gen(g.name).vector().argmax() for g in h.generators]

    degs = h.degrees
    checks["coproduct_homogeneous"] = True
    checks["counit"] = True
    checks["coassociativity"] = True
    for b in targets:
        terms = h.coproduct_table[b]
        if any(degs[i] + degs[j] != degs[b] for (i, j) in terms):
            fail("coproduct_homogeneous", f"Δ({h.basis_labels()[b]}) not homogeneous")
        left = {j: c for (i, j), c in terms.items() if i == 0}
        right = {i: c for (i, j), c in terms.items() if j == 0}
        if left != {b: 1} or right != {b: 1}:
            fail("counit", f"counit law fails on {h.basis_labels()[b]}")
        if _apply_left(h, terms) != _apply_right(h, terms):
            fail("coassociativity", f"coassociativity fails on {h.basis_labels()[b]}")

    # A_0 is a truncated polynomial ring, so its augmentation ideal is
    # nilpotent; check the degree-0 exponent budget anyway.
    zero_gens = [g for g in h.generators if g.degree == 0]
    loewy = sum(g.truncation(h.p) - 1 for g in zero_gens)
    checks["local_degree_zero"] = loewy < h.dim or not zero_gens

    passed = all(checks.values())
    return AxiomReport(passed, checks, failure, scope)


# -- antipode ---------------------------------------------------------------


def _convolve(h: HopfPresentation, F: np.ndarray, G: np.ndarray) -> np.ndarray:
    n = h.dim
    out = np.zeros((n, n), dtype=np.int64)
    for b, terms in enumerate(h.coproduct_table):
        acc = np.zeros(n, dtype=np.int64)
        for (i, j), c in terms.items():
            u = F[:, i]
            v = G[:, j]
            if u.any() and v.any():
                acc += c * h.multiply_vectors(u, v)
        out[:, b] = acc % h.p
    return out


def antipode(h: HopfPresentation) -> np.ndarray:
    """The antipode as an n×n matrix (columns are images of basis monomials).

    Computed as Σ_k (uε − id)^{*k}; the series stops once a convolution power
    vanishes, which happens for local A because all factors land in I_A.
    """
    n = h.dim
    ue = np.zeros((n, n), dtype=np.int64)
    ue[0, 0] = 1
    U = (ue - np.eye(n, dtype=np.int64)) % h.p
    S = ue.copy()
    power = ue.copy()
    for _ in range(n + 1):
        power = _convolve(h, power, U)
        if not power.any():
            break
        S = (S + power) % h.p
    else:
        raise NonNilpotentConvolution("convolution powers of uε − id did not vanish")
    ident = np.eye(n, dtype=np.int64)
    if not (np.array_equal(_convolve(h, S, ident), ue) and np.array_equal(_convolve(h, ident, S), ue)):
        raise HopfError("computed antipode fails the antipode identities")
    return S


# -- duals ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DualAlgebra:
    """Graded dual on the dual monomial basis.

    ``mult[a, b, k]`` is the coefficient of e_k in e_a e_b and
    ``comult[k, i, j]`` the coefficient of e_i ⊗ e_j in Δ(e_k).  Index 0 is
    the unit; the counit reads coordinate 0.
    """

    p: int
    degrees: np.ndarray
    mult: np.ndarray
    comult: np.ndarray
    labels: tuple[str, ...] = field(default=())

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def unit(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[0] = 1
        return v

    def counit(self, u) -> int:
        return int(u[0]) % self.p

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def multiply(self, u, v) -> np.ndarray:
        return np.einsum("a,b,abk->k", np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64), self.mult) % self.p

    def power(self, u, k: int) -> np.ndarray:
        out = self.unit
        for _ in range(k):
            out = self.multiply(out, u)
        return out

    def left_mult_matrix(self, u) -> np.ndarray:
        return np.einsum("a,abk->kb", np.asarray(u, dtype=np.int64), self.mult) % self.p

    def right_mult_matrix(self, u) -> np.ndarray:
        return np.einsum("b,abk->ka", np.asarray(u, dtype=np.int64), self.mult) % self.p

    def comultiply(self, u) -> np.ndarray:
        return np.tensordot(np.asarray(u, dtype=np.int64), self.comult, axes=1) % self.p

    def deltabar(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=np.int64)
        e = self.unit
        return (self.comultiply(u) - np.outer(u, e) - np.outer(e, u)) % self.p

    def degree_of(self, u) -> int:
        ds = set(self.degrees[np.flatnonzero(np.asarray(u) % self.p)].tolist())
        if len(ds) != 1:
            raise ValueError("vector is not homogeneous (or is zero)")
        return ds.pop()

    def is_homogeneous(self, u) -> bool:
        return len(set(self.degrees[np.flatnonzero(np.asarray(u) % self.p)].tolist())) <= 1

    def format(self, u) -> str:
        u = np.asarray(u) % self.p
        nz = np.flatnonzero(u)
        if nz.size == 0:
            return "0"
        return " + ".join((f"{u[i]}*" if u[i] != 1 else "") + self.labels[i] for i in nz)

    def is_associative(self) -> bool:
        # (e_a e_b) e_c vs e_a (e_b e_c) for all triples
        left = np.einsum("abk,kcl->abcl", self.mult, self.mult) % self.p
        right = np.einsum("bck,akl->abcl", self.mult, self.mult) % self.p
        return bool(np.array_equal(left, right))


def graded_dual(p: int, degrees: np.ndarray, mult: np.ndarray, comult: np.ndarray, labels=()) -> DualAlgebra:
    """Dualize structure constants with the Koszul pairing.

    ⟨φ⊗ψ, a⊗b⟩ = (−1)^{|ψ||a|} φ(a) ψ(b), which on dual basis elements of
    equal degree gives the sign (−1)^{|i||j|} both ways.
    """
    s = np.where(np.outer(degrees, degrees) % 2 == 1, -1, 1)
    dmult = (np.transpose(comult, (1, 2, 0)) * s[:, :, None]) % p
    dcomult = (np.transpose(mult, (2, 0, 1)) * s[None, :, :]) % p
    return DualAlgebra(p, degrees.copy(), dmult, dcomult, tuple(labels))


def _dual_label(h: TruncatedAlgebra, m) -> str:
    s = h.format_monomial(m)
    return f"{s}*" if sum(m) <= 1 else f"({s})*"


def dualize(h: HopfPresentation) -> DualAlgebra:
    d = graded_dual(h.p, h.degrees, h.mult_tensor, h.comult_tensor, [_dual_label(h, m) for m in h.basis])
    if not d.is_associative():
        raise HopfError("dual multiplication is not associative; axioms must have failed")
    return d


def double_dual_check(h: HopfPresentation) -> bool:
    d = dualize(h)
    dd = graded_dual(h.p, d.degrees, d.mult, d.comult)
    return bool(np.array_equal(dd.mult, h.mult_tensor % h.p) and np.array_equal(dd.comult, h.comult_tensor % h.p))


# -- ideals and quotients ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class IdealSubspace:
    ambient: HopfPresentation
    space: Subspace
    generator_elements: tuple = ()

    @property
    def dim(self) -> int:
        return self.space.dim

    def is_closed(self) -> bool:
        h = self.ambient
        for g in h.names:
            L = h.left_mult_matrix(h.gen(g).vector())
            if not all(self.space.contains(L @ v % h.p) for v in self.space.basis):
                return False
        return True


def ideal_generated(h: HopfPresentation, elements: Iterable) -> IdealSubspace:
    elements = tuple(e if isinstance(e, Element) else h.from_vector(e) for e in elements)
    vecs = [np.zeros(h.dim, dtype=np.int64)]
    for e in elements:
        # A is graded commutative, so the left ideal is two-sided
        vecs.extend(h.left_mult_matrix(e.vector()).T)
    return IdealSubspace(h, Subspace.from_vectors(np.array(vecs), h.dim, h.p), elements)


def zero_ideal(h: HopfPresentation) -> IdealSubspace:
    return IdealSubspace(h, Subspace.zero(h.dim, h.p), ())


def _projection(space: Subspace) -> tuple[np.ndarray, list[int]]:
    """Matrix of A -> A/space in coordinates of the non-pivot columns."""
    cols = space.complement_columns()
    n = space.ambient_dim
    reduced = space.reduce(np.eye(n, dtype=np.int64))  # row i = normal form of e_i
    return reduced[:, cols].T.copy(), cols


def is_hopf_ideal(h: HopfPresentation, ideal: IdealSubspace) -> tuple[bool, Element | None]:
    """True iff ε(J) = 0 and Δ(J) ⊆ J⊗A + A⊗J; otherwise a violating element."""
    J = ideal.space
    P, _ = _projection(J)
    for z in J.basis:
        if z[0] % h.p:
            return False, h.from_vector(z)
        T = h.coproduct_matrix(z)
        if ((P @ T @ P.T) % h.p).any():
            return False, h.from_vector(z)
    return True, None


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """A surjection of graded Hopf algebras, as a basis-to-basis matrix."""

    source: HopfPresentation
    target: HopfPresentation
    matrix: np.ndarray
    kernel_ideal: IdealSubspace

    @classmethod
    def from_matrix(cls, source, target, matrix, generator_elements=()) -> "QuotientMap":
        matrix = reduce_mod(matrix, source.p)
        ker = kernel_basis(matrix, source.p)
        return cls(source, target, matrix, IdealSubspace(source, ker, tuple(generator_elements)))

    def apply(self, v) -> np.ndarray:
        return (self.matrix @ np.asarray(v, dtype=np.int64)) % self.source.p

    def __call__(self, a: Element) -> Element:
        return self.target.from_vector(self.apply(a.vector()))

    def compose(self, first: "QuotientMap") -> "QuotientMap":
        """``self ∘ first``."""
        if first.target.dim != self.source.dim:
            raise ValueError("maps do not compose")
        return QuotientMap.from_matrix(first.source, self.target, self.matrix @ first.matrix)

    def failures(self) -> list[str]:
        """Every violated homomorphism condition (empty when the map is valid)."""
        A, B, F, p = self.source, self.target, self.matrix, self.source.p
        out = []
        if F.shape != (B.dim, A.dim):
            return ["shape mismatch"]
        if rank(F, p) != B.dim:
            out.append("not surjective")
        if not np.array_equal(F[:, 0] % p, np.eye(B.dim, dtype=np.int64)[:, 0]):
            out.append("unit not preserved")
        if not np.array_equal(F[0] % p, np.eye(A.dim, dtype=np.int64)[0]):
            out.append("counit not preserved")
        if any(B.degrees[np.flatnonzero(F[:, k] % p)].tolist() != [A.degrees[k]] * int(np.count_nonzero(F[:, k] % p)) for k in range(A.dim)):
            out.append("degree not preserved")
        for i in range(A.dim):
            lhs = (F @ A.left_mult_matrix(np.eye(A.dim, dtype=np.int64)[i])) % p
            rhs = (B.left_mult_matrix(F[:, i]) @ F) % p
            if not np.array_equal(lhs, rhs):
                out.append(f"not multiplicative at {A.basis_labels()[i]}")
                break
        for k in range(A.dim):
            T = A.coproduct_matrix(np.eye(A.dim, dtype=np.int64)[k])
            if not np.array_equal((F @ T @ F.T) % p, B.coproduct_matrix(F[:, k])):
                out.append(f"not comultiplicative at {A.basis_labels()[k]}")
                break
        return out

    def verify(self) -> bool:
        return not self.failures()


def quotient(h: HopfPresentation, ideal: IdealSubspace, check_axioms: bool = True) -> tuple[HopfPresentation, QuotientMap]:
    """Quotient by a Hopf ideal, re-presented on surviving generators.

    Generators are kept (in declaration order) while they stay independent
    modulo J + I², where I is the augmentation ideal; each keeps its name and
    gets the smallest height with x^{p^e} ∈ J.  Raises NotHopfIdeal, or
    QuotientNotPresentable if the kept generators do not give a truncated
    polynomial basis of A/J.
    """
    ok, witness = is_hopf_ideal(h, ideal)
    if not ok:
        raise NotHopfIdeal(f"ideal is not a Hopf ideal; witness {witness}", witness)
    p = h.p
    J = ideal.space
    P, _ = _projection(J)
    qdim = P.shape[0]
    # decomposables I^2 + J
    sq = [np.zeros((0, h.dim), dtype=np.int64)]
    for v in np.eye(h.dim, dtype=np.int64)[1:]:
        sq.append(h.left_mult_matrix(v)[:, 1:].T)
    D = Subspace.from_vectors(np.vstack([J.basis.reshape(-1, h.dim)] + sq), h.dim, p)
    kept: list[GenSpec] = []
    kept_vecs = []
    acc = D
    for g in h.generators:
        v = h.gen(g.name).vector()
        if acc.contains(v):
            continue
        acc = acc + Subspace.from_vectors(v, h.dim, p)
        kept.append(g)
        kept_vecs.append(h.gen(g.name))
    new_gens = []
    for g, x in zip(kept, kept_vecs):
        if g.height == ODD:
            new_gens.append(GenSpec(g.name, g.degree, ODD))
            continue
        e = 1
        while not J.contains((x ** (p**e)).vector()):
            e += 1
            if e > int(g.height):
                raise QuotientNotPresentable(f"no height found for {g.name}")
        new_gens.append(GenSpec(g.name, g.degree, e))
    B = TruncatedAlgebra(h.prime, new_gens)
    if B.dim != qdim:
        raise QuotientNotPresentable(f"kept generators span {B.dim} monomials, quotient has dimension {qdim}")
    # images of the new monomials inside A/J
    cols = []
    for m in B.basis:
        e = h.one()
        for x, k in zip(kept_vecs, m):
            if k:
                e = e * (x ** k)
        cols.append(P @ e.vector() % p)
    M = np.array(cols, dtype=np.int64).T.reshape(qdim, qdim)
    try:
        Minv = inverse(M, p)
    except np.linalg.LinAlgError:
        raise QuotientNotPresentable("kept generator monomials are dependent modulo the ideal") from None
    F = (Minv @ P) % p  # A -> B in B's monomial basis
    deltabar = {}
    for g in new_gens:
        T = h.deltabar_of(g.name).matrix()
        Tq = (F @ T @ F.T) % p
        terms = {}
        for i, j in zip(*np.nonzero(Tq)):
            terms[(B.basis[i], B.basis[j])] = int(Tq[i, j])
        deltabar[g.name] = [(c, a, b) for (a, b), c in terms.items()]
    Q = HopfPresentation(h.prime, new_gens, deltabar)
    # B's basis order equals Q's (same generators), so F is already in Q coordinates
    qmap = QuotientMap(h, Q, F, ideal)
    if check_axioms:
        rep = check_hopf_axioms(Q)
        if not rep.passed:
            raise HopfError(f"quotient fails Hopf axioms: {rep.failure}")
    return Q, qmap


def trivial_presentation(prime) -> HopfPresentation:
    return HopfPresentation(prime, [])


def counit_quotient(h: HopfPresentation) -> QuotientMap:
    k = trivial_presentation(h.prime)
    F = np.zeros((1, h.dim), dtype=np.int64)
    F[0, 0] = 1
    return QuotientMap.from_matrix(h, k, F)


def identity_quotient(h: HopfPresentation) -> QuotientMap:
    return QuotientMap(h, h, np.eye(h.dim, dtype=np.int64), zero_ideal(h))


def degree_zero_part(h: HopfPresentation) -> HopfPresentation:
    """A_0 as a presentation on the degree-0 generators."""
    keep = [i for i, g in enumerate(h.generators) if g.degree == 0]
    gens = [h.generators[i] for i in keep]
    deltabar = {}
    for i in keep:
        g = h.generators[i]
        terms = []
        for (a, b), c in h.deltabar_of(g.name).terms.items():
            if any(a[j] or b[j] for j in range(len(h.generators)) if j not in keep):
                raise NotSubHopf(f"deltabar({g.name}) involves positive-degree generators")
            terms.append((c, tuple(a[j] for j in keep), tuple(b[j] for j in keep)))
        deltabar[g.name] = terms
    return HopfPresentation(h.prime, gens, deltabar)


def connectivization(h: HopfPresentation) -> tuple[HopfPresentation, QuotientMap]:
    """κ(A) = A ⊗_{A_0} k: kill the degree-0 generators."""
    zero = [h.gen(g.name) for g in h.generators if g.degree == 0]
    return quotient(h, ideal_generated(h, zero))


def hilbert_series(h: TruncatedAlgebra) -> list[int]:
    """Coefficient list of Σ_d dim(A_d) t^d."""
    counts = np.bincount(h.degrees, minlength=1)
    return [int(c) for c in counts]


def series_product(a: list[int], b: list[int]) -> list[int]:
    return [int(c) for c in np.convolve(a, b)]


def frobenius_kernel_ideal(h: HopfPresentation, r: int, generating_set: Iterable | None = None) -> IdealSubspace:
    """I_G^{[p^r]}: the ideal generated by p^r-th powers of generators of I_G."""
    if r < 1:
        raise ValueError("r must be positive")
    if generating_set is None:
        generating_set = [h.gen(n) for n in h.names]
    gens = [g if isinstance(g, Element) else h.from_vector(g) for g in generating_set]
    return ideal_generated(h, [g ** (h.p**r) for g in gens])


def frobenius_kernel(h: HopfPresentation, r: int) -> tuple[HopfPresentation, QuotientMap]:
    return quotient(h, frobenius_kernel_ideal(h, r))


# -- primitives, commutators, cotensors ---------------------------------------


def _primitives_from(p: int, degrees: np.ndarray, comult: np.ndarray) -> dict[int, Subspace]:
    n = len(degrees)
    e0 = np.zeros(n, dtype=np.int64)
    e0[0] = 1
    out = {}
    for t in sorted(set(degrees.tolist())):
        idx = np.flatnonzero(degrees == t)
        cols = []
        for k in idx:
            ek = np.zeros(n, dtype=np.int64)
            ek[k] = 1
            db = comult[k] - np.outer(ek, e0) - np.outer(e0, ek)
            cols.append(db.reshape(-1) % p)
        ker = kernel_basis(np.array(cols).T, p)
        vecs = np.zeros((ker.dim, n), dtype=np.int64)
        vecs[:, idx] = ker.basis
        out[int(t)] = Subspace.from_vectors(vecs, n, p)
    return out


def primitives(d: DualAlgebra) -> dict[int, Subspace]:
    """Per internal degree, the primitive elements Δ̄(χ) = 0 of the dual."""
    return _primitives_from(d.p, d.degrees, d.comult)


def primitives_of_presentation(h: HopfPresentation) -> dict[int, Subspace]:
    return _primitives_from(h.p, h.degrees, h.comult_tensor)


def graded_commutator(d: DualAlgebra, a, b) -> np.ndarray:
    """[a, b] = ab − (−1)^{|a||b|} ba for homogeneous a, b."""
    a = np.asarray(a, dtype=np.int64) % d.p
    b = np.asarray(b, dtype=np.int64) % d.p
    if not a.any() or not b.any():
        return np.zeros(d.dim, dtype=np.int64)
    if not (d.is_homogeneous(a) and d.is_homogeneous(b)):
        raise ValueError("graded commutator needs homogeneous arguments")
    s = -1 if (d.degree_of(a) * d.degree_of(b)) % 2 else 1
    return (d.multiply(a, b) - s * d.multiply(b, a)) % d.p


def cotensor(h: HopfPresentation, q: QuotientMap, side: str = "right") -> Subspace:
    """A□_B k (right) = {a : (id⊗f)Δ(a) = a⊗1}; k□_B A (left) symmetrically."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    F = q.matrix
    p = h.p
    m = q.target.dim
    unitB = np.zeros(m, dtype=np.int64)
    unitB[0] = 1
    cols = []
    for k in range(h.dim):
        ek = np.zeros(h.dim, dtype=np.int64)
        ek[k] = 1
        T = h.coproduct_matrix(ek)
        if side == "right":
            val = T @ F.T - np.outer(ek, unitB)
        else:
            val = F @ T - np.outer(unitB, ek)
        cols.append(val.reshape(-1) % p)
    return kernel_basis(np.array(cols).T, p)
