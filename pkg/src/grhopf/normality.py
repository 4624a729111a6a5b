"""Conormal quotients, elementary quotients and unitriangular chains.

For a Hopf quotient f: A -> B, the dual inclusion B* ⊆ A* has augmentation
ideal I_B.  Conormality is decided four independent ways:

    (a) I_B·A* = A*·I_B
    (b) I_B·A* is a two-sided Hopf ideal of A*
    (d) I_B·A* is a graded Lie ideal of A*
    (h) the right and left cotensors of A over B coincide

and the verdicts are required to agree.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .fplin import Subspace, kernel_basis
from .hopf import (
    ODD,
    DualAlgebra,
    GenSpec,
    HopfError,
    HopfPresentation,
    IdealSubspace,
    QuotientMap,
    TensorElement,
    check_hopf_axioms,
    cotensor,
    dualize,
    graded_commutator,
    ideal_generated,
    primitives,
    quotient,
)

DEFAULT_CANDIDATE_CAP = 10**6


class ConditionDisagreement(HopfError):
    pass


class TargetNotElementary(HopfError):
    pass


class NoElementaryQuotient(HopfError):
    pass


class NoPositiveDegreeQuotient(NoElementaryQuotient):
    pass


class CandidateSpaceTooLarge(HopfError):
    pass


class NonLinearFrobenius(HopfError):
    pass


class StepNotConormal(HopfError):
    pass


class FlagNotUnitriangular(HopfError):
    pass


class ChainInvariantViolation(HopfError):
    pass


# -- conormality -------------------------------------------------------------


@dataclass
class ConormalCertificate:
    left_cotensor: Subspace
    right_cotensor: Subspace
    equal: bool
    ideal_sides_equal: bool  # (a)
    hopf_ideal: bool  # (b)
    lie_ideal: bool  # (d)
    dim_identity: bool
    source_dim: int
    target_dim: int

    @property
    def conormal(self) -> bool:
        return self.equal

    def verdicts(self) -> dict[str, bool]:
        return {"a": self.ideal_sides_equal, "b": self.hopf_ideal, "d": self.lie_ideal, "h": self.equal}


def dual_image(q: QuotientMap) -> Subspace:
    """f^T(B*) ⊆ A* (row space of the quotient matrix)."""
    return Subspace.from_vectors(q.matrix, q.source.dim, q.source.p)


def dual_augmentation_image(q: QuotientMap) -> Subspace:
    return Subspace.from_vectors(q.matrix[1:], q.source.dim, q.source.p)


def _right_ideal(d: DualAlgebra, I: Subspace) -> Subspace:
    """I·A* as a subspace."""
    if I.dim == 0:
        return Subspace.zero(d.dim, d.p)
    cols = [d.left_mult_matrix(b).T for b in I.basis]
    return Subspace.from_vectors(np.vstack(cols), d.dim, d.p)


def _left_ideal(d: DualAlgebra, I: Subspace) -> Subspace:
    if I.dim == 0:
        return Subspace.zero(d.dim, d.p)
    cols = [d.right_mult_matrix(b).T for b in I.basis]
    return Subspace.from_vectors(np.vstack(cols), d.dim, d.p)


def _is_two_sided(d: DualAlgebra, J: Subspace) -> bool:
    for a in range(d.dim):
        ea = d.basis_vector(a)
        L = d.left_mult_matrix(ea)
        R = d.right_mult_matrix(ea)
        for z in J.basis:
            if not (J.contains(L @ z) and J.contains(R @ z)):
                return False
    return True


def _is_coideal(d: DualAlgebra, J: Subspace) -> bool:
    cols = J.complement_columns()
    P = J.reduce(np.eye(d.dim, dtype=np.int64))[:, cols].T
    for z in J.basis:
        if z[0] % d.p:
            return False
        if ((P @ d.comultiply(z) @ P.T) % d.p).any():
            return False
    return True


def _is_lie_ideal(d: DualAlgebra, J: Subspace) -> bool:
    for a in range(d.dim):
        ea = d.basis_vector(a)
        for z in J.basis:
            # rref rows of a graded subspace are homogeneous; split anyway
            for t in sorted(set(d.degrees[np.flatnonzero(z)].tolist())):
                zt = np.where(d.degrees == t, z, 0)
                if not J.contains(graded_commutator(d, ea, zt)):
                    return False
    return True


def is_conormal(h: HopfPresentation, q: QuotientMap, dual: DualAlgebra | None = None) -> ConormalCertificate:
    """Evaluate conditions (a), (b), (d), (h) and require that they agree."""
    d = dual if dual is not None else dualize(h)
    IB = dual_augmentation_image(q)
    R = _right_ideal(d, IB)
    L = _left_ideal(d, IB)
    cond_a = R == L
    cond_b = _is_two_sided(d, R) and _is_coideal(d, R)
    cond_d = _is_lie_ideal(d, R)
    right = cotensor(h, q, "right")
    left = cotensor(h, q, "left")
    cond_h = right == left
    dim_identity = right.dim * q.target.dim == h.dim
    cert = ConormalCertificate(left, right, cond_h, cond_a, cond_b, cond_d, dim_identity, h.dim, q.target.dim)
    if len(set(cert.verdicts().values())) != 1:
        raise ConditionDisagreement(f"conormality conditions disagree: {cert.verdicts()}")
    return cert


def is_elementary(h: HopfPresentation) -> bool:
    if len(h.generators) != 1:
        return False
    g = h.generators[0]
    return g.height in (1, ODD) and h.deltabar_of(g.name).is_zero()


def is_cocentral(h: HopfPresentation, q: QuotientMap, dual: DualAlgebra | None = None) -> bool:
    """True iff the dual generator of the elementary target is central in A*."""
    if not is_elementary(q.target):
        raise TargetNotElementary("cocentrality is only decided for elementary targets")
    d = dual if dual is not None else dualize(h)
    chi = q.matrix[1] % h.p
    return all(not graded_commutator(d, d.basis_vector(a), chi).any() for a in range(d.dim))


# -- elementary quotients ------------------------------------------------------


def _nilpotency_exponent(p: int, degree: int) -> int:
    return 2 if (p > 2 and degree % 2) else p


def _projective_points(dim: int, p: int):
    """Coefficient vectors with first nonzero entry 1, in lexicographic order."""
    for coeffs in itertools.product(range(p), repeat=dim):
        nz = next((c for c in coeffs if c), None)
        if nz == 1:
            yield np.array(coeffs, dtype=np.int64)


def _candidate_count(dim: int, p: int) -> int:
    return (p**dim - 1) // (p - 1)


def frobenius_primitive_kernel(d: DualAlgebra, degree: int, cap: int = DEFAULT_CANDIDATE_CAP) -> Subspace:
    """{χ primitive of the given degree : χ^k = 0}, k = 2 for odd degree at p > 2 else p.

    The power map is linear when the primitives of this degree pairwise
    commute (even degree) or all square to zero and anticommute (odd
    degree).  Otherwise the zero set is enumerated; NonLinearFrobenius is
    raised if it is not a subspace.
    """
    prim = primitives(d).get(degree, Subspace.zero(d.dim, d.p))
    k = _nilpotency_exponent(d.p, degree)
    B = prim.basis
    if prim.dim == 0:
        return prim
    commute = all(
        not graded_commutator(d, B[i], B[j]).any() for i in range(len(B)) for j in range(i + 1, len(B))
    )
    if commute and k == d.p:
        M = np.array([d.power(b, k) for b in B]).T
        ker = kernel_basis(M, d.p)
        return Subspace.from_vectors(ker.basis @ B % d.p, d.dim, d.p)
    if commute and k == 2 and not any(d.power(b, 2).any() for b in B):
        return prim
    if d.p ** prim.dim > cap:
        raise CandidateSpaceTooLarge(f"{d.p ** prim.dim} vectors in degree {degree}")
    zeros = [
        np.array(c) @ B % d.p
        for c in itertools.product(range(d.p), repeat=prim.dim)
        if not d.power(np.array(c) @ B % d.p, k).any()
    ]
    span = Subspace.from_vectors(np.array(zeros), d.dim, d.p)
    if d.p**span.dim != len(zeros):
        raise NonLinearFrobenius(f"χ ↦ χ^{k} has a non-linear zero set in degree {degree}")
    return span


def elementary_quotient_from_primitive(h: HopfPresentation, d: DualAlgebra, chi, name: str = "t") -> QuotientMap:
    """A -> k[t]/(t^k) dual to span{χ^i} ⊆ A*, t ↦ the dual of χ.

    f(a) = Σ_i χ^i(a) t^i / i!; needs χ primitive and homogeneous with χ^k = 0.
    """
    p = h.p
    chi = np.asarray(chi, dtype=np.int64) % p
    deg = d.degree_of(chi)
    k = _nilpotency_exponent(p, deg)
    if d.deltabar(chi).any():
        raise ValueError("χ is not primitive")
    if d.power(chi, k).any():
        raise ValueError(f"χ^{k} != 0")
    height = ODD if k == 2 and p > 2 else 1
    E = HopfPresentation(h.prime, [GenSpec(name, deg, height)])
    rows = []
    power = d.unit
    for i in range(E.dim):
        rows.append(power * pow(factorial(i), -1, p) % p)
        power = d.multiply(power, chi)
    q = QuotientMap.from_matrix(h, E, np.array(rows))
    bad = q.failures()
    if bad:
        raise HopfError(f"χ-quotient is not a Hopf surjection: {bad}")
    return q


@dataclass
class ElementaryQuotientResult:
    chi: np.ndarray
    degree: int
    quotient: QuotientMap
    certificate: ConormalCertificate
    strategy: str
    chi_label: str = ""
    cocentral: bool | None = None
    info: dict = field(default_factory=dict)


def _search_degree(h, d, degree, basis, cap, workers):
    p = h.p
    k = _nilpotency_exponent(p, degree)
    if _candidate_count(len(basis), p) > cap:
        raise CandidateSpaceTooLarge(f"{_candidate_count(len(basis), p)} candidates in degree {degree}")
    candidates = [c @ basis % p for c in _projective_points(len(basis), p)]
    candidates = [chi for chi in candidates if not d.power(chi, k).any()]

    def test(chi):
        B = Subspace.from_vectors(np.array([d.power(chi, i) for i in range(1, k)]), d.dim, p)
        R = _right_ideal(d, B)
        return _is_lie_ideal(d, R)

    if workers > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            verdicts = list(ex.map(test, candidates))
    else:
        verdicts = []
        for chi in candidates:
            verdicts.append(test(chi))
            if verdicts[-1]:
                break
    for chi, ok in zip(candidates, verdicts):
        if ok:
            return chi
    return None


def find_elementary_conormal_quotient(
    h: HopfPresentation,
    positive_degree_only: bool = False,
    strategy: str = "auto",
    cap: int = DEFAULT_CANDIDATE_CAP,
    workers: int = 1,
) -> ElementaryQuotientResult:
    """Find a conormal quotient A -> E with E elementary.

    ``search`` walks degrees upward and, in each, the projective points of
    the primitive space of A* with χ^p = 0 (χ^2 = 0 in odd degree, p > 2),
    keeping the first χ whose span{χ^i} has a Lie-ideal augmentation.
    ``chain`` goes through a unitriangular embedding.  ``auto`` tries search
    first and falls back to chain.
    """
    if strategy not in ("search", "chain", "auto"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if h.dim < 2:
        raise ValueError("the trivial algebra has no elementary quotient")
    if strategy == "chain":
        return _chain_result(h, positive_degree_only)
    try:
        return _search(h, positive_degree_only, cap, workers)
    except NoElementaryQuotient as exc:
        if strategy == "search":
            raise
        try:
            return _chain_result(h, positive_degree_only)
        except FlagNotUnitriangular:
            raise exc from None


def _search(h, positive_degree_only, cap, workers) -> ElementaryQuotientResult:
    d = dualize(h)
    prims = primitives(d)
    for degree in sorted(prims):
        if positive_degree_only and degree == 0:
            continue
        basis = prims[degree].basis
        if basis.shape[0] == 0:
            continue
        chi = _search_degree(h, d, degree, basis, cap, workers)
        if chi is None:
            continue
        return _certify(h, d, chi, "search")
    if positive_degree_only:
        raise NoPositiveDegreeQuotient("no conormal elementary quotient in positive degree")
    raise NoElementaryQuotient("no primitive of A* spans a normal elementary sub-Hopf algebra")


def _certify(h, d, chi, strategy, info=None) -> ElementaryQuotientResult:
    q = elementary_quotient_from_primitive(h, d, chi)
    cert = is_conormal(h, q, d)
    if not cert.conormal:
        raise HopfError("selected quotient is not conormal")
    return ElementaryQuotientResult(
        chi=chi,
        degree=d.degree_of(chi),
        quotient=q,
        certificate=cert,
        strategy=strategy,
        chi_label=d.format(chi),
        cocentral=is_cocentral(h, q, d),
        info=info or {},
    )


# -- unitriangular machinery ---------------------------------------------------


@dataclass(frozen=True)
class UTIndex:
    I: tuple[int, ...]
    r: int

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(int(i) for i in self.I))
        if len(self.I) < 2:
            raise ValueError("UT index needs n >= 2")
        if any(i < 0 for i in self.I) or any(a > b for a, b in zip(self.I, self.I[1:])):
            raise ValueError("UT index must be non-negative and non-decreasing")
        if self.r < 1:
            raise ValueError("r must be positive")

    @property
    def n(self) -> int:
        return len(self.I)

    def pairs(self) -> list[tuple[int, int]]:
        """1-based pairs (i, j), i < j, ordered by superdiagonal then row."""
        n = self.n
        return [(i, i + k) for k in range(1, n) for i in range(1, n - k + 1)]

    def degree(self, i: int, j: int) -> int:
        return self.I[j - 1] - self.I[i - 1]


def ut_name(idx: UTIndex, i: int, j: int) -> str:
    return f"x{i}{j}" if idx.n < 10 else f"x{i}_{j}"


def _layers(p: int, degree: int, r: int) -> int:
    """Number of p-power layers of a UT variable."""
    return 1 if (p > 2 and degree % 2) else r


def _stage_presentation(idx: UTIndex, p: int, expo: dict) -> HopfPresentation:
    """k[U] for the present pairs, pair (a, b) standing for x_ab^{p^{expo[a,b]}}."""
    gens = []
    names = {}
    for (a, b) in idx.pairs():
        if (a, b) not in expo:
            continue
        e = expo[(a, b)]
        base = ut_name(idx, a, b)
        name = base if e == 0 else f"{base}_p{p**e}"
        deg = p**e * idx.degree(a, b)
        height = ODD if (p > 2 and deg % 2) else idx.r - e
        gens.append(GenSpec(name, deg, height))
        names[(a, b)] = name
    from .hopf import TruncatedAlgebra

    alg = TruncatedAlgebra(p, gens)

    def power_of(a, b, e):
        """x_ab^{p^e} in alg, None if not expressible, 0-element if it vanishes."""
        if (a, b) not in expo:
            return None
        ea = expo[(a, b)]
        if ea > e:
            return None
        return alg.gen(names[(a, b)]) ** (p ** (e - ea))

    deltabar = {}
    for (a, b), name in names.items():
        e = expo[(a, b)]
        terms: dict = {}
        for k in range(a + 1, b):
            left = power_of(a, k, e)
            right = power_of(k, b, e)
            if left is None or right is None:
                if _vanishes(idx, p, a, k, e) or _vanishes(idx, p, k, b, e):
                    continue
                raise ChainInvariantViolation(f"Δ̄({name}) is not expressible in the stage variables")
            t = TensorElement.pure(left, right)
            for key, c in t.terms.items():
                terms[key] = terms.get(key, 0) + c
        deltabar[name] = [(c, ml, mr) for (ml, mr), c in terms.items()]
    return HopfPresentation(p, gens, deltabar)


def _vanishes(idx: UTIndex, p: int, a: int, b: int, e: int) -> bool:
    deg = idx.degree(a, b)
    if p > 2 and deg % 2:
        return e >= 1
    return e >= idx.r


def ut_presentation(idx: UTIndex, p: int) -> HopfPresentation:
    """k[(UT_I)_(r)]: x_ij of degree I_j − I_i, height r, Δ̄(x_ij) = Σ x_ik ⊗ x_kj."""
    h = _stage_presentation(idx, p, {pair: 0 for pair in idx.pairs()})
    return h


def ut_chain_schedule(idx: UTIndex, p: int) -> list[tuple[dict, tuple[int, int], int]]:
    """Stage bookkeeping: (present exponents, killed pair, exponent) per step.

    The killed pair is the first existing row in the last existing column;
    its exponent is promoted, and the variable dropped once all its
    p-power layers are gone.
    """
    expo = {pair: 0 for pair in idx.pairs()}
    out = []
    while expo:
        col = max(b for (_, b) in expo)
        row = min(a for (a, b) in expo if b == col)
        e = expo[(row, col)]
        out.append((dict(expo), (row, col), e))
        if e + 1 >= _layers(p, idx.degree(row, col), idx.r):
            del expo[(row, col)]
        else:
            expo[(row, col)] = e + 1
    out.append((dict(expo), None, None))
    return out


@dataclass
class ChainStep:
    stage_presentation: HopfPresentation
    pair: tuple[int, int]
    exponent: int
    quotient_to_E: QuotientMap
    kernel_presentation: HopfPresentation
    certificate: ConormalCertificate
    generator: str


def _monomial_image(alg_from, alg_to, images: dict, m) -> np.ndarray:
    e = alg_to.one()
    for name, k in zip(alg_from.names, m):
        if k:
            e = e * (images[name] ** k)
    return e.vector()


def ut_chain(idx: UTIndex, p: int, verify_axioms: bool = True) -> list[ChainStep]:
    """The elementary conormal chain of (UT_I)_(r), one certified step per layer."""
    sched = ut_chain_schedule(idx, p)
    steps = []
    for (expo, pair, e), (nxt, _, _) in zip(sched, sched[1:]):
        stage = _stage_presentation(idx, p, expo)
        if verify_axioms:
            rep = check_hopf_axioms(stage)
            if not rep.passed:
                raise ChainInvariantViolation(f"stage fails Hopf axioms: {rep.failure}")
        kernel = _stage_presentation(idx, p, nxt)
        name = stage.names[list(k for k in idx.pairs() if k in expo).index(pair)]
        y = stage.gen(name)
        k = _nilpotency_exponent(p, stage.generators[stage.gen_index[name]].degree)
        others = [stage.gen(n) for n in stage.names if n != name]
        J = ideal_generated(stage, others + [y**k])
        Q, qm = quotient(stage, J)
        E, qE = _rename_elementary(Q, qm)
        cert = is_conormal(stage, qE)
        if not cert.conormal:
            raise StepNotConormal(f"step killing {name} is not conormal")
        # the kernel stage sits inside the cotensor as the subalgebra on x_ml^{p^{e+1}}
        images = {}
        for (a, b) in idx.pairs():
            if (a, b) in nxt:
                src = kernel.names[[q for q in idx.pairs() if q in nxt].index((a, b))]
                tgt = stage.names[[q for q in idx.pairs() if q in expo].index((a, b))]
                images[src] = stage.gen(tgt) ** (p ** (nxt[(a, b)] - expo[(a, b)]))
        incl = np.array([_monomial_image(kernel, stage, images, m) for m in kernel.basis]).reshape(kernel.dim, stage.dim)
        image = Subspace.from_vectors(incl, stage.dim, p)
        if image.dim != kernel.dim or image != cert.right_cotensor:
            raise ChainInvariantViolation(f"kernel stage after {name} is not the cotensor")
        steps.append(ChainStep(stage, pair, e, qE, kernel, cert, name))
    return steps


def _rename_elementary(Q: HopfPresentation, qm: QuotientMap, name: str = "t"):
    if len(Q.generators) != 1:
        raise TargetNotElementary("quotient has more than one generator")
    g = Q.generators[0]
    if g.height not in (1, ODD):
        raise TargetNotElementary("quotient generator has height > 1")
    E = HopfPresentation(Q.prime, [GenSpec(name, g.degree, g.height)])
    return E, QuotientMap(qm.source, E, qm.matrix, qm.kernel_ideal)


# -- embedding into UT ----------------------------------------------------------


@dataclass
class Embedding:
    """Flag b_1 = 1, b_2, ... of A with Δ(b_j) = Σ_i b_i ⊗ c_ij, c unitriangular.

    x_ij ↦ c_ij is then a Hopf surjection k[(UT_I)_(r)] -> A.
    """

    source: HopfPresentation
    index: UTIndex
    flag: np.ndarray  # columns b_j in A coordinates
    comatrix: dict  # (i, j) 1-based -> c_ij vector in A

    def quotient_map(self, max_dim: int = 4096) -> QuotientMap:
        """The surjection from the full UT presentation (only for small indices)."""
        p = self.source.p
        U = ut_presentation(self.index, p)
        if U.dim > max_dim:
            raise ValueError(f"UT presentation has dimension {U.dim}")
        images = {ut_name(self.index, i, j): self.source.from_vector(self.comatrix[(i, j)]) for (i, j) in self.index.pairs()}
        cols = [_monomial_image(U, self.source, images, m) for m in U.basis]
        return QuotientMap.from_matrix(U, self.source, np.array(cols).T)


def _coinvariant_step(h: HopfPresentation, V: Subspace) -> np.ndarray | None:
    """Lowest-degree b ∉ V with Δ(b) − b⊗1 ∈ V⊗A, first in echelon order."""
    p = h.p
    cols = V.complement_columns()
    P = V.reduce(np.eye(h.dim, dtype=np.int64))[:, cols].T
    e0 = np.zeros(h.dim, dtype=np.int64)
    e0[0] = 1
    for t in sorted(set(h.degrees.tolist())):
        idx = np.flatnonzero(h.degrees == t)
        eqs = []
        for k in idx:
            ek = np.zeros(h.dim, dtype=np.int64)
            ek[k] = 1
            M = P @ ((h.coproduct_matrix(ek) - np.outer(ek, e0)) % p) % p
            eqs.append(M.reshape(-1))
        ker = kernel_basis(np.array(eqs).T, p)
        for row in ker.basis:
            v = np.zeros(h.dim, dtype=np.int64)
            v[idx] = row
            if not V.contains(v):
                return v
    return None


def _generated_subalgebra(h: HopfPresentation, vecs: list[np.ndarray]) -> Subspace:
    p = h.p
    one = np.zeros(h.dim, dtype=np.int64)
    one[0] = 1
    S = Subspace.from_vectors(np.array([one] + list(vecs)), h.dim, p)
    while True:
        new = [h.multiply_vectors(a, b) for a in S.basis for b in vecs]
        S2 = S + Subspace.from_vectors(np.array(new), h.dim, p) if new else S
        if S2 == S:
            return S
        S = S2


def embed_into_unitriangular(h: HopfPresentation) -> Embedding:
    """Build a unitriangular flag of the right regular comodule and verify it.

    Raises FlagNotUnitriangular when no flag exists (A* not local, i.e. the
    group is not unipotent) or when a verification step fails.
    """
    p = h.p
    n = h.dim
    one = np.zeros(n, dtype=np.int64)
    one[0] = 1
    flag = [one]
    V = Subspace.from_vectors(one, n, p)
    while len(flag) < n:
        b = _coinvariant_step(h, V)
        if b is None:
            raise FlagNotUnitriangular(f"no coinvariant beyond a {len(flag)}-dimensional subcomodule")
        flag.append(b)
        V = V + Subspace.from_vectors(b, n, p)
    B = np.array(flag).T % p
    from .fplin import inverse

    Binv = inverse(B, p)
    I = tuple(int(h.degrees[np.flatnonzero(b)[0]]) for b in flag)
    r = max([1] + [g.height for g in h.generators if g.height != ODD])
    idx = UTIndex(I, r) if n >= 2 else None
    comatrix = {}
    for j in range(n):
        C = Binv @ h.coproduct_matrix(flag[j]) % p
        for i in range(n):
            ci = C[i]
            if i > j and ci.any():
                raise FlagNotUnitriangular(f"c_{i + 1}{j + 1} != 0 below the diagonal")
            if i == j and not np.array_equal(ci, one):
                raise FlagNotUnitriangular(f"c_{j + 1}{j + 1} != 1")
            if i < j:
                comatrix[(i + 1, j + 1)] = ci
    # comatrix identity Δ(c_ij) = Σ_k c_ik ⊗ c_kj
    def c(i, j):
        return one if i == j else comatrix.get((i, j), np.zeros(n, dtype=np.int64))

    for (i, j), v in comatrix.items():
        rhs = sum(np.outer(c(i, k), c(k, j)) for k in range(i, j + 1)) % p
        if not np.array_equal(h.coproduct_matrix(v), rhs):
            raise FlagNotUnitriangular(f"comatrix identity fails at ({i}, {j})")
    if _generated_subalgebra(h, list(comatrix.values())).dim != n:
        raise FlagNotUnitriangular("the matrix coefficients do not generate A")
    if idx is not None:
        for (i, j), v in comatrix.items():
            k = _nilpotency_exponent(p, idx.degree(i, j)) if p > 2 and idx.degree(i, j) % 2 else p**r
            if h.from_vector(v) ** k != h.element():
                raise FlagNotUnitriangular(f"c_{i}{j} is not killed by the UT truncation")
    return Embedding(h, idx, B, comatrix)


def intersection_chain(h: HopfPresentation, emb: Embedding) -> ElementaryQuotientResult:
    """First nontrivial G ∩ U_i along the UT chain, as a certified quotient.

    Stage i has k[G ∩ U_i] = A / (c_ab^{p^e} for pairs still present).
    """
    p = h.p
    sched = ut_chain_schedule(emb.index, p)
    d = dualize(h)
    prims = primitives(d)
    for i, (expo, _, _) in enumerate(sched):
        gens = [h.from_vector(emb.comatrix[ab]) ** (p**e) for ab, e in expo.items()]
        J = ideal_generated(h, gens)
        qdim = h.dim - J.dim
        if qdim <= 1:
            continue
        if qdim != _nilpotency_exponent(p, _degree_of_quotient(h, J)):
            raise ChainInvariantViolation(f"first nontrivial stage has dimension {qdim}")
        # (A/J)* = J^⊥ ⊆ A*; its augmentation part is spanned by powers of one primitive
        perp = kernel_basis(J.space.basis, p) if J.dim else Subspace.full(h.dim, p)
        for t in sorted(prims):
            rows = [r for r in (prims[t] & perp).basis if r[0] == 0]
            if not rows:
                continue
            res = _certify(h, d, rows[0], "chain", {"stage": i, "ideal_dim": J.dim})
            if res.quotient.kernel_ideal.space != J.space:
                raise ChainInvariantViolation("χ-quotient kernel differs from the stage ideal")
            return res
        raise ChainInvariantViolation("no primitive in the annihilator of the stage ideal")
    raise ChainInvariantViolation("chain never leaves the trivial group")


def _degree_of_quotient(h: HopfPresentation, J: IdealSubspace) -> int:
    cols = J.space.complement_columns()
    degs = sorted(int(h.degrees[c]) for c in cols if c != 0)
    return degs[0] if degs else 0


def _chain_result(h: HopfPresentation, positive_degree_only: bool) -> ElementaryQuotientResult:
    emb = embed_into_unitriangular(h)
    res = intersection_chain(h, emb)
    if positive_degree_only and res.degree == 0:
        raise NoPositiveDegreeQuotient("chain strategy produced a degree-0 quotient")
    return res
