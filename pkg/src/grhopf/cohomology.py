"""Bigraded cohomology H^{s,t}(A, k) = Ext^{s,t}_{A*}(k, k).

Two independent computations:

* the normalized bar complex of Λ = A*, cochains Hom((I_Λ)^{⊗s}, k) in each
  internal degree t (valid for any augmented Λ);
* a minimal free resolution of k over Λ, only when I_Λ is nilpotent.

Bar faces use the sign (−1)^i on the i-th face (1-based).  Cup product is
concatenation, (f ∪ g)[a_1|…|a_{s+s'}] = f[a_1|…|a_s]·g[a_{s+1}|…], which
satisfies δ(f ∪ g) = δf ∪ g + (−1)^s f ∪ δg for this face sign.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fplin import Subspace, kernel_basis, rank, solve
from .hopf import (
    DualAlgebra,
    HopfError,
    HopfPresentation,
    QuotientMap,
    TensorElement,
    TruncatedAlgebra,
    delta,
)

# dense elimination: bound the entries of any single boundary matrix
DEFAULT_CELL_BUDGET = 4_000_000
SIGN_CONVENTIONS = ("homological", "graded")


class BudgetExceeded(HopfError):
    def __init__(self, s: int, t: int, entries: int, budget: int):
        super().__init__(f"boundary at (s={s}, t={t}) has {entries} entries, budget {budget}")
        self.s = s
        self.t = t


class NotLocal(HopfError):
    pass


class NoFiniteN(HopfError):
    pass


def default_window(h: HopfPresentation) -> tuple[int, int]:
    maxdeg = max([1] + [g.degree for g in h.generators])
    return 6, 4 * h.p * maxdeg


@dataclass
class BettiTable:
    s_max: int
    t_max: int
    dims: dict[tuple[int, int], int]

    def __getitem__(self, key) -> int:
        return self.dims.get(tuple(key), 0)

    def nonzero(self) -> list[tuple[int, int, int]]:
        return [(s, t, d) for (s, t), d in sorted(self.dims.items()) if d]

    def to_tsv(self) -> str:
        return "".join(f"{s}\t{t}\t{d}\n" for s, t, d in self.nonzero())

    def scaled(self, k: int) -> "BettiTable":
        return BettiTable(self.s_max, self.t_max, {key: k * v for key, v in self.dims.items()})

    def restricted(self, s_max: int, t_max: int) -> "BettiTable":
        return BettiTable(
            s_max, t_max, {(s, t): v for (s, t), v in self.dims.items() if s <= s_max and t <= t_max}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.nonzero() == other.nonzero() and (self.s_max, self.t_max) == (other.s_max, other.t_max)


# -- bar complex -------------------------------------------------------------------


class BarComplex:
    """Normalized bar cochains of an augmented graded algebra, per (s, t).

    Cells of bidegree (s, t) are tuples of basis indices of I_Λ (all indices
    but 0) with internal degrees summing to t, in lexicographic order.
    """

    def __init__(self, d: DualAlgebra, sign: str = "homological", budget: int = DEFAULT_CELL_BUDGET):
        if sign not in SIGN_CONVENTIONS:
            raise ValueError(f"unknown sign convention {sign!r}")
        self.algebra = d
        self.p = d.p
        self.sign = sign
        self.budget = budget
        self.aug = list(range(1, d.dim))
        self.by_degree: dict[int, list[int]] = {}
        for a in self.aug:
            self.by_degree.setdefault(int(d.degrees[a]), []).append(a)
        # products of augmentation basis elements, as lists of (k, c)
        self._prod = {}
        for a in self.aug:
            for b in self.aug:
                col = d.mult[a, b] % self.p
                nz = np.flatnonzero(col)
                if nz.size:
                    if 0 in nz:
                        raise HopfError("augmentation ideal is not closed under multiplication")
                    self._prod[(a, b)] = [(int(k), int(col[k])) for k in nz]
        self._cells: dict = {}
        self._index: dict = {}
        self._bd: dict = {}

    def cell_count(self, s: int, t: int) -> int:
        return _count(tuple(sorted((k, len(v)) for k, v in self.by_degree.items())), s, t)

    def boundary_entries(self, s: int, t: int, coeff_dim: int = 1) -> int:
        if s < 1:
            return 0
        return self.cell_count(s - 1, t) * self.cell_count(s, t) * coeff_dim**2

    def check_budget(self, s: int, t: int, coeff_dim: int = 1):
        n = self.boundary_entries(s, t, coeff_dim)
        if n > self.budget:
            raise BudgetExceeded(s, t, n, self.budget)

    def cells(self, s: int, t: int) -> list[tuple[int, ...]]:
        key = (s, t)
        if key not in self._cells:
            self._cells[key] = sorted(self._enumerate(s, t))
            self._index[key] = {c: i for i, c in enumerate(self._cells[key])}
        return self._cells[key]

    def index(self, s: int, t: int) -> dict:
        self.cells(s, t)
        return self._index[(s, t)]

    def _enumerate(self, s: int, t: int):
        if s == 0:
            return [()] if t == 0 else []
        out = []
        for deg, elems in self.by_degree.items():
            if deg > t:
                continue
            rest = self._enumerate(s - 1, t - deg)
            for a in elems:
                out.extend((a,) + r for r in rest)
        return out

    def _face_sign(self, cell, i: int) -> int:
        """Sign of the face multiplying entries i and i+1 (0-based i, 1-based face i+1)."""
        if self.sign == "homological":
            e = i + 1
        else:
            degs = self.algebra.degrees
            e = i + sum(int(degs[a]) for a in cell[:i])
        return -1 if e % 2 else 1

    def boundary(self, s: int, t: int) -> np.ndarray:
        """Chain boundary ∂_s: B_s(t) -> B_{s-1}(t), shape (|B_{s-1}|, |B_s|)."""
        key = (s, t)
        if key in self._bd:
            return self._bd[key]
        self.check_budget(s, t)
        cols = self.cells(s, t)
        rows = self.index(s - 1, t) if s >= 1 else {}
        M = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for j, cell in enumerate(cols):
            for i in range(s - 1):
                prods = self._prod.get((cell[i], cell[i + 1]))
                if not prods:
                    continue
                sg = self._face_sign(cell, i)
                for k, c in prods:
                    M[rows[cell[:i] + (k,) + cell[i + 2 :]], j] += sg * c
        M %= self.p
        self._bd[key] = M
        return M

    def coboundary(self, s: int, t: int) -> np.ndarray:
        """δ_s: C^s(t) -> C^{s+1}(t), the transpose of ∂_{s+1}."""
        return self.boundary(s + 1, t).T

    def square_is_zero(self, s: int, t: int) -> bool:
        if s < 1:
            return True
        return not ((self.boundary(s, t) @ self.boundary(s + 1, t)) % self.p).any()


@lru_cache(maxsize=None)
def _count(weights: tuple, s: int, t: int) -> int:
    if s == 0:
        return 1 if t == 0 else 0
    return sum(c * _count(weights, s - 1, t - d) for d, c in weights if d <= t)


def _column_betti(bar: BarComplex, s_max: int, t: int, coeff_dim: int = 1) -> dict:
    p = bar.p
    ranks = {0: 0, 1: 0}
    for s in range(2, s_max + 2):
        M = bar.boundary(s, t)
        if coeff_dim > 1:
            M = np.kron(np.eye(coeff_dim, dtype=np.int64), M)
        ranks[s] = rank(M, p) if M.size else 0
    out = {}
    for s in range(s_max + 1):
        n = len(bar.cells(s, t)) * coeff_dim
        out[(s, t)] = n - ranks[s + 1] - ranks[s]
    return out


def bar_betti(
    d: DualAlgebra,
    s_max: int,
    t_max: int,
    *,
    workers: int = 1,
    budget: int = DEFAULT_CELL_BUDGET,
    sign: str = "homological",
    coeff_dim: int = 1,
) -> BettiTable:
    """dim H^{s,t} from ranks of bar boundaries, columns t processed independently."""
    if s_max < 0 or t_max < 0:
        raise ValueError("window must be non-negative")
    bar = BarComplex(d, sign, budget)
    for t in range(t_max + 1):
        for s in range(1, s_max + 2):
            bar.check_budget(s, t, coeff_dim)
    if workers > 1:
        # one complex per column keeps the caches thread-private
        def col(t):
            return _column_betti(BarComplex(d, sign, budget), s_max, t, coeff_dim)

        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(col, range(t_max + 1)))
    else:
        parts = [_column_betti(bar, s_max, t, coeff_dim) for t in range(t_max + 1)]
    dims = {}
    for part in parts:
        dims.update(part)
    return BettiTable(s_max, t_max, dict(sorted(dims.items())))


def coefficients_betti(d: DualAlgebra, coeff_dim: int, s_max: int, t_max: int, **kw) -> BettiTable:
    """Ext with values in the trivial module k^coeff_dim (cochains C^s ⊗ k^m)."""
    if coeff_dim < 1:
        raise ValueError("coefficient dimension must be positive")
    return bar_betti(d, s_max, t_max, coeff_dim=coeff_dim, **kw)


# -- minimal resolution --------------------------------------------------------------


def _subspace_power_chain(d: DualAlgebra) -> list[Subspace]:
    n = d.dim
    I = Subspace.from_vectors(np.eye(n, dtype=np.int64)[1:], n, d.p)
    chain = [I]
    cur = I
    for _ in range(n + 1):
        if cur.dim == 0:
            break
        prods = [d.multiply(a, b) for a in cur.basis for b in I.basis]
        nxt = Subspace.from_vectors(np.array(prods), n, d.p)
        if nxt == cur:
            break
        chain.append(nxt)
        cur = nxt
    return chain


def is_local(d: DualAlgebra) -> bool:
    """True iff the augmentation ideal of Λ is nilpotent."""
    return _subspace_power_chain(d)[-1].dim == 0


def minimal_resolution_betti(d: DualAlgebra, s_max: int, t_max: int) -> BettiTable:
    """Betti numbers of a minimal free resolution of k over a local Λ.

    Left modules; a free module is a list of generator degrees and its
    degree-t part has coordinates (generator, basis index).  In each degree t
    the new generators complete (I·K)_t to K_t, K the current kernel.
    """
    if not is_local(d):
        raise NotLocal("augmentation ideal of the dual is not nilpotent")
    p = d.p
    n = d.dim
    degs = d.degrees
    by_deg = {t: np.flatnonzero(degs == t) for t in range(t_max + 1)}
    # left multiplication by each basis element: L[a] @ v = e_a · v
    L = [d.left_mult_matrix(d.basis_vector(a)) for a in range(n)]

    def coords(gens, t):
        """Coordinates of the degree-t part of the free module on ``gens``."""
        out = []
        for g, dg in enumerate(gens):
            if dg <= t:
                out.extend((g, int(k)) for k in by_deg.get(t - dg, ()))
        return out

    def embed(gens, v, t):
        """Map a full free-module vector (len(gens) × n) to degree-t coordinates."""
        pos = {c: i for i, c in enumerate(coords(gens, t))}
        out = np.zeros(len(pos), dtype=np.int64)
        for g in range(len(gens)):
            for k in np.flatnonzero(v[g]):
                out[pos[(g, int(k))]] = v[g, k]
        return out

    dims: dict[tuple[int, int], int] = {(0, 0): 1}
    for t in range(1, t_max + 1):
        dims[(0, t)] = 0
    # F_0 = Λ, d_0 = ε; kernel in degree t is Λ_t minus the unit
    prev_gens = [0]
    kernel = {}
    for t in range(t_max + 1):
        cs = coords(prev_gens, t)
        vecs = [np.eye(len(cs), dtype=np.int64)[i] for i, (_, k) in enumerate(cs) if k != 0]
        kernel[t] = Subspace.from_vectors(np.array(vecs) if vecs else np.zeros((0, len(cs))), len(cs), p)
    for s in range(1, s_max + 1):
        new_gens: list[int] = []
        images: list[np.ndarray] = []  # d(e_g) as (len(prev_gens) × n) arrays
        for t in range(t_max + 1):
            cs = coords(prev_gens, t)
            K = kernel[t]
            # (I·K)_t = Σ_{u>=0} I_u · K_{t-u}
            prods = [np.zeros(len(cs), dtype=np.int64)]
            for u in range(t + 1):
                Ku = kernel[t - u]
                if Ku.dim == 0:
                    continue
                csu = coords(prev_gens, t - u)
                for a in by_deg.get(u, ()):
                    if a == 0:
                        continue
                    for z in Ku.basis:
                        full = np.zeros((len(prev_gens), n), dtype=np.int64)
                        for i, (g, k) in enumerate(csu):
                            full[g, k] = z[i]
                        prods.append(embed(prev_gens, (full @ L[a].T) % p, t))
            IK = Subspace.from_vectors(np.array(prods), len(cs), p)
            reps = K.quotient_representatives(IK) if K.dim else np.zeros((0, len(cs)), dtype=np.int64)
            dims[(s, t)] = len(reps)
            for r in reps:
                full = np.zeros((len(prev_gens), n), dtype=np.int64)
                for i, (g, k) in enumerate(cs):
                    full[g, k] = r[i]
                new_gens.append(t)
                images.append(full)
        # kernel of d_s in each degree
        kernel = {}
        for t in range(t_max + 1):
            src = coords(new_gens, t)
            tgt = coords(prev_gens, t)
            M = np.zeros((len(tgt), len(src)), dtype=np.int64)
            for j, (g, k) in enumerate(src):
                img = (images[g] @ L[k].T) % p  # e_k · d(e_g), row-wise left action
                M[:, j] = embed(prev_gens, img, t)
            kernel[t] = kernel_basis(M, p) if len(src) else Subspace.zero(0, p)
        prev_gens = new_gens
    return BettiTable(s_max, t_max, dict(sorted(dims.items())))


# -- classes and products ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    s: int
    t: int
    representative: np.ndarray  # cochain on bar cells (s, t)
    coordinates: np.ndarray  # in the chosen basis of H^{s,t}

    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.s, self.t)

    def is_zero(self) -> bool:
        return not self.coordinates.any()


@dataclass
class _CellData:
    reps: np.ndarray  # harmonic representatives (rows)
    solve_matrix: np.ndarray  # rows: reps then coboundary basis
    nreps: int


class Cohomology:
    """Cohomology classes, cup products and coordinates over a bar complex."""

    def __init__(self, d: DualAlgebra, s_max: int, t_max: int, budget: int = DEFAULT_CELL_BUDGET):
        self.algebra = d
        self.p = d.p
        self.s_max = s_max
        self.t_max = t_max
        self.bar = BarComplex(d, "homological", budget)
        self._cell: dict = {}

    def _data(self, s: int, t: int) -> _CellData:
        key = (s, t)
        if key in self._cell:
            return self._cell[key]
        p = self.p
        n = len(self.bar.cells(s, t))
        delta_s = self.bar.coboundary(s, t) if n else np.zeros((0, 0), dtype=np.int64)
        Z = kernel_basis(delta_s, p) if n else Subspace.zero(0, p)
        if s >= 1 and n:
            prev = self.bar.coboundary(s - 1, t)  # shape (n, |C^{s-1}|)
            Bd = Subspace.from_vectors(prev.T, n, p)
        else:
            Bd = Subspace.zero(n, p)
        reps = Z.quotient_representatives(Bd) if n else np.zeros((0, 0), dtype=np.int64)
        M = np.vstack([reps, Bd.basis]) if n else np.zeros((0, 0), dtype=np.int64)
        data = _CellData(reps, M, len(reps))
        self._cell[key] = data
        return data

    def dim(self, s: int, t: int) -> int:
        return self._data(s, t).nreps

    def basis(self, s: int, t: int) -> list[CohomologyClass]:
        data = self._data(s, t)
        out = []
        for i, r in enumerate(data.reps):
            c = np.zeros(data.nreps, dtype=np.int64)
            c[i] = 1
            out.append(CohomologyClass(s, t, r, c))
        return out

    def unit(self) -> CohomologyClass:
        return self.basis(0, 0)[0]

    def is_cocycle(self, s: int, t: int, v) -> bool:
        if not len(self.bar.cells(s, t)):
            return True
        return not ((self.bar.coboundary(s, t) @ np.asarray(v)) % self.p).any()

    def coordinates(self, s: int, t: int, v) -> np.ndarray:
        data = self._data(s, t)
        if data.nreps == 0:
            return np.zeros(0, dtype=np.int64)
        x = solve(data.solve_matrix.T, np.asarray(v, dtype=np.int64) % self.p, self.p)
        if x is None:
            raise ValueError("cochain is not a cocycle")
        return x[: data.nreps] % self.p

    def class_of(self, s: int, t: int, v) -> CohomologyClass:
        return CohomologyClass(s, t, np.asarray(v, dtype=np.int64) % self.p, self.coordinates(s, t, v))

    def from_coordinates(self, s: int, t: int, coords) -> CohomologyClass:
        data = self._data(s, t)
        coords = np.asarray(coords, dtype=np.int64) % self.p
        rep = (coords @ data.reps) % self.p if data.nreps else np.zeros(len(self.bar.cells(s, t)), dtype=np.int64)
        return CohomologyClass(s, t, rep, coords)

    def cup_cochain(self, s1, t1, f, s2, t2, g) -> np.ndarray:
        cells_f = self.bar.cells(s1, t1)
        cells_g = self.bar.cells(s2, t2)
        idx = self.bar.index(s1 + s2, t1 + t2)
        out = np.zeros(len(idx), dtype=np.int64)
        f = np.asarray(f) % self.p
        g = np.asarray(g) % self.p
        for i in np.flatnonzero(f):
            for j in np.flatnonzero(g):
                out[idx[cells_f[i] + cells_g[j]]] += f[i] * g[j]
        return out % self.p

    def cup(self, a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
        s, t = a.s + b.s, a.t + b.t
        v = self.cup_cochain(a.s, a.t, a.representative, b.s, b.t, b.representative)
        return self.class_of(s, t, v)

    def cells_in_window(self) -> list[tuple[int, int]]:
        return [(s, t) for s in range(self.s_max + 1) for t in range(self.t_max + 1)]

    def betti(self) -> BettiTable:
        return BettiTable(self.s_max, self.t_max, {c: self.dim(*c) for c in self.cells_in_window()})


def cup_product(coh: Cohomology, a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
    return coh.cup(a, b)


def product_table(coh: Cohomology) -> dict:
    """(a, b) -> coordinates of basis_a ∪ basis_b, over pairs landing in the window.

    Keys are ((s1, t1, i), (s2, t2, j)) with i, j basis positions.
    """
    out = {}
    cells = [c for c in coh.cells_in_window() if coh.dim(*c)]
    for (s1, t1) in cells:
        for (s2, t2) in cells:
            if s1 + s2 > coh.s_max or t1 + t2 > coh.t_max:
                continue
            for i, a in enumerate(coh.basis(s1, t1)):
                for j, b in enumerate(coh.basis(s2, t2)):
                    out[((s1, t1, i), (s2, t2, j))] = coh.cup(a, b).coordinates
    return out


def graded_commutativity_sign(s1: int, t1: int, s2: int, t2: int) -> int:
    """ab = sign · ba in H^{*,*} with the face and cup conventions of this module."""
    return -1 if (s1 * s2 + t1 * t2) % 2 else 1


# -- restriction ----------------------------------------------------------------------


def restriction_cochain_matrix(q: QuotientMap, barA: BarComplex, barB: BarComplex, s: int, t: int) -> np.ndarray:
    """Matrix of f ↦ f ∘ ι^{⊗s}, ι: B* -> A* the dual inclusion."""
    p = q.source.p
    F = q.matrix % p  # row i of F is ι(e_i^*) in A* coordinates
    cellsA = barA.index(s, t)
    cellsB = barB.cells(s, t)
    R = np.zeros((len(cellsB), len(cellsA)), dtype=np.int64)
    for i, cb in enumerate(cellsB):
        supports = [[(int(a), int(F[b, a])) for a in np.flatnonzero(F[b])] for b in cb]
        for combo in itertools.product(*supports):
            cell = tuple(a for a, _ in combo)
            j = cellsA.get(cell)
            if j is None:
                continue
            coef = 1
            for _, c in combo:
                coef *= c
            R[i, j] += coef
    return R % p


@dataclass
class RestrictionResult:
    maps: dict[tuple[int, int], np.ndarray]  # (s,t) -> dim H_B × dim H_A
    commutes_with_coboundary: bool
    source: Cohomology
    target: Cohomology


def restriction_map(q: QuotientMap, s_max: int, t_max: int, cohA: Cohomology | None = None, cohB: Cohomology | None = None) -> RestrictionResult:
    from .hopf import dualize

    p = q.source.p
    cohA = cohA or Cohomology(dualize(q.source), s_max, t_max)
    cohB = cohB or Cohomology(dualize(q.target), s_max, t_max)
    maps = {}
    commutes = True
    for t in range(t_max + 1):
        for s in range(s_max + 1):
            R = restriction_cochain_matrix(q, cohA.bar, cohB.bar, s, t)
            R1 = restriction_cochain_matrix(q, cohA.bar, cohB.bar, s + 1, t)
            dA = cohA.bar.coboundary(s, t)
            dB = cohB.bar.coboundary(s, t)
            if R1.size and R.size:
                if not np.array_equal((R1 @ dA) % p, (dB @ R) % p):
                    commutes = False
            cols = []
            for cls in cohA.basis(s, t):
                cols.append(cohB.coordinates(s, t, (R @ cls.representative) % p))
            maps[(s, t)] = (
                np.array(cols, dtype=np.int64).T.reshape(cohB.dim(s, t), cohA.dim(s, t))
            )
    return RestrictionResult(maps, commutes, cohA, cohB)


# -- finite generation evidence ------------------------------------------------------------


@dataclass
class FGEvidenceReport:
    generator_bound: int
    window: tuple[int, int]
    generators: list[tuple[int, int, np.ndarray]]  # (s, t, coordinates)
    verdicts: dict[tuple[int, int], bool]

    @property
    def unspanned(self) -> list[tuple[int, int]]:
        return [c for c, ok in sorted(self.verdicts.items()) if not ok]

    @property
    def all_spanned(self) -> bool:
        return not self.unspanned

    def lines(self) -> list[str]:
        out = [f"generator_bound: {self.generator_bound}", f"window: s<={self.window[0]} t<={self.window[1]}"]
        for s, t, c in self.generators:
            out.append(f"generator: ({s},{t}) {' '.join(map(str, c.tolist()))}")
        out.append(f"unspanned: {' '.join(f'({s},{t})' for s, t in self.unspanned) or 'none'}")
        out.append(f"verdict: {'spanned' if self.all_spanned else 'not spanned'}")
        return out


def fg_evidence(coh: Cohomology, g: int) -> FGEvidenceReport:
    """Greedy generators in s <= g; verdict per cell: spanned by their products."""
    p = coh.p
    span: dict[tuple[int, int], Subspace] = {}
    gens: list[CohomologyClass] = []
    verdicts = {}
    for s in range(coh.s_max + 1):
        for t in range(coh.t_max + 1):
            n = coh.dim(s, t)
            if (s, t) == (0, 0):
                span[(s, t)] = Subspace.full(n, p)
                verdicts[(s, t)] = True
                continue
            vecs = [np.zeros(n, dtype=np.int64)]
            for gen in gens:
                src = (s - gen.s, t - gen.t)
                if src[0] < 0 or src[1] < 0 or src not in span:
                    continue
                for v in span[src].basis:
                    c = coh.from_coordinates(*src, v)
                    vecs.append(coh.cup(gen, c).coordinates)
            S = Subspace.from_vectors(np.array(vecs), n, p)
            if S.dim < n and s <= g:
                for r in Subspace.full(n, p).quotient_representatives(S):
                    gens.append(coh.from_coordinates(s, t, r))
                S = Subspace.full(n, p)
            span[(s, t)] = S
            verdicts[(s, t)] = S.dim == n
    return FGEvidenceReport(g, (coh.s_max, coh.t_max), [(c.s, c.t, c.coordinates) for c in gens], verdicts)


# -- invariant powers -------------------------------------------------------------------------


@dataclass
class InvariantPowerReport:
    N: int
    transcript: list[tuple[int, str, bool]]  # (N, basis monomial, invariant)
    witness: str | None  # basis monomial failing at N - 1
    scope: str = "monomial basis"

    def lines(self) -> list[str]:
        out = [f"N: {self.N}", f"scope: {self.scope}"]
        out.append(f"witness_at_N_minus_1: {self.witness if self.witness is not None else 'none'}")
        for n, b, ok in self.transcript:
            out.append(f"check: N={n} {b} {'invariant' if ok else 'moved'}")
        return out


class Comodule:
    """A truncated algebra R with an algebra coaction Δ_R: R -> A ⊗ R.

    ``coaction`` gives Δ_R on each generator of R as a TensorElement of A ⊗ R.
    """

    def __init__(self, h: HopfPresentation, R: TruncatedAlgebra, coaction: dict):
        self.hopf = h
        self.R = R
        if R.p != h.p:
            raise ValueError("module and Hopf algebra over different primes")
        self.gen_coaction = {}
        for name in R.names:
            t = coaction.get(name)
            if t is None:
                t = TensorElement.pure(h.one(), R.gen(name))
            self.gen_coaction[name] = TensorElement(h, R, t.terms)
        for name in coaction:
            if name not in R.gen_index:
                raise ValueError(f"coaction given for undeclared generator {name!r}")
        self._validate()

    def coact(self, b) -> TensorElement:
        """Δ_R on a basis monomial (exponent tuple) of R."""
        h, R = self.hopf, self.R
        out = TensorElement(h, R, {(h.one_mono, R.one_mono): 1})
        for name, k in zip(R.names, b):
            if k:
                out = out * (self.gen_coaction[name] ** k)
        return out

    def _validate(self):
        h, R = self.hopf, self.R
        for name, t in self.gen_coaction.items():
            for (a, m), _ in t.terms.items():
                if h.monomial_degree(a) + R.monomial_degree(m) != R.generators[R.gen_index[name]].degree:
                    raise ValueError(f"coaction on {name} is not homogeneous")
            counit = {m: c for (a, m), c in t.terms.items() if a == h.one_mono}
            if counit != dict(R.gen(name).terms):
                raise ValueError(f"counit law fails for the coaction on {name}")
            # relation compatibility: Δ_R(u)^{trunc} = 0
            trunc = R.generators[R.gen_index[name]].truncation(R.p)
            if not (t**trunc).is_zero():
                raise ValueError(f"coaction on {name} does not respect its truncation")
            # coassociativity: (Δ ⊗ id) Δ_R = (id ⊗ Δ_R) Δ_R
            left: dict = {}
            right: dict = {}
            for (a, m), c in t.terms.items():
                for (a1, a2), c2 in delta(h.element({a: 1})).terms.items():
                    key = (a1, a2, m)
                    left[key] = (left.get(key, 0) + c * c2) % h.p
                for (a2, m2), c2 in self.coact(m).terms.items():
                    key = (a, a2, m2)
                    right[key] = (right.get(key, 0) + c * c2) % h.p
            left = {k: v for k, v in left.items() if v}
            right = {k: v for k, v in right.items() if v}
            if left != right:
                raise ValueError(f"coaction on {name} is not coassociative")


def invariant_power(module: Comodule) -> InvariantPowerReport:
    """Smallest N with Δ_R(b^{p^N}) = 1 ⊗ b^{p^N} for every basis monomial b of R."""
    h, R = module.hopf, module.R
    p = R.p
    max_trunc = int(max([1] + [int(t) for t in R.truncations]))
    bound = math.ceil(math.log(max_trunc, p)) + sum(1 if g.height == "odd" else int(g.height) for g in h.generators) + 1
    transcript = []
    prev_fail = None
    for N in range(bound + 1):
        failing = None
        for b in R.basis:
            x = R.element({b: 1}) ** (p**N)
            lhs = TensorElement(h, R, {})
            for m, c in x.terms.items():
                lhs = lhs + module.coact(m) * c
            rhs = TensorElement.pure(h.one(), x)
            ok = lhs == rhs
            transcript.append((N, R.format_monomial(b), ok))
            if not ok and failing is None:
                failing = R.format_monomial(b)
        if failing is None:
            return InvariantPowerReport(N, transcript, prev_fail)
        prev_fail = failing
    raise NoFiniteN(f"no invariant power up to N = {bound}")
