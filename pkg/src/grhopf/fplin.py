"""Dense exact linear algebra over the prime field F_p.

Matrices are plain numpy integer arrays with entries in ``0..p-1``.  Every
routine reduces its inputs mod p first, so callers may pass signed or
unreduced integer arrays.  Elimination over F_2 runs on boolean arrays with
XOR row operations; other primes use int64 arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Prime",
    "is_prime",
    "reduce_mod",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "inverse",
    "Subspace",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Prime:
    """A prime characteristic, checked by trial division."""

    p: int

    def __post_init__(self):
        if not is_prime(int(self.p)):
            raise ValueError(f"{self.p} is not prime")
        if self.p > 255:
            raise ValueError("scalars are stored as bytes; p must be < 256")

    def __int__(self) -> int:
        return self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return pow(a, self.p - 2, self.p)


def _p(p) -> int:
    return int(p.p) if isinstance(p, Prime) else int(p)


def reduce_mod(m, p) -> np.ndarray:
    """Return ``m`` as an int64 array reduced into ``0..p-1``."""
    return np.mod(np.asarray(m, dtype=np.int64), _p(p))


def _eliminate_gf2(a: np.ndarray, ncols: int):
    a = a.astype(bool)
    m = a.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        rows = np.flatnonzero(a[:, c])
        rows = rows[rows != r]
        if rows.size:
            a[rows] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r].astype(np.int64), pivots


def _eliminate(a: np.ndarray, p: int, ncols: int):
    m = a.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r] = (a[r] * pow(lead, p - 2, p)) % p
        rows = np.flatnonzero(a[:, c])
        rows = rows[rows != r]
        if rows.size:
            a[rows] = (a[rows] - np.outer(a[rows, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rref(m, p, ncols: int | None = None) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row-echelon form of ``m`` over F_p.

    Zero rows are dropped, so the returned matrix has exactly ``rank`` rows.
    With ``ncols`` set, pivots are only searched in the first ``ncols``
    columns (row operations still act on the whole row), which is how
    augmented systems are solved.
    """
    p = _p(p)
    a = reduce_mod(m, p)
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    if ncols is None:
        ncols = a.shape[1]
    if a.shape[0] == 0 or a.shape[1] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64), 0, []
    if p == 2:
        r, piv = _eliminate_gf2(a, ncols)
    else:
        r, piv = _eliminate(a.copy(), p, ncols)
    return r, len(piv), piv


def rank(m, p) -> int:
    a = np.asarray(m)
    if a.size == 0:
        return 0
    # eliminating along the short side is cheaper
    if a.shape[0] > a.shape[1]:
        a = a.T
    return rref(a, p)[1]


def kernel_basis(m, p) -> "Subspace":
    """Right null space ``{v : m v = 0}`` as a Subspace."""
    p = _p(p)
    a = reduce_mod(m, p)
    n = a.shape[1]
    r, _, piv = rref(a, p)
    free = [c for c in range(n) if c not in set(piv)]
    vecs = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        vecs[k, f] = 1
        for i, c in enumerate(piv):
            vecs[k, c] = (-r[i, f]) % p
    return Subspace.from_vectors(vecs, n, p)


def solve(m, b, p) -> np.ndarray | None:
    """Some ``x`` with ``m x = b``, or None when the system is inconsistent."""
    p = _p(p)
    a = reduce_mod(m, p)
    b = reduce_mod(b, p).reshape(-1)
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"rhs has length {b.shape[0]}, matrix has {a.shape[0]} rows")
    n = a.shape[1]
    aug = np.concatenate([a, b[:, None]], axis=1)
    r, _, piv = rref(aug, p)
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = r[i, n]
    return x


def inverse(m, p) -> np.ndarray:
    p = _p(p)
    a = reduce_mod(m, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    r, rk, piv = rref(aug, p, ncols=n)
    if rk != n or piv != list(range(n)):
        raise np.linalg.LinAlgError("matrix is singular mod p")
    return r[:, n:]


@dataclass(frozen=True, eq=False)
class Subspace:
    """Row space of a reduced row-echelon matrix over F_p.

    ``basis`` is canonical (rref, no zero rows), so two subspaces are equal
    exactly when their basis matrices are identical.
    """

    ambient_dim: int
    basis: np.ndarray
    p: int
    pivots: tuple[int, ...] = field(default=())

    @classmethod
    def from_vectors(cls, vectors, ambient_dim: int, p) -> "Subspace":
        p = _p(p)
        if ambient_dim == 0:
            return cls.zero(0, p)
        v = np.asarray(vectors, dtype=np.int64).reshape(-1, ambient_dim)
        r, _, piv = rref(v, p)
        return cls(ambient_dim, r, p, tuple(piv))

    @classmethod
    def zero(cls, ambient_dim: int, p) -> "Subspace":
        return cls(ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64), _p(p), ())

    @classmethod
    def full(cls, ambient_dim: int, p) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim, dtype=np.int64), _p(p), tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self) -> int:
        return self.dim

    def _check(self, other: "Subspace"):
        if other.ambient_dim != self.ambient_dim or other.p != self.p:
            raise ValueError("subspaces live in different ambient spaces")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.p == other.p
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.p, self.basis.tobytes()))

    def reduce(self, v) -> np.ndarray:
        """Normal form of ``v`` modulo this subspace (zero on pivot columns)."""
        v = reduce_mod(v, self.p).copy()
        single = v.ndim == 1
        v = np.atleast_2d(v)
        for i, c in enumerate(self.pivots):
            coef = v[:, c].copy()
            if coef.any():
                v = (v - np.outer(coef, self.basis[i])) % self.p
        return v[0] if single else v

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def coordinates(self, v) -> np.ndarray | None:
        """Coefficients of ``v`` in the echelon basis, or None if ``v`` is outside."""
        v = reduce_mod(v, self.p)
        if self.reduce(v).any():
            return None
        return np.array([v[c] for c in self.pivots], dtype=np.int64)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.from_vectors(np.vstack([self.basis, other.basis]), self.ambient_dim, self.p)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        # x A = y B  <=>  [A^T | -B^T] (x, y) = 0
        stacked = np.concatenate([self.basis.T, (-other.basis.T) % self.p], axis=1)
        ker = kernel_basis(stacked, self.p)
        vecs = (ker.basis[:, : self.dim] @ self.basis) % self.p
        return Subspace.from_vectors(vecs, self.ambient_dim, self.p)

    __and__ = intersection

    def issubspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(row) for row in self.basis)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubspace(other)

    def quotient_representatives(self, sub: "Subspace") -> np.ndarray:
        """Rows of this basis that complete a basis of ``sub`` to one of ``self``.

        Rows are taken greedily in echelon order, so the result is
        deterministic.
        """
        self._check(sub)
        acc = sub
        reps = []
        for row in self.basis:
            if not acc.contains(row):
                reps.append(row)
                acc = Subspace.from_vectors(np.vstack([acc.basis, row]), self.ambient_dim, self.p)
        if not sub.issubspace(self):
            raise ValueError("quotient_representatives needs sub <= self")
        return np.array(reps, dtype=np.int64).reshape(-1, self.ambient_dim)

    def complement_columns(self) -> list[int]:
        pivots = set(self.pivots)
        return [c for c in range(self.ambient_dim) if c not in pivots]

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim}, p={self.p})"
