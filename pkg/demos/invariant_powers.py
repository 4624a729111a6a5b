"""
Invariant Frobenius powers
==========================

For a comodule algebra R over A, the smallest N with every b^{p^N} invariant.
"""

from grhopf.cohomology import Comodule, invariant_power
from grhopf.hopf import GenSpec, HopfPresentation, TensorElement, TruncatedAlgebra

R = TruncatedAlgebra(2, [GenSpec("u", 0, 2)])  # k[u]/(u^4)

for height in (1, 2):
    # functions on μ_{2^height}; 1 + m is group-like and scales u
    A = HopfPresentation(2, [GenSpec("m", 0, height)], {"m": [(1, (1,), (1,))]})
    coaction = TensorElement.pure(A.one(), R.gen("u")) + TensorElement.pure(A.gen("m"), R.gen("u"))
    rep = invariant_power(Comodule(A, R, {"u": coaction}))
    print(f"height {height}: N = {rep.N}, fails one step earlier on {rep.witness}")

trivial = Comodule(A, R, {})
print("trivial coaction: N =", invariant_power(trivial).N)
