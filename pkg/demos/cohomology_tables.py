"""
Bigraded cohomology tables
==========================

Betti numbers dim H^{s,t}(A, k) from the bar complex, a few cup products,
and how far low-degree classes go in generating the rest.
"""

from grhopf import catalog
from grhopf.cohomology import Cohomology, bar_betti, fg_evidence, minimal_resolution_betti
from grhopf.hopf import dualize

# k[x]/(x^3), |x| = 2: an exterior class λ in (1,2) and a polynomial y in (2,6)
d = dualize(catalog.elementary(3, 2))
print(bar_betti(d, 6, 24).to_tsv())

coh = Cohomology(d, 6, 24)
lam, y = coh.basis(1, 2)[0], coh.basis(2, 6)[0]
print("λ² = 0:", coh.cup(lam, lam).is_zero(), "  yλ ≠ 0:", not coh.cup(y, lam).is_zero())
print("\n".join(fg_evidence(coh, 2).lines()))

# a minimal resolution gives the same table whenever the dual is local
d = dualize(catalog.even_odd())
print("even_odd bar == minimal:", bar_betti(d, 5, 24) == minimal_resolution_betti(d, 5, 24))
print(bar_betti(d, 5, 24).to_tsv())
