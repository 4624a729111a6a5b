"""
Finding an elementary conormal quotient
=======================================

Search walks the primitives of the dual degree by degree. The chain
strategy embeds the group into a unitriangular one instead.
"""

from grhopf import catalog
from grhopf.normality import UTIndex, find_elementary_conormal_quotient, ut_chain

for name, h in catalog.standard_battery().items():
    res = find_elementary_conormal_quotient(h, strategy="search")
    print(f"{name:20s} chi = {res.chi_label:10s} degree {res.degree}  cocentral {res.cocentral}")

# the chain agrees on degree wherever the embedding exists
for name in ("even_odd", "ut_012_r1_p2"):
    h = catalog.standard_battery()[name]
    res = find_elementary_conormal_quotient(h, strategy="chain")
    print(f"{name:20s} chain chi = {res.chi_label}, degree {res.degree}")

# kill order in UT_(0,1,2): last column first, top row first
for step in ut_chain(UTIndex((0, 1, 2), 1), 2):
    print("kill", step.generator, "stage dim", step.stage_presentation.dim, "->", step.kernel_presentation.dim)

# a p-power layer is peeled before the variable disappears
for step in ut_chain(UTIndex((0, 0), 2), 2):
    print("kill", step.generator, "exponent", step.exponent)

# no elementary quotient at all: the only primitive of the dual is idempotent
try:
    find_elementary_conormal_quotient(catalog.group_algebra_cyclic(2))
except Exception as exc:
    print("mu_2:", type(exc).__name__)
