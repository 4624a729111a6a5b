"""
Which quotients are conormal?
=============================

Four small Hopf algebras over F_2 and F_3, each with a quotient we test.
"""

from grhopf import catalog
from grhopf.hopf import ideal_generated, quotient
from grhopf.normality import is_cocentral, is_conormal


def kill(h, *elems):
    return quotient(h, ideal_generated(h, list(elems)))


# 1 + m is group-like and x only becomes primitive after m dies
h = catalog.nococentral()
m, x = h.gen("m"), h.gen("x")
E, q = kill(h, m)
cert = is_conormal(h, q)
print("nococentral  kill m      conormal:", cert.conormal, " cocentral:", is_cocentral(h, q))
print("  right cotensor dim", cert.right_cotensor.dim, "x target dim", E.dim, "=", h.dim)

# the same shape with a second degree-2 generator y, Δ̄(y) = x|m
h = catalog.oneyes_oneno()
m, x, y = (h.gen(n) for n in "mxy")
for label, gens in (("k[x]", (m, y)), ("k[y]", (m, x))):
    print(f"oneyes_oneno -> {label:5s} conormal:", is_conormal(h, kill(h, *gens)[1]).conormal)

# only the sum x + y survives as a conormal quotient
h = catalog.linear_combination()
m, x, y, z = (h.gen(n) for n in "mxyz")
for label, gens in (("x", (m, y, z)), ("y", (m, x, z)), ("z", (m, x, y)), ("x+y", (m, x + y, z))):
    print(f"linear_combination keep {label:4s} conormal:", is_conormal(h, kill(h, *gens)[1]).conormal)

# odd generator y with Δ̄(x) = y|y at p = 3
h = catalog.even_odd()
E, q = kill(h, h.gen("y"))
print("even_odd kill y  conormal:", is_conormal(h, q).conormal, " cocentral:", is_cocentral(h, q))
try:
    kill(h, h.gen("x"))
except Exception as exc:  # NotHopfIdeal
    print("even_odd kill x ->", type(exc).__name__, "witness", exc.witness)
