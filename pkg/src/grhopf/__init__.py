"""Finite graded Hopf algebras over F_p: conormal quotients and cohomology."""

from .fplin import Prime, Subspace
from .hopf import (
    GenSpec,
    HopfPresentation,
    QuotientMap,
    check_hopf_axioms,
    dualize,
    ideal_generated,
    quotient,
)
from .normality import (
    UTIndex,
    find_elementary_conormal_quotient,
    is_conormal,
    ut_chain,
    ut_presentation,
)
from .cohomology import Cohomology, bar_betti, minimal_resolution_betti

__all__ = [
    "Prime",
    "Subspace",
    "GenSpec",
    "HopfPresentation",
    "QuotientMap",
    "check_hopf_axioms",
    "dualize",
    "ideal_generated",
    "quotient",
    "UTIndex",
    "find_elementary_conormal_quotient",
    "is_conormal",
    "ut_chain",
    "ut_presentation",
    "Cohomology",
    "bar_betti",
    "minimal_resolution_betti",
]
__version__ = "0.1.0"
