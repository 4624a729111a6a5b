"""Small named presentations used by tests, demos and the CLI."""

from __future__ import annotations

from .hopf import GenSpec, HopfPresentation
from .normality import UTIndex, ut_presentation


def elementary(p: int, degree: int) -> HopfPresentation:
    """k[x]/(x^p) (or k[x]/(x^2) for odd degree at p > 2) with x primitive."""
    return HopfPresentation(p, [GenSpec("x", degree)])


def nococentral(p: int = 2) -> HopfPresentation:
    """k[m, x]/(m^p, x^p), |m| = 0, |x| = 2, Δ̄(m) = m|m, Δ̄(x) = x|m."""
    return HopfPresentation(
        p,
        [GenSpec("m", 0), GenSpec("x", 2)],
        {"m": [(1, (1, 0), (1, 0))], "x": [(1, (0, 1), (1, 0))]},
    )


def oneyes_oneno(p: int = 2) -> HopfPresentation:
    """k[m, x, y], |m| = 0, |x| = |y| = 2, Δ̄(m) = m|m, Δ̄(x) = Δ̄(y) = x|m."""
    xm = [(1, (0, 1, 0), (1, 0, 0))]
    return HopfPresentation(
        p,
        [GenSpec("m", 0), GenSpec("x", 2), GenSpec("y", 2)],
        {"m": [(1, (1, 0, 0), (1, 0, 0))], "x": xm, "y": xm},
    )


def linear_combination() -> HopfPresentation:
    """F_2[m, x, y, z], Δ̄(x) = Δ̄(y) = Δ̄(z) = x|m + y|m + z|m."""
    s = [(1, (0, 1, 0, 0), (1, 0, 0, 0)), (1, (0, 0, 1, 0), (1, 0, 0, 0)), (1, (0, 0, 0, 1), (1, 0, 0, 0))]
    return HopfPresentation(
        2,
        [GenSpec("m", 0), GenSpec("x", 2), GenSpec("y", 2), GenSpec("z", 2)],
        {"m": [(1, (1, 0, 0, 0), (1, 0, 0, 0))], "x": s, "y": s, "z": s},
    )


def even_odd(p: int = 3) -> HopfPresentation:
    """k[x, y]/(x^p, y^2), |x| = 2, |y| = 1, Δ̄(x) = y|y, y primitive (p > 2)."""
    if p == 2:
        raise ValueError("needs an odd prime")
    return HopfPresentation(p, [GenSpec("x", 2), GenSpec("y", 1)], {"x": [(1, (0, 1), (0, 1))]})


def group_algebra_cyclic(p: int = 2) -> HopfPresentation:
    """k[m]/(m^p), Δ̄(m) = m|m: functions on μ_p, i.e. k[Z/p] with 1 + m group-like."""
    return HopfPresentation(p, [GenSpec("m", 0)], {"m": [(1, (1,), (1,))]})


def unitriangular(I, r: int, p: int) -> HopfPresentation:
    return ut_presentation(UTIndex(tuple(I), r), p)


def worked_examples() -> dict[str, HopfPresentation]:
    return {
        "nococentral": nococentral(2),
        "oneyes_oneno": oneyes_oneno(2),
        "linear_combination": linear_combination(),
        "even_odd": even_odd(3),
    }


def standard_battery() -> dict[str, HopfPresentation]:
    """Every named example, in a fixed order."""
    out = {
        "elementary_p2_d1": elementary(2, 1),
        "elementary_p3_d2": elementary(3, 2),
    }
    out.update(worked_examples())
    out["ut_012_r1_p2"] = unitriangular((0, 1, 2), 1, 2)
    out["ut_00_r2_p2"] = unitriangular((0, 0), 2, 2)
    return out
