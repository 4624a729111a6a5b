import numpy as np
import pytest

from grhopf import catalog
from grhopf.hopf import GenSpec, HopfPresentation, TensorElement, TruncatedAlgebra, dualize, ideal_generated, identity_quotient, quotient
from grhopf.cohomology import (
    BarComplex,
    BudgetExceeded,
    Cohomology,
    Comodule,
    NotLocal,
    bar_betti,
    coefficients_betti,
    default_window,
    fg_evidence,
    graded_commutativity_sign,
    invariant_power,
    is_local,
    minimal_resolution_betti,
    restriction_map,
)


def test_default_window():
    assert default_window(catalog.elementary(3, 2)) == (6, 24)
    assert default_window(catalog.group_algebra_cyclic()) == (6, 8)


def test_homological_faces_square_to_zero(battery):
    for h in battery.values():
        bar = BarComplex(dualize(h))
        for s in range(1, 4):
            for t in range(0, 7):
                assert bar.square_is_zero(s, t)


def test_graded_face_sign_breaks_even_odd():
    bar = BarComplex(dualize(catalog.even_odd()), sign="graded")
    assert not all(bar.square_is_zero(s, t) for s in range(1, 4) for t in range(7))


def test_elementary_tables():
    t = bar_betti(dualize(catalog.elementary(2, 1)), 6, 8)
    assert t.nonzero() == [(s, s, 1) for s in range(7)]
    t = bar_betti(dualize(catalog.elementary(3, 2)), 4, 14)
    assert t.nonzero() == [(0, 0, 1), (1, 2, 1), (2, 6, 1), (3, 8, 1), (4, 12, 1)]


def test_frozen_tables(battery):
    frozen = {
        "nococentral": [(0, 0, 1), (2, 4, 1), (4, 8, 1)],
        "even_odd": [(0, 0, 1), (1, 1, 1), (2, 6, 1), (3, 7, 1)],
        "ut_00_r2_p2": [(0, 0, 1), (1, 0, 2), (2, 0, 3), (3, 0, 4), (4, 0, 5)],
    }
    for name, rows in frozen.items():
        assert bar_betti(dualize(battery[name]), 4, 8).nonzero() == rows, name
    t = bar_betti(dualize(battery["oneyes_oneno"]), 4, 8)
    assert [(s, tt, d) for s, tt, d in t.nonzero() if s >= 1] == [(1, 2, 1), (2, 4, 2), (3, 6, 2), (4, 8, 3)]


def test_workers_do_not_change_tables(battery):
    for h in battery.values():
        d = dualize(h)
        assert bar_betti(d, 3, 6, workers=1).to_tsv() == bar_betti(d, 3, 6, workers=4).to_tsv()


def test_minimal_resolution_matches_bar(battery):
    for name, h in battery.items():
        d = dualize(h)
        if not is_local(d):
            continue
        assert minimal_resolution_betti(d, 4, 8) == bar_betti(d, 4, 8), name


def test_minimal_resolution_needs_local():
    d = dualize(catalog.nococentral())
    assert not is_local(d)
    with pytest.raises(NotLocal):
        minimal_resolution_betti(d, 2, 2)


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        bar_betti(dualize(catalog.linear_combination()), 5, 8, budget=1000)


def test_coefficients_scale():
    d = dualize(catalog.even_odd())
    base = bar_betti(d, 3, 8)
    for m in (2, 3):
        assert coefficients_betti(d, m, 3, 8) == base.scaled(m)
    with pytest.raises(ValueError):
        coefficients_betti(d, 0, 1, 1)


def test_elementary_p3_products():
    coh = Cohomology(dualize(catalog.elementary(3, 2)), 4, 14)
    lam = coh.basis(1, 2)[0]
    y = coh.basis(2, 6)[0]
    assert coh.cup(lam, lam).is_zero()
    assert not coh.cup(y, lam).is_zero()
    assert not coh.cup(y, y).is_zero()
    assert coh.cup(coh.unit(), lam).coordinates.tolist() == lam.coordinates.tolist()


def test_graded_commutativity(battery):
    for name, h in battery.items():
        coh = Cohomology(dualize(h), 3, 6)
        cells = [c for c in coh.cells_in_window() if coh.dim(*c)]
        for a_cell in cells:
            for b_cell in cells:
                if a_cell[0] + b_cell[0] > 3 or a_cell[1] + b_cell[1] > 6:
                    continue
                for a in coh.basis(*a_cell):
                    for b in coh.basis(*b_cell):
                        sgn = graded_commutativity_sign(a.s, a.t, b.s, b.t)
                        ab, ba = coh.cup(a, b).coordinates, coh.cup(b, a).coordinates
                        assert np.array_equal(ab % h.p, (sgn * ba) % h.p), name


def test_fg_evidence_elementary_p3():
    coh = Cohomology(dualize(catalog.elementary(3, 2)), 6, 18)
    rep = fg_evidence(coh, 2)
    assert [(s, t) for s, t, _ in rep.generators] == [(1, 2), (2, 6)]
    assert rep.all_spanned


def test_restriction_identity_and_nococentral():
    h = catalog.nococentral()
    res = restriction_map(identity_quotient(h), 4, 8)
    assert res.commutes_with_coboundary
    for (s, t), M in res.maps.items():
        assert np.array_equal(M, np.eye(M.shape[0], dtype=np.int64))
    E, q = quotient(h, ideal_generated(h, [h.gen("m")]))
    res = restriction_map(q, 4, 8)
    assert res.commutes_with_coboundary
    assert {k: v.tolist() for k, v in res.maps.items() if v.size} == {(0, 0): [[1]], (2, 4): [[1]], (4, 8): [[1]]}


def test_restriction_functorial():
    U = catalog.unitriangular((0, 1, 2), 1, 2)
    B, q1 = quotient(U, ideal_generated(U, [U.gen("x12")]))
    C, q2 = quotient(B, ideal_generated(B, [B.gen("x23")]))
    q = q2.compose(q1)
    r1, r2, r = (restriction_map(x, 3, 4) for x in (q1, q2, q))
    for key, M in r.maps.items():
        assert np.array_equal(M % 2, (r2.maps[key] @ r1.maps[key]) % 2)


def _mu(height):
    return HopfPresentation(2, [GenSpec("m", 0, height)], {"m": [(1, (1,), (1,))]})


def _module(h, coact=True):
    R = TruncatedAlgebra(2, [GenSpec("u", 0, 2)])
    one, u, m = h.one(), R.gen("u"), h.gen("m")
    t = TensorElement.pure(one, u)
    if coact:
        t = t + TensorElement.pure(m, u)
    return Comodule(h, R, {"u": t})


def test_invariant_power():
    assert invariant_power(_module(_mu(1), coact=False)).N == 0
    rep = invariant_power(_module(_mu(1)))
    assert rep.N == 1 and rep.witness == "u"
    rep = invariant_power(_module(_mu(2)))
    assert rep.N == 2 and rep.witness == "u"


def test_comodule_validation():
    h = _mu(1)
    R = TruncatedAlgebra(2, [GenSpec("u", 0, 2)])
    with pytest.raises(ValueError):
        Comodule(h, R, {"u": TensorElement.pure(h.gen("m"), R.gen("u"))})
