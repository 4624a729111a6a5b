import numpy as np
import pytest

from grhopf import catalog
from grhopf.hopf import (
    counit_quotient,
    dualize,
    ideal_generated,
    identity_quotient,
    quotient,
)
from grhopf.normality import (
    CandidateSpaceTooLarge,
    FlagNotUnitriangular,
    NoElementaryQuotient,
    NoPositiveDegreeQuotient,
    NonLinearFrobenius,
    TargetNotElementary,
    UTIndex,
    elementary_quotient_from_primitive,
    embed_into_unitriangular,
    find_elementary_conormal_quotient,
    frobenius_primitive_kernel,
    is_cocentral,
    is_conormal,
    is_elementary,
    ut_chain,
    ut_chain_schedule,
    ut_presentation,
)


def kill(h, *names):
    elems = []
    for n in names:
        e = h.element()
        for part in n.split("+"):
            e = e + h.gen(part)
        elems.append(e)
    return quotient(h, ideal_generated(h, elems))


def test_nococentral_kill_m_conormal_not_cocentral():
    h = catalog.nococentral()
    E, q = kill(h, "m")
    cert = is_conormal(h, q)
    assert cert.conormal and cert.dim_identity
    assert is_elementary(E)
    assert not is_cocentral(h, q)


@pytest.mark.parametrize("p", [2, 3])
def test_oneyes_oneno_verdicts(p):
    h = catalog.oneyes_oneno(p)
    _, qx = kill(h, "m", "y")
    _, qy = kill(h, "m", "x")
    assert not is_conormal(h, qx).conormal
    assert is_conormal(h, qy).conormal


def test_linear_combination_verdicts():
    h = catalog.linear_combination()
    for keep in "xyz":
        others = [g for g in "xyz" if g != keep]
        _, q = kill(h, "m", *others)
        assert not is_conormal(h, q).conormal, keep
    _, q = kill(h, "m", "x+y", "z")
    assert is_conormal(h, q).conormal


def test_even_odd_verdicts():
    h = catalog.even_odd()
    E, q = kill(h, "y")
    assert is_conormal(h, q).conormal and is_cocentral(h, q)


def test_cocentral_needs_elementary_target():
    h = catalog.oneyes_oneno()
    _, q = kill(h, "m")
    with pytest.raises(TargetNotElementary):
        is_cocentral(h, q)


def test_trivial_and_identity_quotients_are_conormal(battery):
    for h in battery.values():
        assert is_conormal(h, identity_quotient(h)).conormal
        assert is_conormal(h, counit_quotient(h)).conormal


def test_search_results(battery):
    expected = {
        "elementary_p2_d1": ("x*", 1, True),
        "elementary_p3_d2": ("x*", 2, True),
        "nococentral": ("x*", 2, False),
        "oneyes_oneno": ("y*", 2, None),
        "linear_combination": ("y* + x*", 2, None),
        "even_odd": ("x*", 2, True),
        "ut_012_r1_p2": ("x13*", 2, None),
        "ut_00_r2_p2": ("x12*", 0, None),
    }
    for name, (label, degree, cocentral) in expected.items():
        res = find_elementary_conormal_quotient(battery[name], strategy="search")
        assert res.chi_label == label, name
        assert res.degree == degree, name
        assert res.certificate.conormal and res.certificate.dim_identity
        if cocentral is not None:
            assert res.cocentral is cocentral, name


def test_search_is_independent_of_worker_count(battery):
    for h in battery.values():
        a = find_elementary_conormal_quotient(h, strategy="search", workers=1)
        b = find_elementary_conormal_quotient(h, strategy="search", workers=4)
        assert np.array_equal(a.chi, b.chi)


def test_group_of_order_p_has_no_elementary_conormal_quotient():
    h = catalog.group_algebra_cyclic(2)
    for strategy in ("search", "auto"):
        with pytest.raises(NoElementaryQuotient):
            find_elementary_conormal_quotient(h, strategy=strategy)


def test_positive_degree_only():
    h = catalog.unitriangular((0, 0), 2, 2)
    with pytest.raises(NoPositiveDegreeQuotient):
        find_elementary_conormal_quotient(h, positive_degree_only=True, strategy="search")
    res = find_elementary_conormal_quotient(catalog.nococentral(), positive_degree_only=True)
    assert res.degree == 2


def test_candidate_cap():
    with pytest.raises(CandidateSpaceTooLarge):
        find_elementary_conormal_quotient(catalog.linear_combination(), strategy="search", cap=2)


def test_chain_agrees_with_search_on_unipotent_examples(battery):
    for name in ("elementary_p2_d1", "elementary_p3_d2", "even_odd", "ut_012_r1_p2", "ut_00_r2_p2"):
        h = battery[name]
        a = find_elementary_conormal_quotient(h, strategy="search")
        b = find_elementary_conormal_quotient(h, strategy="chain")
        assert b.certificate.conormal, name
        assert a.degree == b.degree, name


def test_chain_rejects_non_unipotent(battery):
    for name in ("nococentral", "oneyes_oneno", "linear_combination"):
        with pytest.raises(FlagNotUnitriangular):
            embed_into_unitriangular(battery[name])


@pytest.mark.parametrize("h", [catalog.elementary(2, 1), catalog.elementary(3, 2)])
def test_embedding_surjects(h):
    emb = embed_into_unitriangular(h)
    q = emb.quotient_map()
    assert q.verify()
    assert q.target is h


def test_embedding_size_guard():
    emb = embed_into_unitriangular(catalog.unitriangular((0, 1, 2), 1, 2))
    assert emb.index.n == 8
    with pytest.raises(ValueError):
        emb.quotient_map()


def test_ut_schedule_orders():
    sched = ut_chain_schedule(UTIndex((0, 1, 2), 1), 2)
    assert [s[1] for s in sched[:-1]] == [(1, 3), (2, 3), (1, 2)]
    assert sched[-1][0] == {}
    sched = ut_chain_schedule(UTIndex((0, 0), 2), 2)
    assert [(s[1], s[2]) for s in sched[:-1]] == [((1, 2), 0), ((1, 2), 1)]


def test_ut_chain_steps():
    steps = ut_chain(UTIndex((0, 1, 2), 1), 2)
    assert [s.generator for s in steps] == ["x13", "x23", "x12"]
    for s in steps:
        assert s.certificate.conormal and is_elementary(s.quotient_to_E.target)
        assert s.stage_presentation.dim == s.kernel_presentation.dim * s.quotient_to_E.target.dim
    steps = ut_chain(UTIndex((0, 0), 2), 2)
    assert [(s.generator, s.exponent) for s in steps] == [("x12", 0), ("x12_p2", 1)]


def test_ut_chain_odd_prime_odd_degree():
    steps = ut_chain(UTIndex((0, 1), 2), 3)
    # odd degree: a single exterior layer
    assert [(s.generator, s.exponent) for s in steps] == [("x12", 0)]


def test_ut_index_validation():
    with pytest.raises(ValueError):
        UTIndex((2, 1), 1)
    with pytest.raises(ValueError):
        UTIndex((0,), 1)
    assert ut_presentation(UTIndex((0, 1, 3), 1), 3).names == ("x12", "x23", "x13")


def test_frobenius_primitive_kernel():
    d = dualize(catalog.even_odd())
    # (y*)^2 = -x*, so odd primitives need not square to zero
    S = frobenius_primitive_kernel(d, 1)
    assert S.dim == 0
    assert frobenius_primitive_kernel(dualize(catalog.linear_combination()), 2).dim == 3


def test_nonlinear_frobenius_raises():
    from grhopf.hopf import GenSpec, HopfPresentation

    # (c u* + c' v*)^2 vanishes iff c = ±c': two lines, not a subspace
    h = HopfPresentation(
        3,
        [GenSpec("a", 2), GenSpec("u", 1), GenSpec("v", 1)],
        {"a": [(1, (0, 1, 0), (0, 1, 0)), (2, (0, 0, 1), (0, 0, 1))]},
    )
    with pytest.raises(NonLinearFrobenius):
        frobenius_primitive_kernel(dualize(h), 1)


def test_elementary_quotient_rejects_non_primitive():
    h = catalog.nococentral()
    d = dualize(h)
    with pytest.raises(ValueError):
        elementary_quotient_from_primitive(h, d, d.basis_vector(3))


def test_strategy_validation():
    with pytest.raises(ValueError):
        find_elementary_conormal_quotient(catalog.nococentral(), strategy="guess")
    with pytest.raises(ValueError):
        find_elementary_conormal_quotient(catalog.HopfPresentation(2, []))
