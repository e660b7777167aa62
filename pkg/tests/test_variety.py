import itertools

import pytest

from cisupport.catalog import catalog_modules, three_var_ring, two_var_ring
from cisupport.cimodule import (
    CIRing,
    cyclic_module,
    free_module,
    residue_module,
    zero_module,
)
from cisupport.field import ExtField, PrimeField
from cisupport.groebner import Ideal, equal_up_to_radical
from cisupport.operators import chi_action
from cisupport.poly import PolyRing, parse_poly, render_poly
from cisupport.resolution import minimal_resolution
from cisupport.variety import (
    PointK,
    Subspace,
    SupportVariety,
    annihilator_ideal,
    complexity_estimate,
    dimension,
    intersection_variety,
    irreducible_principal,
    membership,
    rename_ideal,
    restrict_to_subspace,
    sample_points,
    substitute_linear,
    union_variety,
    vanishes_at,
    variety_of,
    variety_of_pair,
)


def P(ring, s):
    return parse_poly(ring, s)


# ---------------------------------------------------------------------------
# membership oracle


def test_membership_examples_over_two_variable_ring():
    ring = two_var_ring(5)
    q = ring.ambient
    m = cyclic_module(ring, [P(q, "x")])
    k = residue_module(ring)
    assert membership(ring, m, k, (1, 0))
    assert not membership(ring, m, k, (0, 1))
    assert membership(ring, m, k, (0, 0))
    assert not membership(ring, free_module(ring), k, (2, 3))


def test_membership_scaling_invariance():
    ring = two_var_ring(5)
    q = ring.ambient
    m = cyclic_module(ring, [P(q, "x")])
    k = residue_module(ring)
    for a in ((1, 0), (1, 1), (2, 3)):
        base = membership(ring, m, k, a)
        for lam in range(2, 5):
            assert membership(ring, m, k, tuple(lam * c % 5 for c in a)) == base


def test_membership_over_extension_point():
    ring = two_var_ring(3)
    q = ring.ambient
    m = cyclic_module(ring, [P(q, "x")])
    k = residue_module(ring)
    f9 = ExtField(3, 2)
    omega = next(a for a in f9.elements() if a[1] != 0)
    # variety of R/(x) is the chi2 axis: (omega, 0) lies inside, (0, omega) not
    assert membership(ring, m, k, PointK((omega, f9.zero), f9))
    assert not membership(ring, m, k, PointK((f9.zero, omega), f9))


def test_membership_pair_general_second_argument():
    ring = two_var_ring(3)
    q = ring.ambient
    mx = cyclic_module(ring, [P(q, "x")])
    my = cyclic_module(ring, [P(q, "y")])
    # V(M,N) = V(M) cap V(N) = {0} here, so no nonzero direction is a member
    assert not membership(ring, mx, my, (1, 0))
    assert not membership(ring, mx, my, (0, 1))
    assert not membership(ring, mx, my, (1, 1))
    assert membership(ring, mx, my, (0, 0))


# ---------------------------------------------------------------------------
# annihilator route


def test_variety_examples():
    ring = two_var_ring(5)
    q = ring.ambient
    vk = variety_of(ring, residue_module(ring))
    assert vk.ideal.is_zero() and vk.stabilized
    vfree = variety_of(ring, free_module(ring))
    assert sorted(render_poly(g) for g in vfree.ideal.gens) == ["chi1", "chi2"]
    vx = variety_of(ring, cyclic_module(ring, [P(q, "x")]))
    assert [render_poly(g) for g in vx.ideal.gens] == ["chi2"]
    assert vx.stabilized


def test_variety_of_zero_module_is_origin():
    ring = two_var_ring(3)
    v = variety_of(ring, zero_module(ring))
    assert sorted(render_poly(g) for g in v.ideal.gens) == ["chi1", "chi2"]


def test_annihilator_examples():
    ring = two_var_ring(5)
    q = ring.ambient
    e = chi_action(ring, cyclic_module(ring, [P(q, "x")]), 10)
    ann = annihilator_ideal(e, 1)
    assert [render_poly(g) for g in ann.gens] == ["chi2"]
    efree = chi_action(ring, free_module(ring), 6)
    annf = annihilator_ideal(efree, 2)
    assert sorted(render_poly(g) for g in annf.gens) == ["chi1", "chi2"]
    ring3 = three_var_ring(5)
    ek = chi_action(ring3, residue_module(ring3), 10)
    assert annihilator_ideal(ek, 2).is_zero()


def test_variety_of_pair_shortcuts_and_intersection():
    ring = two_var_ring(3)
    q = ring.ambient
    mx = cyclic_module(ring, [P(q, "x")])
    my = cyclic_module(ring, [P(q, "y")])
    k = residue_module(ring)
    v1 = variety_of_pair(ring, mx, k)
    assert equal_up_to_radical(v1.ideal, variety_of(ring, mx).ideal)
    v2 = variety_of_pair(ring, mx, my)
    want = Ideal(ring.chi_ring(), [P(ring.chi_ring(), "chi1"), P(ring.chi_ring(), "chi2")])
    assert equal_up_to_radical(v2.ideal, want)
    v3 = variety_of_pair(ring, free_module(ring), mx)
    assert equal_up_to_radical(v3.ideal, want)


def test_union_and_intersection():
    ring = two_var_ring(3)
    chi = ring.chi_ring()
    q = ring.ambient
    vx = variety_of(ring, cyclic_module(ring, [P(q, "x")]))
    vy = variety_of(ring, cyclic_module(ring, [P(q, "y")]))
    inter = intersection_variety(vx, vy)
    assert equal_up_to_radical(inter.ideal, Ideal(chi, [P(chi, "chi1"), P(chi, "chi2")]))
    uni = union_variety(vx, vy)
    assert equal_up_to_radical(uni.ideal, Ideal(chi, [P(chi, "chi1*chi2")]))
    # union with the whole space leaves it whole
    vk = variety_of(ring, residue_module(ring))
    assert union_variety(vx, vk).ideal.is_zero()
    # intersection with the whole space changes nothing
    assert equal_up_to_radical(intersection_variety(vx, vk).ideal, vx.ideal)


# ---------------------------------------------------------------------------
# cross-oracle agreement (small exhaustive)


def test_cross_oracle_agreement_exhaustive_two_var_p3():
    ring = two_var_ring(3)
    mods = catalog_modules(ring)
    k = mods["k"]
    for name, m in mods.items():
        v = variety_of(ring, m)
        assert v.stabilized, name
        for a in itertools.product(range(3), repeat=2):
            oracle = membership(ring, m, k, a)
            assert oracle == vanishes_at(v.ideal, a, ring.field), (name, a)


# ---------------------------------------------------------------------------
# restriction


def quadric_variety(ring):
    chi = ring.chi_ring()
    return SupportVariety(ring, Ideal(chi, [P(chi, "chi1*chi2 - chi3^2")]), 0, True)


def test_restrict_examples():
    ring = three_var_ring(5)
    vq = quadric_variety(ring)
    w = Subspace(ring, [[1, 0, 0], [0, 1, 0]])
    out = restrict_to_subspace(vq, w)
    assert [render_poly(g) for g in out.gens] == ["s1*s2"]
    # identity subspace keeps the ideal
    wid = Subspace(ring, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    out2 = restrict_to_subspace(vq, wid)
    assert equal_up_to_radical(out2, rename_ideal(vq.ideal, out2.ring))
    # whole space restricts to the zero ideal
    vk = SupportVariety(ring, Ideal(ring.chi_ring(), []), 0, True)
    assert restrict_to_subspace(vk, w).is_zero()


def test_rank_deficient_subspace_rejected():
    ring = three_var_ring(5)
    with pytest.raises(ValueError):
        Subspace(ring, [[1, 0, 0], [2, 0, 0]])


# ---------------------------------------------------------------------------
# dimension / complexity


def test_dimension_examples():
    ring = two_var_ring(5)
    q = ring.ambient
    assert dimension(variety_of(ring, residue_module(ring))) == 2
    assert dimension(variety_of(ring, free_module(ring))) == 0
    assert dimension(variety_of(ring, cyclic_module(ring, [P(q, "x")]))) == 1


def test_complexity_matches_growth():
    ring3 = three_var_ring(5)
    res = minimal_resolution(ring3, residue_module(ring3), 8)
    assert res.betti[:6] == [1, 3, 6, 10, 15, 21]
    est = complexity_estimate(res.betti)
    assert est.reliable and est.value == 3
    ring2 = two_var_ring(5)
    q = ring2.ambient
    res2 = minimal_resolution(ring2, cyclic_module(ring2, [P(q, "x")]), 8)
    est2 = complexity_estimate(res2.betti)
    assert est2.reliable and est2.value == 1
    res3 = minimal_resolution(ring2, free_module(ring2), 8)
    est3 = complexity_estimate(res3.betti)
    assert est3.reliable and est3.value == 0


def test_complexity_flags_non_polynomial_growth():
    bad = [1, 2, 4, 8, 16, 32, 64, 128, 256, 512]
    est = complexity_estimate(bad)
    assert not est.reliable


def test_complexity_needs_window():
    with pytest.raises(ValueError):
        complexity_estimate([1, 1, 1])


# ---------------------------------------------------------------------------
# irreducibility (principal case)


def test_irreducible_examples():
    ring = three_var_ring(5)
    chi = ring.chi_ring()
    assert irreducible_principal(quadric_variety(ring)).verdict == "yes"
    v2 = SupportVariety(ring, Ideal(chi, [P(chi, "chi1*chi2")]), 0, True)
    assert irreducible_principal(v2).verdict == "no"
    v3 = SupportVariety(ring, Ideal(chi, [P(chi, "chi1")]), 0, True)
    assert irreducible_principal(v3).verdict == "yes"
    v4 = SupportVariety(ring, Ideal(chi, [P(chi, "chi1^2")]), 0, True)
    assert irreducible_principal(v4).verdict == "yes"  # powered single factor
    v5 = SupportVariety(
        ring, Ideal(chi, [P(chi, "chi1*chi2"), P(chi, "chi2*chi3")]), 0, True
    )
    assert irreducible_principal(v5).verdict == "unknown"


def test_irreducible_budget_exhaustion_is_flagged():
    ring = three_var_ring(101)
    chi = ring.chi_ring()
    v = SupportVariety(ring, Ideal(chi, [P(chi, "chi1*chi2 - chi3^2")]), 0, True)
    out = irreducible_principal(v, budget_limit=10)
    assert out.verdict == "unknown"


def test_quadric_brute_force_oracle_over_f5():
    # independent check: no linear form divides the rank-3 quadric over F_5
    chi = PolyRing(["chi1", "chi2", "chi3"], field=PrimeField(5))
    quad = P(chi, "chi1*chi2 - chi3^2")
    from cisupport.variety import _exact_divide, _monic_candidates

    assert all(_exact_divide(quad, g) is None for g in _monic_candidates(chi, 1))


# ---------------------------------------------------------------------------
# misc


def test_sample_points_deterministic_and_nonzero():
    ring = two_var_ring(5)
    a = sample_points(ring, 6, seed=9)
    b = sample_points(ring, 6, seed=9)
    assert a == b and all(any(c for c in pt) for pt in a)


def test_substitute_linear_change_of_coordinates():
    ring = two_var_ring(5)
    chi = ring.chi_ring()
    ideal = Ideal(chi, [P(chi, "chi1*chi2")])
    target = ring.s_ring(2)
    moved = substitute_linear(ideal, [[1, 1], [0, 1]], target)
    # chi1 -> s1, chi2 -> s1 + s2
    assert [render_poly(g) for g in moved.gens] == ["s1^2 + s1*s2"]


def test_cross_oracle_agreement_exhaustive_two_var_p2():
    ring = two_var_ring(2)
    mods = catalog_modules(ring)
    k = mods["k"]
    for name, m in mods.items():
        v = variety_of(ring, m)
        assert v.stabilized, name
        for a in itertools.product(range(2), repeat=2):
            oracle = membership(ring, m, k, a)
            assert oracle == vanishes_at(v.ideal, a, ring.field), (name, a)


def test_union_and_intersection_wrapper():
    import cisupport

    ring = two_var_ring(3)
    q = ring.ambient
    vx = variety_of(ring, cyclic_module(ring, [P(q, "x")]))
    vy = variety_of(ring, cyclic_module(ring, [P(q, "y")]))
    uni, inter = cisupport.union_and_intersection(vx, vy)
    chi = ring.chi_ring()
    assert equal_up_to_radical(uni.ideal, Ideal(chi, [P(chi, "chi1*chi2")]))
    assert equal_up_to_radical(inter.ideal, Ideal(chi, [P(chi, "chi1"), P(chi, "chi2")]))


def test_mixed_degree_defining_forms():
    # forms of degrees 3 and 2: operator internal degrees differ
    q = PolyRing(["x", "y"], field=PrimeField(5))
    ring = CIRing(q, [P(q, "x^3"), P(q, "y^2")])
    m = cyclic_module(ring, [P(q, "x")])
    v = variety_of(ring, m)
    assert v.stabilized
    assert [render_poly(g) for g in v.ideal.gens] == ["chi2"]
    k = residue_module(ring)
    assert membership(ring, m, k, (1, 0))
    assert not membership(ring, m, k, (0, 1))
    assert variety_of(ring, k).ideal.is_zero()
    with pytest.raises(ValueError):
        membership(ring, m, k, (1, 1))  # mixed-degree direction rejected


def test_weighted_grading_end_to_end():
    q = PolyRing(["x", "y"], field=PrimeField(5), weights=[1, 2])
    ring = CIRing(q, [P(q, "x^4"), P(q, "y^2")])
    assert ring.note  # the degree convention is flagged, not silent
    m = cyclic_module(ring, [P(q, "x")])
    v = variety_of(ring, m, window=14, degree_bound=3)
    assert v.stabilized
    assert [render_poly(g) for g in v.ideal.gens] == ["chi2"]
    k = residue_module(ring)
    assert membership(ring, m, k, (1, 0))
    assert not membership(ring, m, k, (0, 1))


def test_annihilator_window_precondition():
    ring = two_var_ring(3)
    e = chi_action(ring, residue_module(ring), 4)
    with pytest.raises(ValueError):
        annihilator_ideal(e, 2)  # window 4 < 2*2 + 2


def test_non_monomial_artinian_quotient_end_to_end():
    # engines, operator actions and both oracles on k[x,y]/(x^2 + y^2, x*y)
    import numpy as np

    from cisupport.operators import chi_action_from_family, operator_family
    from cisupport.resolution import check_complex, check_minimal

    q = PolyRing(["x", "y"], field=PrimeField(5))
    ring = CIRing(q, [P(q, "x^2 + y^2"), P(q, "x*y")])
    k = residue_module(ring)
    for m in (k, cyclic_module(ring, [P(q, "x")])):
        a = minimal_resolution(ring, m, 8, engine="slice")
        b = minimal_resolution(ring, m, 8, engine="groebner")
        assert a.betti == b.betti
        check_complex(a)
        check_minimal(a)
        e1 = chi_action(ring, m, 8)
        e1.verify_commutativity()
        fam = operator_family(ring, minimal_resolution(ring, m, 8))
        fam.verify_identity()
        fam.verify_chain_property()
        e2 = chi_action_from_family(fam)
        for i in range(2):
            for n in range(0, 7):
                assert np.array_equal(e1.chi(i, n), e2.chi(i, n))
        v = variety_of(ring, m)
        assert v.stabilized
        for pt in itertools.product(range(5), repeat=2):
            assert membership(ring, m, k, pt) == vanishes_at(v.ideal, pt, ring.field)
