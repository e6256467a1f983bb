"""First/second order lifting, the universal family, cubic certificates and
flatness of the full perturbation."""

from fractions import Fraction

import pytest

from hilbworst.ideal import (
    diagonal_sum,
    ideal_generators,
    membership,
    normal_form,
    obstruction_quadric,
    set_diagonal_zero,
    span_equal_degree2,
)
from hilbworst.lifting import (
    build_f,
    build_r,
    f1_image,
    first_order_residual,
    flatness_residual,
    family_generator,
    koszul_full_residual,
    r1_oriented,
    second_order_obstruction,
    syzygy_certificate,
    syzygy_cubic,
    universal_family,
)
from hilbworst.poly import PolyRing
from hilbworst.taylor import basis_pairs, e_elt, pair, wedge_symbols, zero_elt

R3 = PolyRing.get(3)


def test_f1_image():
    expected = (
        R3.t(1, 2, 1) * R3.x(1) + R3.t(1, 2, 2) * R3.x(2) + R3.t(1, 2, 3) * R3.x(3)
    )
    assert f1_image(3, 1, 2) == expected


def test_r1_shared_index():
    expected = zero_elt(3)
    for lam in range(1, 4):
        expected = expected + e_elt(3, 3, lam, coeff=R3.t(1, 2, lam))
        expected = expected - e_elt(3, 2, lam, coeff=R3.t(1, 3, lam))
    assert r1_oriented(3, 1, 2, 3) == expected


def test_r1_koszul_is_trivial_lift():
    n = 4
    r = build_r(n)
    sym = ("w", (1, 2), (3, 4))
    expected = e_elt(n, 1, 2, coeff=-f1_image(n, 3, 4)) + e_elt(
        n, 3, 4, coeff=f1_image(n, 1, 2)
    )
    assert r.order(1)[sym] == expected


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_first_order_residual_vanishes(n):
    res = first_order_residual(n)
    assert len(res) == len(wedge_symbols(n))
    assert all(p.is_zero for p in res.values())


def test_second_order_coefficients_are_the_quadrics():
    system = second_order_obstruction(3)
    # the vanish(...) constraints are literally the quadrics off the special
    # indices; check the (i, j, k) = (1, 2, 3) wedge against l = 1
    lab_to_gen = dict(zip(system.equations.labels, system.equations.generators))
    assert lab_to_gen["vanish(1;2,3|1)"] == obstruction_quadric(3, 1, 2, 3, 1)


def test_second_order_candidate_tails():
    system = second_order_obstruction(3)
    # for the wedge (1; 2, 3): the coefficient of x_3 gives the candidate
    # tail q(1,2,3|3) on the pair (1,2)
    cands = dict(system.candidates[pair(1, 2)])
    assert cands["wedge(1;2,3)"] == obstruction_quadric(3, 1, 2, 3, 3)


@pytest.mark.parametrize("n", [3, 4])
def test_second_order_span_equals_ideal(n):
    system = second_order_obstruction(n)
    equal, _ = span_equal_degree2(system.equations, ideal_generators(n))
    assert equal


@pytest.mark.parametrize("n", [3, 4])
def test_tails_match_canonical_form_modulo_ideal(n):
    system = second_order_obstruction(n)
    pres = ideal_generators(n)
    for pr, cands in system.candidates.items():
        canonical = system.tails[pr]
        assert canonical == diagonal_sum(n, *pr) * Fraction(1, n - 1)
        for _, cand in cands:
            diff = cand - canonical
            if not diff.is_zero:
                assert membership(diff, pres).member


def test_family_generator_explicit():
    g = family_generator(3, 1, 1)
    expected = (
        R3.x(1) ** 2
        + R3.t(1, 1, 1) * R3.x(1)
        + R3.t(1, 1, 2) * R3.x(2)
        + R3.t(1, 1, 3) * R3.x(3)
        + diagonal_sum(3, 1, 1) * Fraction(1, 2)
    )
    assert g == expected


def test_family_at_origin_recovers_monomial_generators():
    R = PolyRing.get(3)
    zero_all = {v: Fraction(0) for v in R.t_variables()}
    fam = universal_family(3)
    assert [g.substitute(zero_all) for g in fam] == [
        R.x(i) * R.x(j) for i, j in basis_pairs(3)
    ]


def test_family_constant_terms_agree_with_normal_forms():
    n = 3
    fam = dict(zip(basis_pairs(n), universal_family(n)))
    for (i, j), g in fam.items():
        tail = g.split_by_x().get((), PolyRing.get(n).zero())
        for lam in range(1, n + 1):
            if lam == j:
                continue
            assert normal_form(tail, n) == normal_form(
                obstruction_quadric(n, i, j, lam, lam), n
            )


def test_miniversal_family_zeroes_diagonal_parameters():
    fam = universal_family(3, "miniversal")
    for g in fam:
        assert set_diagonal_zero(g) == g
    hil = universal_family(3, "hilbert")
    assert [set_diagonal_zero(g) for g in hil] == list(fam)


def test_family_generators_multihomogeneous():
    for g in universal_family(4):
        g.multidegree()  # raises if not multihomogeneous


@pytest.mark.parametrize("ijk", [(1, 2, 3), (1, 1, 2), (2, 3, 1)])
def test_syzygy_certificate_exists_and_verifies(ijk):
    n = 3
    cert = syzygy_certificate(n, *ijk)
    assert cert.member
    assert cert.verify(syzygy_cubic(n, *ijk), ideal_generators(n))
    for mult in cert.multipliers.values():
        assert mult.is_homogeneous("t") and mult.degree("t") == 1


def test_syzygy_cubic_requires_distinct_indices():
    with pytest.raises(ValueError):
        syzygy_cubic(3, 1, 2, 2)


def test_syzygy_certificate_shape_is_deterministic():
    # golden pin of the deterministic elimination: the certificate for
    # (1,2,3) at n=3 touches exactly these generators of the presentation
    cert = syzygy_certificate(3, 1, 2, 3)
    labels = sorted(
        ideal_generators(3).labels[idx] for idx in cert.multipliers
    )
    assert len(labels) == 7
    assert labels == sorted(set(labels))  # one multiplier per generator


def test_syzygy_cubic_is_the_second_order_composite():
    # (n-1) * f2.r1 on the shared-index wedge equals the cubic
    n, i, j, k = 3, 1, 2, 3
    f = build_f(n)
    r = build_r(n)
    from hilbworst.lifting import apply_images

    sym = ("w", (1, 2), (1, 3))
    composite = apply_images(f.order(2), r.order(1)[sym])
    assert composite * Fraction(n - 1) == syzygy_cubic(n, i, j, k)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_flatness_certified(n):
    report = flatness_residual(n)
    assert report.ok
    shared = [s for s in wedge_symbols(n) if set(s[1]) & set(s[2])]
    assert set(report.wedges) == set(shared)
    for wf in report.wedges.values():
        assert wf.low_orders_zero
        assert wf.degree3.member


@pytest.mark.parametrize("n", [3, 4])
def test_koszul_wedges_lift_trivially_to_all_orders(n):
    res = koszul_full_residual(n)
    assert res and all(p.is_zero for p in res.values())


def test_low_n_rejected():
    with pytest.raises(ValueError):
        build_f(2)
    with pytest.raises(ValueError):
        universal_family(2)
