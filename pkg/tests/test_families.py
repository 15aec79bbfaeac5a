"""Blaschke-power maps, the parabolic sequence, and the monomial semigroup."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import dwset as dw


def test_blaschke_coefficients_match_worked_form(parabolic_cubic):
    # (z^3 + 1/2)/(1 + z^3/2) equals (2z^3 + 1)/(2 + z^3) up to scale
    explicit = dw.rational_map([1, 0, 0, 2], [2, 0, 0, 1])
    assert parabolic_cubic.normalized_coeff_distance(explicit) < 1e-12


def test_blaschke_value_at_zero():
    for a in (0.5, 0.2 - 0.3j, -0.7j):
        f = dw.blaschke_power(dw.BlaschkePowerParams(4, a))
        assert abs(f(0j).as_complex() - a) < 1e-15


def test_blaschke_remark_recipe_k2():
    f = dw.blaschke_power(dw.BlaschkePowerParams(2, 1 / 3))
    expected = dw.rational_map([1 / 3, 0, 1], [1, 0, 1 / 3])
    assert f.normalized_coeff_distance(expected) < 1e-12


def test_blaschke_params_validated():
    with pytest.raises(ValueError):
        dw.BlaschkePowerParams(1, 0.5)
    with pytest.raises(ValueError):
        dw.BlaschkePowerParams(3, 0.0)
    with pytest.raises(ValueError):
        dw.BlaschkePowerParams(3, 1.0)


def test_blaschke_disk_preservation_family():
    for k in range(2, 7):
        for a in (0.5, 0.3 + 0.4j, (k - 1) / (k + 1)):
            f = dw.blaschke_power(dw.BlaschkePowerParams(k, a))
            assert dw.maps_disk_into_disk(f)


# ---------------------------------------------------------------------------
# fixed-point and parabolic verifiers
# ---------------------------------------------------------------------------

def test_unimodular_fixed_point_examples():
    rep = dw.verify_unimodular_fixed_point(dw.BlaschkePowerParams(3, 0.5))
    assert rep.passed and rep.details["is_fixed"] and rep.details["is_root_of_unity"]

    rep = dw.verify_unimodular_fixed_point(
        dw.BlaschkePowerParams(3, 0.5 * cmath.exp(1j * math.pi / 5))
    )
    assert rep.passed
    assert not rep.details["is_fixed"] and not rep.details["is_root_of_unity"]

    rep = dw.verify_unimodular_fixed_point(dw.BlaschkePowerParams(2, 1 / 3))
    assert rep.passed and rep.details["is_fixed"]


@given(
    k=st.integers(2, 8),
    mag=st.floats(0.1, 0.9),
    j=st.integers(0, 7),
    perturb=st.booleans(),
)
@settings(max_examples=120)
def test_fixed_iff_root_of_unity_property(k, mag, j, perturb):
    alpha = cmath.exp(2j * math.pi * (j % (k - 1)) / (k - 1))
    a = mag * alpha
    if perturb:
        a *= cmath.exp(1e-3j)
    rep = dw.verify_unimodular_fixed_point(dw.BlaschkePowerParams(k, a))
    assert rep.passed  # the two independent sub-tests always agree


def test_parabolic_criterion_at_critical_magnitude():
    rep = dw.verify_parabolic_criterion(dw.BlaschkePowerParams(3, 0.5))
    assert rep.passed
    assert rep.details["is_parabolic"]
    assert abs(rep.details["multiplier"] - 1.0) < 1e-12


def test_parabolic_criterion_k5():
    # (k-1)/(k+1) = 2/3, multiplier 5*(1/3)/(5/3) = 1
    rep = dw.verify_parabolic_criterion(dw.BlaschkePowerParams(5, 2 / 3))
    assert rep.passed and rep.details["is_parabolic"]
    assert rep.details["closed_form"] == pytest.approx(1.0)


def test_parabolic_criterion_off_critical():
    # multiplier 3 * 0.7/1.3 ~ 1.615: fixed but not parabolic
    rep = dw.verify_parabolic_criterion(dw.BlaschkePowerParams(3, 0.3))
    assert rep.passed
    assert not rep.details["is_parabolic"]
    assert rep.details["multiplier"] == pytest.approx(3 * 0.7 / 1.3)


def test_parabolic_criterion_blocked_when_not_fixed():
    rep = dw.verify_parabolic_criterion(
        dw.BlaschkePowerParams(3, 0.5 * cmath.exp(0.4j))
    )
    assert rep.status == "BLOCKED"


# ---------------------------------------------------------------------------
# the parabolic sequence
# ---------------------------------------------------------------------------

def test_remark_sequence_values():
    members = dw.remark_sequence(2, 4)
    assert members[0].k == 2 and abs(members[0].a - 1 / 3) < 1e-12
    assert members[1].k == 3 and abs(members[1].a - (-0.5)) < 1e-12
    expected = (3 / 5) * cmath.exp(2j * math.pi / 3)
    assert members[2].k == 4 and abs(members[2].a - expected) < 1e-12


def test_remark_sequence_members_all_parabolic():
    for params in dw.remark_sequence(2, 8):
        rep = dw.verify_parabolic_criterion(params)
        assert rep.passed and rep.details["is_parabolic"]


def test_remark_sequence_validates_range():
    with pytest.raises(ValueError):
        dw.remark_sequence(3, 2)


# ---------------------------------------------------------------------------
# monomial semigroup
# ---------------------------------------------------------------------------

def test_monomial_generators_half():
    gens = dw.monomial_generators(dw.MonomialFamilyParams(0.5))
    assert dw.is_monomial_map(gens[1]) == (2, 2)
    assert dw.is_monomial_map(gens[2]) == (4, 3)
    both = dw.compose(gens[1], gens[2]), dw.compose(gens[2], gens[1])
    for h in both:
        assert dw.is_monomial_map(h) == (32, 6)


def test_monomial_generators_fix_origin_and_small_disk():
    r = 0.5
    gens = dw.monomial_generators(dw.MonomialFamilyParams(r))
    for g in gens.gens:
        assert g(0j).as_complex() == 0
        # images of the circle |z| = r stay inside the disk of radius r
        for theta in np.linspace(0, 2 * math.pi, 17):
            z = 0.9 * r * cmath.exp(1j * theta)
            assert abs(g(z).as_complex()) < r


def test_circle_image_exponent_examples():
    # |h(z)| = r^(j l - l + 1): j=1, l=2 gives r; j=2, l=3 gives r^4
    r = 0.5
    gens = dw.monomial_generators(dw.MonomialFamilyParams(r))
    f, g = gens[1], gens[2]
    z1 = r * cmath.exp(0.3j)
    assert abs(f(z1).as_complex()) == pytest.approx(r ** (1 * 2 - 2 + 1))
    z2 = r ** 2 * cmath.exp(1.1j)
    assert abs(g(z2).as_complex()) == pytest.approx(r ** (2 * 3 - 3 + 1))


def test_is_monomial_map_rejects_binomials(z2_plus_1):
    assert dw.is_monomial_map(z2_plus_1) is None


def test_is_monomial_map_constant_denominator(z2):
    assert dw.is_monomial_map(z2) == (1, 2)


def test_circle_union_membership():
    B = dw.CircleUnionB(0.5, max_j=8)
    assert B.contains(0.5 * cmath.exp(2.2j))
    assert B.contains(0.25 + 0j)
    assert not B.contains(0.3 + 0j)
    assert not B.contains(0.6)
    assert B.circle_index(0.5 ** 8) == 8
    assert B.circle_index(0.5 ** 9) is None  # beyond the enumerated cap


def test_b_invariance_passes_depth_three():
    gens = dw.monomial_generators(dw.MonomialFamilyParams(0.5))
    rep = dw.verify_b_invariance(gens, dw.CircleUnionB(0.5, max_j=6), depth=3)
    assert rep.passed
    assert set(rep.details["exponents"]) == {2, 3, 4, 6, 8, 9, 12, 18, 27}


def test_b_invariance_fails_for_non_monomial(z2_plus_1, z2):
    gens = dw.GeneratorSet.of(z2, z2_plus_1)
    rep = dw.verify_b_invariance(gens, dw.CircleUnionB(0.5, max_j=3), depth=1)
    assert not rep.passed
