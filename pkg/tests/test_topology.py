"""Oval counting from 1-D root orderings along scan lines."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmicert.errors import CertifiedNotRZError, DimensionMismatch
from lmicert.poly import Polynomial
from lmicert.rzcheck import RaySampler
from lmicert.topology import (OvalProfile, nesting_consistency_report,
                              oval_profile)

F = Fraction
x1 = Polynomial.variable(1, 2)
x2 = Polynomial.variable(2, 2)
one = Polynomial.constant(1, 2)

SAMPLER = RaySampler(2, deterministic_count=31, random_count=8,
                     extra_directions=((1, 0), (0, 1)))


def circle(r):
    return r * r * one - x1 ** 2 - x2 ** 2


# === single oval ===

def test_disc_is_one_oval():
    prof = oval_profile(circle(1), (0, 0), SAMPLER)
    assert isinstance(prof, OvalProfile)
    assert (prof.ovals, prof.pseudo_line) == (1, False)
    assert prof.degree == 2
    assert prof.consistent
    assert nesting_consistency_report(prof) == []


def test_ray_profiles_record_ordered_parameters():
    prof = oval_profile(circle(2), (0, 0), SAMPLER)
    for ray in prof.rays:
        params = [t for t, _ in ray.parameters]
        assert params == sorted(params)
        assert ray.negative_count == ray.positive_count == 1
        assert ray.vote == (1, False)
        assert not ray.has_multiple_root


# === nested ovals ===

def test_concentric_circles_count_nesting_depth():
    p = circle(1) * circle(2)
    prof = oval_profile(p, (0, 0), SAMPLER)
    assert (prof.ovals, prof.pseudo_line) == (2, False)
    assert prof.consistent
    # every scan line sees -2 < -1 < 0 < 1 < 2
    for ray in prof.rays:
        assert (ray.negative_count, ray.positive_count) == (2, 2)


def test_triple_nesting():
    p = circle(1) * circle(2) * circle(3)
    prof = oval_profile(p, (0, 0), SAMPLER)
    assert (prof.ovals, prof.pseudo_line) == (3, False)
    assert prof.consistent


# === odd degree: pseudo-line component ===

def test_odd_cubic_has_oval_plus_pseudo_line():
    p = (one - x1) * (4 * one - x1 ** 2 - x2 ** 2)
    prof = oval_profile(p, (0, 0), SAMPLER)
    assert (prof.ovals, prof.pseudo_line) == (1, True)
    assert prof.consistent
    # the vertical ray only meets the circle; the line x1 = 1 escapes to
    # infinity, so that ray votes through the at-infinity channel
    vertical = next(r for r in prof.rays if r.direction == (F(0), F(1)))
    assert vertical.at_infinity == 1
    assert (vertical.negative_count, vertical.positive_count) == (1, 1)
    assert vertical.vote == (1, True)


def test_single_line_is_pure_pseudo_line():
    prof = oval_profile(one - x1, (0, 0), SAMPLER)
    assert (prof.ovals, prof.pseudo_line) == (0, True)
    assert prof.consistent


# === failure and edge behavior ===

def test_not_rigidly_convex_aborts_with_witness():
    fermat = one - x1 ** 4 - x2 ** 4
    with pytest.raises(CertifiedNotRZError) as err:
        oval_profile(fermat, (0, 0), SAMPLER)
    verdict = err.value.verdict
    assert verdict.certified_not_rz()
    assert verdict.witness is not None


def test_three_variables_rejected():
    p3 = Polynomial.constant(1, 3) - Polynomial.variable(1, 3) ** 2
    with pytest.raises(DimensionMismatch):
        oval_profile(p3, (0, 0, 0))


def test_touching_ovals_flagged_by_consistency_report():
    # two circles tangent from inside at (4, 0), base point between them:
    # the tangency ray carries a double root
    p = (x1 ** 2 + x2 ** 2) * (x1 ** 2 + x2 ** 2 + 12 * x1 - one) \
        + 36 * x1 ** 2
    prof = oval_profile(p.shift((-4, 0)), (0, 0), SAMPLER)
    assert (prof.ovals, prof.pseudo_line) == (2, False)
    flagged = nesting_consistency_report(prof)
    assert any(r.has_multiple_root for r in flagged)
    axis = next(r for r in prof.rays if r.direction == (F(1), F(0)))
    assert axis.has_multiple_root
    assert max(m for _, m in axis.parameters) == 2


def test_default_sampler_pins_axes():
    p = (one - x1) * (4 * one - x1 ** 2 - x2 ** 2)
    prof = oval_profile(p, (0, 0))
    dirs = {r.direction for r in prof.rays}
    assert (F(0), F(1)) in dirs
    assert (F(1), F(0)) in dirs


def test_parameters_are_midpoints_near_roots():
    prof = oval_profile(circle(1), (0, 0), RaySampler(
        2, deterministic_count=7, random_count=0,
        extra_directions=((1, 0),)))
    axis = next(r for r in prof.rays if r.direction == (F(1), F(0)))
    assert len(axis.parameters) == 2
    assert abs(float(axis.parameters[0][0]) + 1.0) < 1e-5
    assert abs(float(axis.parameters[1][0]) - 1.0) < 1e-5


@given(st.integers(min_value=1, max_value=3),
       st.fractions(min_value=F(1, 2), max_value=2, max_denominator=4))
@settings(max_examples=12, deadline=None)
def test_nested_ellipse_families(depth, squeeze):
    p = one
    for k in range(1, depth + 1):
        p = p * (k * k * one - squeeze * x1 ** 2 - x2 ** 2)
    prof = oval_profile(p, (0, 0), RaySampler(2, 15, 4,
                                              extra_directions=((1, 0),)))
    assert (prof.ovals, prof.pseudo_line) == (depth, False)
    assert prof.consistent
