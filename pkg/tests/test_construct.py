"""Monic pencil construction and exact verification of the results."""

import random
from fractions import Fraction

import pytest

from lmicert.construct import (APPROX_MATCH, CLOSED_FORM,
                               COEFFICIENT_MATCHING, DIRECT_SUM, EXACT_MATCH,
                               MISMATCH, InterceptData, fixed_part,
                               intercept_normalize, match_offdiagonal,
                               represent, verify_representation)
from lmicert.errors import (BasePointError, CertifiedNotRZError,
                            ConstructionError, DimensionMismatch)
from lmicert.pencil import (LinearPencil, Membership, SymmetricMatrix,
                            determinant_polynomial, membership)
from lmicert.poly import Polynomial
from lmicert.rzcheck import RaySampler

F = Fraction
x1 = Polynomial.variable(1, 2)
x2 = Polynomial.variable(2, 2)
one = Polynomial.constant(1, 2)

DISC = one - x1 ** 2 - x2 ** 2
SMALL = RaySampler(2, deterministic_count=31, random_count=8)


def sym(rows):
    return SymmetricMatrix([[F(v) for v in row] for row in rows])


# === intercept normalization ===

def test_disc_intercepts_are_exact():
    q, data, change = intercept_normalize(DISC)
    assert q == DISC
    assert change is None
    assert data.roots == (F(1), F(-1))
    assert data.slopes == (F(0), F(0))
    assert data.exact == (True, True)


def test_intercept_sort_prefers_small_then_positive():
    p = DISC * (4 * one - x1 ** 2 - x2 ** 2)
    _, data, _ = intercept_normalize(p)
    assert data.roots == (F(1), F(-1), F(2), F(-2))


def test_degenerate_axis_triggers_coordinate_change():
    # restriction to the x2 axis is constant; a rotation is required
    p = one - x1 ** 2
    q, data, change = intercept_normalize(p)
    assert change is not None
    assert len(data.roots) == 2
    assert q != p


def test_intercept_normalize_needs_positive_origin():
    with pytest.raises(BasePointError):
        intercept_normalize(DISC.shift((2, 0)))


def test_fixed_part_from_disc():
    _, data, _ = intercept_normalize(DISC)
    l2, diag1 = fixed_part(data)
    assert l2 == SymmetricMatrix.diagonal([F(-1), F(1)])
    assert diag1 == (F(0), F(0))


def test_fixed_part_rejects_origin_intercept():
    data = InterceptData((F(0), F(1)), (F(0), F(0)), (True, True))
    with pytest.raises(ConstructionError):
        fixed_part(data)


# === closed forms ===

def test_degree_zero():
    result = represent(5 * one, sampler=SMALL)
    assert result.method == CLOSED_FORM
    assert result.outcome.kind == EXACT_MATCH
    assert result.pencil.size == 1


def test_degree_one_is_exact():
    p = one - x1 + 2 * x2
    result = represent(p, sampler=SMALL)
    assert result.method == CLOSED_FORM
    assert result.pencil.size == 1
    assert determinant_polynomial(result.pencil) == p
    assert result.outcome.kind == EXACT_MATCH
    assert result.residual == 0.0


def test_disc_representation_exact():
    result = represent(DISC, sampler=SMALL)
    assert result.method == CLOSED_FORM
    assert result.outcome.kind == EXACT_MATCH
    pencil = result.pencil
    assert pencil.size == 2
    assert pencil.matrices[2] == SymmetricMatrix.diagonal([F(-1), F(1)])
    assert abs(pencil.matrices[1][0, 1]) == 1
    assert determinant_polynomial(pencil) == DISC
    assert membership(pencil, (0, 0)) is Membership.INTERIOR
    assert membership(pencil, (1, 0)) is Membership.BOUNDARY
    assert membership(pencil, (2, 0)) is Membership.OUTSIDE


def test_irrational_intercepts_give_approx_match():
    p = one - x1 ** 2 - 2 * x2 ** 2
    result = represent(p, sampler=SMALL)
    assert result.outcome.kind == APPROX_MATCH
    assert result.residual < 1e-15
    assert result.outcome.membership_points == 100


# === coefficient matching ===

def test_product_of_lines_matches_exactly():
    p = (one - x2) * (one + x2) * (one + x1 + 2 * x2)
    result = represent(p, sampler=SMALL)
    assert result.method == COEFFICIENT_MATCHING
    assert result.outcome.kind == EXACT_MATCH
    assert determinant_polynomial(result.pencil) == p
    # pinned entries survive the solve
    assert result.pencil.matrices[2] == \
        SymmetricMatrix.diagonal([F(2), F(-1), F(1)])


def test_concentric_quartic_recovers_block_structure():
    p = DISC * (4 * one - x1 ** 2 - x2 ** 2)
    result = represent(p, sampler=SMALL)
    assert result.pencil.size == 4
    assert result.pencil.matrices[2] == \
        SymmetricMatrix.diagonal([F(-1), F(1), F(-1, 2), F(1, 2)])
    assert result.outcome.kind in (EXACT_MATCH, APPROX_MATCH)
    assert result.residual <= 1e-9


def test_matching_requires_consistent_fixed_part():
    _, data, _ = intercept_normalize(DISC)
    with pytest.raises(DimensionMismatch):
        match_offdiagonal(DISC * DISC, fixed_part(data))


def test_seeded_cubic_determinants_round_trip():
    rng = random.Random(2024)
    done = 0
    while done < 6:
        mats = []
        for _ in range(2):
            rows = [[F(0)] * 3 for _ in range(3)]
            for i in range(3):
                for j in range(i, 3):
                    rows[i][j] = rows[j][i] = F(rng.randint(-2, 2), 2)
            mats.append(SymmetricMatrix(rows))
        p = determinant_polynomial(
            LinearPencil([SymmetricMatrix.identity(3)] + mats))
        if p.degree() != 3:
            continue
        result = represent(p, tol=1e-9, sampler=SMALL)
        assert result.outcome.kind in (EXACT_MATCH, APPROX_MATCH)
        assert result.residual <= 1e-8
        done += 1


def test_coordinate_change_is_undone():
    p = (one - x1) * (one + x1) * (one + x2)
    result = represent(p, sampler=SMALL)
    assert result.coordinate_change is not None
    assert result.outcome.kind in (EXACT_MATCH, APPROX_MATCH)
    if result.outcome.kind == EXACT_MATCH:
        c = result.outcome.constant
        assert determinant_polynomial(result.pencil) == p * c


# === factored inputs ===

def test_factors_build_direct_sum():
    p = (one - x1) * DISC
    result = represent(p, factors=[one - x1, DISC], sampler=SMALL)
    assert result.method == DIRECT_SUM
    assert result.pencil.size == 3
    assert determinant_polynomial(result.pencil) == p
    assert result.outcome.kind == EXACT_MATCH


def test_factors_must_multiply_back():
    with pytest.raises(ConstructionError):
        represent(DISC, factors=[one - x1, one + x1], sampler=SMALL)


def test_high_degree_needs_factors():
    lines = [one - x1, one + x1, one - x2, one + x2,
             one + x1 + x2, one - x1 + x2, one + x1 - x2]
    p = one
    for f in lines:
        p = p * f
    assert p.degree() == 7
    with pytest.raises(ConstructionError) as err:
        represent(p, sampler=SMALL)
    assert "cap" in str(err.value)
    result = represent(p, factors=lines, sampler=SMALL)
    assert result.method == DIRECT_SUM
    assert result.pencil.size == 7
    assert result.outcome.kind == EXACT_MATCH


# === rejection paths ===

def test_non_rz_input_rejected_with_witness():
    fermat = one - x1 ** 4 - x2 ** 4
    with pytest.raises(CertifiedNotRZError) as err:
        represent(fermat, sampler=SMALL)
    assert err.value.verdict.certified_not_rz()


def test_origin_must_be_interior():
    with pytest.raises(BasePointError):
        represent(DISC.shift((2, 0)), sampler=SMALL)


def test_two_variables_only():
    p3 = Polynomial.constant(1, 3) - Polynomial.variable(1, 3) ** 2
    with pytest.raises(DimensionMismatch):
        represent(p3)


# === verification ===

def disc_pencil():
    return LinearPencil([SymmetricMatrix.identity(2),
                         sym([[1, 0], [0, -1]]),
                         sym([[0, 1], [1, 0]])])


def test_verify_exact_match_constant():
    out = verify_representation(DISC, disc_pencil())
    assert out.kind == EXACT_MATCH
    assert out.constant == 1
    assert out.membership_points == 100


def test_verify_scaled_exact_match():
    scaled = LinearPencil([m.scale(2) for m in disc_pencil().matrices])
    out = verify_representation(DISC, scaled)
    assert out.kind == EXACT_MATCH
    assert out.constant == 4


def test_verify_small_perturbation_is_approx():
    eps = F(1, 10 ** 12)
    p = LinearPencil([SymmetricMatrix.identity(2),
                      sym([[1 + eps, 0], [0, -1]]),
                      sym([[0, 1], [1, 0]])])
    out = verify_representation(DISC, p)
    assert out.kind == APPROX_MATCH
    assert out.residual is not None and out.residual <= 1e-11


def test_verify_wrong_region_is_mismatch():
    out = verify_representation(4 * one - x1 ** 2 - x2 ** 2, disc_pencil())
    assert out.kind == MISMATCH
    assert out.worst_deviation == pytest.approx(0.75)
    assert out.worst_monomial in ((2, 0), (0, 2))


def test_verify_negative_scale_is_mismatch():
    p = one - x1 - x2
    flipped = LinearPencil([sym([[-1]]), sym([[1]]), sym([[1]])])
    out = verify_representation(p, flipped)
    assert out.kind == MISMATCH


def test_verify_dimension_mismatch():
    p3 = Polynomial.constant(1, 3)
    with pytest.raises(DimensionMismatch):
        verify_representation(p3, disc_pencil())
