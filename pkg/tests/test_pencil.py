"""Symmetric pencils: exact PSD tests, determinants, monic reduction."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmicert.errors import DimensionMismatch, ParseError, ReductionError
from lmicert.pencil import (LinearPencil, Membership, SymmetricMatrix,
                            determinant_polynomial, direct_sum, format_pencil,
                            is_psd, membership, parse_pencil, reduce_to_monic,
                            shift_pencil)
from lmicert.poly import Polynomial

F = Fraction


def sym(rows):
    return SymmetricMatrix([[F(v) for v in row] for row in rows])


def disc_pencil():
    """det = 1 - x1^2 - x2^2."""
    return LinearPencil([
        SymmetricMatrix.identity(2),
        sym([[1, 0], [0, -1]]),
        sym([[0, 1], [1, 0]]),
    ])


# === SymmetricMatrix basics ===

def test_symmetry_enforced():
    with pytest.raises(ValueError):
        SymmetricMatrix([[F(0), F(1)], [F(2), F(0)]])


def test_matrix_algebra():
    a = sym([[1, 2], [2, 0]])
    b = sym([[0, 1], [1, 1]])
    assert (a + b)[0, 1] == 3
    assert (a - b)[1, 1] == -1
    assert a.scale(F(1, 2))[0, 0] == F(1, 2)
    assert SymmetricMatrix.identity(3).is_identity()
    assert SymmetricMatrix.zero(2).is_zero()
    assert SymmetricMatrix.diagonal([1, -2])[1, 1] == -2


def test_pencil_needs_consistent_sizes():
    with pytest.raises(DimensionMismatch):
        LinearPencil([SymmetricMatrix.identity(2), SymmetricMatrix.identity(3)])
    with pytest.raises(DimensionMismatch):
        LinearPencil([SymmetricMatrix.identity(2)])


def test_pencil_evaluate():
    m = disc_pencil().evaluate((F(1, 2), F(1, 3)))
    assert m[0, 0] == F(3, 2)
    assert m[0, 1] == F(1, 3)
    assert m[1, 1] == F(1, 2)


# === exact PSD / PD decisions ===

def test_pd_matrix():
    rep = is_psd(sym([[2, 1], [1, 2]]))
    assert rep.is_psd and rep.is_pd
    assert rep.minor_sums == (F(4), F(3))


def test_psd_rank_deficient():
    rep = is_psd(sym([[1, 1], [1, 1]]))
    assert rep.is_psd and not rep.is_pd
    assert rep.minor_sums == (F(2), F(0))


def test_indefinite_gets_witness():
    m = sym([[1, 2], [2, 1]])
    rep = is_psd(m)
    assert not rep.is_psd
    w = rep.witness
    value = sum(w[i] * m[i, j] * w[j] for i in range(2) for j in range(2))
    assert value < 0


def test_zero_diagonal_indefinite():
    rep = is_psd(sym([[0, 1], [1, 0]]))
    assert not rep.is_psd


@given(st.lists(st.lists(st.integers(min_value=-4, max_value=4),
                         min_size=3, max_size=3),
                min_size=1, max_size=3))
@settings(max_examples=60, deadline=None)
def test_gram_matrices_always_psd(rows):
    # G^t G is PSD for any G; adding I makes it PD
    n = 3
    gram = [[sum(F(r[i]) * F(r[j]) for r in rows) for j in range(n)]
            for i in range(n)]
    rep = is_psd(SymmetricMatrix(gram))
    assert rep.is_psd
    shifted = SymmetricMatrix(gram) + SymmetricMatrix.identity(n)
    assert is_psd(shifted).is_pd


@given(st.lists(st.integers(min_value=-5, max_value=5),
                min_size=6, max_size=6))
@settings(max_examples=80, deadline=None)
def test_witness_certificate_is_sound(vals):
    m = sym([[vals[0], vals[1], vals[2]],
             [vals[1], vals[3], vals[4]],
             [vals[2], vals[4], vals[5]]])
    rep = is_psd(m)
    if rep.is_psd:
        assert all(s >= 0 for s in rep.minor_sums)
    else:
        w = rep.witness
        value = sum(w[i] * m[i, j] * w[j] for i in range(3) for j in range(3))
        assert value < 0


# === membership ===

def test_disc_membership():
    p = disc_pencil()
    assert membership(p, (0, 0)) is Membership.INTERIOR
    assert membership(p, (1, 0)) is Membership.BOUNDARY
    assert membership(p, (F(3, 5), F(4, 5))) is Membership.BOUNDARY
    assert membership(p, (2, 0)) is Membership.OUTSIDE


def test_membership_singular_l0_uses_compression():
    # all matrices supported on the first coordinate; the zero block
    # must not force every point to Boundary
    p = LinearPencil([sym([[4, 0], [0, 0]]),
                      sym([[1, 0], [0, 0]]),
                      sym([[-1, 0], [0, 0]])])
    assert membership(p, (0, 0)) is Membership.INTERIOR
    assert membership(p, (-4, 0)) is Membership.BOUNDARY
    assert membership(p, (-5, 0)) is Membership.OUTSIDE


def test_membership_rejects_indefinite_l0():
    p = LinearPencil([sym([[-1, 0], [0, 1]]),
                      sym([[1, 0], [0, 0]]),
                      sym([[0, 0], [0, 1]])])
    with pytest.raises(ReductionError):
        membership(p, (0, 0))


# === determinants ===

def test_disc_determinant():
    x1 = Polynomial.variable(1, 2)
    x2 = Polynomial.variable(2, 2)
    one = Polynomial.constant(1, 2)
    assert determinant_polynomial(disc_pencil()) == one - x1 ** 2 - x2 ** 2


def test_diagonal_determinant_is_product_of_linear_forms():
    p = LinearPencil([SymmetricMatrix.identity(2),
                      SymmetricMatrix.diagonal([1, -1]),
                      SymmetricMatrix.diagonal([2, 3])])
    x1 = Polynomial.variable(1, 2)
    x2 = Polynomial.variable(2, 2)
    one = Polynomial.constant(1, 2)
    expected = (one + x1 + 2 * x2) * (one - x1 + 3 * x2)
    assert determinant_polynomial(p) == expected


def test_determinant_splits_over_blocks():
    a = disc_pencil()
    b = LinearPencil([SymmetricMatrix.identity(1),
                      sym([[2]]), sym([[-1]])])
    s = direct_sum([a, b])
    assert s.size == 3
    assert determinant_polynomial(s) == (
        determinant_polynomial(a) * determinant_polynomial(b))


def test_shift_pencil_translates_determinant():
    p = disc_pencil()
    q = shift_pencil(p, (F(1, 2), F(1, 4)))
    dq = determinant_polynomial(q)
    dp = determinant_polynomial(p)
    for pt in [(0, 0), (F(1, 3), F(-2, 5)), (1, 1)]:
        x, y = F(pt[0]), F(pt[1])
        assert dq.evaluate((x, y)) == dp.evaluate((x + F(1, 2), y + F(1, 4)))


def _random_pencil(rng, n, m):
    mats = [SymmetricMatrix.identity(n)]
    for _ in range(m):
        rows = [[F(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                v = F(rng.randint(-3, 3))
                rows[i][j] = rows[j][i] = v
        mats.append(SymmetricMatrix(rows))
    return LinearPencil(mats)


def test_determinant_matches_cofactor_expansion_at_points():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(1, 4)
        p = _random_pencil(rng, n, 2)
        d = determinant_polynomial(p)
        for _ in range(4):
            pt = (F(rng.randint(-8, 8), 4), F(rng.randint(-8, 8), 4))
            assert d.evaluate(pt) == _det_exact(p.evaluate(pt))


def _det_exact(mat):
    rows = [list(r) for r in mat.entries]
    n = mat.size
    det = F(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c] != 0), None)
        if piv is None:
            return F(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det *= rows[c][c]
        for r in range(c + 1, n):
            f = rows[r][c] / rows[c][c]
            for k in range(c, n):
                rows[r][k] -= f * rows[c][k]
    return det


# === monic reduction ===

def test_reduce_monic_passthrough():
    red = reduce_to_monic(disc_pencil())
    assert red.pencil is disc_pencil() or red.pencil == disc_pencil()
    assert red.det_scale == 1
    assert red.rank == 2


def test_reduce_monic_drops_zero_block():
    p = LinearPencil([sym([[4, 0], [0, 0]]),
                      sym([[1, 0], [0, 0]]),
                      sym([[-1, 0], [0, 0]])])
    red = reduce_to_monic(p)
    assert red.rank == 1
    assert red.det_scale == 4
    assert red.pencil.size == 1
    assert red.pencil.matrices[1][0, 0] == F(1, 4)
    assert red.pencil.matrices[2][0, 0] == F(-1, 4)
    # det(compressed) = det_scale * det(monic)
    lhs = Polynomial.constant(4, 2) \
        + Polynomial.variable(1, 2) - Polynomial.variable(2, 2)
    assert lhs == determinant_polynomial(red.pencil) * 4


def test_reduce_monic_uniform_rescale_fixes_square_classes():
    # pivots [2, 2] are not squares; scaling by 1/2 makes them so
    p = LinearPencil([sym([[2, 0], [0, 2]]),
                      sym([[0, 1], [1, 0]]),
                      sym([[1, 0], [0, -1]])])
    red = reduce_to_monic(p)
    assert red.det_scale == 4
    assert red.rank == 2
    assert determinant_polynomial(p) == \
        determinant_polynomial(red.pencil) * 4


def test_reduce_monic_rejects_bad_square_classes():
    p = LinearPencil([sym([[2, 0], [0, 3]]),
                      sym([[1, 0], [0, 1]]),
                      sym([[0, 1], [1, 0]])])
    with pytest.raises(ReductionError) as err:
        reduce_to_monic(p)
    assert "rational squares" in str(err.value)


def test_reduce_monic_rejects_noninterior_origin():
    p = LinearPencil([sym([[1, 0], [0, 0]]),
                      sym([[0, 0], [0, 1]]),
                      sym([[1, 0], [0, 0]])])
    with pytest.raises(ReductionError) as err:
        reduce_to_monic(p)
    assert "interior" in str(err.value)


def test_reduce_monic_rejects_indefinite_l0():
    p = LinearPencil([sym([[-1, 0], [0, 1]]),
                      sym([[1, 0], [0, 1]]),
                      sym([[0, 1], [1, 0]])])
    with pytest.raises(ReductionError):
        reduce_to_monic(p)


def test_reduce_monic_congruence_preserves_membership():
    rng = random.Random(11)
    lift = [[F(1), F(0)], [F(0), F(0)], [F(2), F(1)]]   # rank-2 embedding
    base = disc_pencil()
    mats = []
    for mat in base.matrices:
        rows = [[sum(lift[i][a] * mat[a, b] * lift[j][b]
                     for a in range(2) for b in range(2))
                 for j in range(3)] for i in range(3)]
        mats.append(SymmetricMatrix(rows))
    p = LinearPencil(mats)
    red = reduce_to_monic(p)
    assert red.rank == 2
    for _ in range(30):
        pt = (F(rng.randint(-6, 6), 3), F(rng.randint(-6, 6), 3))
        assert membership(red.pencil, pt) is membership(base, pt)


# === text format ===

def test_pencil_round_trip():
    p = disc_pencil()
    assert parse_pencil(format_pencil(p)) == p


def test_parse_pencil_errors_carry_lines():
    with pytest.raises(ParseError) as err:
        parse_pencil("pencil 2 1\nL 0\n1 0\n0 1\nL 1\n1 0\n")
    assert "line" in str(err.value)
    with pytest.raises(ParseError):
        parse_pencil("pencil 2 1\nL 1\n1 0\n0 1\nL 0\n1 0\n0 1\n")
    with pytest.raises(ParseError):
        parse_pencil("")


def test_parse_pencil_accepts_comments_and_blank_lines():
    text = "# disc\npencil 2 1\n\nL 0\n1 0\n0 1\nL 1  # slope block\n0 1\n1 0\n"
    p = parse_pencil(text)
    assert p.size == 2 and p.num_vars == 1
