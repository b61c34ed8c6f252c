"""Linear pencils of symmetric rational matrices.

Provides exact evaluation, PSD/PD decisions with certificates, determinant
expansion to a sparse polynomial, direct sums, shifts, spectrahedron
membership, and reduction of a pencil with singular PSD constant term to
an equivalent monic pencil on its range.

All arithmetic is over Fraction; decisions are exact, never floating.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import List, Optional, Sequence, Tuple

from .errors import DimensionMismatch, ParseError, ReductionError
from .poly import (Polynomial, as_point, format_rational, parse_rational)

Row = Tuple[Fraction, ...]

# Cap on the size of an irreducible block in exact determinant expansion.
# Larger pencils only arise as direct sums, which split into blocks first.
_DET_BLOCK_CAP = 12


class SymmetricMatrix:
    """Immutable exact symmetric matrix."""

    __slots__ = ("entries", "size")

    def __init__(self, rows: Sequence[Sequence]):
        entries = tuple(tuple(Fraction(v) for v in row) for row in rows)
        n = len(entries)
        for row in entries:
            if len(row) != n:
                raise DimensionMismatch("matrix is not square")
        for i in range(n):
            for j in range(i):
                if entries[i][j] != entries[j][i]:
                    raise ValueError(
                        f"matrix is not symmetric at ({i},{j}): "
                        f"{entries[i][j]} vs {entries[j][i]}")
        self.entries = entries
        self.size = n

    @classmethod
    def identity(cls, n: int) -> "SymmetricMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int) -> "SymmetricMatrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence) -> "SymmetricMatrix":
        vals = [Fraction(v) for v in values]
        n = len(vals)
        return cls([[vals[i] if i == j else 0 for j in range(n)]
                    for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other: "SymmetricMatrix") -> "SymmetricMatrix":
        if self.size != other.size:
            raise DimensionMismatch("matrix sizes differ")
        return SymmetricMatrix(
            [[a + b for a, b in zip(r1, r2)]
             for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "SymmetricMatrix") -> "SymmetricMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "SymmetricMatrix":
        c = Fraction(c)
        return SymmetricMatrix([[c * v for v in row] for row in self.entries])

    def is_identity(self) -> bool:
        return all(self.entries[i][j] == (1 if i == j else 0)
                   for i in range(self.size) for j in range(self.size))

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)

    def __eq__(self, other):
        return (isinstance(other, SymmetricMatrix)
                and self.entries == other.entries)

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"SymmetricMatrix({[list(map(str, r)) for r in self.entries]})"


class LinearPencil:
    """Symmetric matrix tuple (L0, L1, ..., Lm) defining x -> L0 + sum x_i L_i."""

    __slots__ = ("matrices", "num_vars", "size")

    def __init__(self, matrices: Sequence[SymmetricMatrix]):
        mats = tuple(matrices)
        if len(mats) < 2:
            raise DimensionMismatch("a pencil needs L0 and at least one L_i")
        n = mats[0].size
        for mat in mats:
            if mat.size != n:
                raise DimensionMismatch("pencil matrices must share one size")
        self.matrices = mats
        self.num_vars = len(mats) - 1
        self.size = n

    def monic(self) -> bool:
        return self.matrices[0].is_identity()

    def evaluate(self, point: Sequence) -> SymmetricMatrix:
        x = as_point(point, self.num_vars)
        rows = [list(row) for row in self.matrices[0].entries]
        for xi, mat in zip(x, self.matrices[1:]):
            if xi == 0:
                continue
            for i in range(self.size):
                mrow = mat.entries[i]
                row = rows[i]
                for j in range(self.size):
                    row[j] += xi * mrow[j]
        return SymmetricMatrix(rows)

    def __eq__(self, other):
        return (isinstance(other, LinearPencil)
                and self.matrices == other.matrices)

    def __hash__(self):
        return hash(self.matrices)

    def __repr__(self):
        return f"LinearPencil(size={self.size}, num_vars={self.num_vars})"


def evaluate_pencil(pencil: LinearPencil, point: Sequence) -> SymmetricMatrix:
    return pencil.evaluate(point)


# -- exact definiteness -------------------------------------------------------


@dataclass(frozen=True)
class PsdReport:
    is_psd: bool
    is_pd: bool
    # exactly one certificate is populated: minor_sums when PSD (the k x k
    # principal minor sums, all >= 0), witness otherwise (w with w'Mw < 0)
    minor_sums: Optional[Tuple[Fraction, ...]] = None
    witness: Optional[Tuple[Fraction, ...]] = None


def _matmul(a: List[List[Fraction]], b: List[List[Fraction]]):
    inner = len(b)
    cols = len(b[0])
    return [[sum(row[t] * b[t][j] for t in range(inner)) for j in range(cols)]
            for row in a]


def _principal_minor_sums(m: List[List[Fraction]]) -> List[Fraction]:
    """e_k = sum of all k x k principal minors, k = 1..n, by the
    Faddeev-LeVerrier recursion (exact)."""
    n = len(m)
    sums: List[Fraction] = []
    b = [row[:] for row in m]
    c = sum(b[i][i] for i in range(n))
    sums.append(c)
    for k in range(2, n + 1):
        for i in range(n):
            b[i][i] -= c
        b = _matmul(m, b)
        c = sum(b[i][i] for i in range(n)) / k
        # the recursion produces (-1)^(k+1) e_k
        sums.append(c if k % 2 == 1 else -c)
    return sums


def _ldl_pivots(m: List[List[Fraction]]):
    """LDL^T without pivoting.  Returns (unit lower triangular T, pivots)
    or None when a pivot is zero or negative (the matrix is not PD)."""
    n = len(m)
    t = [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i in range(n)]
    d: List[Fraction] = []
    for j in range(n):
        piv = m[j][j] - sum(t[j][k] * t[j][k] * d[k] for k in range(j))
        if piv <= 0:
            return None
        d.append(piv)
        for i in range(j + 1, n):
            val = m[i][j] - sum(t[i][k] * t[j][k] * d[k] for k in range(j))
            t[i][j] = val / piv
    return t, d


def _negative_witness(m: List[List[Fraction]]) -> List[Fraction]:
    """A vector w with w'Mw < 0, for symmetric M that is not PSD."""
    n = len(m)
    if n == 0:
        raise AssertionError("internal error: ran out of matrix while "
                             "searching for a negative witness")
    for i in range(n):
        if m[i][i] < 0:
            return [Fraction(1) if k == i else Fraction(0) for k in range(n)]
    for i in range(n):
        if m[i][i] == 0:
            for j in range(n):
                if m[i][j] != 0:
                    # w = t e_i - sign(m_ij) e_j gives -2 t |m_ij| + m_jj
                    t = m[j][j] / (2 * abs(m[i][j])) + 1
                    w = [Fraction(0)] * n
                    w[i] = t
                    w[j] = Fraction(-1 if m[i][j] > 0 else 1)
                    return w
    # here every zero-diagonal row is entirely zero and contributes
    # nothing to the form: drop the first such row, or pivot on a
    # positive diagonal and recurse on the Schur complement (not PSD
    # either, since the pivot is positive)
    if m[0][0] == 0:
        sub = [[m[i][j] for j in range(1, n)] for i in range(1, n)]
        return [Fraction(0)] + _negative_witness(sub)
    d = m[0][0]
    a = [m[k][0] for k in range(1, n)]
    schur = [[m[i][j] - a[i - 1] * a[j - 1] / d
              for j in range(1, n)] for i in range(1, n)]
    w_sub = _negative_witness(schur)
    w0 = -sum(ai * wi for ai, wi in zip(a, w_sub)) / d
    return [w0] + w_sub


def is_psd(mat: SymmetricMatrix) -> PsdReport:
    """Exact PSD/PD decision.  PSD iff every principal-minor sum e_k is
    >= 0; PD iff LDL elimination keeps all pivots strictly positive."""
    m = [list(row) for row in mat.entries]
    if mat.size == 0:
        return PsdReport(True, True, minor_sums=())
    sums = _principal_minor_sums(m)
    psd = all(s >= 0 for s in sums)
    if not psd:
        w = _negative_witness(m)
        value = sum(wi * sum(mij * wj for mij, wj in zip(row, w))
                    for wi, row in zip(w, m))
        if value >= 0:
            raise AssertionError("internal error: witness is not negative")
        return PsdReport(False, False, witness=tuple(w))
    pd = _ldl_pivots(m) is not None
    return PsdReport(True, pd, minor_sums=tuple(sums))


class Membership(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


def _classify(mat: SymmetricMatrix) -> Membership:
    rep = is_psd(mat)
    if rep.is_pd:
        return Membership.INTERIOR
    if rep.is_psd:
        return Membership.BOUNDARY
    return Membership.OUTSIDE


def membership(pencil: LinearPencil, point: Sequence) -> Membership:
    """Classify a point against the spectrahedron of the pencil.

    For PD (in particular monic) L0 this is the direct PSD/PD test.  A
    singular PSD L0 satisfying the range condition makes the pencil
    block-diagonal with an identically zero block, so the classification
    runs on the compression to range(L0); otherwise the literal test is
    used (Interior is then typically empty).  A non-PSD L0 is an error.
    """
    rep0 = is_psd(pencil.matrices[0])
    if not rep0.is_psd:
        raise ReductionError(
            "L0 is not positive semidefinite at the reference point; "
            "apply reduce_to_monic after shifting to an interior point")
    if rep0.is_pd:
        return _classify(pencil.evaluate(point))
    basis = _range_basis(pencil.matrices[0])
    if _range_condition_holds(basis, pencil):
        mat = pencil.evaluate(point)
        return _classify(_compress(basis, mat))
    return _classify(pencil.evaluate(point))


# -- determinants -------------------------------------------------------------


def determinant_polynomial(pencil: LinearPencil) -> Polynomial:
    """Exact det(L0 + x1 L1 + ... + xm Lm) as a polynomial in x1..xm.

    The joint support graph is split into connected components (so direct
    sums, permuted or not, factor automatically) and each component is
    expanded by bitmask dynamic programming.
    """
    n = pencil.size
    m = pencil.num_vars
    entries = [[_entry_poly(pencil, i, j) for j in range(n)] for i in range(n)]
    result = Polynomial.constant(1, m)
    for comp in _components(pencil):
        if len(comp) > _DET_BLOCK_CAP:
            raise ValueError(
                f"irreducible pencil block of size {len(comp)} exceeds the "
                f"exact determinant cap ({_DET_BLOCK_CAP}); split the pencil "
                f"into a direct sum first")
        result = result * _component_det(entries, comp, m)
    return result


def _entry_poly(pencil: LinearPencil, i: int, j: int) -> Polynomial:
    m = pencil.num_vars
    terms = {}
    c0 = pencil.matrices[0].entries[i][j]
    if c0:
        terms[(0,) * m] = c0
    for k in range(1, m + 1):
        c = pencil.matrices[k].entries[i][j]
        if c:
            exps = tuple(1 if t == k - 1 else 0 for t in range(m))
            terms[exps] = c
    return Polynomial(m, terms)


def _components(pencil: LinearPencil) -> List[List[int]]:
    n = pencil.size
    adj = [set() for _ in range(n)]
    for mat in pencil.matrices:
        for i in range(n):
            for j in range(i + 1, n):
                if mat.entries[i][j] != 0:
                    adj[i].add(j)
                    adj[j].add(i)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack = [s]
        seen[s] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _component_det(entries, comp: List[int], m: int) -> Polynomial:
    """Determinant of the principal submatrix on comp, by expanding one
    row at a time over column subsets (memoized on the subset mask)."""
    s = len(comp)
    zero = Polynomial.zero(m)
    memo = {0: Polynomial.constant(1, m)}
    # process masks in order of increasing popcount: row k consumes masks
    # of popcount k+1
    by_count: List[List[int]] = [[] for _ in range(s + 1)]
    for mask in range(1 << s):
        by_count[bin(mask).count("1")].append(mask)
    for k in range(1, s + 1):
        row = comp[k - 1]
        row_sign = 1 if (k - 1) % 2 == 0 else -1
        for mask in by_count[k]:
            acc = zero
            sign = row_sign  # cofactor sign (-1)^((k-1) + index within mask)
            for pos in range(s):
                bit = 1 << pos
                if not mask & bit:
                    continue
                e = entries[row][comp[pos]]
                if not e.is_zero():
                    sub = memo[mask ^ bit]
                    term = e * sub
                    acc = acc + (term if sign > 0 else -term)
                sign = -sign
            memo[mask] = acc
        # free the previous layer
        for mask in by_count[k - 1]:
            del memo[mask]
    return memo[(1 << s) - 1]


def direct_sum(pencils: Sequence[LinearPencil]) -> LinearPencil:
    """Block-diagonal sum; determinants multiply exactly."""
    pencils = list(pencils)
    if not pencils:
        raise DimensionMismatch("direct_sum of an empty list")
    m = pencils[0].num_vars
    for p in pencils:
        if p.num_vars != m:
            raise DimensionMismatch("pencils must share num_vars")
    total = sum(p.size for p in pencils)
    mats = []
    for k in range(m + 1):
        rows = [[Fraction(0)] * total for _ in range(total)]
        off = 0
        for p in pencils:
            sub = p.matrices[k].entries
            for i in range(p.size):
                for j in range(p.size):
                    rows[off + i][off + j] = sub[i][j]
            off += p.size
        mats.append(SymmetricMatrix(rows))
    return LinearPencil(mats)


def shift_pencil(pencil: LinearPencil, x0: Sequence) -> LinearPencil:
    """Re-base the pencil at x0: the constant term becomes L(x0)."""
    shifted0 = pencil.evaluate(x0)
    return LinearPencil((shifted0,) + pencil.matrices[1:])


# -- monic reduction ----------------------------------------------------------


@dataclass(frozen=True)
class MonicReduction:
    """Result of reduce_to_monic: det of the compressed pencil equals
    det_scale times det of the monic pencil, with det_scale > 0."""
    pencil: LinearPencil
    det_scale: Fraction
    rank: int


_EPSILONS = [Fraction(1, 2 ** k) for k in range(0, 21)]


def reduce_to_monic(pencil: LinearPencil) -> MonicReduction:
    """Compress a pencil with PSD L0 to an equivalent monic pencil.

    Steps: verify L0 is PSD and 0 is interior (L0 +- eps L_j PSD for some
    eps per coordinate); compress everything to range(L0); factor the
    compressed L0 = T D T^t by LDL; normalize the positive diagonal D away
    exactly.  The last step needs every pivot to be a rational square
    (after an optional uniform rescale); otherwise no exact rational
    congruence to a monic pencil exists, and a structured error says so.
    """
    l0 = pencil.matrices[0]
    rep0 = is_psd(l0)
    if not rep0.is_psd:
        raise ReductionError("L0 is not positive semidefinite")
    if pencil.monic():
        return MonicReduction(pencil, Fraction(1), pencil.size)
    if not rep0.is_pd:
        # PD L0 certifies 0 interior by itself; the singular case needs
        # the epsilon test, which also forces the range condition
        for j in range(1, pencil.num_vars + 1):
            lj = pencil.matrices[j]
            if lj.is_zero():
                continue
            if not any(is_psd(l0 - lj.scale(eps)).is_psd
                       and is_psd(l0 + lj.scale(eps)).is_psd
                       for eps in _EPSILONS):
                raise ReductionError(
                    f"0 is not interior to the spectrahedron: L0 +- eps*L{j} "
                    f"is never PSD down to eps = 2^-20")
    basis = _range_basis(l0)
    rank = len(basis)
    if rank < pencil.size and not _range_condition_holds(basis, pencil):
        raise ReductionError(
            "internal invariant failure: some L_j has range outside "
            "range(L0) although the interior test passed")
    compressed = [_compress(basis, mat) for mat in pencil.matrices]
    h0 = [list(row) for row in compressed[0].entries]
    fact = _ldl_pivots(h0)
    if fact is None:
        raise ReductionError(
            "internal invariant failure: compressed L0 is not PD")
    t, piv = fact
    scale = Fraction(1)
    roots = _square_roots(piv)
    if roots is None:
        # a uniform positive rescale changes no membership facts but can
        # fix the square classes; one retry with c = 1/d_1
        scale = 1 / piv[0]
        roots = _square_roots([scale * d for d in piv])
        if roots is None:
            pretty = ", ".join(format_rational(d) for d in piv)
            raise ReductionError(
                f"no exact rational congruence makes the compressed L0 the "
                f"identity: LDL pivots [{pretty}] are not rational squares, "
                f"even after a uniform rescale")
    w_inv = _scaled_cholesky_inverse(t, roots)
    det_scale = Fraction(1)
    for d in piv:
        det_scale *= d
    out = []
    for mat in compressed:
        rows = [[v * scale for v in row] for row in mat.entries]
        out.append(SymmetricMatrix(_congruence(w_inv, rows)))
    reduced = LinearPencil(out)
    if not reduced.monic():
        raise AssertionError("internal error: reduction did not reach I")
    return MonicReduction(reduced, det_scale, rank)


def _square_roots(pivots: Sequence[Fraction]):
    """Exact square roots of every pivot, or None if any is irrational."""
    roots = []
    for d in pivots:
        rn, rd = isqrt(d.numerator), isqrt(d.denominator)
        if rn * rn != d.numerator or rd * rd != d.denominator:
            return None
        roots.append(Fraction(rn, rd))
    return roots


def _scaled_cholesky_inverse(t, roots) -> List[List[Fraction]]:
    """Inverse of W = T diag(roots), both lower triangular, by forward
    substitution."""
    n = len(t)
    w = [[t[i][j] * roots[j] for j in range(n)] for i in range(n)]
    inv = [[Fraction(0)] * n for _ in range(n)]
    for col in range(n):
        # solve W y = e_col
        y = [Fraction(0)] * n
        for i in range(col, n):
            rhs = Fraction(1) if i == col else Fraction(0)
            rhs -= sum(w[i][k] * y[k] for k in range(col, i))
            y[i] = rhs / w[i][i]
        for i in range(n):
            inv[i][col] = y[i]
    return inv


def _congruence(b, m) -> List[List[Fraction]]:
    """b m b^t for plain row-list matrices."""
    n = len(b)
    k = len(m)
    bm = [[sum(b[i][t] * m[t][j] for t in range(k)) for j in range(k)]
          for i in range(n)]
    return [[sum(bm[i][t] * b[j][t] for t in range(k)) for j in range(n)]
            for i in range(n)]


def _range_basis(mat: SymmetricMatrix) -> List[List[Fraction]]:
    """Row-reduced basis of the row space (= range, by symmetry)."""
    rows = [list(row) for row in mat.entries]
    return _rref(rows)


def _rref(rows: List[List[Fraction]]) -> List[List[Fraction]]:
    rows = [row[:] for row in rows]
    n_cols = len(rows[0]) if rows else 0
    out: List[List[Fraction]] = []
    lead_cols: List[int] = []
    for col in range(n_cols):
        pivot_row = None
        for row in rows:
            if row[col] != 0 and all(row[c] == 0 for c in range(col)):
                pivot_row = row
                break
        if pivot_row is None:
            continue
        rows.remove(pivot_row)
        piv = pivot_row[col]
        pivot_row = [v / piv for v in pivot_row]
        for row in rows:
            f = row[col]
            if f:
                for c in range(n_cols):
                    row[c] -= f * pivot_row[c]
        for row in out:
            f = row[col]
            if f:
                for c in range(n_cols):
                    row[c] -= f * pivot_row[c]
        out.append(pivot_row)
        lead_cols.append(col)
    return out


def _in_row_space(basis: List[List[Fraction]], vec: List[Fraction]) -> bool:
    v = vec[:]
    for row in basis:
        lead = next(c for c, val in enumerate(row) if val != 0)
        if v[lead]:
            f = v[lead]
            for c in range(len(v)):
                v[c] -= f * row[c]
    return all(c == 0 for c in v)


def _range_condition_holds(basis, pencil: LinearPencil) -> bool:
    for mat in pencil.matrices[1:]:
        for row in mat.entries:
            if not _in_row_space(basis, list(row)):
                return False
    return True


def _compress(basis: List[List[Fraction]], mat: SymmetricMatrix) -> SymmetricMatrix:
    """Quadratic form restricted to the span of the basis rows."""
    r = len(basis)
    n = mat.size
    bm = [[sum(basis[i][t] * mat.entries[t][j] for t in range(n))
           for j in range(n)] for i in range(r)]
    return SymmetricMatrix(
        [[sum(bm[i][t] * basis[j][t] for t in range(n)) for j in range(r)]
         for i in range(r)])


# -- text format --------------------------------------------------------------
#
# First line:  pencil N m
# Then m+1 blocks:  a header line 'L k' followed by N rows of N rational
# entries.  '#' comments and blank lines are allowed anywhere.


def format_pencil(pencil: LinearPencil) -> str:
    lines = [f"pencil {pencil.size} {pencil.num_vars}"]
    for k, mat in enumerate(pencil.matrices):
        lines.append(f"L {k}")
        for row in mat.entries:
            lines.append(" ".join(format_rational(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_pencil(text: str) -> LinearPencil:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((lineno, stripped))
    if not lines:
        raise ParseError("empty pencil document")
    lineno, header = lines[0]
    fields = header.split()
    if len(fields) != 3 or fields[0] != "pencil":
        raise ParseError("expected header 'pencil N m'", lineno)
    try:
        size, num_vars = int(fields[1]), int(fields[2])
    except ValueError:
        raise ParseError("pencil header needs integer N and m", lineno)
    if size < 1 or num_vars < 1:
        raise ParseError("pencil needs N >= 1 and m >= 1", lineno)
    pos = 1
    mats = []
    for k in range(num_vars + 1):
        if pos >= len(lines):
            raise ParseError(f"missing block 'L {k}'", lines[-1][0])
        lineno, header = lines[pos]
        if header.split() != ["L", str(k)]:
            raise ParseError(f"expected block header 'L {k}', got {header!r}",
                             lineno)
        pos += 1
        rows = []
        for _ in range(size):
            if pos >= len(lines):
                raise ParseError(f"block 'L {k}' is missing rows", lines[-1][0])
            lineno, row_text = lines[pos]
            pos += 1
            tokens = row_text.split()
            if len(tokens) != size:
                raise ParseError(
                    f"expected {size} entries, got {len(tokens)}", lineno)
            rows.append([parse_rational(tok, lineno) for tok in tokens])
        try:
            mats.append(SymmetricMatrix(rows))
        except ValueError as exc:
            raise ParseError(f"block 'L {k}': {exc}", lines[pos - 1][0])
    if pos != len(lines):
        raise ParseError("trailing content after the last block",
                         lines[pos][0])
    return LinearPencil(mats)
