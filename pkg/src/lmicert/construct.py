"""Monic pencil representations of two-variable real-zero polynomials.

The target identity is det(I + x1 L1 + x2 L2) = p(x1, x2) / p(0, 0)
with symmetric d x d matrices, d = deg p.  The normalization used here
fixes L2 and the diagonal of L1 from the curve's intercepts with the
x2 axis: with p(0, c_i) = 0 and s_i the implicit slope dx2/dx1 at
(0, c_i),

    L2 = diag(-1/c_1, ..., -1/c_d),    [L1]_ii = s_i / c_i.

That pins everything except the off-diagonal of L1, which is found by
matching det coefficients numerically (degree 3 and up) or by a one
unknown closed form (degree 2).  Every candidate is verified against
an exact rational determinant expansion before it is returned, so
floating point can only cause failures, never wrong answers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (BasePointError, CertifiedNotRZError, ConstructionError,
                     DimensionMismatch)
from .pencil import (LinearPencil, Membership, SymmetricMatrix, direct_sum,
                     determinant_polynomial, membership)
from .poly import Polynomial, UnivariatePolynomial
from .realroots import count_real_roots, isolate_real_roots
from .rzcheck import RaySampler, rz_check

__all__ = ["InterceptData", "RepresentationResult", "VerifyOutcome",
           "intercept_normalize", "fixed_part", "match_offdiagonal",
           "represent", "verify_representation",
           "CLOSED_FORM", "DIRECT_SUM", "COEFFICIENT_MATCHING",
           "EXACT_MATCH", "APPROX_MATCH", "MISMATCH"]

CLOSED_FORM = "ClosedForm"
DIRECT_SUM = "DirectSum"
COEFFICIENT_MATCHING = "CoefficientMatching"

EXACT_MATCH = "ExactMatch"
APPROX_MATCH = "ApproxMatch"
MISMATCH = "Mismatch"

_MATCH_DEGREE_CAP = 6
_CHANGE_TRIES = 32
_INTERCEPT_RESOLUTION = Fraction(1, 2 ** 64)

Matrix2 = Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]


@dataclass(frozen=True)
class InterceptData:
    """Axis intercepts (0, c_i) of the curve and the implicit slopes
    there.  Roots are exact rationals when the curve passes through
    one, otherwise rational approximations accurate to the working
    resolution; the exact flags record which."""
    roots: Tuple[Fraction, ...]
    slopes: Tuple[Fraction, ...]
    exact: Tuple[bool, ...]


@dataclass(frozen=True)
class VerifyOutcome:
    kind: str                        # EXACT_MATCH / APPROX_MATCH / MISMATCH
    constant: Optional[Fraction]     # det = constant * p, when exact
    residual: Optional[float]        # scaled coefficient deviation
    worst_monomial: Optional[Tuple[int, ...]]
    worst_deviation: Optional[float]
    membership_points: int           # spot-check sample size


@dataclass(frozen=True)
class RepresentationResult:
    pencil: LinearPencil
    residual: float
    method: str
    coordinate_change: Optional[Matrix2]
    outcome: VerifyOutcome


# -- intercept normalization ---------------------------------------------------


def _axis_poly(p: Polynomial) -> UnivariatePolynomial:
    zero = (Fraction(0), Fraction(0))
    return p.restrict(zero, (Fraction(0), Fraction(1)))


def _snap_root(g: UnivariatePolynomial, low: Fraction, high: Fraction,
               mid: Fraction) -> Tuple[Fraction, bool]:
    """Prefer an exact rational root inside the isolating interval;
    keep the midpoint approximation otherwise."""
    if low == high:
        return low, True
    for dmax in (1, 2, 3, 4, 6, 8, 12, 16, 24, 60, 1000, 10 ** 6):
        cand = Fraction(mid).limit_denominator(dmax)
        if low < cand < high and g.evaluate(cand) == 0:
            return cand, True
    return mid, False


def _intercepts(p: Polynomial) -> Optional[InterceptData]:
    """Intercept data if p(0, mu) has deg p distinct real roots, else
    None (a coordinate change is needed)."""
    d = int(p.degree())
    g = _axis_poly(p)
    if g.degree() != d:
        return None
    counts = count_real_roots(g)
    if not (counts.distinct_real == d and counts.real_with_multiplicity == d):
        return None
    roots: List[Fraction] = []
    flags: List[bool] = []
    for iv in isolate_real_roots(g, _INTERCEPT_RESOLUTION):
        c, is_exact = _snap_root(g, iv.low, iv.high, iv.midpoint())
        roots.append(c)
        flags.append(is_exact)
    # inner intercepts first, positive before negative on ties; this
    # fixes the representation among the diag-permutation equivalents
    order = sorted(range(d), key=lambda i: (abs(roots[i]), roots[i] < 0))
    roots = [roots[i] for i in order]
    flags = [flags[i] for i in order]
    p1 = p.partial_derivative(1)
    p2 = p.partial_derivative(2)
    slopes: List[Fraction] = []
    for c in roots:
        at = (Fraction(0), c)
        denom = p2.evaluate(at)
        if denom == 0:
            # cannot happen at a simple root of p(0, mu) when c is
            # exact; approximate roots sit close enough that the
            # derivative stays away from zero, but guard anyway
            return None
        slopes.append(-p1.evaluate(at) / denom)
    return InterceptData(tuple(roots), tuple(slopes), tuple(flags))


def _random_change(rng: random.Random) -> Matrix2:
    while True:
        r = [[Fraction(rng.randint(-6, 6), rng.randint(1, 3))
              for _ in range(2)] for _ in range(2)]
        if r[0][0] * r[1][1] - r[0][1] * r[1][0] != 0:
            return ((r[0][0], r[0][1]), (r[1][0], r[1][1]))


def _apply_change(p: Polynomial, change: Matrix2) -> Polynomial:
    """p(R y) expanded in the new coordinates y."""
    y1 = Polynomial.variable(1, 2)
    y2 = Polynomial.variable(2, 2)
    images = [y1 * change[0][0] + y2 * change[0][1],
              y1 * change[1][0] + y2 * change[1][1]]
    out = Polynomial.zero(2)
    for expo, coeff in p.sorted_terms():
        term = Polynomial.constant(coeff, 2)
        for var_index, e in enumerate(expo):
            for _ in range(e):
                term = term * images[var_index]
        out = out + term
    return out


def _invert_change(change: Matrix2) -> Matrix2:
    (a, b), (c, d) = change
    det = a * d - b * c
    return ((d / det, -b / det), (-c / det, a / det))


def intercept_normalize(p: Polynomial, seed: int = 0
                        ) -> Tuple[Polynomial, InterceptData, Optional[Matrix2]]:
    """Arrange d distinct real intercepts on the x2 axis.

    Returns p unchanged when its axis restriction already has full
    degree and distinct real roots; otherwise retries seeded rational
    linear coordinate changes x = R y until the transformed polynomial
    qualifies.  Inputs that fail the line test tend to exhaust the
    retry budget, since no direction meets the curve fully.
    """
    if p.num_vars != 2:
        raise DimensionMismatch("intercept normalization is two-variable only")
    if p.evaluate((Fraction(0), Fraction(0))) <= 0:
        raise BasePointError("p(0,0) must be positive")
    data = _intercepts(p)
    if data is not None:
        return p, data, None
    rng = random.Random(seed)
    for _ in range(_CHANGE_TRIES):
        change = _random_change(rng)
        q = _apply_change(p, change)
        data = _intercepts(q)
        if data is not None:
            return q, data, change
    raise ConstructionError(
        f"no coordinate change out of {_CHANGE_TRIES} seeded tries gave "
        f"{int(p.degree())} distinct real axis intercepts; the region is "
        f"likely not rigidly convex or the curve is highly degenerate")


def fixed_part(data: InterceptData
               ) -> Tuple[SymmetricMatrix, Tuple[Fraction, ...]]:
    """The pinned-down pencil entries: L2 and the diagonal of L1."""
    if any(c == 0 for c in data.roots):
        raise ConstructionError("axis intercept at the origin; renormalize")
    l2 = SymmetricMatrix.diagonal([-1 / c for c in data.roots])
    diag1 = tuple(s / c for s, c in zip(data.slopes, data.roots))
    return l2, diag1


# -- coefficient matching ------------------------------------------------------


def _target_polynomial(p: Polynomial) -> Polynomial:
    return p * (1 / p.evaluate((Fraction(0), Fraction(0))))


def _pencil_from_entries(l2: SymmetricMatrix, diag1: Sequence[Fraction],
                         off: Sequence[Fraction]) -> LinearPencil:
    d = l2.size
    rows = [[Fraction(0)] * d for _ in range(d)]
    for i, a in enumerate(diag1):
        rows[i][i] = a
    k = 0
    for i in range(d):
        for j in range(i + 1, d):
            rows[i][j] = rows[j][i] = Fraction(off[k])
            k += 1
    l1 = SymmetricMatrix(rows)
    return LinearPencil([SymmetricMatrix.identity(d), l1, l2])


def _coefficient_residual(pencil: LinearPencil, target: Polynomial
                          ) -> Tuple[float, Optional[Tuple[int, ...]]]:
    diff = determinant_polynomial(pencil) - target
    worst = 0.0
    worst_mono: Optional[Tuple[int, ...]] = None
    for expo, coeff in diff.sorted_terms():
        dev = abs(float(coeff))
        if dev > worst:
            worst, worst_mono = dev, expo
    return worst, worst_mono


def _grid(d: int) -> List[Tuple[Fraction, Fraction]]:
    # (d+1)^2 points determine a bidegree-(d,d) polynomial, so zero
    # grid residual means exact coefficient agreement; offsets dodge
    # symmetric root patterns
    ts = [Fraction(-45, 100) + Fraction(90, 100) * k / d + Fraction(371, 10000)
          for k in range(d + 1)]
    return [(a, b) for a in ts for b in ts]


def _lm_minimize(residual_fn, jacobian_fn, u0: np.ndarray,
                 iterations: int = 80) -> np.ndarray:
    u = u0.astype(float).copy()
    r = residual_fn(u)
    lam = 1e-3
    n = len(u)
    for _ in range(iterations):
        if np.max(np.abs(r)) < 1e-15:
            break
        jac = jacobian_fn(u)
        grad = jac.T @ r
        hess = jac.T @ jac
        improved = False
        for _ in range(10):
            try:
                step = np.linalg.solve(hess + lam * np.eye(n), -grad)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            cand = u + step
            r_cand = residual_fn(cand)
            if np.linalg.norm(r_cand) < np.linalg.norm(r):
                u, r = cand, r_cand
                lam = max(lam * 0.3, 1e-14)
                improved = True
                break
            lam *= 10
        if not improved:
            break
    return u


def match_offdiagonal(p: Polynomial,
                      fixed: Tuple[SymmetricMatrix, Tuple[Fraction, ...]],
                      tol: float = 1e-9, seed: int = 0
                      ) -> RepresentationResult:
    """Solve for the off-diagonal of L1 so the pencil determinant
    matches p / p(0,0).

    Damped Newton least squares on a value grid, multi-start (all-zero
    plus 16 seeded random starts); the winner is re-checked by exact
    rational determinant expansion, and entries near simple fractions
    are promoted to exact values when the exact determinant then
    agrees identically.
    """
    l2, diag1 = fixed
    d = l2.size
    if int(p.degree()) != d:
        raise DimensionMismatch("fixed part size differs from degree")
    if d > _MATCH_DEGREE_CAP:
        raise ConstructionError(
            f"coefficient matching is capped at degree {_MATCH_DEGREE_CAP}; "
            f"supply a factorization for larger inputs")
    target = _target_polynomial(p)
    n_unknowns = d * (d - 1) // 2
    if n_unknowns == 0:
        pencil = _pencil_from_entries(l2, diag1, [])
        residual, worst = _coefficient_residual(pencil, target)
        outcome = verify_representation(p, pencil, tol)
        return RepresentationResult(pencil, residual, CLOSED_FORM, None,
                                    outcome)

    points = _grid(d)
    tvals = np.array([float(target.evaluate(pt)) for pt in points])
    avals = np.array([float(a) for a, _ in points])
    bvals = np.array([float(b) for _, b in points])
    l2diag = np.array([float(l2[i, i]) for i in range(d)])
    diag1f = np.array([float(v) for v in diag1])
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]

    def build(u: np.ndarray) -> np.ndarray:
        m = np.zeros((len(points), d, d))
        m[:, range(d), range(d)] = (1.0 + np.outer(avals, diag1f)
                                    + np.outer(bvals, l2diag))
        for k, (i, j) in enumerate(pairs):
            m[:, i, j] = m[:, j, i] = avals * u[k]
        return m

    def residual_fn(u: np.ndarray) -> np.ndarray:
        return np.linalg.det(build(u)) - tvals

    def jacobian_fn(u: np.ndarray) -> np.ndarray:
        m = build(u)
        dets = np.linalg.det(m)
        jac = np.empty((len(points), n_unknowns))
        try:
            inv = np.linalg.inv(m)
            for k, (i, j) in enumerate(pairs):
                jac[:, k] = 2.0 * avals * dets * inv[:, i, j]
        except np.linalg.LinAlgError:
            # a grid point landed on the determinantal curve; finite
            # differences sidestep the singular inverse
            base = residual_fn(u)
            h = 1e-7
            for k in range(n_unknowns):
                step = u.copy()
                step[k] += h
                jac[:, k] = (residual_fn(step) - base) / h
        return jac

    rng = np.random.default_rng(seed)
    starts = [np.zeros(n_unknowns)]
    starts += [rng.normal(0.0, 0.4 + 0.2 * s, n_unknowns) for s in range(16)]
    best_residual = float("inf")
    best_worst: Optional[Tuple[int, ...]] = None
    best_pencil: Optional[LinearPencil] = None
    for u0 in starts:
        u = _lm_minimize(residual_fn, jacobian_fn, u0)
        if np.max(np.abs(residual_fn(u))) > max(tol, 1e-6):
            continue
        pencil = _pencil_from_entries(l2, diag1,
                                      [Fraction(float(v)) for v in u])
        residual, worst = _coefficient_residual(pencil, target)
        if residual < best_residual:
            best_residual, best_worst, best_pencil = residual, worst, pencil
            if residual <= tol * 1e-2:
                break
    if best_pencil is None or best_residual > tol:
        raise ConstructionError(
            "no start of the off-diagonal solve reached the tolerance; "
            "retry with a different coordinate change or seed",
            residual=None if best_pencil is None else best_residual)
    best_pencil = _try_promote(best_pencil, target) or best_pencil
    residual, worst = _coefficient_residual(best_pencil, target)
    outcome = verify_representation(p, best_pencil, tol)
    return RepresentationResult(best_pencil, residual, COEFFICIENT_MATCHING,
                                None, outcome)


def _try_promote(pencil: LinearPencil, target: Polynomial
                 ) -> Optional[LinearPencil]:
    """Continued-fraction round the L1 entries and keep the result if
    the exact determinant then matches the target identically."""
    l1 = pencil.matrices[1]
    d = l1.size
    for dmax in (1, 2, 3, 4, 6, 8, 12, 16, 60, 1000):
        rows = [[l1[i, j].limit_denominator(dmax) for j in range(d)]
                for i in range(d)]
        cand = LinearPencil([pencil.matrices[0], SymmetricMatrix(rows),
                             pencil.matrices[2]])
        if determinant_polynomial(cand) == target:
            return cand
    return None


# -- top-level construction ----------------------------------------------------


def _degree_one(p: Polynomial) -> LinearPencil:
    p0 = p.evaluate((Fraction(0), Fraction(0)))
    a1 = p.coefficient((1, 0)) / p0
    a2 = p.coefficient((0, 1)) / p0
    return LinearPencil([SymmetricMatrix.identity(1),
                         SymmetricMatrix([[a1]]),
                         SymmetricMatrix([[a2]])])


def _sqrt_fraction(value: Fraction) -> Tuple[Fraction, bool]:
    """Square root, exact when the value is a rational square, else a
    rational approximation good to ~2^-64."""
    num, den = value.numerator, value.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd), True
    approx = isqrt((num << 128) // den)
    return Fraction(approx, 1 << 64), False


def _degree_two(p: Polynomial, data: InterceptData, tol: float
                ) -> LinearPencil:
    l2, diag1 = fixed_part(data)
    target = _target_polynomial(p)
    # det = (1 + a1 x1 + b1 x2)(1 + a2 x1 + b2 x2) - l^2 x1^2, so the
    # x1^2 coefficient pins the single unknown
    l_squared = diag1[0] * diag1[1] - target.coefficient((2, 0))
    if l_squared < 0:
        raise ConstructionError(
            "off-diagonal closed form needs a nonnegative square; the "
            "input is likely not rigidly convex")
    l_value, _ = _sqrt_fraction(l_squared)
    return _pencil_from_entries(l2, diag1, [l_value])


def _undo_change(pencil: LinearPencil, change: Matrix2) -> LinearPencil:
    inv = _invert_change(change)
    b1, b2 = pencil.matrices[1], pencil.matrices[2]
    l1 = b1.scale(inv[0][0]) + b2.scale(inv[1][0])
    l2 = b1.scale(inv[0][1]) + b2.scale(inv[1][1])
    return LinearPencil([pencil.matrices[0], l1, l2])


def represent(p: Polynomial, tol: float = 1e-9,
              factors: Optional[Sequence[Polynomial]] = None,
              seed: int = 0,
              sampler: Optional[RaySampler] = None) -> RepresentationResult:
    """Monic pencil representation of the region of p around the origin.

    Dispatch: degree up to 1 in closed form; a supplied factorization
    as a direct sum of per-factor pencils; degree 2 by the one-unknown
    closed form; degrees 3 to 6 by coefficient matching.  Inputs
    failing the line test are rejected with the witness; all outputs
    are verified before being returned.
    """
    if p.num_vars != 2:
        raise DimensionMismatch("construction is two-variable only")
    origin = (Fraction(0), Fraction(0))
    if p.evaluate(origin) <= 0:
        raise BasePointError("p(0,0) must be positive")
    verdict = rz_check(p, origin, sampler)
    if verdict.certified_not_rz():
        direction, counts = verdict.witness
        raise CertifiedNotRZError(
            f"not a real-zero polynomial: direction "
            f"{tuple(str(c) for c in direction)} has only "
            f"{counts.real_with_multiplicity} real of {counts.total_degree} "
            f"roots", verdict=verdict)

    if factors is not None:
        product = Polynomial.constant(1, 2)
        for f in factors:
            product = product * f
        if product != p:
            raise ConstructionError("supplied factors do not multiply to p")
        parts = [represent(f, tol=tol, seed=seed, sampler=sampler)
                 for f in factors]
        pencil = direct_sum([part.pencil for part in parts])
        outcome = verify_representation(p, pencil, tol)
        if outcome.kind == MISMATCH:
            raise ConstructionError("direct sum failed verification",
                                    residual=outcome.worst_deviation)
        residual = outcome.residual or 0.0
        return RepresentationResult(pencil, residual, DIRECT_SUM, None,
                                    outcome)

    d = int(p.degree())
    if d == 0:
        one = SymmetricMatrix.identity(1)
        zero = SymmetricMatrix.zero(1)
        pencil = LinearPencil([one, zero, zero])
        return RepresentationResult(pencil, 0.0, CLOSED_FORM, None,
                                    verify_representation(p, pencil, tol))
    if d == 1:
        pencil = _degree_one(p)
        return RepresentationResult(pencil, 0.0, CLOSED_FORM, None,
                                    verify_representation(p, pencil, tol))
    if d > _MATCH_DEGREE_CAP:
        raise ConstructionError(
            f"degree {d} exceeds the matching cap {_MATCH_DEGREE_CAP}; "
            f"supply a factorization")

    q, data, change = intercept_normalize(p, seed=seed)
    if d == 2:
        pencil = _degree_two(q, data, tol)
        method = CLOSED_FORM
    else:
        matched = match_offdiagonal(q, fixed_part(data), tol=tol, seed=seed)
        pencil, method = matched.pencil, matched.method
    if change is not None:
        pencil = _undo_change(pencil, change)
    outcome = verify_representation(p, pencil, tol)
    if outcome.kind == MISMATCH:
        raise ConstructionError(
            "representation failed final verification",
            residual=outcome.worst_deviation)
    residual = 0.0 if outcome.kind == EXACT_MATCH else (outcome.residual or 0.0)
    return RepresentationResult(pencil, residual, method, change, outcome)


# -- verification --------------------------------------------------------------


def _membership_spot_check(p: Polynomial, pencil: LinearPencil,
                           exact: bool, band: float) -> Tuple[bool, int]:
    """Interior points of the pencil must have p > 0 (up to the band
    for approximate matches); boundary points must have p = 0."""
    rng = random.Random(987654321)
    for checked in range(100):
        pt = tuple(Fraction(rng.randint(-8, 8), rng.randint(1, 4))
                   for _ in range(p.num_vars))
        kind = membership(pencil, pt)
        value = p.evaluate(pt)
        if kind is Membership.INTERIOR:
            ok = value > 0 if exact else float(value) > -band
        elif kind is Membership.BOUNDARY:
            ok = value == 0 if exact else abs(float(value)) <= band
        else:
            ok = True
        if not ok:
            return False, checked + 1
    return True, 100


def verify_representation(p: Polynomial, pencil: LinearPencil,
                          tol: float = 1e-9) -> VerifyOutcome:
    """Compare det(pencil) with p.

    ExactMatch when the determinant is a positive rational multiple of
    p coefficient for coefficient; ApproxMatch when, after scaling by
    det(0)/p(0), every coefficient agrees within tol; Mismatch
    otherwise.  Membership of seeded sample points is spot-checked for
    sign agreement on the non-mismatch paths.
    """
    if pencil.num_vars != p.num_vars:
        raise DimensionMismatch("pencil and polynomial dimensions differ")
    det = determinant_polynomial(pencil)
    terms = p.sorted_terms()
    if not terms:
        return VerifyOutcome(MISMATCH, None, None, None, None, 0)
    lead_expo, lead_coeff = terms[-1]
    constant = det.coefficient(lead_expo) / lead_coeff
    if constant > 0 and det == p * constant:
        ok, points = _membership_spot_check(p, pencil, exact=True, band=0.0)
        if not ok:
            return VerifyOutcome(MISMATCH, None, None, None, None, points)
        return VerifyOutcome(EXACT_MATCH, constant, None, None, None, points)

    origin = tuple(Fraction(0) for _ in range(p.num_vars))
    det0, p0 = det.evaluate(origin), p.evaluate(origin)
    if p0 == 0 or det0 == 0 or det0 / p0 <= 0:
        return VerifyOutcome(MISMATCH, None, None, None, None, 0)
    scale = det0 / p0
    diff = det - p * scale
    worst, worst_mono = 0.0, None
    for expo, coeff in diff.sorted_terms():
        dev = abs(float(coeff))
        if dev > worst:
            worst, worst_mono = dev, expo
    if worst <= tol:
        # |diff| at the sample points is at most the coefficient bound
        # times the monomial mass on the sampling box [-8, 8]^2
        grow = 17.0 ** max(int(p.degree()), 1)
        band = worst * grow / float(scale) if worst else 0.0
        ok, points = _membership_spot_check(p, pencil, exact=False, band=band)
        if not ok:
            return VerifyOutcome(MISMATCH, None, worst, worst_mono, worst,
                                 points)
        return VerifyOutcome(APPROX_MATCH, None, worst, None, None, points)
    return VerifyOutcome(MISMATCH, None, worst, worst_mono, worst, 0)
