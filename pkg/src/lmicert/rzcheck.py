"""Line-test certification of the real-zero property and rigid convexity.

A polynomial p with p(x0) > 0 passes the line test along a direction v
when the restriction f(mu) = p(x0 + mu v) has only real roots, counted
with multiplicity; a drop deg f < deg p is counted as deg p - deg f
intersections at infinity and is permitted.  Failing rays are exact,
unconditional certificates (the restriction provably has nonreal roots);
passing every sampled ray yields only a "ProbablyRZ" verdict, since no
finite ray family covers all lines.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, pi, tan
from typing import List, Optional, Sequence, Tuple

from .errors import BasePointError, DimensionMismatch, ZeroPolynomialError
from .poly import Polynomial, UnivariatePolynomial, as_point
from .realroots import RootCount, count_real_roots, isolate_real_roots

Direction = Tuple[Fraction, ...]

CERTIFIED_NOT_RZ = "CertifiedNotRZ"
PROBABLY_RZ = "ProbablyRZ"

# denominator grid for rationalizing tan(theta/2) of deterministic rays
_TAN_DENOM = 2 ** 16


@dataclass(frozen=True)
class RaySampler:
    """Seeded family of exact rational directions through a base point.

    For two variables: deterministic_count rays realize the angles
    j*pi/K (half-turn coverage, one per line) through a tan half-angle
    rationalization, followed by random_count seeded random rational
    directions.  Other dimensions have no natural angle grid, so all
    deterministic_count + random_count rays are seeded random there.
    extra_directions are normalized and scanned first.
    """
    num_vars: int
    deterministic_count: int = 181
    random_count: int = 64
    seed: int = 0
    extra_directions: Tuple[Tuple[int, ...], ...] = ()

    def directions(self) -> List[Direction]:
        if self.num_vars < 1:
            raise DimensionMismatch("sampler needs num_vars >= 1")
        if self.deterministic_count < 1:
            raise ValueError("deterministic_count must be >= 1")
        out: List[Direction] = []
        rng = random.Random(self.seed)
        for coords in self.extra_directions:
            if len(coords) != self.num_vars:
                raise DimensionMismatch("extra direction has wrong length")
            out.append(_reduce_direction(coords))
        if self.num_vars == 2:
            for j in range(self.deterministic_count):
                out.append(_half_turn_direction(j, self.deterministic_count))
            randoms = self.random_count
        else:
            randoms = self.deterministic_count + self.random_count
        for _ in range(randoms):
            out.append(_random_direction(rng, self.num_vars))
        return list(dict.fromkeys(out))


def _half_turn_direction(j: int, count: int) -> Direction:
    """Rational direction at angle j*pi/count, via the tangent
    half-angle parametrization (1 - t^2, 2t)."""
    half = j * pi / (2 * count)
    t = Fraction(round(tan(half) * _TAN_DENOM), _TAN_DENOM)
    a, b = t.numerator, t.denominator
    return _reduce_direction((b * b - a * a, 2 * a * b))


def _reduce_direction(coords: Sequence[int]) -> Direction:
    g = 0
    for c in coords:
        g = gcd(g, c)
    if g == 0:
        raise DimensionMismatch("zero direction")
    ints = [c // g for c in coords]
    # canonical sign: last nonzero coordinate positive, which keeps the
    # two-variable angle grid in the upper half plane so that boundary
    # scans can trust the orientation
    last = next(c for c in reversed(ints) if c != 0)
    if last < 0:
        ints = [-c for c in ints]
    return tuple(Fraction(c) for c in ints)


def _random_direction(rng: random.Random, m: int) -> Direction:
    while True:
        coords = [Fraction(rng.randint(-64, 64), rng.randint(1, 16))
                  for _ in range(m)]
        if any(coords):
            denom = 1
            for c in coords:
                denom = denom * c.denominator // gcd(denom, c.denominator)
            return _reduce_direction([int(c * denom) for c in coords])


@dataclass(frozen=True)
class RayRecord:
    direction: Direction
    degree: int                 # degree of the restriction
    distinct: int
    with_multiplicity: int
    at_infinity: int            # deg p - deg f
    passed: bool


@dataclass(frozen=True)
class RZVerdict:
    kind: str                   # CERTIFIED_NOT_RZ or PROBABLY_RZ
    witness: Optional[Tuple[Direction, RootCount]]
    rays_checked: int
    seed: int
    per_ray: Tuple[RayRecord, ...]
    # populated by rigid_convexity_check only
    distinct_fraction: Optional[Fraction] = None
    degenerate: Optional[bool] = None

    def certified_not_rz(self) -> bool:
        return self.kind == CERTIFIED_NOT_RZ


def _checked_base(p: Polynomial, x0: Sequence) -> Tuple[Fraction, ...]:
    if p.is_zero():
        raise ZeroPolynomialError("the zero polynomial has no line test")
    x = as_point(x0, p.num_vars)
    value = p.evaluate(x)
    if value <= 0:
        raise BasePointError(
            f"p(x0) = {value} is not positive; the base point must be "
            f"interior to the region")
    return x


def _ray_record(p: Polynomial, x0, v, total_degree: int) -> Tuple[RayRecord, RootCount]:
    f = p.restrict(x0, v)
    # f(0) = p(x0) != 0, so the restriction is never the zero polynomial
    counts = count_real_roots(f)
    deg_f = counts.total_degree
    record = RayRecord(
        direction=v,
        degree=deg_f,
        distinct=counts.distinct_real,
        with_multiplicity=counts.real_with_multiplicity,
        at_infinity=total_degree - deg_f,
        passed=counts.real_with_multiplicity == deg_f,
    )
    return record, counts


def rz_check(p: Polynomial, x0: Sequence,
             sampler: Optional[RaySampler] = None) -> RZVerdict:
    """Certify violation of the shifted real-zero condition at x0, or
    report probable satisfaction.

    The first failing ray (in sampler order) stops the scan and is the
    witness; all roots on it were counted exactly, so the negative
    verdict is unconditional.
    """
    x = _checked_base(p, x0)
    sampler = sampler or RaySampler(p.num_vars)
    if sampler.num_vars != p.num_vars:
        raise DimensionMismatch("sampler dimension differs from polynomial")
    d = int(p.degree())
    per_ray: List[RayRecord] = []
    for v in sampler.directions():
        record, counts = _ray_record(p, x, v, d)
        per_ray.append(record)
        if not record.passed:
            return RZVerdict(CERTIFIED_NOT_RZ, (v, counts), len(per_ray),
                             sampler.seed, tuple(per_ray))
    return RZVerdict(PROBABLY_RZ, None, len(per_ray), sampler.seed,
                     tuple(per_ray))


def rigid_convexity_check(p: Polynomial, x0: Sequence,
                          sampler: Optional[RaySampler] = None) -> RZVerdict:
    """rz_check plus distinct-root statistics.

    A ProbablyRZ verdict in which no ray attains deg p distinct affine
    real roots is flagged degenerate: the input is then likely a
    non-minimal defining polynomial, e.g. a perfect square.
    """
    x = _checked_base(p, x0)
    sampler = sampler or RaySampler(p.num_vars)
    if sampler.num_vars != p.num_vars:
        raise DimensionMismatch("sampler dimension differs from polynomial")
    d = int(p.degree())
    per_ray: List[RayRecord] = []
    all_distinct = 0
    for v in sampler.directions():
        record, counts = _ray_record(p, x, v, d)
        per_ray.append(record)
        if not record.passed:
            return RZVerdict(CERTIFIED_NOT_RZ, (v, counts), len(per_ray),
                             sampler.seed, tuple(per_ray))
        if record.degree == d and record.distinct == d:
            all_distinct += 1
    fraction = Fraction(all_distinct, len(per_ray))
    return RZVerdict(PROBABLY_RZ, None, len(per_ray), sampler.seed,
                     tuple(per_ray), distinct_fraction=fraction,
                     degenerate=(all_distinct == 0))


def hyperbolicity_check(p: Polynomial, x0: Sequence,
                        sampler: Optional[RaySampler] = None) -> RZVerdict:
    """Line test for the homogenization, sampled on the hyperplane at
    infinity.

    For a direction v there, the homogenization restricted to the
    projective line through v and the lifted base point has root
    polynomial equal to the degree-padded coefficient reversal of
    p(x0 + mu v); intersections at infinity of the affine test turn into
    roots at 0 here, so the pass condition is all deg p roots real with
    multiplicity, with nothing left at infinity.  p(x0) may be negative
    (the homogenization is negated); it must be nonzero.
    """
    if p.is_zero():
        raise ZeroPolynomialError("the zero polynomial has no line test")
    x = as_point(x0, p.num_vars)
    value = p.evaluate(x)
    if value == 0:
        raise BasePointError("p(x0) = 0; hyperbolicity needs p(x0) != 0")
    q = p if value > 0 else -p
    sampler = sampler or RaySampler(p.num_vars)
    if sampler.num_vars != p.num_vars:
        raise DimensionMismatch("sampler dimension differs from polynomial")
    d = int(q.degree())
    per_ray: List[RayRecord] = []
    for v in sampler.directions():
        f = q.restrict(x, v)
        rev = _reversal(f, d)
        counts = count_real_roots(rev)
        record = RayRecord(
            direction=v,
            degree=counts.total_degree,
            distinct=counts.distinct_real,
            with_multiplicity=counts.real_with_multiplicity,
            at_infinity=0,
            passed=counts.real_with_multiplicity == d,
        )
        per_ray.append(record)
        if not record.passed:
            return RZVerdict(CERTIFIED_NOT_RZ, (v, counts), len(per_ray),
                             sampler.seed, tuple(per_ray))
    return RZVerdict(PROBABLY_RZ, None, len(per_ray), sampler.seed,
                     tuple(per_ray))


def _reversal(f: UnivariatePolynomial, total_degree: int) -> UnivariatePolynomial:
    """Coefficients reversed after padding to total_degree: the root
    polynomial in the at-infinity chart."""
    coeffs = list(f.coeffs) + [Fraction(0)] * (total_degree + 1 - len(f.coeffs))
    return UnivariatePolynomial(coeffs[::-1])


# -- boundary extraction ------------------------------------------------------


@dataclass(frozen=True)
class BoundarySample:
    angle: float                 # direction angle of the emitted point
    direction: Direction
    parameter: Fraction          # signed mu with x = x0 + mu*direction
    point: Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class BoundaryData:
    samples: Tuple[BoundarySample, ...]   # sorted by angle in [0, 2*pi)
    unbounded_angles: Tuple[float, ...]   # directions with no crossing


def boundary_samples(p: Polynomial, x0: Sequence, rays: int = 181,
                     resolution: Fraction = Fraction(1, 2 ** 20)
                     ) -> BoundaryData:
    """Boundary points of the region component of x0, one per crossing
    of each scan line, for two-variable polynomials.

    Along each of `rays` half-turn-spaced lines the nearest root on each
    side of the base point is a boundary crossing; a side without real
    roots means the region is unbounded in that direction, which is
    recorded rather than raised.
    """
    if p.num_vars != 2:
        raise DimensionMismatch("boundary extraction is two-variable only")
    x = _checked_base(p, x0)
    samples: List[BoundarySample] = []
    unbounded: List[float] = []
    for j in range(rays):
        raw = _half_turn_direction(j, rays)
        # max-norm scaling keeps the ray parameter at geometric scale,
        # so the isolation resolution bounds the point error directly
        mx = max(abs(c) for c in raw)
        v = (raw[0] / mx, raw[1] / mx)
        angle = j * pi / rays
        f = p.restrict(x, v)
        if f.degree() <= 0:
            unbounded.extend((angle, angle + pi))
            continue
        neg, pos = _split_root_sides(f, resolution)
        for side_angle, iv in ((angle, pos[0] if pos else None),
                               (angle + pi, neg[-1] if neg else None)):
            if iv is None:
                unbounded.append(side_angle)
                continue
            mu = iv.midpoint()
            pt = (x[0] + mu * v[0], x[1] + mu * v[1])
            samples.append(BoundarySample(side_angle, v, mu, pt))
    samples.sort(key=lambda s: s.angle)
    return BoundaryData(tuple(samples), tuple(sorted(unbounded)))


def _split_root_sides(f: UnivariatePolynomial, resolution: Fraction):
    """Root intervals split by sign of the root; refined until no
    interval straddles 0 (f(0) != 0, so no root sits at 0)."""
    res = Fraction(resolution)
    while True:
        intervals = isolate_real_roots(f, res)
        if all(iv.low > 0 or iv.high < 0 or iv.low == iv.high
               for iv in intervals):
            break
        res = res / 16
    neg = [iv for iv in intervals if (iv.high < 0 or
                                      (iv.low == iv.high and iv.low < 0))]
    pos = [iv for iv in intervals if (iv.low > 0 or
                                      (iv.low == iv.high and iv.low > 0))]
    return neg, pos
