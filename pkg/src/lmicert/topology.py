"""Nested-ovaloid profiles of rigidly convex plane curves.

For a two-variable polynomial of degree d whose region contains the
base point, every line through the base point meets the curve in d
points counted with multiplicity and at infinity.  The real points
split by the sign of the line parameter: k crossings on each side bound
k nested ovals, and odd degree contributes one extra crossing (a curve
branch that behaves like a line), possibly at infinity.  Nesting is
read off 1-D root orderings only; no curve tracing is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import CertifiedNotRZError, DimensionMismatch
from .poly import Polynomial
from .realroots import count_real_roots, isolate_real_roots, side_counts
from .rzcheck import Direction, RaySampler, RZVerdict, RayRecord, \
    CERTIFIED_NOT_RZ, _checked_base

__all__ = ["RayProfile", "OvalProfile", "oval_profile",
           "nesting_consistency_report"]


@dataclass(frozen=True)
class RayProfile:
    direction: Direction
    # (parameter, multiplicity) pairs sorted by parameter; parameters
    # are exact when the root is exactly representable, else interval
    # midpoints at the working resolution
    parameters: Tuple[Tuple[Fraction, int], ...]
    negative_count: int          # roots below 0, with multiplicity
    positive_count: int          # roots above 0, with multiplicity
    at_infinity: int
    # (ovals, pseudo_line) this ray supports, None if the split fits
    # no nested-oval picture
    vote: Optional[Tuple[int, bool]]
    has_multiple_root: bool


@dataclass(frozen=True)
class OvalProfile:
    degree: int
    ovals: int
    pseudo_line: bool
    rays: Tuple[RayProfile, ...]
    consistent: bool


def _ray_vote(neg: int, pos: int, at_inf: int) -> Optional[Tuple[int, bool]]:
    if at_inf == 0:
        if neg == pos:
            return (pos, False)
        if abs(neg - pos) == 1:
            return (min(neg, pos), True)
        return None
    if at_inf == 1 and neg == pos:
        return (pos, True)
    return None


def oval_profile(p: Polynomial, x0: Sequence,
                 sampler: Optional[RaySampler] = None,
                 resolution: Fraction = Fraction(1, 2 ** 20)) -> OvalProfile:
    """Scan lines through x0 and classify the region's oval structure.

    The line test is re-verified on the fly: a ray whose restriction
    has nonreal roots aborts the scan with the witness.  The default
    sampler pins both axis directions so degree drops along them are
    always observed.
    """
    if p.num_vars != 2:
        raise DimensionMismatch("oval profiles are two-variable only")
    x = _checked_base(p, x0)
    if sampler is None:
        sampler = RaySampler(2, extra_directions=((1, 0), (0, 1)))
    if sampler.num_vars != 2:
        raise DimensionMismatch("sampler dimension differs from polynomial")
    d = int(p.degree())
    rays: List[RayProfile] = []
    for v in sampler.directions():
        f = p.restrict(x, v)
        counts = count_real_roots(f)
        deg_f = counts.total_degree
        if counts.real_with_multiplicity != deg_f:
            raise CertifiedNotRZError(
                f"not rigidly convex at the base point: direction "
                f"{tuple(str(c) for c in v)} meets the curve in only "
                f"{counts.real_with_multiplicity} of {deg_f} affine points",
                verdict=RZVerdict(CERTIFIED_NOT_RZ, (v, counts),
                                  len(rays) + 1, sampler.seed,
                                  (RayRecord(v, deg_f, counts.distinct_real,
                                             counts.real_with_multiplicity,
                                             d - deg_f, False),)))
        neg, pos = side_counts(f) if deg_f > 0 else (0, 0)
        intervals = isolate_real_roots(f, resolution) if deg_f > 0 else []
        params = tuple((iv.midpoint(), iv.multiplicity) for iv in intervals)
        rays.append(RayProfile(
            direction=v,
            parameters=params,
            negative_count=neg,
            positive_count=pos,
            at_infinity=d - deg_f,
            vote=_ray_vote(neg, pos, d - deg_f),
            has_multiple_root=any(m > 1 for _, m in params),
        ))
    votes = {r.vote for r in rays}
    consistent = len(votes) == 1 and None not in votes
    if consistent:
        ovals, pseudo_line = votes.pop()
    else:
        # majority vote among rays that fit the picture at all
        tally: dict = {}
        for r in rays:
            if r.vote is not None:
                tally[r.vote] = tally.get(r.vote, 0) + 1
        if tally:
            ovals, pseudo_line = max(tally, key=lambda k: (tally[k], k))
        else:
            ovals, pseudo_line = 0, False
    return OvalProfile(d, ovals, pseudo_line, tuple(rays), consistent)


def nesting_consistency_report(profile: OvalProfile) -> List[RayProfile]:
    """Rays worth a second look: multiple roots (curve singular along
    the ray) or a side split disagreeing with the profile's oval count."""
    expected = (profile.ovals, profile.pseudo_line)
    return [r for r in profile.rays
            if r.has_multiple_root or r.vote != expected]
