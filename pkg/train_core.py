#!/usr/bin/env python3
"""
Certified Nearest-Integer Machinery
Floor, ceiling, nearest integer, fractional part and distance to the nearest
integer for q*alpha, plus TRAIN(alpha, q) = [q*alpha]/q. Every result is
certified by refining alpha enclosures until the answer cannot change.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from alpha_oracle import (
    MAX_REFINEMENT_ROUNDS,
    AlphaSpec,
    PrecisionExhausted,
    RationalInterval,
    Ratio,
    refining_enclosures,
)

logger = logging.getLogger(__name__)

# Width of the ||q*alpha|| enclosure handed out by certify_nearest
DEFAULT_DIST_WIDTH = Fraction(1, 10 ** 12)

HALF = Fraction(1, 2)

# (q, p, weight) describes the quantity weight * |q*alpha - p|
WeightedOffset = Tuple[int, int, Fraction]


@dataclass(frozen=True)
class NearestResult:
    """Certified facts about q*alpha."""
    q: int
    floor_qa: int
    nearest_qa: int
    dist: RationalInterval
    sign: int

    @property
    def sign_symbol(self) -> str:
        """'+' for an underestimate of alpha, '-' for an overestimate."""
        return '+' if self.sign > 0 else '-'


def _check_q(q: int) -> None:
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")


def certify_floor(alpha: AlphaSpec, q: int) -> int:
    """Return m with m < q*alpha < m + 1."""
    _check_q(q)
    for box in refining_enclosures(alpha, Fraction(1, 4 * q), q=q):
        m = box.scale(q).certified_floor()
        if m is not None:
            return m


def certify_ceil(alpha: AlphaSpec, q: int) -> int:
    # q*alpha is never an integer
    return certify_floor(alpha, q) + 1


def signed_offset_enclosure(alpha: AlphaSpec, q: int, p: int,
                            eps: Fraction) -> Tuple[int, RationalInterval]:
    """
    Sign of q*alpha - p and an enclosure of |q*alpha - p| of width < eps.
    """
    _check_q(q)
    eps = Fraction(eps)
    for box in refining_enclosures(alpha, eps / q, q=q):
        offset = box.scale(q).shift(-p)
        sign = offset.certified_sign()
        if sign is not None and offset.width < eps:
            return sign, (offset if sign > 0 else offset.negate())


def offset_enclosure(alpha: AlphaSpec, q: int, p: int, eps: Fraction) -> RationalInterval:
    return signed_offset_enclosure(alpha, q, p, eps)[1]


def fractional_part(alpha: AlphaSpec, q: int, eps: Fraction) -> RationalInterval:
    """Enclosure of {q*alpha} = q*alpha - floor(q*alpha) of width < eps."""
    return offset_enclosure(alpha, q, certify_floor(alpha, q), eps)


def certify_nearest(alpha: AlphaSpec, q: int,
                    dist_width: Fraction = DEFAULT_DIST_WIDTH) -> NearestResult:
    """
    Return the unique r = [q*alpha] with |q*alpha - r| < 1/2, an enclosure of
    ||q*alpha|| of width <= dist_width lying inside (0, 1/2), and the sign of
    q*alpha - r.
    """
    _check_q(q)
    nearest = None
    for box in refining_enclosures(alpha, Fraction(1, 4 * q), q=q):
        nearest = box.scale(q).certified_nearest()
        if nearest is not None:
            break

    width = Fraction(dist_width)
    for _ in range(MAX_REFINEMENT_ROUNDS):
        sign, dist = signed_offset_enclosure(alpha, q, nearest, width)
        # Keep the enclosure clear of 1/2 as well
        if dist.hi < HALF:
            break
        width /= 2
    else:
        raise PrecisionExhausted(f"{alpha.describe()}: ||q*alpha|| not separated from 1/2", q)

    floor_qa = nearest if sign > 0 else nearest - 1
    return NearestResult(q=q, floor_qa=floor_qa, nearest_qa=nearest, dist=dist, sign=sign)


def train(alpha: AlphaSpec, q: int) -> Tuple[Ratio, Ratio]:
    """TRAIN(alpha, q): the raw fraction [q*alpha]/q and its reduction."""
    result = certify_nearest(alpha, q)
    raw = Ratio(result.nearest_qa, q)
    return raw, raw.reduced()


def weighted_offset_enclosure(alpha: AlphaSpec, offset: WeightedOffset,
                              eps: Fraction) -> RationalInterval:
    q, p, weight = offset
    return offset_enclosure(alpha, q, p, Fraction(eps) / weight).scale(weight)


def _same_quantity(first: WeightedOffset, second: WeightedOffset) -> bool:
    """True when both describe the same |linear form in alpha|, for every alpha."""
    q1, p1, w1 = first
    q2, p2, w2 = second
    return (w1 * q1, w1 * p1) in ((w2 * q2, w2 * p2), (-w2 * q2, -w2 * p2))


def compare_weighted_offsets(alpha: AlphaSpec, first: WeightedOffset, second: WeightedOffset,
                             first_box: Optional[RationalInterval] = None,
                             second_box: Optional[RationalInterval] = None) -> int:
    """
    Certified three-way comparison of w1*|q1*alpha - p1| and w2*|q2*alpha - p2|.

    Equality is returned only when the two quantities are the same linear form
    (a fraction and one of its integer multiples); for irrational alpha any
    other pair differs, so refinement always separates them. Optional cached
    enclosures are tried first.
    """
    if _same_quantity(first, second):
        return 0

    if first_box is not None and second_box is not None:
        if first_box.hi <= second_box.lo:
            return -1
        if second_box.hi <= first_box.lo:
            return 1
        eps = min(first_box.width, second_box.width) / 2
    else:
        eps = Fraction(1, 2 ** 20)

    for _ in range(MAX_REFINEMENT_ROUNDS):
        a = weighted_offset_enclosure(alpha, first, eps)
        b = weighted_offset_enclosure(alpha, second, eps)
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        eps /= 2
    raise PrecisionExhausted(f"{alpha.describe()}: comparison of {first} and {second} unresolved")


def weighted_offset_below(alpha: AlphaSpec, offset: WeightedOffset, bound: Fraction,
                          box: Optional[RationalInterval] = None) -> bool:
    """Certified test of w*|q*alpha - p| < bound for a rational bound."""
    bound = Fraction(bound)
    eps = box.width if box is not None else Fraction(1, 2 ** 20)
    for _ in range(MAX_REFINEMENT_ROUNDS):
        if box is not None:
            if box.hi <= bound:
                return True
            if box.lo >= bound:
                return False
        eps /= 2
        box = weighted_offset_enclosure(alpha, offset, eps)
    raise PrecisionExhausted(f"{alpha.describe()}: comparison with {bound} unresolved", offset[0])
