#!/usr/bin/env python3
"""
Continued Fraction Engine
Regular (RCF) and nearest-integer (NICF) continued fraction expansions with
certified partial quotients, convergents by the standard recurrence, and a
convergent/semiconvergent generator for best approximations of the first kind.

The tail x_k is tracked as an exact rational interval, the image of an alpha
enclosure under the expansion steps; the enclosure is refined whenever a
partial quotient is not yet determined.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Sequence, Tuple

from alpha_oracle import (
    AlphaSpec,
    ApproximationError,
    RationalInterval,
    Ratio,
    refining_enclosures,
)
from train_core import compare_weighted_offsets

logger = logging.getLogger(__name__)


class ExpansionError(ApproximationError):
    """Invalid continued fraction request or a broken recurrence."""
    pass


class CFAlgorithm(Enum):
    RCF = 'rcf'
    NICF = 'nicf'

    @classmethod
    def parse(cls, text: str) -> 'CFAlgorithm':
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ExpansionError(f"Unknown continued fraction algorithm '{text}' (expected rcf or nicf)")


@dataclass(frozen=True)
class PartialQuotient:
    """a_k together with the sign s_k of the reciprocal it sits under (+1 for k = 0)."""
    value: int
    sign: int = 1


@dataclass(frozen=True)
class CFExpansion:
    algorithm: CFAlgorithm
    quotients: Tuple[PartialQuotient, ...]
    convergents: Tuple[Ratio, ...]
    base: RationalInterval
    tails: Tuple[RationalInterval, ...]

    def render_quotients(self) -> str:
        """`a0; s1 a1, s2 a2, ...` with signs written as + or -."""
        head = str(self.quotients[0].value)
        rest = ', '.join(f"{'+' if pq.sign > 0 else '-'}{pq.value}" for pq in self.quotients[1:])
        return f"{head}; {rest}" if rest else head

    @property
    def tail_intervals(self) -> Tuple[RationalInterval, ...]:
        """Certified enclosures of the tails x_0, x_1, ... the quotients were read from."""
        return self.tails


def _quotients_from_box(box: RationalInterval, terms: int,
                        algorithm: CFAlgorithm) -> Tuple[List[PartialQuotient], List[RationalInterval]]:
    """Run the expansion on one enclosure; stops early where it becomes ambiguous."""
    quotients: List[PartialQuotient] = []
    tails: List[RationalInterval] = []
    tail = box
    sign = 1
    while len(quotients) < terms:
        if algorithm is CFAlgorithm.RCF:
            a = tail.certified_floor()
        else:
            a = tail.certified_nearest()
        if a is None:
            break
        quotients.append(PartialQuotient(a, sign))
        tails.append(tail)
        if len(quotients) == terms:
            break

        remainder = tail.shift(-a)
        sign = remainder.certified_sign()
        if sign is None:
            break
        if sign < 0:
            remainder = remainder.negate()
        if remainder.lo == 0:
            break
        tail = remainder.reciprocal()
    return quotients, tails


def _expand(alpha: AlphaSpec, terms: int, algorithm: CFAlgorithm) -> CFExpansion:
    if terms < 1:
        raise ExpansionError(f"terms must be >= 1, got {terms}")

    for box in refining_enclosures(alpha, Fraction(1, 4), squaring=True):
        quotients, tails = _quotients_from_box(box, terms, algorithm)
        if len(quotients) == terms:
            return CFExpansion(algorithm=algorithm, quotients=tuple(quotients),
                               convergents=tuple(convergents_of(quotients)),
                               base=box, tails=tuple(tails))
        logger.debug(f"{alpha.describe()} {algorithm.value}: {len(quotients)}/{terms} quotients certified, refining")


def rcf_expand(alpha: AlphaSpec, terms: int) -> CFExpansion:
    """Regular continued fraction: a_0 = floor(alpha), x <- 1/{x}."""
    return _expand(alpha, terms, CFAlgorithm.RCF)


def nicf_expand(alpha: AlphaSpec, terms: int) -> CFExpansion:
    """Nearest-integer continued fraction: a_k = [x_k], x_{k+1} = 1/|x_k - a_k|, s_{k+1} = sign(x_k - a_k)."""
    return _expand(alpha, terms, CFAlgorithm.NICF)


def convergents_of(quotients: Sequence[PartialQuotient]) -> List[Ratio]:
    """
    p_k = a_k*p_{k-1} + s_k*p_{k-2}, q_k likewise, seeded with
    p_{-1} = 1, q_{-1} = 0, p_0 = a_0, q_0 = 1.
    """
    if not quotients:
        raise ExpansionError("Cannot build convergents of an empty expansion")

    result = []
    p_prev, q_prev = 1, 0
    p, q = quotients[0].value, 1
    result.append(Ratio(p, q))
    for pq in quotients[1:]:
        p, p_prev = pq.value * p + pq.sign * p_prev, p
        q, q_prev = pq.value * q + pq.sign * q_prev, q
        if q < 1 or math.gcd(p, q) != 1:
            raise ExpansionError(f"Recurrence produced a non-reduced convergent {p}/{q}")
        result.append(Ratio(p, q))
    return result


def convergents(expansion: CFExpansion) -> List[Ratio]:
    return convergents_of(expansion.quotients)


def reconstruct_base(expansion: CFExpansion) -> RationalInterval:
    """Map the deepest tail interval back through the steps to an alpha enclosure."""
    quotients = expansion.quotients
    value = expansion.tails[-1]
    for k in range(len(quotients) - 1, 0, -1):
        value = value.reciprocal().scale(quotients[k].sign).shift(quotients[k - 1].value)
    return value


def expansion_up_to(alpha: AlphaSpec, N: int, algorithm: CFAlgorithm = CFAlgorithm.RCF) -> CFExpansion:
    """An expansion long enough that its last convergent passes denominator N."""
    if N < 1:
        raise ExpansionError(f"Denominator bound N must be >= 1, got {N}")
    terms = 8
    while True:
        expansion = _expand(alpha, terms, algorithm)
        if expansion.convergents[-1].q > N:
            return expansion
        terms *= 2


def rcf_up_to(alpha: AlphaSpec, N: int) -> CFExpansion:
    return expansion_up_to(alpha, N, CFAlgorithm.RCF)


def best_convergents(expansion: CFExpansion, N: int) -> List[Ratio]:
    """
    Convergents with q <= N, dropping p_0/q_0 when q_1 = 1 (a_1 = 1): that
    convergent shares denominator 1 with the better fraction p_1/1.
    """
    fractions = [c for c in expansion.convergents if c.q <= N]
    if len(expansion.convergents) > 1 and expansion.convergents[1].q == 1:
        fractions = fractions[1:]
    return fractions


def rcf_convergents_up_to(alpha: AlphaSpec, N: int) -> List[Ratio]:
    return best_convergents(rcf_up_to(alpha, N), N)


def _closer(alpha: AlphaSpec, first: Ratio, second: Ratio) -> bool:
    """|alpha - first| < |alpha - second|, certified."""
    return compare_weighted_offsets(alpha, (first.q, first.p, Fraction(1, first.q)),
                                    (second.q, second.p, Fraction(1, second.q))) < 0


def semiconvergent_candidates(expansion: CFExpansion, N: int) -> List[Ratio]:
    """
    Convergents and semiconvergents (p_{k-1} + t*p_k)/(q_{k-1} + t*q_k),
    1 <= t <= a_{k+1}, in nondecreasing denominator order up to N.
    """
    conv = expansion.convergents
    candidates = [conv[0]]
    p_prev, q_prev = 1, 0
    for k in range(len(conv) - 1):
        a_next = expansion.quotients[k + 1].value
        for t in range(1, a_next + 1):
            candidate = Ratio(p_prev + t * conv[k].p, q_prev + t * conv[k].q)
            if candidate.q > N:
                return candidates
            candidates.append(candidate)
        p_prev, q_prev = conv[k].p, conv[k].q
    return candidates


def first_kind_from_cf(alpha: AlphaSpec, N: int) -> List[Ratio]:
    """
    Best approximations of the first kind up to N from continued fractions:
    walk the convergent/semiconvergent candidates and keep each one strictly
    closer to alpha than the previous best (replacing it at equal denominator).
    """
    if N < 1:
        raise ExpansionError(f"Denominator bound N must be >= 1, got {N}")

    best: List[Ratio] = []
    for candidate in semiconvergent_candidates(rcf_up_to(alpha, N), N):
        if not best:
            best.append(candidate)
        elif candidate.q == best[-1].q:
            if _closer(alpha, candidate, best[-1]):
                best[-1] = candidate
        elif _closer(alpha, candidate, best[-1]):
            best.append(candidate)
    return best


def is_subsequence(short: Sequence[Ratio], long: Sequence[Ratio]) -> bool:
    remaining = iter(long)
    return all(any(item == other for other in remaining) for item in short)
