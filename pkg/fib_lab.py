#!/usr/bin/env python3
"""
Golden Ratio / Fibonacci Lab
The Fibonacci numbers from the nearest-integer map F_{n+1} = [F_n * phi],
the additive recurrence as an independent oracle, and the Binet rounding
identity checked with certified interval arithmetic.

Indexing starts F_1 = 1, F_2 = 2 (the sequence 1, 2, 3, 5, 8, ...), so the
rounding identity reads F_n = [phi^(n+1) / sqrt(5)].
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from alpha_oracle import PHI, Ratio, enclosure, refining_enclosures, sqrt_spec
from train_core import certify_nearest

logger = logging.getLogger(__name__)

SQRT5 = sqrt_spec(5)


@dataclass(frozen=True)
class FibSequence:
    terms: Tuple[int, ...]

    def term(self, n: int) -> int:
        """1-indexed access."""
        if not 1 <= n <= len(self.terms):
            raise IndexError(f"Fibonacci index {n} outside 1..{len(self.terms)}")
        return self.terms[n - 1]

    def satisfies_recurrence(self) -> bool:
        t = self.terms
        return all(t[i + 2] == t[i + 1] + t[i] for i in range(len(t) - 2))

    def ratios(self) -> List[Ratio]:
        """Consecutive ratios F_{n+1}/F_n."""
        return [Ratio(b, a) for a, b in zip(self.terms, self.terms[1:])]


@dataclass
class BinetReport:
    checked: int
    mismatches: List[Tuple[int, int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def _check_length(n_max: int) -> None:
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")


def fib_via_train(n_max: int) -> FibSequence:
    """F_1 = 1, F_{n+1} = [F_n * phi] with certified nearest integers."""
    _check_length(n_max)
    terms = [1]
    while len(terms) < n_max:
        terms.append(certify_nearest(PHI, terms[-1]).nearest_qa)
    return FibSequence(tuple(terms))


def fib_additive(n_max: int) -> FibSequence:
    _check_length(n_max)
    terms = [1, 2][:n_max]
    while len(terms) < n_max:
        terms.append(terms[-1] + terms[-2])
    return FibSequence(tuple(terms))


def binet_round(n: int) -> int:
    """Certified [phi^(n+1) / sqrt(5)]."""
    exponent = n + 1
    # phi < 2, so widening phi by eps moves phi^m by less than m * 2^m * eps
    start = Fraction(1, 4 * exponent * 2 ** exponent)
    for box in refining_enclosures(PHI, start):
        root = enclosure(SQRT5, box.width)
        value = box.power(exponent).times(root.reciprocal())
        nearest = value.certified_nearest()
        if nearest is not None:
            return nearest


def binet_round_check(n_max: int) -> BinetReport:
    """Compare [phi^(n+1)/sqrt(5)] with fib_via_train for n = 1..n_max."""
    sequence = fib_via_train(n_max)
    report = BinetReport(checked=n_max)
    for n in range(1, n_max + 1):
        rounded = binet_round(n)
        if rounded != sequence.term(n):
            report.mismatches.append((n, rounded, sequence.term(n)))
    if report.mismatches:
        logger.warning(f"Binet rounding mismatches: {report.mismatches}")
    return report


def ratio_chain_check(sequence: FibSequence, approximations: Sequence[Ratio]) -> bool:
    """Consecutive ratios F_{n+1}/F_n equal the given approximations, in order."""
    ratios = sequence.ratios()
    count = min(len(ratios), len(approximations))
    return count > 0 and ratios[:count] == list(approximations[:count])
