#!/usr/bin/env python3
"""
Dirichlet Approximation Lab
Constructive pigeonhole witness for Dirichlet's theorem, the q*||q*alpha|| < 1/2
census, the convergent criterion check for |alpha - p/q| < 1/(2q^2), and the
Hurwitz-constant scan. All thresholds are compared in exact rational
arithmetic; 1/sqrt(5) is handled as 5*x^2 < 1.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from alpha_oracle import (
    MAX_REFINEMENT_ROUNDS,
    AlphaSpec,
    ApproximationError,
    PrecisionExhausted,
    RationalInterval,
    Ratio,
    refining_enclosures,
)
from brain_scan import (
    ApproxRecord,
    BrainKind,
    brain_sequence,
    compare_records,
    key_below,
    scan_records,
    table_mode,
)
from cf_engine import rcf_convergents_up_to
from train_core import weighted_offset_below, weighted_offset_enclosure

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class DirichletWitness:
    N: int
    k: int
    l: int
    q: int
    p: int
    bound_ok: bool


@dataclass
class LegendreReport:
    census: List[Ratio]
    convergents: List[Ratio]
    violations: List[Ratio] = field(default_factory=list)
    convergents_outside_census: List[Ratio] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class HurwitzRow:
    q: int
    p: int
    sign: int
    key3: RationalInterval
    below_hurwitz: bool


@dataclass
class HurwitzReport:
    rows: List[HurwitzRow]
    all_below_half: bool
    overestimates_increasing: bool
    underestimates_decreasing: bool

    @property
    def hurwitz_rows(self) -> List[HurwitzRow]:
        """Rows with q*||q*alpha|| < 1/sqrt(5)."""
        return [row for row in self.rows if row.below_hurwitz]


def _certified_bin(alpha: AlphaSpec, k: int, N: int) -> Tuple[int, int]:
    """floor(k*alpha) and the bin index floor(N*{k*alpha}), both certified."""
    for box in refining_enclosures(alpha, Fraction(1, 4 * k * N), q=k):
        scaled = box.scale(k)
        whole = scaled.certified_floor()
        if whole is None:
            continue
        index = scaled.shift(-whole).scale(N).certified_floor()
        if index is not None:
            return whole, index


def pigeonhole_witness(alpha: AlphaSpec, N: int) -> DirichletWitness:
    """
    Drop {k*alpha}, k = 0..N, into the N bins [i/N, (i+1)/N) and return the
    first collision in index order: q = k - l, p = floor(k*alpha) - floor(l*alpha).
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")

    floors = {0: 0}
    occupied: Dict[int, int] = {0: 0}
    for k in range(1, N + 1):
        floors[k], index = _certified_bin(alpha, k, N)
        if index in occupied:
            l = occupied[index]
            q, p = k - l, floors[k] - floors[l]
            bound_ok = weighted_offset_below(alpha, (q, p, Fraction(1)), Fraction(1, N))
            logger.debug(f"{alpha.describe()} N={N}: bins collide at k={k}, l={l}")
            return DirichletWitness(N=N, k=k, l=l, q=q, p=p, bound_ok=bound_ok)
        occupied[index] = k

    raise ApproximationError(f"No bin collision among {N + 1} points in {N} bins")


def _records(alpha: AlphaSpec, N: int, records: Optional[Sequence[ApproxRecord]]) -> Sequence[ApproxRecord]:
    return scan_records(alpha, N) if records is None else records[:N]


def half_square_census(alpha: AlphaSpec, N: int,
                       records: Optional[Sequence[ApproxRecord]] = None) -> List[int]:
    """Every q <= N with q*||q*alpha|| < 1/2."""
    return [record.q for record in _records(alpha, N, records)
            if key_below(alpha, record, BrainKind.III, HALF)]


def legendre_check(alpha: AlphaSpec, N: int,
                   records: Optional[Sequence[ApproxRecord]] = None) -> LegendreReport:
    """
    Every reduced [q*alpha]/q with q*||q*alpha|| < 1/2 must be an RCF convergent.
    """
    rows = _records(alpha, N, records)
    census_q = set(half_square_census(alpha, N, rows))
    census = []
    for record in rows:
        fraction = record.fraction.reduced()
        if record.q in census_q and fraction not in census:
            census.append(fraction)

    convergent_list = rcf_convergents_up_to(alpha, N)
    report = LegendreReport(census=census, convergents=convergent_list)
    report.violations = [f for f in census if f not in convergent_list]
    report.convergents_outside_census = [c for c in convergent_list if c not in census]
    if report.violations:
        logger.warning(f"{alpha.describe()}: census fractions outside the convergents: "
                       f"{[str(f) for f in report.violations]}")
    return report


def _hits_hurwitz_exactly(alpha: AlphaSpec, q: int, p: int) -> bool:
    """
    True when q*|q*alpha - p| equals 1/sqrt(5) exactly, which can only happen
    for a quadratic alpha. With q*alpha - p = (A + B*sqrt(d))/c this needs
    A = 0 and 5*q^2*B^2*d = c^2.
    """
    if not alpha.is_quadratic:
        return False
    A = alpha.sign * q * alpha.a - p * alpha.c
    B = alpha.sign * q * alpha.b
    return A == 0 and 5 * q * q * B * B * alpha.d == alpha.c * alpha.c


def below_hurwitz(alpha: AlphaSpec, record: ApproxRecord) -> bool:
    """Certified q*||q*alpha|| < 1/sqrt(5), decided as 5*x^2 < 1."""
    if _hits_hurwitz_exactly(alpha, record.q, record.p):
        return False
    box = record.key3
    eps = box.width
    for _ in range(MAX_REFINEMENT_ROUNDS):
        if 5 * box.hi * box.hi < 1:
            return True
        if 5 * box.lo * box.lo >= 1:
            return False
        eps /= 2
        box = weighted_offset_enclosure(alpha, record.offset(BrainKind.III), eps)
    raise PrecisionExhausted(f"{alpha.describe()}: Hurwitz comparison unresolved", record.q)


def _strictly_monotone(alpha: AlphaSpec, rows: List[ApproxRecord], increasing: bool) -> bool:
    wanted = -1 if increasing else 1
    return all(compare_records(alpha, a, b, BrainKind.III) == wanted for a, b in zip(rows, rows[1:]))


def hurwitz_scan(alpha: AlphaSpec, N: int,
                 records: Optional[Sequence[ApproxRecord]] = None) -> HurwitzReport:
    """
    Rows with q*||q*alpha|| < 1 in ascending order, each flagged against
    1/sqrt(5), with the split diagnostics: in denominator order the
    overestimates (sign -) must increase strictly and the underestimates
    (sign +) decrease strictly, as they do for the golden ratio.
    """
    rows = table_mode(alpha, N, BrainKind.III, below=Fraction(1), records=_records(alpha, N, records))
    by_q = sorted(rows, key=lambda record: record.q)
    over = [record for record in by_q if record.sign < 0]
    under = [record for record in by_q if record.sign > 0]

    return HurwitzReport(
        rows=[HurwitzRow(q=r.q, p=r.p, sign=r.sign, key3=r.key3, below_hurwitz=below_hurwitz(alpha, r))
              for r in rows],
        all_below_half=all(key_below(alpha, r, BrainKind.III, HALF) for r in rows),
        overestimates_increasing=_strictly_monotone(alpha, over, increasing=True),
        underestimates_decreasing=_strictly_monotone(alpha, under, increasing=False),
    )


def alternation_census_check(alpha: AlphaSpec, N: int,
                             records: Optional[Sequence[ApproxRecord]] = None) -> bool:
    """Among any two consecutive kind-II denominators at least one is in the 1/2 census."""
    rows = _records(alpha, N, records)
    census = set(half_square_census(alpha, N, rows))
    denominators = brain_sequence(alpha, N, BrainKind.II, rows).denominators
    return all(a in census or b in census for a, b in zip(denominators, denominators[1:]))
