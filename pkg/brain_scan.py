#!/usr/bin/env python3
"""
Best Rational Approximation Scans
Enumerates best rational approximations of the first, second and third kinds
up to a denominator bound N, either streaming (running prefix minimum over
q = 1..N) or as full spreadsheet-style tables sorted by the kind's key.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, List, Optional, Sequence, Tuple

from alpha_oracle import AlphaSpec, ApproximationError, RationalInterval, Ratio
from train_core import (
    DEFAULT_DIST_WIDTH,
    WeightedOffset,
    certify_nearest,
    compare_weighted_offsets,
    weighted_offset_below,
)

logger = logging.getLogger(__name__)

II_NOT_IN_III = 'II not in III'
III_NOT_IN_I = 'III not in I'


class BrainKind(Enum):
    I = 'I'
    II = 'II'
    III = 'III'

    @classmethod
    def parse(cls, text: str) -> 'BrainKind':
        aliases = {'1': cls.I, '2': cls.II, '3': cls.III}
        key = text.strip().upper()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ApproximationError(f"Unknown approximation kind '{text}' (expected I, II or III)")


@dataclass(frozen=True)
class ApproxRecord:
    """One scan row: q, [q*alpha], the certified ||q*alpha|| enclosure and its sign."""
    q: int
    p: int
    key2: RationalInterval
    sign: int

    @property
    def key1(self) -> RationalInterval:
        return self.key2.scale(Fraction(1, self.q))

    @property
    def key3(self) -> RationalInterval:
        return self.key2.scale(self.q)

    @property
    def irreducible(self) -> bool:
        return math.gcd(self.p, self.q) == 1

    @property
    def sign_symbol(self) -> str:
        return '+' if self.sign > 0 else '-'

    @property
    def fraction(self) -> Ratio:
        return Ratio(self.p, self.q)

    def weight(self, kind: BrainKind) -> Fraction:
        if kind is BrainKind.I:
            return Fraction(1, self.q)
        if kind is BrainKind.II:
            return Fraction(1)
        return Fraction(self.q)

    def key(self, kind: BrainKind) -> RationalInterval:
        return self.key2.scale(self.weight(kind))

    def offset(self, kind: BrainKind) -> WeightedOffset:
        return self.q, self.p, self.weight(kind)


@dataclass(frozen=True)
class BrainItem:
    k: int
    fraction: Ratio
    record: ApproxRecord


@dataclass
class BrainSequence:
    kind: BrainKind
    alpha: AlphaSpec
    limit: int
    items: List[BrainItem] = field(default_factory=list)

    @property
    def fractions(self) -> List[Ratio]:
        return [item.fraction for item in self.items]

    @property
    def denominators(self) -> List[int]:
        return [item.fraction.q for item in self.items]

    def sign_string(self) -> str:
        return ''.join(item.record.sign_symbol for item in self.items)

    def signs_alternate(self) -> bool:
        signs = [item.record.sign for item in self.items]
        return all(a != b for a, b in zip(signs, signs[1:]))

    def labels(self) -> List[str]:
        """Fractions written as p<sign>/q, e.g. '22-/7'."""
        return [f"{item.fraction.p}{item.record.sign_symbol}/{item.fraction.q}" for item in self.items]


@dataclass
class InclusionReport:
    ii_in_iii: bool
    iii_in_i: bool
    i_equals_ii: bool
    witnesses: List[Tuple[str, Ratio]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.ii_in_iii and self.iii_in_i

    def outside(self, label: str) -> List[Ratio]:
        """Witness fractions carrying one label, in denominator order."""
        return [fraction for kind, fraction in self.witnesses if kind == label]


def _check_limit(N: int) -> None:
    if N < 1:
        raise ValueError(f"Denominator bound N must be >= 1, got {N}")


def _scan_chunk(alpha: AlphaSpec, q_values: range, dist_width: Fraction) -> List[ApproxRecord]:
    records = []
    for q in q_values:
        result = certify_nearest(alpha, q, dist_width)
        records.append(ApproxRecord(q=q, p=result.nearest_qa, key2=result.dist, sign=result.sign))
    return records


def scan_records(alpha: AlphaSpec, N: int, dist_width: Fraction = DEFAULT_DIST_WIDTH,
                 threads: int = 1) -> List[ApproxRecord]:
    """
    Certified records for q = 1..N in denominator order.
    With threads > 1 the range is split into chunks scanned concurrently and
    merged back in order, so the result is identical to the sequential scan.
    """
    _check_limit(N)
    if threads <= 1:
        return _scan_chunk(alpha, range(1, N + 1), dist_width)

    chunk_size = max(1, -(-N // (threads * 4)))
    chunks = [range(start, min(start + chunk_size, N + 1)) for start in range(1, N + 1, chunk_size)]
    logger.debug(f"{alpha.describe()}: scanning {N} denominators in {len(chunks)} chunks")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(lambda chunk: _scan_chunk(alpha, chunk, dist_width), chunks)
        return [record for part in parts for record in part]


def _records_for(alpha: AlphaSpec, N: int, records: Optional[Sequence[ApproxRecord]],
                 dist_width: Fraction, threads: int) -> Sequence[ApproxRecord]:
    if records is None:
        return scan_records(alpha, N, dist_width, threads)
    if len(records) < N:
        raise ValueError(f"Need records for q = 1..{N}, got {len(records)}")
    return records[:N]


def compare_records(alpha: AlphaSpec, first: ApproxRecord, second: ApproxRecord,
                    kind: BrainKind) -> int:
    """Certified comparison of the kind's key for two records."""
    return compare_weighted_offsets(alpha, first.offset(kind), second.offset(kind),
                                    first.key(kind), second.key(kind))


def key_below(alpha: AlphaSpec, record: ApproxRecord, kind: BrainKind, bound: Fraction) -> bool:
    return weighted_offset_below(alpha, record.offset(kind), bound, record.key(kind))


def brain_sequence(alpha: AlphaSpec, N: int, kind: BrainKind,
                   records: Optional[Sequence[ApproxRecord]] = None,
                   dist_width: Fraction = DEFAULT_DIST_WIDTH,
                   threads: int = 1) -> BrainSequence:
    """
    Best approximations of the given kind with denominators up to N.

    Kinds I and II emit a record whenever its key drops strictly below the
    running minimum. Kind III keeps every irreducible [q*alpha]/q with
    q*||q*alpha|| < 1.
    """
    _check_limit(N)
    rows = _records_for(alpha, N, records, dist_width, threads)
    sequence = BrainSequence(kind=kind, alpha=alpha, limit=N)

    if kind is BrainKind.III:
        for record in rows:
            if record.irreducible and key_below(alpha, record, kind, Fraction(1)):
                sequence.items.append(BrainItem(len(sequence.items), record.fraction, record))
        return sequence

    best = None
    for record in rows:
        if best is None or compare_records(alpha, record, best, kind) < 0:
            # A strict new minimum is always an irreducible fraction
            sequence.items.append(BrainItem(len(sequence.items), record.fraction.reduced(), record))
            best = record
    return sequence


def table_mode(alpha: AlphaSpec, N: int, kind: BrainKind, top_k: Optional[int] = None,
               below: Optional[Fraction] = None,
               records: Optional[Sequence[ApproxRecord]] = None,
               dist_width: Fraction = DEFAULT_DIST_WIDTH,
               threads: int = 1) -> List[ApproxRecord]:
    """
    Full scan sorted ascending by the kind's key, reducible rows included.

    Exactly equal keys (a fraction and its integer multiples, kind I only)
    are ordered by ascending q. `below` keeps only rows whose key is certified
    below the bound; `top_k` truncates after sorting.
    """
    _check_limit(N)
    rows = list(_records_for(alpha, N, records, dist_width, threads))
    if below is not None:
        rows = [record for record in rows if key_below(alpha, record, kind, Fraction(below))]

    def order(first: ApproxRecord, second: ApproxRecord) -> int:
        result = compare_records(alpha, first, second, kind)
        if result == 0:
            return (first.q > second.q) - (first.q < second.q)
        return result

    rows.sort(key=cmp_to_key(order))
    if top_k is not None:
        rows = rows[:top_k]
    return rows


def sequence_from_table(rows: Sequence[ApproxRecord]) -> List[Ratio]:
    """
    Recover the streaming sequence from a fully sorted table: walking the
    table by ascending key, a row is a best approximation exactly when its
    denominator is smaller than every denominator before it.
    """
    kept = []
    smallest = None
    for record in rows:
        if smallest is None or record.q < smallest:
            kept.append(record.fraction.reduced())
            smallest = record.q
    return list(reversed(kept))


def kind_inclusion_check(alpha: AlphaSpec, N: int,
                         records: Optional[Sequence[ApproxRecord]] = None,
                         dist_width: Fraction = DEFAULT_DIST_WIDTH,
                         threads: int = 1) -> InclusionReport:
    """
    Check II ⊆ III ⊆ I on the reduced fractions with denominators up to N.
    III ⊆ I does not hold in general: for sqrt(2), 7 * ||7 * sqrt(2)|| < 1
    yet 7/5 is closer than 10/7. Violations are reported as witnesses.
    """
    rows = _records_for(alpha, N, records, dist_width, threads)
    sets: Dict[BrainKind, set] = {
        kind: set(brain_sequence(alpha, N, kind, rows).fractions) for kind in BrainKind
    }

    witnesses = [(II_NOT_IN_III, fraction)
                 for fraction in sorted(sets[BrainKind.II] - sets[BrainKind.III], key=lambda f: f.q)]
    witnesses += [(III_NOT_IN_I, fraction)
                  for fraction in sorted(sets[BrainKind.III] - sets[BrainKind.I], key=lambda f: f.q)]

    report = InclusionReport(
        ii_in_iii=sets[BrainKind.II] <= sets[BrainKind.III],
        iii_in_i=sets[BrainKind.III] <= sets[BrainKind.I],
        i_equals_ii=sets[BrainKind.I] == sets[BrainKind.II],
        witnesses=witnesses,
    )
    logger.info(f"{alpha.describe()} N={N}: II⊆III={report.ii_in_iii} III⊆I={report.iii_in_i}")
    return report


def prefix_minimum_check(alpha: AlphaSpec, sequence: BrainSequence,
                         records: Sequence[ApproxRecord]) -> List[Tuple[int, int]]:
    """
    Exhaustive re-scan of a kind I/II sequence: every emitted q_k must beat
    every smaller denominator. Returns (q_k, q) pairs that violate it.
    """
    violations = []
    for item in sequence.items:
        for record in records[:item.record.q - 1]:
            if compare_records(alpha, item.record, record, sequence.kind) >= 0:
                violations.append((item.record.q, record.q))
    return violations
