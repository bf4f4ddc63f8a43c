#!/usr/bin/env python3
"""
Table Formatting
Decimal rendering of certified enclosures and TSV/CSV/pretty row emitters in
the column layout of the published tables (q, p, sign, key).
"""

import csv
import io
import math
from fractions import Fraction
from typing import Callable, List, Sequence

from alpha_oracle import MAX_REFINEMENT_ROUNDS, AlphaSpec, PrecisionExhausted, RationalInterval
from brain_scan import ApproxRecord, BrainKind
from train_core import weighted_offset_enclosure

STYLE_PAPER = 'paper'
STYLE_PRETTY = 'pretty'
STYLES = (STYLE_PAPER, STYLE_PRETTY)

FORMAT_TSV = 'tsv'
FORMAT_CSV = 'csv'
FORMAT_PRETTY = 'pretty'
FORMATS = (FORMAT_TSV, FORMAT_CSV, FORMAT_PRETTY)

# Below this the spreadsheet cell switches to scientific notation
SCIENTIFIC_THRESHOLD = Fraction(1, 10 ** 4)


def decimal_exponent(x: Fraction) -> int:
    """e with 10^e <= x < 10^(e+1), for x > 0."""
    if x >= 1:
        return len(str(math.floor(x))) - 1
    e = -1
    while x * 10 ** (-e) < 1:
        e -= 1
    return e


def _fixed(x: Fraction, decimals: int, strip: bool) -> str:
    scaled = round(x * 10 ** decimals)  # Fraction rounding is half-even
    sign = '-' if scaled < 0 else ''
    digits = str(abs(scaled)).rjust(decimals + 1, '0')
    if decimals == 0:
        return sign + digits
    text = f"{digits[:-decimals]}.{digits[-decimals:]}"
    if strip:
        text = text.rstrip('0').rstrip('.')
    return sign + text


def format_paper(x: Fraction, digits: int = 9) -> str:
    """
    Render like a spreadsheet "General" cell of digits + 2 characters:
    plain decimals from 1e-4 upwards, otherwise d.ddddE-XX, trailing
    zeros dropped. With digits = 9 this gives 0.003406312 and 2.66764E-07.
    """
    x = Fraction(x)
    width = digits + 2
    if x == 0:
        return '0'
    if abs(x) >= SCIENTIFIC_THRESHOLD:
        whole = len(str(abs(math.floor(abs(x)))))
        return _fixed(x, max(width - whole - 1, 0), strip=True)

    mantissa_decimals = max(width - 6, 0)
    e = decimal_exponent(abs(x))
    mantissa = round(abs(x) * Fraction(10) ** (mantissa_decimals - e))
    if mantissa >= 10 ** (mantissa_decimals + 1):
        mantissa //= 10
        e += 1
    text = _fixed(Fraction(mantissa, 10 ** mantissa_decimals), mantissa_decimals, strip=True)
    sign = '-' if x < 0 else ''
    exponent = f"E-{abs(e):02d}" if e < 0 else f"E+{e:02d}"
    return f"{sign}{text}{exponent}"


def format_pretty(x: Fraction, digits: int = 9) -> str:
    """Plain decimal with `digits` significant digits."""
    x = Fraction(x)
    if x == 0:
        return '0'
    e = decimal_exponent(abs(x))
    return _fixed(x, max(digits - 1 - e, 0), strip=False)


def formatter_for(style: str) -> Callable[[Fraction, int], str]:
    return format_paper if style == STYLE_PAPER else format_pretty


def certified_render(box: RationalInterval, refine: Callable[[Fraction], RationalInterval],
                     digits: int, style: str) -> str:
    """
    Render a value known only through enclosures: tighten until both
    endpoints print identically, so every printed digit is certified.
    """
    render = formatter_for(style)
    for _ in range(MAX_REFINEMENT_ROUNDS):
        low, high = render(box.lo, digits), render(box.hi, digits)
        if low == high:
            return low
        box = refine(box.width / 1024)
    raise PrecisionExhausted(f"Cannot certify {digits} digits for value in {box}")


def key_cell(alpha: AlphaSpec, record: ApproxRecord, kind: BrainKind, digits: int, style: str) -> str:
    return certified_render(
        record.key(kind),
        lambda eps: weighted_offset_enclosure(alpha, record.offset(kind), eps),
        digits, style,
    )


def record_cells(alpha: AlphaSpec, record: ApproxRecord, kind: BrainKind,
                 digits: int, style: str) -> List[str]:
    """The q, p, sign, key columns of one table row."""
    return [str(record.q), str(record.p), record.sign_symbol, key_cell(alpha, record, kind, digits, style)]


def emit_rows(header: Sequence[str], rows: Sequence[Sequence[str]], fmt: str) -> str:
    """Serialise rows as TSV, CSV or an aligned plain-text table."""
    if fmt == FORMAT_CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
        return buffer.getvalue()

    if fmt == FORMAT_TSV:
        lines = ['\t'.join(header)] + ['\t'.join(row) for row in rows]
        return '\n'.join(lines) + '\n'

    widths = [len(column) for column in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines: List[str] = [
        '  '.join(cell.rjust(w) for cell, w in zip(header, widths)),
        '  '.join('-' * w for w in widths),
    ]
    lines += ['  '.join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows]
    return '\n'.join(lines) + '\n'
