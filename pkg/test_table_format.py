"""Tests for table_format rendering and emitters."""

from fractions import Fraction

import pytest

from alpha_oracle import PHI, PI, PrecisionExhausted, RationalInterval
from brain_scan import BrainKind, scan_records
from table_format import (
    FORMAT_CSV,
    FORMAT_PRETTY,
    FORMAT_TSV,
    STYLE_PAPER,
    STYLE_PRETTY,
    certified_render,
    decimal_exponent,
    emit_rows,
    format_paper,
    format_pretty,
    record_cells,
)


class TestDecimalExponent:
    @pytest.mark.parametrize('x, e', [
        (Fraction(1), 0), (Fraction(999, 100), 0), (Fraction(10), 1), (Fraction(12345), 4),
        (Fraction(1, 10), -1), (Fraction(99, 1000), -2), (Fraction(3, 10 ** 7), -7),
    ])
    def test_exponent(self, x, e):
        assert decimal_exponent(x) == e


class TestFormatPaper:
    """Spreadsheet-style cells at 9 significant digits."""

    @pytest.mark.parametrize('x, text', [
        (Fraction(3406312, 10 ** 9), '0.003406312'),
        (Fraction(1415926536, 10 ** 10), '0.141592654'),
        (Fraction(2667639, 10 ** 13), '2.66764E-07'),
        (Fraction(157380, 10 ** 10), '1.5738E-05'),
        (Fraction(453104, 10 ** 9), '0.000453104'),
        (Fraction(1, 2), '0.5'),
        (Fraction(0), '0'),
    ])
    def test_cells(self, x, text):
        assert format_paper(x) == text

    def test_rounding_carries_into_exponent(self):
        assert format_paper(Fraction(9999996, 10 ** 13)) == '1E-06'

    def test_negative(self):
        assert format_paper(Fraction(-1, 4)) == '-0.25'


class TestFormatPretty:
    @pytest.mark.parametrize('x, text', [
        (Fraction(2667639, 10 ** 13), '0.000000266763900'),
        (Fraction(1, 3), '0.333333333'),
        (Fraction(22, 7), '3.14285714'),
    ])
    def test_significant_digits(self, x, text):
        assert format_pretty(x) == text

    def test_digit_count(self):
        assert format_pretty(Fraction(1, 3), digits=3) == '0.333'


class TestCertifiedRender:
    """Rendering refines until both endpoints agree."""

    def test_already_tight(self):
        box = RationalInterval(Fraction(3406312001, 10 ** 12), Fraction(3406312002, 10 ** 12))
        assert certified_render(box, lambda eps: box, 9, STYLE_PAPER) == '0.003406312'

    def test_refinement_requested(self):
        calls = []
        tight = RationalInterval(Fraction(1, 3) - Fraction(1, 10 ** 15), Fraction(1, 3) + Fraction(1, 10 ** 15))

        def refine(eps):
            calls.append(eps)
            return tight

        wide = RationalInterval(Fraction(1, 4), Fraction(1, 2))
        assert certified_render(wide, refine, 9, STYLE_PRETTY) == '0.333333333'
        assert calls == [Fraction(1, 4) / 1024]

    def test_gives_up(self):
        box = RationalInterval(Fraction(1, 4), Fraction(1, 2))
        with pytest.raises(PrecisionExhausted):
            certified_render(box, lambda eps: box, 9, STYLE_PAPER)

    def test_record_cells_match_tables(self):
        records = scan_records(PI, 113)
        assert record_cells(PI, records[112], BrainKind.III, 9, STYLE_PAPER) == ['113', '355', '-', '0.003406312']
        assert record_cells(PI, records[112], BrainKind.II, 9, STYLE_PAPER) == ['113', '355', '-', '3.01444E-05']
        assert record_cells(PI, records[112], BrainKind.I, 9, STYLE_PAPER) == ['113', '355', '-', '2.66764E-07']

    def test_phi_cell(self):
        records = scan_records(PHI, 987)
        assert record_cells(PHI, records[986], BrainKind.II, 9, STYLE_PAPER)[3] == '0.000453104'


class TestEmitRows:
    """TSV, CSV and aligned output."""

    header = ('q', 'p', 'sign', 'key')
    rows = [['7', '22', '-', '0.0088514'], ['113', '355', '-', '3.01444E-05']]

    def test_tsv(self):
        assert emit_rows(self.header, self.rows, FORMAT_TSV) == (
            'q\tp\tsign\tkey\n7\t22\t-\t0.0088514\n113\t355\t-\t3.01444E-05\n')

    def test_csv(self):
        assert emit_rows(self.header, self.rows, FORMAT_CSV) == (
            'q,p,sign,key\n7,22,-,0.0088514\n113,355,-,3.01444E-05\n')

    def test_pretty_aligns_columns(self):
        lines = emit_rows(self.header, self.rows, FORMAT_PRETTY).splitlines()
        assert len(lines) == 4
        assert len({len(line) for line in lines}) == 1
        assert lines[1].startswith('---')

    def test_empty_table(self):
        assert emit_rows(self.header, [], FORMAT_TSV) == 'q\tp\tsign\tkey\n'
