"""Tests for alpha_oracle: parsing, certified enclosures and refinement."""

import math
from fractions import Fraction

import pytest

from alpha_oracle import (
    E,
    E_DIGITS,
    PHI,
    PI,
    PI_DIGITS,
    AlphaSpec,
    ParseError,
    PrecisionExhausted,
    RationalInterval,
    RationalValueError,
    Ratio,
    enclosure,
    finest_enclosure,
    negate,
    parse_alpha,
    quadratic_spec,
    refining_enclosures,
    scaled_enclosure,
    sqrt_spec,
)


def pi_spigot(count):
    """Integer-only spigot for the decimal digits of pi."""
    q, r, t, k, n, l = 1, 0, 1, 1, 3, 3
    digits = []
    while len(digits) < count:
        if 4 * q + r - t < n * t:
            digits.append(n)
            q, r, n = 10 * q, 10 * (r - n * t), (10 * (3 * q + r)) // t - 10 * n
        else:
            q, r, t, k, n, l = (q * k, (2 * q + r) * l, t * l, k + 1,
                                (q * (7 * k + 2) + r * l) // (t * l), l + 2)
    return digits


class TestEmbeddedDigits:
    """Embedded constants against independent oracles."""

    def test_pi_digits_match_spigot(self):
        expected = ''.join(str(d) for d in pi_spigot(151))
        assert PI_DIGITS.replace('.', '') == expected

    def test_e_digits_match_factorial_series(self):
        # Tail of the series after 120 terms is far below 10^-150
        series = sum(Fraction(1, math.factorial(k)) for k in range(120))
        assert math.floor(series * 10 ** 150) == int(E_DIGITS.replace('.', ''))

    def test_finest_pi_enclosure_has_150_decimals(self):
        box = finest_enclosure(PI)
        assert box.width == Fraction(1, 10 ** 150)
        assert box.lo == Fraction(int(PI_DIGITS.replace('.', '')), 10 ** 150)

    def test_quadratic_has_no_finest_enclosure(self):
        assert finest_enclosure(PHI) is None


class TestParseAlpha:
    """Test parse_alpha grammar."""

    @pytest.mark.parametrize('text, expected', [
        ('pi', PI),
        ('PI', PI),
        ('e', E),
        ('phi', PHI),
        ('quad:1,1,2,5', PHI),
        ('sqrt:2', sqrt_spec(2)),
        (' sqrt:3 ', sqrt_spec(3)),
        ('quad:-1,-1,-2,5', PHI),
    ])
    def test_known_constants(self, text, expected):
        assert parse_alpha(text) == expected

    def test_negated(self):
        alpha = parse_alpha('-pi')
        assert alpha.sign == -1
        assert alpha == negate(PI)

    def test_decimal_default_bound(self):
        alpha = parse_alpha('dec:3.14')
        assert alpha.digits == '3.14'
        assert alpha.bound == Fraction(1, 100)

    def test_decimal_explicit_bound(self):
        alpha = parse_alpha('dec:1.41421356@1/100000000')
        assert alpha.bound == Fraction(1, 10 ** 8)

    @pytest.mark.parametrize('text', ['sqrt:4', 'sqrt:1', 'quad:1,0,2,5', 'quad:3,2,7,9'])
    def test_rational_values_rejected(self, text):
        with pytest.raises(RationalValueError):
            parse_alpha(text)

    @pytest.mark.parametrize('text', [
        '', 'tau', 'sqrt:', 'sqrt:x', 'sqrt:0', 'sqrt:-2', 'quad:1,1,5',
        'quad:1,1,0,5', 'dec:', 'dec:3.1.4', 'dec:3.14@0', 'dec:3.14@-1', 'dec:3.14@abc',
    ])
    def test_malformed_specs_rejected(self, text):
        with pytest.raises(ParseError):
            parse_alpha(text)

    @pytest.mark.parametrize('text', ['pi', '-e', 'phi', 'sqrt:2', 'quad:1,2,3,7', 'dec:2.5@1/1000'])
    def test_describe_parses_back(self, text):
        alpha = parse_alpha(text)
        assert parse_alpha(alpha.describe()) == alpha

    def test_quadratic_spec_normalises_denominator(self):
        assert quadratic_spec(1, 1, -2, 5) == AlphaSpec('quad', a=-1, b=-1, c=2, d=5)


class TestRationalInterval:
    """Test exact interval operations."""

    def test_empty_interval_rejected(self):
        with pytest.raises(ValueError):
            RationalInterval(Fraction(1), Fraction(1))

    def test_negative_scale_swaps_endpoints(self):
        box = RationalInterval(Fraction(1), Fraction(2)).scale(-3)
        assert (box.lo, box.hi) == (-6, -3)

    def test_certified_floor(self):
        assert RationalInterval(Fraction(5, 2), Fraction(3)).certified_floor() == 2
        assert RationalInterval(Fraction(5, 2), Fraction(7, 2)).certified_floor() is None

    def test_certified_nearest(self):
        assert RationalInterval(Fraction(26, 10), Fraction(34, 10)).certified_nearest() == 3
        assert RationalInterval(Fraction(24, 10), Fraction(26, 10)).certified_nearest() is None

    def test_certified_sign(self):
        assert RationalInterval(Fraction(0), Fraction(1)).certified_sign() == 1
        assert RationalInterval(Fraction(-1), Fraction(0)).certified_sign() == -1
        assert RationalInterval(Fraction(-1), Fraction(1)).certified_sign() is None

    def test_reciprocal_refuses_zero(self):
        with pytest.raises(ZeroDivisionError):
            RationalInterval(Fraction(-1), Fraction(1)).reciprocal()

    def test_power(self):
        box = RationalInterval(Fraction(1), Fraction(2)).power(3)
        assert (box.lo, box.hi) == (1, 8)


class TestRatio:
    def test_reduction(self):
        assert Ratio(710, 226).reduced() == Ratio(355, 113)
        assert not Ratio(710, 226).is_reduced
        assert str(Ratio(22, 7)) == '22/7'

    def test_denominator_must_be_positive(self):
        with pytest.raises(ValueError):
            Ratio(1, 0)


class TestEnclosure:
    """Test certified enclosures of alpha and q*alpha."""

    @pytest.mark.parametrize('exponent', [1, 5, 20, 60, 140])
    def test_pi_width_and_containment(self, exponent):
        eps = Fraction(1, 10 ** exponent)
        box = enclosure(PI, eps)
        reference = Fraction(int(PI_DIGITS.replace('.', '')), 10 ** 150)
        assert box.width < eps
        assert box.lo <= reference < box.hi

    @pytest.mark.parametrize('d', [2, 3, 5, 7, 1000003])
    def test_square_roots_bracket_by_squares(self, d):
        eps = Fraction(1, 10 ** 30)
        box = enclosure(sqrt_spec(d), eps)
        assert box.width < eps
        assert box.lo * box.lo < d < box.hi * box.hi

    def test_phi_satisfies_its_polynomial(self):
        box = enclosure(PHI, Fraction(1, 10 ** 40))
        # phi is the positive root of x^2 - x - 1
        assert box.lo * box.lo - box.lo - 1 < 0 < box.hi * box.hi - box.hi - 1

    def test_negated_constant(self):
        box = enclosure(negate(PI), Fraction(1, 1000))
        assert box.hi < Fraction(-314, 100)
        assert box.lo > Fraction(-315, 100)

    def test_scaled_enclosure_width(self):
        eps = Fraction(1, 10 ** 12)
        box = scaled_enclosure(PI, 33102, eps)
        assert box.width < eps
        assert box.certified_nearest() == 103993

    def test_pi_beyond_embedded_digits(self):
        with pytest.raises(PrecisionExhausted):
            enclosure(PI, Fraction(1, 10 ** 151))

    def test_decimal_bound_too_coarse(self):
        with pytest.raises(PrecisionExhausted):
            enclosure(parse_alpha('dec:3.14'), Fraction(1, 1000))

    def test_decimal_bound_fine_enough(self):
        box = enclosure(parse_alpha('dec:3.14'), Fraction(1))
        assert (box.lo, box.hi) == (Fraction(313, 100), Fraction(315, 100))


class TestRefiningEnclosures:
    """Test the shared refinement schedule."""

    def test_widths_shrink(self):
        boxes = []
        for box in refining_enclosures(PHI, Fraction(1, 4)):
            boxes.append(box)
            if len(boxes) == 10:
                break
        assert all(b.width <= a.width for a, b in zip(boxes, boxes[1:]))
        assert boxes[-1].width < Fraction(1, 4 * 2 ** 9)

    def test_digit_backed_constant_runs_out(self):
        with pytest.raises(PrecisionExhausted) as excinfo:
            for _ in refining_enclosures(PI, Fraction(1, 4), q=17, squaring=True):
                pass
        assert excinfo.value.q == 17
        assert 'q=17' in str(excinfo.value)

    def test_round_cap(self):
        with pytest.raises(PrecisionExhausted):
            for _ in refining_enclosures(PHI, Fraction(1, 4), max_rounds=3):
                pass
