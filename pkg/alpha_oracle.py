#!/usr/bin/env python3
"""
Irrational Constant Oracles
Parses alpha specifications (pi, e, phi, square roots, quadratic irrationals,
user decimal strings) and produces certified exact-rational enclosures of
alpha and of q*alpha at any requested width.
"""

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Tuple, Union

logger = logging.getLogger(__name__)

# Hard cap on refinement rounds before giving up with PrecisionExhausted
MAX_REFINEMENT_ROUNDS = 256

# Truncated (not rounded) expansions, 150 decimals each
PI_DIGITS = (
    "3."
    "14159265358979323846264338327950288419716939937510"
    "58209749445923078164062862089986280348253421170679"
    "82148086513282306647093844609550582231725359408128"
)
E_DIGITS = (
    "2."
    "71828182845904523536028747135266249775724709369995"
    "95749669676277240766303535475945713821785251664274"
    "27466391932003059921817413596629043572900334295260"
)

KIND_PI = 'pi'
KIND_E = 'e'
KIND_SQRT = 'sqrt'
KIND_QUADRATIC = 'quad'
KIND_DECIMAL = 'dec'

Number = Union[int, Fraction]

_INT = r'[+-]?\d+'
_DECIMAL_LITERAL = re.compile(r'^([+-]?)(\d+)(?:\.(\d+))?$')
_QUAD_ARGS = re.compile(rf'^({_INT}),({_INT}),({_INT}),({_INT})$')


class ApproximationError(Exception):
    """Base exception for best-approximation toolkit operations."""
    pass


class ParseError(ApproximationError):
    """Malformed alpha specification text."""
    pass


class RationalValueError(ApproximationError):
    """The described constant would be rational."""
    pass


class PrecisionExhausted(ApproximationError):
    """The backing digits cannot certify the requested precision."""

    def __init__(self, message: str, q: Optional[int] = None):
        if q is not None:
            message = f"{message} (at q={q})"
        super().__init__(message)
        self.q = q


@dataclass(frozen=True)
class RationalInterval:
    """Open interval (lo, hi) with exact rational endpoints."""
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"Empty interval: lo={self.lo} hi={self.hi}")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value: Number) -> bool:
        return self.lo < value < self.hi

    def intersects(self, other: 'RationalInterval') -> bool:
        return self.lo < other.hi and other.lo < self.hi

    def scale(self, factor: Number) -> 'RationalInterval':
        """Exact image under x -> factor * x."""
        if factor == 0:
            raise ValueError("Cannot scale an interval by zero")
        a, b = self.lo * factor, self.hi * factor
        return RationalInterval(min(a, b), max(a, b))

    def shift(self, offset: Number) -> 'RationalInterval':
        return RationalInterval(self.lo + offset, self.hi + offset)

    def negate(self) -> 'RationalInterval':
        return RationalInterval(-self.hi, -self.lo)

    def reciprocal(self) -> 'RationalInterval':
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError(f"Interval {self} may contain zero")
        return RationalInterval(1 / self.hi, 1 / self.lo)

    def times(self, other: 'RationalInterval') -> 'RationalInterval':
        products = [self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi]
        return RationalInterval(min(products), max(products))

    def power(self, exponent: int) -> 'RationalInterval':
        """Integer power of a strictly positive interval."""
        if self.lo <= 0:
            raise ValueError("power() needs a strictly positive interval")
        return RationalInterval(self.lo ** exponent, self.hi ** exponent)

    def certified_floor(self) -> Optional[int]:
        """Floor of every point inside, or None if an integer lies strictly inside."""
        m = math.floor(self.lo)
        if m + 1 >= self.hi:
            return m
        return None

    def certified_nearest(self) -> Optional[int]:
        """Nearest integer of every point inside, or None if a half-integer lies inside."""
        return self.shift(Fraction(1, 2)).certified_floor()

    def certified_sign(self) -> Optional[int]:
        if self.lo >= 0:
            return 1
        if self.hi <= 0:
            return -1
        return None

    def __str__(self) -> str:
        return f"({self.lo}, {self.hi})"


@dataclass(frozen=True)
class Ratio:
    """Integer pair p/q with q >= 1, kept unreduced until asked."""
    p: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"Denominator must be >= 1, got {self.q}")

    @property
    def is_reduced(self) -> bool:
        return math.gcd(self.p, self.q) == 1

    def reduced(self) -> 'Ratio':
        g = math.gcd(self.p, self.q)
        return Ratio(self.p // g, self.q // g)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class AlphaSpec:
    """
    A described irrational constant.

    Quadratic kinds denote sign * (a + b*sqrt(d)) / c; decimal kinds denote a
    value within `bound` of sign * digits. Pi and e are backed by the embedded
    truncated expansions.
    """
    kind: str
    a: int = 0
    b: int = 1
    c: int = 1
    d: int = 0
    digits: str = ''
    bound: Optional[Fraction] = None
    sign: int = 1

    def __post_init__(self):
        if self.kind in (KIND_SQRT, KIND_QUADRATIC):
            if self.d <= 0:
                raise ParseError(f"Radicand must be a positive integer, got {self.d}")
            if math.isqrt(self.d) ** 2 == self.d:
                raise RationalValueError(f"sqrt({self.d}) is rational: {self.d} is a perfect square")
            if self.b == 0:
                raise RationalValueError("Quadratic coefficient b = 0 describes a rational value")
            if self.c <= 0:
                raise ParseError(f"Denominator c must be positive, got {self.c}")
        elif self.kind == KIND_DECIMAL:
            if self.bound is None or self.bound <= 0:
                raise ParseError(f"Decimal error bound must be positive, got {self.bound}")
            if not _DECIMAL_LITERAL.match(self.digits):
                raise ParseError(f"Invalid decimal literal: {self.digits}")
        elif self.kind not in (KIND_PI, KIND_E):
            raise ParseError(f"Unknown alpha kind: {self.kind}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def is_quadratic(self) -> bool:
        return self.kind in (KIND_SQRT, KIND_QUADRATIC)

    def describe(self) -> str:
        """Canonical spec text for this constant."""
        prefix = '-' if self.sign < 0 else ''
        if self.kind in (KIND_PI, KIND_E):
            return prefix + self.kind
        if self.kind == KIND_SQRT:
            return f"{prefix}sqrt:{self.d}"
        if self.kind == KIND_QUADRATIC:
            if (self.a, self.b, self.c, self.d) == (1, 1, 2, 5):
                return prefix + 'phi'
            return f"{prefix}quad:{self.a},{self.b},{self.c},{self.d}"
        return f"{prefix}dec:{self.digits}@{self.bound}"


PI = AlphaSpec(KIND_PI)
E = AlphaSpec(KIND_E)
PHI = AlphaSpec(KIND_QUADRATIC, a=1, b=1, c=2, d=5)


def sqrt_spec(d: int) -> AlphaSpec:
    return AlphaSpec(KIND_SQRT, a=0, b=1, c=1, d=d)


def quadratic_spec(a: int, b: int, c: int, d: int) -> AlphaSpec:
    """(a + b*sqrt(d)) / c, normalised to c > 0."""
    if c < 0:
        a, b, c = -a, -b, -c
    if c == 0:
        raise ParseError("Quadratic denominator c must be non-zero")
    return AlphaSpec(KIND_QUADRATIC, a=a, b=b, c=c, d=d)


def negate(alpha: AlphaSpec) -> AlphaSpec:
    """The spec of -alpha."""
    return AlphaSpec(alpha.kind, a=alpha.a, b=alpha.b, c=alpha.c, d=alpha.d,
                     digits=alpha.digits, bound=alpha.bound, sign=-alpha.sign)


def _parse_int(text: str, spec: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"Invalid integer '{text}' in alpha spec '{spec}'")


def parse_alpha(spec: str) -> AlphaSpec:
    """
    Parse `pi | e | phi | sqrt:<d> | quad:<a>,<b>,<c>,<d> | dec:<digits>[@<bound>]`,
    optionally prefixed with '-' for the negated constant.
    """
    text = spec.strip()
    if not text:
        raise ParseError("Empty alpha spec")

    negative = text.startswith('-')
    body = text[1:] if negative else text
    keyword = body.lower()

    if keyword == 'pi':
        alpha = PI
    elif keyword == 'e':
        alpha = E
    elif keyword == 'phi':
        alpha = PHI
    elif keyword.startswith('sqrt:'):
        alpha = sqrt_spec(_parse_int(body[5:], spec))
    elif keyword.startswith('quad:'):
        match = _QUAD_ARGS.match(body[5:].replace(' ', ''))
        if not match:
            raise ParseError(f"Expected quad:<a>,<b>,<c>,<d>, got '{spec}'")
        a, b, c, d = (int(group) for group in match.groups())
        alpha = quadratic_spec(a, b, c, d)
    elif keyword.startswith('dec:'):
        literal, _, bound_text = body[4:].partition('@')
        match = _DECIMAL_LITERAL.match(literal)
        if not match:
            raise ParseError(f"Invalid decimal literal '{literal}' in alpha spec '{spec}'")
        decimals = len(match.group(3) or '')
        if bound_text:
            try:
                bound = Fraction(bound_text)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"Invalid error bound '{bound_text}' in alpha spec '{spec}'")
        else:
            # One unit in the last supplied digit place
            bound = Fraction(1, 10 ** decimals)
        alpha = AlphaSpec(KIND_DECIMAL, digits=literal, bound=bound)
    else:
        raise ParseError(f"Unrecognised alpha spec '{spec}'")

    return negate(alpha) if negative else alpha


def _decimal_value(literal: str) -> Tuple[Fraction, int]:
    """Exact value of a decimal literal and its number of decimals."""
    match = _DECIMAL_LITERAL.match(literal)
    sign, whole, frac = match.group(1), match.group(2), match.group(3) or ''
    value = Fraction(int(whole + frac), 10 ** len(frac))
    return (-value if sign == '-' else value), len(frac)


def _quadratic_enclosure(alpha: AlphaSpec, eps: Fraction) -> RationalInterval:
    # Scale S = 2^k with |b| / (c * S) < eps, then n = isqrt(d * S^2) brackets sqrt(d)
    limit = math.floor(Fraction(abs(alpha.b)) / (alpha.c * eps))
    scale = 1 << limit.bit_length()
    n = math.isqrt(alpha.d * scale * scale)
    root = RationalInterval(Fraction(n, scale), Fraction(n + 1, scale))
    return root.scale(Fraction(alpha.b, alpha.c)).shift(Fraction(alpha.a, alpha.c))


def _embedded_digits(alpha: AlphaSpec) -> str:
    return PI_DIGITS if alpha.kind == KIND_PI else E_DIGITS


def _truncation_enclosure(literal: str, decimals: int) -> RationalInterval:
    """Enclosure of a positive constant from its first `decimals` truncated digits."""
    whole, frac = literal.split('.')
    mantissa = int(whole + frac[:decimals])
    return RationalInterval(Fraction(mantissa, 10 ** decimals),
                            Fraction(mantissa + 1, 10 ** decimals))


def finest_enclosure(alpha: AlphaSpec) -> Optional[RationalInterval]:
    """
    Tightest enclosure the backing data certifies.
    Returns None for quadratic irrationals, which refine without bound.
    """
    if alpha.is_quadratic:
        return None
    if alpha.kind == KIND_DECIMAL:
        value, _ = _decimal_value(alpha.digits)
        box = RationalInterval(value - alpha.bound, value + alpha.bound)
    else:
        literal = _embedded_digits(alpha)
        box = _truncation_enclosure(literal, len(literal.split('.')[1]))
    return box.negate() if alpha.sign < 0 else box


def enclosure(alpha: AlphaSpec, eps: Fraction) -> RationalInterval:
    """Return (lo, hi) with lo < alpha < hi and hi - lo < eps."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")

    if alpha.is_quadratic:
        box = _quadratic_enclosure(alpha, eps)
    elif alpha.kind == KIND_DECIMAL:
        box = finest_enclosure(alpha)
        if box.width >= eps:
            raise PrecisionExhausted(
                f"{alpha.describe()}: error bound {alpha.bound} cannot certify width {eps}; "
                f"supply more digits")
        return box
    else:
        literal = _embedded_digits(alpha)
        available = len(literal.split('.')[1])
        decimals = 0
        while Fraction(1, 10 ** decimals) >= eps:
            decimals += 1
        if decimals > available:
            raise PrecisionExhausted(
                f"{alpha.describe()}: {available} embedded digits cannot certify width {eps}")
        box = _truncation_enclosure(literal, decimals)

    return box.negate() if alpha.sign < 0 else box


def scaled_enclosure(alpha: AlphaSpec, q: int, eps: Fraction) -> RationalInterval:
    """Enclosure of q*alpha of width < eps, scaled exactly from an alpha enclosure."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    return enclosure(alpha, Fraction(eps) / q).scale(q)


def refining_enclosures(alpha: AlphaSpec, eps: Fraction, q: Optional[int] = None,
                        squaring: bool = False,
                        max_rounds: int = MAX_REFINEMENT_ROUNDS) -> Iterator[RationalInterval]:
    """
    Yield ever tighter enclosures of alpha, starting at width < eps.

    Each round halves eps (or squares it when `squaring` is set). Once the
    request falls below what the backing digits certify, the finest
    enclosure is yielded one last time. Raises PrecisionExhausted when the
    consumer still needs more.
    """
    eps = Fraction(eps)
    finest = finest_enclosure(alpha)
    for round_number in range(max_rounds):
        if finest is not None and eps <= finest.width:
            yield finest
            break
        yield enclosure(alpha, eps)
        logger.debug(f"{alpha.describe()}: refinement round {round_number + 1}, eps={float(eps):.3e}")
        eps = min(eps * eps, eps / 2) if squaring else eps / 2
    else:
        raise PrecisionExhausted(
            f"{alpha.describe()}: refinement did not resolve after {max_rounds} rounds", q)
    raise PrecisionExhausted(f"{alpha.describe()}: backing digits exhausted", q)
