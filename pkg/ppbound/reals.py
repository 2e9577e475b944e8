"""Real numbers that stay exact when they can.

A ``Real`` is either a ``Fraction`` (exact) or an ``mpmath.mpf`` evaluated
at the configured precision plus guard bits. Logarithms of perfect powers,
square roots of rational squares and the like stay rational; anything
transcendental falls back to mpmath. Upper bounds that feed integer counts
are rounded up by a relative margin of 2^-precision.
"""

import logging
import math
from collections.abc import Iterator
from contextlib import contextmanager
from fractions import Fraction

import mpmath
import sympy

from ppbound.errors import ArgumentError
from ppbound.settings import load_settings

logger = logging.getLogger(__name__)

Real = Fraction | mpmath.mpf

GUARD_BITS = 32


def precision_bits() -> int:
    """Configured fractional bits (PPB_PRECISION)."""
    return load_settings().precision


@contextmanager
def working_precision(bits: int | None = None) -> Iterator[int]:
    """Run a block at the configured precision plus guard bits."""
    base = precision_bits() if bits is None else bits
    with mpmath.workprec(base + GUARD_BITS):
        yield base


def to_mpf(x: Real | int) -> mpmath.mpf:
    """Convert to mpf at the current working precision."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def lift(*values: Real | int) -> tuple[Real, ...]:
    """Return the values unchanged if all are exact, else all as mpf."""
    if all(isinstance(v, (Fraction, int)) for v in values):
        return tuple(Fraction(v) for v in values)
    return tuple(to_mpf(v) for v in values)


def exact_log(x: Fraction, base: int) -> Fraction | None:
    """
    log_base(x) as a rational when x is a rational power of base.

    Returns None when the logarithm is irrational.
    """
    if x <= 0:
        raise ArgumentError(f"Logarithm of a non-positive number: {x}")
    if base < 2:
        raise ArgumentError(f"Logarithm base must be >= 2: {base}")
    if x == 1:
        return Fraction(0)
    root, power = base, 1
    perfect = sympy.perfect_power(base)
    if perfect:
        root, power = int(perfect[0]), int(perfect[1])
    # x must be root^k for an integer k
    num, den = x.numerator, x.denominator
    if num != 1 and den != 1:
        return None
    n, sign = (num, 1) if den == 1 else (den, -1)
    k = int(sympy.multiplicity(root, n))
    if root**k != n:
        return None
    return Fraction(sign * k, power)


def log_base(x: Real, base: int) -> Real:
    """log_base(x), exact when possible. Call inside working_precision()."""
    if isinstance(x, Fraction):
        exact = exact_log(x, base)
        if exact is not None:
            return exact
    value = to_mpf(x)
    if value <= 0:
        raise ArgumentError(f"Logarithm of a non-positive number: {x}")
    return mpmath.log(value) / mpmath.log(base)


def sqrt(x: Fraction) -> Real:
    """Square root of a non-negative rational, exact for rational squares."""
    if x < 0:
        raise ArgumentError(f"Square root of a negative number: {x}")
    num_root, num_exact = sympy.integer_nthroot(x.numerator, 2)
    den_root, den_exact = sympy.integer_nthroot(x.denominator, 2)
    if num_exact and den_exact:
        return Fraction(int(num_root), int(den_root))
    return mpmath.sqrt(to_mpf(x))


def sqrt_upper(x: Fraction, scale: int = 10**7) -> Fraction:
    """
    A rational upper bound on sqrt(x) within 1/scale, exact for squares.
    """
    if x < 0:
        raise ArgumentError(f"Square root of a negative number: {x}")
    exact = sqrt(x)
    if isinstance(exact, Fraction):
        return exact
    # sqrt(n/d) = sqrt(n*d)/d
    n, d = x.numerator, x.denominator
    root, _ = sympy.integer_nthroot(n * d * scale * scale, 2)
    return Fraction(int(root) + 1, d * scale)


def rational_power(base: Fraction | int, exponent: Fraction | int) -> Real:
    """base**exponent for base > 0, exact when the result is rational."""
    base, exponent = Fraction(base), Fraction(exponent)
    if base <= 0:
        raise ArgumentError(f"Rational power of a non-positive base: {base}")
    value = base**exponent.numerator
    root = exponent.denominator
    num_root, num_exact = sympy.integer_nthroot(value.numerator, root)
    den_root, den_exact = sympy.integer_nthroot(value.denominator, root)
    if num_exact and den_exact:
        return Fraction(int(num_root), int(den_root))
    return mpmath.power(to_mpf(base), to_mpf(exponent))


def round_up(x: Real, bits: int | None = None) -> Real:
    """Inflate an inexact positive value by a relative 2^-precision margin."""
    if isinstance(x, Fraction):
        return x
    precision = precision_bits() if bits is None else bits
    return x + abs(x) * mpmath.ldexp(1, -precision)


def ceil_real(x: Real) -> int:
    if isinstance(x, Fraction):
        return math.ceil(x)
    return int(mpmath.ceil(x))


def decimal_digits(bits: int | None = None) -> int:
    """Decimal digits matching the configured binary precision."""
    precision = precision_bits() if bits is None else bits
    return max(1, int(precision * math.log10(2)))


def format_real(x: Real, bits: int | None = None) -> str:
    """
    Render a real for reports.

    Exact values render as "a/b"; inexact values as fixed-point decimal
    strings carrying the declared number of significant digits.
    """
    if isinstance(x, Fraction):
        return str(x)
    digits = decimal_digits(bits)
    return mpmath.nstr(x, digits, min_fixed=-(10**9), max_fixed=10**9)
