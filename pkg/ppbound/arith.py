"""Exact arithmetic at the places of Q.

Rationals are ``fractions.Fraction`` throughout. A place is either the
archimedean absolute value or a p-adic one; over Q every local degree n_v is 1.
Absolute values at finite places are kept as ``LogAbs`` (a prime base and a
rational exponent) so that comparisons never leave exact arithmetic.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering

import sympy

from ppbound.errors import ArgumentError, InternalAssertionError, SizeGuardError
from ppbound.settings import FACTOR_SIZE_LIMIT

logger = logging.getLogger(__name__)

TRIAL_DIVISION_LIMIT = 10**6


def to_rational(value: int | str | Fraction) -> Fraction:
    """
    Coerce an int, Fraction or "a/b" string to a Fraction.

    Raises:
        ArgumentError: If the value cannot be read as a rational
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ArgumentError(f"Not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ArgumentError(f"Not a rational number: {value!r}") from e
    raise ArgumentError(f"Not a rational number: {value!r}")


def format_rational(x: Fraction) -> str:
    """Render a rational as "a/b", or "a" when the denominator is 1."""
    return str(x)


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    """Deterministic primality test (sympy)."""
    return n >= 2 and bool(sympy.isprime(n))


def _require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ArgumentError(f"Expected a prime, got {p!r}")


@dataclass(frozen=True)
class Place:
    """A place of Q: archimedean when ``p`` is None, otherwise p-adic."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            _require_prime(self.p)

    @classmethod
    def archimedean(cls) -> "Place":
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(p)

    @property
    def is_archimedean(self) -> bool:
        return self.p is None

    @property
    def label(self) -> str:
        """Stable text label: "inf" or the prime."""
        return "inf" if self.p is None else str(self.p)

    def sort_key(self) -> int:
        return 0 if self.p is None else self.p

    def __str__(self) -> str:
        return "∞" if self.p is None else str(self.p)


@total_ordering
@dataclass(frozen=True, eq=False)
class LogAbs:
    """
    The positive real ``base ** exponent`` for a prime base and an exact
    rational exponent. Prime bases make the pair unique up to p^0 = q^0.

    Values with different prime bases compare exactly by clearing the
    exponent denominators and comparing integer powers.
    """

    base: int
    exponent: Fraction

    def __post_init__(self):
        if not isinstance(self.base, int) or not is_prime(self.base):
            raise ArgumentError(f"LogAbs base must be a prime: {self.base!r}")
        if not isinstance(self.exponent, Fraction):
            object.__setattr__(self, "exponent", Fraction(self.exponent))

    def _same_base(self, other: "LogAbs") -> None:
        if self.base != other.base and self.exponent != 0 and other.exponent != 0:
            raise ArgumentError(
                f"Cannot combine powers of {self.base} and {other.base} exactly"
            )

    def __mul__(self, other: "LogAbs") -> "LogAbs":
        if not isinstance(other, LogAbs):
            return NotImplemented
        self._same_base(other)
        base = self.base if self.exponent != 0 else other.base
        return LogAbs(base, self.exponent + other.exponent)

    def __truediv__(self, other: "LogAbs") -> "LogAbs":
        if not isinstance(other, LogAbs):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, power: int | Fraction) -> "LogAbs":
        return LogAbs(self.base, self.exponent * Fraction(power))

    def inverse(self) -> "LogAbs":
        return LogAbs(self.base, -self.exponent)

    def _compare(self, other: "LogAbs") -> int:
        if self.base == other.base or self.exponent == 0 or other.exponent == 0:
            a, b = self.exponent, other.exponent
            if self.base != other.base:
                # one side is 1, so only the sign of the other exponent matters
                a, b = (a, Fraction(0)) if b == 0 else (Fraction(0), b)
            return (a > b) - (a < b)
        scale = math.lcm(self.exponent.denominator, other.exponent.denominator)
        a = int(self.exponent * scale)
        b = int(other.exponent * scale)
        p, q = self.base, other.base
        lhs = p ** max(a, 0) * q ** max(-b, 0)
        rhs = q ** max(b, 0) * p ** max(-a, 0)
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogAbs):
            return NotImplemented
        return self._compare(other) == 0

    def __lt__(self, other: "LogAbs") -> bool:
        if not isinstance(other, LogAbs):
            return NotImplemented
        return self._compare(other) < 0

    def __hash__(self) -> int:
        if self.exponent == 0:
            return hash(0)
        return hash((self.base, self.exponent))

    def exact_value(self) -> Fraction | None:
        """Return the value as a rational when the exponent is an integer."""
        if self.exponent.denominator != 1:
            return None
        return Fraction(self.base) ** int(self.exponent)

    def __str__(self) -> str:
        return f"{self.base}^({self.exponent})"


def padic_valuation(x: Fraction | int, p: int) -> int | float:
    """
    Return the p-adic valuation of x.

    Args:
        x: Rational number
        p: Prime

    Returns:
        v with x = p^v * (p-adic unit); ``math.inf`` when x is zero

    Raises:
        ArgumentError: If p is not prime
    """
    _require_prime(p)
    x = Fraction(x)
    if x == 0:
        return math.inf
    return int(sympy.multiplicity(p, abs(x.numerator))) - int(
        sympy.multiplicity(p, x.denominator)
    )


def abs_at(x: Fraction | int, place: Place) -> Fraction | LogAbs:
    """
    Absolute value of x at a place.

    Archimedean values are exact rationals. Finite values are ``LogAbs`` with
    exponent -v_p(x); zero has no such form and is returned as ``Fraction(0)``.
    """
    x = Fraction(x)
    if place.is_archimedean:
        return abs(x)
    if x == 0:
        return Fraction(0)
    return LogAbs(place.p, Fraction(-padic_valuation(x, place.p)))


def factor(n: int) -> list[tuple[int, int]]:
    """
    Factor a positive integer.

    Trial division by primes up to TRIAL_DIVISION_LIMIT. A prime cofactor is
    kept; a composite one is finished by sympy only below FACTOR_SIZE_LIMIT.

    Args:
        n: Positive integer

    Returns:
        List of (prime, exponent) pairs, primes ascending

    Raises:
        ArgumentError: If n < 1
        SizeGuardError: If a composite cofactor exceeds FACTOR_SIZE_LIMIT
    """
    if not isinstance(n, int) or n < 1:
        raise ArgumentError(f"factor() needs a positive integer, got {n!r}")
    return list(_factor(n, FACTOR_SIZE_LIMIT))


@lru_cache(maxsize=4096)
def _factor(n: int, size_limit: int) -> tuple[tuple[int, int], ...]:
    result: dict[int, int] = {}
    rest = n
    for p in sympy.primerange(2, TRIAL_DIVISION_LIMIT + 1):
        if p * p > rest:
            break
        if rest % p == 0:
            e = int(sympy.multiplicity(p, rest))
            result[p] = e
            rest //= p**e
    if rest == 1:
        return tuple(sorted(result.items()))
    if is_prime(rest):
        result[rest] = 1
        return tuple(sorted(result.items()))
    if rest > size_limit:
        raise SizeGuardError(
            f"Composite cofactor {rest} of {n} exceeds the factorization limit"
        )
    logger.debug(f"Finishing composite cofactor {rest}")
    for r, f in sympy.factorint(rest).items():
        result[r] = result.get(r, 0) + f
    return tuple(sorted(result.items()))


def prime_divisors(n: int) -> list[int]:
    """Primes dividing a nonzero integer, ascending."""
    if n == 0:
        raise ArgumentError("0 has no finite list of prime divisors")
    return [p for p, _ in factor(abs(n))]


def support(x: Fraction) -> list[int]:
    """Primes at which a nonzero rational is not a unit, ascending."""
    x = Fraction(x)
    if x == 0:
        raise ArgumentError("0 is not a unit anywhere")
    return sorted(set(prime_divisors(x.numerator)) | set(prime_divisors(x.denominator)))


def verify_product_formula(x: Fraction | int) -> bool:
    """
    Check that the absolute values of x over all places of Q multiply to 1.

    Raises:
        ArgumentError: If x is zero
    """
    x = Fraction(x)
    if x == 0:
        raise ArgumentError("The product formula needs a nonzero rational")
    product = abs(x)
    for p in support(x):
        product *= Fraction(p) ** -padic_valuation(x, p)
    return product == 1


def require_product_formula(x: Fraction | int) -> None:
    """Raise InternalAssertionError when the product formula fails for x."""
    if not verify_product_formula(x):
        raise InternalAssertionError(f"Product formula failed for {x}")
