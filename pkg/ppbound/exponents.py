"""Digit-sum exponent functions and the logarithmic threshold M(A, B, t).

e(j, d) is the base-d digit sum of j. For N = c0 + m*k with 0 <= c0 < m:

    e(N, m, d) = c0 + e(k, d) - (d - m) k
    f(N, m, d) = c0 + e(k, d)

and E(N, d), E(N, m, d), F(N, m, d) are twice the sums of e(j, d),
e(j, m, d), f(j, m, d) over 0 <= j < N. These exponents govern the powers
of the filled Julia set radius in pairwise-difference product bounds.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from sympy.ntheory import digits

from ppbound.errors import ArgumentError, InternalAssertionError
from ppbound.reals import Real, lift, log_base, round_up, to_mpf, working_precision

logger = logging.getLogger(__name__)


def _check_degree(d: int) -> None:
    if d < 2:
        raise ArgumentError(f"Degree must be at least 2, got {d}")


def _check_nonnegative(name: str, value: int) -> None:
    if value < 0:
        raise ArgumentError(f"{name} must be non-negative, got {value}")


def _check_m(m: int, d: int) -> None:
    _check_degree(d)
    if not 1 <= m <= d:
        raise ArgumentError(f"m must satisfy 1 <= m <= d={d}, got {m}")


def decompose(N: int, m: int) -> tuple[int, int]:
    """Return (c0, k) with N = c0 + m*k and 0 <= c0 < m."""
    k, c0 = divmod(N, m)
    return c0, k


@dataclass(frozen=True)
class ExpParams:
    """The triple (N, m, d) with its decomposition N = c0 + m*k."""

    N: int
    m: int
    d: int

    def __post_init__(self):
        _check_nonnegative("N", self.N)
        _check_m(self.m, self.d)

    @property
    def c0(self) -> int:
        return self.N % self.m

    @property
    def k(self) -> int:
        return self.N // self.m


def digit_sum(j: int, d: int) -> int:
    """Sum of the base-d digits of j."""
    _check_nonnegative("j", j)
    _check_degree(d)
    return sum(digits(j, d)[1:])


def E_big(N: int, d: int) -> int:
    """E(N, d) = 2 * sum of e(j, d) for 0 <= j < N."""
    _check_nonnegative("N", N)
    _check_degree(d)
    return 2 * sum(digit_sum(j, d) for j in range(N))


def e_small(N: int, m: int, d: int) -> int:
    p = ExpParams(N, m, d)
    return p.c0 + digit_sum(p.k, d) - (d - m) * p.k


def f_small(N: int, m: int, d: int) -> int:
    p = ExpParams(N, m, d)
    return p.c0 + digit_sum(p.k, d)


def E_mid(N: int, m: int, d: int) -> int:
    """E(N, m, d) by direct summation."""
    ExpParams(N, m, d)
    return 2 * sum(e_small(j, m, d) for j in range(N))


def F_mid(N: int, m: int, d: int) -> int:
    """F(N, m, d) by direct summation."""
    ExpParams(N, m, d)
    return 2 * sum(f_small(j, m, d) for j in range(N))


def F_closed(N: int, m: int, d: int) -> int:
    """F(N, m, d) = (m-c)E(k,d) + cE(k+1,d) + (m-1)N - c(m-c), N = c + m*k."""
    if N < 1:
        raise ArgumentError(f"Closed forms need N >= 1, got {N}")
    p = ExpParams(N, m, d)
    c, k = p.c0, p.k
    return (m - c) * E_big(k, d) + c * E_big(k + 1, d) + (m - 1) * N - c * (m - c)


def E_closed(N: int, m: int, d: int) -> int:
    """E(N, m, d) = F(N, m, d) - (d-m)/m * [N^2 - mN + c(m-c)]."""
    F = F_closed(N, m, d)
    c = N % m
    # N^2 - mN + c(m-c) = m * k * (N + c - m), so m always divides it
    numerator = (d - m) * (N * N - m * N + c * (m - c))
    if numerator % m:
        raise InternalAssertionError(
            f"Correction term for E({N},{m},{d}) is not an integer"
        )
    return F - numerator // m


def _is_power_of(n: Fraction, d: int) -> bool:
    """True when n = d^i for an integer i >= 0."""
    if n.denominator != 1 or n < 1:
        return False
    value = n.numerator
    while value % d == 0:
        value //= d
    return value == 1


def _compare_powers(
    lhs: list[tuple[int, int]], rhs: list[tuple[int, int]]
) -> int:
    """
    Compare products of integer powers exactly.

    Each side is a list of (base, exponent). Negative exponents move their
    factor to the other side. Returns -1, 0 or 1.
    """
    left, right = 1, 1
    for base, exp in lhs:
        if exp >= 0:
            left *= base**exp
        else:
            right *= base**-exp
    for base, exp in rhs:
        if exp >= 0:
            right *= base**exp
        else:
            left *= base**-exp
    return (left > right) - (left < right)


@dataclass(frozen=True)
class BoundChecks:
    """Outcome of the four digit-sum inequalities for one (N, m, d)."""

    N: int
    m: int
    d: int
    holds_a: bool
    equal_a: bool
    holds_b: bool
    equal_b: bool
    holds_c: bool
    equal_c: bool
    holds_d: bool | None  # None when N < m
    equal_d: bool | None

    @property
    def all_hold(self) -> bool:
        return (
            self.holds_a
            and self.holds_b
            and self.holds_c
            and self.holds_d is not False
        )


def check_bounds(N: int, m: int, d: int) -> BoundChecks:
    """
    Check the four upper bounds on E and F with exact integer powers.

    Cleared of logarithms (L = (d-1)N):

        (a) E(N,d) <= (d-1) N log_d N
            <=>  d^E(N,d) <= N^L
        (b) E(N,m,d) <= (d-1) N [log_d N + 1 - log_d m - (d-m)N/(m(d-1))]
            <=>  d^(m E(N,m,d) + (d-m) N^2) * m^(m L) <= (d N)^(m L)
        (c) F(N,m,d) <= (d-1) N log_d N
            <=>  d^F(N,m,d) <= N^L
        (d) for N >= m:
            F(N,m,d) <= (d-1) N [log_d N - log_d m + (m-1)/(d-1)]
            <=>  d^(F(N,m,d) - (m-1) N) * m^L <= N^L

    (b) multiplies the bound by m before exponentiating. Equality in (a) is
    expected when N is a power of d, in (b) and (d) when N/m is.
    """
    if N < 1:
        raise ArgumentError(f"check_bounds needs N >= 1, got {N}")
    _check_degree(d)
    if not 1 <= m <= d - 1:
        raise ArgumentError(f"check_bounds needs 1 <= m <= d-1={d - 1}, got {m}")

    L = (d - 1) * N
    E = E_big(N, d)
    Em = E_closed(N, m, d)
    Fm = F_closed(N, m, d)

    a = _compare_powers([(d, E)], [(N, L)])
    b = _compare_powers([(d, m * Em + (d - m) * N * N), (m, m * L)], [(d * N, m * L)])
    c = _compare_powers([(d, Fm)], [(N, L)])
    if N >= m:
        dd = _compare_powers([(d, Fm - (m - 1) * N), (m, L)], [(N, L)])
        holds_d, equal_d = dd <= 0, dd == 0
    else:
        holds_d = equal_d = None

    checks = BoundChecks(
        N=N,
        m=m,
        d=d,
        holds_a=a <= 0,
        equal_a=a == 0,
        holds_b=b <= 0,
        equal_b=b == 0,
        holds_c=c <= 0,
        equal_c=c == 0,
        holds_d=holds_d,
        equal_d=equal_d,
    )
    if not checks.all_hold:
        logger.warning(f"Digit-sum bound violated: {checks}")
    return checks


def expected_equality(N: int, m: int, d: int) -> tuple[bool, bool, bool]:
    """Configurations where (a), (b), (d) attain equality: N or N/m a power of d."""
    n_power = _is_power_of(Fraction(N), d)
    nm_power = _is_power_of(Fraction(N, m), d)
    return n_power, nm_power, nm_power and N >= m


def _hypothesis_margin(A: Real, B: Real, d: int) -> Real:
    """(d-1)A - d^(B-1); exact when A and B are rational with B integral."""
    if isinstance(A, Fraction) and isinstance(B, Fraction) and B.denominator == 1:
        return (d - 1) * A - Fraction(d) ** int(B - 1)
    A_, B_ = lift(A, B)
    if isinstance(A_, Fraction):
        # rational B with a denominator: compare ((d-1)A)^q against d^p
        exponent = B_ - 1
        q, p = exponent.denominator, exponent.numerator
        lhs = ((d - 1) * A_) ** q
        rhs = Fraction(d) ** p
        if lhs == rhs:
            return Fraction(0)
        return Fraction(1) if lhs > rhs else Fraction(-1)
    return (d - 1) * A_ - mpmath.power(d, B_ - 1)


@dataclass(frozen=True)
class ThresholdParams:
    """Positive A, B, real t >= 1 and degree d with (d-1)A >= d^(B-1)."""

    A: Real
    B: Real
    t: Real
    d: int

    def __post_init__(self):
        _check_degree(self.d)
        with working_precision() as bits:
            A, B, t = lift(self.A, self.B, self.t)
            if A <= 0 or B <= 0:
                raise ArgumentError(f"A and B must be positive: A={A}, B={B}")
            if t < 1:
                raise ArgumentError(f"t must be at least 1, got {t}")
            margin = _hypothesis_margin(self.A, self.B, self.d)
            if isinstance(margin, Fraction):
                ok = margin >= 0
            else:
                # tolerate rounding noise at the boundary
                scale = (self.d - 1) * to_mpf(A)
                ok = margin >= -scale * mpmath.ldexp(1, -bits)
            if not ok:
                raise ArgumentError(
                    f"Hypothesis (d-1)A >= d^(B-1) fails for A={A}, B={B}, d={self.d}"
                )

    def hypothesis_margin(self) -> Real:
        """(d-1)A - d^(B-1), or its sign when only the sign is exact."""
        with working_precision():
            return _hypothesis_margin(self.A, self.B, self.d)


def threshold_M(params: ThresholdParams) -> Real:
    """
    M(A, B, t) = t/A (log_d t + log_d(max{1, log_d t}) + 3), rounded up.

    Exact when every logarithm involved is rational.
    """
    with working_precision() as bits:
        d = params.d
        log_t = log_base(params.t, d)
        inner = log_t if log_t > 1 else Fraction(1)
        log_inner = log_base(inner, d)
        t, A, lt, li = lift(params.t, params.A, log_t, log_inner)
        value = t / A * (lt + li + 3)
        result = round_up(value, bits)
    logger.debug(f"M(A={params.A}, B={params.B}, t={params.t}, d={d}) = {result}")
    return result


def eta(x: Real, params: ThresholdParams) -> Real:
    """eta(x) = t log_d x - A x + B."""
    with working_precision():
        log_x = log_base(x, params.d)
        t, A, B, x_, lx = lift(params.t, params.A, params.B, x, log_x)
        return t * lx - A * x_ + B
