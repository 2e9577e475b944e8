"""Pairwise-difference products of preperiodic points against their upper bound.

For N distinct points of the filled Julia set at a place v,

    prod_{i != j} |x_i - x_j|_v
        <= |a_d|_v^(-N(N-1)/(d-1)) max{1, |N|_v^N} r_v^E(N,d).

At a finite place |N|_v <= 1, so the middle factor is 1 and both sides
are exact powers of p. At the archimedean place the left side is an exact
rational; the right side uses the rational upper bound on r'_inf and is
compared exactly when its |a_d| factor is rational, otherwise in log space.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import mpmath

from ppbound.arith import LogAbs, Place, format_rational, padic_valuation, support
from ppbound.errors import ArgumentError
from ppbound.exponents import E_big
from ppbound.polynomial import Polynomial
from ppbound.reals import Real, format_real, rational_power, to_mpf, working_precision
from ppbound.reduction import PlaceReport, arch_filled_radius, radius_at

logger = logging.getLogger(__name__)


def _check_points(points: list[Fraction]) -> list[Fraction]:
    points = [Fraction(x) for x in points]
    if len(points) < 2:
        raise ArgumentError(f"Need at least two points, got {len(points)}")
    if len(set(points)) != len(points):
        raise ArgumentError("Points must be distinct")
    return points


def pairwise_product(points: list[Fraction], place: Place) -> Fraction | LogAbs:
    """
    prod over ordered pairs i != j of |x_i - x_j|_v.

    Each unordered pair is counted twice. Exact rational at the archimedean
    place, a power of p at a finite one.
    """
    points = _check_points(points)
    if place.is_archimedean:
        product = Fraction(1)
        for a, b in permutations(points, 2):
            product *= abs(a - b)
        return product
    exponent = sum(-padic_valuation(a - b, place.p) for a, b in permutations(points, 2))
    return LogAbs(place.p, Fraction(exponent))


@dataclass(frozen=True)
class ProductBoundCheck:
    """
    One comparison of a difference product with its bound.

    margin is log(rhs) - log(lhs) in natural log; holds iff lhs <= rhs.
    """

    place: Place
    N: int
    lhs: Fraction | LogAbs | Real
    rhs: Fraction | LogAbs | Real
    holds: bool
    exact: bool
    margin: Real | None = None

    def to_dict(self) -> dict:
        def render(value):
            if isinstance(value, LogAbs):
                return str(value)
            if isinstance(value, Fraction):
                return format_rational(value)
            return format_real(value)

        return {
            "place": self.place.label,
            "N": self.N,
            "lhs": render(self.lhs),
            "rhs": render(self.rhs),
            "holds": self.holds,
            "exact": self.exact,
            "margin": format_real(self.margin) if self.margin is not None else None,
        }


def _check_finite(
    phi: Polynomial, points: list[Fraction], p: int, report: PlaceReport | None
) -> ProductBoundCheck:
    report = report or radius_at(phi, p)
    N, d = len(points), phi.degree
    lhs = pairwise_product(points, Place.finite(p))
    lead = Fraction(padic_valuation(phi.lead, p) * N * (N - 1), d - 1)
    rhs = LogAbs(p, lead + report.rho * E_big(N, d))
    holds = lhs <= rhs
    with working_precision():
        margin = to_mpf(rhs.exponent - lhs.exponent) * mpmath.log(p)
    return ProductBoundCheck(Place.finite(p), N, lhs, rhs, holds, True, margin)


def _check_archimedean(phi: Polynomial, points: list[Fraction]) -> ProductBoundCheck:
    N, d = len(points), phi.degree
    E = E_big(N, d)
    lhs = pairwise_product(points, Place.archimedean())
    r_prime = arch_filled_radius(phi)
    with working_precision() as bits:
        # r^E |a_d|^(-N(N-1)/(d-1)) = r'^E |a_d|^((E - N(N-1))/(d-1))
        lead_factor = rational_power(abs(phi.lead), Fraction(E - N * (N - 1), d - 1))
        if isinstance(lead_factor, Fraction):
            rhs = lead_factor * Fraction(N) ** N * r_prime**E
            margin = mpmath.log(to_mpf(rhs)) - mpmath.log(to_mpf(lhs))
            return ProductBoundCheck(
                Place.archimedean(), N, lhs, rhs, lhs <= rhs, True, margin
            )
        log_rhs = (
            mpmath.log(lead_factor)
            + N * mpmath.log(N)
            + E * mpmath.log(to_mpf(r_prime))
        )
        margin = log_rhs - mpmath.log(to_mpf(lhs))
        holds = margin >= -mpmath.ldexp(1, -bits) * max(1, abs(log_rhs))
        return ProductBoundCheck(
            Place.archimedean(), N, lhs, mpmath.exp(log_rhs), holds, False, margin
        )


def check_capbd(
    phi: Polynomial,
    points: list[Fraction],
    place: Place,
    report: PlaceReport | None = None,
) -> ProductBoundCheck:
    """
    Compare the difference product of preperiodic points with its bound at one place.

    Args:
        phi: Polynomial the points are preperiodic for
        points: At least two distinct rational preperiodic points
        place: Archimedean or finite place
        report: Reduction report at a finite place, computed if omitted
    """
    points = _check_points(points)
    if place.is_archimedean:
        check = _check_archimedean(phi, points)
    else:
        check = _check_finite(phi, points, place.p, report)
    if not check.holds:
        logger.warning(f"Difference-product bound fails for {phi} at {place}: {check}")
    return check


def difference_product_coherent(points: list[Fraction]) -> bool:
    """Whether pairwise_product multiplied over every place of Q equals 1."""
    points = _check_points(points)
    primes: set[int] = set()
    for a, b in permutations(points, 2):
        primes.update(support(a - b))
    total = pairwise_product(points, Place.archimedean())
    for p in sorted(primes):
        total *= Fraction(p) ** int(pairwise_product(points, Place.finite(p)).exponent)
    return total == 1
