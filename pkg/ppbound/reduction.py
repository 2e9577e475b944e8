"""Places of bad reduction and filled Julia set radii over Q.

At a finite place p the filled Julia set of phi lies in a smallest closed
disk of radius r'_p, and the normalized radius r_p = |a_d|_p^(1/(d-1)) r'_p
satisfies r_p >= 1, with equality exactly when phi has potentially good
reduction at p. We report r_p = p^rho with rho rational.

Computing r'_p without leaving Q
--------------------------------
Translate phi so that a fixed point b sits at 0 and scale it monic. The
smallest disk containing the filled Julia set is then centred at 0 (any
point of an ultrametric disk is a centre) and has radius
max(1, max_i |a_i|^(1/(d-i))). By the Newton polygon, that maximum is the
largest absolute value of a nonzero root of the translated polynomial,
i.e. of a displacement x - b with x in phi^-1(b). The disk is unique, so
the choice of b does not matter. All these displacements, over all fixed
points at once, are the roots of

    P(w) = Res_z(phi(z) - z, phi(z + w) - z),

a polynomial with rational coefficients. Reading the largest slope of the
Newton polygon of P (zero roots removed) gives mu = max log_p |x - b|_p, and

    rho = max(0, mu - v_p(a_d)/(d-1)).

This needs no knowledge of the dynamics at p, so wild ramification in the
residue field does not complicate it.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy

from ppbound.arith import LogAbs, Place, padic_valuation, prime_divisors
from ppbound.errors import InternalAssertionError
from ppbound.polynomial import Polynomial
from ppbound.reals import sqrt_upper

logger = logging.getLogger(__name__)

QUARTER = Fraction(1, 4)


def plain_good_reduction(phi: Polynomial, p: int) -> bool:
    """All coefficients p-integral and the leading coefficient a p-unit."""
    Place.finite(p)
    if padic_valuation(phi.lead, p) != 0:
        return False
    return all(c.denominator % p != 0 for c in phi.coeffs)


def candidate_primes(phi: Polynomial) -> list[int]:
    """
    Primes at which phi fails plain good reduction, ascending.

    These divide a coefficient denominator or the numerator of a_d; every
    prime of bad reduction is among them.
    """
    primes: set[int] = set()
    for c in phi.coeffs:
        if c.denominator != 1:
            primes.update(prime_divisors(c.denominator))
    if abs(phi.lead.numerator) != 1:
        primes.update(prime_divisors(phi.lead.numerator))
    return sorted(primes)


def _to_sympy(x: Fraction) -> sympy.Rational:
    return sympy.Rational(x.numerator, x.denominator)


def sylvester_matrix(f: list, g: list) -> sympy.Matrix:
    """Sylvester matrix of two coefficient lists given highest degree first."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(f) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(g) + [0] * (size - n - 1 - i))
    return sympy.Matrix(rows)


@lru_cache(maxsize=256)
def displacement_resultant(phi: Polynomial) -> tuple[Fraction, ...]:
    """
    Coefficients (low degree first) of P(w) = Res_z(phi(z) - z, phi(z+w) - z).

    The roots of P are the displacements x - b for b a fixed point of phi and
    x in phi^-1(b). P(0) = 0.

    Raises:
        InternalAssertionError: If P vanishes identically or has no nonzero root
    """
    z, w = sympy.symbols("z w")
    expr = sum(_to_sympy(c) * z**i for i, c in enumerate(phi.coeffs))
    f = sympy.Poly(expr - z, z)
    g = sympy.Poly(sympy.expand(expr.subs(z, z + w)) - z, z)
    matrix = sylvester_matrix(f.all_coeffs(), g.all_coeffs())
    det = sympy.expand(matrix.det(method="bareiss"))
    resultant = sympy.Poly(det, w)
    coeffs = tuple(
        Fraction(int(c.p), int(c.q)) for c in reversed(resultant.all_coeffs())
    )
    if all(c == 0 for c in coeffs):
        raise InternalAssertionError(f"Displacement resultant of {phi} vanishes")
    if coeffs[0] != 0:
        raise InternalAssertionError(f"Displacement resultant of {phi} has P(0) != 0")
    if len(_strip_zero_roots(coeffs)) < 2:
        raise InternalAssertionError(
            f"Displacement resultant of {phi} has no nonzero root"
        )
    logger.debug(f"Displacement resultant of {phi} has degree {len(coeffs) - 1}")
    return coeffs


def _strip_zero_roots(coeffs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    start = 0
    while start < len(coeffs) and coeffs[start] == 0:
        start += 1
    return coeffs[start:]


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the points (i, v_p(c_i)) over nonzero c_i."""

    p: int
    vertices: tuple[tuple[int, Fraction], ...]

    @classmethod
    def from_coefficients(cls, coeffs: tuple[Fraction, ...], p: int) -> "NewtonPolygon":
        points = [
            (i, Fraction(padic_valuation(c, p))) for i, c in enumerate(coeffs) if c != 0
        ]
        # Andrew's monotone chain, lower half
        hull: list[tuple[int, Fraction]] = []
        for point in points:
            while len(hull) >= 2:
                (x0, y0), (x1, y1) = hull[-2], hull[-1]
                cross = (x1 - x0) * (point[1] - y0) - (y1 - y0) * (point[0] - x0)
                if cross > 0:
                    break
                hull.pop()
            hull.append(point)
        return cls(p, tuple(hull))

    def slopes(self) -> list[tuple[Fraction, int]]:
        """(slope, horizontal length) of each segment, slopes ascending."""
        out = []
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:], strict=False):
            out.append((Fraction(y1 - y0, x1 - x0), x1 - x0))
        return out

    @property
    def max_slope(self) -> Fraction:
        segments = self.slopes()
        if not segments:
            raise InternalAssertionError("Newton polygon has no segments")
        return segments[-1][0]

    def root_valuations(self) -> list[Fraction]:
        """p-adic valuations of the roots, with multiplicity."""
        values: list[Fraction] = []
        for slope, length in self.slopes():
            values.extend([-slope] * length)
        return sorted(values)


@dataclass(frozen=True)
class PlaceReport:
    """
    Reduction data at one place.

    For a finite place the normalized radius is r_v = p^rho and the radius of
    the smallest disk containing the filled Julia set is r'_v = p^r_prime_rho.
    The archimedean place is always counted as bad; its report carries the
    real-line escape radius and an upper bound on r'_inf instead.
    """

    place: Place
    bad: bool
    rho: Fraction | None = None
    r_prime_rho: Fraction | None = None
    plain_good: bool = False
    escape_radius: Fraction | None = None
    filled_radius: Fraction | None = None

    @property
    def radius(self) -> LogAbs | None:
        """r_v as an exact power of p (finite places only)."""
        if self.rho is None:
            return None
        return LogAbs(self.place.p, self.rho)

    def to_dict(self) -> dict:
        if self.place.is_archimedean:
            return {
                "place": self.place.label,
                "bad": self.bad,
                "escape_radius": str(self.escape_radius),
                "filled_radius": str(self.filled_radius),
            }
        return {
            "place": self.place.label,
            "bad": self.bad,
            "plain_good": self.plain_good,
            "rho": str(self.radius),
            "r_prime": str(LogAbs(self.place.p, self.r_prime_rho)),
        }


@dataclass(frozen=True)
class BadPrimeCensus:
    """All places with their reports: the archimedean place first."""

    reports: tuple[PlaceReport, ...]
    s_inf: int = 1
    s: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "s", sum(1 for r in self.reports if r.bad))

    @property
    def finite_bad(self) -> list[int]:
        return [r.place.p for r in self.reports if r.bad and not r.place.is_archimedean]

    @property
    def archimedean(self) -> PlaceReport:
        return next(r for r in self.reports if r.place.is_archimedean)

    def report_at(self, p: int) -> PlaceReport | None:
        return next((r for r in self.reports if r.place.p == p), None)

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "s_inf": self.s_inf,
            "finite_bad": self.finite_bad,
            "places": [r.to_dict() for r in self.reports],
        }


def radius_at(phi: Polynomial, p: int) -> PlaceReport:
    """
    Normalized filled Julia set radius of phi at the prime p.

    Args:
        phi: Polynomial of degree d >= 2
        p: Prime (primes of plain good reduction are allowed and give rho = 0)

    Returns:
        PlaceReport with rho = max(0, mu - v_p(a_d)/(d-1))
    """
    place = Place.finite(p)
    plain_good = plain_good_reduction(phi, p)
    coeffs = _strip_zero_roots(displacement_resultant(phi))
    mu = NewtonPolygon.from_coefficients(coeffs, p).max_slope
    lead_term = Fraction(padic_valuation(phi.lead, p), phi.degree - 1)
    r_prime_rho = max(mu, lead_term)
    rho = r_prime_rho - lead_term
    if plain_good and rho != 0:
        raise InternalAssertionError(f"{phi} has plain good reduction at {p} but rho={rho}")
    # Newton slopes have denominators at most deg P
    denominator_bound = math.lcm(phi.degree - 1, *range(1, max(len(coeffs), 2)))
    if denominator_bound % rho.denominator:
        raise InternalAssertionError(
            f"rho={rho} at {p} has denominator outside lcm {denominator_bound}"
        )
    report = PlaceReport(
        place=place,
        bad=rho > 0,
        rho=rho,
        r_prime_rho=r_prime_rho,
        plain_good=plain_good,
    )
    logger.debug(f"radius_at({phi}, {p}): rho={rho}, bad={report.bad}")
    return report


def arch_escape_radius(phi: Polynomial) -> Fraction:
    """
    A rational B with |phi^n(x)| -> infinity for every real x with |x| > B.

    B = max(1, (1 + sum_{i<d} |a_i|) / |a_d|): for |x| > B,
    |phi(x)| >= |x|^(d-1) (|a_d||x| - sum |a_i|) > |x|^(d-1) >= |x|, and the
    ratio |phi(x)|/|x| only grows along the orbit.

    For z^2 + c with c <= 1/4 the bound tightens to the larger real fixed
    point (1 + sqrt(1 - 4c))/2, rounded up by less than 1e-6: beyond it
    x^2 + c > |x|, and the orbit increases with no fixed point to converge to.
    """
    c = phi.quadratic_parameter()
    if c is not None and c <= QUARTER:
        return (1 + sqrt_upper(1 - 4 * c)) / 2
    tail = sum((abs(a) for a in phi.coeffs[:-1]), Fraction(0))
    return max(Fraction(1), (1 + tail) / abs(phi.lead))


def arch_filled_radius(phi: Polynomial) -> Fraction:
    """
    Rational upper bound on the radius of a disk about 0 holding the complex
    filled Julia set.

    For z^2 + c, |z| > (1 + sqrt(1 + 4|c|))/2 forces |z^2 + c| > |z|; this is
    the exact radius (1 + sqrt(1 - 4c))/2 when c <= 0. Otherwise the generic
    escape radius, whose proof only uses the triangle inequality.
    """
    c = phi.quadratic_parameter()
    if c is not None:
        return (1 + sqrt_upper(1 + 4 * abs(c))) / 2
    tail = sum((abs(a) for a in phi.coeffs[:-1]), Fraction(0))
    return max(Fraction(1), (1 + tail) / abs(phi.lead))


def escape_exponent(phi: Polynomial, p: int) -> Fraction:
    """
    log_p of the p-adic escape radius.

    The radius is max(|a_d|^(-1/(d-1)), max_{i<d} |a_i/a_d|^(1/(d-i))). Beyond
    it a_d z^d strictly dominates every other term, so |phi(z)| = |a_d||z|^d
    > |z| and the orbit escapes.
    """
    d = phi.degree
    v_lead = padic_valuation(phi.lead, p)
    best = Fraction(v_lead, d - 1)
    for i, a in enumerate(phi.coeffs[:-1]):
        if a != 0:
            best = max(best, Fraction(v_lead - padic_valuation(a, p), d - i))
    return best


def bad_census(phi: Polynomial) -> BadPrimeCensus:
    """
    Reduction data at the archimedean place and every candidate prime.

    Returns:
        BadPrimeCensus with s = 1 + number of finite bad primes
    """
    reports = [
        PlaceReport(
            place=Place.archimedean(),
            bad=True,
            escape_radius=arch_escape_radius(phi),
            filled_radius=arch_filled_radius(phi),
        )
    ]
    for p in candidate_primes(phi):
        reports.append(radius_at(phi, p))
    census = BadPrimeCensus(tuple(reports))
    logger.info(f"Census of {phi}: s={census.s}, finite bad primes {census.finite_bad}")
    return census


def minrad_threshold(d: int) -> Fraction:
    """Smallest rho a bad prime can have when phi has a rational preperiodic point."""
    if d == 2:
        return Fraction(1)
    return Fraction(1, (d - 1) * (d - 2))


def minrad_holds(phi: Polynomial, p: int, report: PlaceReport) -> bool:
    """
    Lower bound on the radius at a bad prime.

    When phi has a rational preperiodic point, every bad prime has
    rho >= 1 (d = 2) or rho >= 1/((d-1)(d-2)) (d >= 3). Good primes pass.
    """
    if not report.bad:
        return True
    if report.place.p != p:
        raise InternalAssertionError(f"Report for {report.place} used at {p}")
    return report.rho >= minrad_threshold(phi.degree)
