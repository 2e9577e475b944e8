"""Complete enumeration of rational preperiodic points and the quadratic scan.

Every rational preperiodic point lies in a finite candidate box: outside
the escape radius at any place, |phi^n(x)| increases strictly along the
orbit, so x cannot have a finite orbit. Every iterate of a preperiodic
point is preperiodic, hence also stays in the box. Classifying each box
rational by exact iteration therefore finds all of them.

Soundness of the box
--------------------
At a prime p let rho_p = max(|a_d|^(-1/(d-1)), max_{i<d} |a_i/a_d|^(1/(d-i))).
For |x|_p > rho_p the term a_d x^d strictly dominates every other term, so
|phi(x)|_p = |a_d|_p |x|_p^d > |x|_p > rho_p, and the orbit escapes. With
e_p = floor(log_p rho_p) (or 0), v_p(x) < -e_p implies |x|_p > rho_p. At a
prime of plain good reduction rho_p <= 1, so preperiodic points are
p-integral there. The archimedean bound comes from
reduction.arch_escape_radius.
"""

import logging
import math
from collections import Counter
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import partial
from itertools import product

from sympy import integer_nthroot

from ppbound.arith import Place, format_rational, padic_valuation, prime_divisors
from ppbound.errors import ArgumentError, InternalAssertionError, SizeGuardError
from ppbound.polynomial import Polynomial
from ppbound.reduction import arch_escape_radius, candidate_primes, escape_exponent
from ppbound.settings import load_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CandidateBox:
    """
    Finite set of rationals containing every preperiodic point.

    Attributes:
        arch_bound: B_inf; preperiodic x satisfy |x| <= B_inf
        prime_caps: p -> e_p; preperiodic x satisfy v_p(x) >= -e_p, and are
            p-integral at every prime not listed
    """

    arch_bound: Fraction
    prime_caps: dict[int, int] = field(default_factory=dict)

    @property
    def modulus(self) -> int:
        """W = prod p^e_p; every box denominator divides W."""
        return math.prod(p**e for p, e in self.prime_caps.items())

    def violation(self, x: Fraction) -> Place | None:
        """First place at which x leaves the box, or None."""
        if x.denominator != 1:
            for p in sorted(self.prime_caps):
                if -padic_valuation(x, p) > self.prime_caps[p]:
                    return Place.finite(p)
            rest = x.denominator
            for p in self.prime_caps:
                while rest % p == 0:
                    rest //= p
            if rest != 1:
                return Place.finite(prime_divisors(rest)[0])
        if abs(x) > self.arch_bound:
            return Place.archimedean()
        return None

    def contains(self, x: Fraction) -> bool:
        return self.modulus % x.denominator == 0 and abs(x) <= self.arch_bound

    def denominators(self) -> list[int]:
        """All w = prod p^e with 0 <= e <= e_p, ascending."""
        primes = sorted(self.prime_caps)
        ranges = [range(self.prime_caps[p] + 1) for p in primes]
        return sorted(
            math.prod(p**e for p, e in zip(primes, exps, strict=True))
            for exps in product(*ranges)
        )

    def candidate_count(self) -> int:
        """Upper estimate of the number of candidates, used for the size guard."""
        return sum(2 * math.floor(self.arch_bound * w) + 1 for w in self.denominators())

    def candidates(self) -> Iterator[Fraction]:
        """u/w in lowest terms, denominators then numerators ascending."""
        for w in self.denominators():
            limit = math.floor(self.arch_bound * w)
            for u in range(-limit, limit + 1):
                if math.gcd(u, w) == 1:
                    yield Fraction(u, w)


def build_box(phi: Polynomial) -> CandidateBox:
    """Candidate box from the escape radius at each place."""
    caps = {
        p: max(0, math.floor(escape_exponent(phi, p))) for p in candidate_primes(phi)
    }
    box = CandidateBox(arch_bound=arch_escape_radius(phi), prime_caps=caps)
    logger.debug(f"Box for {phi}: caps={caps}, arch_bound={float(box.arch_bound):.6f}")
    return box


class OrbitKind(Enum):
    PREPERIODIC = "preperiodic"
    ESCAPES = "escapes"


@dataclass(frozen=True)
class OrbitResult:
    """
    Fate of one orbit.

    Preperiodic points carry the minimal tail m and period n - m with
    phi^m(x) = phi^n(x); escaping ones the first step outside the box and
    the place where it left.
    """

    x: Fraction
    kind: OrbitKind
    tail: int | None = None
    period: int | None = None
    step: int | None = None
    place: Place | None = None

    @property
    def preperiodic(self) -> bool:
        return self.kind is OrbitKind.PREPERIODIC


def classify_orbit(
    phi: Polynomial,
    x: Fraction,
    box: CandidateBox,
    memo: dict[Fraction, OrbitResult] | None = None,
) -> OrbitResult:
    """
    Iterate phi from x until it revisits a point or leaves the box.

    Every point met along the way is added to memo. A memoized preperiodic
    point met here is never on a cycle through the fresh points, so tails
    add up.

    Raises:
        ArgumentError: If x is outside the box
    """
    x = Fraction(x)
    if box.violation(x) is not None:
        raise ArgumentError(f"{format_rational(x)} is outside the candidate box")
    memo = {} if memo is None else memo
    seq: list[Fraction] = []
    index: dict[Fraction, int] = {}
    y = x

    while True:
        if y in index:
            mu = index[y]
            period = len(seq) - mu
            for k, z in enumerate(seq):
                memo[z] = OrbitResult(z, OrbitKind.PREPERIODIC, max(mu - k, 0), period)
            return memo[x]
        known = memo.get(y)
        if known is not None:
            n = len(seq)
            for k, z in enumerate(seq):
                if known.preperiodic:
                    memo[z] = OrbitResult(
                        z, OrbitKind.PREPERIODIC, n - k + known.tail, known.period
                    )
                else:
                    memo[z] = OrbitResult(
                        z, OrbitKind.ESCAPES, step=n - k + known.step, place=known.place
                    )
            return memo[x] if seq else known
        place = box.violation(y)
        if place is not None:
            n = len(seq)
            for k, z in enumerate(seq):
                memo[z] = OrbitResult(z, OrbitKind.ESCAPES, step=n - k, place=place)
            return memo[x]
        index[y] = len(seq)
        seq.append(y)
        y = phi(y)


@dataclass(frozen=True)
class PreperiodicPoint:
    x: Fraction
    tail: int
    period: int


@dataclass(frozen=True)
class PreperiodicSet:
    """
    All rational preperiodic points of phi, sorted by value.

    The point at infinity is always fixed and counts toward total only.
    """

    phi: Polynomial
    points: tuple[PreperiodicPoint, ...]
    includes_infinity: bool = True

    @property
    def finite_points(self) -> list[Fraction]:
        return [pt.x for pt in self.points]

    @property
    def finite_count(self) -> int:
        return len(self.points)

    @property
    def total(self) -> int:
        return self.finite_count + 1

    @property
    def max_tail(self) -> int:
        return max((pt.tail for pt in self.points), default=0)

    def cycles(self) -> list[tuple[Fraction, ...]]:
        """Each rational cycle once, starting at its least element."""
        out = []
        for pt in self.points:
            if pt.tail != 0:
                continue
            cycle = [pt.x]
            y = self.phi(pt.x)
            while y != pt.x:
                cycle.append(y)
                y = self.phi(y)
            if min(cycle) == pt.x:
                out.append(tuple(cycle))
        return sorted(out, key=lambda c: (len(c), c[0]))

    def portrait(self) -> Counter:
        """Multiset of (tail, period) pairs."""
        return Counter((pt.tail, pt.period) for pt in self.points)

    def to_dict(self) -> dict:
        return {
            "polynomial": str(self.phi),
            "finite_points": [
                {"x": format_rational(pt.x), "tail": pt.tail, "period": pt.period}
                for pt in self.points
            ],
            "finite_count": self.finite_count,
            "total": self.total,
            "includes_infinity": self.includes_infinity,
            "max_tail": self.max_tail,
            "cycles": [[format_rational(x) for x in c] for c in self.cycles()],
        }


def _verify(phi: Polynomial, points: dict[Fraction, OrbitResult]) -> None:
    for x, result in points.items():
        if phi(x) not in points:
            raise InternalAssertionError(f"Image of preperiodic {x} is not listed")
        if result.tail == 0:
            y = x
            for _ in range(result.period):
                y = phi(y)
            if y != x:
                raise InternalAssertionError(
                    f"{x} does not return after {result.period} steps"
                )


def enumerate_preperiodic(
    phi: Polynomial, max_candidates: int | None = None
) -> PreperiodicSet:
    """
    Find every rational preperiodic point of phi.

    Args:
        phi: Polynomial over Q
        max_candidates: Abort above this many box candidates (default from
            PPB_MAX_CANDIDATES)

    Raises:
        SizeGuardError: If the candidate box is too large
    """
    limit = load_settings().max_candidates if max_candidates is None else max_candidates
    box = build_box(phi)
    count = box.candidate_count()
    if count > limit:
        raise SizeGuardError(
            f"Candidate box for {phi} has about {count} points (limit {limit})"
        )

    memo: dict[Fraction, OrbitResult] = {}
    found: dict[Fraction, OrbitResult] = {}
    for x in box.candidates():
        result = classify_orbit(phi, x, box, memo)
        if result.preperiodic:
            found[x] = result

    _verify(phi, found)
    points = tuple(
        PreperiodicPoint(x, found[x].tail, found[x].period) for x in sorted(found)
    )
    logger.debug(f"{phi}: {len(points)} finite preperiodic points among {count} candidates")
    return PreperiodicSet(phi, points)


def is_admissible(c: Fraction) -> bool:
    """Whether the reduced denominator of c is a perfect square."""
    _, exact = integer_nthroot(Fraction(c).denominator, 2)
    return bool(exact)


def quadratic_parameters(
    m: int, c_min: Fraction, c_max: Fraction
) -> tuple[list[Fraction], int]:
    """
    c = j/m^2 with c_min < c <= c_max, ascending, and how many were skipped.

    A c whose reduced denominator is not a square has no rational
    preperiodic point and is skipped.
    """
    if m < 1:
        raise ArgumentError(f"m must be at least 1, got {m}")
    c_min, c_max = Fraction(c_min), Fraction(c_max)
    square = m * m
    first = math.floor(c_min * square) + 1
    last = math.floor(c_max * square)
    values, skipped = [], 0
    for j in range(first, last + 1):
        c = Fraction(j, square)
        if is_admissible(c):
            values.append(c)
        else:
            skipped += 1
    return values, skipped


@dataclass(frozen=True)
class ScanEntry:
    """Preperiodic census of z^2 + c for one parameter."""

    c: Fraction
    finite_count: int
    total: int
    max_tail: int
    cycle_lengths: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "c": format_rational(self.c),
            "finite_count": self.finite_count,
            "total": self.total,
            "max_tail": self.max_tail,
            "cycle_lengths": list(self.cycle_lengths),
        }


def scan_one(c: Fraction, max_candidates: int | None = None) -> ScanEntry:
    pre = enumerate_preperiodic(Polynomial.quadratic(c), max_candidates)
    return ScanEntry(
        c=Fraction(c),
        finite_count=pre.finite_count,
        total=pre.total,
        max_tail=pre.max_tail,
        cycle_lengths=tuple(len(cycle) for cycle in pre.cycles()),
    )


def scan_values(
    values: list[Fraction], jobs: int = 1, max_candidates: int | None = None
) -> list[ScanEntry]:
    """
    Enumerate z^2 + c for each c, optionally across worker processes.

    Results come back sorted by c whatever the worker count.
    """
    if jobs < 1:
        raise ArgumentError(f"jobs must be at least 1, got {jobs}")
    worker = partial(scan_one, max_candidates=max_candidates)
    if jobs == 1 or len(values) < 2:
        entries = [worker(c) for c in values]
    else:
        chunksize = max(1, len(values) // (jobs * 8))
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            entries = list(executor.map(worker, values, chunksize=chunksize))
    return sorted(entries, key=lambda e: e.c)


@dataclass(frozen=True)
class ScanResult:
    m: int
    c_min: Fraction
    c_max: Fraction
    entries: tuple[ScanEntry, ...]
    skipped: int = 0

    @property
    def max_count(self) -> int:
        return max((e.finite_count for e in self.entries), default=0)

    @property
    def argmax(self) -> list[Fraction]:
        best = self.max_count
        return [e.c for e in self.entries if e.finite_count == best]

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "c_min": format_rational(self.c_min),
            "c_max": format_rational(self.c_max),
            "skipped": self.skipped,
            "max_count": self.max_count,
            "argmax": [format_rational(c) for c in self.argmax],
            "entries": [e.to_dict() for e in self.entries],
        }


def scan_quadratic(
    m: int,
    c_min: Fraction,
    c_max: Fraction,
    jobs: int = 1,
    max_candidates: int | None = None,
) -> ScanResult:
    """
    Finite preperiodic counts of z^2 + c over c = j/m^2 in (c_min, c_max].

    With m = 12, c_min = -12, c_max = 1/4 this is the search over the
    parameters with every R_v < 4.
    """
    values, skipped = quadratic_parameters(m, c_min, c_max)
    logger.info(f"Scanning {len(values)} parameters c = j/{m * m} ({skipped} skipped)")
    entries = scan_values(values, jobs=jobs, max_candidates=max_candidates)
    return ScanResult(m, Fraction(c_min), Fraction(c_max), tuple(entries), skipped)
