"""The explicit uniform bound on preperiodic points and its case dispatch.

For a global field K with D = [K:Q] (or a function field with constant
field of q elements), a polynomial phi of degree d >= 2 with s bad places,
s_inf of them archimedean, has at most M + 1 K-rational preperiodic
points in P^1(K), where M is chosen row by row:

    q                                          function field, s = 0
    beta^D                                     number field, s = s_inf
    beta^D (d^2-2d+2) (t log_d t + 3t)         0 < t < d
    beta^D (d^2-2d+2) (t log_d t + t log_d log_d t + 3t)   otherwise
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import mpmath

from ppbound.arith import LogAbs, Place
from ppbound.errors import ArgumentError
from ppbound.exponents import ThresholdParams, threshold_M
from ppbound.polynomial import Polynomial
from ppbound.reals import (
    Real,
    ceil_real,
    format_real,
    lift,
    log_base,
    rational_power,
    round_up,
    sqrt,
    to_mpf,
    working_precision,
)
from ppbound.reduction import BadPrimeCensus, arch_filled_radius

logger = logging.getLogger(__name__)


class FieldKind(Enum):
    """Kind of global field the bound is evaluated over."""

    NUMBER_FIELD = "number"
    FUNCTION_FIELD = "function"


class BoundRow(Enum):
    """Which piece of the bound's piecewise definition applies."""

    FUNCTION_FIELD_S0 = "FunctionFieldS0"
    ARCH_ONLY = "ArchOnly"
    SMALL_T = "SmallT"
    GENERAL = "General"


@dataclass(frozen=True)
class BoundInput:
    """
    Inputs of the bound.

    Attributes:
        d: Degree of phi (>= 2)
        s: Number of bad places
        s_inf: Number of archimedean places among them
        kind: Number field or function field
        D: Degree [K:Q] (number fields)
        q: Size of the constant field (function fields)
    """

    d: int
    s: int
    s_inf: int
    kind: FieldKind = FieldKind.NUMBER_FIELD
    D: int = 1
    q: int | None = None

    def __post_init__(self):
        if self.d < 2:
            raise ArgumentError(f"Degree must be at least 2, got {self.d}")
        if self.s < 0 or self.s_inf < 0:
            raise ArgumentError(
                f"s and s_inf must be non-negative: s={self.s}, s_inf={self.s_inf}"
            )
        if self.kind is FieldKind.NUMBER_FIELD:
            if self.D < 1:
                raise ArgumentError(f"Number field degree D must be >= 1, got {self.D}")
            if self.q is not None:
                raise ArgumentError("q applies to function fields only")
            if self.s_inf > self.s:
                raise ArgumentError(f"s_inf={self.s_inf} exceeds s={self.s}")
            if self.s >= 1 and self.s_inf < 1:
                raise ArgumentError("A number field has at least one archimedean bad place")
        else:
            if self.q is None or self.q < 2:
                raise ArgumentError(f"Function fields need q >= 2, got {self.q}")
            if self.s_inf != 0:
                raise ArgumentError(
                    "Function fields have no archimedean places (s_inf = 0)"
                )

    @classmethod
    def number_field(cls, d: int, s: int, s_inf: int = 1, D: int = 1) -> "BoundInput":
        return cls(d=d, s=s, s_inf=s_inf, kind=FieldKind.NUMBER_FIELD, D=D)

    @classmethod
    def function_field(cls, d: int, s: int, q: int) -> "BoundInput":
        return cls(d=d, s=s, s_inf=0, kind=FieldKind.FUNCTION_FIELD, q=q)

    @classmethod
    def from_census(cls, d: int, census: BadPrimeCensus) -> "BoundInput":
        """Inputs over Q from a bad-place census."""
        return cls.number_field(d, census.s, census.s_inf, 1)

    @property
    def is_number_field(self) -> bool:
        return self.kind is FieldKind.NUMBER_FIELD


@dataclass(frozen=True)
class BoundReport:
    """Evaluated bound: no more than count_bound preperiodic points in P^1(K)."""

    input: BoundInput
    sigma: Fraction
    beta: int
    t: Real
    row: BoundRow
    M: Real
    count_bound: int
    flagged: bool = False

    def to_dict(self) -> dict:
        return {
            "d": self.input.d,
            "field": self.input.kind.value,
            "D": self.input.D if self.input.is_number_field else None,
            "q": self.input.q,
            "s": self.input.s,
            "s_inf": self.input.s_inf,
            "sigma": format_real(self.sigma),
            "beta": self.beta,
            "t": format_real(self.t),
            "row": self.row.value,
            "M": format_real(self.M),
            "count_bound": self.count_bound,
            "flagged": self.flagged,
        }


def sigma_of(d: int) -> Fraction:
    """sigma = 7 for d = 2, else 2 * 33^((d-1)(d-2)) / ((d-1)(d-2))."""
    if d < 2:
        raise ArgumentError(f"Degree must be at least 2, got {d}")
    if d == 2:
        return Fraction(7)
    n = (d - 1) * (d - 2)
    return Fraction(2 * 33**n, n)


def beta_of(bound_input: BoundInput, sigma: Fraction) -> int:
    """Covering constant: 9 or max(11, 2d) when s <= sigma*D over a number field, else 1."""
    if bound_input.is_number_field and bound_input.s <= sigma * bound_input.D:
        if bound_input.d == 2:
            return 9
        return max(11, 2 * bound_input.d)
    return 1


def t_of(bound_input: BoundInput, sigma: Fraction | None = None) -> Real:
    """
    t = s - s_inf             number field, s <= sigma*D
        s + D log_2(d) / 2    number field, s > sigma*D
        s                     function field
    """
    if sigma is None:
        sigma = sigma_of(bound_input.d)
    if not bound_input.is_number_field:
        return Fraction(bound_input.s)
    if bound_input.s <= sigma * bound_input.D:
        return Fraction(bound_input.s - bound_input.s_inf)
    with working_precision():
        log_d = log_base(Fraction(bound_input.d), 2)
        s, D, lg = lift(bound_input.s, bound_input.D, log_d)
        return s + D * lg / 2


def theorem_bound(bound_input: BoundInput) -> BoundReport:
    """
    Evaluate M and the integer bound ceil(M) + 1.

    A t <= 0 reaching the logarithmic rows cannot come from a genuine census
    (s > s_inf forces t >= 1); such manual inputs get beta^D with flagged set.
    """
    d, D = bound_input.d, bound_input.D
    sigma = sigma_of(d)
    beta = beta_of(bound_input, sigma)
    t = t_of(bound_input, sigma)
    flagged = False

    with working_precision() as bits:
        if not bound_input.is_number_field and bound_input.s == 0:
            row, M = BoundRow.FUNCTION_FIELD_S0, Fraction(bound_input.q)
        elif bound_input.is_number_field and bound_input.s == bound_input.s_inf:
            row, M = BoundRow.ARCH_ONLY, Fraction(beta**D)
        elif t <= 0:
            logger.warning(f"Degenerate t={t} for {bound_input}; reporting beta^D")
            row, M, flagged = BoundRow.ARCH_ONLY, Fraction(beta**D), True
        else:
            scale = beta**D * (d * d - 2 * d + 2)
            log_t = log_base(t, d)
            if t < d:
                row = BoundRow.SMALL_T
                t_, lt = lift(t, log_t)
                M = scale * (t_ * lt + 3 * t_)
            else:
                row = BoundRow.GENERAL
                log_log_t = log_base(log_t, d)
                t_, lt, llt = lift(t, log_t, log_log_t)
                M = scale * (t_ * lt + t_ * llt + 3 * t_)
        M = round_up(M, bits)
        count_bound = ceil_real(M) + 1

    report = BoundReport(
        input=bound_input,
        sigma=sigma,
        beta=beta,
        t=t,
        row=row,
        M=M,
        count_bound=count_bound,
        flagged=flagged,
    )
    logger.debug(f"theorem_bound: row={row.value}, M={format_real(M)}, bound={count_bound}")
    return report


def quadratic_refined_bound(s: int) -> Real:
    """
    Sharper count of finite rational preperiodic points of z^2 + c over Q.

    5 for s = 1; (2s+1)[log_2(2s+1) + log_2(log_2(2s+1) - 1) + 2] for s >= 2.
    """
    if s < 1:
        raise ArgumentError(f"The refined quadratic bound needs s >= 1, got {s}")
    if s == 1:
        return Fraction(5)
    n = Fraction(2 * s + 1)
    with working_precision() as bits:
        log_n = log_base(n, 2)
        inner = log_base(log_n - 1, 2)
        n_, ln, li = lift(n, log_n, inner)
        return round_up(n_ * (ln + li + 2), bits)


def quadratic_s1_bound(c: Fraction | int) -> int:
    """With only the archimedean place bad: at most 5 finite points when c = -2, else 4."""
    return 5 if Fraction(c) == -2 else 4


def C_of(d: int) -> Real:
    """C_d = d^(-(d-2)/(d-1)); C_2 = 1."""
    if d < 2:
        raise ArgumentError(f"Degree must be at least 2, got {d}")
    with working_precision():
        return rational_power(d, Fraction(-(d - 2), d - 1))


def case1_threshold(d: int) -> Real:
    """Threshold on C_d * r at the archimedean place: 4 if d = 2, else 4 + sqrt(3)."""
    if d < 2:
        raise ArgumentError(f"Degree must be at least 2, got {d}")
    if d == 2:
        return Fraction(4)
    with working_precision():
        return 4 + sqrt(Fraction(3))


def arch_radius_threshold(d: int) -> Real:
    """case1_threshold(d) expressed as a bound on r itself."""
    with working_precision():
        threshold, C = lift(case1_threshold(d), C_of(d))
        return threshold / C


def apart_threshold(d: int) -> Real:
    """
    (sqrt(3) + 2(d-1)) / (sqrt(3) - (d-1) C_d).

    When r exceeds this, the real filled Julia set splits into pieces far
    enough apart for the archimedean counting argument.
    """
    with working_precision():
        root3 = mpmath.sqrt(3)
        C = to_mpf(C_of(d))
        return (root3 + 2 * (d - 1)) / (root3 - (d - 1) * C)


def pairing_params(m: int, d: int) -> tuple[Fraction, Real]:
    """(A, B) = ((d-m)/(m(d-1)), 1 - log_d m) for a split point m."""
    if d < 2:
        raise ArgumentError(f"Degree must be at least 2, got {d}")
    if not 1 <= m <= d:
        raise ArgumentError(f"m must satisfy 1 <= m <= d={d}, got {m}")
    with working_precision():
        A = Fraction(d - m, m * (d - 1))
        log_m = log_base(Fraction(m), d)
        B = 1 - log_m
    return A, B


def pairing_hypothesis_holds(m: int, d: int) -> bool:
    """
    Whether (d-1)A >= d^(B-1) for the pair at m.

    Since d^(B-1) = 1/m this reduces to m <= d-1; the check runs through the
    same precision-guarded comparison as the threshold itself.
    """
    A, B = pairing_params(m, d)
    try:
        ThresholdParams(A, B, Fraction(1), d)
    except ArgumentError:
        return False
    return True


def split_threshold_sum(m: int, d: int, t: Real) -> Real:
    """M(A_m, B_m, t) + M(A_{d-m}, B_{d-m}, t) for the split m + (d-m) = d."""
    if not 1 <= m <= d - 1:
        raise ArgumentError(f"Split needs 1 <= m <= d-1={d - 1}, got {m}")
    total: Real = Fraction(0)
    for k in (m, d - m):
        A, B = pairing_params(k, d)
        value = threshold_M(ThresholdParams(A, B, t, d))
        with working_precision():
            total, value = lift(total, value)
            total = total + value
    return total


@dataclass(frozen=True)
class CaseReport:
    """Which case of the bound's proof a concrete polynomial over Q lands in."""

    case: int
    place: Place | None
    reason: str
    finite_radii: dict[int, LogAbs] = field(default_factory=dict)
    arch_radius: Real | None = None
    arch_exact: bool = False

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "place": self.place.label if self.place else None,
            "reason": self.reason,
            "finite_radii": {str(p): str(r) for p, r in sorted(self.finite_radii.items())},
            "arch_radius": (
                format_real(self.arch_radius) if self.arch_radius is not None else None
            ),
            "arch_exact": self.arch_exact,
        }


def _arch_radius(phi: Polynomial) -> tuple[Real, bool]:
    """R_inf = C_d r_inf, exact for z^2 + c with c < 0, else an upper bound."""
    c = phi.quadratic_parameter()
    if c is not None and c < 0:
        with working_precision():
            root = sqrt(1 - 4 * c)
            (root,) = lift(root)
            return (1 + root) / 2, True
    d = phi.degree
    with working_precision():
        lead_scale = rational_power(abs(phi.lead), Fraction(1, d - 1))
        C, scale, radius = lift(C_of(d), lead_scale, arch_filled_radius(phi))
        return C * scale * radius, False


def classify_case(phi: Polynomial, census: BadPrimeCensus) -> CaseReport:
    """
    Place phi over Q in proof case 1, 2 or 3 (case 0 needs a function field).

    Case 1 holds at the place w of largest R_w when R_w >= 4, R_w > 1 and
    s - s_inf >= 1; at the archimedean place R_w must also reach
    case1_threshold(d), which is only decided when R_inf is known exactly.
    """
    d = phi.degree
    fallback = 2 if d == 2 else 3
    finite_radii = {
        r.place.p: r.radius for r in census.reports if r.bad and r.rho is not None
    }
    arch_radius, arch_exact = _arch_radius(phi)

    def report(case: int, place: Place | None, reason: str) -> CaseReport:
        logger.debug(f"classify_case({phi}): case {case} ({reason})")
        return CaseReport(case, place, reason, finite_radii, arch_radius, arch_exact)

    if census.s - census.s_inf < 1:
        return report(fallback, None, "no finite bad prime")

    best_p = max(finite_radii, key=lambda p: finite_radii[p])
    with working_precision():
        best = rational_power(best_p, finite_radii[best_p].exponent)
        best_, arch_, four = lift(best, arch_radius, 4)
        if best_ >= four and best_ >= arch_:
            reason = f"R_{best_p} = {finite_radii[best_p]} >= 4"
            return report(1, Place.finite(best_p), reason)
        if arch_exact:
            arch_, best_, threshold = lift(arch_radius, best, case1_threshold(d))
            if arch_ >= threshold and arch_ >= best_:
                return report(
                    1, Place.archimedean(), f"R_inf = {format_real(arch_radius)} >= 4"
                )
    return report(fallback, None, "largest R_v below 4")


def quadratic_outside_case1(c: Fraction | int) -> bool:
    """
    True when z^2 + c, c = j/m^2 in lowest terms, has every R_v < 4.

    With R_p = |m|_p^-1 for odd p, R_2 = max(|m/2|_2^-1, 1) and
    R_inf = (1 + sqrt(1 - 4c))/2, this happens exactly when m | 12 and
    -12 < c <= 1/4 (c > 1/4 admits no rational preperiodic point).
    """
    c = Fraction(c)
    m, exact = _square_root_int(c.denominator)
    if not exact:
        raise ArgumentError(f"Denominator of c={c} is not a perfect square")
    return 12 % m == 0 and Fraction(-12) < c <= Fraction(1, 4)


def _square_root_int(n: int) -> tuple[int, bool]:
    value = sqrt(Fraction(n))
    if isinstance(value, Fraction):
        return int(value), True
    return 0, False
