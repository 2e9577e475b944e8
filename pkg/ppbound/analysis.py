"""Full analysis of one polynomial: census, bound, enumeration and cross-checks."""

import logging
from dataclasses import dataclass, field

import sympy

from ppbound.arith import Place, verify_product_formula
from ppbound.bound import (
    BoundInput,
    BoundReport,
    CaseReport,
    classify_case,
    quadratic_outside_case1,
    quadratic_refined_bound,
    theorem_bound,
)
from ppbound.capacity import ProductBoundCheck, check_capbd, difference_product_coherent
from ppbound.polynomial import Polynomial
from ppbound.preperiodic import PreperiodicSet, enumerate_preperiodic, is_admissible
from ppbound.reals import ceil_real
from ppbound.reduction import BadPrimeCensus, bad_census, minrad_holds

logger = logging.getLogger(__name__)


@dataclass
class VerificationSummary:
    """
    Cross-checks between the census, the bound and the enumerated points.

    Checks that do not apply (fewer than two points, not quadratic) are None.
    The refined quadratic comparison is informational and never fails the
    summary.
    """

    product_formula_coefficients: bool = True
    product_formula_differences: bool | None = None
    capbd: list[ProductBoundCheck] = field(default_factory=list)
    minrad: dict[int, bool] = field(default_factory=dict)
    count_consistent: bool = True
    forward_invariant: bool = True
    refined_quadratic: bool | None = None

    @property
    def passed(self) -> bool:
        return (
            self.product_formula_coefficients
            and self.product_formula_differences is not False
            and all(check.holds for check in self.capbd)
            and all(self.minrad.values())
            and self.count_consistent
            and self.forward_invariant
        )

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "product_formula_coefficients": self.product_formula_coefficients,
            "product_formula_differences": self.product_formula_differences,
            "capbd": [check.to_dict() for check in self.capbd],
            "minrad": {str(p): ok for p, ok in sorted(self.minrad.items())},
            "count_consistent": self.count_consistent,
            "forward_invariant": self.forward_invariant,
            "refined_quadratic": self.refined_quadratic,
        }


@dataclass
class AnalysisReport:
    """Everything ppbound knows about one polynomial."""

    text: str
    phi: Polynomial
    census: BadPrimeCensus
    bound: BoundReport
    preperiodic: PreperiodicSet
    verification: VerificationSummary
    case: CaseReport | None = None

    def to_dict(self) -> dict:
        data = {
            "polynomial": self.text,
            "normalized": str(self.phi),
            "degree": self.phi.degree,
            "census": self.census.to_dict(),
            "bound": self.bound.to_dict(),
            "enumeration": self.preperiodic.to_dict(),
            "verification": self.verification.to_dict(),
        }
        if self.case is not None:
            data["case"] = self.case.to_dict()
        return data


def smallest_good_prime(phi: Polynomial) -> int:
    """Least prime dividing no coefficient numerator or denominator."""
    p = 2
    while any(
        c != 0 and (c.numerator % p == 0 or c.denominator % p == 0) for c in phi.coeffs
    ):
        p = sympy.nextprime(p)
    return int(p)


def verify(
    phi: Polynomial,
    census: BadPrimeCensus,
    bound: BoundReport,
    preperiodic: PreperiodicSet,
) -> VerificationSummary:
    """Run every cross-check for one polynomial."""
    summary = VerificationSummary()
    summary.product_formula_coefficients = all(
        verify_product_formula(c) for c in phi.coeffs if c != 0
    )

    points = preperiodic.finite_points
    if len(points) >= 2:
        summary.product_formula_differences = difference_product_coherent(points)
        summary.capbd.append(check_capbd(phi, points, Place.archimedean()))
        for p in census.finite_bad:
            summary.capbd.append(
                check_capbd(phi, points, Place.finite(p), census.report_at(p))
            )
        good = Place.finite(smallest_good_prime(phi))
        summary.capbd.append(check_capbd(phi, points, good))

    if points:
        for p in census.finite_bad:
            summary.minrad[p] = minrad_holds(phi, p, census.report_at(p))

    summary.count_consistent = preperiodic.total <= bound.count_bound
    members = set(points)
    summary.forward_invariant = all(phi(x) in members for x in points)

    c = phi.quadratic_parameter()
    if c is not None and is_admissible(c) and not quadratic_outside_case1(c):
        refined = quadratic_refined_bound(census.s)
        summary.refined_quadratic = preperiodic.finite_count <= ceil_real(refined)
        if not summary.refined_quadratic:
            logger.info(
                f"{phi}: {preperiodic.finite_count} points exceed "
                "the refined quadratic bound"
            )

    if not summary.passed:
        logger.warning(f"Verification failed for {phi}: {summary.to_dict()}")
    return summary


class PolynomialAnalyzer:
    """Runs the census, bound, enumeration and checks for a polynomial."""

    def __init__(self, max_candidates: int | None = None, include_case: bool = False):
        """
        Args:
            max_candidates: Candidate box guard for enumeration (settings default if None)
            include_case: Also classify the proof case
        """
        self.max_candidates = max_candidates
        self.include_case = include_case

    def analyze(self, phi: Polynomial, text: str | None = None) -> AnalysisReport:
        census = bad_census(phi)
        bound = theorem_bound(BoundInput.from_census(phi.degree, census))
        preperiodic = enumerate_preperiodic(phi, self.max_candidates)
        verification = verify(phi, census, bound, preperiodic)
        case = classify_case(phi, census) if self.include_case else None
        logger.info(
            f"Analyzed {phi}: s={census.s}, bound={bound.count_bound}, "
            f"finite points={preperiodic.finite_count}"
        )
        return AnalysisReport(
            text=text if text is not None else str(phi),
            phi=phi,
            census=census,
            bound=bound,
            preperiodic=preperiodic,
            verification=verification,
            case=case,
        )
