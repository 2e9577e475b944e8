"""Tests for the full per-polynomial analysis."""

import json
from fractions import Fraction

import pytest

from ppbound.analysis import PolynomialAnalyzer, smallest_good_prime, verify
from ppbound.bound import BoundInput, theorem_bound
from ppbound.parsing import parse_poly
from ppbound.polynomial import Polynomial
from ppbound.preperiodic import enumerate_preperiodic
from ppbound.reduction import bad_census


@pytest.fixture
def analyzer():
    """Analyzer that also classifies the proof case."""
    return PolynomialAnalyzer(include_case=True)


def test_smallest_good_prime():
    """2 divides 16, so 3 is the first good prime for z^2 - 29/16."""
    assert smallest_good_prime(Polynomial.quadratic(Fraction(-29, 16))) == 3
    assert smallest_good_prime(parse_poly("z^2 - 30")) == 7
    assert smallest_good_prime(Polynomial.quadratic(1)) == 2


def test_worked_analysis(analyzer):
    """z^2 - 29/16 end to end."""
    report = analyzer.analyze(parse_poly("z^2 - 29/16"), "z^2 - 29/16")
    assert report.census.s == 2
    assert report.bound.count_bound == 55
    assert report.preperiodic.finite_count == 8
    assert report.case.case == 2
    assert report.verification.passed
    assert report.verification.refined_quadratic is None


def test_json_shape(analyzer):
    """The report is JSON-serializable with the documented top-level keys."""
    data = analyzer.analyze(parse_poly("z^2 - 29/16")).to_dict()
    text = json.dumps(data, sort_keys=True)
    assert json.loads(text) == data
    assert set(data) == {
        "polynomial",
        "normalized",
        "degree",
        "census",
        "bound",
        "enumeration",
        "verification",
        "case",
    }
    assert data["census"]["places"][1]["rho"] == "2^(1)"
    assert data["bound"]["M"] == "54"


def test_case_omitted_by_default():
    """The case classifier runs only when asked."""
    report = PolynomialAnalyzer().analyze(parse_poly("z^2 - 2"))
    assert report.case is None
    assert "case" not in report.to_dict()


def test_verification_checks_every_bad_prime():
    """One capacity check per bad prime, plus infinity and a good prime."""
    phi = parse_poly("z^2 - 29/16")
    census = bad_census(phi)
    bound = theorem_bound(BoundInput.from_census(2, census))
    summary = verify(phi, census, bound, enumerate_preperiodic(phi))
    assert [check.place.label for check in summary.capbd] == ["inf", "2", "3"]
    assert summary.minrad == {2: True}
    assert summary.product_formula_differences
    assert summary.forward_invariant
    assert summary.count_consistent


def test_refined_quadratic_outside_the_window():
    """z^2 + 1/25 lies in case 1, where the refined count is checked."""
    report = PolynomialAnalyzer().analyze(Polynomial.quadratic(Fraction(1, 25)))
    assert report.verification.refined_quadratic is True
    assert report.verification.passed


def test_single_point_skips_pair_checks():
    """Fewer than two points leaves the pairwise checks unset."""
    report = PolynomialAnalyzer().analyze(Polynomial.quadratic(1))
    assert report.preperiodic.finite_count == 0
    assert report.verification.product_formula_differences is None
    assert report.verification.capbd == []
    assert report.verification.passed


@pytest.mark.parametrize(
    "text", ["z^2 - 3/4", "z^2 - 2", "z^3 - (1/25)z", "z^2 - (1/3)z", "343z^3 - 7z^2"]
)
def test_known_polynomials_verify(text):
    """Every cross-check passes on the worked polynomials."""
    assert PolynomialAnalyzer().analyze(parse_poly(text)).verification.passed
