"""Tests for the Polynomial type and its affine algebra."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppbound.errors import ArgumentError, DegreeError
from ppbound.polynomial import Polynomial

small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=6)
units = st.sampled_from([Fraction(1), Fraction(-1), Fraction(2), Fraction(-1, 2), Fraction(3)])


@pytest.fixture
def phi():
    """z^2 - 29/16."""
    return Polynomial.quadratic(Fraction(-29, 16))


class TestPolynomial:
    def test_coefficients_low_degree_first(self, phi):
        """Coefficients are stored a_0 first."""
        assert phi.coeffs == (Fraction(-29, 16), Fraction(0), Fraction(1))
        assert phi.degree == 2
        assert phi.lead == 1

    def test_trailing_zeros_stripped(self):
        """Zero leading coefficients do not count toward the degree."""
        poly = Polynomial.from_coefficients(0, 0, 0, 2, 0)
        assert poly.degree == 3

    def test_degree_below_two_rejected(self):
        """Linear maps are not dynamical systems of interest here."""
        with pytest.raises(DegreeError):
            Polynomial.from_coefficients(1, 2, 0)

    def test_evaluation(self, phi):
        """phi(5/4) = -1/4."""
        assert phi(Fraction(5, 4)) == Fraction(-1, 4)
        assert phi(Fraction(-1, 4)) == Fraction(-7, 4)

    def test_quadratic_parameter(self):
        """Only z^2 + c reports a parameter."""
        assert Polynomial.quadratic(Fraction(1, 4)).quadratic_parameter() == Fraction(1, 4)
        assert Polynomial.from_coefficients(0, 0, 2).quadratic_parameter() is None
        assert Polynomial.from_coefficients(0, 1, 1).quadratic_parameter() is None

    def test_translate(self, phi):
        """phi(z + b) - b agrees pointwise."""
        shifted = phi.translate(Fraction(1, 2))
        for x in (Fraction(0), Fraction(3, 7), Fraction(-2)):
            assert shifted(x) == phi(x + Fraction(1, 2)) - Fraction(1, 2)

    def test_conjugate_needs_invertible_map(self, phi):
        """alpha = 0 is not an affine bijection."""
        with pytest.raises(ArgumentError):
            phi.conjugate(0, 1)

    def test_string_form(self, phi):
        """str renders in the input grammar."""
        assert str(phi) == "z^2 - 29/16"

    @settings(max_examples=100, deadline=None)
    @given(
        coeffs=st.lists(small_rationals, min_size=2, max_size=4),
        lead=small_rationals.filter(lambda c: c != 0),
        alpha=units,
        beta=small_rationals,
        x=small_rationals,
    )
    def test_conjugation_property(self, coeffs, lead, alpha, beta, x):
        """h^-1(phi(h(x))) for h(z) = alpha z + beta."""
        poly = Polynomial(tuple(coeffs) + (lead,))
        conj = poly.conjugate(alpha, beta)
        assert conj.degree == poly.degree
        assert conj(x) == (poly(alpha * x + beta) - beta) / alpha
