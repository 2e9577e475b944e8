"""Tests for digit-sum exponents and the logarithmic threshold."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ppbound.errors import ArgumentError
from ppbound.exponents import (
    E_big,
    E_closed,
    E_mid,
    F_closed,
    F_mid,
    ThresholdParams,
    check_bounds,
    decompose,
    digit_sum,
    e_small,
    eta,
    expected_equality,
    f_small,
    threshold_M,
)
from ppbound.reals import to_mpf, working_precision


def _sweep(max_n: int, max_d: int):
    for d in range(2, max_d + 1):
        for m in range(1, d):
            for N in range(1, max_n + 1):
                yield N, m, d


class TestDigitSums:
    def test_digit_sum(self):
        """e(j, d) is the base-d digit sum."""
        assert digit_sum(0, 2) == 0
        assert digit_sum(7, 2) == 3
        assert digit_sum(10, 3) == 2
        assert digit_sum(255, 16) == 30

    def test_negative_j_rejected(self):
        """Digit sums of negative numbers are undefined here."""
        with pytest.raises(ArgumentError):
            digit_sum(-1, 2)
        with pytest.raises(ArgumentError):
            e_small(-1, 1, 2)
        with pytest.raises(ArgumentError):
            f_small(-3, 1, 3)

    def test_decompose(self):
        """N = c0 + m*k with 0 <= c0 < m."""
        assert decompose(7, 3) == (1, 2)
        assert decompose(6, 3) == (0, 2)

    def test_small_values(self):
        """E(8, 2) = 24 and E(N, d) = N(N-1) for N <= d."""
        assert E_big(8, 2) == 24
        assert E_big(4, 2) == 8
        assert E_big(1, 5) == 0
        assert E_big(4, 5) == 12

    def test_e_with_full_split_is_digit_sum(self):
        """With m = d, e(N, d, d) = e(N, d)."""
        for N in range(200):
            assert e_small(N, 3, 3) == digit_sum(N, 3)

    def test_m_out_of_range(self):
        """m must lie in [1, d]."""
        with pytest.raises(ArgumentError):
            E_mid(5, 0, 3)
        with pytest.raises(ArgumentError):
            F_mid(5, 4, 3)

    def test_degree_below_two(self):
        """d >= 2 throughout."""
        with pytest.raises(ArgumentError):
            E_big(3, 1)


class TestClosedForms:
    def test_closed_forms_match_direct_sums(self):
        """The closed forms of E(N,m,d) and F(N,m,d) equal the direct sums."""
        for d in range(2, 6):
            for m in range(1, d + 1):
                for N in range(1, 80):
                    assert F_closed(N, m, d) == F_mid(N, m, d), (N, m, d)
                    assert E_closed(N, m, d) == E_mid(N, m, d), (N, m, d)

    def test_closed_form_needs_positive_n(self):
        """The closed forms start at N = 1."""
        with pytest.raises(ArgumentError):
            F_closed(0, 1, 2)

    def test_powers_of_d(self):
        """E(d^k, d) = (d-1) k d^k."""
        for d in range(2, 6):
            for k in range(5):
                assert E_big(d**k, d) == (d - 1) * k * d**k

    def test_e_never_exceeds_f(self):
        """E(N,m,d) <= F(N,m,d), with equality when m = d."""
        for d in range(2, 5):
            for m in range(1, d + 1):
                for N in range(0, 60):
                    assert E_mid(N, m, d) <= F_mid(N, m, d)
                    if m == d:
                        assert E_mid(N, m, d) == F_mid(N, m, d)

    def test_single_part_reduces_to_e(self):
        """F(N, 1, d) = E(N, d)."""
        for N in range(1, 50):
            assert F_closed(N, 1, 3) == E_big(N, 3)


class TestBounds:
    def test_equality_at_powers(self):
        """Bound (a) is attained at N = d^k."""
        for d in (2, 3, 5):
            for k in range(4):
                assert check_bounds(d**k, 1, d).equal_a

    def test_quick_sweep(self):
        """All four bounds hold with equality exactly where expected (N <= 40)."""
        for N, m, d in _sweep(40, 5):
            checks = check_bounds(N, m, d)
            assert checks.all_hold, checks
            n_power, nm_power, d_equal = expected_equality(N, m, d)
            assert checks.equal_a == n_power, checks
            assert checks.equal_b == nm_power, checks
            if checks.holds_d is not None:
                assert checks.equal_d == d_equal, checks

    @pytest.mark.slow
    def test_full_sweep(self):
        """The bounds hold for N <= 300, 2 <= d <= 6, 1 <= m <= d-1."""
        failures = []
        for N, m, d in _sweep(300, 6):
            checks = check_bounds(N, m, d)
            n_power, nm_power, d_equal = expected_equality(N, m, d)
            if not checks.all_hold or checks.equal_a != n_power:
                failures.append(checks)
            elif checks.equal_b != nm_power:
                failures.append(checks)
            elif checks.holds_d is not None and checks.equal_d != d_equal:
                failures.append(checks)
        assert failures == []

    def test_bound_d_only_from_m(self):
        """Bound (d) applies only when N >= m."""
        checks = check_bounds(1, 2, 3)
        assert checks.holds_d is None
        assert checks.all_hold

    def test_m_must_leave_a_part(self):
        """check_bounds needs m <= d - 1."""
        with pytest.raises(ArgumentError):
            check_bounds(5, 3, 3)


class TestThreshold:
    def test_hypothesis_enforced(self):
        """(d-1)A >= d^(B-1) is required."""
        with pytest.raises(ArgumentError):
            ThresholdParams(Fraction(1, 4), Fraction(2), Fraction(1), 2)
        with pytest.raises(ArgumentError):
            ThresholdParams(Fraction(1), Fraction(1), Fraction(1, 2), 2)
        with pytest.raises(ArgumentError):
            ThresholdParams(Fraction(0), Fraction(1), Fraction(1), 2)

    def test_exact_threshold(self):
        """M is exact when every logarithm is rational."""
        assert threshold_M(ThresholdParams(Fraction(1), Fraction(1), Fraction(1), 2)) == 3
        assert threshold_M(ThresholdParams(Fraction(1), Fraction(1), Fraction(4), 2)) == 24

    def test_eta_negative_at_worked_point(self):
        """eta(M) < 0 for (A, B, t, d) = (1, 1, 3, 2)."""
        params = ThresholdParams(Fraction(1), Fraction(1), Fraction(3), 2)
        M = threshold_M(params)
        assert eta(M, params) < 0

    def test_eta_positive_below(self):
        """eta is positive somewhere below M, so M is not vacuous."""
        params = ThresholdParams(Fraction(1), Fraction(1), Fraction(3), 2)
        assert eta(Fraction(4), params) > 0

    def test_half_slope_with_unit_offset_is_invalid(self):
        """A = 1/2, B = 1 over d = 2 violates (d-1)A >= d^(B-1)."""
        with pytest.raises(ArgumentError):
            ThresholdParams(Fraction(1, 2), Fraction(1), Fraction(3), 2)

    @settings(max_examples=100, deadline=None)
    @given(
        d=st.integers(min_value=2, max_value=6),
        A=st.fractions(min_value=Fraction(1, 20), max_value=5, max_denominator=50),
        B_scale=st.fractions(min_value=Fraction(1, 10), max_value=1, max_denominator=20),
        t=st.integers(min_value=1, max_value=60),
    )
    def test_eta_negative_above_threshold(self, d, A, B_scale, t):
        """eta(x) < 0 on a dense grid above M(A, B, t)."""
        # largest B allowed is 1 + log_d((d-1)A); stay below it
        with working_precision():
            ceiling = 1 + mpmath.log((d - 1) * to_mpf(A), d)
            assume(ceiling > 0)
            B = Fraction(mpmath.nstr(ceiling * to_mpf(B_scale), 12))
        assume(B > 0)
        try:
            params = ThresholdParams(A, B, Fraction(t), d)
        except ArgumentError:
            assume(False)
        M = threshold_M(params)
        with working_precision():
            for k in range(0, 41):
                x = to_mpf(M) * (1 + mpmath.mpf(k) / 8)
                assert eta(x, params) < 0
