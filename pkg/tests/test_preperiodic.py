"""Tests for preperiodic point enumeration and the quadratic scan."""

import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ppbound.arith import Place
from ppbound.bound import BoundInput, theorem_bound
from ppbound.errors import ArgumentError, SizeGuardError
from ppbound.parsing import parse_poly
from ppbound.polynomial import Polynomial
from ppbound.preperiodic import (
    CandidateBox,
    OrbitKind,
    build_box,
    classify_orbit,
    enumerate_preperiodic,
    is_admissible,
    quadratic_parameters,
    scan_one,
    scan_quadratic,
    scan_values,
)
from ppbound.reduction import bad_census

SMALL_PARAMETERS = [
    Fraction(-29, 16),
    Fraction(-21, 16),
    Fraction(-3, 4),
    Fraction(-2),
    Fraction(-1),
    Fraction(0),
    Fraction(1, 4),
    Fraction(-91, 36),
    Fraction(2, 9),
]


def F(*values):
    return [Fraction(v) for v in values]


@pytest.fixture
def phi():
    """z^2 - 29/16."""
    return Polynomial.quadratic(Fraction(-29, 16))


class TestCandidateBox:
    def test_worked_box(self, phi):
        """Denominators divide 4 and |x| stays below about 1.936."""
        box = build_box(phi)
        assert box.prime_caps == {2: 2}
        assert box.modulus == 4
        assert box.denominators() == [1, 2, 4]
        assert math.isclose(float(box.arch_bound), (1 + math.sqrt(33) / 2) / 2, abs_tol=1e-6)

    def test_candidates_in_lowest_terms(self):
        """Each candidate appears once, reduced."""
        box = CandidateBox(arch_bound=Fraction(1), prime_caps={2: 1})
        assert list(box.candidates()) == F(-1, 0, 1, Fraction(-1, 2), Fraction(1, 2))
        assert box.candidate_count() >= 5

    def test_violation_names_the_place(self):
        """A point leaves the box at a prime or at infinity."""
        box = CandidateBox(arch_bound=Fraction(2), prime_caps={2: 1})
        assert box.violation(Fraction(1, 4)) == Place.finite(2)
        assert box.violation(Fraction(1, 3)) == Place.finite(3)
        assert box.violation(Fraction(5, 2)) == Place.archimedean()
        assert box.violation(Fraction(3, 2)) is None
        assert box.contains(Fraction(3, 2))
        assert not box.contains(Fraction(1, 4))


class TestClassifyOrbit:
    def test_cycle_and_tail(self, phi):
        """3/4 reaches the 3-cycle after two steps."""
        box = build_box(phi)
        result = classify_orbit(phi, Fraction(3, 4), box)
        assert result.kind is OrbitKind.PREPERIODIC
        assert (result.tail, result.period) == (2, 3)

    def test_escape(self, phi):
        """0 leaves the box: phi(0) = -29/16 has denominator 16."""
        box = build_box(phi)
        result = classify_orbit(phi, Fraction(0), box)
        assert result.kind is OrbitKind.ESCAPES
        assert result.step == 1
        assert result.place == Place.finite(2)

    def test_outside_box_rejected(self, phi):
        """Starting points must lie in the box."""
        with pytest.raises(ArgumentError):
            classify_orbit(phi, Fraction(5), build_box(phi))

    def test_memo_shares_work(self, phi):
        """A second orbit reuses memoized points and adds its tail."""
        box = build_box(phi)
        memo = {}
        classify_orbit(phi, Fraction(-7, 4), box, memo)
        result = classify_orbit(phi, Fraction(-3, 4), box, memo)
        assert (result.tail, result.period) == (2, 3)
        assert memo[Fraction(-7, 4)].tail == 0


class TestEnumerate:
    def test_worked_quadratic(self, phi):
        """Eight finite points: a 3-cycle with tails of length 1 and 2."""
        pre = enumerate_preperiodic(phi)
        assert pre.finite_points == F(
            Fraction(-7, 4),
            Fraction(-5, 4),
            Fraction(-3, 4),
            Fraction(-1, 4),
            Fraction(1, 4),
            Fraction(3, 4),
            Fraction(5, 4),
            Fraction(7, 4),
        )
        assert pre.cycles() == [(Fraction(-7, 4), Fraction(5, 4), Fraction(-1, 4))]
        assert pre.max_tail == 2
        assert pre.total == 9
        assert pre.portrait() == Counter({(0, 3): 3, (1, 3): 3, (2, 3): 2})

    def test_tails(self, phi):
        """Tail lengths per point."""
        tails = {pt.x: pt.tail for pt in enumerate_preperiodic(phi).points}
        for x in F(Fraction(-7, 4), Fraction(-1, 4), Fraction(5, 4)):
            assert tails[x] == 0
        for x in F(Fraction(7, 4), Fraction(1, 4), Fraction(-5, 4)):
            assert tails[x] == 1
        for x in F(Fraction(3, 4), Fraction(-3, 4)):
            assert tails[x] == 2

    @pytest.mark.parametrize(
        "c,points",
        [
            (Fraction(0), F(-1, 0, 1)),
            (Fraction(1, 4), F(Fraction(-1, 2), Fraction(1, 2))),
            (Fraction(-1), F(-1, 0, 1)),
            (Fraction(-2), F(-2, -1, 0, 1, 2)),
            (Fraction(-3, 4), F(Fraction(-3, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2))),
            (Fraction(1), []),
        ],
    )
    def test_small_quadratics(self, c, points):
        """Known preperiodic sets of z^2 + c."""
        assert enumerate_preperiodic(Polynomial.quadratic(c)).finite_points == points

    def test_quarter_tail(self):
        """z^2 + 1/4: 1/2 is fixed and -1/2 maps onto it."""
        pre = enumerate_preperiodic(Polynomial.quadratic(Fraction(1, 4)))
        tails = {pt.x: (pt.tail, pt.period) for pt in pre.points}
        assert tails == {Fraction(-1, 2): (1, 1), Fraction(1, 2): (0, 1)}
        assert build_box(pre.phi).prime_caps == {2: 1}

    def test_cubic_points(self):
        """z^3 - (1/25)z maps +-1/5 onto the fixed point 0."""
        pre = enumerate_preperiodic(parse_poly("z^3 - (1/25)z"))
        assert {Fraction(-1, 5), Fraction(0), Fraction(1, 5)} <= set(pre.finite_points)

    def test_size_guard(self, phi):
        """A tiny candidate limit aborts the enumeration."""
        with pytest.raises(SizeGuardError):
            enumerate_preperiodic(phi, max_candidates=3)

    def test_size_guard_from_environment(self, phi, monkeypatch):
        """PPB_MAX_CANDIDATES sets the default limit."""
        monkeypatch.setenv("PPB_MAX_CANDIDATES", "3")
        with pytest.raises(SizeGuardError):
            enumerate_preperiodic(phi)

    def test_to_dict(self, phi):
        """Points serialize as a/b strings."""
        data = enumerate_preperiodic(phi).to_dict()
        assert data["finite_count"] == 8
        assert data["total"] == 9
        assert data["cycles"] == [["-7/4", "5/4", "-1/4"]]

    @settings(max_examples=100, deadline=None)
    @given(
        c=st.sampled_from(SMALL_PARAMETERS),
        alpha=st.sampled_from([Fraction(1), Fraction(-1), Fraction(2), Fraction(-1, 2)]),
        beta=st.sampled_from([Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2)]),
    )
    def test_conjugation_equivariance(self, c, alpha, beta):
        """Preperiodic points of h^-1 phi h are h^-1 of those of phi."""
        phi = Polynomial.quadratic(c)
        conj = phi.conjugate(alpha, beta)
        expected = sorted((x - beta) / alpha for x in enumerate_preperiodic(phi).finite_points)
        assert enumerate_preperiodic(conj).finite_points == expected

    @settings(max_examples=200, deadline=None)
    @given(
        j=st.integers(min_value=-400, max_value=36),
        m=st.sampled_from([1, 2, 3, 4, 6, 12]),
    )
    def test_forward_invariant_and_bounded(self, j, m):
        """phi maps the set into itself and the total stays under the bound."""
        assume(math.gcd(j, m) == 1)
        phi = Polynomial.quadratic(Fraction(j, m * m))
        pre = enumerate_preperiodic(phi)
        members = set(pre.finite_points)
        assert all(phi(x) in members for x in members)
        bound = theorem_bound(BoundInput.from_census(2, bad_census(phi)))
        assert pre.total <= bound.count_bound


class TestQuadraticParameters:
    def test_skips_non_square_denominators(self):
        """-1/2 = -2/4 has a non-square reduced denominator."""
        assert quadratic_parameters(2, Fraction(-1), Fraction(0)) == (
            F(Fraction(-3, 4), Fraction(-1, 4), 0),
            1,
        )

    def test_half_open_window(self):
        """c_min is excluded and c_max included."""
        assert quadratic_parameters(2, Fraction(0), Fraction(1, 4)) == ([Fraction(1, 4)], 0)

    def test_full_window_size(self):
        """j runs over 1764 values for m = 12."""
        values, skipped = quadratic_parameters(12, Fraction(-12), Fraction(1, 4))
        assert len(values) + skipped == 1764
        assert values == sorted(values)
        assert all(is_admissible(c) for c in values)

    def test_m_must_be_positive(self):
        """m = 0 is rejected."""
        with pytest.raises(ArgumentError):
            quadratic_parameters(0, Fraction(-1), Fraction(0))

    def test_is_admissible(self):
        """Square reduced denominators only."""
        assert is_admissible(Fraction(-29, 16))
        assert is_admissible(Fraction(5))
        assert not is_admissible(Fraction(1, 2))
        assert not is_admissible(Fraction(1, 8))


class TestScan:
    def test_scan_one(self):
        """z^2 - 29/16 as a scan row."""
        entry = scan_one(Fraction(-29, 16))
        assert entry.finite_count == 8
        assert entry.total == 9
        assert entry.max_tail == 2
        assert entry.cycle_lengths == (3,)
        assert entry.to_dict()["c"] == "-29/16"

    def test_scan_values_sorted(self):
        """Entries come back in ascending c."""
        entries = scan_values(F(0, Fraction(-3, 4), Fraction(-1, 4)))
        assert [e.c for e in entries] == F(Fraction(-3, 4), Fraction(-1, 4), 0)
        assert [e.finite_count for e in entries] == [4, 0, 3]

    def test_scan_values_parallel_matches_serial(self):
        """Worker processes do not change the result."""
        values, _ = quadratic_parameters(4, Fraction(-2), Fraction(1, 4))
        assert scan_values(values, jobs=2) == scan_values(values, jobs=1)

    def test_scan_values_needs_a_worker(self):
        """jobs = 0 is rejected."""
        with pytest.raises(ArgumentError):
            scan_values([Fraction(0)], jobs=0)

    def test_small_scan(self):
        """Over c in (-1, 0] with m = 2 the maximum is 4 at -3/4."""
        result = scan_quadratic(2, Fraction(-1), Fraction(0))
        assert result.max_count == 4
        assert result.argmax == [Fraction(-3, 4)]
        assert result.skipped == 1
        assert result.to_dict()["argmax"] == ["-3/4"]

    @pytest.mark.slow
    def test_full_scan(self):
        """No z^2 + c with every R_v < 4 has more than 8 finite points."""
        result = scan_quadratic(12, Fraction(-12), Fraction(1, 4), jobs=2)
        assert result.max_count == 8
        assert result.argmax == [
            Fraction(-1333, 144),
            Fraction(-91, 36),
            Fraction(-29, 16),
            Fraction(-21, 16),
            Fraction(-133, 144),
        ]
