import math
from unittest import TestCase

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sharpconvex.exceptions import ArgumentError, DomainError
from sharpconvex.ultraspherical import (
    SHARP,
    UNBOUNDED,
    HypTuple,
    UltrasphericalMeasure,
    check_hyp,
    large_b_ratio,
    necessary_r,
    nu_norm,
    r_star,
    scan_region,
    small_b_coefficient,
    sphere_circle_equivalence_check
)
from sharpconvex.utils import log_grid

B_GRID = log_grid(1e-3, 1e3, 40)


class TestMeasure(TestCase):
    def test_properties(self):
        measure = UltrasphericalMeasure(3)

        assert measure.m == 3.0
        assert measure.lam == 1.5
        assert not measure.discrete
        assert UltrasphericalMeasure(-1).discrete

    def test_second_moment(self):
        for m in (-1, 0, 1, 3):
            moment = UltrasphericalMeasure(m).second_moment()
            assert moment == pytest.approx(1.0 / (m + 2), abs=1e-13)

    def test_norm(self):
        assert UltrasphericalMeasure(0).norm(2, 1) == pytest.approx(
            math.sqrt(2), abs=1e-10
        )

    def test_domain(self):
        with self.assertRaises(DomainError):
            UltrasphericalMeasure(-1.5)


class TestNuNorm(TestCase):
    def test_examples(self):
        assert nu_norm(0, 2, 1) == pytest.approx(math.sqrt(2), abs=1e-10)
        assert nu_norm(-1, 2, 1) == pytest.approx(math.sqrt(2), abs=1e-15)
        assert nu_norm(1, 1, 0) == pytest.approx(1.0, abs=1e-14)

    def test_second_power(self):
        for m in (0, 1, 4):
            for b in (0.3, 2.5):
                assert nu_norm(m, 2, b) == pytest.approx(
                    math.sqrt(1 + b * b), rel=1e-12
                )

    def test_two_point(self):
        assert nu_norm(-1, 1, 0.5) == 1.0
        assert nu_norm(-1, 1, 3.0) == 3.0

    def test_weak_star_limit(self):
        target = nu_norm(-1, 3, 0.5)
        gaps = [
            abs(nu_norm(m, 3, 0.5) - target) for m in (-0.9, -0.99, -0.999)
        ]

        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 1e-2

    def test_errors(self):
        with self.assertRaises(DomainError):
            nu_norm(-2, 2, 0.5)

        with self.assertRaises(DomainError):
            nu_norm(0, 0, 0.5)


class TestEquivalence(TestCase):
    def test_sphere_and_circle_agree(self):
        for n, p, a in ((3, 1, 0.5), (2, 2, 1), (5, 1.7, 2.3), (4, 0.5, 0.9)):
            assert sphere_circle_equivalence_check(n, p, a) <= 1e-9

    def test_errors(self):
        with self.assertRaises(DomainError):
            sphere_circle_equivalence_check(1, 1, 0.5)

        with self.assertRaises(DomainError):
            sphere_circle_equivalence_check(3, 0, 0.5)


class TestNecessaryBound(TestCase):
    def test_examples(self):
        assert necessary_r(0, 1, 2) == pytest.approx(math.sqrt(0.5))
        assert necessary_r(-1, 2, 4) == pytest.approx(math.sqrt(1 / 3))
        assert necessary_r(2.5, 3, 3) == 1.0

    def test_domain(self):
        with self.assertRaises(DomainError):
            necessary_r(-1, 1, 2)

    def test_small_b_coefficient(self):
        assert small_b_coefficient(0, 2) == 0.5
        assert small_b_coefficient(-1, 3) == 1.0
        assert small_b_coefficient(2, 6) == 1.0

        with self.assertRaises(DomainError):
            small_b_coefficient(-1, 1)

    def test_small_b_finite_difference(self):
        h = 1e-3
        for m, p in ((0, 2), (2, 6), (1, 1.5), (-1, 3)):
            estimate = (nu_norm(m, p, h) - 1) / (h * h)
            assert abs(estimate - small_b_coefficient(m, p)) <= 1e-5

    def test_large_b_ratio(self):
        assert large_b_ratio(0, 1, 2, 0.5, 1e4) == pytest.approx(
            0.5, abs=1e-6
        )


class TestHypTuple(TestCase):
    def test_initialization(self):
        t = HypTuple(0, 1, 2, 0.5)

        assert t.as_dict() == {"m": 0.0, "p": 1.0, "q": 2.0, "r": 0.5}
        assert t.with_r(0.25).r == 0.25
        assert t.with_r(0.25).q == 2.0

    def test_errors(self):
        with self.assertRaises(ArgumentError):
            HypTuple(0, 2, 1, 0.5)

        with self.assertRaises(ArgumentError):
            HypTuple(0, 0, 1, 0.5)

        with self.assertRaises(ArgumentError):
            HypTuple(0, 1, math.inf, 0.5)

        with self.assertRaises(DomainError):
            HypTuple(-3, 1, 2, 0.5)


class TestCheckHyp(TestCase):
    def test_constant_passes(self):
        report = check_hyp(HypTuple(0, 1, 2, 0.0), B_GRID)

        assert report.passed
        assert report.grid_size == len(B_GRID) + 2

    def test_necessary_bound_passes(self):
        report = check_hyp(HypTuple(0, 1, 2, math.sqrt(0.5)), B_GRID)
        assert report.passed, report

    def test_larger_r_fails_at_small_b(self):
        report = check_hyp(HypTuple(0, 1, 2, 0.75), B_GRID)

        assert not report.passed
        assert report.witness == 0.0
        assert report.worst_margin == pytest.approx(0.25 - 0.5625 / 2)

    def test_r_above_one_fails_at_infinity(self):
        report = check_hyp(HypTuple(0, 1, 1, 1.1), [1e-3, 1e-2])

        assert not report.passed
        assert report.witness == math.inf
        assert report.worst_margin == pytest.approx(-0.1)

    def test_sign_of_r_is_ignored(self):
        plus = check_hyp(HypTuple(0, 1, 2, 0.6), B_GRID)
        minus = check_hyp(HypTuple(0, 1, 2, -0.6), B_GRID)

        assert plus.worst_margin == minus.worst_margin


class TestRStar(TestCase):
    def test_two_point(self):
        assert abs(r_star(-1, 2, 4, b_grid=B_GRID) - math.sqrt(1 / 3)) <= 1e-3

    def test_circle(self):
        assert abs(r_star(0, 1, 2, b_grid=B_GRID) - math.sqrt(0.5)) <= 1e-3

    def test_sphere_restated(self):
        found = r_star(1, 1, 2, b_grid=B_GRID)
        assert abs(found - necessary_r(1, 1, 2)) <= 1e-3

    def test_large_exponents(self):
        for m, p, q in ((0, 6, 8), (1, 6, 8), (2, 6, 8), (0, 2, 4)):
            found = r_star(m, p, q, b_grid=B_GRID)
            assert abs(found - necessary_r(m, p, q)) <= 1e-3, (m, p, q)

    def test_sphere_restated_higher_dimensions(self):
        precision = 1e-3
        for n in (4, 5, 6):
            for p in (1.0, 1.5):
                found = r_star(n - 2, p, 2, precision=precision,
                               b_grid=B_GRID)
                assert found >= necessary_r(n - 2, p, 2) - precision

    def test_equal_exponents(self):
        assert r_star(0, 2, 2, b_grid=B_GRID) == 1.0

    def test_quasi_norm(self):
        precision = 1e-3
        found = r_star(0, 0.5, 0.8, precision=precision, b_grid=B_GRID)

        assert 0.5 < found <= necessary_r(0, 0.5, 0.8) + precision

    def test_precision_range(self):
        with self.assertRaises(ArgumentError):
            r_star(0, 1, 2, precision=0.5)


class TestScanRegion(TestCase):
    def test_rows(self):
        rows = scan_region([0], [1, 2], [2], b_grid=B_GRID)

        assert [(row["p"], row["q"]) for row in rows] == [(1, 2), (2, 2)]
        for row in rows:
            assert row["status"] == SHARP
            assert row["ratio"] == pytest.approx(1.0, abs=2e-3)
            assert row["error"] is None

    def test_unbounded_cell(self):
        rows = scan_region([-1], [1], [2], precision=1e-3, b_grid=B_GRID)

        assert rows[0]["status"] == UNBOUNDED
        assert rows[0]["necessary_r"] is None
        assert rows[0]["r_star"] <= 1e-3

    def test_no_cells(self):
        with self.assertRaises(ArgumentError):
            scan_region([0], [2], [1])


@settings(max_examples=30, deadline=None)
@given(
    st.one_of(st.just(-1.0), st.floats(min_value=-0.9, max_value=6.0)),
    st.floats(min_value=0.5, max_value=8.0),
    st.floats(min_value=-5.0, max_value=5.0)
)
def test_norm_is_even(m, exponent, b):
    value = nu_norm(m, exponent, b)
    assert abs(value - nu_norm(m, exponent, -b)) <= 1e-10 * max(1.0, value)


@settings(max_examples=30, deadline=None)
@given(
    st.one_of(st.just(-1.0), st.floats(min_value=-0.9, max_value=6.0)),
    st.floats(min_value=1.0, max_value=8.0),
    st.floats(min_value=0.01, max_value=50.0),
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0)
)
def test_norm_grows_with_r(m, q, b, r1, r2):
    lo, hi = sorted((r1, r2))
    smaller = nu_norm(m, q, lo * b)
    larger = nu_norm(m, q, hi * b)

    assert smaller <= larger + 1e-12 * max(1.0, larger)
