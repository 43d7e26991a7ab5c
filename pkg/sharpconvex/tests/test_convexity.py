import math
from unittest import TestCase

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from sharpconvex.convexity import (
    TheoremParams,
    best_lambda,
    ee6_margin,
    ee6_q_profile,
    ee6_region,
    n3_bound,
    phi,
    phi_interval,
    psi,
    psi_chain_margin,
    sharp_lambda,
    verify_ee6_region,
    verify_phi_nonnegative,
    verify_psi_chain,
    verify_psi_lower_bound,
    verify_subharmonic_chain,
    verify_theorem,
    volume_form
)
from sharpconvex.exceptions import ArgumentError, DomainError
from sharpconvex.spherical_means import sphere_mean
from sharpconvex.utils import log_grid

SMALL_A_GRID = log_grid(1e-3, 1e-1, 20)
COARSE_A_GRID = log_grid(1e-3, 1e2, 60)
BEST_GRID = log_grid(1e-3, 10, 40)


def n3_oracle(p, a):
    """1 + p(p+1) int_0^a t^-2 int_0^t u^2 max(1, u)^(p-2) du dt."""
    value, _ = integrate.dblquad(
        lambda u, t: u * u * max(1.0, u) ** (p - 2) / (t * t),
        0.0, a, 0.0, lambda t: t, epsabs=1e-12, epsrel=1e-12
    )
    return 1 + p * (p + 1) * value


class TestTheoremParams(TestCase):
    def test_initialization(self):
        params = TheoremParams(3, 1, 0.5, [0.1, 1.0])

        assert params.n == 3
        assert params.p == 1.0
        assert params.lam == 0.5
        assert params.a_grid == (0.1, 1.0)
        assert params.as_dict() == {
            "n": 3, "p": 1.0, "lambda": 0.5, "a_grid_size": 2
        }

    def test_default_grid(self):
        assert len(TheoremParams(2, 1, 0.5).a_grid) == 400

    def test_errors(self):
        with self.assertRaises(DomainError):
            TheoremParams(2, 3, 0.5)

        with self.assertRaises(DomainError):
            TheoremParams(1, 1, 0.5)

        with self.assertRaises(ArgumentError):
            TheoremParams(2, 1, 0.5, [])

        with self.assertRaises(ArgumentError):
            TheoremParams(2, 1, 0.5, [-1.0, 1.0])


class TestSharpLambda(TestCase):
    def test_examples(self):
        assert sharp_lambda(2, 1) == 0.5
        assert sharp_lambda(2, 2) == 1.0
        assert sharp_lambda(3, 1) == pytest.approx(2 / 3)

    def test_domain(self):
        with self.assertRaises(DomainError):
            sharp_lambda(3, 0)


class TestVerifyTheorem(TestCase):
    def test_circle_at_unit_radius(self):
        report = verify_theorem(TheoremParams(2, 1, 0.5, [1.0]))

        assert report.passed
        assert report.worst_margin == pytest.approx(
            4 / math.pi - math.sqrt(1.5), abs=1e-10
        )

    def test_equality_at_p2(self):
        for n in (2, 5):
            report = verify_theorem(TheoremParams(n, 2, 1, [0.1, 1.0, 10.0]))
            assert report.passed
            assert abs(report.worst_margin) <= 1e-9

    def test_oversized_lambda_fails_at_small_a(self):
        report = verify_theorem(TheoremParams(2, 1, 0.55, SMALL_A_GRID))

        assert not report.passed
        assert report.worst_margin < 0
        assert report.witness <= 0.1

    def test_sharp_constant_passes(self):
        for n, p in ((2, 1), (3, 0.5), (4, 1.5), (5, 0.5)):
            lam = sharp_lambda(n, p)

            sharp = verify_theorem(TheoremParams(n, p, lam, COARSE_A_GRID))
            assert sharp.passed, sharp

            over = verify_theorem(
                TheoremParams(n, p, lam + 0.05, COARSE_A_GRID)
            )
            assert not over.passed


class TestBestLambda(TestCase):
    def test_circle(self):
        result = best_lambda(2, 1, BEST_GRID)

        assert abs(result.limit_at_zero - 0.5) <= 1e-4
        assert result.consistent

    def test_sphere(self):
        result = best_lambda(3, 1, BEST_GRID)
        assert abs(result.limit_at_zero - 2 / 3) <= 1e-4

    def test_p2_is_flat(self):
        result = best_lambda(4, 2, BEST_GRID)

        assert abs(result.value - 1) <= 1e-8
        assert abs(result.limit_at_zero - 1) <= 1e-8
        assert result.as_dict()["consistent"]

    def test_grid_must_span(self):
        with self.assertRaises(ArgumentError):
            best_lambda(2, 1, [0.01, 1.0])


class TestN3Bound(TestCase):
    def test_examples(self):
        assert n3_bound(1, 1) == pytest.approx(4 / 3)
        assert n3_bound(1, 2) == pytest.approx(13 / 6)
        assert n3_bound(0.5, 0) == 1.0

    def test_continuous_at_one(self):
        for p in (0.2, 0.6, 1.0):
            assert n3_bound(p, 1 + 1e-12) == pytest.approx(
                n3_bound(p, 1), abs=1e-10
            )

    def test_nested_quadrature(self):
        for p in (0.3, 0.7, 1.0):
            for a in (0.5, 1.5, 3.0):
                assert abs(n3_bound(p, a) - n3_oracle(p, a)) <= 1e-8

    def test_volume_form(self):
        for p in (0.3, 0.7, 1.0):
            for a in (0.5, 1.5, 3.0):
                value = volume_form(3, p, a, lambda u: max(1.0, u) ** (p - 2))
                assert value == pytest.approx(n3_bound(p, a), abs=1e-10)

    def test_is_a_lower_bound(self):
        for p in (0.3, 1.0):
            for a in (0.2, 0.9, 1.7, 4.0):
                assert sphere_mean(3, p, a) >= n3_bound(p, a) - 1e-9

    def test_domain(self):
        with self.assertRaises(DomainError):
            n3_bound(1.5, 1)

        with self.assertRaises(DomainError):
            n3_bound(0.5, -1)


class TestVolumeForm(TestCase):
    def test_quadratic(self):
        for n in (2, 3, 6):
            for a in (0.5, 2.0):
                value = volume_form(n, 2, a, lambda u: 1.0)
                assert value == pytest.approx(1 + a * a, rel=1e-10)

    def test_matches_sphere_mean(self):
        def h(u):
            return sphere_mean(4, -1, u, 1.0)

        for a in (0.5, 0.9):
            assert volume_form(4, 1, a, h) == pytest.approx(
                sphere_mean(4, 1, a), abs=1e-9
            )

    def test_origin(self):
        assert volume_form(3, 1, 0, lambda u: 1.0) == 1.0


class TestPhi(TestCase):
    def test_examples(self):
        assert phi(1, 1) == pytest.approx(4 / 3 - math.sqrt(4 / 3),
                                          abs=1e-12)

        for p in np.linspace(0.1, 1.0, 10):
            assert phi(p, 1) >= 0

    def test_nonnegative_on_interval(self):
        for p in np.linspace(0.1, 1.0, 10):
            report = verify_phi_nonnegative(p)
            assert report.passed, report

    def test_interval(self):
        start, stop = phi_interval(1)

        assert start == pytest.approx(1 + 1e-6)
        assert stop == pytest.approx(3 - 1e-6)

    def test_domain(self):
        with self.assertRaises(DomainError):
            phi(1, 0)


class TestPsi(TestCase):
    def test_examples(self):
        for n in (2, 4):
            for a in (0.0, 0.5, 3.0):
                assert psi(n, 2, a) == 1.0

        assert psi(4, 1, 1) == pytest.approx(0.7733980, abs=1e-7)

    def test_lower_bound(self):
        report = verify_psi_lower_bound(4, 1, [0.25, 0.5, 1, 2, 4])
        assert report.passed

    def test_chain(self):
        grid = [0.1, 0.5, 1.0, 2.0, 5.0]

        for n, p in ((4, 0.5), (4, 1.0), (2, 1.5)):
            report = verify_psi_chain(n, p, grid)
            assert report.passed, report

        assert psi_chain_margin(4, 1, 0.0) == pytest.approx(0.0)

    def test_chain_regime(self):
        with self.assertRaises(ArgumentError):
            verify_psi_chain(3, 1, [0.5])


class TestSubharmonicChain(TestCase):
    def test_chain(self):
        grid = np.linspace(0.05, 3, 25)

        for p in (0.3, 0.7, 1.0):
            report = verify_subharmonic_chain(p, grid)
            assert report.passed, report


class TestEE6(TestCase):
    def test_boundary(self):
        for q in (0.0, 0.4, 1.0):
            for y in (0.5, 0.8):
                assert ee6_margin(q, 1.0, y) == pytest.approx(0.0, abs=1e-15)

    def test_negative_below_half(self):
        assert ee6_margin(2, 0.4, 0.3) == pytest.approx(-0.0228, abs=1e-12)

    def test_q_profile_decreasing(self):
        qs = np.linspace(0.0, 2.0, 21)

        for x, y in ((0.9, 0.6), (0.75, 0.5), (0.55, 0.55), (1.0, 0.7)):
            profile = ee6_q_profile(x, y, qs)
            assert np.all(np.diff(profile) <= 1e-15)

    def test_region(self):
        points = ee6_region(count=40, q_count=11)

        assert len(points) == 11 * 40 * 41 // 2
        assert all(0.5 <= y <= x <= 1 for _, x, y in points)
        assert verify_ee6_region(count=40).passed


@settings(max_examples=200)
@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0)
)
def test_ee6_factorization(x, y):
    expected = (1 - x) * (x - y) * (2 * x * x + y - 1)
    assert abs(ee6_margin(2, x, y) - expected) <= 1e-12
