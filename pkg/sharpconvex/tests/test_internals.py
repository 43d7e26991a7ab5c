import math
from unittest import TestCase

from sharpconvex.exceptions import ArgumentError
from sharpconvex.internals import (
    DEFAULT_TOLERANCE,
    GridCheck,
    MarginDriver,
    PredicateDriver,
    VerifyReport,
    check_tolerance,
    parallel_map
)


class OrderSensitiveDriver(MarginDriver):
    """Fails below ``threshold`` and passes above it."""

    def __init__(self, threshold):
        self.threshold = threshold
        self.orders = []

    def margin(self, point, order):
        self.orders.append(order)
        return 1.0 if order >= self.threshold else -1.0


class TestVerifyReport(TestCase):
    def setUp(self):
        self.report = VerifyReport(True, 0.25, 2.0, 10, 256, label="demo")

    def test_initialization(self):
        assert self.report.passed
        assert self.report
        assert self.report.worst_margin == 0.25
        assert self.report.witness == 2.0
        assert self.report.grid_size == 10
        assert self.report.quad_order == 256
        assert self.report.tolerance == DEFAULT_TOLERANCE
        assert self.report.label == "demo"

    def test_as_dict(self):
        assert self.report.as_dict() == {
            "label": "demo",
            "pass": True,
            "worst_margin": 0.25,
            "witness": 2.0,
            "grid_size": 10,
            "quad_order": 256,
            "tolerance": DEFAULT_TOLERANCE
        }

    def test_merge_keeps_the_worst(self):
        other = VerifyReport(False, -0.5, 0.0, 1, 512)
        merged = self.report.merge(other)

        assert not merged.passed
        assert merged.worst_margin == -0.5
        assert merged.witness == 0.0
        assert merged.grid_size == 11
        assert merged.quad_order == 512
        assert merged.label == "demo"

    def test_tuple_witness_is_plain(self):
        report = VerifyReport(True, 0.0, (1.0, 2.0), 1, 16)
        assert report.witness == [1.0, 2.0]


class TestGridCheck(TestCase):
    def test_passing_grid(self):
        check = GridCheck(
            lambda x, order: x - 1, [1.0, 2.0, 3.0],
            order=16, label="shift"
        )
        report = check.run()

        assert report.passed
        assert report.worst_margin == 0.0
        assert report.witness == 1.0
        assert report.grid_size == 3
        assert report.quad_order == 16
        assert report.label == "shift"

    def test_failures_are_reverified_at_doubled_order(self):
        report = GridCheck(
            PredicateDriver(lambda x, order: x - 1), [0.0, 2.0], order=16
        ).run()

        assert not report.passed
        assert report.worst_margin == -1.0
        assert report.witness == 0.0
        assert report.quad_order == 32

    def test_reverification_can_clear_a_failure(self):
        driver = OrderSensitiveDriver(100)
        report = GridCheck(driver, [1.0, 2.0], order=64).run()

        assert report.passed
        assert report.quad_order == 128
        assert driver.orders == [64, 64, 128, 128]

    def test_nan_is_the_worst_margin(self):
        def margin(x, order):
            return math.nan if x == 2.0 else 5.0

        report = GridCheck(margin, [1.0, 2.0, 3.0], order=16).run()

        assert not report.passed
        assert report.witness == 2.0

    def test_margins_are_ordered_with_jobs(self):
        check = GridCheck(
            lambda x, order: 2 * x, range(20), order=16, jobs=4
        )
        assert check.margins() == [2.0 * x for x in range(20)]

    def test_invalid_configuration(self):
        driver = PredicateDriver(lambda x, order: 0.0)

        with self.assertRaises(ArgumentError):
            GridCheck(driver, [], order=16)

        with self.assertRaises(ArgumentError):
            GridCheck(driver, [1.0], tolerance=1e-2, order=16)

        with self.assertRaises(ArgumentError):
            GridCheck(driver, [1.0], order=1)

    def test_callables_are_wrapped(self):
        check = GridCheck(lambda x, order: x, [1.0], order=16)

        assert isinstance(check.driver, PredicateDriver)
        assert check.driver.margin(3.0, 16) == 3.0

        driver = OrderSensitiveDriver(1)
        assert GridCheck(driver, [1.0], order=16).driver is driver

        with self.assertRaises(ArgumentError):
            GridCheck(0.5, [1.0], order=16)

    def test_abstract_driver(self):
        with self.assertRaises(NotImplementedError):
            MarginDriver().margin(1.0, 16)


def test_check_tolerance():
    assert check_tolerance(1e-12) == 1e-12
    assert check_tolerance(1e-3) == 1e-3

    for bad in (1e-13, 1e-2, 0.0):
        try:
            check_tolerance(bad)
        except ArgumentError:
            continue
        raise AssertionError("accepted %r" % bad)


def test_parallel_map_keeps_order():
    items = list(range(50))
    assert parallel_map(lambda x: x * x, items, jobs=8) == [
        x * x for x in items
    ]
    assert parallel_map(lambda x: x + 1, items) == [x + 1 for x in items]
