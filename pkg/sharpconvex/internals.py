import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .exceptions import ArgumentError
from .quadrature import MAX_ORDER, resolve_order

log = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9


def _plain(value):
    if isinstance(value, (tuple, list, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


class VerifyReport(object):
    def __init__(self, passed, worst_margin, witness, grid_size, quad_order,
                 tolerance=DEFAULT_TOLERANCE, label=None):
        self._passed = bool(passed)
        self._worst_margin = float(worst_margin)
        self._witness = _plain(witness)
        self._grid_size = int(grid_size)
        self._quad_order = int(quad_order)
        self._tolerance = float(tolerance)
        self._label = label

    @property
    def passed(self):
        return self._passed

    @property
    def worst_margin(self):
        return self._worst_margin

    @property
    def witness(self):
        return self._witness

    @property
    def grid_size(self):
        return self._grid_size

    @property
    def quad_order(self):
        return self._quad_order

    @property
    def tolerance(self):
        return self._tolerance

    @property
    def label(self):
        return self._label

    def __bool__(self):
        return self._passed

    def __repr__(self):
        return "VerifyReport(%s, pass=%s, worst=%.3e, witness=%r)" % (
            self._label, self._passed, self._worst_margin, self._witness
        )

    def as_dict(self):
        return {
            "label": self._label,
            "pass": self._passed,
            "worst_margin": self._worst_margin,
            "witness": self._witness,
            "grid_size": self._grid_size,
            "quad_order": self._quad_order,
            "tolerance": self._tolerance
        }

    def merge(self, other, label=None):
        """Combined report: passes iff both pass, worst margin of the two."""
        worst = self if self.worst_margin <= other.worst_margin else other
        return VerifyReport(
            self.passed and other.passed,
            worst.worst_margin,
            worst.witness,
            self.grid_size + other.grid_size,
            max(self.quad_order, other.quad_order),
            max(self.tolerance, other.tolerance),
            label or self.label
        )


class MarginDriver(object):
    """Margin of one inequality at one grid point; >= 0 means it holds."""

    def margin(self, point, order):
        raise NotImplementedError


class PredicateDriver(MarginDriver):
    """Adapts a plain ``fn(point, order)`` callable."""

    def __init__(self, fn):
        super(PredicateDriver, self).__init__()
        self._fn = fn

    def margin(self, point, order):
        return self._fn(point, order)


def check_tolerance(tolerance):
    if not 1e-12 <= tolerance <= 1e-3:
        raise ArgumentError("tolerance must lie in [1e-12, 1e-3]: %r"
                            % tolerance)
    return float(tolerance)


def parallel_map(fn, items, jobs=1):
    """Ordered map, optionally across worker threads."""
    items = list(items)
    if jobs is None or jobs <= 1 or len(items) < 2:
        return [fn(item) for item in items]

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


class GridCheck(object):
    """Evaluates a margin over a grid; ``driver`` is a MarginDriver or a
    callable ``fn(point, order)``.
    """

    def __init__(self, driver, grid, tolerance=DEFAULT_TOLERANCE, order=None,
                 jobs=1, label=None):
        if not isinstance(driver, MarginDriver):
            if not callable(driver):
                raise ArgumentError("driver must be a MarginDriver or a "
                                    "callable: %r" % (driver,))
            driver = PredicateDriver(driver)

        self._driver = driver
        self._grid = list(grid)
        self._tolerance = check_tolerance(tolerance)
        self._order = resolve_order(order)
        self._jobs = jobs
        self._label = label

        if not self._grid:
            raise ArgumentError("grid must not be empty")

    @property
    def driver(self):
        return self._driver

    @property
    def grid(self):
        return self._grid

    @property
    def order(self):
        return self._order

    def margins(self, order=None):
        order = order or self._order

        def one(point):
            return float(self._driver.margin(point, order))

        return parallel_map(one, self._grid, self._jobs)

    def run(self):
        margins = self.margins()
        order = self._order
        failing = [i for i, m in enumerate(margins)
                   if not m >= -self._tolerance]

        if failing and 2 * self._order <= MAX_ORDER:
            # failures are only reported once they survive the doubled order
            order = 2 * self._order
            for i in failing:
                again = float(self._driver.margin(self._grid[i], order))
                log.debug("%s: re-verified %r at order %d: %.3e -> %.3e",
                          self._label, self._grid[i], order, margins[i], again)
                margins[i] = again

        # NaN margins sort first so they are reported, never hidden
        keys = [-math.inf if math.isnan(m) else m for m in margins]
        index = int(np.argmin(keys))
        worst = margins[index]

        return VerifyReport(
            worst >= -self._tolerance,
            worst,
            self._grid[index],
            len(self._grid),
            order,
            self._tolerance,
            self._label
        )
