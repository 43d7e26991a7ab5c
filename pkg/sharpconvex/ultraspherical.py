"""Hypercontractivity of the linear polynomials 1 + b z on the circle.

nu_m = c_m |sin theta|^m d theta, with m = -1 standing for the two-point
measure (delta_{-1} + delta_1)/2. Against nu_m,

    || 1 + b z ||_e^e = int_{-1}^{1} (1 + 2 b t + b^2)^(e/2) d mu_{m/2}(t),

so every norm here is a single :mod:`~sharpconvex.quadrature` call.
"""
import logging
import math

import numpy as np

from .exceptions import (
    ArgumentError,
    DomainError,
    InternalError,
    SharpConvexError
)
from .internals import (
    DEFAULT_TOLERANCE,
    GridCheck,
    VerifyReport,
    parallel_map
)
from .quadrature import expectation
from .spherical_means import sphere_mean
from .utils import log_grid

log = logging.getLogger(__name__)

DEFAULT_B_GRID = log_grid(1e-3, 1e3, 120)
DEFAULT_PRECISION = 1e-4
NEAR_UNIT = 1e-6
SCAN_STEPS = 21

SHARP = "consistent with sharpness"
BELOW = "below necessary bound"
ABOVE = "above necessary bound"
FAILED = "error"
UNBOUNDED = "no necessary bound"


def _check_m(m):
    m = float(m)
    if not m >= -1:
        raise DomainError("nu_m needs m >= -1: %r" % m)
    return m


class UltrasphericalMeasure(object):
    def __init__(self, m):
        self._m = _check_m(m)

    @property
    def m(self):
        return self._m

    @property
    def lam(self):
        return self._m / 2

    @property
    def discrete(self):
        return self._m == -1

    def norm(self, exponent, b, order=None):
        return nu_norm(self._m, exponent, b, order)

    def second_moment(self, order=None):
        """int cos^2 theta d nu_m; 1/(m + 2) in closed form."""
        if self.discrete:
            return 1.0
        return expectation(self.lam, lambda t: t * t, order=order)

    def __repr__(self):
        return "UltrasphericalMeasure(m=%r)" % self._m


class HypTuple(object):
    def __init__(self, m, p, q, r):
        self._m = _check_m(m)
        self._p = float(p)
        self._q = float(q)
        self._r = float(r)

        if not 0 < self._p <= self._q < math.inf:
            raise ArgumentError("need 0 < p <= q < inf: p=%r q=%r"
                                % (self._p, self._q))

    @property
    def m(self):
        return self._m

    @property
    def p(self):
        return self._p

    @property
    def q(self):
        return self._q

    @property
    def r(self):
        return self._r

    def with_r(self, r):
        return HypTuple(self._m, self._p, self._q, r)

    def as_dict(self):
        return {"m": self._m, "p": self._p, "q": self._q, "r": self._r}

    def __repr__(self):
        return "HypTuple(m=%r, p=%r, q=%r, r=%r)" % (
            self._m, self._p, self._q, self._r
        )


def linear_expectation(lam, b, fn, order=None):
    """int fn(g(t), t) d mu_lambda(t) with g(t) = 1 + 2 b t + b^2.

    ``fn`` gets numpy arrays. Near |b| = 1, where g vanishes at an endpoint,
    the adaptive integrator sees g in endpoint-distance form.
    """
    b = float(b)
    top = (1 + b) ** 2
    bottom = (1 - b) ** 2

    def f(t):
        return fn(1 + 2 * b * t + b * b, t)

    def upper(d):
        return fn(top - 2 * b * d, 1.0 - d)

    def lower(d):
        return fn(bottom + 2 * b * d, d - 1.0)

    near = abs(abs(b) - 1) < NEAR_UNIT
    return expectation(lam, f, order=order, upper=upper, lower=lower,
                       adaptive=near)


def nu_norm(m, exponent, b, order=None):
    m = _check_m(m)
    e = float(exponent)
    if not e > 0:
        raise DomainError("exponent must be positive: %r" % exponent)

    b = float(b)
    if m == -1:
        total = (abs(1 + b) ** e + abs(1 - b) ** e) / 2
        return total ** (1 / e)

    half = e / 2
    total = linear_expectation(
        m / 2, b, lambda g, _: np.abs(g) ** half, order
    )
    return total ** (1 / e)


def sphere_circle_equivalence_check(n, p, a, order=None):
    """|sphere mean^(1/p) - circle norm|, two independent code paths."""
    if int(n) != n or n < 2:
        raise DomainError("dimension must be an integer >= 2: %r" % n)
    if not p > 0:
        raise DomainError("p must be positive: %r" % p)

    sphere = sphere_mean(n, p, a, 1.0, order) ** (1.0 / p)
    return abs(sphere - nu_norm(n - 2, p, a, order))


def necessary_r(m, p, q):
    m = _check_m(m)
    if not p + m > 0 or not q + m > 0:
        raise DomainError("necessary bound needs p + m > 0 and q + m > 0")
    return math.sqrt((p + m) / (q + m))


def _small_b(m, p):
    return (m + p) / (2 * (m + 2))


def small_b_coefficient(m, p):
    """Second-order coefficient: ||1 + b z||_p = 1 + coef b^2 + o(b^2)."""
    m = _check_m(m)
    if not p + m > 0:
        raise DomainError("small-b coefficient needs p + m > 0")
    return _small_b(m, p)


def large_b_ratio(m, p, q, r, b, order=None):
    """||1 + r b z||_q / ||1 + b z||_p; tends to r as b grows."""
    return nu_norm(m, q, r * b, order) / nu_norm(m, p, b, order)


def check_hyp(t, b_grid=None, tolerance=DEFAULT_TOLERANCE, order=None,
              jobs=1):
    """||1 + r b z||_q <= ||1 + b z||_p for all b, sampled on ``b_grid``.

    Both norms are even in b and r, so only non-negative values are used.
    The two ends of the b range are closed analytically: the b^2 coefficient
    at b -> 0 and the ratio r at b -> inf.
    """
    m, p, q = t.m, t.p, t.q
    r = abs(t.r)
    grid = DEFAULT_B_GRID if b_grid is None else b_grid
    grid = [abs(float(b)) for b in grid]

    def margin(b, order):
        return nu_norm(m, p, b, order) - nu_norm(m, q, r * b, order)

    label = "hyp m=%g p=%g q=%g r=%g" % (m, p, q, r)
    report = GridCheck(
        margin, grid, tolerance, order, jobs, label=label
    ).run()

    small = _small_b(m, p) - r * r * _small_b(m, q)
    report = report.merge(VerifyReport(
        small >= -tolerance, small, 0.0, 1, report.quad_order, tolerance
    ))

    large = 1.0 - r
    return report.merge(VerifyReport(
        large >= -tolerance, large, math.inf, 1, report.quad_order, tolerance
    ))


def _check_precision(precision):
    if not 1e-6 <= precision <= 1e-2:
        raise ArgumentError("precision must lie in [1e-6, 1e-2]: %r"
                            % precision)
    return float(precision)


def _bisect(passes, lo, hi, precision):
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        if passes(mid):
            lo = mid
        else:
            hi = mid
        log.debug("bisection bracket [%.6f, %.6f]", lo, hi)

    return lo


def r_star(m, p, q, precision=DEFAULT_PRECISION, b_grid=None,
           tolerance=DEFAULT_TOLERANCE, order=None):
    """Largest r in [0, 1] for which check_hyp passes, within ``precision``.

    For q >= 1 the norm is convex in r, so passing is monotone in r and a
    plain bisection is used. Quasi-norms get a coarse scan first and the
    bisection runs inside the first failing step.
    """
    base = HypTuple(m, p, q, 0.0)
    precision = _check_precision(precision)

    def passes(r):
        return check_hyp(base.with_r(r), b_grid, tolerance, order).passed

    if passes(1.0):
        return 1.0
    if not passes(0.0):
        raise InternalError("r = 0 failed for %r" % base)

    if base.q >= 1:
        return _bisect(passes, 0.0, 1.0, precision)

    steps = np.linspace(0.0, 1.0, SCAN_STEPS)
    lo = 0.0
    for r in steps[1:]:
        if not passes(r):
            return _bisect(passes, lo, r, precision)
        lo = r

    return lo


def _scan_cell(cell, precision, b_grid, tolerance, order):
    m, p, q = cell
    row = {
        "m": m, "p": p, "q": q,
        "r_star": None, "necessary_r": None, "ratio": None,
        "status": FAILED, "error": None
    }

    try:
        found = r_star(m, p, q, precision, b_grid, tolerance, order)
    except SharpConvexError as e:
        log.warning("scan cell m=%g p=%g q=%g failed: %s", m, p, q, e)
        row["error"] = str(e)
        return row

    row["r_star"] = found
    try:
        bound = necessary_r(m, p, q)
    except DomainError:
        row["status"] = UNBOUNDED
        return row

    row["necessary_r"] = bound
    row["ratio"] = found / bound

    if abs(found - bound) <= 2 * precision:
        row["status"] = SHARP
    elif found < bound:
        row["status"] = BELOW
    else:
        row["status"] = ABOVE

    return row


def scan_region(m_grid, p_grid, q_grid, precision=DEFAULT_PRECISION,
                b_grid=None, tolerance=DEFAULT_TOLERANCE, order=None,
                jobs=1):
    """One row per (m, p, q) with p <= q; rows come back in grid order.

    A ratio near 1 is evidence the necessary bound is attained, not a proof.
    """
    precision = _check_precision(precision)
    cells = [
        (float(m), float(p), float(q))
        for m in m_grid for p in p_grid for q in q_grid if p <= q
    ]
    if not cells:
        raise ArgumentError("scan grids leave no cell with p <= q")

    def run(cell):
        return _scan_cell(cell, precision, b_grid, tolerance, order)

    return parallel_map(run, cells, jobs)
