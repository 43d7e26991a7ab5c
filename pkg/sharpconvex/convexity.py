"""Sharp uniform convexity of |x - a z|^p averaged over the sphere.

The main inequality is

    int_{S^{n-1}} |x - a z|^p d sigma(z) >= (|x|^2 + lambda a^2)^(p/2),

for p in (0, 2], with the largest admissible lambda equal to (n + p - 2)/n.
Besides checking it on grids this module exposes every auxiliary function
the argument passes through: the n = 3 piecewise lower bound, phi, psi, the
volume-form representation and the polynomial margin behind the n >= 4 route.
"""
import logging
import math

import numpy as np
from scipy import integrate

from .exceptions import ArgumentError, DomainError
from .internals import (
    DEFAULT_TOLERANCE,
    GridCheck,
    parallel_map
)
from .spherical_means import sphere_mean
from .utils import log_grid

log = logging.getLogger(__name__)

DEFAULT_A_GRID = log_grid(1e-3, 1e2, 400)
RICHARDSON_STEPS = (1e-2, 5e-3, 2.5e-3)
BEST_LAMBDA_TOLERANCE = 1e-4
PHI_EDGE = 1e-6


def _check_p(p, upper=2.0):
    p = float(p)
    if not 0 < p <= upper:
        raise DomainError("p must lie in (0, %g]: %r" % (upper, p))
    return p


def _check_n(n):
    if int(n) != n or n < 2:
        raise DomainError("dimension must be an integer >= 2: %r" % n)
    return int(n)


def _check_grid(grid):
    grid = [float(a) for a in grid]
    if not grid:
        raise ArgumentError("a grid must not be empty")
    if not all(math.isfinite(a) and a > 0 for a in grid):
        raise ArgumentError("a grid must be strictly positive and finite")
    return tuple(grid)


class TheoremParams(object):
    def __init__(self, n, p, lam, a_grid=None):
        self._n = _check_n(n)
        self._p = _check_p(p)
        self._lam = float(lam)
        self._a_grid = _check_grid(
            DEFAULT_A_GRID if a_grid is None else a_grid
        )

    @property
    def n(self):
        return self._n

    @property
    def p(self):
        return self._p

    @property
    def lam(self):
        return self._lam

    @property
    def a_grid(self):
        return self._a_grid

    def as_dict(self):
        return {
            "n": self._n,
            "p": self._p,
            "lambda": self._lam,
            "a_grid_size": len(self._a_grid)
        }


def sharp_lambda(n, p):
    n = _check_n(n)
    p = _check_p(p)
    return (n + p - 2) / float(n)


def verify_theorem(params, tolerance=DEFAULT_TOLERANCE, order=None, jobs=1):
    n, p, lam = params.n, params.p, params.lam

    def margin(a, order):
        return sphere_mean(n, p, a, 1.0, order) - (1 + lam * a * a) ** (p / 2)

    return GridCheck(
        margin, params.a_grid, tolerance, order, jobs,
        label="theorem n=%d p=%g lambda=%g" % (n, p, lam)
    ).run()


class BestConstantResult(object):
    def __init__(self, value, argmin, limit_at_zero,
                 tolerance=BEST_LAMBDA_TOLERANCE):
        self._value = float(value)
        self._argmin = float(argmin)
        self._limit_at_zero = float(limit_at_zero)
        self._tolerance = float(tolerance)

    @property
    def value(self):
        return self._value

    @property
    def argmin(self):
        return self._argmin

    @property
    def limit_at_zero(self):
        return self._limit_at_zero

    @property
    def tolerance(self):
        return self._tolerance

    @property
    def consistent(self):
        return self._value <= self._limit_at_zero + self._tolerance

    def as_dict(self):
        return {
            "value": self._value,
            "argmin": self._argmin,
            "limit_at_zero": self._limit_at_zero,
            "tolerance": self._tolerance,
            "consistent": self.consistent
        }


def _lambda_at(n, p, a, order=None):
    mean = sphere_mean(n, p, a, 1.0, order)
    return math.expm1(2.0 / p * math.log(mean)) / (a * a)


def best_lambda(n, p, a_grid=None, order=None, jobs=1):
    """Invert the inequality pointwise and take the infimum over ``a_grid``.

    The infimum is only reached as a -> 0, so the a -> 0 limit is also
    extrapolated (two Richardson passes over halving radii; lambda*(a) is
    even in a).
    """
    n = _check_n(n)
    p = _check_p(p)
    grid = _check_grid(DEFAULT_A_GRID if a_grid is None else a_grid)

    if min(grid) > 1e-3 * (1 + 1e-9) or max(grid) < 10 * (1 - 1e-9):
        raise ArgumentError("a grid must span at least [1e-3, 10]")

    values = parallel_map(lambda a: _lambda_at(n, p, a, order), grid, jobs)
    index = int(np.argmin(values))

    l1, l2, l3 = [_lambda_at(n, p, a, order) for a in RICHARDSON_STEPS]
    r1 = (4 * l2 - l1) / 3
    r2 = (4 * l3 - l2) / 3
    limit = (16 * r2 - r1) / 15

    log.info("best lambda n=%d p=%g: grid min %.8f at a=%g, limit %.8f",
             n, p, values[index], grid[index], limit)
    return BestConstantResult(values[index], grid[index], limit)


def n3_bound(p, a):
    """Lower bound for the n = 3 mean, piecewise around a = 1."""
    p = _check_p(p, upper=1.0)
    a = float(a)
    if a < 0:
        raise DomainError("a must be non-negative: %r" % a)

    if a <= 1:
        return 1 + p * (p + 1) * a * a / 6
    return a ** p + p * (2 - p) / (3 * a) + (p - 1) * p / 2


def _n3_target(p, a):
    return (1 + (p + 1) * a * a / 3) ** (p / 2)


def phi(p, t):
    p = _check_p(p, upper=1.0)
    t = float(t)
    if not t > 0:
        raise DomainError("t must be positive: %r" % t)

    return (
        t ** (p / 2)
        + p * (2 - p) / (3 * math.sqrt(t))
        - p * (1 - p) / 2
        - (1 + (p + 1) * t / 3) ** (p / 2)
    )


def phi_interval(p):
    """Verified t interval, the open (1, 3/(2-p)) pulled in at both ends."""
    p = _check_p(p, upper=1.0)
    return 1 + PHI_EDGE, 3 / (2 - p) - PHI_EDGE


def verify_phi_nonnegative(p, count=200, tolerance=1e-12):
    start, stop = phi_interval(p)

    def margin(t, _):
        return phi(p, t)

    return GridCheck(
        margin, np.linspace(start, stop, count), tolerance,
        label="phi p=%g" % p
    ).run()


def psi(n, p, a):
    a2 = float(a) ** 2
    return (1 + a2) ** (p / 2 - 1) * (
        1 + (4 - p) * (2 - p) * a2 / (2 * n * (1 + a2) ** 2)
    )


def verify_psi_lower_bound(n, p, a_grid, tolerance=DEFAULT_TOLERANCE,
                           order=None, jobs=1):
    """psi(a) <= int |x - a z|^(p-2) d sigma with |x| = 1."""
    n = _check_n(n)
    p = _check_p(p)

    def margin(a, order):
        return sphere_mean(n, p - 2, a, 1.0, order) - psi(n, p, a)

    return GridCheck(
        margin, _check_grid(a_grid), tolerance, order, jobs,
        label="psi n=%d p=%g" % (n, p)
    ).run()


def _volume_kernel(n, a):
    # u^{n-1} int_u^a t^{1-n} dt, written to stay finite as u -> 0
    if n == 2:
        return lambda u: u * math.log(a / u)
    return lambda u: u * (1 - (u / a) ** (n - 2)) / (n - 2)


def volume_form(n, p, a, h):
    """1 + p(p+n-2) int_0^a int_0^t t^{1-n} u^{n-1} h(u) du dt.

    The inner integral is swapped out (Fubini), leaving one quadrature over u
    with an explicit kernel. ``h`` is called with scalar u.
    """
    n = _check_n(n)
    a = float(a)
    if a < 0:
        raise DomainError("a must be non-negative: %r" % a)
    if a == 0:
        return 1.0

    kernel = _volume_kernel(n, a)
    points = [1.0] if a > 1 else None
    value, _ = integrate.quad(
        lambda u: kernel(u) * h(u), 0.0, a,
        points=points, epsabs=1e-13, epsrel=1e-12, limit=200
    )
    return 1 + p * (p + n - 2) * value


def psi_chain_margin(n, p, a):
    """F(a): the psi route's volume form minus the sharp right-hand side."""
    n = _check_n(n)
    p = _check_p(p)
    c = sharp_lambda(n, p)
    lower = volume_form(n, p, a, lambda u: psi(n, p, u))
    return lower - (1 + c * a * a) ** (p / 2)


def verify_psi_chain(n, p, a_grid, tolerance=DEFAULT_TOLERANCE, jobs=1):
    n = _check_n(n)
    p = _check_p(p)
    if not (n > 3 or p > 1):
        raise ArgumentError("the psi route needs n > 3 or p > 1")

    def margin(a, _):
        return psi_chain_margin(n, p, a)

    return GridCheck(
        margin, _check_grid(a_grid), tolerance, jobs=jobs,
        label="psi-chain n=%d p=%g" % (n, p)
    ).run()


def verify_subharmonic_chain(p, a_grid, tolerance=DEFAULT_TOLERANCE,
                             order=None, jobs=1):
    """The n = 3 sandwich mean >= bound >= (1 + (p+1) a^2/3)^(p/2)."""
    p = _check_p(p, upper=1.0)
    edge = 3 / (2 - p)

    def margin(a, order):
        mean = sphere_mean(3, p, a, 1.0, order)
        target = _n3_target(p, a)
        if a * a < edge:
            bound = n3_bound(p, a)
        else:
            bound = a ** p
        return min(mean - bound, bound - target)

    return GridCheck(
        margin, _check_grid(a_grid), tolerance, order, jobs,
        label="n3-chain p=%g" % p
    ).run()


def ee6_margin(q, x, y):
    return x ** q * (1 - y + q * (1 - x) * (x - y)) - (
        1 - y - (1 - y * y) * (1 - x)
    )


def ee6_q_profile(x, y, q_grid):
    return [x ** q * (1 - y + q * (1 - x) * (x - y)) for q in q_grid]


def ee6_region(count=100, q_count=11):
    """Points (q, x, y) with q in [0, 1] and 1/2 <= y <= x <= 1."""
    side = np.linspace(0.5, 1.0, count)
    qs = np.linspace(0.0, 1.0, q_count)
    return [(q, x, y) for q in qs for x in side for y in side if y <= x]


def verify_ee6_region(count=100, q_count=11, tolerance=DEFAULT_TOLERANCE):
    def margin(point, _):
        return ee6_margin(*point)

    return GridCheck(
        margin, ee6_region(count, q_count), tolerance,
        label="ee6"
    ).run()
