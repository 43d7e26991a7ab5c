"""The log-Sobolev chain behind hypercontractivity for p, q >= 6.

Everything is evaluated for the test function g(t) = 1 + 2 b t + b^2 (b is
the rescaled coefficient, ``btilde``), with s = p/2 and lambda = m/2:

  * the Mueller-Weissler inequality for mu_lambda,
  * the inequality it turns into after an integration by parts,
  * the moment inequality that closes the argument, with its reduction to a
    comparison of mu_lambda against mu_{lambda+1},
  * the sign structure of h(u) = mu_lambda(t > u) - mu_{lambda+1}(t > u).
"""
import logging
import math

import numpy as np
from scipy import integrate
from scipy.special import xlogy

from .exceptions import ArgumentError, DomainError
from .internals import (
    DEFAULT_TOLERANCE,
    GridCheck,
    parallel_map
)
from .quadrature import tail
from .specfun import c_m
from .ultraspherical import linear_expectation

log = logging.getLogger(__name__)

DEFAULT_LAMBDAS = (0.0, 0.5, 1.0, 2.0, 5.0)
DEFAULT_SS = (3.01, 3.5, 4.0, 6.0, 10.0)
DEFAULT_BTILDES = (0.01, 0.1, 0.5, 1.0, 2.0, 5.0)
DEFAULT_S_PATH = (3.1, 4.0, 6.0, 10.0, 20.0)
DEFAULT_MOMENT_AS = (0.1, 0.5, 0.9)

STRUCTURE_TOLERANCE = 1e-10
INTEGRAL_TOLERANCE = 1e-8

SINGLE = "single crossing"
INDETERMINATE = "indeterminate near crossing"
MULTIPLE = "multiple crossings"


class LogSobParams(object):
    def __init__(self, lam, s, btilde):
        self._lam = float(lam)
        self._s = float(s)
        self._btilde = float(btilde)

        if not self._lam >= 0:
            raise DomainError("lambda must be non-negative: %r" % lam)
        if not self._btilde >= 0:
            raise DomainError("btilde must be non-negative: %r" % btilde)

    @property
    def lam(self):
        return self._lam

    @property
    def s(self):
        return self._s

    @property
    def btilde(self):
        return self._btilde

    @property
    def in_regime(self):
        return self._s > 3

    def as_tuple(self):
        return self._lam, self._s, self._btilde

    def __repr__(self):
        return "LogSobParams(lam=%r, s=%r, btilde=%r)" % self.as_tuple()


def _power(g, e):
    return np.abs(g) ** e


def entropy(params, order=None):
    """Ent(g^s) = int g^s ln g^s - (int g^s) ln int g^s against mu_lambda."""
    lam, s, b = params.as_tuple()
    if b == 1 and not s > 0:
        raise DomainError("g vanishes at t = -1; entropy needs s > 0")
    if b == 0:
        return 0.0

    def weighted(g, _):
        gs = _power(g, s)
        return xlogy(gs, gs)

    mass = linear_expectation(lam, b, lambda g, _: _power(g, s), order)
    return linear_expectation(lam, b, weighted, order) - xlogy(mass, mass)


def mw_rhs(params, order=None):
    """s^2/(4(lambda+1)) int (g')^2 g^(s-2) d mu_{lambda+1}, g' = 2 btilde."""
    lam, s, b = params.as_tuple()
    if b == 0:
        return 0.0

    moment = linear_expectation(
        lam + 1, b, lambda g, _: _power(g, s - 2), order
    )
    return s * s * b * b / (lam + 1) * moment


def log_rhs(params, order=None):
    """s^2/(s+lambda) int g^(s-1) (btilde t + btilde^2) d mu_lambda."""
    lam, s, b = params.as_tuple()
    if b == 0:
        return 0.0

    moment = linear_expectation(
        lam, b, lambda g, t: _power(g, s - 1) * (b * t + b * b), order
    )
    return s * s / (s + lam) * moment


def _in02_sides(params, order=None):
    lam, s, b = params.as_tuple()
    left = linear_expectation(
        lam, b, lambda g, t: _power(g, s - 1) * t, order
    ) / (s - 1)
    right = linear_expectation(
        lam, b, lambda g, t: _power(g, s - 1) * (t + b), order
    ) / (s + lam)
    return left, right


def ibp_identity_gap(params, order=None):
    """(s-1)/(4(lambda+1)) int (g')^2 g^(s-2) d mu_{lambda+1}
    minus int g^(s-1) t btilde d mu_lambda; zero up to quadrature error."""
    lam, s, b = params.as_tuple()
    left = (s - 1) * b * b / (lam + 1) * linear_expectation(
        lam + 1, b, lambda g, _: _power(g, s - 2), order
    )
    right = b * linear_expectation(
        lam, b, lambda g, t: _power(g, s - 1) * t, order
    )
    return left - right


def _check_s(params, low=1.0):
    if not params.s > low:
        raise ArgumentError("s must exceed %g: %r" % (low, params.s))


def _single(label, point, margin, tolerance, order):
    return GridCheck(
        margin, [point], tolerance, order, label=label
    ).run()


def verify_mw(params, tolerance=DEFAULT_TOLERANCE, order=None):
    def margin(_, order):
        return mw_rhs(params, order) - entropy(params, order)

    return _single("mw", params.as_tuple(), margin, tolerance, order)


def verify_log_ineq(params, tolerance=DEFAULT_TOLERANCE, order=None):
    _check_s(params)

    def margin(_, order):
        return log_rhs(params, order) - entropy(params, order)

    return _single("log", params.as_tuple(), margin, tolerance, order)


def verify_in02(params, tolerance=DEFAULT_TOLERANCE, order=None):
    _check_s(params)

    def margin(_, order):
        left, right = _in02_sides(params, order)
        return right - left

    return _single("in02", params.as_tuple(), margin, tolerance, order)


def moment_margin(lam, s, a, order=None):
    """int F^(s-1) d mu_lambda - int F^(s-2) d mu_{lambda+1}, F = 1+2at+a^2."""
    left = linear_expectation(lam, a, lambda g, _: _power(g, s - 1), order)
    right = linear_expectation(
        lam + 1, a, lambda g, _: _power(g, s - 2), order
    )
    return left - right


def verify_moment_comparison(lam, s, a, tolerance=DEFAULT_TOLERANCE,
                             order=None):
    """Checks a and 1/a, so the reduction to a in (0, 1) is exercised too."""
    if not s >= 3:
        raise ArgumentError("moment comparison needs s >= 3: %r" % s)
    if not a > 0:
        raise ArgumentError("moment comparison needs a > 0: %r" % a)

    def margin(point, order):
        return moment_margin(lam, s, point, order)

    return GridCheck(
        margin, [float(a), 1.0 / a], tolerance, order,
        label="moment lambda=%g s=%g" % (lam, s)
    ).run()


def jensen_margin(lam, s, a, order=None):
    """int F^(s-2) d mu_lambda - (1 + a^2)^(s-2); non-negative for s >= 2."""
    value = linear_expectation(lam, a, lambda g, _: _power(g, s - 2), order)
    return value - (1 + a * a) ** (s - 2)


def h_value(lam, u):
    return tail(lam, u) - tail(lam + 1, u)


def h_derivative(lam, u):
    u2 = float(u) ** 2
    if u2 >= 1:
        return 0.0
    return (
        2 * c_m(2 * lam) * (1 - u2) ** (lam - 0.5)
        * (2 * lam + 2) / (2 * lam + 1)
        * (1 / (2 * (lam + 1)) - u2)
    )


def h_turning_point(lam):
    return 1 / math.sqrt(2 * (lam + 1))


def _slope_pattern(grid, values, turn, tolerance):
    """Signs of h(u1) - h(u0) on [0, 1]: up before the turn, down after."""
    right = [(u, v) for u, v in zip(grid, values) if u >= 0]
    rises = falls = 0
    ordered = True

    for (u0, v0), (u1, v1) in zip(right, right[1:]):
        step = v1 - v0
        if u0 < turn < u1 or abs(step) <= tolerance:
            continue
        if step > 0:
            rises += 1
            ordered = ordered and u1 <= turn
        else:
            falls += 1
            ordered = ordered and u0 >= turn

    return rises, falls, ordered


def h_structure(lam, u_grid=None, tolerance=STRUCTURE_TOLERANCE):
    """Zeros, sign sides, antisymmetry and the single turn of h on [0, 1]."""
    lam = float(lam)
    if not lam >= 0:
        raise DomainError("lambda must be non-negative: %r" % lam)

    grid = np.linspace(-1, 1, 81) if u_grid is None else u_grid
    grid = [float(u) for u in grid]
    if sum(1 for u in grid if 0 <= u <= 1) < 3:
        raise ArgumentError("u_grid needs three points in [0, 1]")
    values = [h_value(lam, u) for u in grid]

    zeros = [abs(h_value(lam, u)) for u in (-1.0, 0.0, 1.0)]
    sides = all(
        (v <= tolerance if u <= 0 else v >= -tolerance)
        for u, v in zip(grid, values)
    )
    antisymmetry = max(abs(v + h_value(lam, -u)) for u, v in
                       zip(grid, values))

    turn = h_turning_point(lam)
    rises, falls, turning = _slope_pattern(grid, values, turn, tolerance)
    peak = max((v, u) for u, v in zip(grid, values) if u >= 0)[1]
    spacing = max(b - a for a, b in zip(grid, grid[1:]))

    report = {
        "lambda": lam,
        "zeros": zeros,
        "zeros_ok": max(zeros) <= tolerance,
        "sides_ok": sides,
        "antisymmetry": antisymmetry,
        "antisymmetry_ok": antisymmetry <= tolerance,
        "turning_point": turn,
        "peak": peak,
        "turning_ok": (
            turning and rises > 0 and falls > 0
            and abs(peak - turn) <= spacing
        )
    }
    report["pass"] = all(
        report[key] for key in
        ("zeros_ok", "sides_ok", "antisymmetry_ok", "turning_ok")
    )
    return report


def phi_r(lam, a, r):
    """mu_lambda(F > r) - mu_{lambda+1}(F > r) for F(t) = 1 + 2 a t + a^2."""
    u = (r - 1 - a * a) / (2 * a)
    return h_value(lam, min(1.0, max(-1.0, u)))


def _transitions(signs):
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def phi_r_single_sign_change(lam, a, r_grid=None,
                             noise=STRUCTURE_TOLERANCE):
    """Sign pattern of phi over ``r_grid`` and its zero integral.

    Values within ``noise`` of zero carry no sign. A second transition made
    only of near-noise values is flagged indeterminate, not counted.
    """
    lam = float(lam)
    a = float(a)
    if not 0 < a < 1:
        raise ArgumentError("phi(r) structure needs a in (0, 1): %r" % a)

    lo, hi = (1 - a) ** 2, (1 + a) ** 2
    grid = np.linspace(lo, hi, 201) if r_grid is None else r_grid
    values = [phi_r(lam, a, r) for r in grid]

    signs = [v > 0 for v in values if abs(v) > noise]
    strong = [v > 0 for v in values if abs(v) > 10 * noise]
    count = _transitions(signs)

    if not signs:
        status = INDETERMINATE
    elif count == 0:
        status = INDETERMINATE
    elif count == 1 and not signs[0]:
        status = SINGLE
    elif _transitions(strong) <= 1 and (not strong or not strong[0]):
        status = INDETERMINATE
    else:
        status = MULTIPLE

    if status != SINGLE:
        log.warning("phi(r) lambda=%g a=%g: %s (%d transitions)",
                    lam, a, status, count)

    total, _ = integrate.quad(
        lambda r: phi_r(lam, a, r), lo, hi, points=[1 + a * a],
        epsabs=1e-12, epsrel=1e-10, limit=200
    )

    return {
        "lambda": lam,
        "a": a,
        "transitions": count,
        "status": status,
        "integral": total,
        "integral_ok": abs(total) <= INTEGRAL_TOLERANCE,
        "pass": status == SINGLE and abs(total) <= INTEGRAL_TOLERANCE
    }


def norm_in_s(lam, b, s, order=None):
    """(int (1 + 2bt/sqrt(s+lambda) + b^2/(s+lambda))^s d mu_lambda)^(1/s)."""
    scaled = b / math.sqrt(s + lam)
    value = linear_expectation(lam, scaled, lambda g, _: _power(g, s), order)
    return value ** (1 / s)


def verify_norm_monotone_in_s(lam, b, s_grid=DEFAULT_S_PATH,
                              tolerance=DEFAULT_TOLERANCE, order=None):
    s_grid = [float(s) for s in s_grid]
    if len(s_grid) < 2:
        raise ArgumentError("s grid needs at least two points")
    if not all(s > 3 for s in s_grid):
        raise ArgumentError("s grid must lie in (3, inf)")
    if any(y <= x for x, y in zip(s_grid, s_grid[1:])):
        raise ArgumentError("s grid must be increasing")

    def margin(pair, order):
        return norm_in_s(lam, b, pair[0], order) - norm_in_s(
            lam, b, pair[1], order
        )

    pairs = list(zip(s_grid, s_grid[1:]))
    return GridCheck(
        margin, pairs, tolerance, order,
        label="monotone-s lambda=%g b=%g" % (lam, b)
    ).run()


def _chain_row(point, tolerance, order):
    params = LogSobParams(*point)
    mw = verify_mw(params, tolerance, order)
    log_ineq = verify_log_ineq(params, tolerance, order)
    in02 = verify_in02(params, tolerance, order)

    return {
        "lambda": params.lam,
        "s": params.s,
        "btilde": params.btilde,
        "mw": mw.passed,
        "mw_margin": mw.worst_margin,
        "log": log_ineq.passed,
        "log_margin": log_ineq.worst_margin,
        "in02": in02.passed,
        "in02_margin": in02.worst_margin,
        "consistent": log_ineq.passed or not (mw.passed and in02.passed)
    }


def verify_chain(lams=DEFAULT_LAMBDAS, ss=DEFAULT_SS,
                 btildes=DEFAULT_BTILDES, tolerance=DEFAULT_TOLERANCE,
                 order=None, jobs=1):
    """One row per (lambda, s, btilde) with the three chain verdicts."""
    points = [(lam, s, b) for lam in lams for s in ss for b in btildes]
    return parallel_map(
        lambda point: _chain_row(point, tolerance, order), points, jobs
    )
