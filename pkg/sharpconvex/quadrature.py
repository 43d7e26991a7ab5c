"""Quadrature against mu_lambda(t) = 2 c_{2 lambda} (1 - t^2)^(lambda - 1/2).

Two integrators live here. :func:`integrate` applies a fixed Gauss rule built
by :func:`build_rule`; :func:`adaptive_integrate` works on a mesh graded
geometrically toward both endpoints, with Gauss-Jacobi end panels carrying the
weight singularity exactly and Gauss-Legendre interior panels refined by
bisection. :func:`expectation` picks between them: fixed rule first, checked
against the doubled order, adaptive when the two disagree.

Integrands are called with numpy arrays. The adaptive integrator evaluates
them in endpoint-distance coordinates (``upper(d) = f(1 - d)``,
``lower(d) = f(-1 + d)``) so callers with a near-singularity at an endpoint
can resolve it below the float spacing of t.
"""
import logging
import math
import os
import threading
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import roots_jacobi

from .exceptions import (
    ArgumentError,
    ConvergenceError,
    DomainError,
    EvaluationError
)
from .specfun import c_m
from .utils import mutex

log = logging.getLogger(__name__)

DEFAULT_ORDER = 256
MIN_ORDER = 2
MAX_ORDER = 10 ** 4
ADAPTIVE_TOL = 1e-11
TAIL_TOL = 1e-12
SELF_CHECK_TOL = 1e-10
QUAD_ORDER_ENV = "SHARPCONVEX_QUAD_ORDER"

PANEL_ORDER = 20
MAX_LEVELS = 600
MAX_PANELS = 20000

_EPS = np.finfo(float).eps
_NEWTON_STEPS = 100

_rules = {}
_rules_lock = threading.Lock()


def default_order():
    value = os.environ.get(QUAD_ORDER_ENV)
    if not value:
        return DEFAULT_ORDER

    try:
        order = int(value)
    except ValueError:
        raise ArgumentError(
            "%s must be an integer: %r" % (QUAD_ORDER_ENV, value)
        )

    _check_order(order)
    return order


def resolve_order(order=None):
    """Explicit order, else the environment, else DEFAULT_ORDER."""
    if order is None:
        return default_order()
    return _check_order(order)


def _check_lambda(lam):
    lam = float(lam)
    if not lam > -0.5 or not math.isfinite(lam):
        raise DomainError("mu_lambda needs lambda > -1/2: %r" % lam)
    return lam


def _check_order(order):
    if int(order) != order or not MIN_ORDER <= order <= MAX_ORDER:
        raise ArgumentError(
            "order must be an integer in [%d, %d]: %r"
            % (MIN_ORDER, MAX_ORDER, order)
        )
    return int(order)


class QuadRule(object):
    def __init__(self, lam, nodes, weights):
        self._lam = lam
        self._nodes = np.array(nodes, dtype=float)
        self._weights = np.array(weights, dtype=float)
        self._nodes.setflags(write=False)
        self._weights.setflags(write=False)

    @property
    def lam(self):
        return self._lam

    @property
    def order(self):
        return len(self._nodes)

    @property
    def nodes(self):
        return self._nodes

    @property
    def weights(self):
        return self._weights

    def __repr__(self):
        return "QuadRule(lam=%r, order=%d)" % (self._lam, self.order)


def _recurrence(lam, n):
    # monic recurrence p_{k+1} = t p_k - beta_k p_{k-1}; entry k is beta_{k+1}
    beta = np.empty(n)
    beta[0] = 1.0 / (2 * (1 + lam))
    k = np.arange(2, n + 1, dtype=float)
    beta[1:] = k * (k + 2 * lam - 1) / (4 * (k + lam) * (k + lam - 1))
    return beta


def _orthonormal(sqrt_beta, t):
    """q_{n-1}(t), q_n(t) and q_n'(t) of the orthonormal family."""
    q_prev = np.zeros_like(t)
    q = np.ones_like(t)
    dq_prev = np.zeros_like(t)
    dq = np.zeros_like(t)

    for k in range(len(sqrt_beta)):
        back = sqrt_beta[k - 1] if k else 0.0
        q_next = (t * q - back * q_prev) / sqrt_beta[k]
        dq_next = (q + t * dq - back * dq_prev) / sqrt_beta[k]
        q_prev, q = q, q_next
        dq_prev, dq = dq, dq_next

    return q_prev, q, dq


def _newton(sqrt_beta, x):
    for _ in range(_NEWTON_STEPS):
        _, q, dq = _orthonormal(sqrt_beta, x)
        step = q / dq
        x = x - step
        if np.max(np.abs(step)) <= 4 * _EPS:
            break

    return x


def _valid_roots(x, n):
    if len(x) != n or not np.all(np.isfinite(x)):
        return False
    if np.any(np.abs(x) >= 1.0):
        return False
    if np.max(np.abs(x + x[::-1])) > 1e-8:
        return False
    return bool(np.min(np.diff(x)) > 1e-4 / n ** 2)


def _christoffel(sqrt_beta, x):
    """1 / sum_k q_k(x)^2 over q_0 .. q_{n-1}; needs no derivative."""
    q_prev = np.zeros_like(x)
    q = np.ones_like(x)
    total = np.ones_like(x)

    for k in range(len(sqrt_beta) - 1):
        back = sqrt_beta[k - 1] if k else 0.0
        q_prev, q = q, (x * q - back * q_prev) / sqrt_beta[k]
        total += q * q

    return 1.0 / total


def _recurrence_rule(lam, n):
    """Nodes by Newton on the three-term recurrence, Christoffel weights."""
    sqrt_beta = np.sqrt(_recurrence(lam, n))

    # Chebyshev-type first guesses, exact for lambda = 0
    k = np.arange(n, 0, -1, dtype=float)
    x = np.cos((k + lam / 2 - 0.5) * np.pi / (n + lam))
    x = np.sort(_newton(sqrt_beta, x))

    if not _valid_roots(x, n):
        log.debug("reseeding rule (lam=%r, order=%d) from the Jacobi matrix",
                  lam, n)
        x = eigh_tridiagonal(
            np.zeros(n), sqrt_beta[:n - 1], eigvals_only=True
        )
        x = np.sort(_newton(sqrt_beta, x))

        if not _valid_roots(x, n):
            raise ConvergenceError(float("nan"), float("inf"))

    return x, _christoffel(sqrt_beta, x)


def build_rule(lam, order):
    lam = _check_lambda(lam)
    n = _check_order(order)
    alpha = lam - 0.5

    x, w = roots_jacobi(n, alpha, alpha)
    ascending = np.argsort(x)
    x = np.asarray(x, dtype=float)[ascending]
    w = np.asarray(w, dtype=float)[ascending]
    if not (_valid_roots(x, n) and np.all(w > 0) and
            np.all(np.isfinite(w))):
        log.debug("scipy rule unusable (lam=%r, order=%d), using the "
                  "recurrence", lam, n)
        x, w = _recurrence_rule(lam, n)

    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    w = w / np.sum(w)

    log.debug("built rule lam=%r order=%d", lam, n)
    return QuadRule(lam, x, w)


def get_rule(lam, order=None):
    """Cached :func:`build_rule`; rules are immutable and shared."""
    lam = _check_lambda(lam)
    order = _check_order(order if order is not None else default_order())
    key = (lam, order)

    with mutex(_rules_lock):
        rule = _rules.get(key)

    if rule is None:
        rule = build_rule(lam, order)
        with mutex(_rules_lock):
            rule = _rules.setdefault(key, rule)

    return rule


def clear_rules():
    with mutex(_rules_lock):
        _rules.clear()


def _evaluate(f, points, nodes_t):
    values = np.broadcast_to(
        np.asarray(f(points), dtype=float), np.shape(points)
    )
    finite = np.isfinite(values)

    if not np.all(finite):
        index = int(np.argmin(finite))
        raise EvaluationError(float(nodes_t[index]), float(values[index]))

    return values


def integrate(rule, f):
    values = _evaluate(f, rule.nodes, rule.nodes)
    return float(np.dot(rule.weights, values))


@lru_cache(maxsize=None)
def _legendre(n):
    return np.polynomial.legendre.leggauss(n)


@lru_cache(maxsize=None)
def _jacobi_end(n, alpha):
    # weight (1 + x)^alpha on [-1, 1]; the endpoint d = 0 sits at x = -1
    return roots_jacobi(n, 0.0, alpha)


class _GradedHalf(object):
    """int_0^L g(d) d^alpha (2 - d)^alpha dd, mesh graded toward d = 0."""

    def __init__(self, g, alpha, side, tol):
        self._g = g
        self._alpha = alpha
        self._side = side
        self._tol = tol
        self._panels = 0

    def _values(self, d):
        return _evaluate(self._g, d, self._side * (1.0 - d))

    def _panel(self, a, b):
        x, w = _legendre(PANEL_ORDER)
        half = 0.5 * (b - a)
        d = a + half * (x + 1.0)
        density = d ** self._alpha * (2.0 - d) ** self._alpha
        self._panels += 1
        return half * float(np.dot(w, self._values(d) * density))

    def _end(self, h, n):
        x, w = _jacobi_end(n, self._alpha)
        d = 0.5 * h * (x + 1.0)
        scale = (0.5 * h) ** (self._alpha + 1.0)
        smooth = (2.0 - d) ** self._alpha
        return scale * float(np.dot(w, self._values(d) * smooth))

    def _interior(self, a, b, length):
        total = 0.0
        error = 0.0
        stack = [(a, b, self._panel(a, b))]

        while stack:
            if self._panels > MAX_PANELS:
                raise ConvergenceError(total, float("inf"))

            lo, hi, whole = stack.pop()
            mid = 0.5 * (lo + hi)
            left = self._panel(lo, mid)
            right = self._panel(mid, hi)
            both = left + right
            diff = abs(both - whole)
            allowed = max(
                0.5 * self._tol * (hi - lo) / length, 50 * _EPS * abs(both)
            )

            if diff <= allowed or hi - lo <= 1e-300:
                total += both
                error += diff
            else:
                stack.append((lo, mid, left))
                stack.append((mid, hi, right))

        return total, error

    def integrate(self, length):
        total = 0.0
        error = 0.0
        h = 0.5 * length
        part, err = self._interior(h, length, length)
        total += part
        error += err

        for _ in range(MAX_LEVELS):
            coarse = self._end(h, PANEL_ORDER)
            fine = self._end(h, 2 * PANEL_ORDER)
            diff = abs(fine - coarse)

            if diff <= max(0.5 * self._tol, 50 * _EPS * abs(fine)):
                return total + fine, error + diff

            part, err = self._interior(0.5 * h, h, length)
            total += part
            error += err
            h *= 0.5

        raise ConvergenceError(total + fine, error + diff)


def adaptive_integrate(lam, f, tol=ADAPTIVE_TOL, upper=None, lower=None):
    lam = _check_lambda(lam)
    if not tol > 0:
        raise ArgumentError("tol must be positive: %r" % tol)

    alpha = lam - 0.5
    norm = 2.0 * c_m(2 * lam)
    if upper is None:
        def upper(d):
            return f(1.0 - d)
    if lower is None:
        def lower(d):
            return f(d - 1.0)

    share = 0.5 * tol / norm
    right, err_right = _GradedHalf(upper, alpha, 1.0, share).integrate(1.0)
    left, err_left = _GradedHalf(lower, alpha, -1.0, share).integrate(1.0)

    log.debug("adaptive lam=%r: error estimate %.2e",
              lam, norm * (err_right + err_left))
    return norm * (right + left)


def expectation(lam, f, order=None, upper=None, lower=None,
                tol=ADAPTIVE_TOL, adaptive=False):
    """int f d mu_lambda, fixed rule with a doubled-order self-check."""
    if adaptive:
        return adaptive_integrate(lam, f, tol, upper, lower)

    order = order if order is not None else default_order()
    check = 2 * order if 2 * order <= MAX_ORDER else order // 2
    coarse = integrate(get_rule(lam, order), f)
    fine = integrate(get_rule(lam, check), f)

    if abs(fine - coarse) <= SELF_CHECK_TOL * max(1.0, abs(fine)):
        return fine if check > order else coarse

    log.debug("rule orders %d/%d disagree by %.2e, going adaptive",
              order, check, abs(fine - coarse))
    return adaptive_integrate(lam, f, tol, upper, lower)


def tail(lam, u, tol=TAIL_TOL):
    """mu_lambda(t > u) by graded quadrature of the density on [u, 1]."""
    lam = _check_lambda(lam)
    u = float(u)
    if u >= 1.0:
        return 0.0
    if u <= -1.0:
        return 1.0
    if u < 0.0:
        return 1.0 - tail(lam, -u, tol)

    norm = 2.0 * c_m(2 * lam)

    def one(d):
        return np.ones_like(d)

    half = _GradedHalf(one, lam - 0.5, 1.0, tol / norm)
    value, _ = half.integrate(1.0 - u)
    return norm * value
