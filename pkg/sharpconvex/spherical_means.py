"""Spherical means I = int_{S^{n-1}} |x - a z|^beta d sigma(z).

Only |x| enters, so every mean reduces exactly to

    int_{-1}^{1} (|x|^2 - 2 a |x| t + a^2)^(beta/2) d mu_lambda(t),

with lambda = (n - 2)/2. The integrand is written as
(a - |x|)^2 + 2 a |x| (1 - t) so that the near-coincident case a ~ |x| keeps
its digits close to t = 1. Exact coincidence a = |x| goes through the
Beta-function closed form, which stays finite down to beta > -(n - 1).
"""
import logging
import math

from .exceptions import ArgumentError, DomainError
from .internals import DEFAULT_TOLERANCE, GridCheck
from .quadrature import ADAPTIVE_TOL, expectation
from .specfun import ln_beta, ln_c_m
from .utils import lazyproperty

log = logging.getLogger(__name__)

NEAR_COINCIDENT = 1e-6


def _check_dimension(n):
    if int(n) != n or n < 2:
        raise ArgumentError("dimension must be an integer >= 2: %r" % n)
    return int(n)


def _check_radii(a, xnorm):
    a = float(a)
    xnorm = float(xnorm)
    if not a >= 0 or not xnorm >= 0:
        raise DomainError("radii must be non-negative: a=%r |x|=%r"
                          % (a, xnorm))
    return a, xnorm


def reduced_mean(lam, beta, a, xnorm, order=None):
    beta = float(beta)
    a, xnorm = _check_radii(a, xnorm)

    if beta == 0:
        return 1.0

    if a == 0 or xnorm == 0:
        top = max(a, xnorm)
        if top == 0 and beta < 0:
            raise DomainError("|x - a z|^beta diverges at a = |x| = 0")
        return top ** beta

    if a == xnorm:
        if not beta / 2 + lam - 0.5 > -1:
            raise DomainError(
                "divergent mean: a = |x| needs beta > -(2 lambda + 1), "
                "got %r" % beta
            )
        return _coincident_value(lam, beta, a)

    gap = (a - xnorm) ** 2
    cross = 2 * a * xnorm
    half = beta / 2

    def f(t):
        return (gap + cross * (1.0 - t)) ** half

    def upper(d):
        return (gap + cross * d) ** half

    def lower(d):
        return (gap + cross * (2.0 - d)) ** half

    near = abs(a - xnorm) < NEAR_COINCIDENT * max(a, xnorm, 1.0)
    return expectation(
        lam, f, order=order, upper=upper, lower=lower,
        tol=ADAPTIVE_TOL, adaptive=near and beta < 2
    )


def sphere_mean(n, beta, a, xnorm=1.0, order=None):
    n = _check_dimension(n)
    return reduced_mean((n - 2) / 2.0, beta, a, xnorm, order)


class SphereMeanQuery(object):
    def __init__(self, n, beta, a, xnorm=1.0):
        self._n = _check_dimension(n)
        self._beta = float(beta)
        self._a, self._xnorm = _check_radii(a, xnorm)

        if self._a == self._xnorm > 0 and not self._beta > -(self._n - 1):
            raise DomainError("divergent configuration: beta <= -(n - 1)")

    @property
    def n(self):
        return self._n

    @property
    def beta(self):
        return self._beta

    @property
    def a(self):
        return self._a

    @property
    def xnorm(self):
        return self._xnorm

    @lazyproperty
    def value(self):
        return sphere_mean(self._n, self._beta, self._a, self._xnorm)

    def swapped(self):
        return SphereMeanQuery(self._n, self._beta, self._xnorm, self._a)

    def scaled(self, s):
        return SphereMeanQuery(self._n, self._beta, s * self._a,
                               s * self._xnorm)


def coincident_mean(n, beta, a):
    """Closed form of the mean at a = |x| through the Beta function."""
    n = _check_dimension(n)
    lam = (n - 2) / 2.0
    beta = float(beta)
    a = float(a)

    if not beta > -(n - 1):
        raise DomainError("divergent mean at a = |x|: beta=%r n=%d"
                          % (beta, n))
    if a == 0:
        return 1.0 if beta == 0 else 0.0 if beta > 0 else math.inf
    return _coincident_value(lam, beta, a)


def _coincident_value(lam, beta, a):
    log_value = (
        beta / 2 * math.log(2 * a * a)
        + math.log(2.0) + ln_c_m(2 * lam)
        + (beta / 2 + 2 * lam) * math.log(2.0)
        + ln_beta(beta / 2 + lam + 0.5, lam + 0.5)
    )
    return math.exp(log_value)


def second_derivative_at_zero(n, p):
    n = _check_dimension(n)
    if not p > 0:
        raise DomainError("p must be positive: %r" % p)
    return p * (p - 2) / n + p


def is_subharmonic_exponent(n, q):
    return q * (n + q - 2) >= 0


def verify_subharmonic_bound(n, q, a_grid, xnorm=1.0,
                             tolerance=DEFAULT_TOLERANCE, order=None, jobs=1):
    """Mean-value bound int |x - a z|^q d sigma >= max(a, |x|)^q."""
    n = _check_dimension(n)
    if not is_subharmonic_exponent(n, q):
        raise ArgumentError("|x|^%r is not subharmonic in dimension %d"
                            % (q, n))

    for a in a_grid:
        if a == xnorm > 0 and not q > -(n - 1):
            raise ArgumentError("grid point a=%r makes the mean diverge" % a)

    def margin(a, order):
        return sphere_mean(n, q, a, xnorm, order) - max(a, xnorm) ** q

    return GridCheck(
        margin, a_grid, tolerance, order, jobs,
        label="subharmonic-bound"
    ).run()
