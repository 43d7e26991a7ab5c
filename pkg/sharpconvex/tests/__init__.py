import os
from contextlib import contextmanager

from sharpconvex.quadrature import QUAD_ORDER_ENV


@contextmanager
def quad_order(value):
    previous = os.environ.get(QUAD_ORDER_ENV)
    try:
        os.environ[QUAD_ORDER_ENV] = str(value)
        yield
    finally:
        if previous is None:
            os.environ.pop(QUAD_ORDER_ENV, None)
        else:
            os.environ[QUAD_ORDER_ENV] = previous


def n3_mean(beta, a):
    """Elementary closed form of the n = 3 mean with |x| = 1."""
    return ((1 + a) ** (beta + 2) - abs(1 - a) ** (beta + 2)) / (
        2 * a * (beta + 2)
    )
