import hashlib
import json
from contextlib import contextmanager

import numpy as np

from .exceptions import ArgumentError

_GRID_ERR = "Grid must look like start:stop:count:lin|log, got %r"


class lazyproperty(object):
    def __init__(self, fn):
        self._fn = fn

    def __get__(self, instance, klass):
        if instance is None:
            return self

        result = self._fn(instance)
        setattr(instance, self._fn.__name__, result)
        return result


@contextmanager
def mutex(lock):
    try:
        lock.acquire()
        yield
    finally:
        lock.release()


def log_grid(start, stop, count):
    return np.geomspace(start, stop, int(count))


def parse_grid(text):
    """Parse ``start:stop:count:lin|log`` (or a comma list) into an array."""
    if "," in text or ":" not in text:
        try:
            values = [float(part) for part in text.split(",") if part]
        except ValueError:
            raise ArgumentError(_GRID_ERR % text)

        if not values:
            raise ArgumentError(_GRID_ERR % text)

        return np.asarray(values)

    parts = text.split(":")
    if len(parts) == 3:
        parts.append("lin")

    if len(parts) != 4 or parts[3] not in ("lin", "log"):
        raise ArgumentError(_GRID_ERR % text)

    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ArgumentError(_GRID_ERR % text)

    if count < 1:
        raise ArgumentError(_GRID_ERR % text)

    if parts[3] == "log":
        if start <= 0 or stop <= 0:
            raise ArgumentError("log grids need positive bounds: %r" % text)

        return log_grid(start, stop, count)

    return np.linspace(start, stop, count)


def content_hash(params):
    # canonical json so equal configs hash equally regardless of key order
    payload = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()
