"""Integer-order Bessel functions of the first kind.

Every closed-form propagator in this package reduces to products of
J_n(T), so this is the one numeric kernel that has to be right.  Values
come from Miller's downward recurrence, normalized with

    J_0(x) + 2 * sum_{k>=1} J_{2k}(x) = 1,

which is accurate to ~1e-15 absolute for orders and arguments up to a
few hundred.  The recurrence itself lives in :mod:`spinchain.kernels`
(compiled when available).
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

import numpy as np

from . import kernels

MAX_ORDER = 10**6
# log of the smallest positive double; |J_n(x)| <= (x/2)^n / n! below it
_LOG_TINY = -745.0


@dataclass(frozen=True)
class BesselRow:
    """J_0(x)..J_{n_max}(x) for one argument.

    Calling the row with any integer order (negative, or beyond
    ``n_max``) returns J_n(x), falling back to :func:`bessel_j` outside
    the stored range.
    """

    x: float
    values: np.ndarray

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    @property
    def orders(self) -> range:
        return range(0, len(self.values))

    def __call__(self, n: int) -> float:
        k = abs(n)
        if k <= self.n_max:
            v = float(self.values[k])
        else:
            v = bessel_j(k, self.x)
        return -v if (n < 0 and k % 2) else v

    def take(self, ns) -> np.ndarray:
        """J_n(x) for an integer array of orders."""
        ns = np.asarray(ns, dtype=np.int64)
        k = np.abs(ns)
        if k.size and k.max() > self.n_max:
            return np.array([self(int(n)) for n in ns.ravel()]).reshape(ns.shape)
        v = self.values[k]
        return np.where((ns < 0) & (k % 2 == 1), -v, v)

    def signed(self, lo: int, hi: int) -> np.ndarray:
        """Array of J_n(x) for n = lo..hi inclusive."""
        return self.take(np.arange(lo, hi + 1))


def _check_x(x) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"Bessel argument must be finite, got {x}")
    return x


def _check_order(n) -> int:
    try:
        n = operator.index(n)
    except TypeError:
        if isinstance(n, float) and n.is_integer():
            n = int(n)
        else:
            raise TypeError(f"order must be an integer, got {n!r}") from None
    if abs(n) > MAX_ORDER:
        raise ValueError(f"|order| must be <= {MAX_ORDER}, got {n}")
    return n


def bessel_row(n_max: int, x: float) -> BesselRow:
    """J_0(x)..J_{n_max}(x) from a single downward-recurrence pass."""
    n_max = _check_order(n_max)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    x = _check_x(x)
    if x < 0.0:
        vals = kernels.bessel_row_values(n_max, -x)
        vals[1::2] *= -1.0
    else:
        vals = kernels.bessel_row_values(n_max, x)
    vals.setflags(write=False)
    return BesselRow(x, vals)


def bessel_j(n: int, x: float) -> float:
    """J_n(x) for integer ``n`` of either sign.

    Negative orders use J_{-n}(x) = (-1)^n J_n(x); both signs go through
    the same recurrence so the parity relation holds exactly.
    """
    n = _check_order(n)
    x = _check_x(x)
    k = abs(n)
    sign = -1.0 if (n < 0 and k % 2) else 1.0
    if x < 0.0:
        x = -x
        if k % 2:
            sign = -sign
    if k > x and x > 0.0:
        bound = k * (math.log(x) - math.log(2.0)) - math.lgamma(k + 1.0)
        if bound < _LOG_TINY:
            return 0.0
    elif x == 0.0:
        return sign * (1.0 if k == 0 else 0.0)
    return sign * float(kernels.bessel_row_values(k, x)[k])
