"""Bessel functions of the first kind, integer order, by Miller's algorithm."""

from __future__ import annotations

import math

import numpy as np

from .exceptions import InvalidSpecError

MAX_ORDER = 200
MAX_ARG = 10.0


def _check(n_max: int, x: float) -> None:
    if abs(n_max) > MAX_ORDER:
        raise InvalidSpecError(f"order {n_max} outside |n| <= {MAX_ORDER}")
    if not math.isfinite(x) or abs(x) > MAX_ARG:
        raise InvalidSpecError(f"argument {x} outside |x| <= {MAX_ARG}")


def bessel_j_table(n_max: int, x: float) -> np.ndarray:
    """Return ``[J_0(x), J_1(x), ..., J_{n_max}(x)]``.

    Downward recurrence from an order well above both ``n_max`` and ``|x|``,
    normalised with ``J_0 + 2 sum_k J_{2k} = 1``.
    """
    n_max = int(n_max)
    if n_max < 0:
        raise InvalidSpecError("n_max must be non-negative")
    _check(n_max, x)
    out = np.zeros(n_max + 1)
    if x == 0.0:
        out[0] = 1.0
        return out
    ax = abs(x)
    if ax < 1e-5:
        half = 0.5 * ax
        term = 1.0
        for n in range(n_max + 1):
            out[n] = term * (1.0 - half * half / (n + 1))
            term *= half / (n + 1)
            if term == 0.0:
                break
        if x < 0:
            out[1::2] *= -1.0
        return out
    start = max(n_max, int(ax)) + 40 + int(math.sqrt(40.0 * max(n_max, ax)))
    start += start % 2
    j_next, j_cur = 0.0, 1e-300
    norm = 0.0
    for k in range(start, 0, -1):
        j_prev = (2.0 * k / ax) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if k - 1 <= n_max:
            out[k - 1] = j_cur
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_cur
        if abs(j_cur) > 1e200:
            # rescale everything computed so far to stay in range
            j_next *= 1e-200
            j_cur *= 1e-200
            norm *= 1e-200
            out *= 1e-200
    norm += j_cur
    out /= norm
    if x < 0:
        out[1::2] *= -1.0
    return out


def bessel_j(n: int, x: float) -> float:
    """J_n(x) for integer ``|n| <= 200`` and real ``|x| <= 10``."""
    n = int(n)
    _check(n, x)
    value = bessel_j_table(abs(n), x)[abs(n)]
    if n < 0 and n % 2:
        value = -value
    return float(value)


def bessel_j_signed(n_max: int, x: float):
    """Return a callable ``order -> J_order(x)`` valid for ``|order| <= n_max``.

    Orders beyond ``n_max`` evaluate to 0, which is only appropriate when
    ``n_max`` lies far outside the Bessel bandwidth ``|x| + O(|x|^{1/3})``.
    """
    table = bessel_j_table(n_max, x)

    def j(order):
        order = np.asarray(order)
        a = np.abs(order)
        inside = a <= n_max
        vals = np.where(inside, table[np.minimum(a, n_max)], 0.0)
        sign = np.where((order < 0) & (a % 2 == 1), -1.0, 1.0)
        return vals * sign

    return j
