"""Exponentially scaled modified Bessel functions ``e^-x I_j(x)``."""

import math

MAX_ORDER = 10_000
MAX_ARG = 10_000.0
_BIG = 1e250


def bessel_i_scaled(j, x):
    """``e^{-x} I_j(x)`` by Miller's downward recurrence.

    ``t_{m-1} = (2m/x) t_m + t_{m+1}`` is run from well above both ``j`` and
    the turning point, then normalized with ``I_0 + 2 sum_{m>=1} I_m = e^x``.
    """
    j = int(j)
    x = float(x)
    if j < 0 or j > MAX_ORDER:
        raise ValueError(f"order must lie in 0..{MAX_ORDER}")
    if not 0.0 <= x <= MAX_ARG:
        raise ValueError(f"argument must lie in [0, {MAX_ARG}]")
    if x == 0.0:
        return 1.0 if j == 0 else 0.0
    # I_m(x) is negligible once m^2 / (2x) ~ 60 past max(j, x)
    start = max(j, int(x)) + int(math.sqrt(120.0 * max(x, 1.0))) + 40
    start += start % 2
    t_next, t_cur = 0.0, 1e-300
    total = 0.0
    want = 0.0
    for m in range(start, 0, -1):
        t_prev = (2.0 * m / x) * t_cur + t_next
        t_next, t_cur = t_cur, t_prev
        # t_cur now holds t_{m-1}; t_next holds t_m
        total += t_next
        if m == j:
            want = t_next
        if t_cur > _BIG:
            t_cur /= _BIG
            t_next /= _BIG
            total /= _BIG
            want /= _BIG
    # loop ends with t_cur = t_0 and total = sum_{m>=1} t_m
    norm = t_cur + 2.0 * total
    if j == 0:
        want = t_cur
    return want / norm
