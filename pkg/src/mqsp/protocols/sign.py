"""Sign-wave polynomials: odd trigonometric approximations of ``-erf(k sin theta)``."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from ..poly import LaurentPolynomial
from .bessel import bessel_i_scaled

DEFAULT_GRID = 4096
MAX_DEGREE = 1 << 16


def sine_coefficients(k, n):
    """Fourier-sine coefficients ``b_m`` (m = 0..n) of ``-erf(k sin theta)``.

    Trapezoid rule on ``8n`` points; even harmonics vanish by symmetry and are
    zeroed exactly.
    """
    n = int(n)
    m = 8 * max(n, 1)
    theta = 2 * np.pi * np.arange(m) / m
    f = np.fft.fft(-erf(float(k) * np.sin(theta)))
    b = -2.0 * f.imag[: n + 1] / m
    b[0::2] = 0.0
    return b


def bessel_sine_coefficients(k, n):
    """Closed-form ``b_m`` through scaled Bessel functions.

    ``b_{2j+1} = -(2k/sqrt(pi)) (I~_j + I~_{j+1}) / (2j+1)`` with
    ``I~ = e^{-x} I(x)``, ``x = k^2/2``; the top harmonic keeps only its
    ``I~_j`` term, matching the truncated series.
    """
    n = int(n)
    x = float(k) ** 2 / 2
    top = (n - 1) // 2
    ib = [bessel_i_scaled(j, x) for j in range(top + 2)]
    b = np.zeros(n + 1)
    pre = -2.0 * float(k) / math.sqrt(math.pi)
    for j in range(top + 1):
        nxt = ib[j + 1] if j < top else 0.0
        b[2 * j + 1] = pre * (ib[j] + nxt) / (2 * j + 1)
    return b


def _poly_from_sine(b):
    n = len(b) - 1
    c = np.zeros(2 * n + 1, dtype=complex)
    pos = b / 2j
    c[n:] = pos
    c[: n + 1] = -pos[::-1]
    c[n] = 0.0
    return LaurentPolynomial(c, -n)


def build_sign_poly(k, n):
    """Odd Laurent polynomial ``R`` with ``R(e^{i theta}) ~ -erf(k sin theta)``.

    Coefficients satisfy ``c_{-m} = -c_m`` and are purely imaginary, so ``R``
    is real on the unit circle and vanishes at ``z = 1``.
    """
    n = int(n)
    if n < 1 or n % 2 == 0:
        raise ValueError(f"n must be a positive odd integer, got {n}")
    if not float(k) > 0:
        raise ValueError("k must be positive")
    return _poly_from_sine(sine_coefficients(k, n))


def _grid(m, min_abs_sin):
    theta = 2 * np.pi * np.arange(m) / m
    keep = np.abs(np.sin(theta)) >= min_abs_sin
    return theta[keep]


def sign_error(r, k=None, min_abs_sin=0.0, grid=DEFAULT_GRID):
    """Max of ``|R + target|`` over ``|sin theta| >= min_abs_sin``.

    The target is ``sgn(sin theta)`` when ``k`` is None and ``erf(k sin theta)``
    otherwise.
    """
    theta = _grid(grid, min_abs_sin)
    vals = r(np.exp(1j * theta)).real
    s = np.sin(theta)
    target = np.sign(s) if k is None else erf(float(k) * s)
    return float(np.max(np.abs(vals + target), initial=0.0))


@dataclass(frozen=True)
class SignDegree:
    k: float
    n: int
    error: float
    tried: tuple


def find_sign_degree(k, eps, min_abs_sin, target="sgn", grid=DEFAULT_GRID):
    """Doubling search ``n = 2 ceil(k) + 1, 2n - 1, ...`` until the grid error meets ``eps``.

    ``target`` is ``"sgn"`` or ``"erf"`` (error against ``-erf(k sin theta)``).
    """
    if target not in ("sgn", "erf"):
        raise ValueError("target must be 'sgn' or 'erf'")
    n = 2 * math.ceil(float(k)) + 1
    tried = []
    while True:
        r = build_sign_poly(k, n)
        err = sign_error(r, None if target == "sgn" else k, min_abs_sin, max(grid, 16 * n))
        tried.append((n, err))
        if err <= eps:
            return SignDegree(float(k), n, err, tuple(tried))
        if n > MAX_DEGREE:
            raise RuntimeError(f"no degree up to {n} reaches error {eps:g} (best {err:.3e})")
        n = 2 * n - 1
