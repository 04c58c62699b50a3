"""Fejér-Riesz factorization and completion of partial polynomial families.

Given ``R(z) >= 0`` on the unit circle, the roots of ``z^h R(z)`` come in
pairs ``(r, 1/conj(r))``; keeping the inner root of each pair (and half of
every double root on the circle) gives an analytic ``w`` with ``|w|^2 = R``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (
    CompletionFailed,
    NormExceeded,
    NotHermitian,
    NotNonnegative,
    RangeExceeded,
    UnpairedRoots,
)
from .poly import LaurentPolynomial, poly_conj_reflect, poly_mul

DEFAULT_TOL = 1e-10
CIRCLE_BAND = 1e-7
PAIR_TOL = 1e-6
END_TRIM_REL = 1e-14


def _circle(m):
    theta = 2 * np.pi * np.arange(m) / m
    return theta, np.exp(1j * theta)


def _hermitian_part(r, tol):
    """Symmetric coefficient array ``c[-h..h]`` after checking Hermitian symmetry."""
    h = max(-r.min_exponent, r.max_exponent, 0)
    c = r.dense(-h, h)
    mirror = np.conj(c[::-1])
    scale = max(1.0, float(np.max(np.abs(c), initial=0.0)))
    dev = float(np.max(np.abs(c - mirror), initial=0.0))
    if dev > tol * scale:
        raise NotHermitian(f"coefficients of z^m and z^-m differ by {dev:.3e} from conjugacy")
    return (c + mirror) / 2, h


def _eval_sym(c, h, z):
    # c holds exponents -h..h
    acc = np.zeros_like(z)
    for coef in c[::-1]:
        acc = acc * z + coef
    return (acc * z ** (-float(h))).real if h else np.full(z.shape, c[0].real)


def _pair_circle_roots(roots):
    """Half of a set of circle roots: sort by angle and keep one root per adjacent pair."""
    if len(roots) % 2:
        raise UnpairedRoots(f"{len(roots)} roots on the unit circle (odd count)", np.inf)
    if not len(roots):
        return roots, 0.0
    order = np.argsort(np.angle(roots))
    rs = roots[order]
    # adjacent pairs can straddle the branch cut, so try both alignments
    best = None
    for offset in (0, 1):
        rolled = np.roll(rs, -offset)
        gaps = np.abs(rolled[0::2] - rolled[1::2])
        worst = float(np.max(gaps))
        if best is None or worst < best[0]:
            best = (worst, (rolled[0::2] + rolled[1::2]) / 2)
    return best[1], best[0]


@dataclass(frozen=True)
class Factorization:
    w: LaurentPolynomial
    roots: np.ndarray
    grid_max_error: float


def fejer_riesz(r, tol=DEFAULT_TOL, pair_tol=PAIR_TOL):
    """:func:`fejer_riesz_factor` plus the kept roots and the grid reconstruction error."""
    c, h = _hermitian_part(r, tol)
    norm = float(np.sum(np.abs(c)))
    # an R that vanishes to within tol is rounding noise from an already
    # complete family; its square root (~sqrt(eps)) is not a meaningful factor
    if norm <= tol:
        return Factorization(LaurentPolynomial(), np.zeros(0, dtype=complex), norm)
    _, zg = _circle(4 * h + 1)
    rmin = float(np.min(_eval_sym(c, h, zg)))
    if rmin < -tol:
        raise NotNonnegative(f"R dips to {rmin:.3e} on the unit circle", rmin)

    # drop negligible symmetric end coefficients: they only create huge roots
    while h > 0 and max(abs(c[0]), abs(c[-1])) <= END_TRIM_REL * norm:
        c = c[1:-1]
        h -= 1
    if h == 0:
        w = LaurentPolynomial.constant(np.sqrt(max(c[0].real, 0.0)))
        return Factorization(w, np.zeros(0, dtype=complex), abs(abs(w.coefficient(0)) ** 2 - c[0].real))

    roots = np.roots(c[::-1])  # descending powers of z^h R(z)
    mod = np.abs(roots)
    inside = roots[mod < 1 - CIRCLE_BAND]
    outside = roots[mod > 1 + CIRCLE_BAND]
    on = roots[(mod >= 1 - CIRCLE_BAND) & (mod <= 1 + CIRCLE_BAND)]
    half_circle, circle_gap = _pair_circle_roots(on)
    if len(inside) != len(outside):
        raise UnpairedRoots(
            f"{len(inside)} roots inside versus {len(outside)} outside the unit circle", np.inf
        )
    residual = circle_gap
    if len(inside):
        cost = np.abs((1 / np.conj(inside))[:, None] - outside[None, :]) / np.maximum(
            1.0, np.abs(outside)[None, :]
        )
        ri, ci = linear_sum_assignment(cost)
        residual = max(residual, float(np.max(cost[ri, ci])))
    if residual > pair_tol:
        raise UnpairedRoots(f"root pairing residual {residual:.3e} exceeds {pair_tol:.1e}", residual)
    kept = np.concatenate([inside, half_circle])
    if len(kept) != h:
        raise UnpairedRoots(f"kept {len(kept)} roots, expected {h}", residual)

    # coefficients from samples of the product form (stable for any root layout)
    m = 1 << int(np.ceil(np.log2(2 * (h + 1))))
    _, zs = _circle(m)
    prod = np.prod(zs[:, None] - kept[None, :], axis=1)
    _, zq = _circle(8 * h + 1)
    pq = np.prod(zq[:, None] - kept[None, :], axis=1)
    rq = _eval_sym(c, h, zq)
    scale = np.sqrt(max(float(np.sum(rq)) / float(np.sum(np.abs(pq) ** 2)), 0.0))
    coef = np.fft.fft(prod) / m  # coef[k] multiplies z^k
    coef = scale * coef[: h + 1]
    coef[-1] = abs(coef[-1])  # leading coefficient is real nonnegative by construction
    w = LaurentPolynomial(coef, 0)
    err = float(np.max(np.abs(np.abs(w(zq)) ** 2 - rq)))
    if err > 100 * tol * max(norm, 1.0):
        raise CompletionFailed(
            f"| |w|^2 - R | reaches {err:.3e} on the circle (allowed {100 * tol * max(norm, 1.0):.1e})"
        )
    return Factorization(w, kept, err)


def fejer_riesz_factor(r, tol=DEFAULT_TOL):
    """Analytic ``w`` with ``|w(z)|^2 = R(z)`` on the unit circle, leading coefficient >= 0."""
    return fejer_riesz(r, tol).w


@dataclass(frozen=True)
class CompletionResult:
    polynomial: LaurentPolynomial
    rescale_applied: float
    grid_max_error: float
    partials: tuple


def _norm_square_sum(polys):
    acc = LaurentPolynomial()
    for p in polys:
        acc = acc + poly_mul(poly_conj_reflect(p), p)
    return acc


def complete_family(partial, n, tol=DEFAULT_TOL, analytic=False):
    """Complete ``partial`` to a normalized family; see :func:`complete_state`.

    The result records any ``(1 - 2 tol)`` rescaling of the inputs and the
    grid error of the factorization.  ``partials`` holds the (possibly
    rescaled) inputs that the completion matches.
    """
    n = int(n)
    partial = [p if isinstance(p, LaurentPolynomial) else LaurentPolynomial(p) for p in partial]
    lo = 0 if analytic else -n
    for i, p in enumerate(partial):
        if not p.is_zero and (p.min_exponent < lo or p.max_exponent > n):
            raise RangeExceeded(
                f"polynomial {i} has exponents {p.min_exponent}..{p.max_exponent} outside [{lo}, {n}]"
            )
    span = 2 * n if not analytic else n
    theta, zg = _circle(max(4 * span + 1, 16))
    total = np.zeros(len(zg))
    for p in partial:
        total += np.abs(p(zg)) ** 2
    i = int(np.argmax(total))
    if total[i] > 1 + tol:
        raise NormExceeded(
            f"sum of |P_x|^2 reaches {total[i]:.12g} at theta = {theta[i]:.6g}",
            float(theta[i]),
            float(total[i]),
        )
    rescale = 1.0
    if total[i] > 1:
        rescale = 1 - 2 * tol
        partial = [p * rescale for p in partial]
    r = LaurentPolynomial.constant(1.0) - _norm_square_sum(partial)
    fact = fejer_riesz(r, tol)
    w = fact.w
    out = w if analytic else w * LaurentPolynomial.monomial(-n)
    return CompletionResult(out, rescale, fact.grid_max_error, tuple(partial))


def complete_state(partial, n, tol=DEFAULT_TOL, analytic=False):
    """Polynomial ``P_last`` with ``sum_x |P_x|^2 + |P_last|^2 = 1`` on the circle.

    Inputs are Laurent polynomials with exponents in ``[-n, n]``; the result,
    ``z^{-n} w`` for the spectral factor ``w`` of ``1 - sum |P_x|^2``, has
    exponents in ``[-n, n]`` too.  With ``analytic=True`` the inputs have
    exponents in ``[0, n]`` and ``w`` itself (degree <= n) is returned.
    """
    return complete_family(partial, n, tol, analytic).polynomial
