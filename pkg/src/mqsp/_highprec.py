"""Extended-precision linear stripping (fallback for ill-conditioned states).

A double-precision state is valid only up to ~1e-16 absolute in its Gram
coefficients, and each linear reduction divides that defect by the norm of an
outer coefficient vector.  Here the state is first nudged (minimum-norm
Newton steps) onto the set of exactly valid states at ``dps`` digits, then
stripped with the same construction as :func:`mqsp.decompose.linear_reduce`.
"""

import mpmath
import numpy as np

_conj = np.vectorize(mpmath.conj, otypes=[object])
_abs2 = np.vectorize(lambda v: mpmath.re(v) ** 2 + mpmath.im(v) ** 2, otypes=[object])


def _to_mp(arr):
    return np.vectorize(lambda v: mpmath.mpc(v.real, v.imag), otypes=[object])(
        np.asarray(arr, dtype=complex)
    )


def _to_complex(arr):
    return np.vectorize(complex, otypes=[complex])(arr)


def _vdot(a, b):
    return mpmath.fsum(_conj(a) * b)


def _norm(a):
    return mpmath.sqrt(mpmath.fsum(_abs2(a)))


def _gram_coefficients(g):
    n = g.shape[0] - 1
    cg = _conj(g)
    return [mpmath.fsum((cg[: n + 1 - m] * g[m:]).ravel()) for m in range(n + 1)]


def _residual(g):
    c = _gram_coefficients(g)
    c[0] = c[0] - 1
    return c


def _gram_jacobian(g):
    """Real Jacobian of (Re c_0, Re c_m, Im c_m for m >= 1) w.r.t. (Re, Im) of g."""
    n1, d = g.shape
    n = n1 - 1
    rows_re, rows_im = [], []
    for m in range(n + 1):
        alpha = np.zeros((n1, d), dtype=complex)
        beta = np.zeros((n1, d), dtype=complex)
        alpha[m:] = np.conj(g[: n1 - m])
        beta[: n1 - m] = g[m:]
        ca = (alpha + beta).ravel()
        cb = (1j * (alpha - beta)).ravel()
        row = np.concatenate([ca, cb])
        rows_re.append(row.real)
        if m > 0:
            rows_im.append(row.imag)
    return np.array(rows_re + rows_im)


def project_valid(target, dps, max_iter=12):
    """Minimum-norm correction of ``target`` (n+1, D) to an exactly valid state."""
    with mpmath.workdps(dps):
        g = _to_mp(target)
        goal = mpmath.mpf(10) ** (-(dps - 8))
        for _ in range(max_iter):
            r = _residual(g)
            worst = max(abs(v) for v in r)
            if worst <= goal:
                break
            jac = _gram_jacobian(_to_complex(g))
            rhs = np.array(
                [float(mpmath.re(v)) for v in r] + [float(mpmath.im(v)) for v in r[1:]]
            )
            # rows for high powers involve only the tiny outer coefficients;
            # equilibrating them keeps their equations from being washed out
            # (the minimum-norm solution of a consistent system is unchanged)
            w = 1.0 / np.maximum(np.linalg.norm(jac, axis=1), 1e-300)
            scale = float(worst)
            x, *_ = np.linalg.lstsq(jac * w[:, None], -rhs * w / scale, rcond=None)
            half = x.size // 2
            delta = (x[:half] + 1j * x[half:]).reshape(g.shape)
            g = g + _to_mp(delta) * mpmath.mpf(scale)
        return g


def _complete(cols, d):
    """Modified Gram-Schmidt completion, canonical basis sweep, in mpmath."""
    placed = {k: v / _norm(v) for k, v in cols.items()}
    basis = list(placed.values())
    out = [None] * d
    for k, v in placed.items():
        out[k] = v
    cand = 0
    thresh = mpmath.mpf(1) / (2 * d)
    for idx in range(d):
        if out[idx] is not None:
            continue
        while True:
            e = np.array([mpmath.mpc(0)] * d, dtype=object)
            e[cand] = mpmath.mpc(1)
            cand += 1
            r = e
            for _ in range(2):
                for q in basis:
                    r = r - q * _vdot(q, r)
            if mpmath.fsum(_abs2(r)) >= thresh:
                break
        r = r / _norm(r)
        out[idx] = r
        basis.append(r)
    return np.stack(out, axis=1)


def strip_linear(target, exponents, dps=50):
    """Unitaries ``A_0 .. A_n`` (complex128) for the dense analytic state ``target``."""
    e = np.asarray(exponents)
    d = target.shape[1]
    n = target.shape[0] - 1
    row0 = int(np.flatnonzero(e == 0)[0])
    row1 = int(np.flatnonzero(e == 1)[0])
    g = project_valid(target, dps)
    with mpmath.workdps(dps):
        zero = mpmath.mpf(10) ** (-(dps - 10))
        mats = []
        for k in range(n, 0, -1):
            g0, gn = g[0], g[k]
            n0, nn = _norm(g0), _norm(gn)
            cols = {}
            if max(n0, nn) > zero:
                if n0 >= nn:
                    big, small, rb, rs = g0 / n0, gn, row0, row1
                else:
                    big, small, rb, rs = gn / nn, g0, row1, row0
                cols[rb] = big
                small = small - big * _vdot(big, small)
                if _norm(small) > zero:
                    cols[rs] = small
            a = _complete(cols, d)
            h = g.dot(_conj(a))
            g = np.where(e[None, :] == 0, h[:k], h[1:])
            mats.append(_to_complex(a))
        mats.append(_to_complex(_complete({0: g[0]}, d)))
    return list(reversed(mats))
