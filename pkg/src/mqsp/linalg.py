"""Dense complex linear algebra for protocol synthesis.

Unitaries are plain ``numpy`` complex arrays; :func:`is_unitary` is the contract
check.  Everything here is deterministic: orthonormal completion sweeps the
canonical basis in index order, so repeated runs give identical matrices.
"""

import numpy as np

from .errors import DegenerateInput, DimensionMismatch, PreconditionViolated

UNITARY_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-8
ZERO_COLUMN_REL = 1e-12


def is_unitary(m, tol=UNITARY_TOL):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    err = m.conj().T @ m - np.eye(m.shape[0])
    return bool(np.max(np.abs(err), initial=0.0) <= tol)


def dft_matrix(n):
    """Unitary DFT with entries ``omega^{jk}/sqrt(n)``, ``omega = e^{2 pi i/n}``."""
    k = np.arange(n)
    return np.exp(2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def inverse_dft_matrix(n):
    return dft_matrix(n).conj()


def _orthogonalize(v, basis):
    # modified Gram-Schmidt, two passes for stability
    for _ in range(2):
        for q in basis:
            v = v - q * np.vdot(q, v)
    return v


def gram_schmidt_complete(columns, dim):
    """Unitary with prescribed (normalized) columns, completed deterministically.

    ``columns`` maps column index to a vector.  The remaining indices are filled
    in increasing order with canonical basis vectors orthogonalized against all
    previously placed columns; a candidate is accepted only when its residual
    keeps at least half of its weight on average (``|r|^2 >= 1/(2 dim)``), which
    is always possible by a counting argument.
    """
    dim = int(dim)
    if dim < 1:
        raise DimensionMismatch("dimension must be positive")
    placed = {}
    for idx, vec in dict(columns).items():
        idx = int(idx)
        v = np.asarray(vec, dtype=complex).ravel()
        if v.shape != (dim,):
            raise DimensionMismatch(f"column {idx} has length {v.size}, expected {dim}")
        if not 0 <= idx < dim:
            raise DimensionMismatch(f"column index {idx} outside 0..{dim - 1}")
        nrm = np.linalg.norm(v)
        if nrm == 0 or not np.isfinite(nrm):
            raise DegenerateInput(f"designated column {idx} is zero")
        placed[idx] = v / nrm
    keys = sorted(placed)
    for i, a in enumerate(keys):
        for b in keys[i + 1 :]:
            ov = abs(np.vdot(placed[a], placed[b]))
            if ov > ORTHOGONALITY_TOL:
                raise DegenerateInput(
                    f"designated columns {a} and {b} overlap by {ov:.3e}"
                )

    u = np.zeros((dim, dim), dtype=complex)
    basis = []
    for idx in keys:
        u[:, idx] = placed[idx]
        basis.append(placed[idx])
    threshold = 1.0 / (2 * dim)
    candidate = 0
    for idx in range(dim):
        if idx in placed:
            continue
        while True:
            if candidate >= dim:
                # unreachable for orthonormal input; kept as a hard stop
                raise DegenerateInput("could not complete the orthonormal basis")
            e = np.zeros(dim, dtype=complex)
            e[candidate] = 1.0
            candidate += 1
            r = _orthogonalize(e, basis)
            if np.vdot(r, r).real >= threshold:
                break
        r = r / np.linalg.norm(r)
        u[:, idx] = r
        basis.append(r)
    return u


def qr_upper(a):
    """Unitary ``Q`` with ``Q^dagger A`` upper triangular, real nonnegative diagonal."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("qr_upper needs a square matrix")
    q, r = np.linalg.qr(a, mode="complete")
    d = np.diag(r)
    phase = np.ones(len(d), dtype=complex)
    nz = np.abs(d) > 0
    phase[nz] = d[nz] / np.abs(d[nz])
    # Q R = (Q P)(P^* R) with P diagonal of unit phases
    return q * phase[None, :]


def null_vector(vectors, dim):
    """A unit vector orthogonal to the span of ``vectors`` (which must not span C^dim).

    Taken as the left singular vector of the smallest singular value, which is
    robust when the spanning set is rank deficient.
    """
    vectors = list(vectors)
    if not vectors:
        e = np.zeros(dim, dtype=complex)
        e[0] = 1.0
        return e
    m = np.stack([np.asarray(v, dtype=complex) for v in vectors], axis=1)
    u, _, _ = np.linalg.svd(m, full_matrices=True)
    return u[:, -1]


def strict_upper(m):
    return np.triu(m, k=1)


def strict_lower(m):
    return np.tril(m, k=-1)


def simultaneous_triangularize(a, b, tol=1e-10):
    """Unitary ``Q`` with ``Q^dagger A`` upper and ``Q^dagger B`` lower triangular.

    Requires ``A^dagger B`` lower triangular.  Works iteratively on a shrinking
    window: at each step the first remaining column of ``Q`` follows the first
    column of the current ``A`` block and the last follows the last column of
    the current ``B`` block, with the zero-column special cases handled by
    null-space vectors.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise DimensionMismatch("A and B must be square matrices of the same size")
    n = a.shape[0]
    scale = max(1.0, np.linalg.norm(a) * np.linalg.norm(b))
    viol = np.max(np.abs(strict_upper(a.conj().T @ b)), initial=0.0)
    if viol > tol * scale:
        raise PreconditionViolated(
            f"A^dagger B is not lower triangular (max strict-upper entry {viol:.3e})"
        )

    q = np.eye(n, dtype=complex)
    at = a.copy()
    bt = b.copy()
    zero_cut = ZERO_COLUMN_REL * (max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0)) + 1.0)
    lo, hi = 0, n - 1
    while hi - lo + 1 > 1:
        m = hi - lo + 1
        blk_a = at[lo : hi + 1, lo : hi + 1]
        blk_b = bt[lo : hi + 1, lo : hi + 1]
        a0 = blk_a[:, 0]
        bl = blk_b[:, m - 1]
        a0_zero = np.linalg.norm(a0) <= zero_cut
        bl_zero = np.linalg.norm(bl) <= zero_cut
        if not a0_zero:
            u0 = a0 / np.linalg.norm(a0)
        else:
            u0 = null_vector([blk_b[:, j] for j in range(1, m)], m)
        if not bl_zero:
            ul = _orthogonalize(bl, [u0])
            nrm = np.linalg.norm(ul)
            if nrm <= zero_cut:
                # b_last parallel to u0 only happens for m == 1 in exact arithmetic
                ul = null_vector([u0], m)
            else:
                ul = ul / nrm
        else:
            ul = null_vector([u0] + [blk_a[:, j] for j in range(m - 1)], m)
        v = gram_schmidt_complete({0: u0, m - 1: ul}, m)
        q[:, lo : hi + 1] = q[:, lo : hi + 1] @ v
        vh = v.conj().T
        at[lo : hi + 1, :] = vh @ at[lo : hi + 1, :]
        bt[lo : hi + 1, :] = vh @ bt[lo : hi + 1, :]
        lo += 1
        hi -= 1
    return q


def triangularity_residuals(q, a, b):
    """``(max |strict-lower(Q^dagger A)|, max |strict-upper(Q^dagger B)|)``."""
    qa = q.conj().T @ a
    qb = q.conj().T @ b
    return (
        float(np.max(np.abs(strict_lower(qa)), initial=0.0)),
        float(np.max(np.abs(strict_upper(qb)), initial=0.0)),
    )


def random_unitary(n, rng=None):
    """Haar-distributed unitary via phase-corrected QR of a complex Ginibre matrix."""
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))[None, :]
