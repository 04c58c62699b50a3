"""Protocol synthesis: degree reductions and full decompositions.

A protocol ``A_n W A_{n-1} W ... W A_0 |0>`` is peeled from the outside in.
Each reduction finds ``A`` such that ``W^dagger A^dagger |gamma(z)>`` has lower
degree, and the last remaining constant vector fixes ``A_0``.
"""

from dataclasses import dataclass

import numpy as np

from ._json import decode_matrix, encode_matrix
from .errors import (
    ConditionNotMet,
    DegreeTooHigh,
    DegreeZero,
    DimensionMismatch,
    InvalidState,
    OrthogonalityViolated,
    ParityViolated,
    RangeExceeded,
)
from .linalg import gram_schmidt_complete, random_unitary, simultaneous_triangularize
from .poly import DEFAULT_VALIDATION_TOL, PolynomialState, coefficient_matrix, is_valid_state

# vectors below this norm are treated as absent when choosing protocol columns
ZERO_VECTOR_TOL = 1e-13
PARITY_TOL = 1e-10


@dataclass(frozen=True)
class SignalOperator:
    """``diag(z^{d_0}, ..., z^{d_{D-1}})`` stored as its exponent vector."""

    exponents: tuple

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if len(exps) < 2:
            raise ValueError("a signal operator needs at least two diagonal entries")
        if len(set(exps)) == 1:
            raise ValueError("all exponents equal: the signal operator is a global phase")

    @classmethod
    def single_step(cls, dim, split=None):
        split = dim // 2 if split is None else int(split)
        if not 1 <= split <= dim - 1:
            raise ValueError(f"split must lie in 1..{dim - 1}, got {split}")
        return cls((0,) * split + (1,) * (dim - split))

    @classmethod
    def exponential(cls, b):
        return cls(tuple(range(2 ** int(b))))

    @classmethod
    def powers(cls, n):
        """``diag(1, z, ..., z^{n-1})`` for any ``n >= 2``."""
        return cls(tuple(range(int(n))))

    @classmethod
    def laurent_single(cls, dim, split=None):
        split = dim // 2 if split is None else int(split)
        if not 1 <= split <= dim - 1:
            raise ValueError(f"split must lie in 1..{dim - 1}, got {split}")
        return cls((-1,) * split + (1,) * (dim - split))

    @classmethod
    def laurent_exponential(cls, b):
        top = 2 ** int(b) - 1
        return cls(tuple(range(-top, top + 1, 2)))

    @property
    def dim(self):
        return len(self.exponents)

    @property
    def array(self):
        return np.array(self.exponents, dtype=int)

    def diagonal(self, z):
        """Diagonal entries at ``z``; shape (D,) or z.shape + (D,)."""
        z = np.asarray(z, dtype=complex)
        e = self.array
        out = np.where(e >= 0, z[..., None] ** np.abs(e), 1.0 / z[..., None] ** np.abs(e))
        return out

    def matrix(self, z):
        return np.diag(self.diagonal(complex(z)))


@dataclass(frozen=True)
class Protocol:
    """Signal operator plus unitaries ``A_0 ... A_n`` (``A_0`` acts first)."""

    signal: SignalOperator
    unitaries: tuple

    def __post_init__(self):
        mats = tuple(np.array(u, dtype=complex) for u in self.unitaries)
        if not mats:
            raise ValueError("a protocol needs at least one unitary")
        d = self.signal.dim
        for i, u in enumerate(mats):
            if u.shape != (d, d):
                raise DimensionMismatch(f"unitary {i} has shape {u.shape}, expected {(d, d)}")
            u.flags.writeable = False
        object.__setattr__(self, "unitaries", mats)

    @property
    def dim(self):
        return self.signal.dim

    @property
    def n_steps(self):
        return len(self.unitaries) - 1

    def __len__(self):
        return len(self.unitaries)

    def to_dict(self):
        return {
            "signal_exponents": list(self.signal.exponents),
            "unitaries": [encode_matrix(u) for u in self.unitaries],
        }

    @classmethod
    def from_dict(cls, obj):
        return cls(
            SignalOperator(tuple(obj["signal_exponents"])),
            tuple(decode_matrix(m) for m in obj["unitaries"]),
        )


def _shift_rows(s, shifts):
    """Multiply row ``x`` of the state by ``z^{shifts[x]}``."""
    shifts = np.asarray(shifts, dtype=int)
    if s.num_powers == 0:
        return s
    lo = s.min_power + int(shifts.min())
    hi = s.degree + int(shifts.max())
    out = np.zeros((hi - lo + 1, s.dim), dtype=complex)
    g = s.gammas
    for x in range(s.dim):
        start = s.min_power + shifts[x] - lo
        out[start : start + len(g), x] = g[:, x]
    return PolynomialState(out, lo, dim=s.dim)


def apply_signal(s, op):
    """Signal operator applied to a state: row ``x`` times ``z^{d_x}``."""
    if s.dim != op.dim:
        raise DimensionMismatch(f"state has dim {s.dim}, signal operator has {op.dim}")
    return _shift_rows(s, op.array)


def apply_signal_adjoint(s, op):
    """Adjoint signal operator: row ``x`` times ``z^{-d_x}``."""
    if s.dim != op.dim:
        raise DimensionMismatch(f"state has dim {s.dim}, signal operator has {op.dim}")
    return _shift_rows(s, -op.array)


def _check_analytic(s):
    if s.num_powers and s.min_power < 0:
        raise RangeExceeded(f"state has negative powers (min power {s.min_power})")


def _formal_degree(s, degree):
    if degree is None:
        return s.degree
    degree = int(degree)
    if s.degree > degree:
        raise DegreeTooHigh(f"state degree {s.degree} exceeds the requested bound {degree}")
    return degree


def _require_valid(s, tol):
    rep = is_valid_state(s, tol)
    if not rep:
        raise InvalidState(
            f"state is not normalized: coefficient of z^{rep.worst_power} deviates by "
            f"{rep.max_deviation:.3e}"
        )


def linear_reduce(s, op, degree=None, tol=DEFAULT_VALIDATION_TOL, check=True):
    """One linear step: ``(A, s')`` with ``s = A W s'`` and ``deg s' <= deg s - 1``.

    ``op`` is a single-step operator with exponents in {0, 1}.  The unitary
    puts the direction of ``gamma_0`` on an exponent-0 row and the direction of
    ``gamma_n`` on an exponent-1 row (the shorter one orthogonalized against the
    longer); every other row is then orthogonal to both.  ``degree`` lets callers treat the
    state as having a larger formal degree with vanishing top coefficients.
    """
    e = op.array
    if s.dim != op.dim:
        raise DimensionMismatch(f"state has dim {s.dim}, signal operator has {op.dim}")
    if set(e.tolist()) != {0, 1}:
        raise ValueError("linear_reduce needs a signal operator with exponents 0 and 1")
    _check_analytic(s)
    n = _formal_degree(s, degree)
    if n < 1:
        raise DegreeZero("a degree-0 state admits no further reduction")
    if check:
        _require_valid(s, tol)

    g = s.dense(0, n)
    g0, gn = g[0], g[n]
    overlap = abs(np.vdot(g0, gn))
    if check and overlap > tol:
        raise InvalidState(f"<gamma_0|gamma_n> = {overlap:.3e} should vanish for a valid state")
    row0 = int(np.flatnonzero(e == 0)[0])
    row1 = int(np.flatnonzero(e == 1)[0])
    # keep the longer vector exact and orthogonalize the shorter one against it;
    # the dropped overlap is then <gamma_0|gamma_n> / max(|gamma_0|, |gamma_n|)
    n0, nn = np.linalg.norm(g0), np.linalg.norm(gn)
    cols = {}
    if max(n0, nn) > ZERO_VECTOR_TOL:
        if n0 >= nn:
            big, small, rb, rs = g0 / n0, gn, row0, row1
        else:
            big, small, rb, rs = gn / nn, g0, row1, row0
        cols[rb] = big
        small = small - big * np.vdot(big, small)
        ns = np.linalg.norm(small)
        if ns > ZERO_VECTOR_TOL:
            cols[rs] = small / ns
    a = gram_schmidt_complete(cols, s.dim)

    h = g @ a.conj()  # row k holds A^dagger gamma_k
    out = np.where(e[None, :] == 0, h[:n], h[1:])
    return a, PolynomialState(out, 0, dim=s.dim)


def exponential_reduce(s, b, degree=None, tol=DEFAULT_VALIDATION_TOL, check=True):
    """One exponential step over ``diag(1, z, ..., z^{D-1})``, ``D = 2^b``.

    Possible iff ``Gamma_0^dagger Gamma_{n-D+1}`` is lower triangular; then the
    unitary simultaneously triangularizes both coefficient matrices and the
    degree drops by ``D - 1``.
    """
    dim = 2 ** int(b)
    if s.dim != dim:
        raise DimensionMismatch(f"state has dim {s.dim}, expected 2^{b} = {dim}")
    _check_analytic(s)
    n = _formal_degree(s, degree)
    j = n - (dim - 1)
    if j < 0:
        raise DegreeTooHigh(f"formal degree {n} is below {dim - 1}; pad with degree=")
    gam0 = coefficient_matrix(s, 0).entries
    gamj = coefficient_matrix(s, j).entries
    viol = float(np.max(np.abs(np.triu(gam0.conj().T @ gamj, k=1)), initial=0.0))
    if viol > tol:
        raise ConditionNotMet(
            f"Gamma_0^dagger Gamma_{j} is not lower triangular (max violation {viol:.3e})",
            viol,
        )
    if check:
        _require_valid(s, tol)

    a = simultaneous_triangularize(gam0, gamj, tol=max(tol, 1e-10))
    h = s.dense(0, n) @ a.conj()
    x = np.arange(dim)
    p = np.arange(j + 1)
    out = h[p[:, None] + x[None, :], x[None, :]]
    return a, PolynomialState(out, 0, dim=dim)


def _final_unitary(s):
    g0 = s.gamma(0)
    if np.linalg.norm(g0) <= ZERO_VECTOR_TOL:
        raise InvalidState("reduced state vanished")
    return gram_schmidt_complete({0: g0}, s.dim)


def _dense_expand(mats, e, n):
    """Coefficients (n+1, D) of ``A_n W ... W A_0 |0>`` for exponents ``e`` in {0, 1}."""
    d = len(e)
    shift = e == 1
    v = np.zeros((n + 1, d), dtype=complex)
    v[0] = mats[0][:, 0]
    for a in mats[1:]:
        w = v.copy()
        w[:, shift] = 0
        w[1:, shift] = v[:-1, shift]
        v = w @ a.T
    return v


def _greedy_linear(s, op, n, tol):
    mats = []
    cur = s
    for k in range(n, 0, -1):
        a, cur = linear_reduce(cur, op, degree=k, tol=tol, check=False)
        mats.append(a)
    mats.append(_final_unitary(cur))
    return Protocol(op, tuple(reversed(mats)))


# round-trip error above which decompose_linear switches to extended precision
PRECISION_FALLBACK = 1e-11


def decompose_linear(
    s, split=None, n_steps=None, tol=DEFAULT_VALIDATION_TOL, fallback=PRECISION_FALLBACK
):
    """Protocol over ``single_step(dim, split)`` realizing ``s``.

    Emits exactly ``n_steps + 1`` unitaries (default ``degree + 1``).  Validity
    is checked once; each reduction preserves it analytically.

    Stripping amplifies the tiny absolute invalidity of a double-precision state
    by roughly ``1/|gamma_end|`` per step, which matters when the outer
    coefficient vectors are very small.  If the round trip exceeds
    ``fallback``, the state is first projected onto exact validity and then
    stripped in extended precision (see :mod:`mqsp._highprec`).
    """
    _check_analytic(s)
    n = max(_formal_degree(s, n_steps), 0)
    _require_valid(s, tol)
    op = SignalOperator.single_step(s.dim, split)
    proto = _greedy_linear(s, op, n, tol)
    if n == 0:
        return proto
    target = s.dense(0, n)
    err = float(np.max(np.abs(_dense_expand(proto.unitaries, op.array, n) - target)))
    for dps in (50, 100, 200):
        if err <= fallback:
            break
        from ._highprec import strip_linear

        mats = strip_linear(target, op.array, dps)
        cand = Protocol(op, tuple(mats))
        cerr = float(np.max(np.abs(_dense_expand(cand.unitaries, op.array, n) - target)))
        if cerr < err:
            proto, err = cand, cerr
    return proto


def decompose_one_step(s, bits=None, tol=DEFAULT_VALIDATION_TOL):
    """Two-unitary protocol ``A_1 W A_0`` for a state with orthogonal coefficients.

    ``W = diag(1, z, ..., z^{D-1})``.  ``A_1`` has ``gamma_k/|gamma_k|`` as
    column ``k`` and ``A_0`` prepares the vector of norms ``|gamma_k|``.
    """
    dim = s.dim
    if bits is not None and dim != 2 ** int(bits):
        raise DimensionMismatch(f"state has dim {dim}, expected 2^{bits}")
    _check_analytic(s)
    if s.degree > dim - 1:
        raise DegreeTooHigh(f"degree {s.degree} exceeds {dim - 1}")
    gam = coefficient_matrix(s, 0).entries
    gram = gam.conj().T @ gam
    off = np.abs(gram - np.diag(np.diag(gram)))
    worst = float(np.max(off, initial=0.0))
    if worst > tol:
        j, k = np.unravel_index(int(np.argmax(off)), off.shape)
        raise OrthogonalityViolated(
            f"coefficient vectors {j} and {k} overlap: |<gamma_j|gamma_k>| = {worst:.3e}",
            worst,
        )
    _require_valid(s, tol)
    norms = np.linalg.norm(gam, axis=0)
    cols = {k: gam[:, k] for k in range(dim) if norms[k] > ZERO_VECTOR_TOL}
    a1 = gram_schmidt_complete(cols, dim)
    a0 = gram_schmidt_complete({0: norms.astype(complex)}, dim)
    return Protocol(SignalOperator.powers(dim), (a0, a1))


def laurent_to_analytic(s, n_steps, tol=PARITY_TOL):
    """``t`` with ``s(z) = z^{-n} t(z^2)``: coefficient of ``z^{2j-n}`` becomes ``y^j``."""
    n = int(n_steps)
    if n < 0:
        raise ValueError("n_steps must be nonnegative")
    if s.num_powers == 0:
        return s
    if s.min_power < -n or s.degree > n:
        raise RangeExceeded(
            f"powers {s.min_power}..{s.degree} do not fit in [-{n}, {n}]"
        )
    g = s.dense(-n, n)
    wrong = g[1::2]  # powers -n+1, -n+3, ...
    bad = float(np.max(np.abs(wrong), initial=0.0))
    if bad > tol:
        raise ParityViolated(f"coefficients of parity opposite to {n} mod 2 reach {bad:.3e}")
    return PolynomialState(g[0::2], 0, dim=s.dim)


def analytic_to_laurent(t, n_steps):
    """Inverse of :func:`laurent_to_analytic`."""
    if t.num_powers == 0:
        return t
    g = t.gammas
    out = np.zeros((2 * (len(g) - 1) + 1, t.dim), dtype=complex)
    out[0::2] = g
    return PolynomialState(out, 2 * t.min_power - int(n_steps), dim=t.dim)


def laurent_degree(s):
    """Smallest ``n`` with all powers in ``[-n, n]``."""
    if s.num_powers == 0:
        return 0
    return max(-s.min_power, s.degree, 0)


def decompose_laurent(s, split=None, n_steps=None, tol=DEFAULT_VALIDATION_TOL):
    """Protocol over ``laurent_single(dim, split)`` realizing a Laurent state."""
    n = laurent_degree(s) if n_steps is None else int(n_steps)
    t = laurent_to_analytic(s, n)
    p = decompose_linear(t, split, n_steps=n, tol=tol)
    return Protocol(SignalOperator.laurent_single(s.dim, split), p.unitaries)


def random_protocol(dim, n_steps, split=None, rng=None, signal=None):
    """Haar-random unitaries around a given (default single-step) signal operator."""
    rng = np.random.default_rng(rng)
    op = signal if signal is not None else SignalOperator.single_step(dim, split)
    return Protocol(op, tuple(random_unitary(dim, rng) for _ in range(n_steps + 1)))
