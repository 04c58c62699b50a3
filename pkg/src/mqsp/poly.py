"""Laurent polynomials and polynomial states at the coefficient level.

A :class:`LaurentPolynomial` is a dense run of complex coefficients starting at
``min_exponent``.  A :class:`PolynomialState` is a vector of such polynomials,
stored the other way round: one complex coefficient vector ``gamma_k`` per power
of ``z``.  Both are immutable.
"""

from dataclasses import dataclass

import numpy as np

from ._json import decode_complex, encode_complex
from .errors import DimensionMismatch, DomainError

DEFAULT_VALIDATION_TOL = 1e-8


def _frozen(arr):
    arr = np.array(arr, dtype=complex, copy=True)
    arr.flags.writeable = False
    return arr


def _trim_bounds(magnitudes, tol):
    """Indices [lo, hi) of the first/last entries with magnitude > tol."""
    keep = np.flatnonzero(magnitudes > tol)
    if keep.size == 0:
        return 0, 0
    return int(keep[0]), int(keep[-1]) + 1


def _int_power(z, k):
    # complex ** negative int goes through exp/log in numpy; keep it explicit
    if k >= 0:
        return z**k
    return 1.0 / z ** (-k)


class LaurentPolynomial:
    """Complex Laurent polynomial ``sum_i c[i] z^(min_exponent + i)``.

    Leading and trailing exact zeros are trimmed on construction; use
    :meth:`trim` with a positive tolerance for numerical cleanup.  The zero
    polynomial has no coefficients and ``min_exponent == 0``.
    """

    __slots__ = ("_min", "_coef")

    def __init__(self, coefficients=(), min_exponent=0):
        coef = np.atleast_1d(np.asarray(coefficients, dtype=complex))
        if coef.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        lo, hi = _trim_bounds(np.abs(coef), 0.0)
        if lo == hi:
            self._min = 0
            self._coef = _frozen(np.zeros(0))
        else:
            self._min = int(min_exponent) + lo
            self._coef = _frozen(coef[lo:hi])

    @classmethod
    def monomial(cls, exponent, coefficient=1.0):
        return cls([coefficient], exponent)

    @classmethod
    def constant(cls, value):
        return cls([value], 0)

    @classmethod
    def from_dict(cls, obj):
        return cls(decode_complex(obj["coefficients"]), int(obj["min_exponent"]))

    def to_dict(self):
        return {"min_exponent": self._min, "coefficients": encode_complex(self._coef)}

    @property
    def min_exponent(self):
        return self._min

    @property
    def max_exponent(self):
        """Largest stored exponent (``min_exponent - 1`` for the zero polynomial)."""
        return self._min + len(self._coef) - 1

    @property
    def coefficients(self):
        return self._coef

    @property
    def is_zero(self):
        return len(self._coef) == 0

    def coefficient(self, k):
        i = k - self._min
        if 0 <= i < len(self._coef):
            return complex(self._coef[i])
        return 0j

    def dense(self, lo, hi):
        """Coefficients for exponents ``lo..hi`` inclusive, zero-filled."""
        out = np.zeros(hi - lo + 1, dtype=complex)
        if self.is_zero:
            return out
        a = max(lo, self._min)
        b = min(hi, self.max_exponent)
        if a <= b:
            out[a - lo : b - lo + 1] = self._coef[a - self._min : b - self._min + 1]
        return out

    def trim(self, tol):
        lo, hi = _trim_bounds(np.abs(self._coef), tol)
        return LaurentPolynomial(self._coef[lo:hi], self._min + lo)

    def __call__(self, z):
        return poly_eval(self, z)

    def __add__(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial.constant(other)
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(-self._coef, self._min)

    def __sub__(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial.constant(other)
        return poly_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentPolynomial):
            return poly_mul(self, other)
        return LaurentPolynomial(self._coef * complex(other), self._min)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return LaurentPolynomial(self._coef / complex(scalar), self._min)

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._min == other._min and np.array_equal(self._coef, other._coef)

    def __hash__(self):
        return hash((self._min, self._coef.tobytes()))

    def max_abs_diff(self, other):
        lo = min(self._min, other._min)
        hi = max(self.max_exponent, other.max_exponent)
        if hi < lo:
            return 0.0
        return float(np.max(np.abs(self.dense(lo, hi) - other.dense(lo, hi))))

    def __repr__(self):
        if self.is_zero:
            return "LaurentPolynomial(0)"
        terms = " + ".join(
            f"({c:.6g})z^{self._min + i}" for i, c in enumerate(self._coef) if c != 0
        )
        return f"LaurentPolynomial({terms})"


def poly_add(a, b):
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    lo = min(a.min_exponent, b.min_exponent)
    hi = max(a.max_exponent, b.max_exponent)
    return LaurentPolynomial(a.dense(lo, hi) + b.dense(lo, hi), lo)


def poly_mul(a, b):
    if a.is_zero or b.is_zero:
        return LaurentPolynomial()
    return LaurentPolynomial(
        np.convolve(a.coefficients, b.coefficients), a.min_exponent + b.min_exponent
    )


def poly_conj_reflect(p):
    """The polynomial ``q`` with ``q(z) = conj(p(z))`` on the unit circle."""
    if p.is_zero:
        return p
    return LaurentPolynomial(np.conj(p.coefficients[::-1]), -p.max_exponent)


def poly_eval(p, z):
    """Evaluate ``p`` at scalar or array ``z`` (Horner on the analytic part)."""
    z_arr = np.asarray(z, dtype=complex)
    if p.is_zero:
        out = np.zeros(z_arr.shape, dtype=complex)
        return out if out.ndim else complex(out)
    if p.min_exponent < 0 and np.any(z_arr == 0):
        raise DomainError("cannot evaluate negative powers at z = 0")
    acc = np.zeros(z_arr.shape, dtype=complex)
    for c in p.coefficients[::-1]:
        acc = acc * z_arr + c
    out = acc * _int_power(z_arr, p.min_exponent)
    return out if out.ndim else complex(out)


def poly_rotate(p, phase):
    """``q(z) = p(z e^{-i phase})``: coefficient ``c_k`` becomes ``c_k e^{-i k phase}``."""
    if p.is_zero:
        return p
    k = np.arange(p.min_exponent, p.max_exponent + 1)
    return LaurentPolynomial(p.coefficients * np.exp(-1j * k * phase), p.min_exponent)


class PolynomialState:
    """Vector of ``dim`` Laurent polynomials ``|gamma(z)> = sum_k gamma_k z^k``.

    ``gammas[i]`` is the coefficient vector of ``z^(min_power + i)``.  Zero
    coefficient vectors at either end are trimmed exactly on construction.
    """

    __slots__ = ("_dim", "_min", "_gammas")

    def __init__(self, gammas, min_power=0, dim=None):
        g = np.asarray(gammas, dtype=complex)
        if g.size == 0:
            if dim is None:
                dim = g.shape[-1] if g.ndim == 2 else 0
            g = np.zeros((0, dim), dtype=complex)
        if g.ndim == 1:
            g = g[None, :]
        if g.ndim != 2:
            raise ValueError("gammas must have shape (num_powers, dim)")
        if dim is not None and g.shape[1] != dim:
            raise DimensionMismatch(f"coefficient vectors have length {g.shape[1]}, expected {dim}")
        if g.shape[1] < 1:
            raise ValueError("dim must be positive")
        lo, hi = _trim_bounds(np.max(np.abs(g), axis=1) if len(g) else np.zeros(0), 0.0)
        self._dim = int(g.shape[1])
        if lo == hi:
            self._min = 0
            self._gammas = _frozen(np.zeros((0, self._dim)))
        else:
            self._min = int(min_power) + lo
            self._gammas = _frozen(g[lo:hi])

    @classmethod
    def from_polynomials(cls, polys):
        polys = list(polys)
        if not polys:
            raise ValueError("need at least one polynomial")
        nonzero = [p for p in polys if not p.is_zero]
        if not nonzero:
            return cls(np.zeros((0, len(polys))), 0, dim=len(polys))
        lo = min(p.min_exponent for p in nonzero)
        hi = max(p.max_exponent for p in nonzero)
        g = np.stack([p.dense(lo, hi) for p in polys], axis=1)
        return cls(g, lo)

    @classmethod
    def constant(cls, vector):
        return cls(np.asarray(vector, dtype=complex)[None, :], 0)

    @classmethod
    def from_dict(cls, obj):
        dim = int(obj["dim"])
        gammas = obj["gammas"]
        g = decode_complex(gammas, shape=(len(gammas), dim)) if len(gammas) else np.zeros((0, dim))
        return cls(g, int(obj.get("min_power", 0)), dim=dim)

    def to_dict(self):
        return {"dim": self._dim, "min_power": self._min, "gammas": encode_complex(self._gammas)}

    @property
    def dim(self):
        return self._dim

    @property
    def min_power(self):
        return self._min

    @property
    def degree(self):
        """Highest power with a nonzero coefficient vector (-1 for the zero state)."""
        if len(self._gammas) == 0:
            return -1
        return self._min + len(self._gammas) - 1

    @property
    def gammas(self):
        return self._gammas

    @property
    def num_powers(self):
        return len(self._gammas)

    def gamma(self, k):
        i = k - self._min
        if 0 <= i < len(self._gammas):
            return self._gammas[i].copy()
        return np.zeros(self._dim, dtype=complex)

    def dense(self, lo, hi):
        """Rows ``gamma_lo .. gamma_hi`` inclusive, zero-filled, shape (hi-lo+1, dim)."""
        out = np.zeros((max(hi - lo + 1, 0), self._dim), dtype=complex)
        if len(self._gammas) == 0:
            return out
        a = max(lo, self._min)
        b = min(hi, self.degree)
        if a <= b:
            out[a - lo : b - lo + 1] = self._gammas[a - self._min : b - self._min + 1]
        return out

    def polynomials(self):
        return [LaurentPolynomial(self._gammas[:, x], self._min) for x in range(self._dim)]

    def polynomial(self, x):
        return LaurentPolynomial(self._gammas[:, x], self._min)

    def evaluate(self, z):
        """State vector at ``z``; shape (dim,) for a scalar, (len(z), dim) otherwise."""
        z_arr = np.asarray(z, dtype=complex)
        flat = np.atleast_1d(z_arr).ravel()
        if len(self._gammas) == 0:
            out = np.zeros((len(flat), self._dim), dtype=complex)
        else:
            if self._min < 0 and np.any(flat == 0):
                raise DomainError("cannot evaluate negative powers at z = 0")
            acc = np.zeros((len(flat), self._dim), dtype=complex)
            for g in self._gammas[::-1]:
                acc = acc * flat[:, None] + g[None, :]
            acc *= _int_power(flat, self._min)[:, None]
            out = acc
        return out[0] if z_arr.ndim == 0 else out.reshape(z_arr.shape + (self._dim,))

    def apply(self, unitary):
        """Left-multiply every coefficient vector by ``unitary``."""
        u = np.asarray(unitary, dtype=complex)
        if u.shape != (self._dim, self._dim):
            raise DimensionMismatch(f"matrix shape {u.shape} does not match dim {self._dim}")
        return PolynomialState(self._gammas @ u.T, self._min, dim=self._dim)

    def shift(self, k):
        """Multiply the whole state by the global phase ``z^k``."""
        return PolynomialState(self._gammas, self._min + k, dim=self._dim)

    def trim(self, tol):
        lo, hi = _trim_bounds(
            np.max(np.abs(self._gammas), axis=1) if len(self._gammas) else np.zeros(0), tol
        )
        return PolynomialState(self._gammas[lo:hi], self._min + lo, dim=self._dim)

    def max_abs_diff(self, other):
        if other.dim != self._dim:
            raise DimensionMismatch("states have different dimensions")
        lo = min(self._min, other._min)
        hi = max(self.degree, other.degree)
        if hi < lo:
            return 0.0
        return float(np.max(np.abs(self.dense(lo, hi) - other.dense(lo, hi))))

    def __eq__(self, other):
        if not isinstance(other, PolynomialState):
            return NotImplemented
        return (
            self._dim == other._dim
            and self._min == other._min
            and np.array_equal(self._gammas, other._gammas)
        )

    def __hash__(self):
        return hash((self._dim, self._min, self._gammas.tobytes()))

    def __repr__(self):
        return f"PolynomialState(dim={self._dim}, powers={self._min}..{self.degree})"


@dataclass(frozen=True)
class CoefficientMatrix:
    """``dim x dim`` matrix whose column ``c`` is ``gamma_{start_power + c}``."""

    entries: np.ndarray
    start_power: int


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    max_deviation: float
    worst_power: int
    tol: float

    def __bool__(self):
        return self.valid


def state_gram_poly(s):
    """``<gamma(z)|gamma(z)> = sum_{k,l} <gamma_l|gamma_k> z^{k-l}`` from coefficients.

    Negative powers are filled in as conjugates of the positive ones, so the
    result is Hermitian-symmetric bit for bit.
    """
    g = s.gammas
    L = len(g)
    if L == 0:
        return LaurentPolynomial()
    gram = np.conj(g) @ g.T  # gram[l, k] = <gamma_l|gamma_k>
    pos = np.array([np.trace(gram, offset=m) for m in range(L)], dtype=complex)
    pos[0] = pos[0].real
    coef = np.concatenate([np.conj(pos[:0:-1]), pos])
    return LaurentPolynomial(coef, -(L - 1))


def is_valid_state(s, tol=DEFAULT_VALIDATION_TOL):
    """Check the normalization identity coefficient by coefficient."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    gram = state_gram_poly(s)
    if gram.is_zero:
        return ValidityReport(False, 1.0, 0, tol)
    lo, hi = gram.min_exponent, gram.max_exponent
    lo, hi = min(lo, 0), max(hi, 0)
    dev = np.abs(gram.dense(lo, hi) - (np.arange(lo, hi + 1) == 0))
    i = int(np.argmax(dev))
    worst = float(dev[i])
    return ValidityReport(worst <= tol, worst, lo + i, tol)


def coefficient_matrix(s, j):
    """Columns ``gamma_j .. gamma_{j+dim-1}`` (zero where the state has none)."""
    return CoefficientMatrix(s.dense(j, j + s.dim - 1).T.copy(), j)
