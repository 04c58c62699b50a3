"""Instance generators shared by the test modules."""

import numpy as np

from mqsp import LaurentPolynomial, random_protocol, random_unitary
from mqsp.simulate import protocol_to_state


def random_laurent(rng, lo=-4, hi=4):
    n = hi - lo + 1
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return LaurentPolynomial(c, lo)


def random_valid_state(rng, dim, degree, split=None):
    """Expansion of a Haar-random protocol: valid by construction."""
    return protocol_to_state(random_protocol(dim, degree, split, rng))


def one_step_state(rng, dim, degree=None):
    """State with pairwise orthogonal coefficient vectors: columns of a unitary times weights."""
    degree = dim - 1 if degree is None else degree
    u = random_unitary(dim, rng)
    w = rng.random(degree + 1) + 0.05
    w /= np.linalg.norm(w)
    return u[:, : degree + 1].T * w[:, None]


def triangular_pair(rng, n, zero_cols=0):
    """``A = Q0 U``, ``B = Q0 L`` so that ``A^dagger B = U^dagger L`` is lower triangular."""
    q0 = random_unitary(n, rng)
    up = np.triu(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    lo = np.tril(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    for _ in range(zero_cols):
        up[:, rng.integers(n)] = 0
        lo[:, rng.integers(n)] = 0
    return q0 @ up, q0 @ lo


def unit_circle(m, rng=None):
    if rng is None:
        return np.exp(2j * np.pi * np.arange(m) / m)
    return np.exp(2j * np.pi * rng.random(m))
