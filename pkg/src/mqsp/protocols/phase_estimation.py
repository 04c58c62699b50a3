"""Textbook phase estimation as a one-step polynomial state."""

import numpy as np

from ..decompose import decompose_one_step
from ..poly import PolynomialState

MAX_BITS = 12


def build_phase_estimation_state(b):
    """``P_x(z) = 2^-b sum_k omega^{-xk} z^k`` for ``x`` in ``0..2^b-1``.

    At ``z = omega^j`` the state is the basis vector ``|j>``.
    """
    b = int(b)
    if not 1 <= b <= MAX_BITS:
        raise ValueError(f"b must lie in 1..{MAX_BITS}, got {b}")
    d = 2**b
    k = np.arange(d)
    # row k is gamma_k, entry x is omega^{-xk} / d
    gam = np.exp(-2j * np.pi * np.outer(k, k) / d) / d
    return PolynomialState(gam, 0, dim=d)


def build_phase_estimation_protocol(b):
    return decompose_one_step(build_phase_estimation_state(b), bits=b)
