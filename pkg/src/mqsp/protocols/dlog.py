"""Two parallel phase-estimation registers for the discrete logarithm."""

import numpy as np

from ..decompose import Protocol, decompose_one_step
from ..poly import PolynomialState


def _register_state(n):
    k = np.arange(n)
    gam = np.exp(-2j * np.pi * np.outer(k, k) / n) / n
    return PolynomialState(gam, 0, dim=n)


def build_discrete_log_protocols(N):
    """``(V-register protocol, U-register protocol)`` over ``diag(1, z, ..., z^{N-1})``.

    Both registers run the same one-step protocol: uniform preparation, then
    the inverse DFT over ``Z_N``.  Any ``N`` works (no power-of-two padding).
    """
    N = int(N)
    if not 2 <= N <= 64:
        raise ValueError(f"N must lie in 2..64, got {N}")
    p = decompose_one_step(_register_state(N))
    return p, Protocol(p.signal, p.unitaries)
