"""Exact statevector evaluation of protocols and the end-to-end demos.

All probabilities are computed from amplitudes.  Eigenphases are given in
turns (``z = e^{2 pi i phi}``) except for phase location, whose arcs and test
points are angles in radians.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .decompose import apply_signal, decompose_linear
from .errors import DimensionMismatch, DomainError, NotNormalized
from .poly import PolynomialState

UNIT_CIRCLE_TOL = 1e-12


def eval_protocol(p, z):
    """``A_n W(z) ... W(z) A_0 |0>``; shape (D,) for scalar ``z``, (len(z), D) otherwise."""
    z_arr = np.asarray(z, dtype=complex)
    flat = np.atleast_1d(z_arr).ravel()
    if np.any(np.abs(np.abs(flat) - 1.0) > UNIT_CIRCLE_TOL):
        raise DomainError("protocols are evaluated on the unit circle only")
    mats = p.unitaries
    if mats[0].shape[0] != p.signal.dim:
        raise DimensionMismatch("protocol unitaries do not match the signal operator")
    diag = p.signal.diagonal(flat)  # (len, D)
    v = np.repeat(mats[0][:, 0][None, :], len(flat), axis=0)
    for a in mats[1:]:
        v = (v * diag) @ a.T
    return v[0] if z_arr.ndim == 0 else v.reshape(z_arr.shape + (p.dim,))


def protocol_to_state(p):
    """Expand the protocol product into coefficient vectors."""
    s = PolynomialState.constant(p.unitaries[0][:, 0])
    for a in p.unitaries[1:]:
        s = apply_signal(s, p.signal).apply(a)
    return s


def eigen_transform(p, spectrum):
    """Joint amplitudes ``T[x, s] = alpha_s <x| protocol(e^{2 pi i phi_s})``.

    ``spectrum`` is a sequence of ``(phi_s, alpha_s)`` pairs with phases in turns.
    """
    spectrum = list(spectrum)
    phases = np.array([float(ph) for ph, _ in spectrum])
    alphas = np.array([complex(al) for _, al in spectrum])
    total = float(np.sum(np.abs(alphas) ** 2))
    if abs(total - 1.0) > 1e-10:
        raise NotNormalized(f"input amplitudes have squared norm {total:.12g}")
    vecs = eval_protocol(p, np.exp(2j * np.pi * phases))  # (S, D)
    return (vecs * alphas[:, None]).T


def control_distribution(table):
    """Marginal over the control register: ``P(x) = sum_s |T[x, s]|^2``."""
    t = np.asarray(table)
    return np.sum(np.abs(t) ** 2, axis=1)


def outcome_distribution(p, phase):
    """Measurement distribution of the control register for one eigenphase (turns)."""
    return np.abs(eval_protocol(p, np.exp(2j * np.pi * phase))) ** 2


def sample_counts(probs, shots, seed=None):
    """Multinomial counts; illustration only, never used for reported metrics."""
    rng = np.random.default_rng(seed)
    probs = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    return rng.multinomial(int(shots), probs / probs.sum())


@dataclass
class DiscreteLogResult:
    order: int
    ell: int
    success_probability: float
    recovered: dict = field(default_factory=dict)
    joint: np.ndarray = None


def run_discrete_log(N, ell):
    """Exact outcome distribution of the two-register discrete-log circuit.

    The eigenvector ``|u_s>`` (uniform ``s``) kicks back ``omega^{s ell}`` on
    the first register and ``omega^s`` on the second; outcome ``(x, y)`` with
    ``y`` invertible mod ``N`` gives the estimate ``x y^{-1} mod N``.
    """
    from .protocols.dlog import build_discrete_log_protocols

    N = int(N)
    ell = int(ell)
    if not 0 <= ell < N:
        raise ValueError(f"ell must lie in 0..{N - 1}")
    v_proto, u_proto = build_discrete_log_protocols(N)
    s = np.arange(N)
    omega = np.exp(2j * np.pi / N)
    pv = np.abs(eval_protocol(v_proto, omega ** ((s * ell) % N))) ** 2  # (s, x)
    pu = np.abs(eval_protocol(u_proto, omega**s)) ** 2  # (s, y)
    joint = pv.T @ pu / N  # joint[x, y]
    recovered = {}
    for y in range(N):
        if math.gcd(y, N) != 1:
            continue
        inv = pow(y, -1, N)
        for x in range(N):
            mass = float(joint[x, y])
            if mass == 0.0:
                continue
            est = (x * inv) % N
            recovered[est] = recovered.get(est, 0.0) + mass
    return DiscreteLogResult(N, ell, recovered.get(ell, 0.0), recovered, joint)


def _in_arc(theta, arc):
    a, b = arc
    width = (b - a) % (2 * np.pi)
    return (theta - a) % (2 * np.pi) < width


def run_phase_location(state, spec, test_phases, protocol=None, tol=1e-6):
    """Probability that the control register names the arc containing each phase.

    Row ``j`` of the state corresponds to arc ``j`` of ``spec``.  Each test
    phase (radians) must lie inside an arc shrunk by ``delta/2`` on both ends.
    """
    if protocol is None:
        # arc probabilities need far less than the default round-trip accuracy
        protocol = decompose_linear(state.shift(-state.min_power), tol=tol, fallback=tol)
    if protocol.dim < len(spec.arcs):
        raise DimensionMismatch("protocol has fewer rows than arcs")
    arcs = spec.shrunk_arcs(spec.delta / 2)
    out = []
    for theta in np.atleast_1d(np.asarray(test_phases, dtype=float)):
        idx = [j for j, arc in enumerate(arcs) if _in_arc(theta, arc)]
        if not idx:
            raise ValueError(f"test phase {theta:.6g} is not inside any shrunk arc")
        v = eval_protocol(protocol, np.exp(1j * theta))
        out.append(float(abs(v[idx[0]]) ** 2))
    return np.array(out)


def grid_report_rows(protocol, thetas, target=None):
    """Rows ``(theta, target_norm_error, p_0, ..., p_{D-1})`` over angles in radians.

    ``target`` is the state the protocol should reproduce; without one the error
    column is NaN.
    """
    thetas = np.asarray(thetas, dtype=float)
    z = np.exp(1j * thetas)
    vecs = eval_protocol(protocol, z)
    if target is not None:
        err = np.linalg.norm(vecs - target.evaluate(z), axis=1)
    else:
        err = np.full(len(thetas), np.nan)
    probs = np.abs(vecs) ** 2
    return [(float(t), float(e), *map(float, pr)) for t, e, pr in zip(thetas, err, probs)]


def grid_report_csv(protocol, thetas, target=None):
    rows = grid_report_rows(protocol, thetas, target)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "target_norm_error"] + [f"p_{x}" for x in range(protocol.dim)])
    for r in rows:
        w.writerow([repr(v) for v in r])
    return buf.getvalue()
