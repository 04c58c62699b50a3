"""Acceptance gate: every criterion at its stated tolerance.

Each ``criterion_*`` function returns ``(ok, detail)``; the tests assert ``ok``
and the terminal summary prints one PASS/FAIL line per criterion.  Running
this file directly prints the same lines without pytest.
"""

import math
import time

import numpy as np
import pytest
from scipy.special import erf

from mqsp import (
    PolynomialState,
    complete_state,
    decompose_linear,
    decompose_one_step,
    exponential_reduce,
    inverse_dft_matrix,
    is_valid_state,
    protocol_to_state,
    simultaneous_triangularize,
)
from mqsp.errors import ConditionNotMet, OrthogonalityViolated, PreconditionViolated
from mqsp.linalg import triangularity_residuals
from mqsp.protocols import (
    ArcSpec,
    GaussianWindowSpec,
    build_gaussian_window_state,
    build_phase_estimation_state,
    build_phase_location,
    build_sign_poly,
    find_sign_degree,
    sign_error,
)
from mqsp.simulate import eval_protocol, outcome_distribution, run_discrete_log, run_phase_location

from acceptance_log import record
from generators import one_step_state, random_laurent, random_valid_state, triangular_pair


def criterion_1(seed=1):
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    worst, length_ok = 0.0, True
    for i in range(200):
        dim = (2, 4, 8)[i % 3]
        split = (1, dim // 2, dim - 1)[(i // 3) % 3]
        degree = int(rng.integers(0, 25))
        s = random_valid_state(rng, dim, degree, split)
        p = decompose_linear(s, split=split)
        length_ok &= len(p) == s.degree + 1
        worst = max(worst, protocol_to_state(p).max_abs_diff(s))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and length_ok and elapsed < 60
    return ok, f"200 states, max coefficient error {worst:.2e} (<= 1e-8), lengths ok={length_ok}, {elapsed:.1f}s (< 60s)"


def criterion_2(seed=2):
    rng = np.random.default_rng(seed)
    worst = 0.0
    grid = np.exp(2j * np.pi * np.arange(512) / 512)
    for _ in range(100):
        n = int(rng.integers(1, 13))
        p = random_laurent(rng, 0, n)
        p = p * (rng.uniform(0.5, 0.99) / np.max(np.abs(p(grid))))
        q = complete_state([p], n, analytic=True)
        s = PolynomialState.from_polynomials([p, q])
        proto = decompose_linear(s)
        worst = max(worst, protocol_to_state(proto).max_abs_diff(s))
    return worst <= 1e-9, f"100 single-qubit pairs, max error {worst:.2e} (<= 1e-9)"


def criterion_3(seed=3):
    rng = np.random.default_rng(seed)
    worst, accepted = 0.0, 0
    for _ in range(100):
        s = PolynomialState(one_step_state(rng, 8))
        p = decompose_one_step(s, bits=3)
        accepted += 1
        worst = max(worst, protocol_to_state(p).max_abs_diff(s))
        exponential_reduce(s, 3)  # same condition through the lemma
    rejected, cond = 0, 0
    for _ in range(100):
        g = one_step_state(rng, 8)
        t = rng.uniform(0.05, 0.5)
        g[7] = math.sqrt(1 - t * t) * g[7] + t * g[0] * np.linalg.norm(g[7]) / np.linalg.norm(g[0])
        s = PolynomialState(g)
        try:
            decompose_one_step(s, bits=3)
        except OrthogonalityViolated:
            rejected += 1
        try:
            exponential_reduce(s, 3, check=False)
        except ConditionNotMet:
            cond += 1
    ok = worst <= 1e-10 and accepted == 100 and rejected == 100 and cond == 100
    return ok, (
        f"orthogonal: 100/100 accepted, max error {worst:.2e} (<= 1e-10); "
        f"non-orthogonal: {rejected}/100 OrthogonalityViolated, {cond}/100 ConditionNotMet"
    )


def criterion_4(seed=4):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(500):
        n = 1 + i % 16
        a, b = triangular_pair(rng, n, zero_cols=int(rng.integers(0, 4)))
        q = simultaneous_triangularize(a, b)
        worst = max(worst, *triangularity_residuals(q, a, b))
    rejected = 0
    for _ in range(100):
        n = int(rng.integers(2, 17))
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        try:
            simultaneous_triangularize(a, b)
        except PreconditionViolated:
            rejected += 1
    ok = worst <= 1e-9 and rejected == 100
    return ok, f"500 instances, max off-triangle residual {worst:.2e} (<= 1e-9); {rejected}/100 violating pairs rejected"


def criterion_5():
    worst_a1, worst_a0, worst_delta = 0.0, 0.0, 0.0
    for b in (1, 2, 3):
        d = 2**b
        p = decompose_one_step(build_phase_estimation_state(b), bits=b)
        worst_a1 = max(worst_a1, float(np.max(np.abs(p.unitaries[1] - inverse_dft_matrix(d)))))
        worst_a0 = max(worst_a0, float(np.max(np.abs(p.unitaries[0][:, 0] - 1 / math.sqrt(d)))))
        for j in range(d):
            probs = outcome_distribution(p, j / d)
            worst_delta = max(worst_delta, float(np.max(np.abs(probs - np.eye(d)[j]))))
    ok = worst_a1 <= 1e-10 and worst_a0 <= 1e-10 and worst_delta <= 1e-9
    return ok, (
        f"b=1..3: |A1 - inverse DFT| {worst_a1:.1e}, |A0|0> - uniform| {worst_a0:.1e} (<= 1e-10), "
        f"delta distribution error {worst_delta:.1e} (<= 1e-9)"
    )


def criterion_6(seed=6):
    rng = np.random.default_rng(seed)
    worst_dev, range_ok = 0.0, True
    for _ in range(100):
        count = int(rng.integers(1, 4))
        n = int(rng.integers(0, 9))
        fam = [random_laurent(rng, -n, n) for _ in range(count)]
        z = np.exp(2j * np.pi * np.arange(64 * (n + 1)) / (64 * (n + 1)))
        total = sum(np.abs(p(z)) ** 2 for p in fam)
        fam = [p * math.sqrt(rng.uniform(0.2, 0.999) / np.max(total)) for p in fam]
        q = complete_state(fam, n)
        range_ok &= q.is_zero or (q.min_exponent >= -n and q.max_exponent <= n)
        rep = is_valid_state(PolynomialState.from_polynomials(fam + [q]), 1e-6)
        worst_dev = max(worst_dev, rep.max_deviation)
    ok = worst_dev <= 1e-6 and range_ok
    return ok, f"100 families, max Gram deviation {worst_dev:.2e} (<= 1e-6), exponents in [-n, n]: {range_ok}"


EPS_SIGN = 1e-3
SIN_FLOOR = 0.2


def criterion_7():
    results = {k: find_sign_degree(k, EPS_SIGN, SIN_FLOOR, target="erf") for k in (4.0, 8.0, 16.0)}
    ns = [results[k].n for k in sorted(results)]
    log_term = math.log(1 / EPS_SIGN)
    ratios = [results[k].n / (k * log_term) for k in sorted(results)]
    c_fit = float(np.mean(ratios))
    bounded = all(r <= 2 * c_fit for r in ratios)
    monotone = all(a <= b for a, b in zip(ns, ns[1:]))
    errs = [results[k].error for k in sorted(results)]
    ok = all(e <= EPS_SIGN for e in errs) and bounded and monotone
    return ok, (
        f"k=4,8,16 -> n={ns}, grid error vs -erf(k sin) {max(errs):.1e} (<= 1e-3) over |sin| >= 0.2; "
        f"fitted c={c_fit:.3f}, n/(k log 1/eps) = {[round(r, 3) for r in ratios]}"
    )


def criterion_7_sgn(k):
    """Literal sgn target: |R + sgn(sin)| over |sin| >= 0.2, doubling capped at n = 1025."""
    floor = 1 - erf(k * SIN_FLOOR)  # error of the best possible erf-wave polynomial at |sin| = 0.2
    n = 2 * math.ceil(k) + 1
    while True:
        err = sign_error(build_sign_poly(k, n), None, SIN_FLOOR)
        if err <= EPS_SIGN or n >= 1025:
            break
        n = 2 * n - 1
    return err <= EPS_SIGN, f"k={k:g}: n={n}, |R + sgn| = {err:.2e} (erf gap at |sin| = 0.2: 1 - erf({k * SIN_FLOOR:g}) = {floor:.2e})"


PL_SPEC = ArcSpec(0.3, ((0.0, 3.8), (4.1, 5.0), (5.3, 5.983)))


def criterion_8(seed=8):
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    build = build_phase_location(PL_SPEC, 0.05)
    inner = PL_SPEC.shrunk_arcs(PL_SPEC.delta / 2)
    phases = []
    for i in range(30):
        a, b = inner[i % 3]
        phases.append(a + rng.random() * ((b - a) % (2 * math.pi)))
    probs = run_phase_location(build.state, PL_SPEC, phases)
    elapsed = time.perf_counter() - start
    ok = float(np.min(probs)) >= 0.95 and elapsed < 120
    return ok, (
        f"s=3 (one arc > pi), delta=0.3, eps'=0.05: min correct-arc probability {np.min(probs):.4f} "
        f"(>= 0.95) over 30 phases, {elapsed:.1f}s (< 120s)"
    )


def criterion_9():
    spec = GaussianWindowSpec(64, 0.05)
    p = decompose_one_step(build_gaussian_window_state(spec))
    probs = np.abs(eval_protocol(p, np.exp(2j * np.pi * 0.3))) ** 2
    y = np.arange(-32, 32)
    phi = (2 * 0.05**2 / math.pi) ** 0.25 * np.exp(-(0.05**2) * y**2)
    k_norm = math.sqrt(np.sum(phi**2))
    amp = np.array(
        [np.sum(phi * np.exp(2j * np.pi * 0.3 * y) * np.exp(-2j * np.pi * k * y / 64)) for k in range(64)]
    ) / (k_norm * 8)
    err = float(np.max(np.abs(probs - np.abs(amp) ** 2)))
    best = int(np.argmax(probs))
    bound = 0.05 * math.exp(-(64**2) * 0.05**2 / 2)
    ok = err <= 1e-8 and best in (19, 20) and spec.truncation_bound <= bound * (1 + 1e-12)
    return ok, (
        f"N=64, sigma=0.05, phase=0.3: oracle error {err:.1e} (<= 1e-8), argmax {best}, "
        f"reported truncation bound {spec.truncation_bound:.3e} (<= {bound:.3e})"
    )


def criterion_10():
    worst, clean = 0.0, True
    for n, ell in ((5, 3), (7, 2), (9, 4), (15, 7)):
        res = run_discrete_log(n, ell)
        phi = sum(1 for s in range(n) if math.gcd(s, n) == 1)
        worst = max(worst, abs(res.success_probability - phi / n))
        clean &= sum(v for k, v in res.recovered.items() if k != ell) <= 1e-12
    return worst <= 1e-9 and clean, f"|P(success) - phi(N)/N| max {worst:.1e} (<= 1e-9); every invertible y recovers ell: {clean}"


CRITERIA = {
    "1": criterion_1,
    "2": criterion_2,
    "3": criterion_3,
    "4": criterion_4,
    "5": criterion_5,
    "6": criterion_6,
    "7": criterion_7,
    "8": criterion_8,
    "9": criterion_9,
    "10": criterion_10,
}


@pytest.mark.parametrize("key", list(CRITERIA))
def test_criterion(key):
    ok, detail = CRITERIA[key]()
    record(key, ok, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
    assert ok, detail


def test_criterion_7_sgn_k16():
    ok, detail = criterion_7_sgn(16.0)
    record("7b sgn k=16", ok, detail)
    assert ok, detail


@pytest.mark.xfail(strict=True, reason="unattainable: |erf(k sin)| < 1 - 1e-3 at |sin| = 0.2 for k = 4, 8")
@pytest.mark.parametrize("k", [4.0, 8.0])
def test_criterion_7_sgn_literal(k):
    ok, detail = criterion_7_sgn(k)
    record(f"7b sgn k={k:g}", ok, detail + " [expected failure, see notes]")
    assert ok, detail


if __name__ == "__main__":
    for key, fn in CRITERIA.items():
        ok, detail = fn()
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
    for k in (4.0, 8.0, 16.0):
        ok, detail = criterion_7_sgn(k)
        print(f"[{'PASS' if ok else 'FAIL'}] criterion 7b (sgn target): {detail}")
