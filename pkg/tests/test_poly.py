import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mqsp import (
    LaurentPolynomial,
    PolynomialState,
    coefficient_matrix,
    is_valid_state,
    poly_add,
    poly_conj_reflect,
    poly_eval,
    poly_mul,
    poly_rotate,
    random_unitary,
    state_gram_poly,
)
from mqsp.errors import DomainError
from mqsp.protocols import build_phase_estimation_state

from generators import random_laurent, random_valid_state, unit_circle

Z = LaurentPolynomial.monomial(1)
ONE = LaurentPolynomial.constant(1.0)

coef = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
laurent = st.builds(
    lambda cs, lo: LaurentPolynomial(cs, lo),
    st.lists(coef, min_size=0, max_size=17),
    st.integers(-8, 8),
)


def test_zero_polynomial_is_canonical():
    p = LaurentPolynomial([0, 0, 0], 5)
    assert p.is_zero
    assert p == LaurentPolynomial()
    assert p.min_exponent == 0


def test_exact_trimming():
    p = LaurentPolynomial([0, 1, 2, 0], -3)
    assert p.min_exponent == -2
    assert p.max_exponent == -1
    assert p.coefficient(-2) == 1
    assert p.coefficient(7) == 0


def test_trim_with_tolerance():
    p = LaurentPolynomial([1e-15, 1.0, 1e-16], 0)
    assert p.trim(1e-12) == LaurentPolynomial.monomial(1)


def test_add_mul_examples():
    # (1 + z)(1 - z) = 1 - z^2
    assert (ONE + Z) * (ONE - Z) == ONE - Z * Z
    assert poly_add(Z, -Z).is_zero
    zinv = LaurentPolynomial.monomial(-1)
    assert poly_mul(Z, zinv) == ONE


def test_conj_reflect_examples():
    assert poly_conj_reflect(1j * Z) == LaurentPolynomial.monomial(-1, -1j)
    sym = Z + LaurentPolynomial.monomial(-1)
    assert poly_conj_reflect(sym) == sym


def test_conj_reflect_evaluation(rng):
    p = random_laurent(rng)
    z = unit_circle(64)
    assert np.max(np.abs(poly_conj_reflect(p)(z) - np.conj(p(z)))) <= 1e-14 * 10


def test_eval_examples():
    assert poly_eval(ONE + Z, 1) == 2
    assert abs(poly_eval(LaurentPolynomial.monomial(-1), 1j) + 1j) < 1e-15
    assert poly_eval(LaurentPolynomial([0.5] * 4), 1) == 2
    with pytest.raises(DomainError):
        poly_eval(LaurentPolynomial.monomial(-1), 0)


def test_rotate_examples(rng):
    p = random_laurent(rng)
    assert poly_rotate(p, 0.0) == p
    assert poly_rotate(Z, np.pi).max_abs_diff(-Z) < 1e-15
    a = 0.7
    z = unit_circle(32, rng)
    assert np.max(np.abs(poly_rotate(p, a)(z) - p(z * np.exp(-1j * a)))) <= 1e-13


def test_json_round_trip(rng):
    p = random_laurent(rng)
    assert LaurentPolynomial.from_dict(p.to_dict()) == p
    s = random_valid_state(rng, 4, 3)
    assert PolynomialState.from_dict(s.to_dict()) == s


@given(laurent)
def test_conj_reflect_property(p):
    z = unit_circle(16)
    assert np.max(np.abs(poly_conj_reflect(p)(z) - np.conj(p(z))), initial=0) <= 1e-12 * 1e3


@given(laurent, laurent, laurent)
def test_mul_associative_commutative(a, b, c):
    scale = 1 + max(np.max(np.abs(x.coefficients), initial=0) for x in (a, b, c)) ** 3
    assert (a * b).max_abs_diff(b * a) <= 1e-12 * scale
    assert ((a * b) * c).max_abs_diff(a * (b * c)) <= 1e-12 * scale


def test_gram_poly_examples():
    assert state_gram_poly(PolynomialState.from_polynomials([ONE, LaurentPolynomial()])) == ONE
    assert state_gram_poly(PolynomialState.from_polynomials([Z, LaurentPolynomial()])) == ONE
    s = PolynomialState.from_polynomials([(ONE + Z) * 0.5, (ONE - Z) * 0.5])
    # hand convolution: cross terms (1/4)(z - z) and (1/4)(z^-1 - z^-1) cancel
    assert state_gram_poly(s).max_abs_diff(ONE) < 1e-15


def test_gram_poly_hermitian_exactly(rng):
    s = PolynomialState(rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3)))
    g = state_gram_poly(s)
    c = g.dense(-4, 4)
    assert np.array_equal(c, np.conj(c[::-1]))


def test_validity_examples():
    assert is_valid_state(PolynomialState.constant([1, 0]), 1e-10)
    rep = is_valid_state(PolynomialState.constant([1, 1]))
    assert not rep
    assert rep.max_deviation == pytest.approx(1.0)
    assert is_valid_state(build_phase_estimation_state(2))


def test_validity_unitary_invariance(rng):
    s = random_valid_state(rng, 4, 5)
    u = random_unitary(4, rng)
    assert is_valid_state(s.apply(u))
    bad = PolynomialState(s.gammas * 1.01)
    assert not is_valid_state(bad)
    assert not is_valid_state(bad.apply(u))


def test_coefficient_matrix_examples(rng):
    s = PolynomialState.constant([0.6, 0.8j, 0])
    m = coefficient_matrix(s, 0).entries
    assert np.allclose(m[:, 0], [0.6, 0.8j, 0])
    assert np.all(m[:, 1:] == 0)
    pe = coefficient_matrix(build_phase_estimation_state(2), 0).entries
    x = np.arange(4)
    assert np.allclose(pe, np.exp(-2j * np.pi * np.outer(x, x) / 4) / 4, atol=1e-15)
    r = random_valid_state(rng, 3, 4)
    g = coefficient_matrix(r, 0).entries
    for k in range(3):
        assert np.array_equal(g[:, k], r.gamma(k))


def test_state_evaluate_matches_polynomials(rng):
    s = random_valid_state(rng, 3, 4)
    z = unit_circle(9, rng)
    vals = s.evaluate(z)
    for x, p in enumerate(s.polynomials()):
        assert np.allclose(vals[:, x], p(z), atol=1e-13)
    assert np.allclose(np.linalg.norm(vals, axis=1), 1, atol=1e-12)


def test_state_shift_and_trim(rng):
    s = random_valid_state(rng, 2, 3)
    t = s.shift(3)
    assert t.min_power == s.min_power + 3
    assert t.shift(-3) == s
    padded = PolynomialState(np.vstack([np.zeros((2, 2)), s.gammas, np.zeros((1, 2))]), 0)
    assert padded.min_power == 2
    assert padded.degree == s.degree + 2
