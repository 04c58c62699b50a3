"""Multi-qubit quantum signal processing: synthesis, completion, and verification."""

from .completion import CompletionResult, complete_family, complete_state, fejer_riesz, fejer_riesz_factor
from .decompose import (
    Protocol,
    SignalOperator,
    analytic_to_laurent,
    apply_signal,
    apply_signal_adjoint,
    decompose_laurent,
    decompose_linear,
    decompose_one_step,
    exponential_reduce,
    laurent_to_analytic,
    linear_reduce,
    random_protocol,
)
from .errors import *  # noqa: F401,F403
from .linalg import (
    dft_matrix,
    gram_schmidt_complete,
    inverse_dft_matrix,
    is_unitary,
    qr_upper,
    random_unitary,
    simultaneous_triangularize,
)
from .poly import (
    CoefficientMatrix,
    LaurentPolynomial,
    PolynomialState,
    ValidityReport,
    coefficient_matrix,
    is_valid_state,
    poly_add,
    poly_conj_reflect,
    poly_eval,
    poly_mul,
    poly_rotate,
    state_gram_poly,
)
from .simulate import (
    control_distribution,
    eigen_transform,
    eval_protocol,
    outcome_distribution,
    protocol_to_state,
    run_discrete_log,
    run_phase_location,
)

__version__ = "0.1.0"
