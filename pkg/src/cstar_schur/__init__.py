"""Schur products of positive matrices over finite-dimensional C*-algebras.

The package certifies positivity of symmetrized entrywise (Schur/Hadamard)
products, verifies 1/n lower bounds of row-sum type, runs the commutative
cosine-matrix pipeline behind the Novak-type positivity statement, and
searches for counterexamples to the noncommutative positivity question.
"""

from .algebra import (
    AlgebraShape,
    Element,
    SpectrumReport,
    classify,
    commutator_norm,
    hermitian_defect,
    identity_element,
    scalar_element,
    sqrt_positive,
    zero_element,
)
from .amatrix import (
    AMatrix,
    PsdReport,
    cholesky_psd_check,
    diag_matrix,
    diag_vector,
    element_scale,
    flatten,
    identity_matrix,
    loewner_geq,
    mat_norm,
    ones_matrix,
    outer_product,
    positive_sqrt,
    psd_check,
    psd_check_batch,
    row_sums,
    schur_power,
    schur_product,
    schur_quadratic_form_oracle,
    unflatten,
    zero_matrix,
)
from .calculus import SeriesSpec, elem_cos, elem_exp, elem_sin, schur_series_apply
from .errors import DomainError, NumericalError, RangeError, StructureError
from .generate import (
    GenConfig,
    derive_seed,
    fnv1a64,
    haar_unitary,
    mix64,
    random_commuting_family,
    random_commuting_spectral_pair,
    random_element,
    random_matrix,
    random_positive_matrix,
    random_selfadjoint_element,
    random_selfadjoint_points,
    random_unit_diagonal_positive,
    random_vector,
)
from .module_an import (
    AVector,
    cauchy_schwarz_gap,
    inner_product,
    left_mul,
    ones_vector,
    vector_norm,
    zero_vector,
)
from .verify import (
    CheckReport,
    SpectralDecomposition,
    SUITES,
    check_commuting_spectral_instance,
    check_diag_bound,
    check_preserver,
    check_row_sum_bound,
    check_schur_chain,
    check_schur_positivity,
    check_trig_identities,
    check_unit_diagonal_bound,
    cosine_gram_check,
    counterexample_search,
    find_nonassociativity,
    find_trig_breakdown,
    jordan_witness,
    novak_check,
    pauli_pair,
    pointwise_spectral_diag,
    run_suite,
    run_suites,
)

__version__ = "0.1.0"
