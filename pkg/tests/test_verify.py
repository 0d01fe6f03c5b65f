"""Checks, searches, and suite drivers.

Frozen oracle values used here:

* the deterministic positivity violation M = [diag(1, .01)], N = [all-units]
  over M_2(C) has symmetrized product [[1, .505], [.505, .01]] with minimum
  eigenvalue (1.01 - sqrt(2.0002)) / 2 = -0.2021421...;
* the cosine addition formula on the Pauli pair (sigma_x, sigma_z) fails by
  exactly sqrt((cos sqrt(2) - cos^2 1)^2 + sin^4 1) = 0.7210132...;
* two classical points x = (0, pi) give the shifted cosine-product matrix
  [[.5, -.5], [-.5, .5]] with spectrum {0, 1}.
"""

import json

import numpy as np
import pytest

from cstar_schur import (
    AlgebraShape,
    AMatrix,
    DomainError,
    Element,
    GenConfig,
    SeriesSpec,
    StructureError,
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
    diag_matrix,
    find_nonassociativity,
    find_trig_breakdown,
    flatten,
    identity_element,
    jordan_witness,
    mat_norm,
    novak_check,
    pauli_pair,
    pointwise_spectral_diag,
    psd_check,
    random_commuting_family,
    random_positive_matrix,
    random_selfadjoint_element,
    run_suite,
    run_suites,
    schur_product,
)
from cstar_schur.verify import SUITES, counts_as_failure
from conftest import comm_element, scalar_amatrix, as_numpy

SCALAR = AlgebraShape((1,))
M2 = AlgebraShape((2,))

JORDAN_MIN_EIG = (1.01 - np.sqrt(2.0002)) / 2.0
PAULI_COS_GAP = np.sqrt((np.cos(np.sqrt(2.0)) - np.cos(1.0) ** 2) ** 2 + np.sin(1.0) ** 4)


# -- single-instance checks ---------------------------------------------------


def test_schur_positivity_check_commutative():
    M = scalar_amatrix([[2, 1], [1, 2]])
    rep = check_schur_positivity(M, M)
    assert rep.passed and rep.worst_margin >= 0
    assert rep.details["commutative"] is True


def test_schur_positivity_requires_positive_inputs():
    bad = scalar_amatrix([[1, 2], [2, 1]])
    good = scalar_amatrix([[1, 0], [0, 1]])
    with pytest.raises(DomainError):
        check_schur_positivity(bad, good)


def test_row_sum_bound_explicit_instance():
    # A = [[1, 0], [1, 1]]: M = AA* = [[1, 1], [1, 2]], y = (1, 2),
    # M - yy*/2 = [[.5, 0], [0, 0]]
    A = scalar_amatrix([[1, 0], [1, 1]])
    rep = check_row_sum_bound(A)
    assert rep.passed
    M = as_numpy(A) @ as_numpy(A).conj().T
    y = as_numpy(A).sum(axis=1)
    gap = M - np.outer(y, y.conj()) / 2.0
    assert np.allclose(gap, [[0.5, 0.0], [0.0, 0.0]], atol=1e-14)
    assert rep.details["input_positive"] is False  # A itself is not Hermitian


def test_row_sum_bound_never_needs_positive_input(mixed_shape):
    # arbitrary A over a noncommutative shape still satisfies the bound
    from cstar_schur import random_matrix

    for seed in range(10):
        A = random_matrix(GenConfig(seed=seed, shape=mixed_shape, n=3))
        rep = check_row_sum_bound(A)
        assert rep.passed, rep.worst_margin


def test_schur_chain_explicit_instance():
    A = scalar_amatrix([[1, 0], [1, 1]])
    B = scalar_amatrix([[1, 1], [0, 1]])
    rep = check_schur_chain(A, B)
    assert rep.passed
    # independent oracle with plain numpy
    a, b = as_numpy(A), as_numpy(B)
    m = a @ a.conj().T
    nn = b @ b.conj().T
    c = a * b
    y = c.sum(axis=1)
    gap1 = m * nn - c @ c.conj().T
    gap2 = c @ c.conj().T - np.outer(y, y.conj()) / 2.0
    assert min(np.linalg.eigvalsh(gap1)) >= -1e-12
    assert min(np.linalg.eigvalsh(gap2)) >= -1e-12


def test_schur_chain_rejects_noncommutative(m2_shape):
    _, M = random_positive_matrix(GenConfig(seed=0, shape=m2_shape, n=2))
    with pytest.raises(DomainError):
        check_schur_chain(M, M)


def test_diag_bound_real_instance():
    M = scalar_amatrix([[2.0, 1.0], [1.0, 2.0]])
    rep = check_diag_bound(M)
    assert rep.passed


def test_diag_bound_complex_violation():
    # a genuinely complex positive matrix violating M o M >= diag outer / n:
    # the argument needs entries fixed by the involution
    z = 0.9j
    M = scalar_amatrix([[1.0, z], [np.conj(z), 1.0]])
    assert psd_check(M).is_positive
    rep = check_diag_bound(M)
    assert not rep.passed
    # cross-check with numpy: (M o M) - diag diag*/2 has a negative eigenvalue
    m = as_numpy(M)
    gap = m * m - np.outer(np.diag(m), np.diag(m).conj()) / 2.0
    assert min(np.linalg.eigvalsh((gap + gap.conj().T) / 2)) < -1e-3


def test_unit_diagonal_bound_explicit():
    # real unit-diagonal M: M o M - E_2 / 2 has eigenvalues {.25, .75} at rho=.5
    M = scalar_amatrix([[1.0, 0.5], [0.5, 1.0]])
    rep = check_unit_diagonal_bound(M)
    assert rep.passed
    m = as_numpy(M)
    gap = m * m - np.ones((2, 2)) / 2.0
    assert np.allclose(sorted(np.linalg.eigvalsh(gap)), [0.25, 0.75], atol=1e-12)


def test_unit_diagonal_bound_rejects_bad_diagonal():
    M = scalar_amatrix([[2.0, 0.1], [0.1, 1.0]])
    with pytest.raises(DomainError):
        check_unit_diagonal_bound(M)


# -- novak pipeline -----------------------------------------------------------


def test_novak_closed_form_two_points():
    pts = [[comm_element(SCALAR, 0.0)], [comm_element(SCALAR, np.pi)]]
    novak, rep = novak_check(pts)
    assert rep.passed
    eigs = np.linalg.eigvalsh(flatten(novak)[0])
    assert np.allclose(sorted(eigs), [0.0, 1.0], atol=1e-12)
    assert rep.details["min_eigenvalue"] == pytest.approx(0.0, abs=1e-12)


def test_novak_equal_points_give_half_ones():
    # x1 = x2 = 0, d = 1: the cosine matrix is E_2, the shifted matrix E_2/2
    pts = [[comm_element(SCALAR, 0.0)], [comm_element(SCALAR, 0.0)]]
    novak, rep = novak_check(pts)
    assert rep.passed
    assert np.allclose(flatten(novak)[0], np.full((2, 2), 0.5), atol=1e-14)


def test_novak_random_commutative_grid():
    from cstar_schur import random_selfadjoint_points

    cfg = GenConfig(seed=77, shape=AlgebraShape((1, 1)), n=4)
    pts = random_selfadjoint_points(cfg, d=3)
    _, rep = novak_check(pts)
    assert rep.passed, rep.details


def test_novak_noncommutative_commuting_points():
    cfg = GenConfig(seed=13, shape=M2, n=3)
    flat = random_commuting_family(cfg, 6, selfadjoint=True, norm_cap=np.pi)
    pts = [flat[0:2], flat[2:4], flat[4:6]]
    _, rep = novak_check(pts)
    assert rep.passed, rep.details


def test_novak_rejects_noncommuting_points():
    x, z = pauli_pair(M2)
    with pytest.raises(DomainError):
        novak_check([[x], [z]])


def test_novak_rejects_ragged_points():
    with pytest.raises(StructureError):
        novak_check([[comm_element(SCALAR, 0.0)], []])


def test_cosine_gram_scalar_points():
    pts = [comm_element(SCALAR, v) for v in (0.0, 1.0, 2.5, -0.5)]
    rep = cosine_gram_check(pts)
    assert rep.passed
    assert rep.details["gram_residual"] <= 1e-10


# -- trigonometry -------------------------------------------------------------


def test_trig_identities_commuting_scalars():
    x = comm_element(SCALAR, 0.7)
    y = comm_element(SCALAR, -1.2)
    rep = check_trig_identities(x, y)
    assert rep.passed
    assert rep.details["addition_checked"] is True
    assert all(v <= 1e-12 for v in rep.details["residuals"].values())


def test_trig_identities_skip_addition_for_noncommuting():
    x, z = pauli_pair(M2)
    rep = check_trig_identities(x, z)
    assert rep.passed  # parity/adjoint/pythagorean still hold
    assert rep.details["addition_checked"] is False
    assert "cos_addition" not in rep.details["residuals"]


def test_pauli_breakdown_closed_form():
    x, z = pauli_pair(M2)
    rep = check_trig_identities(x, z, falsify=True)
    assert rep.witness is not None
    gap = rep.witness["cos_addition_residual"]
    assert gap == pytest.approx(PAULI_COS_GAP, abs=1e-12)
    assert gap > 1e-3


def test_find_trig_breakdown_uses_pauli_seed():
    cfg = GenConfig(seed=0, shape=M2, n=1)
    rep = find_trig_breakdown(cfg, trials=0)
    assert rep.witness is not None and rep.witness["trial"] == 0
    assert rep.failures == 0  # expected hit found
    assert -rep.worst_margin == pytest.approx(PAULI_COS_GAP, abs=1e-12)


# -- preserver ----------------------------------------------------------------


def test_preserver_identity_vs_ones_convention():
    shape = AlgebraShape((1,))
    M = scalar_amatrix([[1.0, 0.8], [0.8, 1.0]])
    unit = identity_element(shape)
    series = SeriesSpec((unit, unit, unit))  # 1 + t + t^2
    rep = check_preserver(series, M, report_both=True)
    assert rep.passed
    assert rep.details["ones_convention"]["is_positive"] is True


def test_preserver_requires_positive_coefficients():
    shape = AlgebraShape((1,))
    M = scalar_amatrix([[1.0]])
    series = SeriesSpec((comm_element(shape, -1.0),))
    with pytest.raises(DomainError):
        check_preserver(series, M)


# -- spectral utilities ---------------------------------------------------------


def test_pointwise_spectral_diag_reconstructs():
    _, M = random_positive_matrix(GenConfig(seed=3, shape=AlgebraShape((1, 1)), n=4))
    dec = pointwise_spectral_diag(M)
    recon = dec.unitary @ diag_matrix(dec.diagonal) @ dec.unitary.adjoint()
    assert mat_norm(M - recon) <= 1e-9 * max(1.0, mat_norm(M))
    # eigenvalues arrive sorted by descending real part
    for b in range(2):
        reals = [dec.diagonal[j].block(b)[0, 0].real for j in range(4)]
        assert reals == sorted(reals, reverse=True)


def test_pointwise_spectral_diag_rejects_nonnormal():
    M = scalar_amatrix([[0, 1], [0, 0]])
    with pytest.raises(DomainError):
        pointwise_spectral_diag(M)


def test_commuting_spectral_instance_passes():
    for shape in (AlgebraShape((1, 1)), M2, AlgebraShape((2, 1))):
        rep = check_commuting_spectral_instance(GenConfig(seed=5, shape=shape, n=3))
        assert rep.passed, (shape, rep.details)
        assert rep.details["unitary_residual"] <= 1e-10
        assert rep.details["max_commutator"] <= 1e-12


# -- searches -------------------------------------------------------------------


def test_jordan_witness_closed_form():
    M, N = jordan_witness(M2, n=1)
    P = schur_product(M, N)
    assert np.allclose(flatten(P)[0], [[1.0, 0.505], [0.505, 0.01]], atol=1e-15)
    rep = psd_check(P)
    assert not rep.is_positive
    assert rep.min_eigenvalue == pytest.approx(JORDAN_MIN_EIG, abs=1e-12)
    assert abs(rep.min_eigenvalue - (-0.202)) < 1e-3


def test_jordan_witness_embeds_in_larger_settings():
    # the witness survives embedding into bigger matrices and extra blocks
    for shape, n in ((AlgebraShape((2, 1)), 1), (AlgebraShape((3,)), 2), (M2, 3)):
        M, N = jordan_witness(shape, n=n)
        assert psd_check(M).is_positive and psd_check(N).is_positive
        rep = psd_check(schur_product(M, N))
        assert not rep.is_positive
        assert rep.min_eigenvalue == pytest.approx(JORDAN_MIN_EIG, abs=1e-10)


def test_jordan_witness_needs_matrix_block():
    with pytest.raises(DomainError):
        jordan_witness(AlgebraShape((1, 1)), n=1)


def test_counterexample_search_counts_witness_and_random_hits():
    cfg = GenConfig(seed=2024, shape=M2, n=1)
    rep = counterexample_search(cfg, trials=200)
    assert rep.check_id == "schur_counterexample_search"
    assert rep.trials == 201  # deterministic witness + random trials
    assert rep.failures >= 1
    assert rep.details["violations"][0]["deterministic_witness"] is True
    assert rep.details["random_violations"] >= 1
    assert rep.worst_margin < -1e-6
    # every recorded violation carries its substream seed and certificates
    for v in rep.details["violations"][:3]:
        assert {"trial", "seed", "min_eigenvalue", "m", "n", "product"} <= set(v)


def test_counterexample_search_stop_on_first():
    cfg = GenConfig(seed=1, shape=M2, n=1)
    rep = counterexample_search(cfg, trials=500, stop_on_first=True)
    assert rep.details["trials_attempted"] == 1  # trial 0 is already a hit
    assert rep.failures == 1


def test_counterexample_search_thread_determinism():
    cfg = GenConfig(seed=31, shape=M2, n=2)
    a = counterexample_search(cfg, trials=60, threads=1)
    b = counterexample_search(cfg, trials=60, threads=4)
    assert a.to_json() == b.to_json()


def test_counterexample_search_rejects_commutative():
    with pytest.raises(DomainError):
        counterexample_search(GenConfig(seed=0, shape=SCALAR, n=2), trials=1)


def test_nonassociativity_witness_found_quickly():
    cfg = GenConfig(seed=42, shape=M2, n=2)
    rep = find_nonassociativity(cfg, trials=1000)
    assert rep.failures == 0 and rep.witness is not None
    assert rep.witness["defect"] > 1e-6
    # recompute the defect from the stored witness matrices
    A = AMatrix.from_json(rep.witness["a"])
    B = AMatrix.from_json(rep.witness["b"])
    C = AMatrix.from_json(rep.witness["c"])
    defect = mat_norm(
        schur_product(schur_product(A, B), C) - schur_product(A, schur_product(B, C))
    )
    assert defect == pytest.approx(rep.witness["defect"], rel=1e-12)


def test_nonassociativity_rejects_commutative():
    with pytest.raises(DomainError):
        find_nonassociativity(GenConfig(seed=0, shape=SCALAR, n=2), trials=1)


# -- suites ---------------------------------------------------------------------


def test_run_suite_unknown_name():
    with pytest.raises(StructureError):
        run_suite("bogus", GenConfig(seed=0, shape=SCALAR, n=2))


def test_all_suites_pass_commutative():
    cfg = GenConfig(seed=99, shape=AlgebraShape((1, 1)), n=3)
    reports = run_suites("all", cfg, trials=20, d=2)
    assert not any(counts_as_failure(r) for r in reports)
    ids = [r.check_id for r in reports]
    assert "schur_product_positive" in ids
    assert "schur_chain_bound" in ids
    assert "diag_outer_bound_complex_probe" in ids  # probe present, not a failure


def test_suites_skip_commutative_only_checks_on_noncommutative_shapes():
    cfg = GenConfig(seed=99, shape=AlgebraShape((2, 1)), n=2)
    reports = run_suites(("lowerbound", "corollaries", "preserver"), cfg, trials=5)
    skipped = {r.check_id for r in reports if "skipped" in r.details}
    assert skipped == {
        "schur_chain_bound",
        "diag_outer_bound",
        "unit_diagonal_bound",
        "schur_series_preserver",
    }
    assert not any(counts_as_failure(r) for r in reports)


def test_schur_suite_probes_open_question_on_noncommutative_shapes():
    cfg = GenConfig(seed=7, shape=M2, n=1)
    reports = run_suite("schur", cfg, trials=30)
    probe = next(r for r in reports if r.check_id == "schur_product_probe")
    assert probe.details["probe"] is True
    assert probe.failures > 0  # violations are common at this size
    assert not counts_as_failure(probe)


def test_suite_reports_are_thread_deterministic():
    cfg = GenConfig(seed=5, shape=AlgebraShape((1, 1)), n=3)
    a = run_suites("all", cfg, trials=15, d=2, threads=1)
    b = run_suites("all", cfg, trials=15, d=2, threads=4)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]


def test_report_json_excludes_timing():
    cfg = GenConfig(seed=5, shape=SCALAR, n=2)
    rep = run_suite("module", cfg, trials=3)[0]
    data = rep.to_json()
    assert "elapsed" not in data
    assert "elapsed" in rep.to_json(include_elapsed=True)
    json.dumps(data)  # canonical payloads must be plain-JSON serializable


def test_suite_catalog_is_stable():
    assert SUITES == (
        "schur",
        "lowerbound",
        "corollaries",
        "novak",
        "trig",
        "preserver",
        "module",
    )
