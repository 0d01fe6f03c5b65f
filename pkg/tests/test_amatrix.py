"""Matrices over the algebra: flattening, the symmetrized Schur product,
positivity certification, and the quadratic-form trace identity."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cstar_schur import (
    AlgebraShape,
    AMatrix,
    AVector,
    DomainError,
    Element,
    GenConfig,
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
    random_matrix,
    random_positive_matrix,
    random_vector,
    row_sums,
    schur_power,
    schur_product,
    schur_quadratic_form_oracle,
    unflatten,
    zero_matrix,
)
from conftest import (
    COMMUTATIVE_SHAPES,
    NONCOMMUTATIVE_SHAPES,
    as_numpy,
    scalar_amatrix,
)

ALL_SHAPES = COMMUTATIVE_SHAPES + NONCOMMUTATIVE_SHAPES
shape_idx = st.integers(0, len(ALL_SHAPES) - 1)
seeds = st.integers(0, 2**63 - 1)
sizes = st.integers(1, 5)


# -- structure ---------------------------------------------------------------


def test_entry_accessors(m2_shape):
    M = identity_matrix(m2_shape, 3)
    assert np.array_equal(M.entry(0, 0).block(0), np.eye(2))
    assert np.array_equal(M.entry(0, 1).block(0), np.zeros((2, 2)))


def test_matmul_against_entrywise_definition(mixed_shape):
    cfg = GenConfig(seed=3, shape=mixed_shape, n=3)
    A = random_matrix(cfg.derive(0))
    B = random_matrix(cfg.derive(1))
    C = A @ B
    for j in range(3):
        for l in range(3):
            acc = A.entry(j, 0) * B.entry(0, l)
            for k in range(1, 3):
                acc = acc + A.entry(j, k) * B.entry(k, l)
            assert (C.entry(j, l) - acc).norm() < 1e-12


def test_matvec(mixed_shape):
    cfg = GenConfig(seed=9, shape=mixed_shape, n=2)
    A = random_matrix(cfg.derive(0))
    x = random_vector(cfg.derive(1))
    y = A @ x
    for j in range(2):
        acc = A.entry(j, 0) * x[0] + A.entry(j, 1) * x[1]
        assert (y[j] - acc).norm() < 1e-13


def test_adjoint_transpose_trace():
    M = scalar_amatrix([[1, 2j], [3, 4]])
    assert np.allclose(as_numpy(M.adjoint()), [[1, 3], [-2j, 4]])
    assert np.allclose(as_numpy(M.transpose()), [[1, 3], [2j, 4]])
    assert M.trace().block(0)[0, 0] == pytest.approx(5.0)


def test_row_sums_diag_outer():
    M = scalar_amatrix([[1, 2], [3, 4]])
    y = row_sums(M)
    assert [y[j].block(0)[0, 0] for j in range(2)] == [3, 7]
    d = diag_vector(M)
    assert [d[j].block(0)[0, 0] for j in range(2)] == [1, 4]
    # outer product of (1, i) has the Hermitian form [[1, -i], [i, 1]]
    shape = AlgebraShape((1,))
    v = AVector.from_elements(
        [Element(shape, [[[1.0]]]), Element(shape, [[[1j]]])]
    )
    assert np.allclose(as_numpy(outer_product(v)), [[1, -1j], [1j, 1]])
    D = diag_matrix(v)
    assert np.allclose(as_numpy(D), [[1, 0], [0, 1j]])


def test_json_roundtrip(mixed_shape):
    M = random_matrix(GenConfig(seed=21, shape=mixed_shape, n=2))
    back = AMatrix.from_json(M.to_json())
    assert all(np.array_equal(a, b) for a, b in zip(M.blocks, back.blocks))


# -- flattening is a bit-exact *-isomorphism ---------------------------------


@settings(max_examples=60, deadline=None)
@given(shape_idx, seeds, sizes)
def test_flatten_roundtrip_bitwise(idx, seed, n):
    M = random_matrix(GenConfig(seed=seed, shape=ALL_SHAPES[idx], n=n))
    back = unflatten(flatten(M), M.shape, M.n)
    assert all(np.array_equal(a, b) for a, b in zip(M.blocks, back.blocks))


@settings(max_examples=40, deadline=None)
@given(shape_idx, seeds)
def test_flatten_is_multiplicative(idx, seed):
    cfg = GenConfig(seed=seed, shape=ALL_SHAPES[idx], n=3)
    A = random_matrix(cfg.derive(0))
    B = random_matrix(cfg.derive(1))
    for fa, fb, fc in zip(flatten(A), flatten(B), flatten(A @ B)):
        assert np.allclose(fa @ fb, fc, atol=1e-12 * max(1, mat_norm(A) * mat_norm(B)))


def test_flatten_respects_adjoint(mixed_shape):
    M = random_matrix(GenConfig(seed=4, shape=mixed_shape, n=3))
    for f, fs in zip(flatten(M), flatten(M.adjoint())):
        assert np.array_equal(f.conj().T, fs)


# -- the symmetrized Schur product -------------------------------------------


def test_schur_symmetrization_oracle(m2_shape):
    # entries sigma_x and sigma_z anticommute, so the symmetrized
    # product of the 1x1 matrices [sigma_x] and [sigma_z] vanishes
    x = AMatrix.from_entries([[Element(m2_shape, [[[0, 1], [1, 0]]])]])
    z = AMatrix.from_entries([[Element(m2_shape, [[[1, 0], [0, -1]]])]])
    prod = schur_product(x, z)
    assert mat_norm(prod) < 1e-15
    # while the plain entry product is (XZ + ZX)/2 = 0 but XZ itself is not
    assert (x.entry(0, 0) * z.entry(0, 0)).norm() == pytest.approx(1.0)


def test_schur_commutative_collapse_bitwise():
    # over a commutative algebra the symmetrized product IS the entrywise one
    shape = AlgebraShape((1, 1, 1))
    cfg = GenConfig(seed=8, shape=shape, n=4)
    A = random_matrix(cfg.derive(0))
    B = random_matrix(cfg.derive(1))
    P = schur_product(A, B)
    for pa, a, b in zip(P.blocks, A.blocks, B.blocks):
        entrywise = np.einsum("jlab,jlbc->jlac", a, b)
        assert np.array_equal(pa, entrywise)


@settings(max_examples=50, deadline=None)
@given(shape_idx, seeds)
def test_schur_commutativity_bitwise(idx, seed):
    cfg = GenConfig(seed=seed, shape=ALL_SHAPES[idx], n=3)
    A = random_matrix(cfg.derive(0))
    B = random_matrix(cfg.derive(1))
    P, Q = schur_product(A, B), schur_product(B, A)
    assert all(np.array_equal(p, q) for p, q in zip(P.blocks, Q.blocks))


@settings(max_examples=50, deadline=None)
@given(shape_idx, seeds)
def test_schur_bilinearity(idx, seed):
    cfg = GenConfig(seed=seed, shape=ALL_SHAPES[idx], n=2)
    A = random_matrix(cfg.derive(0))
    B = random_matrix(cfg.derive(1))
    C = random_matrix(cfg.derive(2))
    lhs = schur_product(A + B, C)
    rhs = schur_product(A, C) + schur_product(B, C)
    scale = max(1.0, (mat_norm(A) + mat_norm(B)) * mat_norm(C))
    assert mat_norm(lhs - rhs) <= 1e-12 * scale


def test_schur_identity_for_units():
    # E_n is the Schur unit: M o E_n = M for any M, symmetrized or not
    shape = AlgebraShape((2, 1))
    M = random_matrix(GenConfig(seed=2, shape=shape, n=3))
    E = ones_matrix(shape, 3)
    assert mat_norm(schur_product(M, E) - M) < 1e-13


def test_schur_power_conventions(m2_shape):
    M = random_matrix(GenConfig(seed=14, shape=m2_shape, n=2))
    assert mat_norm(schur_power(M, 0) - identity_matrix(m2_shape, 2)) == 0.0
    assert mat_norm(schur_power(M, 1) - M) == 0.0
    p3l = schur_power(M, 3, nesting="left")
    p3r = schur_power(M, 3, nesting="right")
    # powers of a single matrix: both nesting orders agree bitwise because
    # the product is commutative
    assert all(np.array_equal(a, b) for a, b in zip(p3l.blocks, p3r.blocks))
    expected = schur_product(schur_product(M, M), M)
    assert all(np.array_equal(a, b) for a, b in zip(p3l.blocks, expected.blocks))
    with pytest.raises(DomainError):
        schur_power(M, -1)
    with pytest.raises(DomainError):
        schur_power(M, 2, nesting="middle")


def test_element_scale(mixed_shape):
    cfg = GenConfig(seed=6, shape=mixed_shape, n=2)
    M = random_matrix(cfg.derive(0))
    from cstar_schur import random_element

    a = random_element(cfg.derive(1))
    S = element_scale(a, M)
    for j in range(2):
        for l in range(2):
            assert (S.entry(j, l) - a * M.entry(j, l)).norm() < 1e-13


# -- positivity certification -------------------------------------------------


def test_psd_check_known_instances():
    assert psd_check(scalar_amatrix([[2, 1], [1, 2]])).is_positive
    rep = psd_check(scalar_amatrix([[1, 2], [2, 1]]))
    assert not rep.is_positive
    assert rep.min_eigenvalue == pytest.approx(-1.0, abs=1e-12)
    # non-Hermitian input: defect route, no eigenvalues reported
    rep = psd_check(scalar_amatrix([[0, 1], [0, 0]]))
    assert not rep.is_positive
    assert rep.min_eigenvalue_per_block == ()
    assert rep.margin < 0


def test_psd_report_roundtrip():
    rep = psd_check(scalar_amatrix([[2, 1], [1, 2]]))
    back = PsdReport.from_json(rep.to_json())
    assert back == rep


def test_psd_margin_is_relative():
    # scaling the matrix must not change the relative margin much
    M = scalar_amatrix([[1, 2], [2, 1]])
    m1 = psd_check(M).margin
    m2 = psd_check(1e6 * M).margin
    assert m1 == pytest.approx(m2, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(shape_idx, seeds, sizes)
def test_gram_matrices_are_positive(idx, seed, n):
    _, M = random_positive_matrix(GenConfig(seed=seed, shape=ALL_SHAPES[idx], n=n))
    rep = psd_check(M)
    assert rep.is_positive, rep


@settings(max_examples=60, deadline=None)
@given(shape_idx, seeds, sizes)
def test_cholesky_oracle_agrees_with_eigenvalues(idx, seed, n):
    cfg = GenConfig(seed=seed, shape=ALL_SHAPES[idx], n=n)
    if seed % 3 == 0:
        _, M = random_positive_matrix(cfg)
    elif seed % 3 == 1:
        R = random_matrix(cfg)
        M = 0.5 * (R + R.adjoint())
    else:
        M = outer_product(random_vector(cfg))
    assert psd_check(M).is_positive == cholesky_psd_check(M).is_positive


def test_outer_products_are_positive(mixed_shape):
    y = random_vector(GenConfig(seed=33, shape=mixed_shape, n=4))
    assert psd_check(outer_product(y)).is_positive


def test_loewner_geq():
    M = scalar_amatrix([[3, 0], [0, 3]])
    N = scalar_amatrix([[1, 0], [0, 2]])
    assert loewner_geq(M, N).is_positive
    assert not loewner_geq(N, M).is_positive


def test_positive_sqrt_roundtrip(mixed_shape):
    _, M = random_positive_matrix(GenConfig(seed=12, shape=mixed_shape, n=3))
    R = positive_sqrt(M)
    assert psd_check(R).is_positive
    assert mat_norm(R @ R - M) <= 1e-10 * max(1.0, mat_norm(M))
    with pytest.raises(DomainError):
        positive_sqrt(scalar_amatrix([[0, 1], [1, 0]]))


def test_psd_check_batch_order(mixed_shape):
    mats = [
        random_positive_matrix(GenConfig(seed=s, shape=mixed_shape, n=2))[1]
        for s in range(6)
    ]
    seq = psd_check_batch(mats, threads=1)
    par = psd_check_batch(mats, threads=4)
    assert seq == par


def test_zero_and_identity_psd(mixed_shape):
    assert psd_check(zero_matrix(mixed_shape, 3)).is_positive
    assert psd_check(identity_matrix(mixed_shape, 3)).is_positive
    assert not psd_check(-1.0 * identity_matrix(mixed_shape, 3)).is_positive


# -- the trace identity for quadratic forms ----------------------------------


@settings(max_examples=50, deadline=None)
@given(st.integers(0, len(COMMUTATIVE_SHAPES) - 1), seeds, st.integers(1, 4))
def test_quadratic_form_trace_identity(idx, seed, n):
    cfg = GenConfig(seed=seed, shape=COMMUTATIVE_SHAPES[idx], n=n)
    _, M = random_positive_matrix(cfg.derive(0))
    _, N = random_positive_matrix(cfg.derive(1))
    x = random_vector(cfg.derive(2))
    direct, trace_form = schur_quadratic_form_oracle(M, N, x)
    assert (direct - trace_form).norm() <= 1e-10 * max(1.0, direct.norm())


def test_quadratic_form_oracle_rejects_noncommutative(m2_shape):
    cfg = GenConfig(seed=1, shape=m2_shape, n=2)
    _, M = random_positive_matrix(cfg.derive(0))
    x = random_vector(cfg.derive(1))
    with pytest.raises(DomainError):
        schur_quadratic_form_oracle(M, M, x)
