import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openqs.linalg import (
    I2,
    KET_0,
    KET_1,
    KET_MINUS,
    KET_PLUS,
    SIGMA_X,
    SIGMA_Z,
    density_matrix,
    expm_hermitian,
    hermitian_eigen,
    ketbra,
    matrix_function,
    partial_trace,
    random_density_matrix,
    random_hermitian,
    random_unitary,
    sqrtm_psd,
    tensor,
    trace_distance,
    von_neumann_entropy,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_tensor_identities():
    assert np.array_equal(tensor(I2, I2), np.eye(4))
    expected = np.zeros((4, 4))
    expected[0, 0], expected[2, 2] = 1, -1
    assert np.array_equal(tensor(SIGMA_Z, ketbra(KET_0)), expected)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_tensor_trace_mixed_product_and_associativity(seed):
    rng = np.random.default_rng(seed)
    a, b, c, d = (random_hermitian(2, rng) + 1j * random_hermitian(2, rng) for _ in range(4))
    assert np.trace(tensor(a, b)) == pytest.approx(np.trace(a) * np.trace(b), abs=1e-12)
    assert np.linalg.norm(tensor(a, b) @ tensor(c, d) - tensor(a @ c, b @ d)) < 1e-10
    assert np.linalg.norm(tensor(tensor(a, b), c) - tensor(a, tensor(b, c))) < 1e-10


def test_partial_trace_examples(rng):
    rho, sigma = random_density_matrix(2, rng), random_density_matrix(3, rng)
    assert np.allclose(partial_trace(tensor(rho, sigma), [2, 3], [0]), rho, atol=1e-14)
    assert np.allclose(partial_trace(tensor(rho, sigma), [2, 3], [1]), sigma, atol=1e-14)
    full = partial_trace(tensor(rho, sigma), [2, 3], [])
    assert full.shape == (1, 1) and full[0, 0] == pytest.approx(1.0)
    bell = (np.kron(KET_0, KET_0) + np.kron(KET_1, KET_1)) / math.sqrt(2)
    for keep in ([0], [1]):
        assert np.allclose(partial_trace(ketbra(bell), [2, 2], keep), I2 / 2, atol=1e-15)


def test_partial_trace_middle_factor_and_errors(rng):
    a, b, c = (random_density_matrix(d, rng) for d in (2, 3, 2))
    assert np.allclose(partial_trace(tensor(a, b, c), [2, 3, 2], [0, 2]), tensor(a, c), atol=1e-14)
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), [2, 3], [0])
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), [2, 2], [2])


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_partial_trace_preserves_trace_and_hermiticity(seed):
    rng = np.random.default_rng(seed)
    m = random_density_matrix(8, rng)
    for keep in ([0], [1], [2], [0, 2], [1, 2]):
        r = partial_trace(m, [2, 2, 2], keep)
        assert abs(np.trace(r) - 1) < 1e-12
        assert np.max(np.abs(r - r.conj().T)) < 1e-12


def test_hermitian_eigen_paulis():
    es = hermitian_eigen(SIGMA_Z)
    assert np.allclose(es.eigenvalues, [-1, 1])
    es = hermitian_eigen(SIGMA_X)
    assert np.allclose(es.eigenvalues, [-1, 1])
    assert abs(abs(np.vdot(es.eigenvectors[:, 0], KET_MINUS)) - 1) < 1e-12
    assert abs(abs(np.vdot(es.eigenvectors[:, 1], KET_PLUS)) - 1) < 1e-12
    with pytest.raises(ValueError):
        hermitian_eigen(np.array([[0, 1], [0, 0]]))


def test_hermitian_eigen_reconstruction(rng):
    for d in (2, 4, 8):
        h = random_hermitian(d, rng)
        es = hermitian_eigen(h)
        assert np.linalg.norm(es.reconstruct() - h) < 1e-10
        v = es.eigenvectors
        assert np.linalg.norm(v.conj().T @ v - np.eye(d)) < 1e-10
        assert np.all(np.diff(es.eigenvalues) >= 0)


def test_matrix_function_examples(rng):
    assert np.allclose(expm_hermitian(np.zeros((3, 3)), 1.0), np.eye(3))
    assert np.allclose(sqrtm_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    h_s = -0.5 * SIGMA_Z
    assert np.allclose(expm_hermitian(h_s, -1.0), np.diag([math.exp(0.5), math.exp(-0.5)]))
    h = random_hermitian(4, rng)
    assert np.linalg.norm(matrix_function(h, lambda w: w) - h) < 1e-12


def test_matrix_function_domain():
    assert np.allclose(sqrtm_psd(np.diag([1.0, -5e-11])), np.diag([1.0, 0.0]))
    with pytest.raises(ValueError):
        sqrtm_psd(np.diag([1.0, -1e-6]))
    with pytest.raises(ValueError):
        matrix_function(np.diag([1.0, -1.0]), np.log)


def test_entropy_examples():
    assert von_neumann_entropy(ketbra(KET_PLUS)) == pytest.approx(0.0, abs=1e-15)
    assert von_neumann_entropy(I2 / 2) == pytest.approx(math.log(2), abs=1e-15)
    assert von_neumann_entropy(np.diag([0.75, 0.25])) == pytest.approx(0.5623351446188083, abs=1e-14)
    with pytest.raises(ValueError):
        von_neumann_entropy(np.diag([1.1, -0.1]))


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_entropy_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(4, rng)
    u = random_unitary(4, rng)
    assert abs(von_neumann_entropy(u @ rho @ u.conj().T) - von_neumann_entropy(rho)) < 1e-10


def test_trace_distance_examples(rng):
    rho = random_density_matrix(3, rng)
    assert trace_distance(rho, rho) == 0.0
    assert trace_distance(ketbra(KET_0), ketbra(KET_1)) == pytest.approx(1.0)
    assert trace_distance(ketbra(KET_0), I2 / 2) == pytest.approx(0.5)
    sigma = random_density_matrix(3, rng)
    assert trace_distance(rho, sigma) == pytest.approx(trace_distance(sigma, rho), abs=1e-15)
    with pytest.raises(ValueError):
        trace_distance(I2 / 2, np.eye(3) / 3)


def test_density_matrix_validation():
    assert np.array_equal(density_matrix(I2 / 2), I2 / 2)
    with pytest.raises(ValueError, match="Hermitian"):
        density_matrix(np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(ValueError, match="trace"):
        density_matrix(np.eye(2))
    with pytest.raises(ValueError, match="negative"):
        density_matrix(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError, match="square"):
        density_matrix(np.ones((2, 3)))
