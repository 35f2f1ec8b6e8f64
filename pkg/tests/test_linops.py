import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bievolve import linops
from bievolve.exceptions import DimensionMismatchError, InvalidInputError


def test_as_matrix_rejects_bad_shapes():
    with pytest.raises(InvalidInputError):
        linops.as_matrix(np.zeros((2, 3)))
    with pytest.raises(InvalidInputError):
        linops.as_matrix(np.zeros((0, 0)))
    with pytest.raises(InvalidInputError):
        linops.as_matrix(np.eye(linops.MAX_DIM + 1))
    with pytest.raises(InvalidInputError):
        linops.as_matrix([[np.nan, 0], [0, 1]])


def test_as_matrix_hermitian_check(sigma_x):
    assert linops.as_matrix(sigma_x, hermitian=True).dtype == complex
    with pytest.raises(InvalidInputError):
        linops.as_matrix([[0, 1], [0, 0]], hermitian=True)


def test_as_state_dimension():
    with pytest.raises(DimensionMismatchError):
        linops.as_state([1, 0, 0], dim=2)
    with pytest.raises(InvalidInputError):
        linops.as_state([[1, 0]])


def test_mat_exp_of_pauli_matches_rotation(sigma_x):
    t = 0.7
    expected = np.cos(t) * np.eye(2) - 1j * np.sin(t) * sigma_x
    assert np.allclose(linops.mat_exp(sigma_x, -1j * t), expected, atol=1e-15)


def test_mat_exp_zero_is_identity():
    assert np.array_equal(linops.mat_exp(np.zeros((3, 3)), 5.0), np.eye(3))


def test_mat_exp_rejects_nonfinite_scale(sigma_x):
    with pytest.raises(InvalidInputError):
        linops.mat_exp(sigma_x, np.inf)


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 16), seed=st.integers(0, 2**32 - 1), t=st.floats(-1, 1))
def test_unitarity_and_eigh_agreement(d, seed, t):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = a + a.conj().T
    t = t * 50.0 / max(np.linalg.norm(h, 2), 1e-12)
    u = linops.mat_exp(h, -1j * t)
    assert np.linalg.norm(u.conj().T @ u - np.eye(d)) <= 1e-10
    assert np.max(np.abs(u - linops.mat_exp_eigh(h, -1j * t))) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), t1=st.floats(-3, 3), t2=st.floats(-3, 3))
def test_group_law(seed, t1, t2):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = 0.5 * (a + a.conj().T)
    lhs = linops.mat_exp(h, -1j * t1) @ linops.mat_exp(h, -1j * t2)
    assert np.linalg.norm(lhs - linops.mat_exp(h, -1j * (t1 + t2))) <= 1e-10


def test_commutator_of_paulis(sigma_x, sigma_y, sigma_z):
    assert np.allclose(linops.commutator(sigma_x, sigma_y), 2j * sigma_z)
    with pytest.raises(DimensionMismatchError):
        linops.commutator(sigma_x, np.eye(3))


def test_decomposition_reconstructs(rng, random_hermitian):
    for _ in range(100):
        h = random_hermitian(rng, int(rng.integers(2, 9)))
        dec = linops.hermitian_eigendecomposition(h)
        assert np.linalg.norm(dec.reconstruct() - h) <= 1e-10 * np.linalg.norm(h)
        assert np.allclose(sum(dec.projectors), np.eye(dec.dim))


def test_degenerate_eigenvalues_merge():
    h = np.diag([1.0, 1.0 + 1e-12, 3.0]).astype(complex)
    dec = linops.hermitian_eigendecomposition(h)
    assert dec.multiplicities == (2, 1)
    assert np.allclose(dec.eigenvalues, [1.0 + 5e-13, 3.0])


def test_apply_function_gives_exponential(rng, random_hermitian):
    h = random_hermitian(rng, 5)
    dec = linops.hermitian_eigendecomposition(h)
    assert np.allclose(dec.apply_function(np.exp(-1j * dec.eigenvalues)), linops.mat_exp(h, -1j), atol=1e-12)


def test_kernel_projector(sigma_z):
    dec = linops.hermitian_eigendecomposition(np.diag([0.0, 2.0, -2.0]).astype(complex))
    assert np.allclose(linops.kernel_projector(dec), np.diag([1, 0, 0]))
    dec = linops.hermitian_eigendecomposition(sigma_z)
    assert np.array_equal(linops.kernel_projector(dec), np.zeros((2, 2)))
