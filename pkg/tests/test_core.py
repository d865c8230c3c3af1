import numpy as np
import pytest

from boundfuel.core import (
    DensityMatrix,
    HermitianOperator,
    HilbertSpace,
    eig_hermitian,
    matrix_exp_unitary,
    partial_trace,
    partial_transpose,
    relative_entropy,
    state_from_json,
    state_to_json,
    tensor,
    trace_norm,
    von_neumann_entropy,
)
from boundfuel.states import SIGMA_X, SIGMA_Z, qubit_hamiltonian, smolin_state

from conftest import random_hermitian, random_state

SINGLET = np.array([0, 1, -1, 0]) / np.sqrt(2)


def test_space_invariants():
    s = HilbertSpace((2, 3, 2))
    assert s.dim == 12 and s.n_factors == 3
    with pytest.raises(ValueError):
        HilbertSpace((2, 1))


def test_density_matrix_validation():
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix.from_array(np.eye(2), (2,))
    with pytest.raises(ValueError, match="Hermitian"):
        DensityMatrix.from_array([[0.5, 1], [0, 0.5]], (2,))
    with pytest.raises(ValueError, match="negative"):
        DensityMatrix.from_array(np.diag([1.5, -0.5]), (2,))


def test_tensor_identity_factor():
    z = HermitianOperator(HilbertSpace((2,)), SIGMA_Z)
    i2 = HermitianOperator(HilbertSpace((2,)), np.eye(2))
    out = tensor(z, i2)
    assert isinstance(out, HermitianOperator)
    np.testing.assert_allclose(out.data, np.diag([1, 1, -1, -1]))
    assert out.dims == (2, 2)


def test_tensor_of_identities_is_maximally_mixed():
    half = DensityMatrix.from_array(np.eye(2) / 2, (2,))
    out = tensor([half] * 4)
    np.testing.assert_allclose(out.data, np.eye(16) / 16)


def test_partial_trace_product(rng):
    a, b = random_state(rng, 3), random_state(rng, 4)
    red = partial_trace(np.kron(a, b), [0], dims=(3, 4))
    np.testing.assert_allclose(red, a, atol=1e-12)
    np.testing.assert_allclose(partial_trace(np.kron(a, b), [1], dims=(3, 4)), b, atol=1e-12)


def test_partial_trace_random_products(rng):
    for _ in range(50):
        da, db = rng.integers(2, 5, size=2)
        a, b = random_state(rng, da), random_state(rng, db)
        np.testing.assert_allclose(partial_trace(np.kron(a, b), [0], (da, db)), a, atol=1e-12)


def test_partial_trace_keeps_order():
    a, b, c = np.diag([1.0, 0]), np.diag([0, 1.0]), np.diag([0.5, 0.5])
    rho = np.kron(np.kron(a, b), c)
    np.testing.assert_allclose(partial_trace(rho, [2, 0], (2, 2, 2)), np.kron(c, a))


def test_partial_trace_bell_and_smolin():
    bell = DensityMatrix.pure([1, 0, 0, 1], (2, 2))
    np.testing.assert_allclose(partial_trace(bell, [0]).data, np.eye(2) / 2)
    s = smolin_state()
    for q in range(4):
        np.testing.assert_allclose(partial_trace(s, [q]).data, np.eye(2) / 2, atol=1e-14)


def test_partial_trace_bad_index():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4) / 4, [2], (2, 2))


def test_partial_transpose_singlet():
    pt = partial_transpose(np.outer(SINGLET, SINGLET), [1], (2, 2))
    assert np.linalg.eigvalsh(pt)[0] == pytest.approx(-0.5)


def test_partial_transpose_product_is_psd(rng):
    rho = np.kron(random_state(rng, 2), random_state(rng, 3))
    w = np.linalg.eigvalsh(partial_transpose(rho, [1], (2, 3)))
    assert w[0] > -1e-12
    np.testing.assert_allclose(np.sort(w), np.sort(np.linalg.eigvalsh(rho)), atol=1e-12)


def test_partial_transpose_bad_cut():
    with pytest.raises(ValueError):
        partial_transpose(np.eye(4) / 4, [0, 1], (2, 2))
    with pytest.raises(ValueError):
        partial_transpose(np.eye(4) / 4, [], (2, 2))


def test_eig_pauli_and_smolin_and_hamiltonian():
    assert eig_hermitian(SIGMA_Z).values.tolist() == [-1, 1]
    spec = eig_hermitian(smolin_state(), order="descending")
    assert spec.degeneracies() == [(pytest.approx(0.25), 4), (pytest.approx(0.0, abs=1e-9), 12)]
    h = eig_hermitian(qubit_hamiltonian())
    assert [m for _, m in h.degeneracies()] == [1, 4, 6, 4, 1]
    np.testing.assert_allclose([v for v, _ in h.degeneracies()], [-2, -1, 0, 1, 2], atol=1e-12)


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


@pytest.mark.parametrize("d", [2, 7, 64, 512])
def test_eig_reconstruction(rng, d):
    a = random_hermitian(rng, d)
    spec = eig_hermitian(a)
    assert np.max(np.abs(spec.reconstruct() - a)) < 1e-9
    v = spec.vectors
    assert np.max(np.abs(v.conj().T @ v - np.eye(d))) < 1e-9


def test_trace_norm_and_exponential(rng):
    assert trace_norm(random_state(rng, 5)) == pytest.approx(1.0)
    np.testing.assert_allclose(matrix_exp_unitary(SIGMA_Z, 0), np.eye(2))
    np.testing.assert_allclose(matrix_exp_unitary(SIGMA_X, np.pi / 2), -1j * SIGMA_X, atol=1e-15)


def test_entropies():
    assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(np.log(2))
    assert relative_entropy(np.diag([1.0, 0]), np.diag([0.5, 0.5])) == pytest.approx(np.log(2))
    assert relative_entropy(np.diag([0.5, 0.5]), np.diag([1.0, 0])) == np.inf


def test_json_round_trip():
    s = smolin_state()
    back = state_from_json(state_to_json(s))
    assert back.dims == s.dims
    assert np.array_equal(back.data, s.data)
