import numpy as np
import pytest

from entmaps.bases import (
    HermitianBasis,
    correlation_tensor,
    expand_hermitian,
    gell_mann_basis,
    pair_product_stack,
    state_from_tensor,
    tripartite_correlation_tensor,
)
from entmaps.linalg import max_abs
from entmaps.states import singlet, random_state


@pytest.mark.parametrize("d", [2, 3, 4])
def test_gell_mann_orthonormalization(d):
    basis = gell_mann_basis(d)
    assert len(basis) == d * d
    gram = np.array([[np.trace(a.conj().T @ b) for b in basis] for a in basis])
    assert max_abs(gram - 2.0 * np.eye(d * d)) < 1e-13


@pytest.mark.parametrize("d", [2, 3])
def test_gell_mann_elements_hermitian_traceless(d):
    basis = gell_mann_basis(d)
    iden = basis[0]
    assert max_abs(iden - np.sqrt(2.0 / d) * np.eye(d)) < 1e-14
    for el in basis.elements[1:]:
        assert max_abs(el - el.conj().T) < 1e-14
        assert abs(np.trace(el)) < 1e-14


def test_gell_mann_qubit_matches_pauli():
    basis = gell_mann_basis(2)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1.0, -1.0]).astype(complex)
    assert max_abs(basis[1] - sx) < 1e-14
    assert max_abs(basis[2] - sy) < 1e-14
    assert max_abs(basis[3] - sz) < 1e-14


def test_gell_mann_rejects_bad_dim():
    with pytest.raises(ValueError):
        gell_mann_basis(1)


def test_pair_product_stack_shape():
    stack = pair_product_stack(2, 3)
    assert stack.shape == (36, 6, 6)
    # first element is the normalized identity product
    assert max_abs(stack[0] - np.sqrt(2.0 / 3.0) * np.eye(6)) < 1e-14


def test_correlation_tensor_roundtrip(rng):
    for dims in ((2, 2), (2, 3), (3, 3)):
        d = dims[0] * dims[1]
        rho = random_state(d, seed=11)
        t = correlation_tensor(rho, dims=dims)
        assert t.shape == (dims[0] ** 2, dims[1] ** 2)
        assert max_abs(state_from_tensor(t, dims=dims) - rho) < 1e-13


def test_correlation_tensor_of_singlet():
    t = correlation_tensor(singlet(), dims=(2, 2))
    expected = np.diag([1.0, -1.0, -1.0, -1.0])
    assert max_abs(t - expected) < 1e-14


def test_correlation_tensor_shape_checks():
    with pytest.raises(ValueError):
        correlation_tensor(np.eye(5) / 5.0, dims=(2, 3))
    with pytest.raises(ValueError):
        state_from_tensor(np.zeros((4, 4)), dims=(2, 3))


def test_custom_basis_path_matches_default(rng):
    rho = random_state(4, seed=3)
    default = correlation_tensor(rho, dims=(2, 2))
    explicit = correlation_tensor(
        rho,
        basis_a=HermitianBasis(dim=2, elements=gell_mann_basis(2).elements.copy()),
        basis_b=gell_mann_basis(2),
    )
    assert max_abs(default - explicit) < 1e-14


def test_tripartite_tensor_reconstructs_state():
    rho = random_state(8, seed=5)
    t = tripartite_correlation_tensor(rho)
    assert t.shape == (4, 4, 4)
    basis = gell_mann_basis(2)
    recon = np.zeros((8, 8), dtype=complex)
    for i in range(4):
        for j in range(4):
            for k in range(4):
                recon += t[i, j, k] * np.kron(np.kron(basis[i], basis[j]), basis[k])
    assert max_abs(recon / 8.0 - rho) < 1e-13


def test_expand_hermitian_coefficients(rng, random_hermitian):
    basis = gell_mann_basis(3)
    h = random_hermitian(rng, 3)
    coeff = expand_hermitian(h, basis)
    recon = sum(c * el for c, el in zip(coeff, basis))
    assert max_abs(recon - h) < 1e-13
