import numpy as np
import pytest

from entmaps.bases import gell_mann_basis
from entmaps.identifiers import pptgen_map, sign_map, standard_metric
from entmaps.linalg import hs_inner, kron, max_abs, partial_transpose
from entmaps.positive_maps import (
    apply_dual_to_second_factor,
    block_positivity_sample,
    induced_map_operator,
    isomorphism_check,
    lambda_apply,
    lambda_dual_apply,
    map_condition,
    max_entangled_operator,
    phi_plus,
    ppt_check,
    witness_coefficients,
    witness_operator,
)
from entmaps.states import random_separable, random_state, singlet, werner


def test_singlet_witness_spectrum_and_block_positivity():
    w = witness_operator(standard_metric(2, 2), singlet(), seed=0)
    assert abs(w.omega_tilde0 - 0.25) < 1e-9
    eigs = np.sort(np.linalg.eigvalsh(w.matrix))
    assert max_abs(eigs - np.array([-0.5, 0.5, 0.5, 0.5])) < 1e-9
    # not PSD, yet nonnegative on every sampled product vector
    assert block_positivity_sample(w, samples=4000, seed=1) > -1e-9


def test_witness_coefficients_reassemble_witness():
    w = witness_operator(standard_metric(2, 2), werner(0.8), seed=0)
    basis = gell_mann_basis(2)
    wij = witness_coefficients(w)
    rebuilt = np.einsum(
        "ij,iab,jcd->acbd", wij, basis.elements, basis.elements,
    ).reshape(4, 4) / 4.0
    assert max_abs(rebuilt - w.matrix) < 1e-12


def test_lambda_maps_are_hs_adjoint(rng, random_hermitian):
    w = witness_operator(standard_metric(2, 3), random_state(6, seed=4), seed=0)
    for _ in range(5):
        a = random_hermitian(rng, 2)
        b = random_hermitian(rng, 3)
        lhs = hs_inner(b, lambda_apply(w, a))
        rhs = hs_inner(lambda_dual_apply(w, b), a)
        assert abs(lhs - np.conj(rhs)) < 1e-12


def test_lambda_apply_validates_input(rng, random_hermitian):
    w = witness_operator(standard_metric(2, 3), random_state(6, seed=4), seed=0)
    with pytest.raises(ValueError, match="does not match subsystem"):
        lambda_apply(w, np.eye(3))
    with pytest.raises(ValueError, match="does not match subsystem"):
        lambda_dual_apply(w, np.eye(2))
    a = random_hermitian(rng, 2)
    with pytest.raises(ValueError, match="Hermitian"):
        lambda_apply(w, a + 1e-3 * 1j * np.eye(2))


def test_dual_on_second_factor_matches_componentwise(rng):
    w = witness_operator(standard_metric(2, 2), random_state(4, seed=6), seed=0)
    target = random_state(4, seed=7)
    fast = apply_dual_to_second_factor(w, target)
    basis = gell_mann_basis(2)
    slow = np.zeros((4, 4), dtype=complex)
    t4 = target.reshape(2, 2, 2, 2)
    for sj in basis.elements:
        aj = np.einsum("akcl,lk->ac", t4, sj) / 2.0
        slow += np.kron(aj, lambda_dual_apply(w, sj))
    assert max_abs(fast - slow) < 1e-12


def test_induced_map_is_partial_transpose_of_dual():
    w = witness_operator(standard_metric(2, 2), singlet(), seed=0)
    target = random_state(4, seed=8)
    direct = induced_map_operator(w, target)
    assert max_abs(
        direct - partial_transpose(apply_dual_to_second_factor(w, target), (2, 2), "B")
    ) == 0.0
    assert max_abs(direct - direct.conj().T) < 1e-12


def test_map_condition_detects_singlet_and_clears_separable():
    g = standard_metric(2, 2)
    res = map_condition(g, singlet(), singlet(), seed=0)
    assert res.detected
    assert abs(res.min_eigenvalue + 0.25) < 1e-9
    for seed in range(5):
        rho = random_separable((2, 2), seed=seed)
        res = map_condition(g, rho, rho, seed=0)
        assert not res.detected


def test_ppt_check_flags_entangled_werner():
    lo, detected = ppt_check(werner(0.9), (2, 2))
    assert detected and lo < -0.1
    lo, detected = ppt_check(werner(0.2), (2, 2))
    assert not detected


@pytest.mark.parametrize("d", [2, 3])
def test_max_entangled_operator_is_transposed_projector(d):
    op = max_entangled_operator(gell_mann_basis(d))
    expected = 2.0 * partial_transpose(phi_plus(d), (d, d), "B")
    assert max_abs(op - expected) < 1e-12


def test_isomorphism_reconstruction():
    for g, rho in (
        (standard_metric(2, 2), random_state(4, seed=2)),
        (sign_map(2, 2), random_state(4, seed=3)),
        (standard_metric(3, 3), random_state(9, seed=2)),
    ):
        assert isomorphism_check(g, rho, seed=0) < 1e-10
    with pytest.raises(ValueError, match="equal subsystem"):
        isomorphism_check(standard_metric(2, 3), random_state(6, seed=0))


def test_pptgen_witness_acts_as_half_transpose(rng, random_hermitian):
    w = witness_operator(pptgen_map(), random_state(4, seed=5), seed=0)
    for _ in range(5):
        lam = random_hermitian(rng, 2)
        assert max_abs(lambda_dual_apply(w, lam) - lam / 2.0) < 1e-10
    # consequence: the induced operator is half the partial transpose
    target = random_state(4, seed=9)
    ind = induced_map_operator(w, target)
    assert max_abs(ind - partial_transpose(target, (2, 2), "B") / 2.0) < 1e-10
