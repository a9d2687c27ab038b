"""State-dependent witnesses and the positive maps they induce.

Every identifier evaluation yields a block-positive witness
W = omega_tilde0 * I - G[rho].  Its Choi-type companion maps are the
contractions

    lambda_apply:      lam -> Tr_A(W (lam (x) I))   (H_A -> H_B)
    lambda_dual_apply: lam -> Tr_B(W (I (x) lam))   (H_B -> H_A)

and entanglement of a target state shows up as a negative eigenvalue of
(I (x) transpose . dual map) applied to it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bases import HermitianBasis, correlation_tensor, gell_mann_basis
from .identifiers import GMap, apply_gmap, product_max
from .linalg import (
    hs_inner,
    kron,
    max_abs,
    negativity_verdict,
    partial_trace,
    partial_transpose,
    require_hermitian,
)

__all__ = [
    "WitnessOperator",
    "witness_operator",
    "witness_from_image",
    "witness_coefficients",
    "lambda_apply",
    "lambda_dual_apply",
    "apply_dual_to_second_factor",
    "induced_map_operator",
    "MapConditionResult",
    "map_condition",
    "ppt_check",
    "phi_plus",
    "max_entangled_operator",
    "isomorphism_check",
    "block_positivity_sample",
]


@dataclass(frozen=True)
class WitnessOperator:
    """omega_tilde0 * I - G[rho], with the product maximum that built it."""

    matrix: np.ndarray
    dims: tuple[int, int]
    omega_tilde0: float
    source: str = ""


def witness_from_image(
    image: np.ndarray,
    dims: tuple[int, int],
    restarts: int = 20,
    tol: float = 1e-10,
    max_iter: int = 500,
    seed: int = 0,
    source: str = "",
) -> WitnessOperator:
    """Witness for an already computed map image."""
    value, _, _ = product_max(image, dims, restarts=restarts, tol=tol,
                              max_iter=max_iter, seed=seed)
    d = dims[0] * dims[1]
    return WitnessOperator(
        matrix=value * np.eye(d) - image,
        dims=dims,
        omega_tilde0=value,
        source=source,
    )


def witness_operator(
    g: GMap,
    rho: np.ndarray,
    restarts: int = 20,
    tol: float = 1e-10,
    max_iter: int = 500,
    seed: int = 0,
) -> WitnessOperator:
    """Witness generated by a state under a correlation-tensor map."""
    image = apply_gmap(g, rho)
    return witness_from_image(image, g.dims, restarts=restarts, tol=tol,
                              max_iter=max_iter, seed=seed, source=g.name or g.variant)


def witness_coefficients(
    w: WitnessOperator,
    basis_a: HermitianBasis | None = None,
    basis_b: HermitianBasis | None = None,
) -> np.ndarray:
    """Expansion w_ij with W = (1/4) sum_ij w_ij s_i (x) s_j."""
    if basis_a is None:
        basis_a = gell_mann_basis(w.dims[0])
    if basis_b is None:
        basis_b = gell_mann_basis(w.dims[1])
    return correlation_tensor(w.matrix, basis_a=basis_a, basis_b=basis_b)


def lambda_apply(w: WitnessOperator, lam: np.ndarray) -> np.ndarray:
    """Tr_A(W (lam (x) I)) for a Hermitian lam on the first subsystem."""
    da, db = w.dims
    if lam.shape != (da, da):
        raise ValueError(f"operator shape {lam.shape} does not match subsystem dim {da}")
    require_hermitian(lam, "map argument")
    return partial_trace(w.matrix @ kron(lam, np.eye(db)), w.dims, traced="A")


def lambda_dual_apply(w: WitnessOperator, lam: np.ndarray) -> np.ndarray:
    """Tr_B(W (I (x) lam)) for a Hermitian lam on the second subsystem."""
    da, db = w.dims
    if lam.shape != (db, db):
        raise ValueError(f"operator shape {lam.shape} does not match subsystem dim {db}")
    require_hermitian(lam, "map argument")
    return partial_trace(w.matrix @ kron(np.eye(da), lam), w.dims, traced="B")


def apply_dual_to_second_factor(w: WitnessOperator, target: np.ndarray) -> np.ndarray:
    """(I (x) dual map) applied to a bipartite target on H_A (x) H_B.

    The target is decomposed over the second-subsystem operator basis,
    each component is pushed through the dual map, and the result lives
    on H_A (x) H_A.
    """
    da, db = w.dims
    if target.shape != (da * db, da * db):
        raise ValueError(f"target shape {target.shape} does not match dims {w.dims}")
    require_hermitian(target, "target")
    basis_b = gell_mann_basis(db).elements
    t4 = target.reshape(da, db, da, db)
    w4 = w.matrix.reshape(da, db, da, db)
    # component j of X = sum_j X_j (x) s_j is Tr_B(X (I (x) s_j)) / 2
    comp_t = np.einsum("akcl,jlk->jac", t4, basis_b) / 2.0
    comp_w = np.einsum("akcl,jlk->jac", w4, basis_b)
    out = np.einsum("jac,jbd->abcd", comp_t, comp_w).reshape(da * da, da * da)
    return out


def induced_map_operator(w: WitnessOperator, target: np.ndarray) -> np.ndarray:
    """(I (x) transpose . dual map) applied to the target, on H_A (x) H_A."""
    da = w.dims[0]
    return partial_transpose(apply_dual_to_second_factor(w, target), (da, da), "B")


@dataclass(frozen=True)
class MapConditionResult:
    min_eigenvalue: float
    detected: bool
    omega_tilde0: float


def map_condition(
    g: GMap,
    generator: np.ndarray,
    target: np.ndarray,
    restarts: int = 20,
    tol: float = 1e-10,
    max_iter: int = 500,
    seed: int = 0,
) -> MapConditionResult:
    """Positive-map test of the target with the generator-built witness.

    A negative eigenvalue (below the scale-aware tolerance) certifies the
    target as entangled.
    """
    w = witness_operator(g, generator, restarts=restarts, tol=tol,
                         max_iter=max_iter, seed=seed)
    m = induced_map_operator(w, target)
    lo, detected = negativity_verdict(m)
    return MapConditionResult(min_eigenvalue=lo, detected=detected,
                              omega_tilde0=w.omega_tilde0)


def ppt_check(rho: np.ndarray, dims: tuple[int, int]) -> tuple[float, bool]:
    """Minimum eigenvalue of the partial transpose and its verdict."""
    return negativity_verdict(partial_transpose(rho, dims, "B"))


def phi_plus(d: int) -> np.ndarray:
    """Unnormalized maximally entangled operator sum_ij |ii><jj|."""
    v = np.eye(d, dtype=complex).ravel()
    return np.outer(v, v.conj())


def max_entangled_operator(basis: HermitianBasis) -> np.ndarray:
    """sum_m s_m (x) s_m over the full basis.

    With the Tr(s_i s_j) = 2 delta_ij normalization this equals twice the
    partial transpose of phi_plus(d) for every d, which pins the convention.
    """
    s = basis.elements
    return np.einsum("mab,mcd->acbd", s, s).reshape(basis.dim**2, basis.dim**2)


def isomorphism_check(
    g: GMap,
    rho: np.ndarray,
    restarts: int = 20,
    tol: float = 1e-10,
    seed: int = 0,
) -> float:
    """Max deviation between the witness and its reconstruction through the map.

    The witness of a map image on a d x d system must equal
    (I (x) Lambda)[(1/2) sum_m s_m (x) s_m], with Lambda assembled from the
    coefficient sum Lambda[lam] = (1/4) sum_ij w_ij Tr(s_i lam) s_j.  Requires
    equal subsystem dimensions.
    """
    da, db = g.dims
    if da != db:
        raise ValueError("the reconstruction needs equal subsystem dimensions")
    w = witness_operator(g, rho, restarts=restarts, tol=tol, seed=seed)
    basis = gell_mann_basis(da)
    wij = witness_coefficients(w)
    # Lambda applied to every basis element at once: Tr(s_i s_m) = 2 delta_im
    lam_images = np.einsum("ij,jab->iab", wij, basis.elements) / 2.0
    rebuilt = np.einsum("mab,mcd->acbd", basis.elements, lam_images).reshape(da * da, da * da) / 2.0
    return max_abs(w.matrix - rebuilt)


def block_positivity_sample(
    w: WitnessOperator,
    samples: int = 10_000,
    seed: int = 0,
) -> float:
    """Minimum of <x (x) y| W |x (x) y> over random product states."""
    da, db = w.dims
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed)))
    xs = rng.standard_normal((samples, da)) + 1j * rng.standard_normal((samples, da))
    ys = rng.standard_normal((samples, db)) + 1j * rng.standard_normal((samples, db))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    ys /= np.linalg.norm(ys, axis=1, keepdims=True)
    w4 = w.matrix.reshape(da, db, da, db)
    vals = np.einsum("ni,nk,ikjl,nj,nl->n", xs.conj(), ys.conj(), w4, xs, ys).real
    return float(vals.min())
