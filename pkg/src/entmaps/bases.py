"""Hermitian operator bases and correlation tensors.

The basis for dimension d consists of d^2 Hermitian matrices s_0 .. s_{d^2-1}
with Tr(s_i s_j) = 2 delta_ij and s_0 = sqrt(2/d) * identity.  For d = 2 this
is (scaled identity, sigma_x, sigma_y, sigma_z); for larger d the traceless
elements are the generalized Gell-Mann matrices, ordered as all symmetric
pair matrices (j < k, lexicographic), then all antisymmetric pair matrices,
then the diagonal ones.

A bipartite state decomposes as rho = (1/4) sum_ij T_ij s_i (x) s_j with
T_ij = Tr(rho s_i (x) s_j); the tripartite analogue carries a 1/8 prefactor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import require_hermitian

__all__ = [
    "HermitianBasis",
    "gell_mann_basis",
    "pair_product_stack",
    "triple_product_stack",
    "correlation_tensor",
    "state_from_tensor",
    "tripartite_correlation_tensor",
    "expand_hermitian",
]


@dataclass(frozen=True)
class HermitianBasis:
    """An orthogonal Hermitian basis with Tr(s_i s_j) = 2 delta_ij."""

    dim: int
    elements: np.ndarray  # shape (dim**2, dim, dim), read-only

    def __len__(self) -> int:
        return self.elements.shape[0]

    def __getitem__(self, i: int) -> np.ndarray:
        return self.elements[i]

    def __iter__(self):
        return iter(self.elements)


def _gell_mann_elements(d: int) -> np.ndarray:
    out = np.zeros((d * d, d, d), dtype=complex)
    out[0] = np.sqrt(2.0 / d) * np.eye(d)
    n = 1
    for j in range(d):
        for k in range(j + 1, d):
            out[n][j, k] = 1.0
            out[n][k, j] = 1.0
            n += 1
    for j in range(d):
        for k in range(j + 1, d):
            out[n][j, k] = -1.0j
            out[n][k, j] = 1.0j
            n += 1
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        out[n] = np.sqrt(2.0 / (l * (l + 1))) * np.diag(diag)
        n += 1
    out.flags.writeable = False
    return out


@lru_cache(maxsize=None)
def gell_mann_basis(d: int) -> HermitianBasis:
    """The scaled-identity-first generalized Gell-Mann basis for dimension d."""
    if d < 2:
        raise ValueError(f"basis dimension must be at least 2, got {d}")
    return HermitianBasis(dim=d, elements=_gell_mann_elements(d))


@lru_cache(maxsize=None)
def pair_product_stack(da: int, db: int) -> np.ndarray:
    """Stack of all products s_i (x) s_j, flat index i * db^2 + j."""
    a = gell_mann_basis(da).elements
    b = gell_mann_basis(db).elements
    stack = np.einsum("iab,jcd->ijacbd", a, b).reshape(da * da * db * db, da * db, da * db)
    stack.flags.writeable = False
    return stack


@lru_cache(maxsize=None)
def triple_product_stack() -> np.ndarray:
    """All 64 products s_i (x) s_j (x) s_k for three qubits, index (i, j, k)."""
    s = gell_mann_basis(2).elements
    stack = np.einsum("iab,jcd,kef->ijkacebdf", s, s, s).reshape(64, 8, 8)
    stack.flags.writeable = False
    return stack


def _resolve_pair(
    rho: np.ndarray,
    dims: tuple[int, int] | None,
    basis_a: HermitianBasis | None,
    basis_b: HermitianBasis | None,
) -> tuple[HermitianBasis, HermitianBasis]:
    if basis_a is not None and basis_b is not None:
        pass
    elif dims is not None:
        basis_a = gell_mann_basis(dims[0])
        basis_b = gell_mann_basis(dims[1])
    else:
        raise ValueError("pass either dims or both bases")
    if rho.shape != (basis_a.dim * basis_b.dim, basis_a.dim * basis_b.dim):
        raise ValueError(
            f"operator shape {rho.shape} does not match dims ({basis_a.dim}, {basis_b.dim})"
        )
    return basis_a, basis_b


def correlation_tensor(
    rho: np.ndarray,
    dims: tuple[int, int] | None = None,
    basis_a: HermitianBasis | None = None,
    basis_b: HermitianBasis | None = None,
) -> np.ndarray:
    """Real matrix T_ij = Tr(rho s_i (x) s_j) of a Hermitian bipartite operator."""
    basis_a, basis_b = _resolve_pair(rho, dims, basis_a, basis_b)
    require_hermitian(rho, "operator")
    da, db = basis_a.dim, basis_b.dim
    if basis_a is gell_mann_basis(da) and basis_b is gell_mann_basis(db):
        stack = pair_product_stack(da, db)
    else:
        stack = np.einsum("iab,jcd->ijacbd", basis_a.elements, basis_b.elements).reshape(
            da * da * db * db, da * db, da * db
        )
    t = np.einsum("nab,ba->n", stack, rho)
    return np.real(t).reshape(da * da, db * db)


def state_from_tensor(
    t: np.ndarray,
    dims: tuple[int, int] | None = None,
    basis_a: HermitianBasis | None = None,
    basis_b: HermitianBasis | None = None,
) -> np.ndarray:
    """Reassemble (1/4) sum_ij T_ij s_i (x) s_j from a correlation tensor."""
    if basis_a is None or basis_b is None:
        if dims is None:
            raise ValueError("pass either dims or both bases")
        basis_a = gell_mann_basis(dims[0])
        basis_b = gell_mann_basis(dims[1])
    da, db = basis_a.dim, basis_b.dim
    if t.shape != (da * da, db * db):
        raise ValueError(f"tensor shape {t.shape} does not match dims ({da}, {db})")
    stack = pair_product_stack(da, db)
    return np.einsum("n,nab->ab", np.asarray(t, dtype=float).ravel(), stack) / 4.0


def tripartite_correlation_tensor(rho: np.ndarray) -> np.ndarray:
    """T_ijk = Tr(rho s_i (x) s_j (x) s_k) for a three-qubit operator."""
    if rho.shape != (8, 8):
        raise ValueError(f"expected an 8x8 operator, got shape {rho.shape}")
    require_hermitian(rho, "operator")
    t = np.einsum("nab,ba->n", triple_product_stack(), rho)
    return np.real(t).reshape(4, 4, 4)


def expand_hermitian(m: np.ndarray, basis: HermitianBasis) -> np.ndarray:
    """Coefficients c_i = Tr(m s_i) / 2, so that m = sum_i c_i s_i."""
    if m.shape != (basis.dim, basis.dim):
        raise ValueError(f"operator shape {m.shape} does not match basis dim {basis.dim}")
    return np.real(np.einsum("nab,ba->n", basis.elements, m)) / 2.0
