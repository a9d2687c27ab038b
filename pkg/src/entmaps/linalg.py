"""Dense linear algebra helpers for small bipartite and tripartite systems.

Everything operates on plain complex numpy arrays.  Subsystem A is always
the left (slow) Kronecker factor: an index pair (i, k) of H_A (x) H_B maps
to the flat row index i * dB + k.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "HERMITICITY_RTOL",
    "NEGATIVITY_TOL",
    "dagger",
    "max_abs",
    "is_hermitian",
    "require_hermitian",
    "kron",
    "hermitian_eig",
    "min_eigenvalue",
    "negativity_verdict",
    "partial_trace",
    "partial_transpose",
    "hs_inner",
    "proj",
]

# Relative tolerance for accepting a matrix as Hermitian.
HERMITICITY_RTOL = 1e-12

# An eigenvalue counts as negative only below -NEGATIVITY_TOL * max(1, |M|_max),
# so verdicts do not flip on rounding noise of nearly-PSD matrices.
NEGATIVITY_TOL = 1e-9


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def max_abs(m: np.ndarray) -> float:
    """Largest entry magnitude, 0.0 for an empty array."""
    return float(np.max(np.abs(m))) if m.size else 0.0


def is_hermitian(m: np.ndarray, rtol: float = HERMITICITY_RTOL) -> bool:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, max_abs(m))
    return max_abs(m - dagger(m)) <= rtol * scale


def require_hermitian(m: np.ndarray, what: str = "matrix") -> None:
    if not is_hermitian(m):
        raise ValueError(f"{what} is not Hermitian within relative tolerance {HERMITICITY_RTOL}")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, first argument is the slow factor."""
    return np.kron(a, b)


def proj(v: np.ndarray) -> np.ndarray:
    """Rank-one projector |v><v| of a (not necessarily normalized) vector."""
    v = np.asarray(v, dtype=complex).ravel()
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("cannot project the zero vector")
    v = v / n
    return np.outer(v, v.conj())


def hermitian_eig(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Spectral decomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvectors as columns).  The input is
    symmetrized before factorization so reconstruction error stays at
    rounding level; non-Hermitian input raises ValueError.
    """
    require_hermitian(m)
    w, v = np.linalg.eigh((m + dagger(m)) / 2.0)
    return w, v


def min_eigenvalue(m: np.ndarray) -> float:
    return float(hermitian_eig(m)[0][0])


def negativity_verdict(m: np.ndarray) -> tuple[float, bool]:
    """Minimum eigenvalue of a Hermitian matrix and a scale-aware verdict.

    The verdict is True only when the eigenvalue is below
    -NEGATIVITY_TOL * max(1, largest entry magnitude).
    """
    lo = min_eigenvalue(m)
    return lo, lo < -NEGATIVITY_TOL * max(1.0, max_abs(m))


def _as_four_index(m: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    da, db = dims
    if m.shape != (da * db, da * db):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    return m.reshape(da, db, da, db)


def partial_trace(m: np.ndarray, dims: tuple[int, int], traced: str = "B") -> np.ndarray:
    """Trace out one subsystem of an operator on H_A (x) H_B."""
    m4 = _as_four_index(m, dims)
    if traced == "B":
        return np.einsum("ikjk->ij", m4)
    if traced == "A":
        return np.einsum("ikil->kl", m4)
    raise ValueError(f"traced must be 'A' or 'B', got {traced!r}")


def partial_transpose(m: np.ndarray, dims: tuple[int, int], subsystem: str = "B") -> np.ndarray:
    """Transpose one tensor factor of an operator on H_A (x) H_B."""
    m4 = _as_four_index(m, dims)
    if subsystem == "B":
        out = m4.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        out = m4.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    da, db = dims
    return out.reshape(da * db, da * db)


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product Tr(a^dag b)."""
    return complex(np.sum(a.conj() * b))
