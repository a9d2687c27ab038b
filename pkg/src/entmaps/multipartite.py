"""Three-qubit bipartitions, the cut identifier and its induced map.

A bipartition merges one or two qubits into a single side; the merged side
is treated as one four-dimensional system, so its local "pure states" are
arbitrary vectors of that space.  The full-correlation map keeps exactly
the tensor entries with every index nonzero:

    G[rho] = (1/8) sum_{i,j,k >= 1} T_ijk s_i (x) s_j (x) s_k.

Verdicts derived from a cut certify bipartite entanglement across that cut,
never genuine multipartite entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bases import triple_product_stack, tripartite_correlation_tensor
from .identifiers import DETECTION_TOL, IdentifierResult, product_max
from .linalg import hs_inner, negativity_verdict
from .positive_maps import (
    MapConditionResult,
    induced_map_operator,
    ppt_check,
    witness_from_image,
)

__all__ = [
    "Bipartition",
    "bipartition_flatten",
    "tripartite_metric_image",
    "metric_identifier_bipartition",
    "map_condition_bipartition",
    "ppt_check_bipartition",
    "threshold_scan",
    "random_biproduct_mixture",
]

_CUTS = {"12:3", "13:2", "23:1", "1:23", "2:13", "3:12"}


@dataclass(frozen=True)
class Bipartition:
    """An ordered split of qubits (1, 2, 3) into two groups."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    @classmethod
    def parse(cls, text: str) -> "Bipartition":
        head, sep, tail = text.replace(",", "").partition(":")
        if not sep:
            raise ValueError(f"cut {text!r} needs the form '12:3'")
        try:
            left = tuple(int(c) for c in head)
            right = tuple(int(c) for c in tail)
        except ValueError:
            raise ValueError(f"cut {text!r} contains a non-digit label") from None
        if sorted(left + right) != [1, 2, 3] or not left or not right:
            raise ValueError(f"cut {text!r} must split the labels 1, 2, 3 into two groups")
        return cls(left=left, right=right)

    @property
    def order(self) -> tuple[int, ...]:
        return self.left + self.right

    @property
    def dims(self) -> tuple[int, int]:
        return 2 ** len(self.left), 2 ** len(self.right)

    def __str__(self) -> str:
        return "".join(map(str, self.left)) + ":" + "".join(map(str, self.right))


def _as_bipartition(cut: "Bipartition | str") -> Bipartition:
    return cut if isinstance(cut, Bipartition) else Bipartition.parse(cut)


def bipartition_flatten(rho: np.ndarray, cut: "Bipartition | str") -> np.ndarray:
    """Reorder qubits so the cut groups are contiguous, as an 8x8 matrix.

    The result represents the same operator with subsystem A spanning the
    left group, e.g. cut 13:2 sends |abc> to position |acb>.
    """
    cut = _as_bipartition(cut)
    if rho.shape != (8, 8):
        raise ValueError(f"expected an 8x8 operator, got shape {rho.shape}")
    perm = tuple(q - 1 for q in cut.order)
    m = rho.reshape(2, 2, 2, 2, 2, 2)
    m = m.transpose(perm + tuple(p + 3 for p in perm))
    return m.reshape(8, 8)


def tripartite_metric_image(rho: np.ndarray) -> np.ndarray:
    """(1/8) sum over all-nonzero-index tensor entries, as an 8x8 matrix."""
    t = tripartite_correlation_tensor(rho)
    mask = np.zeros_like(t)
    mask[1:, 1:, 1:] = t[1:, 1:, 1:]
    return np.einsum("n,nab->ab", mask.ravel(), triple_product_stack()) / 8.0


def metric_identifier_bipartition(
    rho: np.ndarray,
    cut: "Bipartition | str" = "12:3",
    restarts: int = 20,
    tol: float = 1e-10,
    max_iter: int = 500,
    seed: int = 0,
) -> IdentifierResult:
    """Full-correlation identifier across one cut of a three-qubit state.

    The image and self overlap do not depend on the cut; only the product
    maximization feels the merged side.
    """
    cut = _as_bipartition(cut)
    flat = bipartition_flatten(rho, cut)
    image = tripartite_metric_image(flat)
    self_overlap = float(hs_inner(flat, image).real)
    value, x, y = product_max(image, cut.dims, restarts=restarts, tol=tol,
                              max_iter=max_iter, seed=seed)
    omega = value - self_overlap
    return IdentifierResult(
        omega_tilde0=value,
        self_overlap=self_overlap,
        omega=omega,
        detected=bool(omega < -DETECTION_TOL),
        maximizer=(x, y),
    )


def map_condition_bipartition(
    generator: np.ndarray,
    target: np.ndarray,
    cut: "Bipartition | str" = "12:3",
    restarts: int = 20,
    tol: float = 1e-10,
    max_iter: int = 500,
    seed: int = 0,
) -> MapConditionResult:
    """Induced-map test across a cut, with the full-correlation witness."""
    cut = _as_bipartition(cut)
    gen_flat = bipartition_flatten(generator, cut)
    image = tripartite_metric_image(gen_flat)
    w = witness_from_image(image, cut.dims, restarts=restarts, tol=tol,
                           max_iter=max_iter, seed=seed, source=f"metric@cut{cut}")
    m = induced_map_operator(w, bipartition_flatten(target, cut))
    lo, detected = negativity_verdict(m)
    return MapConditionResult(min_eigenvalue=lo, detected=detected,
                              omega_tilde0=w.omega_tilde0)


def ppt_check_bipartition(rho: np.ndarray, cut: "Bipartition | str") -> tuple[float, bool]:
    """Partial-transpose check across one cut of a three-qubit state."""
    cut = _as_bipartition(cut)
    return ppt_check(bipartition_flatten(rho, cut), cut.dims)


def threshold_scan(
    indicator: Callable[[float], bool],
    v_lo: float,
    v_hi: float,
    tol: float = 1e-4,
    presamples: int = 16,
) -> float:
    """Detection threshold of a monotone boolean indicator on [v_lo, v_hi].

    The indicator is sampled at `presamples` points first; a non-monotone
    pattern or a missing crossing raises ValueError.  Bisection then shrinks
    the bracketing interval below tol and the midpoint is returned.
    """
    if not v_lo < v_hi:
        raise ValueError(f"need v_lo < v_hi, got [{v_lo}, {v_hi}]")
    vs = np.linspace(v_lo, v_hi, presamples)
    flags = [bool(indicator(float(v))) for v in vs]
    if flags != sorted(flags):
        pattern = ", ".join(f"{v:.4f}:{int(f)}" for v, f in zip(vs, flags))
        raise ValueError(f"indicator is not monotone on [{v_lo}, {v_hi}]: {pattern}")
    if flags[0] or not flags[-1]:
        pattern = ", ".join(f"{v:.4f}:{int(f)}" for v, f in zip(vs, flags))
        raise ValueError(f"indicator has no crossing on [{v_lo}, {v_hi}]: {pattern}")
    first_true = flags.index(True)
    lo, hi = float(vs[first_true - 1]), float(vs[first_true])
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if indicator(mid):
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2.0


def random_biproduct_mixture(
    cut: "Bipartition | str" = "12:3",
    seed: int = 0,
    max_terms: int = 4,
) -> np.ndarray:
    """Mixture of pure (merged side) x (single qubit) states across one cut.

    The merged side may be internally entangled, so these states carry no
    entanglement across the cut and must never be flagged there.  The matrix
    is returned in the original 1, 2, 3 qubit order.
    """
    cut = _as_bipartition(cut)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed)))
    k = int(rng.integers(1, max_terms + 1))
    weights = rng.dirichlet(np.ones(k))
    da, db = cut.dims
    flat = np.zeros((8, 8), dtype=complex)
    for w in weights:
        a = rng.standard_normal(da) + 1j * rng.standard_normal(da)
        b = rng.standard_normal(db) + 1j * rng.standard_normal(db)
        v = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
        flat += w * np.outer(v, v.conj())
    # undo the cut reordering
    perm = tuple(q - 1 for q in cut.order)
    inv = tuple(int(i) for i in np.argsort(perm))
    m = flat.reshape(2, 2, 2, 2, 2, 2)
    m = m.transpose(inv + tuple(i + 3 for i in inv))
    return m.reshape(8, 8)
