"""Entanglement identifiers built from maps acting on correlation tensors.

An identifier is omega = omega_tilde0 - Tr(rho G[rho]), where G[rho] is the
image of rho under a correlation-tensor map and omega_tilde0 is the maximum
of Tr(sigma G[rho]) over pure product states sigma.  A strictly negative
omega certifies entanglement: on product states the self overlap never
exceeds the product maximum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .bases import correlation_tensor, gell_mann_basis, pair_product_stack
from .linalg import hs_inner, require_hermitian

__all__ = [
    "DETECTION_TOL",
    "SIGN_ZERO_TOL",
    "GMap",
    "standard_metric",
    "elementwise_map",
    "sign_map",
    "pptgen_map",
    "apply_gmap",
    "IdentifierResult",
    "identifier_value",
    "product_max",
    "product_max_stack",
    "product_max_oracle",
    "SignReport",
    "sign_criterion",
    "bell_diagonal_boundary",
    "weyl_condition",
    "tensor_cross_norm",
    "product_max_bloch_bound",
]

# omega below -DETECTION_TOL counts as a detection.
DETECTION_TOL = 1e-9

# Tensor entries within SIGN_ZERO_TOL of zero are treated as exact zeros by
# the sign map, so rounding noise cannot inject spurious +-1 correlations.
SIGN_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class GMap:
    """A Hermiticity-preserving map defined on correlation tensors.

    variant "linear":      T'_kl = sum_ij tensor[i, j, k, l] T_ij
    variant "elementwise":  as linear, applied to func(T) entry by entry
    variant "sign":         as linear with the standard tensor, applied to sgn(T)
    variant "pptgen":       constant image -(1/4) sum_{m>=1} s_m (x) s_m (two qubits)
    """

    variant: str
    dims: tuple[int, int]
    tensor: np.ndarray | None = None
    func: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = ""

    def __post_init__(self):
        if self.variant not in ("linear", "elementwise", "sign", "pptgen"):
            raise ValueError(f"unknown map variant {self.variant!r}")
        if self.variant in ("linear", "elementwise") and self.tensor is None:
            raise ValueError(f"variant {self.variant!r} needs a coefficient tensor")
        if self.variant == "elementwise" and self.func is None:
            raise ValueError("elementwise maps need a scalar function")
        if self.variant == "pptgen" and self.dims != (2, 2):
            raise ValueError("the transposition generator is defined for two qubits only")


def _standard_tensor(da: int, db: int) -> np.ndarray:
    g = np.zeros((da * da, db * db, da * da, db * db))
    for i in range(1, da * da):
        for j in range(1, db * db):
            g[i, j, i, j] = 1.0
    return g


def standard_metric(da: int = 2, db: int = 2) -> GMap:
    """The map keeping every nonzero-index tensor entry unchanged."""
    return GMap(variant="linear", dims=(da, db), tensor=_standard_tensor(da, db),
                name="metric")


def elementwise_map(
    func: Callable[[np.ndarray], np.ndarray],
    da: int = 2,
    db: int = 2,
    tensor: np.ndarray | None = None,
    name: str = "elementwise",
) -> GMap:
    """Apply func to the correlation tensor entry by entry, then contract."""
    if tensor is None:
        tensor = _standard_tensor(da, db)
    return GMap(variant="elementwise", dims=(da, db), tensor=tensor, func=func, name=name)


def sign_map(da: int = 2, db: int = 2) -> GMap:
    return GMap(variant="sign", dims=(da, db), tensor=_standard_tensor(da, db), name="sign")


def pptgen_map() -> GMap:
    return GMap(variant="pptgen", dims=(2, 2), name="pptgen")


def _sgn(t: np.ndarray) -> np.ndarray:
    out = np.sign(t)
    out[np.abs(t) <= SIGN_ZERO_TOL] = 0.0
    return out


@lru_cache(maxsize=None)
def _pptgen_image() -> np.ndarray:
    stack = pair_product_stack(2, 2).reshape(4, 4, 4, 4)
    img = -(stack[1, 1] + stack[2, 2] + stack[3, 3]) / 4.0
    img.flags.writeable = False
    return img


def apply_gmap(g: GMap, rho: np.ndarray) -> np.ndarray:
    """Image of rho under the map, as a Hermitian matrix on the same space."""
    da, db = g.dims
    if rho.shape != (da * db, da * db):
        raise ValueError(f"state shape {rho.shape} does not match map dims {g.dims}")
    if g.variant == "pptgen":
        return _pptgen_image().copy()
    t = correlation_tensor(rho, dims=g.dims)
    if g.variant == "elementwise":
        t = np.asarray(g.func(t), dtype=float)
    elif g.variant == "sign":
        t = _sgn(t)
    t_out = np.einsum("ijkl,ij->kl", g.tensor, t)
    stack = pair_product_stack(da, db)
    return np.einsum("n,nab->ab", t_out.ravel(), stack) / 4.0


# ---------------------------------------------------------------------------
# Product-state maximization


def _top_eig_stack(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Largest eigenvalue and eigenvector for a stack of Hermitian matrices.

    2x2 blocks use the closed form, picking whichever eigenvector expression
    avoids cancellation; larger blocks go through eigh.
    """
    if h.shape[-1] == 2:
        a = h[..., 0, 0].real
        c = h[..., 1, 1].real
        b = 0.5 * (h[..., 0, 1] + h[..., 1, 0].conj())
        half = 0.5 * (a - c)
        b2 = (b * b.conj()).real
        s = np.sqrt(half * half + b2)
        lam = 0.5 * (a + c) + s
        p = half + s
        q = s - half
        use_p = p >= q
        v = np.empty(h.shape[:-1], dtype=complex)
        v[..., 0] = np.where(use_p, p, b)
        v[..., 1] = np.where(use_p, b.conj(), q)
        n2 = np.where(use_p, p * p + b2, b2 + q * q)
        flat = n2 < 1e-300
        if flat.any():
            n2[flat] = 1.0
        v /= np.sqrt(n2)[..., None]
        if flat.any():
            v[flat] = np.array([1.0, 0.0])
        return lam, v
    h = (h + h.conj().swapaxes(-1, -2)) * 0.5
    w, v = np.linalg.eigh(h)
    return w[..., -1], v[..., :, -1]


def _alternating_ascent(
    m4: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    tol: float,
    max_iter: int,
    collect: bool = False,
):
    """Two-sided ascent for a stack of problems, every run in lockstep.

    m4 has shape (n, da, db, da, db); x and y hold the start vectors as
    (n, r, da) and (n, r, db) unit rows and are updated in place.  Fixing one
    side turns the other into a top-eigenvector problem, so each sweep is
    nondecreasing per run; a point stays active until all of its runs move
    less than tol in one sweep.  Returns the objective values (n, r) and,
    when collect is set, per-sweep value snapshots.
    """
    n, r, da = x.shape
    db = y.shape[2]
    # A(y)[i, j] = sum_kl conj(y_k) m4[i, k, j, l] y_l and its B-side mirror,
    # both as one batched matmul against flattened rank-one blocks.
    m_at = np.ascontiguousarray(m4.transpose(0, 2, 4, 1, 3).reshape(n, db * db, da * da))
    m_bt = np.ascontiguousarray(m4.transpose(0, 1, 3, 2, 4).reshape(n, da * da, db * db))

    val = np.full((n, r), -np.inf)
    snaps: list[np.ndarray] | None = [] if collect else None
    idx = np.arange(n)
    xa, ya, va = x, y, val
    mat_a, mat_b = m_at, m_bt
    for _ in range(max_iter):
        na = xa.shape[0]
        yop = (ya.conj()[:, :, :, None] * ya[:, :, None, :]).reshape(na, r, db * db)
        am = (yop @ mat_a).reshape(na, r, da, da)
        _, xa = _top_eig_stack(am)
        xop = (xa.conj()[:, :, :, None] * xa[:, :, None, :]).reshape(na, r, da * da)
        bm = (xop @ mat_b).reshape(na, r, db, db)
        lam, ya = _top_eig_stack(bm)
        if np.any(lam < va - 1e-11 * (1.0 + np.abs(lam))):
            raise RuntimeError("alternating ascent lost monotonicity; input is likely corrupt")
        moving = np.abs(lam - va) >= tol
        va = lam
        x[idx], y[idx], val[idx] = xa, ya, lam
        if collect:
            snaps.append(val.copy())
        still = moving.any(axis=1)
        if not still.all():
            keep = np.flatnonzero(still)
            if keep.size == 0:
                break
            idx = idx[keep]
            xa, ya, va = xa[keep], ya[keep], va[keep]
            mat_a, mat_b = mat_a[keep], mat_b[keep]
    return val, snaps


def _seeded_starts(
    ms: np.ndarray,
    dims: tuple[int, int],
    restarts: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Random start vectors plus two deterministic starts per stack entry.

    Run 0 of every entry is the product split (top singular pair) of the top
    eigenvector of its matrix.  Run 1 aligns each side with the top singular
    pair of the cross sector of the matrix's correlation tensor, the maximizer
    of the relaxed bilinear problem pulled back to pure states.  The remaining
    runs are Gaussian draws from a single generator seeded by the master seed.
    """
    n = ms.shape[0]
    da, db = dims
    r = restarts + 1
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed)))
    x = rng.standard_normal((n, r, da)) + 1j * rng.standard_normal((n, r, da))
    y = rng.standard_normal((n, r, db)) + 1j * rng.standard_normal((n, r, db))
    sym = (ms + ms.conj().swapaxes(-1, -2)) * 0.5
    _, vecs = np.linalg.eigh(sym)
    u, _, vh = np.linalg.svd(vecs[..., :, -1].reshape(n, da, db))
    x[:, 0] = u[..., :, 0]
    y[:, 0] = vh[..., 0, :].conj()
    if r >= 2:
        ga = gell_mann_basis(da).elements[1:]
        gb = gell_mann_basis(db).elements[1:]
        m4 = sym.reshape(n, da, db, da, db)
        cross = np.einsum("kac,lbd,ncdab->nkl", ga, gb, m4).real
        cu, _, cvh = np.linalg.svd(cross)
        ha = np.einsum("nk,kac->nac", cu[:, :, 0], ga)
        hb = np.einsum("nl,lbd->nbd", cvh[:, 0, :], gb)
        _, x[:, 1] = _top_eig_stack(ha)
        _, y[:, 1] = _top_eig_stack(hb)
    x /= np.linalg.norm(x, axis=2, keepdims=True)
    y /= np.linalg.norm(y, axis=2, keepdims=True)
    return x, y


def product_max(
    m: np.ndarray,
    dims: tuple[int, int],
    restarts: int = 20,
    tol: float = 1e-10,
    max_iter: int = 500,
    seed: int = 0,
    return_history: bool = False,
):
    """Maximum of <x (x) y| m |x (x) y> over unit vectors by alternating ascent.

    Returns (value, x, y) for the best run; with return_history also the
    per-sweep objective snapshots, one (restarts + 1,) array per sweep.
    """
    da, db = dims
    if m.shape != (da * db, da * db):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    require_hermitian(m)
    if restarts < 1:
        raise ValueError(f"need at least one restart, got {restarts}")
    ms = m.reshape(1, da * db, da * db)
    x, y = _seeded_starts(ms, dims, restarts, seed)
    val, snaps = _alternating_ascent(
        ms.reshape(1, da, db, da, db), x, y, tol, max_iter, collect=return_history
    )
    best = int(np.argmax(val[0]))
    out = float(val[0, best]), x[0, best].copy(), y[0, best].copy()
    return out + ([s[0] for s in snaps],) if return_history else out


def product_max_stack(
    ms: np.ndarray,
    dims: tuple[int, int],
    restarts: int = 20,
    tol: float = 1e-10,
    max_iter: int = 500,
    seed: int = 0,
) -> np.ndarray:
    """product_max values for a whole stack of Hermitian matrices at once.

    The stack shares one master seed; results are deterministic for a fixed
    (stack shape, dims, restarts, seed) and independent of how the lockstep
    iteration interleaves the entries.
    """
    da, db = dims
    if ms.ndim != 3 or ms.shape[1:] != (da * db, da * db):
        raise ValueError(f"stack shape {ms.shape} does not match dims {dims}")
    if restarts < 1:
        raise ValueError(f"need at least one restart, got {restarts}")
    n = ms.shape[0]
    if n == 0:
        return np.zeros(0)
    diffs = np.abs(ms - ms.conj().swapaxes(-1, -2)).max(axis=(1, 2))
    scales = np.maximum(1.0, np.abs(ms).max(axis=(1, 2)))
    if np.any(diffs > 1e-12 * scales):
        raise ValueError("stack contains a non-Hermitian matrix")
    x, y = _seeded_starts(ms, dims, restarts, seed)
    val, _ = _alternating_ascent(
        ms.reshape(n, da, db, da, db), x, y, tol, max_iter
    )
    return val.max(axis=1)


# ---------------------------------------------------------------------------
# Independent oracle: grid / sampling stage plus derivative-free refinement.
# No eigensolver and no alternating structure is used here on purpose.


def _kets_from_angles(angles: np.ndarray, d: int) -> np.ndarray:
    a = np.atleast_2d(angles)
    if d == 2:
        th, ph = a[:, 0], a[:, 1]
        return np.stack([np.cos(th / 2), np.sin(th / 2) * np.exp(1j * ph)], axis=1)
    if d == 3:
        t1, t2, p1, p2 = a[:, 0], a[:, 1], a[:, 2], a[:, 3]
        s1 = np.sin(t1)
        return np.stack(
            [
                np.cos(t1),
                s1 * np.cos(t2) * np.exp(1j * p1),
                s1 * np.sin(t2) * np.exp(1j * p2),
            ],
            axis=1,
        )
    raise ValueError(f"angle parametrization covers d in (2, 3), got {d}")


def _angles_from_ket(x: np.ndarray) -> np.ndarray:
    d = x.shape[0]
    ref = np.angle(x[np.argmax(np.abs(x))])
    x = x * np.exp(-1j * ref)
    if d == 2:
        th = 2.0 * np.arctan2(np.abs(x[1]), np.abs(x[0]))
        ph = float(np.angle(x[1]) - np.angle(x[0]))
        return np.array([th, ph])
    t1 = np.arccos(np.clip(np.abs(x[0]), 0.0, 1.0))
    t2 = np.arctan2(np.abs(x[2]), np.abs(x[1]))
    p1 = float(np.angle(x[1]) - np.angle(x[0]))
    p2 = float(np.angle(x[2]) - np.angle(x[0]))
    return np.array([t1, t2, p1, p2])


def _n_angles(d: int) -> int:
    return 2 if d == 2 else 4


def product_max_oracle(
    m: np.ndarray,
    dims: tuple[int, int],
    grid: int = 50,
    samples: int = 200_000,
    seed: int = 0,
    refine_starts: int = 12,
) -> float:
    """Slow reference value for product_max, built from direct evaluation only.

    Two qubits get an exhaustive cross grid of Bloch angles; any qutrit side
    falls back to matched random product pairs.  The best candidates are then
    polished by a deterministic coordinate pattern search on the angles.
    """
    da, db = dims
    if da not in (2, 3) or db not in (2, 3):
        raise ValueError(f"oracle supports local dimensions 2 and 3, got {dims}")
    if m.shape != (da * db, da * db):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    require_hermitian(m)
    m4 = m.reshape(da, db, da, db)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed)))

    def value_single(x: np.ndarray, y: np.ndarray) -> float:
        ax = np.einsum("i,ikjl,j->kl", x.conj(), m4, x)
        return float(np.einsum("k,kl,l->", y.conj(), ax, y).real)

    candidates: list[tuple[float, np.ndarray, np.ndarray]] = []
    if dims == (2, 2):
        th = np.linspace(0.0, np.pi, grid)
        ph = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
        ang = np.stack(np.meshgrid(th, ph, indexing="ij"), axis=-1).reshape(-1, 2)
        kets = _kets_from_angles(ang, 2)
        bx = np.einsum("xi,ikjl,xj->xkl", kets.conj(), m4, kets)
        n = kets.shape[0]
        vals = np.empty((n, n))
        step = 512
        for lo in range(0, n, step):
            hi = min(lo + step, n)
            vals[:, lo:hi] = np.einsum(
                "yk,xkl,yl->xy", kets[lo:hi].conj(), bx, kets[lo:hi]
            ).real
        flat = np.argpartition(vals.ravel(), -refine_starts)[-refine_starts:]
        for f in flat[np.argsort(vals.ravel()[flat])][::-1]:
            xi, yi = np.unravel_index(f, vals.shape)
            candidates.append((float(vals[xi, yi]), kets[xi], kets[yi]))
    else:
        xs = rng.standard_normal((samples, da)) + 1j * rng.standard_normal((samples, da))
        ys = rng.standard_normal((samples, db)) + 1j * rng.standard_normal((samples, db))
        xs /= np.linalg.norm(xs, axis=1, keepdims=True)
        ys /= np.linalg.norm(ys, axis=1, keepdims=True)
        vals = np.einsum("ni,nk,ikjl,nj,nl->n", xs.conj(), ys.conj(), m4, xs, ys).real
        top = np.argpartition(vals, -refine_starts)[-refine_starts:]
        for f in top[np.argsort(vals[top])][::-1]:
            candidates.append((float(vals[f]), xs[f], ys[f]))

    na, nb = _n_angles(da), _n_angles(db)

    def value_angles(ang: np.ndarray) -> float:
        x = _kets_from_angles(ang[:na], da)[0]
        y = _kets_from_angles(ang[na:], db)[0]
        return value_single(x, y)

    best = max(c[0] for c in candidates)
    for _, x0, y0 in candidates:
        ang = np.concatenate([_angles_from_ket(x0), _angles_from_ket(y0)])
        cur = value_angles(ang)
        h = 0.1
        while h > 1e-7:
            moved = False
            for i in range(na + nb):
                for s in (h, -h):
                    trial = ang.copy()
                    trial[i] += s
                    v = value_angles(trial)
                    if v > cur:
                        cur, ang, moved = v, trial, True
            if not moved:
                h /= 2.0
        best = max(best, cur)
    return best


# ---------------------------------------------------------------------------
# Identifier and sign criterion


@dataclass(frozen=True)
class IdentifierResult:
    omega_tilde0: float
    self_overlap: float
    omega: float
    detected: bool
    maximizer: tuple[np.ndarray, np.ndarray] = field(repr=False)


def identifier_value(
    g: GMap,
    rho: np.ndarray,
    restarts: int = 20,
    tol: float = 1e-10,
    max_iter: int = 500,
    seed: int = 0,
) -> IdentifierResult:
    """Evaluate omega = omega_tilde0 - Tr(rho G[rho]) for one state."""
    image = apply_gmap(g, rho)
    self_overlap = float(hs_inner(rho, image).real)
    value, x, y = product_max(image, g.dims, restarts=restarts, tol=tol,
                              max_iter=max_iter, seed=seed)
    omega = value - self_overlap
    return IdentifierResult(
        omega_tilde0=value,
        self_overlap=self_overlap,
        omega=omega,
        detected=bool(omega < -DETECTION_TOL),
        maximizer=(x, y),
    )


@dataclass(frozen=True)
class SignReport:
    lhs: float
    rhs: float
    identifier: IdentifierResult

    @property
    def detected(self) -> bool:
        return self.identifier.detected


def sign_criterion(
    rho: np.ndarray,
    dims: tuple[int, int] = (2, 2),
    restarts: int = 20,
    tol: float = 1e-10,
    seed: int = 0,
) -> SignReport:
    """Compare the product maximum of the sign image with sum_ij |T_ij|.

    Entanglement is flagged exactly when the identifier of the sign map is
    negative, i.e. the absolute-sum of nonzero-index correlations exceeds
    what any product state can reach on the sign image.
    """
    g = sign_map(*dims)
    res = identifier_value(g, rho, restarts=restarts, tol=tol, seed=seed)
    t = correlation_tensor(rho, dims=dims)
    rhs = float(np.sum(np.abs(t[1:, 1:])))
    return SignReport(lhs=4.0 * res.omega_tilde0, rhs=rhs, identifier=res)


def bell_diagonal_boundary(a: float, b: float) -> float:
    """Sign of a + b + 2ab - 3(a^2 + b^2) separates detected from undetected
    mixtures a |phi+><phi+| + b |phi-><phi-| + white noise (negative inside
    the detected region of the standard-metric identifier)."""
    return a + b + 2.0 * a * b - 3.0 * (a * a + b * b)


def weyl_condition(p: float, q: float, r: float) -> float:
    """p^2 + q^2 + r^2 - max(|p|, |q|, |r|); positive where the standard-metric
    identifier detects a state with diagonal correlations (p, q, r)."""
    return p * p + q * q + r * r - max(abs(p), abs(q), abs(r))


def tensor_cross_norm(g: GMap, rho: np.ndarray) -> float:
    """Largest singular value of the nonzero-index block of the image tensor.

    For two-qubit maps whose image carries no zero-index components this
    equals 4 * omega_tilde0, since <x (x) y| s_k (x) s_l |x (x) y> is the
    outer product of the two Bloch vectors.  Used as an optimizer cross-check.
    """
    if g.dims != (2, 2):
        raise ValueError("the Bloch-vector form is defined for two qubits")
    image_t = correlation_tensor(apply_gmap(g, rho), dims=(2, 2))
    if float(np.max(np.abs(image_t[0, :]))) > 1e-12 or float(np.max(np.abs(image_t[:, 0]))) > 1e-12:
        raise ValueError("image tensor has zero-index components; the cross norm does not apply")
    return float(np.linalg.svd(image_t[1:, 1:], compute_uv=False)[0])


def product_max_bloch_bound(m: np.ndarray, dims: tuple[int, int]) -> float:
    """Closed-form upper bound on product_max for cross-component images.

    Relaxing the Bloch vectors of the two pure factors to independent vectors
    of squared norm d/2 turns the product maximization into a singular value
    problem: the bound is sqrt(dA dB)/8 times the top singular value of the
    image's nonzero-index tensor block.  A pure state's Bloch vector has
    squared norm 2(d-1)/d <= d/2 with equality only at d = 2, so the bound is
    tight for a pair of qubits and strictly relaxed above that.

    Only meaningful when the image has no zero-index tensor components (the
    fixed identity parts would not be bounded by the relaxation); such
    components raise ValueError.
    """
    da, db = dims
    t = correlation_tensor(m, dims=dims)
    if float(np.max(np.abs(t[0, :]))) > 1e-12 or float(np.max(np.abs(t[:, 0]))) > 1e-12:
        raise ValueError("image tensor has zero-index components; the bound does not apply")
    top = float(np.linalg.svd(t[1:, 1:], compute_uv=False)[0])
    return np.sqrt(da * db) / 8.0 * top
