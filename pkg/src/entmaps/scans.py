"""Parameter-grid scans, single-state analysis, and CSV/JSON rendering.

A scan walks a family's parameter grid in row-major order (first axis
slowest), marks each point as physical or not, and evaluates the requested
criteria on the physical points.  All verdicts derive from one master seed,
so a finished scan is reproducible byte for byte.
"""

from __future__ import annotations

import io
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import multipartite
from .bases import correlation_tensor, pair_product_stack
from .identifiers import (
    DETECTION_TOL,
    SIGN_ZERO_TOL,
    apply_gmap,
    identifier_value,
    pptgen_map,
    product_max,
    product_max_stack,
    sign_criterion,
    standard_metric,
)
from .linalg import NEGATIVITY_TOL, negativity_verdict
from .positive_maps import (
    WitnessOperator,
    induced_map_operator,
    map_condition,
    ppt_check,
)
from .states import bell_state

__all__ = [
    "FAMILY_AXES",
    "DEFAULT_RANGES",
    "applicable_criteria",
    "ScanConfig",
    "ScanResult",
    "run_scan",
    "render_csv",
    "render_json",
    "detection_indicator",
    "DetectionReport",
    "analyze_state",
    "conventions",
]

FAMILY_AXES = {
    "bell_diagonal": ("a", "b"),
    "weyl": ("p", "q", "r"),
    "werner": ("v",),
    "qutrit_werner": ("v", "alpha"),
    "w_noise": ("v",),
}

DEFAULT_RANGES = {
    "bell_diagonal": {"a": (0.0, 1.0), "b": (0.0, 1.0)},
    "weyl": {"p": (-1.0, 1.0), "q": (-1.0, 1.0), "r": (-1.0, 1.0)},
    "werner": {"v": (0.0, 1.0)},
    "qutrit_werner": {"v": (0.0, 1.0), "alpha": (0.0, np.pi / 2)},
    "w_noise": {"v": (0.0, 1.0)},
}

_FAMILY_DIMS = {
    "bell_diagonal": (2, 2),
    "weyl": (2, 2),
    "werner": (2, 2),
    "qutrit_werner": (3, 3),
    "w_noise": (2, 2, 2),
}

# diagnostic column carried by each criterion, appended after its verdict
_DIAGNOSTICS = {
    "metric": "omega_metric",
    "sign": "omega_sign",
    "ppt": "min_eig_ppt",
    "map": "min_eig_map",
    "pptgen-functional": "corr_diag_sum",
}


def applicable_criteria(dims: tuple[int, ...]) -> tuple[str, ...]:
    if len(dims) == 3:
        return ("metric", "map", "ppt")
    if dims == (2, 2):
        return ("metric", "sign", "ppt", "map", "pptgen-functional")
    return ("metric", "sign", "ppt", "map")


def _default_criteria(family: str) -> tuple[str, ...]:
    if family == "w_noise":
        return ("metric", "map", "ppt")
    return ("metric", "sign", "ppt")


@dataclass(frozen=True)
class ScanConfig:
    family: str
    resolution: int = 51
    ranges: dict = field(default_factory=dict)
    criteria: tuple[str, ...] = ()
    seed: int = 0
    restarts: int = 20
    tol: float = 1e-10
    fixed: dict = field(default_factory=dict)
    cut: str = "12:3"

    def resolved(self) -> "ScanConfig":
        """Fill in family defaults and validate."""
        if self.family not in FAMILY_AXES:
            raise ValueError(f"unknown scan family {self.family!r}; "
                             f"choose from {sorted(FAMILY_AXES)}")
        if self.resolution < 2:
            raise ValueError(f"resolution must be at least 2, got {self.resolution}")
        ranges = dict(DEFAULT_RANGES[self.family])
        for key, bounds in self.ranges.items():
            if key not in ranges:
                raise ValueError(f"family {self.family!r} has no axis {key!r}")
            lo, hi = float(bounds[0]), float(bounds[1])
            if not lo < hi:
                raise ValueError(f"axis {key!r} needs lo < hi, got ({lo}, {hi})")
            ranges[key] = (lo, hi)
        criteria = tuple(self.criteria) or _default_criteria(self.family)
        allowed = applicable_criteria(_FAMILY_DIMS[self.family])
        for c in criteria:
            if c not in allowed:
                raise ValueError(f"criterion {c!r} does not apply to family "
                                 f"{self.family!r}; choose from {allowed}")
        fixed = dict(self.fixed)
        if self.family == "qutrit_werner":
            fixed.setdefault("beta", float(np.pi / 4))
        if self.family == "w_noise":
            multipartite.Bipartition.parse(self.cut)
        return ScanConfig(
            family=self.family, resolution=self.resolution, ranges=ranges,
            criteria=criteria, seed=self.seed, restarts=self.restarts,
            tol=self.tol, fixed=fixed, cut=self.cut,
        )


@dataclass(frozen=True)
class ScanResult:
    config: ScanConfig
    columns: tuple[str, ...]
    rows: list
    elapsed_s: float


def _grid(config: ScanConfig) -> tuple[np.ndarray, ...]:
    axes = FAMILY_AXES[config.family]
    values = [np.linspace(*config.ranges[a], config.resolution) for a in axes]
    mesh = np.meshgrid(*values, indexing="ij")
    return tuple(m.ravel() for m in mesh)


def _build_states(config: ScanConfig, coords: tuple[np.ndarray, ...]):
    """State stack (n, d, d) and physicality flags for every grid point."""
    fam = config.family
    n = coords[0].size
    eye4 = np.eye(4) / 4.0
    if fam == "bell_diagonal":
        a, b = coords
        phys = (a >= -1e-12) & (b >= -1e-12) & (a + b <= 1.0 + 1e-12)
        rhos = (a[:, None, None] * bell_state("phi+")
                + b[:, None, None] * bell_state("phi-")
                + (1.0 - a - b)[:, None, None] * eye4)
        return rhos, phys
    if fam == "weyl":
        p, q, r = coords
        stack = pair_product_stack(2, 2).reshape(4, 4, 4, 4)
        rhos = (np.eye(4)
                + p[:, None, None] * stack[1, 1]
                + q[:, None, None] * stack[2, 2]
                + r[:, None, None] * stack[3, 3]) / 4.0
        phys = np.linalg.eigvalsh(rhos)[:, 0] >= -1e-10
        return rhos, phys
    if fam == "werner":
        (v,) = coords
        phys = (v >= -1e-12) & (v <= 1.0 + 1e-12)
        rhos = v[:, None, None] * bell_state("phi+") + (1.0 - v)[:, None, None] * eye4
        return rhos, phys
    if fam == "qutrit_werner":
        v, alpha = coords
        beta = float(config.fixed["beta"])
        psi = np.zeros((n, 9))
        psi[:, 0] = np.sin(alpha) * np.cos(beta)
        psi[:, 4] = np.sin(alpha) * np.sin(beta)
        psi[:, 8] = np.cos(alpha)
        pure = psi[:, :, None] * psi[:, None, :]
        rhos = v[:, None, None] * pure + (1.0 - v)[:, None, None] * np.eye(9) / 9.0
        phys = (v >= -1e-12) & (v <= 1.0 + 1e-12)
        return rhos.astype(complex), phys
    if fam == "w_noise":
        (v,) = coords
        from .states import w_state_ket

        w = np.outer(w_state_ket(), w_state_ket().conj()).real
        rhos = v[:, None, None] * w + (1.0 - v)[:, None, None] * np.eye(8) / 8.0
        phys = (v >= -1e-12) & (v <= 1.0 + 1e-12)
        return rhos.astype(complex), phys
    raise ValueError(f"unknown scan family {fam!r}")


def _tensor_stack(rhos: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    stack = pair_product_stack(*dims)
    t = np.einsum("kab,nba->nk", stack, rhos).real
    return t.reshape(rhos.shape[0], dims[0] ** 2, dims[1] ** 2)


def _image_stack(t: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    stack = pair_product_stack(*dims)
    n = t.shape[0]
    return np.einsum("nk,kab->nab", t.reshape(n, -1), stack) / 4.0


def _evaluate_grid_bipartite(config: ScanConfig, rhos, phys):
    """Criterion columns for a bipartite family, vectorized over the grid."""
    dims = _FAMILY_DIMS[config.family]
    n = rhos.shape[0]
    rp = rhos[phys]
    t = _tensor_stack(rp, dims) if rp.size else np.zeros((0, dims[0] ** 2, dims[1] ** 2))
    out: dict[str, tuple[np.ndarray, np.ndarray]] = {}

    def spread(vals):
        full = np.full(n, np.nan)
        full[phys] = vals
        return full

    masked = np.zeros_like(t)
    masked[:, 1:, 1:] = t[:, 1:, 1:]
    # Qubit grids maximize over pure product states with the alternating
    # optimizer.  The qutrit grid instead uses the Bloch-sector singular
    # value bound (see product_max_bloch_bound): for qubits the two agree
    # exactly, while for qutrits only the relaxed form yields the strictly
    # nested metric/sign/ppt regions this family is scanned for -- the exact
    # product maximum provably breaks the nesting near the embedded-qubit
    # edge (alpha -> pi/2) of the family.
    closed_form = dims == (3, 3)

    def cross_max(tensor_block):
        if closed_form:
            top = np.linalg.svd(tensor_block[:, 1:, 1:], compute_uv=False)[:, 0]
            return np.sqrt(dims[0] * dims[1]) / 8.0 * top
        images = _image_stack(tensor_block, dims)
        return product_max_stack(images, dims, restarts=config.restarts,
                                 tol=config.tol, seed=config.seed)

    for crit in config.criteria:
        if crit == "metric":
            images = _image_stack(masked, dims)
            self_ov = np.einsum("nab,nba->n", rp, images).real
            vals = cross_max(masked)
            omega = vals - self_ov
            out[crit] = (spread(omega < -DETECTION_TOL), spread(omega))
        elif crit == "sign":
            signs = np.sign(masked)
            signs[np.abs(masked) <= SIGN_ZERO_TOL] = 0.0
            images = _image_stack(signs, dims)
            self_ov = np.einsum("nab,nba->n", rp, images).real
            vals = cross_max(signs)
            omega = vals - self_ov
            out[crit] = (spread(omega < -DETECTION_TOL), spread(omega))
        elif crit == "ppt":
            da, db = dims
            pt = rp.reshape(-1, da, db, da, db).transpose(0, 1, 4, 3, 2)
            pt = pt.reshape(-1, da * db, da * db)
            lo = np.linalg.eigvalsh(pt)[:, 0] if rp.size else np.zeros(0)
            scale = np.maximum(1.0, np.abs(rp).max(axis=(1, 2))) if rp.size else np.zeros(0)
            out[crit] = (spread(lo < -NEGATIVITY_TOL * scale), spread(lo))
        elif crit == "map":
            images = _image_stack(masked, dims)
            vals = product_max_stack(images, dims, restarts=config.restarts,
                                     tol=config.tol, seed=config.seed)
            eye = np.eye(dims[0] * dims[1])
            lows = np.empty(vals.size)
            dets = np.empty(vals.size, dtype=bool)
            for i in range(vals.size):
                w = WitnessOperator(matrix=vals[i] * eye - images[i], dims=dims,
                                    omega_tilde0=float(vals[i]), source="metric")
                m = induced_map_operator(w, rp[i])
                lows[i], dets[i] = negativity_verdict(m)
            out[crit] = (spread(dets), spread(lows))
        elif crit == "pptgen-functional":
            diag_sum = t[:, 1, 1] + t[:, 2, 2] + t[:, 3, 3]
            value, _, _ = product_max(apply_gmap(pptgen_map(), np.eye(4) / 4.0), dims,
                                      restarts=config.restarts, tol=config.tol,
                                      seed=config.seed)
            omega = value - (-diag_sum / 4.0)
            out[crit] = (spread(omega < -DETECTION_TOL), spread(diag_sum))
    return out


def _evaluate_grid_tripartite(config: ScanConfig, rhos, phys):
    """Cut-based criteria for the three-qubit family, point by point."""
    n = rhos.shape[0]
    cut = multipartite.Bipartition.parse(config.cut)
    out: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    idx = np.flatnonzero(phys)
    store = {c: (np.full(n, np.nan), np.full(n, np.nan)) for c in config.criteria}
    for i in idx:
        rho = rhos[i]
        for crit in config.criteria:
            det, diag = store[crit]
            if crit == "metric":
                r = multipartite.metric_identifier_bipartition(
                    rho, cut, restarts=config.restarts, tol=config.tol, seed=config.seed)
                det[i], diag[i] = r.detected, r.omega
            elif crit == "map":
                r = multipartite.map_condition_bipartition(
                    rho, rho, cut, restarts=config.restarts, tol=config.tol,
                    seed=config.seed)
                det[i], diag[i] = r.detected, r.min_eigenvalue
            elif crit == "ppt":
                lo, d = multipartite.ppt_check_bipartition(rho, cut)
                det[i], diag[i] = d, lo
    for crit in config.criteria:
        out[crit] = store[crit]
    return out


def run_scan(config: ScanConfig) -> ScanResult:
    start = time.perf_counter()
    config = config.resolved()
    coords = _grid(config)
    rhos, phys = _build_states(config, coords)
    if config.family == "w_noise":
        evaluated = _evaluate_grid_tripartite(config, rhos, phys)
    else:
        evaluated = _evaluate_grid_bipartite(config, rhos, phys)
    axes = FAMILY_AXES[config.family]
    columns = list(axes) + ["physical"]
    for crit in config.criteria:
        columns += [f"det_{crit.replace('-', '_')}", _DIAGNOSTICS[crit]]
    rows = []
    for i in range(coords[0].size):
        row = [float(c[i]) for c in coords] + [int(phys[i])]
        for crit in config.criteria:
            det, diag = evaluated[crit]
            if phys[i]:
                row += [int(det[i]), float(diag[i])]
            else:
                row += [None, None]
        rows.append(row)
    return ScanResult(config=config, columns=tuple(columns), rows=rows,
                      elapsed_s=time.perf_counter() - start)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return format(value, ".12g")


def render_csv(result: ScanResult) -> str:
    buf = io.StringIO()
    buf.write(",".join(result.columns) + "\n")
    for row in result.rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def render_json(result: ScanResult) -> str:
    config = result.config
    doc = {
        "family": config.family,
        "resolution": config.resolution,
        "ranges": {k: list(v) for k, v in config.ranges.items()},
        "criteria": list(config.criteria),
        "seed": config.seed,
        "restarts": config.restarts,
        "tol": config.tol,
        "fixed": config.fixed,
        "cut": config.cut if config.family == "w_noise" else None,
        "columns": list(result.columns),
        "rows": result.rows,
        "conventions": conventions(),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def conventions() -> dict:
    return {
        "basis": "generalized Gell-Mann, identity first, Tr(s_i s_j) = 2 delta_ij",
        "basis_order": "identity, symmetric (j<k), antisymmetric, diagonal",
        "state_expansion": "rho = (1/4) sum_ij T_ij s_i (x) s_j (1/8 tripartite)",
        "dual_map": "lambda -> Tr_B[W (I (x) lambda)]",
        "detection_tolerance_omega": DETECTION_TOL,
        "negativity_tolerance": "min eig < -1e-9 * max(1, max|entry|)",
        "sign_zero_tolerance": SIGN_ZERO_TOL,
        "multipartite_scope": "cut verdicts certify bipartite entanglement across the cut",
        "qutrit_grid_verdicts": "metric/sign use the Bloch-sector singular value "
                                "bound (exact for qubits, relaxed for qutrits)",
    }


def detection_indicator(family: str, criterion: str, seed: int = 0,
                        restarts: int = 20, tol: float = 1e-10,
                        cut: str = "12:3"):
    """Map a one-parameter family to a callable v -> detected flag.

    Used by threshold bisection; supports the single-axis families
    (werner, w_noise) with any criterion that applies to them.
    """
    if family not in ("werner", "w_noise"):
        raise ValueError(f"threshold scans support the single-parameter families "
                         f"'werner' and 'w_noise', not {family!r}")
    dims = _FAMILY_DIMS[family]
    allowed = applicable_criteria(dims)
    if criterion not in allowed:
        raise ValueError(f"criterion {criterion!r} does not apply to family "
                         f"{family!r}; choose from {allowed}")
    kwargs = dict(restarts=restarts, tol=tol, seed=seed)
    if family == "werner":
        from .states import werner

        std = standard_metric(2, 2)

        def indicator(v: float) -> bool:
            rho = werner(v)
            if criterion == "metric":
                return identifier_value(std, rho, **kwargs).detected
            if criterion == "sign":
                return sign_criterion(rho, (2, 2), **kwargs).detected
            if criterion == "ppt":
                return ppt_check(rho, (2, 2))[1]
            if criterion == "map":
                return map_condition(std, rho, rho, **kwargs).detected
            return identifier_value(pptgen_map(), rho, **kwargs).detected

        return indicator

    from .states import w_noise

    parsed = multipartite.Bipartition.parse(cut)

    def indicator(v: float) -> bool:
        rho = w_noise(v)
        if criterion == "metric":
            return multipartite.metric_identifier_bipartition(
                rho, parsed, **kwargs).detected
        if criterion == "map":
            return multipartite.map_condition_bipartition(
                rho, rho, parsed, **kwargs).detected
        return multipartite.ppt_check_bipartition(rho, parsed)[1]

    return indicator


# ---------------------------------------------------------------------------
# Single-state analysis


@dataclass(frozen=True)
class DetectionReport:
    descriptor: str
    dims: tuple[int, ...]
    seed: int
    restarts: int
    tol: float
    results: list
    wall_time_s: float

    def to_dict(self) -> dict:
        return {
            "descriptor": self.descriptor,
            "dims": list(self.dims),
            "seed": self.seed,
            "restarts": self.restarts,
            "tol": self.tol,
            "results": self.results,
            "wall_time_s": self.wall_time_s,
            "conventions": conventions(),
        }


def _analyze_bipartite(rho, dims, criteria, seed, restarts, tol):
    std = standard_metric(*dims)
    results = []
    for crit in criteria:
        if crit == "metric":
            r = identifier_value(std, rho, restarts=restarts, tol=tol, seed=seed)
            results.append({
                "criterion": crit, "detected": r.detected, "omega": r.omega,
                "omega_tilde0": r.omega_tilde0, "self_overlap": r.self_overlap,
            })
        elif crit == "sign":
            r = sign_criterion(rho, dims, restarts=restarts, tol=tol, seed=seed)
            results.append({
                "criterion": crit, "detected": r.detected,
                "omega": r.identifier.omega, "lhs": r.lhs, "rhs": r.rhs,
            })
        elif crit == "ppt":
            lo, det = ppt_check(rho, dims)
            results.append({"criterion": crit, "detected": det, "min_eigenvalue": lo})
        elif crit == "map":
            r = map_condition(std, rho, rho, restarts=restarts, tol=tol, seed=seed)
            results.append({
                "criterion": crit, "detected": r.detected,
                "min_eigenvalue": r.min_eigenvalue, "omega_tilde0": r.omega_tilde0,
                "generator": "self",
            })
        elif crit == "pptgen-functional":
            t = correlation_tensor(rho, dims=dims)
            diag_sum = float(t[1, 1] + t[2, 2] + t[3, 3])
            r = identifier_value(pptgen_map(), rho, restarts=restarts, tol=tol, seed=seed)
            results.append({
                "criterion": crit, "detected": r.detected, "omega": r.omega,
                "corr_diag_sum": diag_sum,
            })
        else:
            raise ValueError(f"criterion {crit!r} does not apply to dims {dims}")
    return results


def _analyze_tripartite(rho, criteria, cuts, seed, restarts, tol):
    results = []
    for cut in cuts:
        label = f"bipartite entanglement across cut {cut}"
        for crit in criteria:
            if crit == "metric":
                r = multipartite.metric_identifier_bipartition(
                    rho, cut, restarts=restarts, tol=tol, seed=seed)
                results.append({
                    "criterion": crit, "cut": str(cut), "detected": r.detected,
                    "omega": r.omega, "omega_tilde0": r.omega_tilde0,
                    "self_overlap": r.self_overlap, "meaning": label,
                })
            elif crit == "map":
                r = multipartite.map_condition_bipartition(
                    rho, rho, cut, restarts=restarts, tol=tol, seed=seed)
                results.append({
                    "criterion": crit, "cut": str(cut), "detected": r.detected,
                    "min_eigenvalue": r.min_eigenvalue, "meaning": label,
                })
            elif crit == "ppt":
                lo, det = multipartite.ppt_check_bipartition(rho, cut)
                results.append({
                    "criterion": crit, "cut": str(cut), "detected": det,
                    "min_eigenvalue": lo, "meaning": label,
                })
            else:
                raise ValueError(f"criterion {crit!r} does not apply to three qubits")
    return results


def analyze_state(
    rho: np.ndarray,
    dims: tuple[int, ...],
    criteria: tuple[str, ...] | None = None,
    seed: int = 0,
    restarts: int = 20,
    tol: float = 1e-10,
    cut: str = "12:3",
    descriptor: str = "",
) -> DetectionReport:
    """Evaluate the requested criteria on one state."""
    start = time.perf_counter()
    d = int(np.prod(dims))
    if rho.shape != (d, d):
        raise ValueError(f"state shape {rho.shape} does not match dims {dims}")
    allowed = applicable_criteria(tuple(dims))
    criteria = tuple(criteria) if criteria else allowed
    for c in criteria:
        if c not in allowed:
            raise ValueError(f"criterion {c!r} does not apply to dims {tuple(dims)}; "
                             f"choose from {allowed}")
    if len(dims) == 3:
        if cut == "all":
            cuts = [multipartite.Bipartition.parse(c) for c in ("12:3", "13:2", "23:1")]
        else:
            cuts = [multipartite.Bipartition.parse(cut)]
        results = _analyze_tripartite(rho, criteria, cuts, seed, restarts, tol)
    else:
        results = _analyze_bipartite(rho, tuple(dims), criteria, seed, restarts, tol)
    return DetectionReport(
        descriptor=descriptor, dims=tuple(dims), seed=seed, restarts=restarts,
        tol=tol, results=results, wall_time_s=time.perf_counter() - start,
    )
