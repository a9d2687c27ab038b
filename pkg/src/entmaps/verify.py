"""Self-check suite: mathematical identities, soundness, and optimizer audits.

Every check draws its inputs from a named seed stream so a report is
reproducible, and each returns the worst error it saw together with the
tolerance it was held to.  The suite is the backing for the CLI `verify`
subcommand: exit 0 means every check passed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .bases import (
    HermitianBasis,
    correlation_tensor,
    expand_hermitian,
    gell_mann_basis,
    pair_product_stack,
)
from .identifiers import (
    DETECTION_TOL,
    apply_gmap,
    identifier_value,
    pptgen_map,
    product_max,
    product_max_bloch_bound,
    product_max_oracle,
    sign_criterion,
    sign_map,
    standard_metric,
    tensor_cross_norm,
)
from .linalg import dagger, hs_inner, max_abs, partial_transpose
from .multipartite import (
    Bipartition,
    map_condition_bipartition,
    metric_identifier_bipartition,
    ppt_check_bipartition,
    random_biproduct_mixture,
)
from .positive_maps import (
    apply_dual_to_second_factor,
    block_positivity_sample,
    isomorphism_check,
    lambda_apply,
    lambda_dual_apply,
    map_condition,
    phi_plus,
    ppt_check,
    witness_coefficients,
    witness_operator,
)
from .states import random_separable, random_state, w_noise

__all__ = ["CheckResult", "VerificationReport", "run_verification", "DEFAULT_COUNTS"]

DEFAULT_COUNTS = {
    "duality": 50,
    "transpose_composition": 50,
    "isomorphism": 12,
    "coefficient_formula": 20,
    "block_positivity": 8,
    "separable_soundness": 200,
    "map_implication": 50,
    "pptgen_dual": 25,
    "pptgen_vs_ppt": 200,
    "oracle": 50,
    "sign_equivalence": 100,
    "monotone_ascent": 20,
    "cross_norm_relation": 25,
    "bloch_bound": 25,
    "biproduct_soundness": 100,
    "dual_decomposition": 20,
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    count: int
    detail: str = ""

    def __post_init__(self):
        # strip numpy scalar types so reports serialize cleanly
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "max_error", float(self.max_error))

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        msg = f"{tag} {self.name}: max_error={self.max_error:.3e} "\
              f"(tol {self.tolerance:g}, n={self.count})"
        if self.detail:
            msg += f" -- {self.detail}"
        return msg


@dataclass(frozen=True)
class VerificationReport:
    seed: int
    results: list
    elapsed_s: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "elapsed_s": self.elapsed_s,
            "checks": [
                {
                    "name": r.name, "passed": r.passed, "max_error": r.max_error,
                    "tolerance": r.tolerance, "count": r.count, "detail": r.detail,
                }
                for r in self.results
            ],
        }

    def render(self) -> str:
        lines = [r.line() for r in self.results]
        lines.append(f"{'OK' if self.passed else 'FAILED'}: "
                     f"{sum(r.passed for r in self.results)}/{len(self.results)} "
                     f"checks passed in {self.elapsed_s:.1f}s (seed {self.seed})")
        return "\n".join(lines)


def _random_hermitian(rng, d: int) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + dagger(g)) / 2.0


def _cross_image(rng, dims) -> np.ndarray:
    """Random Hermitian image with only nonzero-index tensor components."""
    da, db = dims
    t = rng.normal(size=(da * da, db * db))
    t[0, :] = 0.0
    t[:, 0] = 0.0
    stack = pair_product_stack(da, db)
    return np.einsum("k,kab->ab", t.ravel(), stack) / 4.0


def _check_basis_orthonormality(bases) -> CheckResult:
    worst = 0.0
    for basis in bases:
        n = len(basis.elements)
        gram = np.einsum("iab,jba->ij", basis.elements, basis.elements).real
        worst = max(worst, float(np.max(np.abs(gram - 2.0 * np.eye(n)))))
    return CheckResult("basis_orthonormality", worst <= 1e-9, worst, 1e-9,
                       sum(len(b.elements) for b in bases))


def _check_duality(seed, count) -> CheckResult:
    worst = 0.0
    done = 0
    for dims in ((2, 2), (2, 3)):
        rng = np.random.default_rng((seed, 1, dims[1]))
        d = dims[0] * dims[1]
        w = witness_operator(standard_metric(*dims), random_state(d, seed=seed + dims[1]),
                             restarts=6, seed=seed)
        for _ in range(count):
            a1 = _random_hermitian(rng, dims[1])
            a2 = _random_hermitian(rng, dims[0])
            lhs = hs_inner(a1, lambda_apply(w, a2))
            rhs = hs_inner(lambda_dual_apply(w, a1), a2)
            worst = max(worst, abs(lhs - rhs))
            done += 1
    return CheckResult("dual_map_pairing", worst <= 1e-9, worst, 1e-9, done)


def _check_transpose_composition(seed, count) -> CheckResult:
    worst = 0.0
    done = 0
    for dims in ((2, 2), (2, 3)):
        rng = np.random.default_rng((seed, 2, dims[1]))
        d = dims[0] * dims[1]
        w = witness_operator(standard_metric(*dims), random_state(d, seed=seed + 7),
                             restarts=6, seed=seed)
        for _ in range(count):
            a1 = _random_hermitian(rng, dims[1])
            a2 = _random_hermitian(rng, dims[0])
            lhs = hs_inner(a1, lambda_apply(w, a2.T))
            rhs = hs_inner(lambda_dual_apply(w, a1).T, a2)
            worst = max(worst, abs(lhs - rhs))
            done += 1
    return CheckResult("transpose_composition_duality", worst <= 1e-9, worst, 1e-9, done)


def _check_phi_plus_identity(bases) -> CheckResult:
    worst = 0.0
    for basis in bases:
        total = np.zeros((basis.dim ** 2, basis.dim ** 2), dtype=complex)
        for el in basis.elements:
            total += np.kron(el, el)
        ref = 2.0 * partial_transpose(phi_plus(basis.dim), (basis.dim, basis.dim), "B")
        worst = max(worst, max_abs(total - ref))
    return CheckResult("maximally_entangled_identity", worst <= 1e-9, worst, 1e-9,
                       len(bases))


def _check_isomorphism(seed, count) -> CheckResult:
    worst = 0.0
    done = 0
    for dims, maps in (((2, 2), (standard_metric(2, 2), sign_map())),
                       ((3, 3), (standard_metric(3, 3),))):
        d = dims[0] * dims[1]
        for g in maps:
            for k in range(count):
                rho = random_state(d, seed=seed * 1000 + 10 * k + dims[0])
                worst = max(worst, isomorphism_check(g, rho, restarts=6, seed=seed))
                done += 1
    return CheckResult("choi_isomorphism", worst <= 1e-9, worst, 1e-9, done)


def _check_coefficient_formula(seed, count, basis_a, basis_b) -> CheckResult:
    dims = (basis_a.dim, basis_b.dim)
    worst = 0.0
    for k in range(count):
        rho = random_state(dims[0] * dims[1], seed=seed * 513 + k)
        g = standard_metric(*dims)
        w = witness_operator(g, rho, restarts=6, seed=seed)
        coef = witness_coefficients(w, basis_a, basis_b)
        image_t = correlation_tensor(apply_gmap(g, rho), dims=dims)
        expected = -image_t
        expected[0, 0] += 2.0 * np.sqrt(dims[0] * dims[1]) * w.omega_tilde0
        worst = max(worst, float(np.max(np.abs(coef - expected))))
    return CheckResult("witness_coefficient_formula", worst <= 1e-9, worst, 1e-9, count)


def _check_block_positivity(seed, count) -> CheckResult:
    worst = 0.0
    done = 0
    for dims in ((2, 2), (2, 3)):
        d = dims[0] * dims[1]
        for k in range(count):
            rho = random_state(d, seed=seed * 77 + k)
            w = witness_operator(standard_metric(*dims), rho, restarts=20, seed=seed)
            low = block_positivity_sample(w, samples=4000, seed=seed + k)
            worst = max(worst, max(0.0, -low))
            done += 1
    return CheckResult("witness_block_positivity", worst <= 1e-9, worst, 1e-9, done)


def _check_separable_soundness(seed, count) -> CheckResult:
    detections = 0
    worst = 0.0
    done = 0
    for dims in ((2, 2), (2, 3)):
        gmaps = [standard_metric(*dims), sign_map(*dims)]
        if dims == (2, 2):
            gmaps.append(pptgen_map())
        for k in range(count):
            rho = random_separable(dims, seed=seed * 91 + k)
            for g in gmaps:
                res = identifier_value(g, rho, restarts=20, seed=seed)
                if res.detected:
                    detections += 1
                worst = max(worst, max(0.0, -res.omega))
            mc = map_condition(standard_metric(*dims), rho, rho, restarts=20,
                              seed=seed)
            if mc.detected:
                detections += 1
            done += 1
    return CheckResult("separable_soundness", detections == 0, worst, DETECTION_TOL,
                       done, detail=f"{detections} false detections")


def _check_map_implication(seed, count) -> CheckResult:
    counterexamples = 0
    for k in range(count):
        rho = random_state(4, seed=seed * 37 + k)
        g = standard_metric(2, 2)
        ident = identifier_value(g, rho, restarts=12, seed=seed)
        if not ident.detected:
            continue
        mc = map_condition(g, rho, rho, restarts=12, seed=seed)
        if not mc.detected:
            counterexamples += 1
    return CheckResult("map_detects_identifier_detections", counterexamples == 0,
                       float(counterexamples), 0.0, count,
                       detail=f"{counterexamples} identifier-only detections")


def _check_pptgen_dual(seed, count) -> CheckResult:
    rng = np.random.default_rng((seed, 3))
    w = witness_operator(pptgen_map(), random_state(4, seed=seed), restarts=12, seed=seed)
    worst = 0.0
    for _ in range(count):
        lam = _random_hermitian(rng, 2)
        worst = max(worst, max_abs(lambda_dual_apply(w, lam) - lam / 2.0))
    return CheckResult("pptgen_dual_is_halving", worst <= 1e-9, worst, 1e-9, count)


def _check_pptgen_vs_ppt(seed, count) -> CheckResult:
    mismatches = 0
    g = pptgen_map()
    for k in range(count):
        rho = random_state(4, seed=seed * 53 + k)
        mc = map_condition(g, rho, rho, restarts=8, seed=seed)
        _, ppt_detected = ppt_check(rho, (2, 2))
        if mc.detected != ppt_detected:
            mismatches += 1
    return CheckResult("pptgen_map_equals_ppt", mismatches == 0, float(mismatches),
                       0.0, count, detail=f"{mismatches} verdict mismatches")


def _check_oracle(seed, count) -> CheckResult:
    worst_low = 0.0
    upper_violations = 0
    done = 0
    for dims in ((2, 2), (2, 3), (3, 3)):
        rng = np.random.default_rng((seed, 4, dims[1]))
        d = dims[0] * dims[1]
        for _ in range(count):
            m = _random_hermitian(rng, d)
            val, _, _ = product_max(m, dims, restarts=20, seed=seed)
            ref = product_max_oracle(m, dims, seed=seed)
            worst_low = max(worst_low, ref - val)
            if val > ref + 1e-6:
                upper_violations += 1
            done += 1
    passed = worst_low <= 1e-3 and upper_violations == 0
    return CheckResult("optimizer_vs_oracle", passed, max(worst_low, 0.0), 1e-3, done,
                       detail=f"{upper_violations} above-oracle violations")


def _check_sign_equivalence(seed, count) -> CheckResult:
    mismatches = 0
    for k in range(count):
        rho = random_state(4, seed=seed * 29 + k)
        rep = sign_criterion(rho, (2, 2), restarts=8, seed=seed)
        ident = identifier_value(sign_map(), rho, restarts=8, seed=seed)
        if rep.detected != ident.detected:
            mismatches += 1
    return CheckResult("sign_criterion_equivalence", mismatches == 0, float(mismatches),
                       0.0, count, detail=f"{mismatches} verdict mismatches")


def _check_monotone_ascent(seed, count) -> CheckResult:
    rng = np.random.default_rng((seed, 5))
    worst = 0.0
    for _ in range(count):
        m = _random_hermitian(rng, 4)
        _, _, _, history = product_max(m, (2, 2), restarts=6, seed=seed,
                                       return_history=True)
        values = np.stack(history)
        if values.shape[0] > 1:
            backstep = float(np.max(values[:-1] - values[1:]))
            worst = max(worst, max(0.0, backstep))
    return CheckResult("monotone_ascent", worst <= 1e-9, worst, 1e-9, count)


def _check_cross_norm_relation(seed, count) -> CheckResult:
    worst = 0.0
    g = standard_metric(2, 2)
    for k in range(count):
        rho = random_state(4, seed=seed * 17 + k)
        norm = tensor_cross_norm(g, rho)
        res = identifier_value(g, rho, restarts=30, seed=seed)
        worst = max(worst, abs(norm - 4.0 * res.omega_tilde0))
    return CheckResult("cross_norm_is_4x_product_max", worst <= 1e-9, worst, 1e-9, count)


def _check_bloch_bound(seed, count) -> CheckResult:
    worst = 0.0
    done = 0
    for dims in ((2, 2), (3, 3)):
        rng = np.random.default_rng((seed, 6, dims[0]))
        for _ in range(count):
            image = _cross_image(rng, dims)
            bound = product_max_bloch_bound(image, dims)
            val, _, _ = product_max(image, dims, restarts=12, seed=seed)
            worst = max(worst, max(0.0, val - bound))
            done += 1
    return CheckResult("bloch_bound_dominates_product_max", worst <= 1e-9, worst,
                       1e-9, done)


def _check_biproduct_soundness(seed, count) -> CheckResult:
    detections = 0
    done = 0
    for cut_text in ("12:3", "13:2", "23:1"):
        cut = Bipartition.parse(cut_text)
        for k in range(count):
            rho = random_biproduct_mixture(cut, seed=seed * 101 + k)
            ident = metric_identifier_bipartition(rho, cut, restarts=20, seed=seed)
            mc = map_condition_bipartition(rho, rho, cut, restarts=20, seed=seed)
            _, ppt_det = ppt_check_bipartition(rho, cut)
            detections += int(ident.detected) + int(mc.detected) + int(ppt_det)
            done += 1
    return CheckResult("biproduct_soundness", detections == 0, float(detections),
                       DETECTION_TOL, done, detail=f"{detections} false detections")


def _check_w_state_cut_symmetry(seed) -> CheckResult:
    rho = w_noise(1.0)
    values = []
    for cut_text in ("12:3", "13:2", "23:1"):
        res = metric_identifier_bipartition(rho, cut_text, restarts=20, seed=seed)
        values.append((res.omega_tilde0, res.self_overlap, res.omega))
    arr = np.asarray(values)
    worst = float(np.max(arr.max(axis=0) - arr.min(axis=0)))
    return CheckResult("w_state_cut_symmetry", worst <= 1e-9, worst, 1e-9, 3)


def _check_dual_decomposition(seed, count) -> CheckResult:
    worst = 0.0
    done = 0
    for dims in ((2, 2), (3, 3)):
        d = dims[0] * dims[1]
        basis_b = gell_mann_basis(dims[1])
        for k in range(count):
            rho = random_state(d, seed=seed * 211 + k)
            target = random_state(d, seed=seed * 211 + k + 1)
            w = witness_operator(standard_metric(*dims), rho, restarts=6, seed=seed)
            fast = apply_dual_to_second_factor(w, target)
            slow = np.zeros_like(fast)
            t4 = target.reshape(dims[0], dims[1], dims[0], dims[1])
            for sj in basis_b.elements:
                aj = np.einsum("akcl,lk->ac", t4, sj) / 2.0
                slow += np.kron(aj, lambda_dual_apply(w, sj))
            worst = max(worst, max_abs(fast - slow))
            done += 1
    return CheckResult("dual_second_factor_decomposition", worst <= 1e-9, worst,
                       1e-9, done)


def run_verification(seed: int = 0, counts: dict | None = None,
                     corrupt_basis: bool = False) -> VerificationReport:
    """Run every check and collect a report.

    counts overrides per-check sample counts (keys of DEFAULT_COUNTS);
    corrupt_basis scales one basis element by 1.01 before the basis-dependent
    checks run, as a negative control that must make the suite fail.
    """
    n = dict(DEFAULT_COUNTS)
    for key, value in (counts or {}).items():
        if key not in n:
            raise ValueError(f"unknown check count {key!r}; "
                             f"choose from {sorted(n)}")
        n[key] = int(value)

    bases = [gell_mann_basis(2), gell_mann_basis(3)]
    if corrupt_basis:
        elements = np.array(bases[0].elements, copy=True)
        elements[1] = elements[1] * 1.01
        bases[0] = HermitianBasis(dim=2, elements=elements)

    start = time.perf_counter()
    results = [
        _check_basis_orthonormality(bases),
        _check_duality(seed, n["duality"]),
        _check_transpose_composition(seed, n["transpose_composition"]),
        _check_phi_plus_identity(bases),
        _check_isomorphism(seed, n["isomorphism"]),
        _check_coefficient_formula(seed, n["coefficient_formula"],
                                   bases[0], bases[0]),
        _check_block_positivity(seed, n["block_positivity"]),
        _check_separable_soundness(seed, n["separable_soundness"]),
        _check_map_implication(seed, n["map_implication"]),
        _check_pptgen_dual(seed, n["pptgen_dual"]),
        _check_pptgen_vs_ppt(seed, n["pptgen_vs_ppt"]),
        _check_oracle(seed, n["oracle"]),
        _check_sign_equivalence(seed, n["sign_equivalence"]),
        _check_monotone_ascent(seed, n["monotone_ascent"]),
        _check_cross_norm_relation(seed, n["cross_norm_relation"]),
        _check_bloch_bound(seed, n["bloch_bound"]),
        _check_biproduct_soundness(seed, n["biproduct_soundness"]),
        _check_w_state_cut_symmetry(seed),
        _check_dual_decomposition(seed, n["dual_decomposition"]),
    ]
    return VerificationReport(seed=seed, results=results,
                              elapsed_s=time.perf_counter() - start)
