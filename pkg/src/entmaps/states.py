"""Constructors for the state families the scans and tests run on.

Computational basis kets are ordered with the first subsystem as the slow
index, so |abc> sits at flat index 4a + 2b + c for three qubits.  Bell states
follow the usual naming: phi+- = (|00> +- |11>)/sqrt2, psi+- = (|01> +- |10>)/sqrt2,
and "singlet" is an alias for psi-.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import kron, min_eigenvalue, proj

__all__ = [
    "bell_ket",
    "bell_state",
    "singlet",
    "bell_diagonal",
    "weyl_state",
    "werner",
    "qutrit_werner",
    "w_state_ket",
    "w_noise",
    "random_pure",
    "random_state",
    "random_separable",
    "StateSpec",
]

_BELL_AMPLITUDES = {
    "phi+": ((0, 0, 1.0), (1, 1, 1.0)),
    "phi-": ((0, 0, 1.0), (1, 1, -1.0)),
    "psi+": ((0, 1, 1.0), (1, 0, 1.0)),
    "psi-": ((0, 1, 1.0), (1, 0, -1.0)),
}


def bell_ket(name: str) -> np.ndarray:
    key = "psi-" if name == "singlet" else name
    if key not in _BELL_AMPLITUDES:
        raise ValueError(f"unknown Bell state {name!r}, expected one of "
                         f"{sorted(_BELL_AMPLITUDES)} or 'singlet'")
    v = np.zeros(4, dtype=complex)
    for a, b, amp in _BELL_AMPLITUDES[key]:
        v[2 * a + b] = amp
    return v / np.sqrt(2.0)


def bell_state(name: str) -> np.ndarray:
    return proj(bell_ket(name))


def singlet() -> np.ndarray:
    """Projector onto (|01> - |10>)/sqrt2."""
    return bell_state("psi-")


def bell_diagonal(a: float, b: float) -> np.ndarray:
    """a |phi+><phi+| + b |phi-><phi-| + (1 - a - b) I/4."""
    if a < -1e-12 or b < -1e-12 or a + b > 1.0 + 1e-12:
        raise ValueError(f"weights (a, b) = ({a}, {b}) leave no valid white-noise share")
    return a * bell_state("phi+") + b * bell_state("phi-") + (1.0 - a - b) * np.eye(4) / 4.0


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _weyl_matrix(p: float, q: float, r: float) -> np.ndarray:
    m = np.eye(4, dtype=complex)
    m += p * kron(_PAULI["x"], _PAULI["x"])
    m += q * kron(_PAULI["y"], _PAULI["y"])
    m += r * kron(_PAULI["z"], _PAULI["z"])
    return m / 4.0


def weyl_state(p: float, q: float, r: float) -> np.ndarray:
    """Bell-diagonal state with diagonal correlations (p, q, r).

    Raises ValueError when the coefficients lie outside the state tetrahedron.
    """
    rho = _weyl_matrix(p, q, r)
    if min_eigenvalue(rho) < -1e-10:
        raise ValueError(f"correlations (p, q, r) = ({p}, {q}, {r}) give a non-positive matrix")
    return rho


def werner(v: float) -> np.ndarray:
    """v |phi+><phi+| + (1 - v) I/4 for v in [0, 1]."""
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {v}")
    return v * bell_state("phi+") + (1.0 - v) * np.eye(4) / 4.0


def qutrit_werner(v: float, alpha: float, beta: float) -> np.ndarray:
    """Two-qutrit mixture v |psi(alpha, beta)><...| + (1 - v) I/9.

    |psi> = sin(alpha) cos(beta) |00> + sin(alpha) sin(beta) |11> + cos(alpha) |22>.
    """
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {v}")
    psi = np.zeros(9, dtype=complex)
    psi[0] = np.sin(alpha) * np.cos(beta)
    psi[4] = np.sin(alpha) * np.sin(beta)
    psi[8] = np.cos(alpha)
    n = np.linalg.norm(psi)
    if n < 1e-12:
        raise ValueError(f"(alpha, beta) = ({alpha}, {beta}) give a vanishing state vector")
    return v * proj(psi) + (1.0 - v) * np.eye(9) / 9.0


def w_state_ket() -> np.ndarray:
    v = np.zeros(8, dtype=complex)
    v[[4, 2, 1]] = 1.0  # |100>, |010>, |001>
    return v / np.sqrt(3.0)


def w_noise(v: float) -> np.ndarray:
    """Three-qubit mixture v |W><W| + (1 - v) I/8."""
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {v}")
    return v * proj(w_state_ket()) + (1.0 - v) * np.eye(8) / 8.0


def _random_ket(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_pure(d: int, seed: int = 0) -> np.ndarray:
    """Haar-random pure state density matrix of dimension d."""
    rng = np.random.default_rng(seed)
    return proj(_random_ket(d, rng))


def random_state(d: int, seed: int = 0) -> np.ndarray:
    """Full-rank random density matrix G G^dag / Tr(...) with Gaussian G."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_separable(dims: tuple[int, int], seed: int = 0, max_terms: int = 4) -> np.ndarray:
    """Convex mixture of at most max_terms random pure product states."""
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, max_terms + 1))
    weights = rng.dirichlet(np.ones(k))
    da, db = dims
    rho = np.zeros((da * db, da * db), dtype=complex)
    for w in weights:
        rho += w * proj(np.kron(_random_ket(da, rng), _random_ket(db, rng)))
    return rho


_FAMILY_PARAMS = {
    "bell": ("name",),
    "bell_diagonal": ("a", "b"),
    "weyl": ("p", "q", "r"),
    "werner": ("v",),
    "qutrit_werner": ("v", "alpha", "beta"),
    "w_noise": ("v",),
    "pure": ("d", "seed"),
    "random": ("d", "seed"),
}

_FAMILY_DIMS = {
    "bell": (2, 2),
    "bell_diagonal": (2, 2),
    "weyl": (2, 2),
    "werner": (2, 2),
    "qutrit_werner": (3, 3),
    "w_noise": (2, 2, 2),
}


@dataclass(frozen=True)
class StateSpec:
    """A named state family plus its parameter assignment."""

    family: str
    params: dict = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str) -> "StateSpec":
        """Parse descriptors like 'werner v=0.5', 'weyl p=1,q=1,r=-1', 'bell phi+'."""
        tokens = text.replace(",", " ").split()
        if not tokens:
            raise ValueError("empty state descriptor")
        family = tokens[0]
        if family not in _FAMILY_PARAMS:
            raise ValueError(f"unknown state family {family!r} in descriptor {text!r}")
        params: dict = {}
        for tok in tokens[1:]:
            if "=" not in tok:
                if family == "bell" and "name" not in params:
                    params["name"] = tok
                    continue
                raise ValueError(f"cannot parse token {tok!r} in descriptor {text!r}")
            key, _, raw = tok.partition("=")
            if key not in _FAMILY_PARAMS[family]:
                raise ValueError(f"unknown parameter {key!r} for family {family!r}")
            if key == "name":
                params[key] = raw
            elif key in ("d", "seed"):
                try:
                    params[key] = int(raw)
                except ValueError:
                    raise ValueError(f"cannot parse integer from token {tok!r}") from None
            else:
                try:
                    params[key] = float(raw)
                except ValueError:
                    raise ValueError(f"cannot parse number from token {tok!r}") from None
        missing = [k for k in _FAMILY_PARAMS[family] if k not in params and k != "seed"]
        if missing:
            raise ValueError(f"descriptor {text!r} is missing parameters {missing}")
        return cls(family=family, params=params)

    def dims(self) -> tuple[int, ...]:
        if self.family in _FAMILY_DIMS:
            return _FAMILY_DIMS[self.family]
        d = int(self.params["d"])
        inferred = {4: (2, 2), 6: (2, 3), 8: (2, 2, 2), 9: (3, 3)}.get(d)
        if inferred is None:
            raise ValueError(
                f"dimension {d} has no canonical subsystem split; "
                "analyze it through a matrix literal with explicit dims"
            )
        return inferred

    def build(self) -> np.ndarray:
        p = self.params
        if self.family == "bell":
            return bell_state(p["name"])
        if self.family == "bell_diagonal":
            return bell_diagonal(p["a"], p["b"])
        if self.family == "weyl":
            return weyl_state(p["p"], p["q"], p["r"])
        if self.family == "werner":
            return werner(p["v"])
        if self.family == "qutrit_werner":
            return qutrit_werner(p["v"], p["alpha"], p["beta"])
        if self.family == "w_noise":
            return w_noise(p["v"])
        if self.family == "pure":
            return random_pure(int(p["d"]), int(p.get("seed", 0)))
        if self.family == "random":
            return random_state(int(p["d"]), int(p.get("seed", 0)))
        raise ValueError(f"unknown state family {self.family!r}")

    def describe(self) -> str:
        parts = [self.family]
        for key in _FAMILY_PARAMS[self.family]:
            if key in self.params:
                val = self.params[key]
                parts.append(f"{key}={val}" if not isinstance(val, float) else f"{key}={val:g}")
        return " ".join(parts)
