import numpy as np
import pytest

from entmaps.linalg import max_abs, min_eigenvalue, partial_trace
from entmaps.states import (
    StateSpec,
    bell_diagonal,
    bell_ket,
    bell_state,
    qutrit_werner,
    random_pure,
    random_separable,
    random_state,
    singlet,
    w_noise,
    w_state_ket,
    werner,
    weyl_state,
)


def _assert_state(rho, d):
    assert rho.shape == (d, d)
    assert max_abs(rho - rho.conj().T) < 1e-14
    assert abs(np.trace(rho) - 1.0) < 1e-13
    assert min_eigenvalue(rho) > -1e-12


def test_bell_states_orthonormal():
    kets = [bell_ket(n) for n in ("phi+", "phi-", "psi+", "psi-")]
    gram = np.array([[np.vdot(a, b) for b in kets] for a in kets])
    assert max_abs(gram - np.eye(4)) < 1e-14
    assert max_abs(bell_state("singlet") - singlet()) == 0.0


def test_bell_state_unknown_name():
    with pytest.raises(ValueError, match="unknown Bell state"):
        bell_ket("sigma+")


def test_singlet_matrix():
    expected = np.zeros((4, 4), dtype=complex)
    expected[1, 1] = expected[2, 2] = 0.5
    expected[1, 2] = expected[2, 1] = -0.5
    assert max_abs(singlet() - expected) < 1e-14


def test_bell_diagonal_mixture():
    rho = bell_diagonal(0.3, 0.2)
    _assert_state(rho, 4)
    expected = (0.3 * bell_state("phi+") + 0.2 * bell_state("phi-")
                + 0.5 * np.eye(4) / 4.0)
    assert max_abs(rho - expected) < 1e-14
    with pytest.raises(ValueError):
        bell_diagonal(0.8, 0.4)
    with pytest.raises(ValueError):
        bell_diagonal(-0.1, 0.2)


def test_weyl_state_tetrahedron():
    rho = weyl_state(1.0, 1.0, -1.0)
    _assert_state(rho, 4)
    assert max_abs(rho - bell_state("psi+")) < 1e-14
    # outside the tetrahedron the mixture is not a state
    with pytest.raises(ValueError, match="non-positive"):
        weyl_state(1.0, 1.0, 1.0)


def test_werner_interpolates_bell_and_noise():
    assert max_abs(werner(1.0) - bell_state("phi+")) < 1e-14
    assert max_abs(werner(0.0) - np.eye(4) / 4.0) < 1e-14
    _assert_state(werner(0.5), 4)
    with pytest.raises(ValueError):
        werner(1.2)


def test_qutrit_werner_state():
    rho = qutrit_werner(0.7, 0.3, np.pi / 4)
    _assert_state(rho, 9)
    # v = 0 is white noise regardless of the angles
    assert max_abs(qutrit_werner(0.0, 1.0, 0.2) - np.eye(9) / 9.0) < 1e-14
    with pytest.raises(ValueError):
        qutrit_werner(-0.5, 0.3, 0.3)


def test_w_state_and_noise():
    ket = w_state_ket()
    assert abs(np.linalg.norm(ket) - 1.0) < 1e-14
    nonzero = np.flatnonzero(np.abs(ket) > 1e-14)
    assert list(nonzero) == [1, 2, 4]
    rho = w_noise(0.6)
    _assert_state(rho, 8)
    # every single-qubit marginal of the pure W state is the same
    pure = w_noise(1.0)
    m3 = partial_trace(pure, (4, 2), traced="A")
    m1 = partial_trace(pure, (2, 4), traced="B")
    assert max_abs(m1 - m3) < 1e-14


def test_random_states_seeded(rng):
    _assert_state(random_pure(3, seed=2), 3)
    _assert_state(random_state(6, seed=2), 6)
    assert max_abs(random_state(6, seed=2) - random_state(6, seed=2)) == 0.0
    assert max_abs(random_state(6, seed=2) - random_state(6, seed=3)) > 1e-3
    rho = random_pure(4, seed=9)
    assert abs(np.trace(rho @ rho) - 1.0) < 1e-12


def test_random_separable_is_ppt():
    from entmaps.positive_maps import ppt_check
    for seed in range(10):
        for dims in ((2, 2), (2, 3)):
            rho = random_separable(dims, seed=seed)
            _assert_state(rho, dims[0] * dims[1])
            _, detected = ppt_check(rho, dims)
            assert not detected


def test_state_spec_parse_and_build():
    spec = StateSpec.parse("werner v=0.5")
    assert spec.dims() == (2, 2)
    assert max_abs(spec.build() - werner(0.5)) == 0.0

    spec = StateSpec.parse("weyl p=1,q=1,r=-1")
    assert max_abs(spec.build() - weyl_state(1, 1, -1)) == 0.0

    spec = StateSpec.parse("bell phi+")
    assert max_abs(spec.build() - bell_state("phi+")) == 0.0

    spec = StateSpec.parse("qutrit_werner v=0.4 alpha=0.3 beta=0.78")
    assert spec.dims() == (3, 3)

    spec = StateSpec.parse("w_noise v=0.9")
    assert spec.dims() == (2, 2, 2)

    assert "v=0.5" in StateSpec.parse("werner v=0.5").describe()


@pytest.mark.parametrize("text", [
    "",
    "unknown v=1",
    "werner",
    "werner q=0.5",
    "werner v=abc",
    "qutrit_werner v=0.5",
])
def test_state_spec_rejects_malformed(text):
    with pytest.raises(ValueError):
        StateSpec.parse(text)
