import numpy as np
import pytest

from entmaps.linalg import kron, max_abs
from entmaps.multipartite import (
    Bipartition,
    bipartition_flatten,
    map_condition_bipartition,
    metric_identifier_bipartition,
    ppt_check_bipartition,
    random_biproduct_mixture,
    threshold_scan,
    tripartite_metric_image,
)
from entmaps.states import random_state, w_noise


def test_bipartition_parse_and_properties():
    cut = Bipartition.parse("13:2")
    assert cut.left == (1, 3) and cut.right == (2,)
    assert cut.dims == (4, 2)
    assert str(cut) == "13:2"
    assert Bipartition.parse("3:12").dims == (2, 4)


@pytest.mark.parametrize("text", ["12", "12:4", "1:1", "a:bc", "12:", "123:"])
def test_bipartition_rejects_malformed(text):
    with pytest.raises(ValueError):
        Bipartition.parse(text)


def test_bipartition_flatten_reorders_product():
    rhos = [random_state(2, seed=s) for s in (1, 2, 3)]
    rho = kron(kron(rhos[0], rhos[1]), rhos[2])
    flat = bipartition_flatten(rho, "13:2")
    expected = kron(kron(rhos[0], rhos[2]), rhos[1])
    assert max_abs(flat - expected) < 1e-14
    # identity cut leaves the operator unchanged
    assert max_abs(bipartition_flatten(rho, "12:3") - rho) < 1e-14
    with pytest.raises(ValueError):
        bipartition_flatten(np.eye(4), "12:3")


def test_tripartite_image_is_hermitian_and_traceless():
    img = tripartite_metric_image(w_noise(0.9))
    assert max_abs(img - img.conj().T) < 1e-13
    assert abs(np.trace(img)) < 1e-13


def test_pure_w_state_detected_across_every_cut():
    rho = w_noise(1.0)
    for cut in ("12:3", "13:2", "23:1"):
        ident = metric_identifier_bipartition(rho, cut, seed=0)
        assert ident.detected, f"identifier missed cut {cut}"
        mc = map_condition_bipartition(rho, rho, cut, seed=0)
        assert mc.detected, f"map criterion missed cut {cut}"
        _, ppt = ppt_check_bipartition(rho, cut)
        assert ppt, f"partial transpose missed cut {cut}"


def test_white_noise_clears_every_cut():
    rho = w_noise(0.0)
    for cut in ("12:3", "13:2", "23:1"):
        assert not metric_identifier_bipartition(rho, cut, seed=0).detected
        assert not ppt_check_bipartition(rho, cut)[1]


def test_biproduct_mixture_clears_its_own_cut():
    for seed in range(5):
        for cut in ("12:3", "13:2", "23:1"):
            rho = random_biproduct_mixture(cut, seed=seed)
            assert abs(np.trace(rho) - 1.0) < 1e-12
            ident = metric_identifier_bipartition(rho, cut, seed=0)
            assert not ident.detected, f"false detection at cut {cut} seed {seed}"
            _, ppt = ppt_check_bipartition(rho, cut)
            assert not ppt


def test_threshold_scan_bisects_step_indicator():
    value = threshold_scan(lambda v: v > 0.42, 0.0, 1.0, tol=1e-6)
    assert abs(value - 0.42) < 1e-5


def test_threshold_scan_error_paths():
    with pytest.raises(ValueError, match="need v_lo < v_hi"):
        threshold_scan(lambda v: True, 1.0, 0.0)
    with pytest.raises(ValueError, match="not monotone"):
        threshold_scan(lambda v: 0.3 < v < 0.6, 0.0, 1.0)
    with pytest.raises(ValueError, match="no crossing"):
        threshold_scan(lambda v: False, 0.0, 1.0)
