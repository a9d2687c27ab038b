import csv
import io
import json

import numpy as np
import pytest

from entmaps.identifiers import identifier_value, standard_metric
from entmaps.scans import (
    DEFAULT_RANGES,
    FAMILY_AXES,
    ScanConfig,
    analyze_state,
    applicable_criteria,
    detection_indicator,
    render_csv,
    render_json,
    run_scan,
)
from entmaps.states import bell_diagonal, singlet, w_noise, werner


def test_applicable_criteria_by_shape():
    assert applicable_criteria((2, 2)) == ("metric", "sign", "ppt", "map",
                                           "pptgen-functional")
    assert applicable_criteria((2, 3)) == ("metric", "sign", "ppt", "map")
    assert applicable_criteria((3, 3)) == ("metric", "sign", "ppt", "map")
    assert applicable_criteria((2, 2, 2)) == ("metric", "map", "ppt")


def test_scan_config_validation():
    with pytest.raises(ValueError, match="unknown scan family"):
        ScanConfig(family="ghz").resolved()
    with pytest.raises(ValueError, match="resolution"):
        ScanConfig(family="werner", resolution=1).resolved()
    with pytest.raises(ValueError, match="has no axis"):
        ScanConfig(family="werner", ranges={"x": (0, 1)}).resolved()
    with pytest.raises(ValueError, match="lo < hi"):
        ScanConfig(family="werner", ranges={"v": (0.8, 0.2)}).resolved()
    with pytest.raises(ValueError, match="criterion"):
        ScanConfig(family="werner", criteria=("sharpness",)).resolved()
    with pytest.raises(ValueError, match="criterion"):
        ScanConfig(family="w_noise", criteria=("sign",)).resolved()
    with pytest.raises(ValueError, match="cut"):
        ScanConfig(family="w_noise", cut="14:2").resolved()


def test_bell_diagonal_scan_matches_direct_evaluation():
    config = ScanConfig(family="bell_diagonal", resolution=5,
                        criteria=("metric", "ppt"))
    result = run_scan(config)
    assert result.columns == ("a", "b", "physical", "det_metric", "omega_metric",
                              "det_ppt", "min_eig_ppt")
    assert len(result.rows) == 25
    rows = {(row[0], row[1]): row for row in result.rows}
    # lower triangle a + b <= 1 is physical
    assert rows[(1.0, 1.0)][2] == 0 and rows[(1.0, 1.0)][3] is None
    assert rows[(0.0, 1.0)][2] == 1
    direct = identifier_value(standard_metric(2, 2), bell_diagonal(0.25, 0.5),
                              seed=config.seed, restarts=config.restarts)
    row = rows[(0.25, 0.5)]
    assert row[3] == int(direct.detected)
    assert abs(row[4] - direct.omega) < 1e-9


def test_werner_scan_endpoint_verdicts():
    result = run_scan(ScanConfig(family="werner", resolution=5))
    first, last = result.rows[0], result.rows[-1]
    det_cols = [i for i, c in enumerate(result.columns) if c.startswith("det_")]
    assert all(first[i] == 0 for i in det_cols)  # white noise
    assert all(last[i] == 1 for i in det_cols)   # pure Bell state


def test_weyl_scan_sign_equals_ppt():
    result = run_scan(ScanConfig(family="weyl", resolution=7,
                                 criteria=("sign", "ppt")))
    cols = {c: i for i, c in enumerate(result.columns)}
    n_phys = 0
    for row in result.rows:
        if not row[cols["physical"]]:
            continue
        n_phys += 1
        assert row[cols["det_sign"]] == row[cols["det_ppt"]], (
            f"sign/ppt disagree at {row[:3]}"
        )
    assert n_phys > 50


def test_qutrit_scan_nested_regions():
    result = run_scan(ScanConfig(family="qutrit_werner", resolution=9))
    cols = {c: i for i, c in enumerate(result.columns)}
    for row in result.rows:
        if not row[cols["physical"]]:
            continue
        m, s, p = (row[cols["det_metric"]], row[cols["det_sign"]],
                   row[cols["det_ppt"]])
        assert m <= s <= p, f"region nesting broken at {row[:2]}"


def test_w_noise_scan_has_cut_verdicts():
    result = run_scan(ScanConfig(family="w_noise", resolution=5, cut="13:2"))
    cols = {c: i for i, c in enumerate(result.columns)}
    assert {"det_metric", "det_map", "det_ppt"} <= set(cols)
    top = result.rows[-1]
    assert top[cols["det_metric"]] == 1 and top[cols["det_ppt"]] == 1


def test_render_csv_roundtrip():
    result = run_scan(ScanConfig(family="werner", resolution=3))
    text = render_csv(result)
    parsed = list(csv.reader(io.StringIO(text)))
    assert parsed[0] == list(result.columns)
    assert len(parsed) == 1 + len(result.rows)
    assert float(parsed[1][0]) == 0.0


def test_render_json_structure():
    result = run_scan(ScanConfig(family="qutrit_werner", resolution=3,
                                 fixed={"beta": 0.5}))
    doc = json.loads(render_json(result))
    assert doc["family"] == "qutrit_werner"
    assert doc["fixed"] == {"beta": 0.5}
    assert doc["columns"] == list(result.columns)
    assert len(doc["rows"]) == 9
    assert "conventions" in doc
    assert doc["resolution"] == 3


def test_detection_indicator_werner():
    indicator = detection_indicator("werner", "ppt")
    assert not indicator(0.2)
    assert indicator(0.9)
    with pytest.raises(ValueError):
        detection_indicator("bell_diagonal", "metric")
    with pytest.raises(ValueError):
        detection_indicator("werner", "sharpness")


def test_analyze_state_singlet_full_report():
    report = analyze_state(singlet(), (2, 2), seed=0)
    assert report.dims == (2, 2)
    by_name = {r["criterion"]: r for r in report.results}
    assert set(by_name) == {"metric", "sign", "ppt", "map", "pptgen-functional"}
    assert all(r["detected"] for r in report.results)
    assert abs(by_name["metric"]["omega"] + 0.5) < 1e-9
    assert abs(by_name["sign"]["rhs"] - 3.0) < 1e-9
    assert abs(by_name["ppt"]["min_eigenvalue"] + 0.5) < 1e-9
    assert abs(by_name["map"]["min_eigenvalue"] + 0.25) < 1e-9
    assert abs(by_name["pptgen-functional"]["corr_diag_sum"] + 3.0) < 1e-9
    doc = report.to_dict()
    assert doc["descriptor"] == report.descriptor
    assert "conventions" in doc


def test_analyze_state_validates_inputs():
    with pytest.raises(ValueError, match="dims"):
        analyze_state(singlet(), (2, 3))
    with pytest.raises(ValueError, match="criteri"):
        analyze_state(singlet(), (2, 2), criteria=("sharpness",))
    with pytest.raises(ValueError, match="criteri"):
        analyze_state(w_noise(0.5), (2, 2, 2), criteria=("sign",))


def test_analyze_state_tripartite_all_cuts():
    report = analyze_state(w_noise(1.0), (2, 2, 2), cut="all", seed=0)
    cuts = {r["cut"] for r in report.results}
    assert cuts == {"12:3", "13:2", "23:1"}
    assert len(report.results) == 9
    assert all(r["detected"] for r in report.results)
    assert all("across" in r["meaning"] for r in report.results)


def test_default_ranges_cover_every_axis():
    for family, axes in FAMILY_AXES.items():
        assert set(DEFAULT_RANGES[family]) == set(axes)
