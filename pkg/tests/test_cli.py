import json

import numpy as np
import pytest

from entmaps.cli import main, read_matrix_literal
from entmaps.states import singlet


def _write_matrix(path, rho):
    d = rho.shape[0]
    lines = [str(d)]
    for val in rho.ravel():
        lines.append(f"{float(val.real)!r} {float(val.imag)!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def test_analyze_descriptor_to_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["analyze", "werner v=0.8", "--criteria", "metric,ppt",
                 "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["dims"] == [2, 2]
    assert {r["criterion"] for r in doc["results"]} == {"metric", "ppt"}
    assert all(r["detected"] for r in doc["results"])


def test_analyze_matrix_file(tmp_path):
    path = tmp_path / "state.txt"
    _write_matrix(path, singlet())
    out = tmp_path / "report.json"
    code = main(["analyze", "--matrix-file", str(path), "--criteria", "sign",
                 "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert abs(doc["results"][0]["rhs"] - 3.0) < 1e-9


def test_read_matrix_literal_errors(tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("")
    with pytest.raises(ValueError, match="empty"):
        read_matrix_literal(str(path))
    path.write_text("two\n1 0\n")
    with pytest.raises(ValueError, match="integer dimension"):
        read_matrix_literal(str(path))
    path.write_text("2\n1 0\n0 0\n0 0\n")
    with pytest.raises(ValueError, match="expected 4 entry lines"):
        read_matrix_literal(str(path))
    path.write_text("2\n1 0\n0 0\n0 0\n1 0 9\n")
    with pytest.raises(ValueError, match="expected 're im'"):
        read_matrix_literal(str(path))
    path.write_text("2\n1 0\n0 0\n0 0\nx y\n")
    with pytest.raises(ValueError, match="non-numeric"):
        read_matrix_literal(str(path))


def test_matrix_file_roundtrip(tmp_path):
    path = tmp_path / "m.txt"
    _write_matrix(path, singlet())
    lit = read_matrix_literal(str(path))
    assert np.max(np.abs(lit.to_array() - singlet())) < 1e-15


def test_scan_to_csv_file(tmp_path):
    out = tmp_path / "grid.csv"
    code = main(["scan", "--family", "werner", "--resolution", "5",
                 "--range", "v=0:0.5", "--criteria", "ppt",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "v,physical,det_ppt,min_eig_ppt"
    assert len(lines) == 6
    assert lines[-1].startswith("0.5,")


def test_scan_json_to_stdout(capsys):
    code = main(["scan", "--family", "werner", "--resolution", "3",
                 "--format", "json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["family"] == "werner"


def test_threshold_command(capsys):
    code = main(["threshold", "--family", "werner", "--criteria", "ppt",
                 "--range", "0:1", "--threshold-tol", "1e-3"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["threshold"] - 1.0 / 3.0) < 5e-3


def test_error_exits(tmp_path, capsys):
    assert main(["scan", "--family", "nope"]) == 2
    assert main(["scan", "--family", "werner", "--range", "v=0,1"]) == 2
    assert main(["scan", "--family", "werner", "--range", "v=a:b"]) == 2
    assert main(["threshold", "--family", "werner", "--criteria", "metric,sign"]) == 2
    assert main(["threshold", "--family", "werner", "--criteria", "ppt",
                 "--range", "0to1"]) == 2
    assert main(["analyze", "werner v=0.5", "--dims", "2,x"]) == 2
    assert main(["analyze", "--matrix-file", str(tmp_path / "missing.txt")]) == 2
    assert main(["verify", "--counts", "oracle"]) == 2
    assert main(["verify", "--counts", "oracle=x"]) == 2
    capsys.readouterr()


def test_unknown_subcommand_exits():
    with pytest.raises(SystemExit):
        main(["polish"])


_TINY_COUNTS = []
for name, n in (("duality", 2), ("transpose_composition", 2), ("isomorphism", 2),
                ("coefficient_formula", 2), ("block_positivity", 1),
                ("separable_soundness", 5), ("map_implication", 3),
                ("pptgen_dual", 2), ("pptgen_vs_ppt", 5), ("oracle", 2),
                ("sign_equivalence", 5), ("monotone_ascent", 3),
                ("cross_norm_relation", 3), ("bloch_bound", 3),
                ("biproduct_soundness", 3), ("dual_decomposition", 2)):
    _TINY_COUNTS += ["--counts", f"{name}={n}"]


def test_verify_command_exit_codes(tmp_path, capsys):
    out = tmp_path / "verify.json"
    code = main(["verify", "--out", str(out)] + _TINY_COUNTS)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True
    text = capsys.readouterr().out
    assert text.count("PASS") == 19
    assert "OK: 19/19" in text

    code = main(["verify", "--inject-corrupt"] + _TINY_COUNTS)
    assert code == 1
    assert "FAILED" in capsys.readouterr().out


def test_http_backend_routes_through_server(monkeypatch, capsys):
    from fastapi.testclient import TestClient
    from entmaps.service.app import create_app

    client = TestClient(create_app())

    def fake_post(url, json=None, timeout=None):
        assert url.startswith("http://fake-host")
        return client.post(url.removeprefix("http://fake-host"), json=json)

    import httpx
    monkeypatch.setattr(httpx, "post", fake_post)
    code = main(["analyze", "werner v=0.9", "--criteria", "ppt",
                 "--server", "http://fake-host"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["results"][0]["detected"] is True
    # server-side errors surface as exit code 2
    code = main(["analyze", "nebula v=1", "--server", "http://fake-host"])
    assert code == 2
