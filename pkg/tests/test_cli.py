import json

import numpy as np
import pytest

from rlink import catalog
from rlink.cli import main


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def _curve_doc(curve):
    return {"label": curve.label, "degree": curve.degree,
            "coeffs": np.asarray(curve.coeffs).tolist()}


def test_klein_command(tmp_path, capsys):
    path = _write(tmp_path, "acnodal.json", _curve_doc(catalog.acnodal_cubic()))
    assert main(["klein", path]) == 0
    assert capsys.readouterr().out.strip() == "F=3 B=0 h=0 i=0 : 3 = 3 PASS"


def test_lk_command(tmp_path, capsys):
    a = _write(tmp_path, "a.json", {"coeffs": [[1, 0], [0, 1], [0, 0], [0, 0]]})
    b = _write(tmp_path, "b.json", {"coeffs": [[0, 0], [0, 0], [1, 0], [0, 1]]})
    assert main(["lk", a, b]) == 0
    assert capsys.readouterr().out.strip() in ("lk = 1/2", "lk = -1/2")


def test_fraction_coefficients(tmp_path, capsys):
    a = _write(tmp_path, "a.json", {"coeffs": [["1/2", 0], [0, "1/2"], [0, 0], [0, 0]]})
    b = _write(tmp_path, "b.json", {"coeffs": [[0, 0], [0, 0], [1, 0], [0, 1]]})
    assert main(["lk", a, b]) == 0


def test_analyze_report(tmp_path):
    path = _write(tmp_path, "tc.json", _curve_doc(catalog.twisted_cubic()))
    out = tmp_path / "r.json"
    svg = tmp_path / "d.svg"
    assert main(["analyze", path, "--centers", "3", "--report", str(out), "--svg", str(svg)]) == 0
    rep = json.loads(out.read_text())
    assert rep["osc"]["twice_value"] == 3
    assert rep["wlambda"]["value"] == 1
    assert rep["tightness"]["tight"] is True
    assert all(k["passed"] for k in rep["klein"])
    assert set(rep["versions"]) == {"package", "schema"}
    assert svg.read_text().startswith("<svg")


def test_analyze_rejects_singular_curve(tmp_path):
    c = np.array([[1, 0, 0, 0, 0], [-1, 0, 1, 0, 0], [0, -1, 0, 1, 0], [0, 0, 0, 0, 1]])
    path = _write(tmp_path, "node.json", {"coeffs": c.tolist()})
    out = tmp_path / "r.json"
    assert main(["analyze", path, "--report", str(out)]) == 2
    rep = json.loads(out.read_text())
    assert rep["failed"] == "validation" and rep["validation"]["witness"]["node_pairs"]


@pytest.mark.parametrize("doc,field", [
    ({"coeffs": [[1, 0], [0, 1], [0, 0]]}, "coeffs"),
    ({"coeffs": [[1, 0], [0, 1], [0, 0, 1], [0, 0]]}, "coeffs[2]"),
    ({"coeffs": [[1, 0], [0, 1], [0, "a"], [0, 0]]}, "coeffs[2][1]"),
    ({"coeffs": [[1, 0], [0, 1], [0, 0], [0, 0]], "orientation": 2}, "orientation"),
    ({"degree": 1}, "coeffs"),
])
def test_bad_input_names_field(tmp_path, capsys, doc, field):
    path = _write(tmp_path, "bad.json", doc)
    assert main(["analyze", path]) == 1
    assert f"error: {field}:" in capsys.readouterr().err


def test_unreadable_file(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert main(["klein", str(p)]) == 1
    assert main(["klein", str(tmp_path / "missing.json")]) == 1


def test_intersecting_lines_fail_check(tmp_path):
    a = _write(tmp_path, "a.json", {"coeffs": [[1, 0], [0, 1], [0, 0], [0, 0]]})
    b = _write(tmp_path, "b.json", {"coeffs": [[1, 0], [0, 0], [0, 1], [0, 0]]})
    assert main(["lk", a, b]) == 2


def test_family_bad_range(tmp_path):
    path = _write(tmp_path, "f.json", {"lambda_coeffs": [[[1], [0]]] * 4, "range": [1, 0]})
    assert main(["family", path]) == 1
