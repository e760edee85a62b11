import io
import json
from pathlib import Path

import pytest

from lie2coh.cli import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, run

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def invoke(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


@pytest.mark.parametrize("name", sorted(p.stem for p in FIXTURES.glob("*.json")
                                        if not p.stem.startswith(("cone", "double"))))
def test_check_shipped_documents(name):
    code, text = invoke("check", str(FIXTURES / f"{name}.json"))
    assert code == EXIT_PASS, text


def test_nabla_squared_reports_zero():
    code, text = invoke("nabla-squared", str(FIXTURES / "aff1-unit.json"), "--max-degree", "3")
    assert code == EXIT_PASS
    assert text.count("0 = 0") >= 3


def test_unit_cohomology_line():
    code, text = invoke("cohomology", str(FIXTURES / "aff1-unit.json"), "--max-degree", "2")
    assert code == EXIT_PASS
    assert "betti 1,1,0" in text


def test_cone_and_spectral_documents():
    assert invoke("cone", str(FIXTURES / "cone-sample.json"))[0] == EXIT_PASS
    assert invoke("spectral", str(FIXTURES / "double-sample.json"))[0] == EXIT_PASS


def test_extension_document_round_trips(tmp_path):
    report = tmp_path / "report.json"
    code, _ = invoke("extend", str(FIXTURES / "aff1-adjoint-extend.json"), "--json-out", str(report))
    assert code == EXIT_PASS
    ext = json.loads(report.read_text())["report"]["extension"]
    doc = tmp_path / "ext.json"
    doc.write_text(json.dumps(ext))
    assert invoke("check", str(doc))[0] == EXIT_PASS


def test_failed_audit_exits_one(tmp_path):
    doc = json.loads((FIXTURES / "aff1-adjoint.json").read_text())
    doc["act"] = [[0, 0, 0, "1"]] + doc.get("act", [])
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, text = invoke("check", str(bad))
    assert code == EXIT_FAIL, text


def test_uniform_signs_fail_on_a_higher_shape():
    assert invoke("vanest", "--fixture", "heis", "--signs", "as-stated")[0] == EXIT_FAIL
    assert invoke("vanest", "--fixture", "abelian-1")[0] == EXIT_PASS


def test_malformed_document_names_the_location(tmp_path, capsys):
    doc = json.loads((FIXTURES / "aff1-unit.json").read_text())
    doc["g"]["dim"] = "two"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _ = invoke("check", str(bad))
    assert code == EXIT_INPUT
    assert "$.g.dim" in capsys.readouterr().err


def test_missing_inputs_are_input_errors():
    assert invoke("check")[0] == EXIT_INPUT
    assert invoke("vanest")[0] == EXIT_INPUT
    assert invoke("cone")[0] == EXIT_INPUT


def test_output_is_deterministic():
    a = invoke("cohomology", str(FIXTURES / "glphi-1-1-adjoint.json"), "--max-degree", "3")
    b = invoke("cohomology", str(FIXTURES / "glphi-1-1-adjoint.json"), "--max-degree", "3")
    assert a == b
