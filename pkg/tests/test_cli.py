import json

import pytest

from conftest import FIXTURES
from geolin3.cli import Options, cmd_check, cmd_generate, main
from geolin3.parser import parse

EQ44 = "y''' - 3*x^2*y'^5 - 7*y'^3 - (6/x^2)*y' = 0"
EQ45 = ("y''' - (3*x^2/y^4)*y'^5 - (3*x/y^3)*y'^4 + (6/y^2)*y'^3 "
        "+ (6/(x*y))*y'^2 - (6/x^2)*y' = 0")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name, code", [
    ("eq43_second.ode", 0),
    ("eq44_quintic.ode", 0),
    ("eq45_quintic.ode", 0),
    ("eq45_semilinear.ode", 0),
    ("eq45_perturbed.ode", 1),
    ("nonlinearizable_second.ode", 1),
    ("not_in_class.ode", 2),
    ("example1_degenerate.ode", 0),
    ("example3_geodesic.ode", 0),
])
def test_check_exit_codes(capsys, name, code):
    assert run(capsys, "check", str(FIXTURES / name))[0] == code


def test_check_reports_coefficients(capsys):
    code, out, _ = run(capsys, "check", str(FIXTURES / "eq44_quintic.ode"))
    assert code == 0
    for line in ("#   c: x", "#   g: 0", "#   h: 2/x", "#   d: 0"):
        assert line in out


def test_failing_residual_is_named(capsys):
    _, out, _ = run(capsys, "check", str(FIXTURES / "eq45_perturbed.ode"))
    assert "# failing:\n#   - epsilon_match" in out


def test_input_errors_exit_4(capsys, tmp_path):
    bad = tmp_path / "bad.ode"
    bad.write_text("y''' + y''^2 = 0\n")
    code, out, err = run(capsys, "check", str(bad))
    assert code == 4 and out == "" and "y''^2" in err
    assert run(capsys, "check", str(tmp_path / "missing.ode"))[0] == 4
    assert run(capsys, "verify", str(FIXTURES / "eq45_perturbed.ode"))[0] == 4


def test_report_reparses_to_same_verdict(capsys, tmp_path):
    _, first, _ = run(capsys, "check", str(FIXTURES / "eq45_quintic.ode"))
    again = tmp_path / "again.ode"
    again.write_text(first)
    _, second, _ = run(capsys, "check", str(again))
    assert second == first


def test_json_report(capsys):
    code, out, _ = run(capsys, "check", "--json", str(FIXTURES / "eq45_quintic.ode"))
    data = json.loads(out)
    assert code == 0 and data["status"] == "linearizable" and data["exit_code"] == 0
    assert data["gauge"]["e"] == "-1/x" and data["gauge"]["f"] == "1/y"


def test_linearize_example3_summary(capsys):
    code, out, _ = run(capsys, "linearize", str(FIXTURES / "eq45_quintic.ode"))
    assert code == 0
    assert "#   summary: A*x*y + B*x/y = 1, verified" in out


def test_linearize_example2_partial_then_trig(capsys):
    _, out, _ = run(capsys, "linearize", str(FIXTURES / "eq44_quintic.ode"))
    assert "#   status: partial" in out and "p = 1; q = 0; r = x^2" in out
    assert "declare extension symbols" in out
    _, out, _ = run(capsys, "linearize", str(FIXTURES / "eq44_trig_map.ode"))
    assert "#   summary: A*x*c + B*x*s = 1, verified" in out


def test_degenerate_needs_hint(capsys, tmp_path):
    text = (FIXTURES / "example1_degenerate.ode").read_text()
    bare = tmp_path / "bare.ode"
    bare.write_text("\n".join(line for line in text.splitlines() if not line.startswith("hint:")))
    code, out, _ = run(capsys, "check", "--hint", str(FIXTURES / "example1.hint"), str(bare))
    assert code == 0 and "#   name: ef0" in out
    code, out, _ = run(capsys, "check", str(bare))
    assert code == 0 and "#   g: 2/y" in out
    assert run(capsys, "check", str(FIXTURES / "undecided.ode"))[0] == 3


@pytest.mark.parametrize("name, code", [
    ("eq45_verify.ode", 0),
    ("eq45_wrong_map.ode", 1),
    ("y3_zero.ode", 0),
    ("eq44_trig_map.ode", 0),
])
def test_verify_exit_codes(capsys, name, code):
    assert run(capsys, "verify", str(FIXTURES / name))[0] == code


def test_verify_reports_scale(capsys):
    _, out, _ = run(capsys, "verify", str(FIXTURES / "eq45_verify.ode"))
    assert "#   transformation: true\n#   scale: 2" in out


def test_generate_from_map_reproduces_eq45():
    report = cmd_generate((FIXTURES / "example3_map.ode").read_text(), Options())
    [fixture] = report.fields["fixtures"]
    assert fixture["quintic"] == EQ45
    assert fixture["solution"] == "A*x*y + B*x/y = 1"


def test_generate_from_eq2_reproduces_eq44():
    report = cmd_generate((FIXTURES / "eq43_second.ode").read_text(), Options())
    assert report.fields["fixtures"][0]["quintic"] == EQ44


def test_generated_batch_all_check_linearizable():
    report = cmd_generate(None, Options(), seed=0, count=20)
    assert len(report.fields["documents"]) == 20
    for doc in report.fields["documents"]:
        assert cmd_check(doc, Options()).exit_code == 0


def test_generated_document_runs_with_file_gauge(capsys, tmp_path):
    report = cmd_generate(None, Options(), seed=3, count=1)
    path = tmp_path / "sample.ode"
    path.write_text(report.fields["documents"][0])
    code, out, _ = run(capsys, "linearize", "--gauge", "file", str(path))
    assert code == 0 and "#   summary:" in out and "verified" in out


def test_seed_environment_override(capsys, monkeypatch):
    monkeypatch.setenv("GEOLIN3_SEED", "5")
    _, a, _ = run(capsys, "generate", "--documents")
    monkeypatch.delenv("GEOLIN3_SEED")
    _, b, _ = run(capsys, "generate", "--documents", "--seed", "5")
    assert a == b
    assert parse(a).ode is not None


def test_timing_only_when_requested(capsys):
    _, out, _ = run(capsys, "check", str(FIXTURES / "eq44_quintic.ode"))
    assert "timing" not in out
    _, out, _ = run(capsys, "check", "--timing", str(FIXTURES / "eq44_quintic.ode"))
    assert "# timing_seconds:" in out


def test_window_flag(capsys):
    code, out, _ = run(capsys, "linearize", "--window", "0:0,0:0", str(FIXTURES / "eq45_quintic.ode"))
    assert code == 0 and "not-found" in out
    assert run(capsys, "check", "--window", "bad", str(FIXTURES / "eq45_quintic.ode"))[0] == 4
