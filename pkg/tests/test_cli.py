import json

import pytest

from fillcert import cli, verdict
from fillcert.errors import InvariantViolation


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decide_json(capsys):
    code, out, _ = run(capsys, "decide", "--n", "3", "--k", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["outcome"] == {"kind": "Obstructed", "detail": "rp_nonfillable"}


def test_decide_text_wording(capsys):
    code, out, _ = run(capsys, "decide", "--n", "4", "--k", "2", "--format", "text")
    assert code == 0
    assert "Inconclusive (obstruction criteria not met: total Chern class trivial)" in out


def test_decide_improved(capsys):
    code, out, _ = run(capsys, "decide", "--n", "5", "--k", "3", "--improved")
    assert code == 0 and json.loads(out)["mode"] == "improved"


@pytest.mark.parametrize("argv", [
    ["decide", "--n", "1", "--k", "2"],
    ["decide", "--n", "three", "--k", "2"],
    ["decide", "--k", "2"],
    ["chern", "--n", "3", "--k", "2", "--mod", "4"],
    ["orbits", "--n", "3", "--k", "2", "--action", "1.5.2"],
    ["orbits", "--n", "3", "--k", "2", "--action", "3"],
    ["configs", "--n", "3", "--k", "2", "--positive", "check:0"],
    ["configs", "--n", "3", "--k", "2", "--positive", "bogus:0:1"],
    ["replay", "/nonexistent/cert.json"],
    [],
])
def test_invalid_input_exit_1(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 1


def test_help_exit_0(capsys):
    assert run(capsys, "--help")[0] == 0


def test_chern(capsys):
    code, out, _ = run(capsys, "chern", "--n", "3", "--k", "2", "--mod", "2")
    assert code == 0 and json.loads(out)["coeffs"] == [1, 1, 1]


def test_orbits_rational_action(capsys):
    code, out, _ = run(capsys, "orbits", "--n", "3", "--k", "2", "--action", "55/27")
    assert code == 0
    rows = [json.loads(x) for x in out.splitlines()]
    assert [r["orbit"] for r in rows] == ["gamma_0^1", "gamma_1^1", "gamma_2^1", "gamma_0^2"]
    assert rows[0]["period"] == "55/54"


def test_configs(capsys):
    code, out, _ = run(capsys, "configs", "--n", "5", "--k", "3", "--positive", "check:0:3")
    rows = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(rows) == 3
    assert all(r["virtual_dim"] < 0 for r in rows)
    code, out, _ = run(capsys, "configs", "--n", "3", "--k", "2", "--positive", "check:0:2", "--no-point")
    assert code == 0


def test_replay_ok_and_mismatch(capsys, tmp_path):
    code, out, _ = run(capsys, "decide", "--n", "4", "--k", "3")
    cert = tmp_path / "cert.json"
    cert.write_text(out)
    code, out, _ = run(capsys, "replay", str(cert))
    assert code == 0 and "replay ok" in out
    doc = json.loads(cert.read_text())
    doc["outcome"]["detail"] = "lens_direct_search"
    cert.write_text(json.dumps(doc))
    code, _, err = run(capsys, "replay", str(cert))
    assert code == 3 and "mismatch" in err


def test_replay_garbage_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "replay", str(bad))[0] == 1
    bad.write_text("[]")
    assert run(capsys, "replay", str(bad))[0] == 3


def test_scan_writes_table(capsys, tmp_path):
    out_file = tmp_path / "scan.json"
    code, out, _ = run(capsys, "scan", "--n-min", "3", "--n-max", "9", "--k", "2", "3", "--out", str(out_file))
    assert code == 0
    rows = json.loads(out_file.read_text())["rows"]
    assert [(r["k"], r["n"]) for r in rows] == [(k, n) for k in (2, 3) for n in range(3, 10)]
    assert len(out.splitlines()) == len(rows)


def test_scan_empty_range(capsys, tmp_path):
    out_file = tmp_path / "scan.json"
    code, _, _ = run(capsys, "scan", "--n-min", "9", "--n-max", "3", "--k", "2", "--out", str(out_file))
    assert code == 0 and json.loads(out_file.read_text()) == {"rows": []}


def test_invariant_violation_exit_2(capsys, monkeypatch, tmp_path):
    def broken(*args, **kwargs):
        raise InvariantViolation("forced")
    monkeypatch.setattr(verdict, "decide", broken)
    assert run(capsys, "decide", "--n", "3", "--k", "2")[0] == 2
    code, out, _ = run(capsys, "scan", "--n-min", "3", "--n-max", "4", "--k", "2",
                       "--out", str(tmp_path / "s.json"))
    assert code == 2 and "invariant" in out
