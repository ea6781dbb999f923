import csv
import io
import json

import pytest

from qudo.cli import main
from qudo.config import RunConfig


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cocycle_verify(capsys):
    code, out, _ = run(capsys, "cocycle", "verify", "--N", "2")
    rep = json.loads(out)
    assert code == 0 and rep["ok"]
    assert rep["schema_version"] == 1 and rep["command"] == "cocycle verify"
    assert rep["result"]["nontrivial_class_witness"] == ["s", "r^4"]


def test_reports_are_reproducible(capsys):
    a = run(capsys, "gate", "phase", "--N", "1", "--trials", "3", "--no-timestamp")[1]
    b = run(capsys, "gate", "phase", "--N", "1", "--trials", "3", "--no-timestamp")[1]
    assert a == b
    rep = json.loads(a)
    assert "timestamp" not in rep and rep["result"]["relative_phase"] == "exp(i*pi/4)"


def test_timestamp_present_by_default(capsys):
    rep = json.loads(run(capsys, "gate", "power", "--N", "1", "--k", "8")[1])
    assert "timestamp" in rep and rep["result"]["is_identity"]


def test_anyon_table_csv(capsys):
    code, out, _ = run(capsys, "anyons", "table", "--N", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 22
    assert set(rows[0]) == {"label", "class_size", "irrep_dim", "quantum_dim"}
    assert sum(int(r["quantum_dim"]) ** 2 for r in rows) == 64


@pytest.mark.parametrize("target", ["z2z2", "z2"])
def test_codeswitch(capsys, target):
    code, out, _ = run(capsys, "codeswitch", "--N", "1", "--target", target)
    rep = json.loads(out)
    assert code == 0
    assert set(rep["result"]["lagrangian_images"]) == {"<rs>", "<s>", "<r>"}
    assert rep["result"]["confined"]


def test_codeswitch_bad_target(capsys):
    code, _, err = run(capsys, "codeswitch", "--target", "z3")
    assert code == 2 and "z2z2" in err


def test_stabilizers(capsys):
    code, out, _ = run(capsys, "stabilizers", "commute", "--N", "1", "--samples", "500", "--no-exhaustive")
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(capsys, "stabilizers", "check-state", "--N", "1")
    res = json.loads(out)["result"]
    assert code == 0 and res["single_L^r_error"]["n_plaquette_syndromes"] == 2


def test_compile_emit(capsys):
    code, out, _ = run(capsys, "compile", "--n", "3", "--op", "L^r", "--emit", "qasm")
    ent = json.loads(out)["result"]["operators"]["L^r"]
    assert code == 0 and ent["listing"] == "cx q[1], q[0];\nx q[1];\n" and ent["matches_reference"]


def test_compile_unknown_op(capsys):
    assert run(capsys, "compile", "--n", "3", "--op", "nope")[0] == 2


def test_hierarchy_cap(capsys):
    code, _, err = run(capsys, "hierarchy", "--n", "7")
    assert code == 2 and "unsupported: dense analyzer capped at n=5" in err


def test_hierarchy_n3(capsys):
    code, out, _ = run(capsys, "hierarchy", "--n", "3")
    res = json.loads(out)["result"]
    assert code == 0 and res["max_level"] == 2 and res["logical_gate"]["level"] == 3


def test_report_tables(capsys, tmp_path):
    path = tmp_path / "tables.csv"
    code, out, _ = run(capsys, "report", "tables", "--n", "4", "--out", str(path))
    assert code == 0 and out == ""
    text = path.read_text()
    assert "conjectured n-1, unverified" in text
    assert "T^(1/2)=P(pi/8)" in text


def test_verification_failure_exit_code(capsys, monkeypatch):
    import qudo.cli as cli
    monkeypatch.setitem(cli.COMMANDS, "gate", lambda cfg: (False, {"witness": "id r"}))
    code, out, _ = run(capsys, "gate", "phase")
    assert code == 1 and json.loads(out)["ok"] is False


def test_term_cap_is_usage_error(capsys, monkeypatch):
    import qudo.cli as cli
    from qudo.lattice import TermCapExceeded

    def boom(cfg):
        raise TermCapExceeded("too many terms")
    monkeypatch.setitem(cli.COMMANDS, "stabilizers", boom)
    assert run(capsys, "stabilizers", "commute")[0] == 2


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command="gate", N=0).validate()
    echo = RunConfig(command="gate", out="x.json").echo()
    assert "out" not in echo and "timestamp" not in echo
