import json

import pytest

from cmzg.cli import run


def out_of(capsys, argv):
    code = run(argv)
    return code, capsys.readouterr()


def test_cb_ranks_table(capsys):
    code, cap = out_of(capsys, ["zg", "cb-ranks"])
    assert code == 0
    assert "space rank     2" in cap.out
    assert [l.split()[-1] for l in cap.out.splitlines()] == ["0", "1", "1", "2", "2", "2"]


def test_nilpotency_message(capsys):
    code, cap = out_of(capsys, ["rad", "nilpotency", "--bound", "6"])
    assert code == 0
    assert cap.out.strip() == "omega+2 confirmed (witness gf ≠ 0; all triple rad^ω compositions zero)"


def test_bad_input_is_analysis_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"X": [[1, 0], [0, 0]]}))
    code, cap = out_of(capsys, ["decompose", "--in", str(bad)])
    assert code == 1 and "NonSquareZero" in cap.err


def test_decompose_from_file(tmp_path, capsys):
    f = tmp_path / "m.json"
    f.write_text(json.dumps([[0, [0, 0, 1]], [0, 0]]))
    code, cap = out_of(capsys, ["decompose", "--in", str(f), "--output", "json"])
    assert code == 0 and json.loads(cap.out)["summands"] == ["I2"]


@pytest.mark.parametrize("argv", [["--prec", "3", "hom", "R", "R"], ["--bound", "1", "mdim"],
                                  ["--field", "Fp(2)", "hom", "R", "R"], ["nosuch"],
                                  ["hom", "R", "I-1"], ["formula", "leq", "pt(R,x)"]])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        if run(argv) == 2:
            raise SystemExit(2)
    assert exc.value.code == 2


def test_parse_error_exit(capsys):
    code, cap = out_of(capsys, ["formula", "parse", "pt(I2,"])
    assert code == 1 and "ParseError" in cap.err


def test_formula_subcommands(capsys):
    assert out_of(capsys, ["formula", "leq", "pt(m, x*y)", "pt(I2, x*y)"])[1].out.strip() == "true"
    assert out_of(capsys, ["formula", "eval", "pt(I2, x*y)", "R~"])[1].out.strip().endswith("xy^-1R~")


def test_interval_prints_ordinal(capsys):
    code, cap = out_of(capsys, ["interval", "pt(Iinf, x*y)", "pt(Iinf, x)", "--bound", "6"])
    assert "type omega+1" in cap.out


def test_quilt_export_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.dot", tmp_path / "b.dot"
    run(["quilt", "export", "--bound", "4", "--dot", str(a)])
    run(["quilt", "export", "--bound", "4", "--dot", str(b), "--json", str(tmp_path / "g.json")])
    assert a.read_bytes() == b.read_bytes()
    assert json.loads((tmp_path / "g.json").read_text())["orientation"] == "reversed"


def test_global_flags_before_subcommand(capsys):
    _, cap = out_of(capsys, ["--bound", "3", "--output", "json", "zg", "basis", "Iinf"])
    assert len(json.loads(cap.out)) == 4


def test_accept_subset(capsys):
    code, cap = out_of(capsys, ["accept", "--only", "5,12"])
    assert code == 0 and cap.out.count("[PASS]") == 2


def test_interval_wrong_order_is_usage_error(capsys):
    assert run(["interval", "pt(Iinf,xy)", "pt(I0,x)"]) == 2
    assert "not below" in capsys.readouterr().err
