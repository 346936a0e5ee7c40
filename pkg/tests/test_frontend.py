import json

import pytest

from eqhom.cli import cell_json, cli_dispatch, emit_json
from eqhom.chains import enumerate_chains
from eqhom.parser import (
    ParseError,
    parse_presentation,
    parse_srs,
    print_presentation,
)

ABELIAN = """\
sorts X
op plus : X X -> X
op zero : -> X
var x : X
rule r1 : plus(x, zero) -> x
rule r2 : plus(zero, x) -> x
"""


def test_parse_abelian_counts():
    trs = parse_presentation(ABELIAN)
    assert len(trs.signature.sorts) == 1
    assert len(trs.signature.ops) == 2
    assert len(trs.rules) == 2


def test_parse_rejects_variable_lhs():
    text = ABELIAN + "rule bad : x -> x\n"
    with pytest.raises(ParseError) as err:
        parse_presentation(text)
    assert err.value.kind == "variable-on-lhs-root"


def test_parse_rejects_free_rhs_variable():
    text = """\
sorts X
op f : X -> X
op g : X -> X
var x : X
var y : X
rule bad : f(x) -> g(y)
"""
    with pytest.raises(ParseError) as err:
        parse_presentation(text)
    assert err.value.kind == "rhs-variable-not-in-lhs"


def test_parse_error_kinds():
    with pytest.raises(ParseError) as err:
        parse_presentation("sorts X\nop f : X -> Y\n")
    assert err.value.kind == "undeclared-name"
    with pytest.raises(ParseError) as err:
        parse_presentation("sorts X\nop f : X -> X\nvar x : X\nrule r : f(x -> x\n")
    assert err.value.kind == "syntax-error"
    with pytest.raises(ParseError) as err:
        parse_presentation("flub X\n")
    assert err.value.kind == "syntax-error"


def test_parse_print_round_trip(ab_trs, group_trs, unreduced_trs):
    for trs in (ab_trs, group_trs, unreduced_trs):
        assert parse_presentation(print_presentation(trs)) == trs


def test_order_directive(data_dir):
    text = (data_dir / "abelian_unit.lwv").read_text() + "order r2 r1\n"
    trs = parse_presentation(text)
    assert [r.name for r in trs.rules] == ["r2", "r1"]
    with pytest.raises(ParseError):
        parse_presentation(ABELIAN + "order r1\n")


def test_budget_directive():
    trs = parse_presentation(ABELIAN + "budget steps 123\nbudget join 45\n")
    assert trs.step_budget == 123 and trs.join_budget == 45
    assert parse_presentation(print_presentation(trs)) == trs


def test_parse_srs(z2_srs):
    assert z2_srs.alphabet == ("a",)
    assert z2_srs.rules[0].lhs == ("a", "a")
    assert z2_srs.rules[0].rhs == ()
    with pytest.raises(ParseError):
        parse_srs("letters a\nrule r : -> a\n")


def test_cell_json_matches_contract(ab_trs):
    two = enumerate_chains(ab_trs, 2)[2][0]
    got = cell_json(two)
    assert got["entries"][0]["terms"] == ["plus(x1,x2)"]
    assert got["entries"][1]["terms"] == ["x1", "zero"]
    assert got["entries"][0]["context"] == ["X", "X"]


def test_emit_json_versioned_and_deterministic():
    a = emit_json({"payload": [1, 2, 3]})
    b = emit_json({"payload": [1, 2, 3]})
    assert a == b
    assert json.loads(a)["version"] == 1
    assert emit_json({"empty": []}).count('"empty": []') == 1


def _run(capsys, *argv):
    code = cli_dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_check(capsys, data_dir):
    code, out, _ = _run(capsys, "check", str(data_dir / "abelian_unit.lwv"))
    assert code == 0
    assert "complete (reduced + locally confluent + termination probed): yes" in out
    code, out, _ = _run(capsys, "check", str(data_dir / "abelian_unit.lwv"),
                        "--assume-terminating")
    assert code == 0 and "acknowledged" in out


def test_cli_chains_table_and_json(capsys, data_dir):
    path = str(data_dir / "abelian_unit.lwv")
    code, out, _ = _run(capsys, "chains", path, "--max-dim", "3")
    assert code == 0
    assert "dimension 3: 1 chain(s)" in out
    assert "<(plus(x1,x2)); (x1,zero); (zero)>" in out
    code, out, _ = _run(capsys, "chains", path, "--max-dim", "4", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["version"] == 1
    dims = {d["dim"]: d for d in data["chains"]}
    assert dims[4]["cells"] == []
    assert dims[2]["count"] == 2


def test_cli_homology_json(capsys, data_dir):
    code, out, _ = _run(capsys, "homology", str(data_dir / "abelian_unit.lwv"),
                        "--max-dim", "2", "--json")
    assert code == 0
    data = json.loads(out)
    rec = [r for r in data["homology"] if r["dim"] == 2][0]
    assert rec["H"] == {"rank": 0, "torsion": []}
    assert rec["chains"] == 2
    mats = {m["dim"]: m["entries"] for m in data["matrices"]}
    assert mats[1] == [[1], [-1]]  # dense integer rows, one per chain
    assert mats[3] == [[-1, 1]]


def test_cli_homology_group_inequality_line(capsys, data_dir):
    code, out, _ = _run(capsys, "homology", str(data_dir / "group.lwv"),
                        "--max-dim", "2")
    assert code == 0
    assert "axiom-count bound" in out


def test_cli_inequality(capsys, data_dir):
    code, out, _ = _run(capsys, "inequality", str(data_dir / "group.lwv"), "--dim", "2")
    assert code == 0
    assert "[holds]" in out and "VIOLATED" not in out


def test_cli_resolution(capsys, data_dir):
    code, out, _ = _run(capsys, "resolution", str(data_dir / "abelian_unit.lwv"),
                        "--max-dim", "2", "--mode", "count")
    assert code == 0
    assert "d ->" in out


def test_cli_reduce(capsys, data_dir):
    code, out, _ = _run(capsys, "reduce", str(data_dir / "unreduced.lwv"))
    assert code == 0
    assert "rule r3 : d(x) -> x" in out
    assert "r4" not in out


def test_cli_monoid(capsys, data_dir):
    path = str(data_dir / "z2.srs")
    code, out, _ = _run(capsys, "monoid", "chains", path, "--max-dim", "3")
    assert code == 0
    code, out, _ = _run(capsys, "monoid", "homology", path, "--max-dim", "3")
    assert code == 0
    assert "H_1: Z/2" in out and "H_3: Z/2" in out


def test_cli_exit_codes(capsys, data_dir, tmp_path):
    code, _, err = _run(capsys, "chains", "missing.lwv", "--max-dim", "2")
    assert code == 1 and "no such file" in err

    code, _, err = _run(capsys, "homology", str(data_dir / "group.lwv"),
                        "--max-dim", "2", "--coeff", "6")
    assert code == 4

    nonconfluent = tmp_path / "bad.lwv"
    nonconfluent.write_text(
        "sorts X\nop f : X -> X\nop a : -> X\nop b : -> X\nvar x : X\n"
        "rule r1 : f(x) -> a\nrule r2 : f(x) -> b\n")
    code, out, _ = _run(capsys, "check", str(nonconfluent))
    assert code == 2

    loop = tmp_path / "loop.lwv"
    loop.write_text(
        "sorts X\nop f : X -> X\nop c : -> X\nvar x : X\n"
        "rule r : f(x) -> f(x)\nbudget steps 100\n")
    code, _, _ = _run(capsys, "check", str(loop))
    assert code == 3

    code, _, err = _run(capsys, "chains", str(loop), "--max-dim", "2")
    assert code in (2, 3)  # refused: not certified complete

    code, _, _ = _run(capsys, "bogus-command")
    assert code == 1
