import json

import pytest

from fusionmod.cli import build_parser, main
from fusionmod.errors import CheckFailure


@pytest.fixture
def run(tmp_path, capsys):
    """main() with an absent config and a private cache; returns (code, stdout, stderr)."""

    def go(*argv):
        code = main([*argv, "--config", str(tmp_path / "none.yaml"), "--cache-dir", str(tmp_path / "cache")])
        out, err = capsys.readouterr()
        return code, out, err

    return go


def test_alcove_summary(run):
    code, out, _ = run("alcove", "--n", "6", "--k", "6")
    assert code == 0
    obj = json.loads(out)
    assert obj["size"] == 462
    assert obj["central_charge"] == "35/2"


def test_invariant_identity(run):
    code, out, _ = run("invariant", "--n", "3", "--k", "2", "--d", "1", "--sign", "plus", "--check")
    assert code == 0
    obj = json.loads(out)
    assert obj["entries"] == [[i, i, 1] for i in range(6)]
    assert obj["check"]["physical"]


def test_classify_sl6_level6(run):
    code, out, _ = run("classify", "--n", "6", "--k", "6")
    assert code == 0
    assert json.loads(out)["count"] == 16


def test_cosets_markdown(run):
    code, out, _ = run("cosets", "--n", "5", "--k", "4", "--format", "md")
    assert code == 0
    header = out.splitlines()[0]
    assert [c.strip() for c in header.split("|")[1:-1]] == ["algebra", "eqbr", "count"]


def test_weights_csv(run):
    code, out, _ = run("alcove", "--n", "2", "--k", "1", "--weights", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "index,rows,boxes,t,h,qdim"
    assert len(lines) == 3


def test_branch_check(run):
    code, out, _ = run("branch", "--table", "plus2", "--n", "3", "--check")
    assert code == 0
    assert json.loads(out)["check"]["ok"]


def test_table_check(run):
    code, out, _ = run("table", "--n", "6", "--k", "6", "--check")
    assert code == 0
    assert json.loads(out)["check"]["status"] == "ok"


def test_bad_level_is_input_error(run):
    code, out, err = run("classify", "--n", "1", "--k", "3")
    assert code == 2
    assert out == ""
    assert err.startswith("ERROR:")


def test_missing_arguments(run):
    code, _, err = run("invariant", "--n", "3", "--k", "2")
    assert code == 2
    assert "--d and --sign" in err
    code, _, _ = run("alcove", "--n", "six", "--k", "2")
    assert code == 2


def test_check_failure_prints_json_report(run, monkeypatch):
    def fail(n, k):
        raise CheckFailure("count mismatch", {"n": n})

    monkeypatch.setattr("fusionmod.cli.classify", fail)
    code, out, _ = run("classify", "--n", "5", "--k", "4", "--format", "csv")
    assert code == 1
    assert json.loads(out) == {"ok": False, "error": "count mismatch", "report": {"n": 5}}


def test_verify_small(run):
    code, out, _ = run("verify", "--suite", "arith", "--n-max", "4", "--k-max", "4")
    assert code == 0
    assert json.loads(out)["ok"]


def test_bad_workers(run):
    code, _, err = run("verify", "--suite", "arith", "--workers", "0")
    assert code == 2
    assert "--workers" in err


def test_out_file_is_deterministic(run, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("cosets", "--n", "6", "--k", "6", "--out", str(a))[0] == 0
    assert run("cosets", "--n", "6", "--k", "6", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text(encoding="utf-8"))["total"] == 16


def test_png_written(run, tmp_path):
    pytest.importorskip("PIL")
    png = tmp_path / "z.png"
    code, _, _ = run("invariant", "--n", "4", "--k", "4", "--d", "2", "--sign", "minus", "--png", str(png))
    assert code == 0
    assert png.read_bytes().startswith(b"\x89PNG")


def test_parser_lists_commands():
    ap = build_parser()
    args = ap.parse_args(["verify"])
    assert args.suite == "all"
    assert args.command == "verify"
