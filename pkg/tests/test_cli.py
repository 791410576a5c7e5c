import json

import pytest

from planlab.cli import main

TOY1_TEXT = """\
SASP 1
vars 2
domain 2
init 0 0
goal 0=1 1=1
action a1 pre eff 0=1
action a2 pre 0=1 eff 1=1
"""


@pytest.fixture
def toy_file(tmp_path):
    path = tmp_path / "toy.sasp"
    path.write_text(TOY1_TEXT)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip()
    return code, json.loads(out) if out else None


def test_classify(capsys, toy_file):
    code, out = run(capsys, "classify", toy_file)
    assert code == 0
    assert out == {"P": True, "U": True, "B": True, "S": True,
                   "max_pre": 1, "max_eff": 1, "route": "post-unique"}


def test_classify_zero_two_route(capsys, tmp_path):
    # (0,2) but not post-unique: two producers of the same pair
    path = tmp_path / "zt.sasp"
    path.write_text("SASP 1\nvars 2\ndomain 2\ninit 0 0\ngoal 0=1\n"
                    "action a pre eff 0=1\naction b pre eff 0=1 1=1\n")
    code, out = run(capsys, "classify", str(path))
    assert code == 0 and out["route"] == "zero-two"


def test_classify_parse_error(capsys, tmp_path):
    path = tmp_path / "broken.sasp"
    path.write_text("SASP 9000\n")
    code, _ = run(capsys, "classify", str(path))
    assert code == 2


def test_solve_auto(capsys, toy_file):
    code, out = run(capsys, "solve", toy_file, "2")
    assert code == 0
    assert out["solvable"] and out["plan"] == ["a1", "a2"]
    assert out["length"] == 2 and out["solver"] == "post-unique"


def test_solve_unsolvable_exit(capsys, toy_file):
    code, out = run(capsys, "solve", toy_file, "1")
    assert code == 1 and not out["solvable"] and out["plan"] is None


def test_solve_inapplicable_exit(capsys, toy_file):
    code, _ = run(capsys, "solve", toy_file, "2", "--solver", "zero-two")
    assert code == 3


def test_solve_every_solver_agrees(capsys, toy_file):
    for solver in ("oracle", "post-unique", "fo-mc"):
        code, out = run(capsys, "solve", toy_file, "2", "--solver", solver)
        assert code == 0 and out["length"] == 2, solver
        code, _ = run(capsys, "solve", toy_file, "1", "--solver", solver)
        assert code == 1, solver


def test_solve_stats(capsys, toy_file):
    code, out = run(capsys, "solve", toy_file, "2", "--stats")
    assert code == 0 and out["stats"]["search_tree_nodes"] >= 1


def test_solve_forced_fragment(capsys, toy_file):
    code, out = run(capsys, "solve", toy_file, "2", "--solver", "fo-mc",
                    "--fragment", "sigma22")
    assert code == 0 and out["solver"] == "fo-mc/sigma22"


def test_validate(capsys, toy_file, tmp_path):
    good = tmp_path / "good.plan"
    good.write_text("a1\na2\n")
    code, out = run(capsys, "validate", toy_file, str(good))
    assert code == 0 and out["valid"]

    bad = tmp_path / "bad.plan"
    bad.write_text("a2\n")
    code, out = run(capsys, "validate", toy_file, str(bad))
    assert code == 1 and out["reason"] == "precondition"
    assert out["variable"] == "v0" and out["step"] == 0

    unknown = tmp_path / "unknown.plan"
    unknown.write_text("a9\n")
    code, _ = run(capsys, "validate", toy_file, str(unknown))
    assert code == 2


def test_missing_file(capsys):
    code, _ = run(capsys, "classify", "/nonexistent/x.sasp")
    assert code == 2


def test_generate_hitting_set(capsys, tmp_path):
    out_path = tmp_path / "hs.sasp"
    code, out = run(capsys, "generate", "hitting-set", "--universe", "3",
                    "--sets", "{1,2},{2,3}", "--k", "1",
                    "--out", str(out_path))
    assert code == 0 and out["vars"] == 2 and out["actions"] == 3
    meta = json.loads((tmp_path / "hs.sasp.meta.json").read_text())
    assert meta["expected_bound"] == 1

    solve_code, solved = run(capsys, "solve", str(out_path), "1")
    assert solve_code == 0 and solved["plan"] == ["a2"]


def test_generate_or2(capsys, tmp_path):
    out_path = tmp_path / "or2.sasp"
    code, out = run(capsys, "generate", "or2", "--v1", "1", "--v2", "0",
                    "--out", str(out_path))
    assert code == 0 and out["actions"] == 7
    code, solved = run(capsys, "solve", str(out_path), "6")
    assert code == 0 and solved["length"] == 6


def test_generate_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.sasp", tmp_path / "b.sasp"
    for path in (a, b):
        run(capsys, "generate", "random", "--n", "4", "--actions", "5",
            "--seed", "17", "--post-unique", "--out", str(path))
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.sasp.meta.json").read_bytes() == \
        (tmp_path / "b.sasp.meta.json").read_bytes()


def test_generate_mcc(capsys, tmp_path):
    out_path = tmp_path / "tri.sasp"
    code, out = run(capsys, "generate", "mcc-03", "--parts", "3",
                    "--complete", "--out", str(out_path))
    assert code == 0 and out["expected_bound"] == 6
    code, solved = run(capsys, "solve", str(out_path), "6")
    assert code == 0 and solved["length"] == 6


def test_generate_compose(capsys, tmp_path, toy_file):
    out_path = tmp_path / "pub.sasp"
    code, out = run(capsys, "generate", "compose-pub",
                    "--component", f"{toy_file}:2",
                    "--component", f"{toy_file}:2", "--out", str(out_path))
    assert code == 0 and out["expected_bound"] == 9

    zt = tmp_path / "zt.sasp"
    zt.write_text("SASP 1\nvars 1\ndomain 2\ninit 0\ngoal 0=1\n"
                  "action flip pre eff 0=1\n")
    out02 = tmp_path / "comp02.sasp"
    code, out = run(capsys, "generate", "compose-02",
                    "--component", str(zt), "--component", str(zt),
                    "--k", "1", "--out", str(out02))
    assert code == 0 and out["expected_bound"] == 21
    code, solved = run(capsys, "solve", str(out02), "21")
    assert code == 0 and solved["solver"] == "zero-two"


def test_budget_env(capsys, toy_file, monkeypatch, tmp_path):
    # a budget of 1 exhausts immediately on any instance needing search
    monkeypatch.setenv("PLAN_LAB_BUDGET", "1")
    code, _ = run(capsys, "solve", toy_file, "2", "--solver", "oracle")
    assert code == 3
    monkeypatch.delenv("PLAN_LAB_BUDGET")
    code, _ = run(capsys, "solve", toy_file, "2", "--solver", "oracle")
    assert code == 0
