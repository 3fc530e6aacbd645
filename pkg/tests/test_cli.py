import json
import subprocess
import sys

import pytest

from modalcount.cli import main


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def fields(text):
    return dict(line.split(": ", 1) for line in text.splitlines())


def test_census_strict_orders(capsys):
    status, out, _ = run(capsys, "census", "--n", "4", "--class", "strict-order", "--labeled")
    assert status == 0
    assert fields(out)["labeled"] == "219"


def test_census_equivalence_unlabeled(capsys):
    status, out, _ = run(capsys, "census", "--n", "5", "--class", "equivalence", "--unlabeled")
    assert status == 0 and fields(out)["unlabeled"] == "7"


def test_census_both_routes(capsys):
    status, out, _ = run(capsys, "census", "--n", "3", "--class", "relation", "--unlabeled", "--both")
    assert status == 0 and fields(out)["unlabeled"] == "104"


def test_census_limit_status(capsys):
    status, out, err = run(capsys, "census", "--n", "6", "--class", "strict-order")
    assert status == 3 and out == "" and "budget" in err
    status, out, _ = run(capsys, "--budget", "1048576", "census", "--n", "5", "--class", "strict-order", "--labeled")
    assert status == 0 and fields(out)["labeled"] == "4231"


def test_census_disagreement_status(capsys, monkeypatch):
    from modalcount import census

    monkeypatch.setattr(census, "a_exact", lambda n: 1)
    status, out, err = run(capsys, "census", "--n", "2", "--class", "relation", "--both")
    assert status == 4 and out == "" and "2 != " not in out


def test_frame_file(capsys, tmp_path):
    path = tmp_path / "id.json"
    path.write_text(json.dumps({"worlds": 3, "edges": [[0, 0], [1, 1], [2, 2]]}))
    status, out, _ = run(capsys, "frame", str(path), "--format", "json", "--formula", "<>p -> []<>p")
    doc = json.loads(out)
    assert status == 0
    assert doc["is_s5"] is True
    assert doc["axioms"] == {"K": True, "T": True, "4": True, "5": True, "B": True}
    assert doc["formulas"] == {"<>p -> []<>p": True}


def test_frame_malformed(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    status, out, err = run(capsys, "frame", str(path))
    assert status == 2 and out == "" and "not valid JSON" in err
    path.write_text(json.dumps({"worlds": 2, "edges": [[0, 5]]}))
    assert run(capsys, "frame", str(path))[0] == 2


def test_audit_euclidean(capsys):
    status, out, _ = run(capsys, "frame", "--audit", "euclidean-implies-transitive", "--n", "3", "--format", "json")
    doc = json.loads(out)
    assert status == 0
    assert doc["holds"] is False
    props = doc["counterexample_properties"]
    assert props["euclidean"] and not props["transitive"]


@pytest.mark.parametrize("audit", ["t-and-5-equals-equivalence", "reflexive-euclidean-implies-equivalence"])
def test_true_audits(capsys, audit):
    status, out, _ = run(capsys, "frame", "--audit", audit, "--n", "3")
    f = fields(out)
    assert status == 0 and f["holds"] == "true" and f["counterexample"] == "none"
    assert f["frames_checked"] == "512"


def test_game_nim6(capsys, tmp_path):
    dot = tmp_path / "nim6.dot"
    status, out, _ = run(capsys, "game", "--nim", "6", "--solve", "--dot", str(dot))
    f = fields(out)
    assert status == 0
    assert f["outcome"] == "player 2" and f["length"] == "6" and f["histories"] == "13"
    assert f["strategy_certified"] == "true"
    text = dot.read_text()
    assert text.count("label=") == 33


def test_game_nim1(capsys):
    assert fields(run(capsys, "game", "--nim", "1", "--solve")[1])["outcome"] == "player 1"


def test_game_ungraded_solve_is_invalid(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"points": 5, "order": [[0, 1], [1, 2], [2, 4], [0, 3], [3, 4]], "players": 2}))
    status, out, err = run(capsys, "game", str(path), "--solve")
    assert status == 2 and out == "" and "instant" in err


def test_game_single_point_warns(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"points": 1, "order": []}))
    status, out, err = run(capsys, "game", str(path), "--solve")
    assert status == 0 and "warning" in err and fields(out)["outcome"] == "player 2"


def test_numbers(capsys):
    assert fields(run(capsys, "numbers", "partition", "--n", "100")[1])["exact"] == "190569292"
    f = fields(run(capsys, "numbers", "partition", "--n", "100", "--all-methods")[1])
    assert f["rademacher"] == "190569292"
    assert float(fields(run(capsys, "numbers", "ratio", "--n", "4")[1])["ratio"]) == pytest.approx(1.6426e-3, rel=1e-4)
    assert fields(run(capsys, "numbers", "dedekind", "--h", "1", "--k", "3")[1])["value"] == "1/18"
    assert fields(run(capsys, "numbers", "poset-asymptotic", "--n", "4")[1])["value"] == "170"
    assert fields(run(capsys, "numbers", "hr", "--n", "1")[1])["value"] == "1.87667042261"
    assert fields(run(capsys, "numbers", "rademacher", "--n", "50", "--K", "25")[1])["rounded"] == "204226"


def test_numbers_limit(capsys):
    status, out, _ = run(capsys, "numbers", "rademacher", "--n", "500")
    assert status == 3 and out == ""


def test_sample(capsys):
    f = fields(run(capsys, "sample", "--n", "3", "--trials", "200000", "--seed", "42")[1])
    assert abs(float(f["ratio"]) - 5 / 512) <= 0.003
    assert f["exact"] == "5/512"
    f = fields(run(capsys, "sample", "--n", "1", "--trials", "100000", "--seed", "7")[1])
    assert 0.49 <= float(f["ratio"]) <= 0.51


def test_json_counts_are_strings(capsys):
    _, out, _ = run(capsys, "census", "--n", "10", "--class", "relation", "--unlabeled", "--format", "json")
    doc = json.loads(out)
    from modalcount.partitions import a_exact

    assert doc["unlabeled"] == str(a_exact(10))
    assert int(doc["unlabeled"]) > 2**53


def test_csv_has_header(capsys):
    _, out, _ = run(capsys, "numbers", "ratio", "--n", "4", "--format", "csv")
    header, row = out.splitlines()
    assert header == "n,p,a,ratio"
    assert row.startswith("4,5,3044,")


def test_bad_arguments_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["census", "--n", "3", "--class", "lattice"])
    assert e.value.code == 2


def test_module_entry_point_is_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "modalcount", "sample", "--n", "2", "--trials", "5000", "--seed", "3", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["trials"] == "5000"
