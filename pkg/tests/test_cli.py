"""Command line entry points and exit codes."""

import csv
import io
import json

import pytest

from invgen.cli import main

S3 = '{"family": "sym", "n": 3}'


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def out_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    lines = [json.loads(l) for l in out.splitlines() if l.strip()]
    return lines


def test_cheb_exact(capsys):
    (row,) = out_json(capsys, "cheb", "exact", S3)
    assert row["c_num"] == 19 and row["c_den"] == 5
    assert row["order"] == 6
    assert row["r"] == 2


def test_cheb_mc_reproducible(capsys):
    (a,) = out_json(capsys, "cheb", "mc", S3, "--trials", "4000", "--seed", "9")
    (b,) = out_json(capsys, "cheb", "mc", S3, "--trials", "4000", "--seed", "9")
    assert a == b
    assert a["trials"] == 4000
    assert abs(a["c_mc"] - 19 / 5) < 4 * a["mc_stderr"]


def test_pinv(capsys):
    (row,) = out_json(capsys, "pinv", S3, "-k", "2")
    assert row["p_num"] == 1 and row["p_den"] == 3


def test_mink_threshold(capsys):
    (row,) = out_json(capsys, "mink", '{"family": "sym", "n": 5}')
    assert row["min_k"] == 3
    (row,) = out_json(capsys, "mink", S3, "--threshold", "1/3")
    assert row["min_k"] == 2


def test_h1_report(capsys):
    desc = json.dumps(
        {
            "group": {"family": "sym", "n": 3},
            "p": 2,
            "matrices": [[[1, 0], [1, 1]], [[0, 1], [1, 1]]],
        }
    )
    (row,) = out_json(capsys, "h1", desc)
    assert row["m"] == 0
    assert row["n"] == 2
    assert row["e"] == 1
    assert row["dim_p_der"] == 2
    assert row["faithful"] is True


def test_crowns_corona(capsys):
    (row,) = out_json(capsys, "crowns", '{"family": "sym", "n": 4}')
    assert row["factor_order"] == 4
    assert row["delta"] == 1
    assert (row["r_order"], row["i_order"], row["u_order"]) == (1, 4, 4)


def test_lift_verdicts(capsys):
    desc = json.dumps(
        {
            "module": {
                "group": {"family": "sym", "n": 3},
                "p": 2,
                "matrices": [[[1, 0], [1, 1]], [[0, 1], [1, 1]]],
            },
            "u": 1,
            "hs": [[1], [2]],
            "ws": [[[1, 0]], [[0, 0]]],
        }
    )
    (row,) = out_json(capsys, "lift", desc)
    assert row["generates"] is True
    assert row["invariably_generates"] is False
    assert row["u_max_generate"] == 2
    assert row["u_max_invariable"] == 1


def test_descriptor_from_file(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(S3)
    (row,) = out_json(capsys, "cheb", "exact", str(path))
    assert row["c_num"] == 19


def test_csv_format(capsys):
    code, out, _ = run(capsys, "cheb", "exact", S3, "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["c_num"] == "19"
    assert rows[0]["c_den"] == "5"


def test_out_file(capsys, tmp_path):
    path = tmp_path / "row.jsonl"
    code, out, _ = run(capsys, "cheb", "exact", S3, "--out", str(path))
    assert code == 0
    row = json.loads(path.read_text())
    assert row["c_num"] == 19


def test_survey_over_corpus(capsys, tmp_path, mini_corpus):
    out_path = tmp_path / "survey.jsonl"
    code, _, err = run(
        capsys,
        "survey",
        mini_corpus,
        "--trials",
        "800",
        "--seed",
        "5",
        "--out",
        str(out_path),
    )
    assert code == 0
    rows = [json.loads(l) for l in out_path.read_text().splitlines()]
    assert [r["name"] for r in rows] == ["cyclic(2)", "cyclic(3)", "sym(3)"]
    assert rows[2]["c_exact_num"] == 19


def test_agl_trend_cli(capsys):
    rows = out_json(capsys, "agl-trend", "--q", "2,3")
    assert [r["q"] for r in rows] == [2, 3]
    assert rows[1]["c_num"] == 19


def test_binom_check_cli(capsys):
    rows = out_json(
        capsys, "binom-check", "--epsilons", "1/2", "--ps", "0.5", "--ls", "1,2"
    )
    assert len(rows) == 2
    assert all(r["holds"] for r in rows)


def test_verify_cli_single_suite(capsys, mini_corpus):
    code, out, err = run(
        capsys, "verify", "--suite", "invariable", "--corpus", mini_corpus
    )
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert all(c["suite"] == "invariable" for c in report["checks"])


def test_exit_code_input_error(capsys):
    code, _, err = run(capsys, "cheb", "exact", "definitely not json")
    assert code == 2
    assert "input error" in err


def test_exit_code_cap_exceeded(capsys):
    code, _, err = run(capsys, "cheb", "exact", '{"family": "sym", "n": 99}')
    assert code == 3
    assert "cap exceeded" in err
    # exact C on 2^5: too many independent covers
    code, _, err = run(
        capsys, "cheb", "exact", '{"family": "elemab", "p": 2, "k": 5}'
    )
    assert code == 3


def test_exit_code_precondition(capsys):
    # corona of a group with nontrivial Frattini subgroup
    code, _, err = run(capsys, "crowns", '{"family": "cyclic", "n": 4}')
    assert code == 2
    assert "precondition" in err


def test_exit_code_verify_violation(capsys, tmp_path, monkeypatch, mini_corpus):
    cache = tmp_path / "cache"
    cache.mkdir()
    monkeypatch.setenv("INVGEN_CACHE_DIR", str(cache))
    from invgen import coverage_table, load_group
    from invgen.coverage import _cache_path

    G = load_group({"family": "sym", "n": 3})
    coverage_table(G)
    path = _cache_path(G)
    data = json.loads(open(path).read())
    data["covers"][1] = [0, 1, 2]
    with open(path, "w") as fh:
        json.dump(data, fh)

    code, out, _ = run(
        capsys, "verify", "--suite", "invariable", "--corpus", mini_corpus
    )
    assert code == 1
    report = json.loads(out)
    assert report["passed"] is False
