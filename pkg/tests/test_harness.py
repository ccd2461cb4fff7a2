"""Survey runner, AGL trend, binomial tails, and cache integrity."""

import json
import os
from fractions import Fraction

import pytest

from invgen import (
    AGL_SUPPORTED_Q,
    InputError,
    agl_trend,
    binomial_check,
    binomial_tail,
    coverage_table,
    load_group,
    read_corpus,
    realize_descriptor,
    run_survey,
    shipped_corpus_path,
    verify_props,
)

QUIET = {"echo": lambda *_: None}


def test_shipped_corpus_loads():
    path = shipped_corpus_path()
    assert os.path.exists(path)
    rows = read_corpus(path)
    assert len(rows) >= 50
    for desc in rows:
        assert "family" in desc or "module" in desc or "crownpower" in desc \
            or "crownpower_general" in desc or "generators" in desc


def test_realize_descriptor_kinds():
    G, family, act = realize_descriptor({"family": "alt", "n": 4})
    assert (G.order, family, act) == (12, "alt", None)
    G, family, act = realize_descriptor(
        {
            "name": "mod",
            "module": {
                "group": {"family": "cyclic", "n": 2},
                "p": 3,
                "matrices": [[[2]]],
            },
        }
    )
    assert family == "module"
    assert G.order == 6  # 3 : 2 split extension
    assert act is not None and act.p == 3


def test_survey_exact_values(mini_corpus, tmp_path):
    out = tmp_path / "rows.jsonl"
    rows = run_survey(mini_corpus, trials=2000, seed=7, out_path=str(out), **QUIET)
    assert [r.name for r in rows] == ["cyclic(2)", "cyclic(3)", "sym(3)"]
    assert [r.c_exact for r in rows] == [
        Fraction(2),
        Fraction(3, 2),
        Fraction(19, 5),
    ]
    for r in rows:
        assert r.error is None
        assert abs(r.c_mc - float(r.c_exact)) < 4 * max(r.mc_stderr, 1e-9)
        assert r.ratio_sqrt == pytest.approx(float(r.c_exact) / r.order**0.5)
    # JSONL plus a CSV sibling appear on disk
    assert out.exists()
    assert (tmp_path / "rows.csv").exists()
    assert len(out.read_text().splitlines()) == 3


def test_survey_bytes_identical_across_threads(mini_corpus, tmp_path):
    outs = []
    for threads in (1, 2, 4):
        path = tmp_path / f"t{threads}.jsonl"
        run_survey(
            mini_corpus, trials=1500, seed=11, out_path=str(path),
            threads=threads, **QUIET,
        )
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_survey_seed_changes_mc_only(mini_corpus):
    a = run_survey(mini_corpus, trials=1000, seed=1, **QUIET)
    b = run_survey(mini_corpus, trials=1000, seed=2, **QUIET)
    for ra, rb in zip(a, b):
        assert ra.c_exact == rb.c_exact
        assert ra.c_mc != rb.c_mc


def test_survey_error_rows_do_not_abort(tmp_path):
    path = tmp_path / "broken.jsonl"
    path.write_text(
        json.dumps({"family": "cyclic", "n": 3}) + "\n"
        + json.dumps({"family": "nope", "n": 3}) + "\n"
        + json.dumps({"family": "sym", "n": 3}) + "\n"
    )
    rows = run_survey(str(path), trials=500, seed=3, **QUIET)
    assert len(rows) == 3
    assert rows[0].error is None and rows[2].error is None
    assert rows[1].error is not None
    assert rows[1].c_exact is None


def test_survey_empty_corpus(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    assert run_survey(str(path), trials=100, seed=1, **QUIET) == []


def test_agl_trend_small_values():
    rows = agl_trend([2, 3])
    assert rows[0]["order"] == 2
    assert (rows[0]["c_num"], rows[0]["c_den"]) == (2, 1)
    assert rows[0]["c_over_q"] == pytest.approx(1.0)
    # AGL(1, 3) is S3
    assert (rows[1]["c_num"], rows[1]["c_den"]) == (19, 5)
    with pytest.raises(InputError):
        agl_trend([6])
    assert set(AGL_SUPPORTED_Q) >= {5, 7, 11, 13}


def test_binomial_tail_exact():
    assert binomial_tail(2, Fraction(1, 2), 1) == Fraction(3, 4)
    assert binomial_tail(3, Fraction(1, 2), 3) == Fraction(1, 8)
    assert binomial_tail(4, Fraction(1, 3), 0) == 1


def test_binomial_check_rows():
    rows = binomial_check(
        [Fraction(1, 2), Fraction(6, 7)], [Fraction(1, 20)], [1, 4]
    )
    assert len(rows) == 4
    for row in rows:
        assert row.holds
        assert row.tail >= row.epsilon
        assert row.mm >= row.l
        d = row.as_dict()
        assert {"epsilon_num", "p_num", "l", "gamma", "mm", "holds"} <= set(d)
    # the 6/7 target needs a larger draw multiplier than 1/2
    g_half = rows[0].gamma
    g_strict = rows[2].gamma
    assert g_strict > g_half


def test_corrupted_coverage_cache_is_caught(tmp_path, monkeypatch, mini_corpus):
    cache = tmp_path / "cache"
    cache.mkdir()
    monkeypatch.setenv("INVGEN_CACHE_DIR", str(cache))

    from invgen.coverage import _cache_path

    G = load_group({"family": "sym", "n": 3})
    coverage_table(G)  # primes the on-disk entry
    path = _cache_path(G)
    data = json.loads(open(path).read())
    # claim the A3 column also covers the transposition class
    data["covers"][1] = [0, 1, 2]
    with open(path, "w") as fh:
        json.dump(data, fh)

    report = verify_props(
        corpus_path=mini_corpus,
        only=(("invariable", "fixed_point_free_identity"),),
    )
    assert not report.passed
    (outcome,) = report.outcomes
    assert outcome.violations


def test_verify_props_passes_on_clean_mini_corpus(mini_corpus):
    report = verify_props(
        corpus_path=mini_corpus,
        only=(
            ("invariable", "fixed_point_free_identity"),
            ("chebotarev", "waiting_time_identity"),
        ),
    )
    assert report.passed
    assert len(report.outcomes) == 2
    text = report.to_json()
    parsed = json.loads(text)
    assert parsed["passed"] is True
    assert {c["name"] for c in parsed["checks"]} == {
        "fixed_point_free_identity",
        "waiting_time_identity",
    }
