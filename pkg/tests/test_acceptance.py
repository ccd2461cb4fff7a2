"""Acceptance gate: one test and one printed verdict line per criterion.

Criteria that need large randomized sweeps reuse the session property
battery (prop_report) so the whole gate stays inside its time budget;
the verdict line still names the criterion it settles.
"""

import time
from fractions import Fraction

import pytest

from invgen import (
    binomial_check,
    chebotarev_exact,
    load_group,
    p_invariable_exact,
    run_survey,
    shipped_corpus_path,
)
from invgen.properties import verify_props

QUIET = {"echo": lambda *_: None}


def _verdict(num, slug, ok, detail=""):
    line = f"[acceptance] criterion {num} ({slug}): {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" - {detail}"
    print(line)
    assert ok, line


def _outcome(report, suite, name):
    return next(
        o for o in report.outcomes if (o.suite, o.name) == (suite, name)
    )


def test_criterion_1_exact_small_values():
    ok = True
    details = []
    for p in (2, 3, 5, 7, 11):
        t0 = time.perf_counter()
        val = chebotarev_exact(load_group({"family": "cyclic", "n": p})).value
        dt = time.perf_counter() - t0
        if val != Fraction(p, p - 1) or dt >= 1.0:
            ok = False
            details.append(f"C(C_{p}) = {val} in {dt:.3f}s")
    t0 = time.perf_counter()
    s3 = load_group({"family": "sym", "n": 3})
    c_s3 = chebotarev_exact(s3).value
    dt = time.perf_counter() - t0
    if c_s3 != Fraction(19, 5) or dt >= 1.0:
        ok = False
        details.append(f"C(S3) = {c_s3} in {dt:.3f}s")
    t0 = time.perf_counter()
    p2 = p_invariable_exact(s3, 2)
    dt = time.perf_counter() - t0
    if p2 != Fraction(1, 3) or dt >= 1.0:
        ok = False
        details.append(f"P_I(S3,2) = {p2} in {dt:.3f}s")
    _verdict(1, "exact-small-values", ok, "; ".join(details))


def test_criterion_2_monte_carlo_agreement():
    t0 = time.perf_counter()
    report = verify_props(only=(("chebotarev", "mc_consistency"),))
    elapsed = time.perf_counter() - t0
    out = _outcome(report, "chebotarev", "mc_consistency")
    ok = out.passed and out.checked >= 50 and elapsed < 600
    _verdict(
        2,
        "monte-carlo-4-sigma",
        ok,
        f"{out.checked} exact rows at 100k trials in {elapsed:.1f}s"
        + ("" if out.passed else f"; {out.violations[:3]}"),
    )


def test_criterion_3_lift_criteria_vs_brute_force(prop_report):
    out = _outcome(prop_report, "genlift", "criterion_soundness")
    ok = out.passed and out.checked >= 100_000
    _verdict(
        3,
        "criteria-vs-closure",
        ok,
        f"{out.checked} assignments, {len(out.violations)} disagreements",
    )


def test_criterion_4_dimension_inequality(prop_report):
    out = _outcome(prop_report, "genlift", "dimen_inequality")
    ok = out.passed and out.checked == 1000
    _verdict(4, "dimension-inequality", ok, f"{out.checked} instances")


def test_criterion_5_cohomology_battery(prop_report):
    bound = _outcome(prop_report, "modlin", "cohomology_bound")
    coprime = _outcome(prop_report, "modlin", "coprime_vanishing")
    der = _outcome(prop_report, "genlift", "der_evaluation_dimension")
    ok = bound.passed and coprime.passed and der.passed
    _verdict(
        5,
        "cohomology-dimensions",
        ok,
        f"2m<=n on {bound.checked}, coprime m=0 on {coprime.checked},"
        f" dim Der = n+m on {der.checked}",
    )


def test_criterion_6_crown_powers_and_coronas(prop_report):
    order_law = _outcome(prop_report, "crowns", "order_law")
    corona = _outcome(prop_report, "crowns", "corona_exists")
    sotto = _outcome(prop_report, "crowns", "sotto_random_subgroups")
    ok = (
        order_law.passed
        and corona.passed
        and sotto.passed
        and sotto.checked >= 1000
    )
    _verdict(
        6,
        "crowns-and-coronas",
        ok,
        f"order law on {order_law.checked} powers, coronas on"
        f" {corona.checked} groups, {sotto.checked} subgroup draws",
    )


def test_criterion_7_binomial_tails():
    eps = [Fraction(1, 2), Fraction(6, 7)]
    ps = [Fraction(1, 100), Fraction(1, 20), Fraction(1, 10),
          Fraction(1, 4), Fraction(1, 2)]
    ls = list(range(1, 11))
    rows = binomial_check(eps, ps, ls)
    failures = [r for r in rows if not r.holds]
    ok = len(rows) == 100 and not failures
    _verdict(
        7,
        "binomial-tail-floor",
        ok,
        f"{len(rows)} grid points, {len(failures)} below epsilon",
    )


def test_criterion_8_survey_bounds(prop_report):
    bounds = _outcome(prop_report, "harness", "survey_bounds")
    band = _outcome(prop_report, "harness", "agl_band")
    rows = run_survey(shipped_corpus_path(), trials=2, seed=1, **QUIET)
    ratios = [r.ratio_sqrt for r in rows if r.c_exact is not None]
    sup = max(ratios)
    ok = bounds.passed and band.passed and sup <= 5.0
    _verdict(
        8,
        "survey-global-bounds",
        ok,
        f"sup C/sqrt|G| = {sup:.4f} over {len(ratios)} exact rows;"
        f" AGL band on {band.checked} fields",
    )


def test_criterion_9_survey_byte_determinism(tmp_path):
    paths = []
    for threads in (1, 3):
        p = tmp_path / f"run{threads}.jsonl"
        run_survey(
            shipped_corpus_path(), trials=2000, seed=7,
            out_path=str(p), threads=threads, **QUIET,
        )
        paths.append(p.read_bytes())
    ok = paths[0] == paths[1] and len(paths[0]) > 0
    _verdict(9, "survey-byte-determinism", ok, f"{len(paths[0])} bytes compared")
