"""Survey experiments over a corpus of groups, plus numeric side checks.

The survey runs one row per corpus line: exact Chebotarev invariant
where the inclusion-exclusion width allows it, Monte Carlo always, the
bound ratios C/sqrt(|G|) and C/sqrt(|G| log |G|), and the least k with
P_I(G, k) >= 2/9.  Lines describing modules or crown powers get first
cohomology diagnostics attached.  Per-row failures (caps, bad input)
are recorded in the row and never kill the run.

Rows are computed by a process pool when threads > 1 and written in
corpus order either way; every row's Monte Carlo seed derives from
(base seed, line index), so output bytes depend only on (corpus,
trials, seed).
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from importlib.resources import files as _pkg_files

from .cheb import (
    MAX_EXACT_COVERS,
    chebotarev_exact,
    chebotarev_montecarlo,
    min_k_for_probability,
)
from .coverage import coverage_table
from .crowns import build_crown_power_abelian, crown_power_from_descriptor
from .errors import CapExceeded, InputError, InvgenError
from .group import Group, load_group
from .modlin import ModuleAction, module_from_descriptor
from .rng import stream_state

INVK_THRESHOLD = Fraction(2, 9)

SURVEY_CSV_COLUMNS = (
    "name", "family", "order", "r",
    "c_exact_num", "c_exact_den", "c_mc", "mc_stderr",
    "trials", "seed", "ratio_sqrt", "sqrt_order", "klz_ratio", "min_k_29",
    "diag_m", "diag_fix_count", "diag_m_sq", "error",
)


@dataclass
class SurveyRow:
    name: str
    family: str
    order: int | None = None
    r: int | None = None
    c_exact: Fraction | None = None
    c_mc: float | None = None
    mc_stderr: float | None = None
    trials: int | None = None
    seed: int | None = None
    ratio_sqrt: float | None = None
    sqrt_order: float | None = None
    klz_ratio: float | None = None
    min_k_29: int | None = None
    diag_m: int | None = None
    diag_fix_count: int | None = None
    diag_m_sq: int | None = None
    error: str | None = None

    @property
    def c_value(self) -> float | None:
        """Exact value as float when present, else the estimate."""
        if self.c_exact is not None:
            return float(self.c_exact)
        return self.c_mc

    def as_dict(self) -> dict:
        out: dict = {"name": self.name, "family": self.family}
        if self.order is not None:
            out["order"] = self.order
        if self.r is not None:
            out["r"] = self.r
        if self.c_exact is not None:
            out["c_exact_num"] = self.c_exact.numerator
            out["c_exact_den"] = self.c_exact.denominator
        for key in ("c_mc", "mc_stderr", "trials", "seed", "ratio_sqrt",
                    "sqrt_order", "klz_ratio", "min_k_29",
                    "diag_m", "diag_fix_count", "diag_m_sq", "error"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out

    def json_line(self) -> str:
        return json.dumps(self.as_dict())

    def csv_record(self) -> list:
        d = self.as_dict()
        d.setdefault("c_exact_num", None)
        d.setdefault("c_exact_den", None)
        return ["" if d.get(col) is None else d.get(col) for col in SURVEY_CSV_COLUMNS]


def shipped_corpus_path() -> str:
    return str(_pkg_files("invgen").joinpath("data/corpus.jsonl"))


def read_corpus(path: str) -> list[dict]:
    """Parse a JSONL corpus; blank lines and #-comments are skipped."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                desc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}:{lineno}: bad JSON ({exc})") from exc
            if not isinstance(desc, dict):
                raise InputError(f"{path}:{lineno}: descriptor must be an object")
            out.append(desc)
    return out


def realize_descriptor(desc: dict) -> tuple[Group, str, ModuleAction | None]:
    """(group, family tag, attached module if any) for one corpus line."""
    if "module" in desc:
        act = module_from_descriptor(desc["module"])
        G = build_crown_power_abelian(act, 1)
        if "name" in desc:
            G.name = desc["name"]
        return G, "module", act
    if "crownpower" in desc:
        act = module_from_descriptor(desc["crownpower"]["module"])
        G = crown_power_from_descriptor(desc)
        if "name" in desc:
            G.name = desc["name"]
        return G, "crownpower", act
    if "crownpower_general" in desc:
        G = crown_power_from_descriptor(desc)
        if "name" in desc:
            G.name = desc["name"]
        return G, "crownpower_general", None
    G = load_group(desc)
    return G, desc.get("family", "explicit"), None


def _module_diagnostics(act: ModuleAction) -> tuple[int, int, int]:
    """(m, #elements of H with nonzero fixed space, m^2)."""
    m = act.h1_dim()
    fix_count = 0
    for h in range(act.group.order):
        if act.fixed_space([h]).shape[0]:
            fix_count += 1
    return m, fix_count, m * m


def _descriptor_label(desc: dict) -> str:
    if "name" in desc:
        return str(desc["name"])
    if "family" in desc:
        param = desc.get("n", desc.get("q", desc.get("p")))
        return f"{desc['family']}({param})"
    for key in ("module", "crownpower", "crownpower_general"):
        if key in desc:
            return key
    return "?"


def survey_row(desc: dict, trials: int, row_seed: int) -> SurveyRow:
    name = _descriptor_label(desc)
    try:
        G, family, act = realize_descriptor(desc)
        row = SurveyRow(name=G.name, family=family, order=G.order)
        table = coverage_table(G)
        row.r = len(table.maximal_orders)
        row.trials = trials
        row.seed = row_seed
        if row.r <= MAX_EXACT_COVERS:
            row.c_exact = chebotarev_exact(G).value
            row.min_k_29 = min_k_for_probability(G, INVK_THRESHOLD)
        mc = chebotarev_montecarlo(G, trials=trials, seed=row_seed)
        row.c_mc = mc.mean
        row.mc_stderr = mc.stderr
        c = row.c_value
        row.sqrt_order = math.sqrt(G.order)
        row.ratio_sqrt = c / row.sqrt_order
        if G.order > 1:
            row.klz_ratio = c / math.sqrt(G.order * math.log(G.order))
        if act is not None:
            row.diag_m, row.diag_fix_count, row.diag_m_sq = _module_diagnostics(act)
        return row
    except (CapExceeded, InputError, InvgenError) as exc:
        return SurveyRow(name=name, family=desc.get("family", "?"), error=str(exc))


def _survey_task(args: tuple) -> SurveyRow:
    desc, trials, row_seed = args
    return survey_row(desc, trials, row_seed)


def run_survey(
    corpus_path: str,
    trials: int = 100_000,
    seed: int = 20_260_814,
    out_path: str | None = None,
    threads: int = 1,
    echo=print,
) -> list[SurveyRow]:
    """One SurveyRow per corpus line, in corpus order.

    Writes JSONL to out_path and a CSV sibling (same stem) when
    out_path is given.  Row i's Monte Carlo stream is seeded from
    (seed, i), so any thread count produces identical output.
    """
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    corpus = read_corpus(corpus_path)
    tasks = [
        (desc, trials, int(stream_state(seed, i)))
        for i, desc in enumerate(corpus)
    ]
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_survey_task, tasks))
    else:
        rows = [_survey_task(t) for t in tasks]

    if out_path is not None:
        write_rows_jsonl(rows, out_path)
        stem = out_path[:-6] if out_path.endswith(".jsonl") else out_path
        write_rows_csv(rows, stem + ".csv")

    clean = [r for r in rows if r.error is None]
    if clean:
        top = max(clean, key=lambda r: r.ratio_sqrt)
        echo(
            f"observed max C(G)/sqrt(|G|) = {top.ratio_sqrt:.6f} ({top.name})"
        )
    for r in rows:
        if r.error is not None:
            echo(f"row {r.name}: error: {r.error}")
    return rows


def write_rows_jsonl(rows: list[SurveyRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(row.json_line())
            fh.write("\n")


def write_rows_csv(rows: list[SurveyRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SURVEY_CSV_COLUMNS)
        for row in rows:
            writer.writerow(row.csv_record())


# ---------------------------------------------------------------------------
# AGL(1, q) trend


AGL_SUPPORTED_Q = (2, 3, 4, 5, 7, 8, 9, 11, 13)


def agl_trend(qs, out_path: str | None = None) -> list[dict]:
    """Exact C(AGL(1, q)) and the ratio C/q for each listed prime power."""
    rows = []
    for q in qs:
        q = int(q)
        if q not in AGL_SUPPORTED_Q:
            raise InputError(
                f"q = {q} unsupported; available: {AGL_SUPPORTED_Q}"
            )
        G = load_group({"family": "agl1", "q": q})
        value = chebotarev_exact(G).value
        rows.append(
            {
                "q": q,
                "order": G.order,
                "c_num": value.numerator,
                "c_den": value.denominator,
                "c_over_q": float(value) / q,
            }
        )
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            for row in rows:
                fh.write(json.dumps(row))
                fh.write("\n")
    return rows


# ---------------------------------------------------------------------------
# binomial tail check


ALPHA = 1 - 1 / math.e


@dataclass(frozen=True)
class BinomialCheckRow:
    epsilon: Fraction
    p: Fraction
    l: int
    gamma: float
    mm: int
    tail: Fraction

    @property
    def holds(self) -> bool:
        return self.tail >= self.epsilon

    def as_dict(self) -> dict:
        return {
            "epsilon_num": self.epsilon.numerator,
            "epsilon_den": self.epsilon.denominator,
            "p_num": self.p.numerator,
            "p_den": self.p.denominator,
            "l": self.l,
            "gamma": self.gamma,
            "mm": self.mm,
            "tail_num": self.tail.numerator,
            "tail_den": self.tail.denominator,
            "holds": self.holds,
        }


def binomial_tail(mm: int, p: Fraction, l: int) -> Fraction:
    """P(B(mm, p) >= l), exact.  Sums whichever side has fewer terms."""
    p = Fraction(p)
    if l <= 0:
        return Fraction(1)
    if l > mm:
        return Fraction(0)
    direct = mm - l + 1 <= l
    lo, hi = (l, mm + 1) if direct else (0, l)
    total = Fraction(0)
    for j in range(lo, hi):
        total += math.comb(mm, j) * p**j * (1 - p) ** (mm - j)
    return total if direct else 1 - total


def binomial_check_row(epsilon, p, l: int) -> BinomialCheckRow:
    epsilon = Fraction(epsilon)
    p = Fraction(p)
    l = int(l)
    if not 0 < epsilon < 1:
        raise InputError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not 0 < p < 1:
        raise InputError(f"p must lie in (0, 1), got {p}")
    if l < 1:
        raise InputError(f"l must be >= 1, got {l}")
    gamma = (1 - math.log(1 - float(epsilon))) / ALPHA
    # ceil of the exact product with the binary-float gamma, immune to
    # float rounding at integer boundaries
    mm = math.ceil(Fraction(gamma) * l / p)
    tail = binomial_tail(mm, p, l)
    return BinomialCheckRow(epsilon=epsilon, p=p, l=l, gamma=gamma, mm=mm, tail=tail)


def binomial_check(epsilons, ps, ls, out_path: str | None = None) -> list[BinomialCheckRow]:
    rows = []
    for eps in epsilons:
        for p in ps:
            for l in ls:
                rows.append(binomial_check_row(eps, p, l))
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            for row in rows:
                fh.write(json.dumps(row.as_dict()))
                fh.write("\n")
    return rows
