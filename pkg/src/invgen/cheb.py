"""Chebotarev invariant and invariable-generation probabilities.

Draw elements of G uniformly and independently; C(G) is the expected
number of draws before the drawn elements invariably generate G.  Both
quantities here reduce to the class-coverage table.  Writing s_T for
the number of elements whose class is covered by every maximal class in
a set T, inclusion-exclusion over the maximal classes gives

    P(k draws do not suffice) = sum over nonempty T of
        (-1)^(|T|+1) (s_T / n)^k

so P_I(G, k) is one minus that sum, and summing the failure
probabilities over k >= 0 gives C(G) as a finite sum of fractions
n / (n - s_T).  The subset sum is organised as a DFS that intersects
cover bitmasks incrementally; once an intersection only contains the
identity class, the completions of that subset cancel in pairs and the
whole subtree is skipped.

Monte Carlo estimation replays the same event with the splitmix-style
counter RNG from invgen.rng: every draw is a pure function of
(seed, trial, draw index), so runs are reproducible across processes
and the vectorised path is bit-identical to the reference loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coverage import coverage_table
from .errors import CapExceeded, InputError
from .group import Group
from .rng import draws_vec, randbelow, randbelow_vec, stream_state, stream_states_vec

MAX_EXACT_COVERS = 25
MAX_DRAWS_PER_TRIAL = 1_000_000


def _reduced_covers(covers) -> list[int]:
    """Drop covers contained in another; the union event is unchanged."""
    uniq = sorted(set(int(c) for c in covers), key=lambda c: -c.bit_count())
    kept: list[int] = []
    for c in uniq:
        if not any((c & k) == c for k in kept):
            kept.append(c)
    return kept


def inclusion_exclusion_profile(G: Group) -> dict[int, int]:
    """Map s -> signed count of subsets T of maximal classes with s_T = s.

    s_T counts group elements whose class is covered by every member of
    T.  The empty subset is excluded.  Subsets whose intersection is
    the identity class alone appear only through the single term the
    cancellation leaves, so values s >= 1 and the counts can be summed
    directly against n/(n-s) or (s/n)^k.
    """
    table = coverage_table(G)
    covers = _reduced_covers(table.covers)
    r = len(covers)
    if r > MAX_EXACT_COVERS:
        raise CapExceeded(
            f"{r} independent maximal covers exceed the exact cap"
            f" {MAX_EXACT_COVERS} (exact)"
        )
    sizes = table.class_sizes
    profile: dict[int, int] = {}

    def weight(mask: int) -> int:
        s = 0
        while mask:
            low = mask & -mask
            s += sizes[low.bit_length() - 1]
            mask ^= low
        return s

    full = (1 << len(sizes)) - 1

    def dfs(i: int, mask: int, sign: int, nonempty: bool) -> None:
        if nonempty and mask == 1 and i < r:
            return  # identity-only intersection: completions cancel
        if i == r:
            if nonempty:
                s = weight(mask)
                profile[s] = profile.get(s, 0) + sign
            return
        dfs(i + 1, mask, sign, nonempty)
        dfs(i + 1, mask & covers[i], -sign, True)

    dfs(0, full, -1, False)
    return {s: c for s, c in profile.items() if c}


@dataclass(frozen=True)
class ExactChebotarev:
    value: Fraction
    profile: dict
    order: int

    @property
    def as_float(self) -> float:
        return float(self.value)


def chebotarev_exact(G: Group) -> ExactChebotarev:
    """C(G) as an exact fraction."""
    profile = inclusion_exclusion_profile(G)
    n = G.order
    value = Fraction(0)
    for s, cnt in profile.items():
        value += cnt * Fraction(n, n - s)
    return ExactChebotarev(value=value, profile=profile, order=n)


def p_invariable_exact(G: Group, k: int) -> Fraction:
    """Probability that k independent uniform draws invariably generate G."""
    if k < 0:
        raise InputError(f"draw count must be >= 0, got {k}")
    profile = inclusion_exclusion_profile(G)
    n = G.order
    miss = sum(cnt * s**k for s, cnt in profile.items())
    return Fraction(n**k - miss, n**k)


def min_k_for_probability(G: Group, threshold: Fraction) -> int:
    """Least k with P_I(G, k) >= threshold.

    threshold 0 always answers 0 (P_I(G, 0) is 0 or 1, either way >= 0);
    threshold 1 and beyond is rejected since P_I < 1 for nontrivial G.
    """
    threshold = Fraction(threshold)
    if not 0 <= threshold < 1:
        raise InputError(f"threshold must lie in [0, 1), got {threshold}")
    if threshold == 0:
        return 0
    profile = inclusion_exclusion_profile(G)
    n = G.order
    for k in range(MAX_DRAWS_PER_TRIAL):
        miss = sum(cnt * s**k for s, cnt in profile.items())
        if Fraction(n**k - miss, n**k) >= threshold:
            return k
    raise CapExceeded("probability threshold not reached within the draw cap (draws)")


def truncated_expectation(G: Group, cutoff: int) -> tuple[Fraction, Fraction]:
    """Split C(G) as head + tail at the given draw cutoff.

    head sums the failure probabilities for k < cutoff; tail is the
    exact remainder sum over subsets, (s/n)^cutoff * n/(n-s) per term.
    head + tail == C(G) identically, which makes this a useful internal
    consistency probe.
    """
    if cutoff < 0:
        raise InputError(f"cutoff must be >= 0, got {cutoff}")
    profile = inclusion_exclusion_profile(G)
    n = G.order
    head = Fraction(0)
    for k in range(cutoff):
        head += sum(
            (cnt * Fraction(s, n) ** k for s, cnt in profile.items()),
            start=Fraction(0),
        )
    tail = Fraction(0)
    for s, cnt in profile.items():
        tail += cnt * Fraction(s, n) ** cutoff * Fraction(n, n - s)
    return head, tail


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class MonteCarloReport:
    mean: float
    stderr: float
    trials: int
    seed: int


@dataclass(frozen=True)
class ProbabilityReport:
    p_hat: float
    stderr: float
    trials: int
    seed: int
    draws: int


def _class_cover_masks(G: Group):
    """Per-class uint64 bitmask (or bool row) of reduced covers containing it."""
    table = coverage_table(G)
    covers = _reduced_covers(table.covers)
    r = len(covers)
    nc = table.num_classes
    if r <= 63:
        cmask = np.zeros(nc, dtype=np.uint64)
        for m, cov in enumerate(covers):
            for c in range(nc):
                if (cov >> c) & 1:
                    cmask[c] |= np.uint64(1 << m)
        return r, cmask
    rows = np.zeros((nc, r), dtype=bool)
    for m, cov in enumerate(covers):
        for c in range(nc):
            if (cov >> c) & 1:
                rows[c, m] = True
    return r, rows


def _mc_draw_counts(G: Group, trials: int, seed: int) -> np.ndarray:
    """Number of draws each trial needed before invariable generation."""
    n = G.order
    counts = np.zeros(trials, dtype=np.int64)
    r, cmask = _class_cover_masks(G)
    if r == 0:
        return counts  # trivial group: zero draws suffice
    class_of = G.class_of()
    states = stream_states_vec(seed, np.arange(trials, dtype=np.uint64))
    active = np.ones(trials, dtype=bool)
    wide = cmask.ndim == 2
    if wide:
        alive_rows = np.ones((trials, r), dtype=bool)
    else:
        alive = np.full(trials, (np.uint64(1) << np.uint64(r)) - np.uint64(1))
    j = 0
    while active.any():
        if j >= MAX_DRAWS_PER_TRIAL:
            raise CapExceeded(
                f"a trial exceeded {MAX_DRAWS_PER_TRIAL} draws (draws)"
            )
        u = draws_vec(states[active], j)
        cls = class_of[randbelow_vec(u, n)]
        counts[active] = j + 1
        if wide:
            nxt = alive_rows[active] & cmask[cls]
            alive_rows[active] = nxt
            active[active] = nxt.any(axis=1)
        else:
            nxt = alive[active] & cmask[cls]
            alive[active] = nxt
            active[active] = nxt != np.uint64(0)
        j += 1
    return counts


def chebotarev_montecarlo(G: Group, trials: int, seed: int) -> MonteCarloReport:
    """Estimate C(G) by simulating the draw process to completion."""
    if trials < 1:
        raise InputError(f"need at least one trial, got {trials}")
    counts = _mc_draw_counts(G, trials, seed)
    mean = float(counts.mean())
    stderr = (
        float(counts.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    )
    return MonteCarloReport(mean=mean, stderr=stderr, trials=trials, seed=seed)


def p_invariable_montecarlo(
    G: Group, k: int, trials: int, seed: int
) -> ProbabilityReport:
    """Estimate P_I(G, k): run k draws per trial, count successes."""
    if trials < 1:
        raise InputError(f"need at least one trial, got {trials}")
    if k < 0:
        raise InputError(f"draw count must be >= 0, got {k}")
    n = G.order
    r, cmask = _class_cover_masks(G)
    if r == 0:
        return ProbabilityReport(1.0, 0.0, trials, seed, k)
    class_of = G.class_of()
    states = stream_states_vec(seed, np.arange(trials, dtype=np.uint64))
    wide = cmask.ndim == 2
    if wide:
        alive_rows = np.ones((trials, r), dtype=bool)
    else:
        alive = np.full(trials, (np.uint64(1) << np.uint64(r)) - np.uint64(1))
    for j in range(k):
        u = draws_vec(states, j)
        cls = class_of[randbelow_vec(u, n)]
        if wide:
            alive_rows &= cmask[cls]
        else:
            alive &= cmask[cls]
    good = (~alive_rows.any(axis=1)) if wide else (alive == np.uint64(0))
    hits = int(good.sum())
    p_hat = hits / trials
    stderr = (
        math.sqrt(p_hat * (1.0 - p_hat) / (trials - 1)) if trials > 1 else 0.0
    )
    return ProbabilityReport(p_hat, stderr, trials, seed, k)


def chebotarev_montecarlo_reference(G: Group, trials: int, seed: int) -> np.ndarray:
    """Scalar-loop twin of _mc_draw_counts; must agree draw for draw."""
    n = G.order
    class_of = G.class_of()
    table = coverage_table(G)
    covers = _reduced_covers(table.covers)
    counts = np.zeros(trials, dtype=np.int64)
    if not covers:
        return counts
    for t in range(trials):
        state = stream_state(seed, t)
        alive = list(covers)
        j = 0
        while alive:
            if j >= MAX_DRAWS_PER_TRIAL:
                raise CapExceeded(
                    f"a trial exceeded {MAX_DRAWS_PER_TRIAL} draws (draws)"
                )
            idx = randbelow(state, j, n)
            bit = 1 << int(class_of[idx])
            alive = [c for c in alive if c & bit]
            j += 1
        counts[t] = j
    return counts
