"""Named property suites over generated corpora.

Each suite returns a :class:`SuiteResult` holding one :class:`PropertyResult`
per property.  The CLI ``verify`` command and the acceptance tests both run
these suites; ``scale`` shrinks the corpora for quick runs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable

import numpy as np

from . import _kernels
from .bounds import log_star_smoothed
from .errors import PreconditionError
from .gen import GeneratorConfig, random_family, tree_family
from .setsystem import SetSystem, core, is_subset, popcount, upset_contains
from .spread import (
    avoids_every_pair,
    count_bound,
    count_bound_vc1,
    decompose,
    large_profile,
    reduced_family,
)
from .sunflower import (
    Inconclusive,
    StructWitness,
    Sunflower,
    extract_er,
    extract_vc1,
    find_sunflower_exact,
    is_sunflower,
    validates_struct_witness,
    witness_or_sunflower,
)
from .threshold import kk_dichotomy, smallest_working_constant
from .vc import sauer_shelah_bound, vc_dimension, vc_dimension_of_masks


@dataclass
class PropertyResult:
    name: str
    passed: bool
    checked: int
    detail: str = ""


@dataclass
class SuiteResult:
    name: str
    properties: list[PropertyResult] = field(default_factory=list)
    seconds: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)


class _Tally:
    """Counts checks for one property and keeps the first counterexample."""

    def __init__(self, name: str):
        self.name = name
        self.checked = 0
        self.failure = ""

    def check(self, ok: bool, what: Callable[[], str] | str = "") -> bool:
        self.checked += 1
        if not ok and not self.failure:
            self.failure = what() if callable(what) else what
        return ok

    def result(self) -> PropertyResult:
        return PropertyResult(self.name, not self.failure, self.checked, self.failure)


def naive_sunflower_exists(H: SetSystem, r: int) -> bool:
    """Try every r-subset of members."""
    return any(is_sunflower(H, idx) is not None for idx in combinations(range(len(H)), r))


def _cfg(n, ell, size, seed, kind="uniform-random", min_size=0):
    return GeneratorConfig(n=n, ell=ell, family_size=size, seed=seed, kind=kind, min_size=min_size)


# ---------------------------------------------------------------- suites


def suite_tree_sharpness(seed: int = 0, scale: float = 1.0) -> list[PropertyResult]:
    size, uniform, vc1, free = (_Tally(n) for n in ("size", "uniform", "vc-dimension-1", "no-r-sunflower"))
    for r in (3, 4, 5):
        for ell in (1, 2, 3, 4):
            H = tree_family(r, ell)
            tag = f"tree_family({r},{ell})"
            size.check(len(H) == (r - 1) ** ell, tag)
            uniform.check(all(popcount(S) == ell for S in H), tag)
            vc1.check(vc_dimension(H).dimension == 1, tag)
            free.check(find_sunflower_exact(H, r) is None, tag)
    return [t.result() for t in (size, uniform, vc1, free)]


def vc1_corpus(seed: int, scale: float = 1.0) -> list[tuple[SetSystem, int]]:
    """VC <= 1 families with (r-1)**ell + 1 members for r in {3, 4}, ell <= 4."""
    per = max(1, round(20 * scale))
    out = []
    k = 0
    for r in (3, 4):
        for ell in (1, 2, 3, 4):
            size = (r - 1) ** ell + 1
            for i in range(per):
                k += 1
                H = random_family(_cfg(size + 2 * ell + i % 5, ell, size, seed ^ k, "forest-path"))
                out.append((H, r))
                if size <= 10:
                    k += 1
                    H = random_family(_cfg(4 * size, ell, size, seed ^ k, "rejection-vc1"))
                    out.append((H, r))
    return out


def suite_vc1_extraction(seed: int = 0, scale: float = 1.0) -> list[PropertyResult]:
    corpus = vc1_corpus(seed, scale)
    pre, valid, agree = _Tally("corpus-hypotheses"), _Tally("extract-valid"), _Tally("agrees-with-exact")
    for H, r in corpus:
        if not pre.check(vc_dimension(H).dimension <= 1 and len(H) > (r - 1) ** H.ell, lambda: repr(H)):
            continue
        sf = extract_vc1(H, r)
        ok = sf.r == r and is_sunflower(H, sf.members) is not None
        valid.check(ok, lambda: f"{H!r} r={r} -> {sf}")
        agree.check(find_sunflower_exact(H, r) is not None, lambda: f"{H!r} r={r}")
    return [pre.result(), valid.result(), agree.result()]


def suite_witness(seed: int = 0, scale: float = 1.0) -> list[PropertyResult]:
    corpus = list(vc1_corpus(seed, scale))
    # families of any VC-dimension above the threshold
    k = 0
    for r in (2, 3, 4):
        for ell in (1, 2, 3):
            size = (r - 1) ** ell + 1
            for i in range(max(1, round(8 * scale))):
                k += 1
                n = max(ell + 2, 6 + i % 5)
                total = sum(comb(n, s) for s in range(ell + 1))
                if size <= total:
                    corpus.append((random_family(_cfg(n, ell, size, seed ^ (1000 + k))), r))
    never, witness, sunflower = _Tally("never-inconclusive"), _Tally("witness-traces"), _Tally("sunflower-valid")
    for H, r in corpus:
        if len(H) <= (r - 1) ** H.ell:
            continue
        out = witness_or_sunflower(H, r)
        never.check(not isinstance(out, Inconclusive), lambda: f"{H!r} r={r}")
        if isinstance(out, StructWitness):
            witness.check(validates_struct_witness(H, out), lambda: f"{H!r} -> {out}")
        elif isinstance(out, Sunflower):
            sunflower.check(out.r == r and is_sunflower(H, out.members) is not None, lambda: f"{H!r} -> {out}")
    return [never.result(), witness.result(), sunflower.result()]


def _ss_table(k_max: int) -> np.ndarray:
    return np.array(
        [[sauer_shelah_bound(k, min(d, k)) for d in range(k_max + 1)] for k in range(k_max + 1)],
        dtype=np.int64,
    )


def _all_families_tables(n: int):
    """Trace sizes, shattered sets and trace families for every family on n <= 4 points."""
    nsub = 1 << n
    X = np.arange(1 << nsub, dtype=np.int64)
    traces = np.zeros((X.size, nsub), np.int64)
    for U in range(nsub):
        tr = np.zeros_like(X)
        for s in range(nsub):
            tr |= ((X >> s) & 1) << (s & U)
        traces[:, U] = tr
    sizes = _kernels.popcount_np(traces)
    pcs = np.array([bin(U).count("1") for U in range(nsub)], np.int64)
    shattered = sizes == (np.int64(1) << pcs)[None, :]
    vc = np.where(shattered, pcs[None, :], -1).max(axis=1)
    return traces, sizes, pcs, vc


def suite_sauer_shelah(seed: int = 0, scale: float = 1.0) -> list[PropertyResult]:
    bound, mono = _Tally("trace-size-bound"), _Tally("trace-vc-monotone")
    ss = _ss_table(8)
    # every family on at most 4 points, from materialized tables
    for n in range(0, 5):
        traces, sizes, pcs, vc = _all_families_tables(n)
        d = vc[1:, None]
        size_ok = np.all(sizes[1:] <= ss[pcs[None, :], np.minimum(d, pcs[None, :])], axis=1)
        # a trace is itself a family on the same points, so its VC is a table lookup
        mono_ok = np.all(vc[traces[1:]] <= d, axis=1)
        for tally, ok in ((bound, size_ok), (mono, mono_ok)):
            bad = np.flatnonzero(~ok)
            tally.checked += ok.size - 1
            tally.check(bad.size == 0, lambda: f"n={n} family {int(bad[0]) + 1:#x}")
    # every family on 5 points, through the split kernel
    checked, bad, lo, hi = _kernels.sauer_shelah_five(_ss_table(5), reduced=True)
    five = PropertyResult("trace-size-bound-n5", bad == 0 and checked == (1 << 32) - 1, checked,
                          "" if bad == 0 else f"{bad} failures, first lo={lo:#x} hi={hi:#x}")
    # random families on up to 8 points, all traces
    rng = np.random.default_rng(seed)
    count = max(1, round(1000 * scale))
    for i in range(count):
        n = int(rng.integers(1, 9))
        ell = int(rng.integers(1, n + 1))
        total = sum(comb(n, s) for s in range(ell + 1))
        size = int(rng.integers(1, min(total, 24) + 1))
        H = random_family(_cfg(n, ell, size, seed ^ (i + 1)))
        d = vc_dimension(H).dimension
        ms = np.array(H.members, dtype=np.int64)
        for U in range(1 << n):
            tr = np.unique(ms & U)
            k = popcount(U)
            bound.check(tr.size <= sauer_shelah_bound(k, min(d, k)), lambda: f"{H!r} U={U:#x}")
            mono.check(vc_dimension_of_masks(tr, n) <= d, lambda: f"{H!r} U={U:#x}")
    return [bound.result(), five, mono.result()]


def spread_corpus(seed: int, scale: float = 1.0) -> list[SetSystem]:
    out = []
    for n in range(0, 4):
        ground = tuple(f"x{i}" for i in range(n))
        for X in range(1, 1 << (1 << n)):
            out.append(SetSystem(ground, tuple(s for s in range(1 << n) if X >> s & 1)))
    rng = np.random.default_rng(seed)
    for i in range(max(1, round(600 * scale))):
        n = 4 + i % 3
        ell = int(rng.integers(1, n + 1))
        total = sum(comb(n, s) for s in range(ell + 1))
        size = int(rng.integers(1, min(total, 12) + 1))
        out.append(random_family(_cfg(n, ell, size, seed ^ (i + 1))))
    return out


def suite_spread(seed: int = 0, scale: float = 1.0) -> list[PropertyResult]:
    names = ("core-contains-reduced", "chooser-minimal", "chain-F-Fstar-S", "covers-H", "small-bounded",
             "small-upset-lifts", "small-vc", "large-is-large", "split-matches")
    T = {k: _Tally(k) for k in names}
    for H in spread_corpus(seed, scale):
        n = H.n
        d = vc_dimension(H).dimension
        for W in range(1 << n):
            HW = reduced_family(H, W).members
            for F in HW:
                T["core-contains-reduced"].check(
                    upset_contains(H, W | F) and is_subset(F, core(H, W | F)), lambda: f"{H!r} W={W} F={F}")
            for rule in ("lexicographic", "seeded-random"):
                for t in range(H.ell + 1):
                    dec = decompose(H, W, t, rule, seed)
                    tag = lambda: f"{H!r} W={W} t={t} {rule}"  # noqa: E731
                    for S in H.members:
                        F, Fs = dec.chooser[S], dec.f_star[S]
                        T["chooser-minimal"].check(F in HW and is_subset(F, S & ~W), tag)
                        T["chain-F-Fstar-S"].check(is_subset(F, Fs) and is_subset(Fs, S) and Fs & ~W == F, tag)
                    small, large = dec.small.members, dec.large.members
                    T["split-matches"].check(
                        set(small) == {dec.chooser[S] for S in H if popcount(dec.chooser[S]) < t}
                        and set(large) == {dec.f_star[S] for S in H if popcount(dec.chooser[S]) >= t}, tag)
                    both = small + large
                    T["covers-H"].check(all(any(is_subset(P, S) for P in both) for S in H), tag)
                    T["small-bounded"].check(all(popcount(F) <= t - 1 for F in small), tag)
                    T["large-is-large"].check(all(popcount(F & ~W) >= t for F in large), tag)
                    if small:
                        T["small-vc"].check(vc_dimension(dec.small).dimension <= d, tag)
                        lifts = all(
                            upset_contains(H, W | Wp)
                            for Wp in range(1 << n)
                            if any(is_subset(F, Wp) for F in small)
                        )
                        T["small-upset-lifts"].check(lifts, tag)
    return [T[k].result() for k in names]


P_GRID = (Fraction(1, 16), Fraction(1, 8), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1))
Q_DIVISORS = (2, 3, 4, 8, 16)


def suite_counting(seed: int = 0, scale: float = 1.0) -> list[PropertyResult]:
    general, vc1 = _Tally("expectation-le-bound"), _Tally("expectation-le-vc1-bound")
    rng = np.random.default_rng(seed)
    count = max(1, round(400 * scale))
    for i in range(count):
        n = int(rng.integers(2, 13))
        ell = int(rng.integers(1, min(n, 5) + 1))
        if i % 3 == 2:
            H = random_family(_cfg(n, ell, int(rng.integers(1, n + 1)), seed ^ (i + 1), "forest-path"))
        else:
            total = sum(comb(n, s) for s in range(ell + 1))
            size = int(rng.integers(1, min(total, 14) + 1))
            H = random_family(_cfg(n, ell, size, seed ^ (i + 1)))
        d = vc_dimension(H).dimension
        L = max(H.ell, d, 1) + int(rng.integers(0, 2))
        lemma_vc1 = d <= 1 and avoids_every_pair(H)
        for rule in ("lexicographic", "seeded-random"):
            prof = large_profile(H, rule, seed ^ i)
            for _ in range(3):
                p = P_GRID[int(rng.integers(len(P_GRID)))]
                q = p / Q_DIVISORS[int(rng.integers(len(Q_DIVISORS)))]
                for t in range(L + 1):
                    e = prof.expectation(p, q, t)
                    b = count_bound(L, d, q, p, t)
                    general.check(e <= b, lambda: f"{H!r} {rule} p={p} q={q} t={t}: {e} > {b}")
                    if lemma_vc1:
                        b1 = count_bound_vc1(q, p, t)
                        vc1.check(e <= b1, lambda: f"{H!r} {rule} p={p} q={q} t={t}: {e} > {b1}")
    return [general.result(), vc1.result()]


Q_KK = tuple(Fraction(1, 2 ** k) for k in (1, 2, 3, 4, 5, 6, 7, 8, 10))
EPS = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))


def suite_kk_bell(seed: int = 0, scale: float = 1.0) -> tuple[list[PropertyResult], dict]:
    holds = _Tally("branch1-or-branch2")
    rng = np.random.default_rng(seed)
    stats = {"branch1_only": 0, "branch2_only": 0, "both": 0}
    count = max(1, round(600 * scale))
    for i in range(count):
        n = int(rng.integers(1, 13))
        ell = int(rng.integers(1, n + 1))
        total = sum(comb(n, s) for s in range(ell + 1))
        size = int(rng.integers(1, min(total, 10) + 1))
        H = random_family(_cfg(n, ell, size, seed ^ (i + 1), min_size=1 if total - 1 >= size else 0))
        q = Q_KK[int(rng.integers(len(Q_KK)))]
        eps = EPS[i % 3]
        rep = kk_dichotomy(H, q, eps, "kk-bell")
        holds.check(rep.holds, lambda: f"{H!r} q={q} eps={eps}")
        key = "both" if rep.branch1_holds and rep.branch2_holds else "branch1_only" if rep.branch1_holds else "branch2_only"
        if rep.holds:
            stats[key] += 1
    return [holds.result()], stats


def suite_vc1_calibration(seed: int = 0, scale: float = 1.0) -> tuple[list[PropertyResult], dict]:
    cases = []
    rng = np.random.default_rng(seed)
    for i in range(max(1, round(60 * scale))):
        n = int(rng.integers(2, 13))
        ell = int(rng.integers(1, 5))
        size = int(rng.integers(1, min(n, 10) + 1))
        H = None
        if i % 2:
            try:
                H = random_family(_cfg(n, ell, size, seed ^ (i + 1), "rejection-vc1"))
            except PreconditionError:
                pass  # dense parameters rarely give VC <= 1; fall back to a forest
        if H is None:
            H = random_family(_cfg(n, ell, size, seed ^ (i + 1), "forest-path"))
        for q in (Fraction(1, 2), Fraction(1, 8), Fraction(1, 32), Fraction(1, 128), Fraction(1, 1024)):
            cases.append((H, q, EPS[(i + int(q.denominator)) % 3]))
    A = smallest_working_constant(cases, "vc1")
    res = PropertyResult("working-constant-exists", A is not None, len(cases), "" if A is not None else "none in grid")
    return [res], {"smallest_constant": A, "cases": len(cases)}


LOGSTAR_POINTS = {16: 7, 17: 8, 100: 8, 256: 8, 257: 9, 300: 9, 65536: 9, 65537: 10}


def suite_logstar(seed: int = 0, scale: float = 1.0) -> list[PropertyResult]:
    """Interval values (as twice the value), shift identity and the squaring claim."""
    pts, shift, claim = _Tally("interval-values"), _Tally("shift-identity"), _Tally("square-vs-power")
    for x, twice in LOGSTAR_POINTS.items():
        pts.check(log_star_smoothed(x).twice_value == twice, f"x={x}")
    top = 1 << 16
    for x in range(1, top + 1):
        big = log_star_smoothed(1 << x)
        shift.check(big == log_star_smoothed(x) + 1, f"x={x}")
        if x > 8:
            claim.check(log_star_smoothed(x * x) + Fraction(1, 2) <= big, f"x={x}")
    return [pts.result(), shift.result(), claim.result()]


def suite_erdos_rado(seed: int = 0, scale: float = 1.0) -> list[PropertyResult]:
    ok = _Tally("extract-er-succeeds")
    rng = np.random.default_rng(seed)
    for i in range(max(1, round(300 * scale))):
        n = int(rng.integers(8, 15))
        total = sum(comb(n, s) for s in range(4))
        size = int(rng.integers(49, min(total, 120) + 1))
        H = random_family(_cfg(n, 3, size, seed ^ (i + 1)))
        sf = extract_er(H, 3)
        ok.check(sf is not None and sf.r == 3 and is_sunflower(H, sf.members) is not None, lambda: repr(H))
    return [ok.result()]


def suite_oracle(seed: int = 0, scale: float = 1.0) -> list[PropertyResult]:
    agree, valid = _Tally("exact-agrees-with-naive"), _Tally("found-is-valid")
    rng = np.random.default_rng(seed)
    for i in range(max(1, round(600 * scale))):
        n = int(rng.integers(1, 9))
        ell = int(rng.integers(1, n + 1))
        total = sum(comb(n, s) for s in range(ell + 1))
        size = int(rng.integers(1, min(total, 10) + 1))
        H = random_family(_cfg(n, ell, size, seed ^ (i + 1)))
        r = (2, 3, 4)[i % 3]
        got = find_sunflower_exact(H, r)
        agree.check((got is not None) == naive_sunflower_exists(H, r), lambda: f"{H!r} r={r}")
        if got is not None:
            valid.check(got.r == r and is_sunflower(H, got.members) is not None, lambda: f"{H!r} -> {got}")
    return [agree.result(), valid.result()]


SUITES: dict[str, Callable] = {
    "tree-sharpness": suite_tree_sharpness,
    "vc1-extraction": suite_vc1_extraction,
    "witness": suite_witness,
    "sauer-shelah": suite_sauer_shelah,
    "spread": suite_spread,
    "counting": suite_counting,
    "kk-bell": suite_kk_bell,
    "vc1-calibration": suite_vc1_calibration,
    "logstar": suite_logstar,
    "erdos-rado": suite_erdos_rado,
    "oracle": suite_oracle,
}


def run_suite(name: str, seed: int = 0, scale: float = 1.0) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    start = time.perf_counter()
    out = SUITES[name](seed=seed, scale=scale)
    notes = {}
    if isinstance(out, tuple):
        out, notes = out
    return SuiteResult(name, out, time.perf_counter() - start, notes)
