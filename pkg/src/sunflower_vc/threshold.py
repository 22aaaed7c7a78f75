"""Upset probabilities, minimum-weight covers and Kahn-Kalai style dichotomies."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Literal, Sequence

import mpmath
import numpy as np

from . import _kernels
from .bounds import log_star_smoothed
from .errors import LimitExceeded, PreconditionError
from .limits import cover_exact_limit, prob_exact_limit
from .setsystem import SetSystem, compress, popcount

Variant = Literal["kk-bell", "vc", "vc1"]

# two-sided 99% normal quantile
Z99 = 2.5758293035489

# dyadic grid for rounding irrational logarithms up
LOG_GRID_BITS = 64

KK_BELL_CONSTANT = 48


def _prob(p) -> Fraction:
    p = Fraction(p)
    if p < 0:
        raise PreconditionError("p must be non-negative")
    return min(p, Fraction(1))


# ---------------------------------------------------------------- upset probability


@dataclass(frozen=True)
class UpsetProfile:
    """Number of upset sets of each size over the support of a family."""

    support_size: int
    counts: tuple[int, ...]

    def probability(self, p) -> Fraction:
        p = _prob(p)
        s = self.support_size
        return sum((c * p ** w * (1 - p) ** (s - w) for w, c in enumerate(self.counts) if c), Fraction(0))


def upset_profile(H: SetSystem) -> UpsetProfile:
    """Upset counts by size, computed on the support of H (other elements are free)."""
    sup = H.support
    s = popcount(sup)
    limit = prob_exact_limit()
    if s > limit:
        raise LimitExceeded(
            f"support of size {s} exceeds the exact limit {limit} (SUNFLOWER_VC_PROB_LIMIT); use prob_upset_mc"
        )
    if len(H) == 0:
        return UpsetProfile(s, (0,) * (s + 1))
    masks = _kernels.as_masks(compress(S, sup) for S in H.members)
    counts = _kernels.upset_profile(masks, s)
    return UpsetProfile(s, tuple(int(c) for c in counts))


def prob_upset_exact(H: SetSystem, p) -> Fraction:
    """Exact P[X_p contains a member of H]; p above 1 is treated as 1."""
    return upset_profile(H).probability(p)


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    half_width: float
    trials: int
    hits: int


def prob_upset_mc(H: SetSystem, p, trials: int, seed: int) -> MonteCarloEstimate:
    """Sampled upset probability with a two-sided 99% normal-approximation half-width."""
    if trials < 100:
        raise PreconditionError("prob_upset_mc needs at least 100 trials")
    pf = float(_prob(p))
    rng = np.random.default_rng(seed)
    sup = H.support
    cols = list(range(popcount(sup)))
    inc = np.zeros((len(H), len(cols)), dtype=np.int32)
    for r, S in enumerate(H.members):
        c = compress(S, sup)
        for j in cols:
            inc[r, j] = c >> j & 1
    hits = 0
    chunk = 1 << 14
    done = 0
    while done < trials:
        k = min(chunk, trials - done)
        W = rng.random((k, len(cols))) < pf
        if len(H):
            missing = (~W).astype(np.int32) @ inc.T
            hits += int(np.count_nonzero((missing == 0).any(axis=1)))
        done += k
    est = hits / trials
    return MonteCarloEstimate(est, Z99 * math.sqrt(est * (1 - est) / trials), trials, hits)


# ---------------------------------------------------------------- minimum-weight cover


@dataclass(frozen=True)
class CoverCertificate:
    pieces: SetSystem
    q: Fraction
    weight: Fraction

    def covers(self, H: SetSystem) -> bool:
        return all(any(P & ~S == 0 for P in self.pieces.members) for S in H.members)


def intersection_closure(masks: Sequence[int]) -> list[int]:
    """All distinct intersections of nonempty subfamilies."""
    closed: set[int] = set()
    for S in masks:
        new = {S} | {S & c for c in closed}
        closed |= new
    return sorted(closed)


def min_cover_weight(H: SetSystem, q) -> tuple[Fraction, CoverCertificate]:
    """Least sum of q**|F| over families F whose upset contains H.

    A piece covering the members C can be enlarged to the intersection of C
    without losing coverage or raising its weight, so the pieces range over
    intersections of subfamilies.  The cover itself is a memoized search over
    the set of still-uncovered members, branching on the lowest one.
    """
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise PreconditionError("q must lie in [0, 1]")
    ms = H.members
    m = len(ms)
    limit = cover_exact_limit()
    if m > limit:
        raise LimitExceeded(f"|H| = {m} exceeds the exact cover limit {limit} (SUNFLOWER_VC_COVER_LIMIT)")
    if m == 0:
        return Fraction(0), CoverCertificate(H.with_members(()), q, Fraction(0))
    pieces = intersection_closure(ms)
    L = max(popcount(P) for P in pieces)
    a, b = q.numerator, q.denominator
    # integer weights scaled by b**L
    weight = {P: a ** popcount(P) * b ** (L - popcount(P)) for P in pieces}
    cover = {P: sum(1 << i for i, S in enumerate(ms) if P & ~S == 0) for P in pieces}
    by_member = [[P for P in pieces if cover[P] >> i & 1] for i in range(m)]

    @lru_cache(maxsize=None)
    def best(uncovered: int) -> tuple[int, tuple[int, ...]]:
        if uncovered == 0:
            return 0, ()
        i = (uncovered & -uncovered).bit_length() - 1
        top = None
        for P in by_member[i]:
            w, rest = best(uncovered & ~cover[P])
            w += weight[P]
            if top is None or w < top[0]:
                top = (w, (P,) + rest)
        return top

    w, chosen = best((1 << m) - 1)
    best.cache_clear()
    value = Fraction(w, b ** L)
    return value, CoverCertificate(H.with_members(chosen), q, value)


# ---------------------------------------------------------------- dichotomy


def log2_upper(x) -> Fraction:
    """A rational upper bound on log2(x) for rational x > 0, exact for powers of two."""
    x = Fraction(x)
    if x <= 0:
        raise PreconditionError("log2 needs a positive argument")
    num, den = x.numerator, x.denominator
    if num & (num - 1) == 0 and den & (den - 1) == 0:
        return Fraction(num.bit_length() - den.bit_length())
    with mpmath.workprec(256):
        v = mpmath.log(mpmath.mpf(num) / mpmath.mpf(den), 2)
        scaled = int(mpmath.floor(v * 2 ** LOG_GRID_BITS))
    # log2 of a non-power of two is irrational, so the floor is strict
    return Fraction(scaled + 1, 1 << LOG_GRID_BITS)


@dataclass(frozen=True)
class DichotomyReport:
    variant: str
    q: Fraction
    epsilon: Fraction
    constant_used: Fraction
    p_evaluated: Fraction
    p_uncapped: Fraction
    cover_threshold: Fraction
    min_cover_weight: Fraction
    best_cover: CoverCertificate
    prob_upset: Fraction
    branch1_holds: bool
    branch2_holds: bool

    @property
    def holds(self) -> bool:
        return self.branch1_holds or self.branch2_holds


def dichotomy_p(H: SetSystem, q, epsilon, variant: Variant, constant) -> Fraction:
    """The uncapped sampling probability for a variant, rounded up to a rational."""
    q, eps, A = Fraction(q), Fraction(epsilon), Fraction(constant)
    ell = H.ell
    if variant == "kk-bell":
        if ell == 0:
            return Fraction(0)
        return A * q * log2_upper(ell / eps)
    if variant == "vc":
        if ell == 0:
            return Fraction(0)
        from .vc import vc_dimension

        d = max(vc_dimension(H).dimension, 1) if len(H) else 1
        return A * q * (log2_upper(d / eps) + log_star_smoothed(ell).as_fraction())
    if variant == "vc1":
        return A * q * log2_upper(1 / eps)
    raise PreconditionError(f"unknown variant {variant!r}")


def kk_dichotomy(
    H: SetSystem,
    q,
    epsilon,
    variant: Variant = "kk-bell",
    constant=None,
    *,
    cover: tuple[Fraction, CoverCertificate] | None = None,
    profile: UpsetProfile | None = None,
) -> DichotomyReport:
    """Evaluate both branches of a dichotomy exactly.

    ``cover`` and ``profile`` let sweeps reuse work that does not depend on
    epsilon or the constant.
    """
    q, eps = Fraction(q), Fraction(epsilon)
    if not 0 < eps <= Fraction(1, 2):
        raise PreconditionError("epsilon must lie in (0, 1/2]")
    if not 0 <= q <= 1:
        raise PreconditionError("q must lie in [0, 1]")
    if variant == "kk-bell":
        A = Fraction(KK_BELL_CONSTANT if constant is None else constant)
        threshold = Fraction(1, 2)
    elif variant in ("vc", "vc1"):
        if constant is None:
            raise PreconditionError(f"variant {variant} needs an explicit constant")
        A = Fraction(constant)
        threshold = Fraction(2, 3)
    else:
        raise PreconditionError(f"unknown variant {variant!r}")
    if A <= 0:
        raise PreconditionError("constant must be positive")
    if variant == "vc1":
        from .vc import vc_dimension

        if len(H) and vc_dimension(H).dimension > 1:
            raise PreconditionError("variant vc1 needs VC-dimension <= 1")
    p_raw = dichotomy_p(H, q, eps, variant, A)
    p = min(p_raw, Fraction(1))
    weight, cert = cover if cover is not None else min_cover_weight(H, q)
    prof = profile if profile is not None else upset_profile(H)
    prob = prof.probability(p)
    return DichotomyReport(
        variant=variant,
        q=q,
        epsilon=eps,
        constant_used=A,
        p_evaluated=p,
        p_uncapped=p_raw,
        cover_threshold=threshold,
        min_cover_weight=weight,
        best_cover=cert,
        prob_upset=prob,
        branch1_holds=weight <= threshold,
        branch2_holds=prob > 1 - eps,
    )


CONSTANT_GRID = (1, 2, 4, 8, 16, 32, 64)


def smallest_working_constant(
    cases: Iterable[tuple[SetSystem, Fraction, Fraction]],
    variant: Variant = "vc1",
    grid: Sequence[int] = CONSTANT_GRID,
) -> int | None:
    """Least grid constant for which the dichotomy holds on every (H, q, epsilon)."""
    cases = list(cases)
    covers = {}
    profiles = {}
    for A in grid:
        ok = True
        for H, q, eps in cases:
            key = (H, Fraction(q))
            if key not in covers:
                covers[key] = min_cover_weight(H, q)
            if H not in profiles:
                profiles[H] = upset_profile(H)
            rep = kk_dichotomy(H, q, eps, variant, A, cover=covers[key], profile=profiles[H])
            if not rep.holds:
                ok = False
                break
        if ok:
            return A
    return None
