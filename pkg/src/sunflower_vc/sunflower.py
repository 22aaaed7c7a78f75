"""Sunflower certificates, exact search and constructive extractors."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Union

import numpy as np

from .errors import HypothesisViolation, PreconditionError
from .gen import pad_masks
from .setsystem import SetSystem, iter_bits, lex_key, popcount


@dataclass(frozen=True)
class Sunflower:
    """``members`` are indices into the family the sunflower was found in."""

    members: tuple[int, ...]
    kernel: int
    r: int


@dataclass(frozen=True)
class StructWitness:
    """Elements x != y with members meeting {x, y} in {x}, {y} and {x, y}."""

    x: int
    y: int
    s_x: int
    s_y: int
    s_xy: int


@dataclass(frozen=True)
class Inconclusive:
    reason: str = ""


Outcome = Union[Sunflower, StructWitness, Inconclusive]


def is_sunflower(H: SetSystem, members) -> Sunflower | None:
    idx = tuple(int(i) for i in members)
    if not idx:
        raise PreconditionError("a sunflower needs at least one member")
    if len(set(idx)) != len(idx):
        raise PreconditionError("duplicate member indices")
    for i in idx:
        if not 0 <= i < len(H):
            raise PreconditionError(f"member index {i} out of range")
    sets = [H.members[i] for i in idx]
    if len(sets) == 1:
        return Sunflower(idx, sets[0], 1)
    kernel = sets[0] & sets[1]
    union = 0
    for S in sets:
        petal = S & ~kernel
        # petals disjoint and each member contains the kernel <=> all pairwise
        # intersections equal the kernel
        if S & kernel != kernel or petal & union:
            return None
        union |= petal
    return Sunflower(idx, kernel, len(idx))


def validates_struct_witness(H: SetSystem, w: StructWitness) -> bool:
    if w.x == w.y:
        return False
    xy = 1 << w.x | 1 << w.y
    ms = H.members
    return (
        ms[w.s_x] & xy == 1 << w.x
        and ms[w.s_y] & xy == 1 << w.y
        and ms[w.s_xy] & xy == xy
    )


# ---------------------------------------------------------------- exact search


def _star_bound(cands: list[int]) -> int:
    """Upper bound on the number of pairwise disjoint sets among ``cands``.

    Greedily groups the sets around shared elements; a disjoint selection
    takes at most one set per group.
    """
    groups = 0
    rest = cands
    if 0 in rest:
        groups = 1
        rest = [c for c in rest if c]
    while rest:
        counts: dict[int, int] = {}
        for c in rest:
            for e in iter_bits(c):
                counts[e] = counts.get(e, 0) + 1
        e = max(counts, key=lambda k: (counts[k], -k))
        bit = 1 << e
        rest = [c for c in rest if not c & bit]
        groups += 1
    return groups


def _pack(cands: list[int], need: int) -> list[int] | None:
    """Find ``need`` pairwise disjoint sets among ``cands`` (list order preserved)."""
    if need == 0:
        return []
    if len(cands) < need or _star_bound(cands) < need:
        return None
    first, rest = cands[0], cands[1:]
    got = _pack([c for c in rest if not c & first], need - 1)
    if got is not None:
        return [first] + got
    return _pack(rest, need)


def find_sunflower_exact(H: SetSystem, r: int) -> Sunflower | None:
    """An r-sunflower of H if one exists.

    Kernels are tried in order of size, then lexicographically; within a
    kernel the petals are packed by include/exclude backtracking.
    """
    if r < 1:
        raise PreconditionError("r must be at least 1")
    ms = H.members
    if len(ms) < r:
        return None
    if r == 1:
        return Sunflower((0,), ms[0], 1)
    kernels = {0}
    for a, b in combinations(ms, 2):
        kernels.add(a & b)
    for K in sorted(kernels, key=lambda k: (popcount(k), lex_key(k))):
        petals = [S & ~K for S in ms if S & K == K]
        if len(petals) < r:
            continue
        # petal-size order finds small disjoint systems early
        petals.sort(key=lambda p: (popcount(p), p))
        got = _pack(petals, r)
        if got is not None:
            return Sunflower(tuple(sorted(H.index(p | K) for p in got)), K, r)
    return None


# ---------------------------------------------------------------- greedy Erdos-Rado


def _disjoint_greedy(masks) -> list[int]:
    chosen, used = [], 0
    for m in masks:
        if not m & used:
            chosen.append(m)
            used |= m
    return chosen


def extract_er(H: SetSystem, r: int) -> Sunflower | None:
    """Greedy extractor from the classical sunflower-lemma argument."""
    if r < 1:
        raise PreconditionError("r must be at least 1")
    if len(H) < r:
        return None
    if r == 1:
        return Sunflower((0,), H.members[0], 1)
    # (current set, original member)
    fam = [(S, S) for S in H.members]
    kernel = 0
    while True:
        disjoint = _disjoint_greedy(m for m, _ in fam)
        if len(disjoint) >= r:
            pick = set(disjoint[:r])
            orig = [o for m, o in fam if m in pick]
            return Sunflower(tuple(sorted(H.index(o) for o in orig)), kernel, r)
        counts: dict[int, int] = {}
        for m, _ in fam:
            for e in iter_bits(m):
                counts[e] = counts.get(e, 0) + 1
        if not counts:
            return None
        e = max(counts, key=lambda k: (counts[k], -k))
        if counts[e] < r:
            return None
        bit = 1 << e
        fam = [(m & ~bit, o) for m, o in fam if m & bit]
        kernel |= bit


# ---------------------------------------------------------------- witness procedure


def _witness_masks(
    fam: list[tuple[int, int]], r: int, n: int
) -> tuple[str, object]:
    """Core of the witness procedure on (current set, original member) pairs.

    Returns ("sunflower", (originals, kernel)), ("witness", (x, y, ox, oy, oxy))
    or ("inconclusive", reason).
    """
    kernel = 0
    while True:
        if not fam:
            return "inconclusive", "family became empty"
        ell = max(popcount(m) for m, _ in fam)
        if ell == 0:
            return "inconclusive", "only the empty set remains"
        padded, _ = pad_masks([m for m, _ in fam], ell, n)
        # private padding bits sit above every real element
        level = sorted(zip(padded, fam))
        disjoint = _disjoint_greedy(p for p, _ in level)
        if len(disjoint) >= r:
            pick = set(disjoint[:r])
            return "sunflower", ([o for p, (_, o) in level if p in pick], kernel)
        # least index among the maximizers of |H_i|
        star = max(
            range(len(disjoint)),
            key=lambda i: (sum(1 for p, _ in level if p & disjoint[i]), -i),
        )
        Fi = disjoint[star]
        touching = [(p, cur, o) for p, (cur, o) in level if p & Fi]
        cuts = [p & Fi for p, _, _ in touching]
        for a, b in combinations(range(len(touching)), 2):
            E, E2 = cuts[a], cuts[b]
            if E & ~E2 and E2 & ~E:
                x = (E & ~E2 & -(E & ~E2)).bit_length() - 1
                y = (E2 & ~E & -(E2 & ~E)).bit_length() - 1
                oxy = next(o for p, _, o in touching if p == Fi)
                return "witness", (x, y, touching[a][2], touching[b][2], oxy)
        E = min(cuts, key=popcount)
        real = E & ((1 << n) - 1)
        fam = [(cur & ~real, o) for _, cur, o in touching]
        kernel |= real
        if E != real:
            # E reaches padding only when F_i* is the sole touching member
            fam = [(m, o) for m, o in fam if m]


def witness_or_sunflower(H: SetSystem, r: int) -> Outcome:
    """Either an r-sunflower, a two-element structure witness, or Inconclusive.

    At each level the family is padded to uniform size with fresh elements
    and sorted by mask, a maximal disjoint sequence is taken greedily, and
    either an incomparable pair of traces on the most-met set yields a
    witness or the common minimal trace is removed and the search descends.
    Inconclusive is only possible when |H| <= (r-1)**ell.
    """
    if r < 2:
        raise PreconditionError("witness_or_sunflower needs r >= 2")
    kind, data = _witness_masks([(S, S) for S in H.members], r, H.n)
    if kind == "sunflower":
        origs, _ = data
        sf = is_sunflower(H, sorted(H.index(o) for o in origs))
        if sf is None:  # pragma: no cover - guarded by construction
            raise AssertionError("witness procedure produced an invalid sunflower")
        return sf
    if kind == "witness":
        x, y, ox, oy, oxy = data
        w = StructWitness(x, y, H.index(ox), H.index(oy), H.index(oxy))
        if not validates_struct_witness(H, w):  # pragma: no cover
            raise AssertionError("witness procedure produced an invalid witness")
        return w
    return Inconclusive(data)


def extract_vc1(H: SetSystem, r: int) -> Sunflower:
    """An r-sunflower in a VC-dimension <= 1 family with more than (r-1)**ell members."""
    from .vc import vc_dimension

    if r < 1:
        raise PreconditionError("r must be at least 1")
    if len(H) < r:
        raise HypothesisViolation(f"family has {len(H)} < r = {r} members")
    if r <= 2:
        return is_sunflower(H, range(r))
    d = vc_dimension(H).dimension
    if d >= 2:
        raise HypothesisViolation(f"VC-dimension is {d}, needs <= 1")
    ell = H.ell
    if len(H) <= (r - 1) ** ell:
        raise HypothesisViolation(f"|H| = {len(H)} is not > (r-1)**ell = {(r - 1) ** ell}")
    fam = [(S, S) for S in H.members]
    kernel = 0
    while True:
        kind, data = _witness_masks(fam, r, H.n)
        if kind == "sunflower":
            origs, k2 = data
            out = is_sunflower(H, sorted(H.index(o) for o in origs))
            if out is None or out.kernel != kernel | k2:  # pragma: no cover
                raise AssertionError("extracted members do not form a sunflower")
            return out
        if kind == "inconclusive":
            raise HypothesisViolation(f"witness procedure inconclusive ({data}): size hypothesis fails")
        x, y = data[0], data[1]
        xy = 1 << x | 1 << y
        if any(not m & xy for m, _ in fam):
            raise HypothesisViolation(
                f"a member misses both witness elements {H.ground[x]!r}, {H.ground[y]!r}: VC-dimension >= 2"
            )
        bit_x = 1 << x
        with_x = sum(1 for m, _ in fam if m & bit_x)
        z = bit_x if 2 * with_x >= len(fam) else 1 << y
        fam = [(m & ~z, o) for m, o in fam if m & z]
        kernel |= z


# ---------------------------------------------------------------- random partitions


def disjoint_via_partition(H: SetSystem, r: int, trials: int, seed: int) -> Sunflower | None:
    """Look for r disjoint members by splitting the ground set into 2r random parts."""
    if r < 1 or trials < 1:
        raise PreconditionError("need r >= 1 and trials >= 1")
    if len(H) < r:
        return None
    rng = np.random.default_rng(seed)
    ms = H.members
    for _ in range(trials):
        part = rng.integers(0, 2 * r, size=H.n)
        masks = [0] * (2 * r)
        for i, j in enumerate(part):
            masks[int(j)] |= 1 << i
        taken: list[int] = []
        for pm in masks:
            hit = next((k for k, S in enumerate(ms) if S & ~pm == 0 and k not in taken), None)
            if hit is not None:
                taken.append(hit)
            if len(taken) == r:
                sf = is_sunflower(H, sorted(taken))
                if sf is not None and (r == 1 or sf.kernel == 0):
                    return sf
                break
    return None
