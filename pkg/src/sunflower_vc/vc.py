"""Shattering and exact VC-dimension."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from . import _kernels
from .errors import LimitExceeded, PreconditionError
from .limits import vc_candidate_budget
from .setsystem import SetSystem, bits_of, iter_bits, lex_key, popcount

# shattered-set tables are used when 2**support stays below this
_TABLE_BITS = 16


@dataclass(frozen=True)
class ShatterReport:
    dimension: int
    witness_set: int


def shatters(H: SetSystem, T: int) -> bool:
    if T & ~H.full_mask:
        raise PreconditionError("T is not a subset of the ground set")
    k = popcount(T)
    if len(H) < 1 << k:
        return False
    return len({S & T for S in H.members}) == 1 << k


def _candidate_elements(H: SetSystem) -> list[int]:
    """Elements that lie in some member and miss some other member.

    Of several elements with identical incidence columns only the first is
    kept: two such elements can never sit together in a shattered set, and
    swapping one for another preserves shattering.
    """
    seen = {}
    out = []
    for i in range(H.n):
        col = tuple(S >> i & 1 for S in H.members)
        if 0 < sum(col) < len(H) and col not in seen:
            seen[col] = i
            out.append(i)
    return out


def _vc_by_table(H: SetSystem, support: list[int]) -> tuple[int, int]:
    masks = np.array([_squeeze(S, support) for S in H.members], dtype=np.int64)
    table = _kernels.shattered_table(masks, len(support))
    idx = np.flatnonzero(table)
    sizes = _kernels.popcount_np(idx.astype(np.int64))
    d = int(sizes.max())
    best = min((int(t) for t in idx[sizes == d]), key=lambda t: lex_key(_expand(t, support)))
    return d, _expand(best, support)


def _squeeze(S: int, support: list[int]) -> int:
    out = 0
    for j, i in enumerate(support):
        if S >> i & 1:
            out |= 1 << j
    return out


def _expand(t: int, support: list[int]) -> int:
    return bits_of(support[j] for j in iter_bits(t))


def _vc_levelwise(H: SetSystem, support: list[int], budget: int) -> tuple[int, int]:
    """Apriori-style ascent: a (k+1)-set is tested only if all its k-subsets are shattered."""
    inc = np.zeros((len(H), H.n), dtype=np.uint8)
    for r, S in enumerate(H.members):
        for i in iter_bits(S):
            inc[r, i] = 1
    level = [(i,) for i in support]
    spent = len(level)
    best: tuple[int, ...] = ()
    k = 1
    while level and (1 << k) <= len(H):
        ok = _kernels.full_traces(inc, np.array(level, dtype=np.int64).reshape(len(level), k))
        shattered = [c for c, flag in zip(level, ok) if flag]
        if not shattered:
            break
        best = min(shattered)
        shattered_set = set(shattered)
        nxt = []
        # join sorted k-tuples sharing their first k-1 entries
        by_prefix: dict[tuple[int, ...], list[int]] = {}
        for c in shattered:
            by_prefix.setdefault(c[:-1], []).append(c[-1])
        for prefix, tails in by_prefix.items():
            tails.sort()
            for a, b in combinations(tails, 2):
                cand = prefix + (a, b)
                if all(cand[:j] + cand[j + 1:] in shattered_set for j in range(k - 1)):
                    nxt.append(cand)
        spent += len(nxt)
        if spent > budget:
            raise LimitExceeded(
                f"VC search needs more than {budget} candidate sets; raise SUNFLOWER_VC_VC_BUDGET"
            )
        level = sorted(nxt)
        k += 1
    return len(best), bits_of(best)


def vc_dimension(H: SetSystem, budget: int | None = None) -> ShatterReport:
    """Exact VC-dimension with the lexicographically least maximum witness."""
    if len(H) == 0:
        raise PreconditionError("VC-dimension of the empty family is undefined")
    support = _candidate_elements(H)
    if not support:
        return ShatterReport(0, 0)
    if len(support) <= _TABLE_BITS and len(H) << len(support) <= 1 << 26:
        d, w = _vc_by_table(H, support)
    else:
        d, w = _vc_levelwise(H, support, vc_candidate_budget() if budget is None else budget)
    return ShatterReport(d, w)


def sauer_shelah_bound(n: int, d: int) -> int:
    if d < 0 or n < 0:
        raise PreconditionError("need n, d >= 0")
    if d > n:
        raise PreconditionError("Sauer-Shelah bound needs d <= n")
    return sum(comb(n, i) for i in range(d + 1))


def vc_dimension_of_masks(masks, n: int) -> int:
    """VC-dimension of a nonempty family given as int masks on n <= 16 points."""
    arr = _kernels.as_masks(masks)
    if arr.size == 0:
        raise PreconditionError("VC-dimension of the empty family is undefined")
    if n > _TABLE_BITS:
        raise PreconditionError(f"mask route handles at most {_TABLE_BITS} points")
    table = _kernels.shattered_table(arr, n)
    return int(_kernels.popcount_np(np.flatnonzero(table).astype(np.int64)).max())
