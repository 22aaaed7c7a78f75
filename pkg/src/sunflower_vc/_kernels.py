"""Hot enumeration kernels, each with a numba path and a pure-numpy path.

The numba path is used when numba imports and ``SUNFLOWER_VC_DISABLE_NUMBA``
is unset (or ``0``).  Both paths return identical integer arrays; callers do
the exact rational arithmetic on top.  All masks passed in are int64 arrays,
so every kernel here requires ground sets of at most 62 elements.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

MAX_KERNEL_BITS = 62

_DISABLED = os.environ.get("SUNFLOWER_VC_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by SUNFLOWER_VC_DISABLE_NUMBA")
    # numba probes an optional TBB threading layer and warns when it is too old
    warnings.filterwarnings("ignore", message="The TBB threading layer")
    import numba
    from numba import njit, prange

    NUMBA_ENABLED = True
except ImportError:  # pragma: no cover - exercised via the env flag in a subprocess
    numba = None
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(f):
            return f

        return wrap

    prange = range


LEX, RANDOM = 0, 1

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_M64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    z = (x + _GOLDEN) & _M64
    z = ((z ^ (z >> 30)) * _MIX1) & _M64
    z = ((z ^ (z >> 27)) * _MIX2) & _M64
    return z ^ (z >> 31)


def as_masks(masks) -> np.ndarray:
    arr = np.asarray(list(masks), dtype=np.int64)
    return arr.reshape(-1)


def popcount_np(a: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(a).astype(np.int64)
    a = a.astype(np.uint64)
    out = np.zeros(a.shape, np.int64)
    while np.any(a):
        out += (a & np.uint64(1)).astype(np.int64)
        a = a >> np.uint64(1)
    return out


# ---------------------------------------------------------------- shared jit helpers


@njit(cache=True)
def _pc(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _splitmix_nb(x):
    z = np.uint64(x) + np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _lex_less(a, b):
    # sorted-index-tuple order; see setsystem.lex_key
    if a == b:
        return False
    diff = a ^ b
    low = diff & -diff
    above = ~((low << 1) - 1)
    if a & low:
        return (b & above) != 0
    return (a & above) == 0


# ---------------------------------------------------------------- upset size profile


@njit(parallel=True, cache=True)
def _upset_profile_nb(masks, n):
    total = np.int64(1) << n
    nchunks = np.int64(1)
    if total >= 4096:
        nchunks = min(np.int64(256), total >> 12)
    chunk = (total + nchunks - 1) // nchunks
    acc = np.zeros((nchunks, n + 1), np.int64)
    m = masks.size
    for c in prange(nchunks):
        lo = c * chunk
        hi = min(total, lo + chunk)
        for w in range(lo, hi):
            for k in range(m):
                if masks[k] & ~w == 0:
                    acc[c, _pc(w)] += 1
                    break
    return acc.sum(axis=0)


def _upset_profile_np(masks, n):
    total = 1 << n
    out = np.zeros(n + 1, np.int64)
    step = 1 << 16
    for start in range(0, total, step):
        W = np.arange(start, min(total, start + step), dtype=np.int64)
        hit = np.zeros(W.size, dtype=bool)
        for m in masks:
            hit |= (W & m) == m
        out += np.bincount(popcount_np(W[hit]), minlength=n + 1)
    return out


def upset_profile(masks: np.ndarray, n: int) -> np.ndarray:
    """counts[k] = number of k-subsets of an n-set that contain some mask."""
    if n > MAX_KERNEL_BITS:
        raise ValueError("ground too large for the bitmask kernel")
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    if masks.size == 0:
        return np.zeros(n + 1, np.int64)
    if NUMBA_ENABLED:
        return _upset_profile_nb(masks, np.int64(n))
    return _upset_profile_np(masks, n)


# ---------------------------------------------------------------- shattered-set table


@njit(cache=True)
def _shattered_table_nb(masks, n):
    total = np.int64(1) << n
    sh = np.zeros(total, np.bool_)
    stamp = np.zeros(total, np.int64)
    m = masks.size
    for t in range(total):
        need = np.int64(1) << _pc(t)
        if need > m:
            continue
        ok = True
        rest = t
        while rest:
            low = rest & -rest
            if not sh[t ^ low]:
                ok = False
                break
            rest ^= low
        if not ok:
            continue
        cnt = 0
        for i in range(m):
            p = masks[i] & t
            if stamp[p] != t + 1:
                stamp[p] = t + 1
                cnt += 1
        sh[t] = cnt == need
    return sh


def _shattered_table_np(masks, n):
    total = 1 << n
    m = masks.size
    sh = np.zeros(total, dtype=bool)
    step = max(1, (1 << 22) // max(m, 1))
    for start in range(0, total, step):
        T = np.arange(start, min(total, start + step), dtype=np.int64)
        P = np.sort(masks[:, None] & T[None, :], axis=0)
        distinct = 1 + np.count_nonzero(np.diff(P, axis=0), axis=0)
        sh[start:start + T.size] = distinct == (np.int64(1) << popcount_np(T))
    return sh


def shattered_table(masks: np.ndarray, n: int) -> np.ndarray:
    """Boolean table over all 2**n subsets T: does the family shatter T?"""
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    if masks.size == 0:
        return np.zeros(1 << n, dtype=bool)
    if NUMBA_ENABLED:
        return _shattered_table_nb(masks, np.int64(n))
    return _shattered_table_np(masks, n)


# ---------------------------------------------------------------- full-trace test for candidate lists


@njit(cache=True)
def _full_traces_nb(inc, cands):
    m = inc.shape[0]
    c, k = cands.shape
    need = np.int64(1) << k
    out = np.zeros(c, np.bool_)
    stamp = np.zeros(need, np.int64)
    for j in range(c):
        cnt = 0
        for i in range(m):
            code = 0
            for b in range(k):
                if inc[i, cands[j, b]]:
                    code |= np.int64(1) << b
            if stamp[code] != j + 1:
                stamp[code] = j + 1
                cnt += 1
                if cnt == need:
                    break
        out[j] = cnt == need
    return out


def _full_traces_np(inc, cands):
    m = inc.shape[0]
    c, k = cands.shape
    weights = np.int64(1) << np.arange(k, dtype=np.int64)
    out = np.empty(c, dtype=bool)
    step = max(1, (1 << 23) // max(1, m * k))
    for start in range(0, c, step):
        block = cands[start:start + step]
        codes = (inc[:, block].astype(np.int64) * weights).sum(axis=-1)
        codes = np.sort(codes, axis=0)
        distinct = 1 + np.count_nonzero(np.diff(codes, axis=0), axis=0)
        out[start:start + block.shape[0]] = distinct == (1 << k)
    return out


def full_traces(inc: np.ndarray, cands: np.ndarray) -> np.ndarray:
    """For each candidate row of element indices, is the trace on it complete?"""
    inc = np.ascontiguousarray(inc, dtype=np.uint8)
    cands = np.ascontiguousarray(cands, dtype=np.int64)
    if cands.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    if NUMBA_ENABLED:
        return _full_traces_nb(inc, cands)
    return _full_traces_np(inc, cands)


# ---------------------------------------------------------------- large-family weight profile


@njit(cache=True)
def _large_profile_nb(masks, n, ell, rule, seed):
    m = masks.size
    cnt = np.zeros((n + 1, ell + 1, ell + 1), np.int64)
    R = np.empty(m, np.int64)
    minimal = np.empty(m, np.bool_)
    keys = np.empty(m, np.uint64)
    fstar = np.empty(m, np.int64)
    total = np.int64(1) << n
    for w in range(total):
        for i in range(m):
            R[i] = masks[i] & ~w
        for i in range(m):
            ok = True
            for j in range(m):
                if R[j] != R[i] and (R[j] & ~R[i]) == 0:
                    ok = False
                    break
            minimal[i] = ok
            if rule == 1:
                keys[i] = _splitmix_nb(np.uint64(seed) ^ np.uint64(R[i]))
        pw = _pc(w)
        nf = 0
        for i in range(m):
            best = -1
            for j in range(m):
                if minimal[j] and (R[j] & ~R[i]) == 0:
                    if best < 0:
                        best = j
                    elif rule == 0:
                        if _lex_less(R[j], R[best]):
                            best = j
                    elif keys[j] < keys[best] or (keys[j] == keys[best] and R[j] < R[best]):
                        best = j
            F = R[best]
            Z = w | F
            core = np.int64(-1)
            for k in range(m):
                if masks[k] & ~Z == 0:
                    core &= masks[k]
            fs = masks[i] & core
            dup = False
            for u in range(nf):
                if fstar[u] == fs:
                    dup = True
                    break
            if not dup:
                fstar[nf] = fs
                nf += 1
                cnt[pw, _pc(fs), _pc(F)] += 1
    return cnt


def _lex_rank_np(A, n):
    rank = np.zeros(A.shape, np.int64)
    pend = np.zeros(A.shape, np.int64)
    for e in range(n):
        has = ((A >> e) & 1).astype(bool)
        rank = np.where(has, rank + 1 + pend, rank)
        pend = np.where(has, 0, pend + (np.int64(1) << (n - 1 - e)))
    return rank


def _splitmix_np(x):
    z = x.astype(np.uint64) + np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def _large_profile_np(masks, n, ell, rule, seed):
    m = masks.size
    cnt = np.zeros((n + 1, ell + 1, ell + 1), np.int64)
    total = 1 << n
    step = max(1, (1 << 20) // max(1, m * m))
    for start in range(0, total, step):
        W = np.arange(start, min(total, start + step), dtype=np.int64)
        rows = W.size
        R = masks[None, :] & ~W[:, None]
        minimal = np.ones((rows, m), dtype=bool)
        for i in range(m):
            for j in range(m):
                minimal[:, i] &= ~((R[:, j] != R[:, i]) & ((R[:, j] & ~R[:, i]) == 0))
        if rule == LEX:
            order_key = _lex_rank_np(R, n)
        else:
            order_key = _splitmix_np(np.uint64(seed) ^ R.astype(np.uint64))
        F = np.empty((rows, m), np.int64)
        for i in range(m):
            cand = minimal & ((R & ~R[:, [i]]) == 0)
            if rule == LEX:
                k = np.where(cand, order_key, np.iinfo(np.int64).max)
                best = np.argmin(k, axis=1)
            else:
                # ties on the hash fall back to the smaller mask
                k = np.where(cand, order_key, np.uint64(np.iinfo(np.uint64).max))
                kmin = k.min(axis=1, keepdims=True)
                tie = cand & (k == kmin)
                rr = np.where(tie, R, np.iinfo(np.int64).max)
                best = np.argmin(rr, axis=1)
            F[:, i] = R[np.arange(rows), best]
        pw = popcount_np(W)
        fstar = np.empty((rows, m), np.int64)
        for i in range(m):
            Z = W | F[:, i]
            core = np.full(rows, -1, np.int64)
            for k in range(m):
                inside = (masks[k] & ~Z) == 0
                core = np.where(inside, core & masks[k], core)
            fstar[:, i] = masks[i] & core
        for i in range(m):
            keep = np.ones(rows, dtype=bool)
            for j in range(i):
                keep &= fstar[:, j] != fstar[:, i]
            np.add.at(cnt, (pw[keep], popcount_np(fstar[keep, i]), popcount_np(F[keep, i])), 1)
    return cnt


def large_profile(masks: np.ndarray, n: int, ell: int, rule: int, seed: int) -> np.ndarray:
    """Count triples (W, F) with F a distinct F*-value of the decomposition at W.

    ``cnt[w, k, j]`` is the number of pairs (W, F) with |W| = w, |F| = k and
    |F \\ W| = j, where F ranges over the distinct sets F*(S), S in the family.
    """
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    seed = int(seed) & _M64
    if masks.size == 0:
        return np.zeros((n + 1, ell + 1, ell + 1), np.int64)
    if NUMBA_ENABLED:
        return _large_profile_nb(masks, np.int64(n), np.int64(ell), np.int64(rule), np.uint64(seed))
    return _large_profile_np(masks, n, ell, rule, seed)


# ---------------------------------------------------------------- exhaustive Sauer-Shelah on 5 points


def _four_point_tables():
    """Per-family tables for all 2**16 families on a 4-element ground set."""
    X = np.arange(1 << 16, dtype=np.int64)
    sizes = np.zeros((1 << 16, 16), np.int64)
    for U in range(16):
        tr = np.zeros_like(X)
        for s in range(16):
            tr |= ((X >> s) & 1) << (s & U)
        sizes[:, U] = popcount_np(tr)
    pc4 = np.array([bin(U).count("1") for U in range(16)], np.int64)
    full = sizes == (1 << pc4)[None, :]
    sh = (full.astype(np.int64) << np.arange(16, dtype=np.int64)).sum(axis=1)
    B = np.arange(1 << 16, dtype=np.int64)
    msz = np.full(1 << 16, -1, np.int64)
    for T in range(16):
        msz = np.where((B >> T) & 1, np.maximum(msz, pc4[T]), msz)
    return sizes, sh, msz, pc4


def _four_point_symmetries():
    """Images of all 2**16 four-point families under the 384 cube symmetries.

    A symmetry permutes the 4 points and flips a subset of them; it acts on
    the 16 subsets and hence on families.  Yields one int64 array per map.
    """
    from itertools import permutations

    X = np.arange(1 << 16, dtype=np.int64)
    for perm in permutations(range(4)):
        for flip in range(16):
            image = np.zeros_like(X)
            for s in range(16):
                t = 0
                for i in range(4):
                    if s >> i & 1:
                        t |= 1 << perm[i]
                image |= ((X >> s) & 1) << (t ^ flip)
            yield image


def four_point_orbits():
    """Orbit representatives (least member) and orbit sizes of 4-point families."""
    rep = np.arange(1 << 16, dtype=np.int64)
    for image in _four_point_symmetries():
        rep = np.minimum(rep, image)
    reps, sizes = np.unique(rep, return_counts=True)
    return reps.astype(np.int64), sizes.astype(np.int64)


@njit(cache=True)
def _ss5_nb(sizes, sh, msz, pc4, need4, ss, order, los, weights, symmetric):
    checked = 0
    bad = 0
    first_lo = -1
    first_hi = -1
    for a in range(los.size):
        lo = los[a]
        sh_lo = np.int64(sh[lo])
        start = lo if symmetric else 0
        for hi in range(start, 1 << 16):
            if lo == 0 and hi == 0:
                continue
            # symmetric mode: the test is symmetric in (lo, hi), so hi starts at lo
            w = weights[a] if not symmetric or hi == lo else 2 * weights[a]
            checked += w
            x = lo | hi
            m_x = np.int64(msz[sh[x]])
            d = max(m_x, 1 + np.int64(msz[sh_lo & np.int64(sh[hi])]))
            ok = np.int64(need4[x]) <= d
            if ok:
                # order lists the 4-point sets by decreasing size
                for j in range(16):
                    up = order[j]
                    k = pc4[up] + 1
                    if k <= d:
                        break
                    if np.int64(sizes[lo, up]) + np.int64(sizes[hi, up]) > ss[k, d]:
                        ok = False
                        break
            if not ok:
                bad += w
                if first_lo < 0:
                    first_lo = lo
                    first_hi = hi
    return checked, bad, first_lo, first_hi


def _ss5_np(sizes, sh, msz, pc4, need4, ss, los, weights, symmetric):
    checked = 0
    bad = 0
    first = (-1, -1)
    HI = np.arange(1 << 16, dtype=np.int64)
    for lo, wt in zip(los.tolist(), weights.tolist()):
        hi = HI[max(lo, 1):] if symmetric else HI[1:] if lo == 0 else HI
        mult = np.where(hi == lo, wt, 2 * wt) if symmetric else np.full(hi.size, wt)
        checked += int(mult.sum())
        x = lo | hi
        d = np.maximum(msz[sh[x]], 1 + msz[sh[lo] & sh[hi]])
        ok = need4[x] <= d
        for up in range(16):
            k = pc4[up] + 1
            lim = ss[k][np.clip(d, 0, 5)]
            ok &= ~((k > d) & (sizes[lo, up] + sizes[hi, up] > lim))
        nbad = int(mult[~ok].sum())
        if nbad and first[0] < 0:
            first = (lo, int(hi[np.argmin(ok)]))
        bad += nbad
    return checked, bad, first[0], first[1]


def sauer_shelah_five(ss: np.ndarray, reduced: bool = True):
    """Check every nonempty family on a 5-element ground set.

    A family is split into ``lo`` (members avoiding element 4) and ``hi``
    (members containing it, element 4 removed); all 32 trace sizes follow
    from the 4-point tables.  ``ss[k, d]`` must hold the Sauer-Shelah sums.

    With ``reduced`` only one ``lo`` per orbit of the 4-point cube symmetries
    is visited (paired with every ``hi``) and counts are weighted by orbit
    size; applying one symmetry to both halves preserves the VC-dimension and
    every trace size.  Otherwise all 2**32 pairs are visited.
    Returns ``(families_checked, failures, first_lo, first_hi)``.
    """
    sizes, sh, msz, pc4 = _four_point_tables()
    need4 = np.full(1 << 16, 99, np.int64)
    for d in range(4, -1, -1):
        ok = np.all(sizes <= ss[pc4, d][None, :], axis=1)
        need4 = np.where(ok, d, need4)
    ss = np.ascontiguousarray(ss, dtype=np.int64)
    if reduced:
        los, weights = four_point_orbits()
    else:
        los = np.arange(1 << 16, dtype=np.int64)
        weights = np.ones(1 << 16, dtype=np.int64)
    if NUMBA_ENABLED:
        # narrow dtypes keep the tables in cache for the long loop
        order = np.argsort(-pc4, kind="stable").astype(np.int64)
        out = _ss5_nb(
            np.ascontiguousarray(sizes, dtype=np.uint8),
            sh.astype(np.uint16),
            msz.astype(np.int8),
            pc4,
            need4.astype(np.int8),
            ss,
            order,
            los,
            weights,
            not reduced,
        )
        return tuple(int(v) for v in out)
    return _ss5_np(sizes, sh, msz, pc4, need4, ss, los, weights, not reduced)
