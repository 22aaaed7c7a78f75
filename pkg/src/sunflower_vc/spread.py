"""Reduced families, chooser functions and the small/large split at a set W.

For a family H and a set W, ``H_W`` is the family of inclusion-minimal sets
among {S - W}.  Each member S gets a chosen F(S) in H_W with F(S) inside
S - W, and F*(S) = S & core(H, W | F(S)).  Members with |F(S)| < t feed the
small family (through F), the rest feed the large family (through F*).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from . import _kernels
from .errors import LimitExceeded, PreconditionError
from .limits import spread_exact_limit
from .setsystem import SetSystem, core, lex_key, minimal_masks

ChooserRule = Literal["lexicographic", "seeded-random"]

# rational over-approximation of Euler's number
E_UPPER = Fraction("2.7182818285")

_RULE_CODES = {"lexicographic": _kernels.LEX, "seeded-random": _kernels.RANDOM}


def _rule_code(rule: str) -> int:
    try:
        return _RULE_CODES[rule]
    except KeyError:
        raise PreconditionError(f"unknown chooser rule {rule!r}") from None


def reduced_family(H: SetSystem, W: int) -> SetSystem:
    if W & ~H.full_mask:
        raise PreconditionError("W is not a subset of the ground set")
    return H.with_members(minimal_masks(S & ~W for S in H.members))


def choose(candidates, rule: ChooserRule = "lexicographic", seed: int = 0) -> int:
    """Pick one mask from a nonempty collection with a fixed deterministic rule."""
    cands = list(candidates)
    if not cands:
        raise PreconditionError("nothing to choose from")
    if _rule_code(rule) == _kernels.LEX:
        return min(cands, key=lex_key)
    s = seed & ((1 << 64) - 1)
    return min(cands, key=lambda m: (_kernels.splitmix64(s ^ m), m))


@dataclass(frozen=True)
class SpreadDecomposition:
    W: int
    t: int
    chooser: dict[int, int]
    small: SetSystem
    large: SetSystem
    f_star: dict[int, int]

    def large_weight(self, q) -> Fraction:
        q = Fraction(q)
        return sum((q ** m.bit_count() for m in self.large.members), Fraction(0))


def decompose(
    H: SetSystem,
    W: int,
    t: int,
    chooser_rule: ChooserRule = "lexicographic",
    seed: int = 0,
) -> SpreadDecomposition:
    if len(H) == 0:
        raise PreconditionError("decompose needs a nonempty family")
    if t < 0:
        raise PreconditionError("t must be non-negative")
    HW = reduced_family(H, W).members
    chooser: dict[int, int] = {}
    f_star: dict[int, int] = {}
    small, large = set(), set()
    for S in H.members:
        rest = S & ~W
        F = choose((R for R in HW if R & ~rest == 0), chooser_rule, seed)
        Fs = S & core(H, W | F)
        chooser[S] = F
        f_star[S] = Fs
        if F.bit_count() < t:
            small.add(F)
        else:
            large.add(Fs)
    return SpreadDecomposition(W, t, chooser, H.with_members(small), H.with_members(large), f_star)


@dataclass(frozen=True)
class LargeProfile:
    """Counts ``cnt[w, k, j]`` of pairs (W, F), F a distinct F*-value at W.

    |W| = w, |F| = k and |F - W| = j.  The counts do not depend on p, q or t,
    so one profile answers every expectation query for its family and chooser.
    """

    n: int
    counts: object  # numpy int64 array, shape (n+1, ell+1, ell+1)

    def expectation(self, p, q, t: int) -> Fraction:
        p, q = Fraction(p), Fraction(q)
        if not (0 <= p <= 1 and 0 <= q <= 1):
            raise PreconditionError("p and q must lie in [0, 1]")
        cnt = self.counts
        _, K, J = cnt.shape
        total = Fraction(0)
        for w in range(self.n + 1):
            pw = p ** w * (1 - p) ** (self.n - w)
            if pw == 0:
                continue
            inner = 0
            for k in range(K):
                for j in range(max(t, 0), J):
                    c = int(cnt[w, k, j])
                    if c:
                        inner += c * q ** k
            total += pw * inner
        return total


def large_profile(H: SetSystem, chooser_rule: ChooserRule = "lexicographic", seed: int = 0) -> LargeProfile:
    limit = spread_exact_limit()
    if H.n > limit:
        raise LimitExceeded(
            f"n = {H.n} exceeds the exact spread limit {limit} (SUNFLOWER_VC_SPREAD_LIMIT); "
            "estimate by sampling W instead"
        )
    if len(H) == 0:
        raise PreconditionError("expectation needs a nonempty family")
    cnt = _kernels.large_profile(_kernels.as_masks(H.members), H.n, H.ell, _rule_code(chooser_rule), seed)
    return LargeProfile(H.n, cnt)


def expectation_large_weight_exact(
    H: SetSystem,
    p,
    q,
    t: int,
    chooser_rule: ChooserRule = "lexicographic",
    seed: int = 0,
) -> Fraction:
    """Exact E[sum of q**|F| over F in the large family at W], W ~ X_p."""
    return large_profile(H, chooser_rule, seed).expectation(p, q, t)


def expectation_by_enumeration(H: SetSystem, p, q, t: int, chooser_rule: ChooserRule = "lexicographic", seed: int = 0) -> Fraction:
    """Same quantity via ``decompose`` at every W; slow, used as a cross-check."""
    p, q = Fraction(p), Fraction(q)
    total = Fraction(0)
    for W in range(1 << H.n):
        w = W.bit_count()
        total += p ** w * (1 - p) ** (H.n - w) * decompose(H, W, t, chooser_rule, seed).large_weight(q)
    return total


def _check_pq(p, q) -> tuple[Fraction, Fraction]:
    p, q = Fraction(p), Fraction(q)
    if not (q > 0 and p >= 2 * q and p <= 1):
        raise PreconditionError("counting bound needs p >= 2q > 0 and p <= 1")
    return p, q


def count_bound(ell: int, d: int, q, p, t: int) -> Fraction:
    """2 (e ell/d)**d (q/p)**t, with e rounded up; the d = 0 factor is 1."""
    p, q = _check_pq(p, q)
    if not 0 <= d <= ell:
        raise PreconditionError("counting bound needs 0 <= d <= ell")
    if t < 0:
        raise PreconditionError("t must be non-negative")
    spread = (E_UPPER * ell / d) ** d if d else Fraction(1)
    return 2 * spread * (q / p) ** t


def count_bound_vc1(q, p, t: int) -> Fraction:
    p, q = _check_pq(p, q)
    if t < 0:
        raise PreconditionError("t must be non-negative")
    return 2 * (q / p) ** t


def avoids_every_pair(H: SetSystem) -> bool:
    """Whether every pair of distinct elements is missed by some member."""
    for x in range(H.n):
        for y in range(x + 1, H.n):
            xy = 1 << x | 1 << y
            if all(S & xy for S in H.members):
                return False
    return True
