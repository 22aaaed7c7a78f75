"""Finite set systems stored as integer bitmasks over an ordered ground set.

Element ``i`` of the ground set is bit ``1 << i``.  A family is a sorted tuple
of distinct masks, so two systems with the same ground and the same sets
compare equal regardless of input order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import InputError, PreconditionError


def popcount(mask: int) -> int:
    return mask.bit_count()


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def compress(mask: int, support: int) -> int:
    """Re-index the bits of ``mask`` that lie in ``support`` to 0, 1, 2, ..."""
    out = 0
    for j, i in enumerate(iter_bits(support)):
        if mask >> i & 1:
            out |= 1 << j
    return out


def lex_key(mask: int) -> tuple[int, ...]:
    """Sort key: lexicographic order of the sorted index tuples."""
    return tuple(iter_bits(mask))


@dataclass(frozen=True)
class SetSystem:
    """A ground set of labels and a family of distinct subsets of it."""

    ground: tuple[str, ...]
    members: tuple[int, ...]

    def __post_init__(self):
        ground = tuple(self.ground)
        if len(set(ground)) != len(ground):
            raise InputError("duplicate ground labels")
        full = (1 << len(ground)) - 1
        members = tuple(sorted(set(self.members)))
        for m in members:
            if m < 0 or m & ~full:
                raise InputError(f"member mask {m:#x} is not a subset of the ground set")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "members", members)

    @classmethod
    def from_masks(cls, ground: Sequence[str], masks: Iterable[int]) -> SetSystem:
        return cls(tuple(ground), tuple(masks))

    def with_members(self, masks: Iterable[int]) -> SetSystem:
        """Same ground, different family."""
        return SetSystem(self.ground, tuple(masks))

    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def ell(self) -> int:
        return max((popcount(m) for m in self.members), default=0)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def support(self) -> int:
        """Union of all members."""
        u = 0
        for m in self.members:
            u |= m
        return u

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, mask: object) -> bool:
        return mask in self._index

    @property
    def _index(self) -> dict[int, int]:
        idx = self.__dict__.get("_idx_cache")
        if idx is None:
            idx = {m: i for i, m in enumerate(self.members)}
            object.__setattr__(self, "_idx_cache", idx)
        return idx

    def index(self, mask: int) -> int:
        try:
            return self._index[mask]
        except KeyError:
            raise KeyError(f"{self.labels(mask) if mask <= self.full_mask else mask} is not a member") from None

    def mask(self, labels: Iterable[str]) -> int:
        pos = self._label_pos
        out = 0
        for lab in labels:
            if lab not in pos:
                raise InputError(f"unknown label {lab!r}")
            out |= 1 << pos[lab]
        return out

    @property
    def _label_pos(self) -> dict[str, int]:
        pos = self.__dict__.get("_pos_cache")
        if pos is None:
            pos = {lab: i for i, lab in enumerate(self.ground)}
            object.__setattr__(self, "_pos_cache", pos)
        return pos

    def labels(self, mask: int) -> list[str]:
        return [self.ground[i] for i in iter_bits(mask)]

    def sets(self) -> list[list[str]]:
        return [self.labels(m) for m in self.members]

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(self.labels(m)) + "}" for m in self.members)
        return f"SetSystem(n={self.n}, [{body}])"


def build(ground: Sequence[str], sets: Iterable[Iterable[str]]) -> SetSystem:
    """Build a canonical SetSystem from labels; duplicates are collapsed."""
    ground = tuple(ground)
    if len(set(ground)) != len(ground):
        seen = set()
        dup = next(g for g in ground if g in seen or seen.add(g))
        raise InputError(f"duplicate ground label {dup!r}")
    pos = {lab: i for i, lab in enumerate(ground)}
    masks = []
    for s in sets:
        m = 0
        for lab in s:
            if lab not in pos:
                raise InputError(f"unknown label {lab!r}")
            m |= 1 << pos[lab]
        masks.append(m)
    return SetSystem(ground, tuple(masks))


def trace(H: SetSystem, U: int) -> SetSystem:
    """The family {S & U : S in H} as a set system on the ground U."""
    if U & ~H.full_mask:
        raise PreconditionError("U is not a subset of the ground set")
    ground = tuple(H.ground[i] for i in iter_bits(U))
    return SetSystem(ground, tuple({compress(S & U, U) for S in H.members}))


def upset_contains(H: SetSystem, A: int) -> bool:
    """Whether A lies in the upset of H, i.e. contains some member."""
    return any(S & ~A == 0 for S in H.members)


def minimal_masks(masks: Iterable[int]) -> list[int]:
    """Inclusion-minimal elements of a collection of masks (deduplicated, sorted)."""
    uniq = sorted(set(masks), key=popcount)
    kept: list[int] = []
    for m in uniq:
        if not any(k & ~m == 0 for k in kept):
            kept.append(m)
    return sorted(kept)


def minimal_sets(family: SetSystem) -> SetSystem:
    return family.with_members(minimal_masks(family.members))


def core(H: SetSystem, A: int) -> int:
    """Intersection of all members of H contained in A."""
    out = -1
    found = False
    for S in H.members:
        if S & ~A == 0:
            out &= S
            found = True
    if not found:
        raise PreconditionError("core is undefined: A is not in the upset of H")
    return out & A
