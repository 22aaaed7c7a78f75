"""Constructions and seeded random generators for set systems."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Literal

import numpy as np

from .errors import PreconditionError
from .setsystem import SetSystem, bits_of, popcount

MAX_TREE_MEMBERS = 1 << 20

Kind = Literal["uniform-random", "forest-path", "rejection-vc1"]


def tree_family(r: int, ell: int) -> SetSystem:
    """Leaf-to-root edge paths of the complete (r-1)-ary tree of depth ell.

    An edge is labelled by the child-index path of its lower endpoint, e.g.
    ``v:0:2`` is the edge from node ``v:0`` down to its third child.
    """
    if r < 2 or ell < 1:
        raise PreconditionError("tree_family needs r >= 2 and ell >= 1")
    arity = r - 1
    if arity ** ell > MAX_TREE_MEMBERS:
        raise PreconditionError(f"(r-1)**ell = {arity ** ell} exceeds {MAX_TREE_MEMBERS} members")
    labels: list[str] = []
    # paths[node] = mask of edges from the root down to node, breadth first
    frontier = [("v", 0)]
    for _ in range(ell):
        nxt = []
        for name, path in frontier:
            for c in range(arity):
                child = f"{name}:{c}"
                labels.append(child)
                nxt.append((child, path | 1 << (len(labels) - 1)))
        frontier = nxt
    return SetSystem(tuple(labels), tuple(p for _, p in frontier))


def pad_masks(masks, ell: int, next_bit: int) -> tuple[list[int], int]:
    """Pad each mask with fresh bits (starting at ``next_bit``) up to size ell.

    Returns the padded masks (input order) and the next unused bit.
    """
    out = []
    for m in masks:
        extra = ell - popcount(m)
        if extra < 0:
            raise PreconditionError("ell is smaller than a member")
        out.append(m | ((1 << extra) - 1) << next_bit)
        next_bit += extra
    return out, next_bit


@dataclass(frozen=True)
class Padded:
    """A padded family and the map back to the original members."""

    original: SetSystem
    system: SetSystem
    to_original: dict[int, int] = field(repr=False)

    def strip(self, mask: int) -> int:
        return mask & self.original.full_mask

    def original_index(self, padded_index: int) -> int:
        return self.original.index(self.to_original[self.system.members[padded_index]])


def _fresh_labels(ground, count: int) -> list[str]:
    taken = set(ground)
    prefix = "_p"
    while any(lab.startswith(prefix) for lab in taken):
        prefix = "_" + prefix
    return [f"{prefix}{i + 1}" for i in range(count)]


def pad_to_uniform(H: SetSystem, ell: int) -> Padded:
    """Give every member fresh private elements until it has exactly ell elements."""
    if ell < H.ell:
        raise PreconditionError(f"ell = {ell} is below the largest member size {H.ell}")
    padded, next_bit = pad_masks(H.members, ell, H.n)
    ground = H.ground + tuple(_fresh_labels(H.ground, next_bit - H.n))
    return Padded(H, SetSystem(ground, tuple(padded)), dict(zip(padded, H.members)))


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    ell: int
    family_size: int
    seed: int = 0
    kind: Kind = "uniform-random"
    min_size: int = 0
    max_tries: int = 2000


def _labels(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(n))


def _unrank_subset(rank: int, n: int, ell: int, min_size: int) -> int:
    for size in range(min_size, ell + 1):
        block = comb(n, size)
        if rank < block:
            break
        rank -= block
    else:  # pragma: no cover - rank checked by the caller
        raise ValueError("rank out of range")
    # combinatorial number system, colex
    out = 0
    k = size
    x = n - 1
    while k > 0:
        while comb(x, k) > rank:
            x -= 1
        out |= 1 << x
        rank -= comb(x, k)
        k -= 1
        x -= 1
    return out


def _uniform(cfg: GeneratorConfig, rng: np.random.Generator) -> SetSystem:
    ell = min(cfg.ell, cfg.n)
    total = sum(comb(cfg.n, s) for s in range(cfg.min_size, ell + 1))
    if cfg.family_size > total:
        raise PreconditionError(f"only {total} subsets of size {cfg.min_size}..{ell} exist")
    if cfg.family_size == 0:
        return SetSystem(_labels(cfg.n), ())
    if total < 1 << 62:
        ranks = rng.choice(total, size=cfg.family_size, replace=False)
    else:  # pragma: no cover - astronomically large grounds
        picked: set[int] = set()
        while len(picked) < cfg.family_size:
            picked.add(int(rng.integers(0, 1 << 62)) % total)
        ranks = sorted(picked)
    masks = [_unrank_subset(int(k), cfg.n, ell, cfg.min_size) for k in ranks]
    return SetSystem(_labels(cfg.n), tuple(masks))


def _forest(cfg: GeneratorConfig, rng: np.random.Generator) -> SetSystem:
    if cfg.family_size > cfg.n:
        raise PreconditionError("forest-path needs family_size <= n (one member per node)")
    if cfg.ell < 1:
        raise PreconditionError("forest-path needs ell >= 1")
    parent = [-1] * cfg.n
    depth = [0] * cfg.n
    for v in range(1, cfg.n):
        eligible = [-1] + [u for u in range(v) if depth[u] < cfg.ell - 1]
        p = eligible[int(rng.integers(len(eligible)))]
        parent[v] = p
        depth[v] = 0 if p < 0 else depth[p] + 1
    paths = []
    for v in range(cfg.n):
        path = []
        u = v
        while u >= 0:
            path.append(u)
            u = parent[u]
        paths.append(bits_of(path))
    chosen = rng.choice(cfg.n, size=cfg.family_size, replace=False)
    return SetSystem(_labels(cfg.n), tuple(paths[int(v)] for v in chosen))


def random_family(cfg: GeneratorConfig) -> SetSystem:
    """Deterministic function of ``cfg``."""
    rng = np.random.default_rng(cfg.seed)
    if cfg.kind == "uniform-random":
        return _uniform(cfg, rng)
    if cfg.kind == "forest-path":
        return _forest(cfg, rng)
    if cfg.kind == "rejection-vc1":
        from .vc import vc_dimension

        for _ in range(cfg.max_tries):
            H = _uniform(cfg, rng)
            if len(H) == 0 or vc_dimension(H).dimension <= 1:
                return H
        raise PreconditionError(f"no VC<=1 family found in {cfg.max_tries} tries")
    raise PreconditionError(f"unknown generator kind {cfg.kind!r}")


def corpus(cfg: GeneratorConfig, count: int) -> list[SetSystem]:
    """``count`` instances with per-instance seeds ``seed ^ index``."""
    out = []
    for i in range(count):
        out.append(random_family(GeneratorConfig(**{**cfg.__dict__, "seed": cfg.seed ^ i})))
    return out
