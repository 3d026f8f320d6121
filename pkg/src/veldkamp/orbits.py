"""Orbits of the stabilizer group G = (S_{q+1} x ... x S_{q+1}) x| S_k.

Orbits are the connected components of the graph joining every element to
its images under a generating set, computed in two stages: label
permutations inside the factors first, factor permutations second.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .geometry import SegreVariety


@dataclass(frozen=True)
class GroupGenerator:
    kind: str  # "coordinate" or "dimension"
    data: tuple
    point_map: np.ndarray = field(repr=False, compare=False)


def _cycle(n: int) -> tuple[int, ...]:
    return tuple((a + 1) % n for a in range(n))


def generators(v: SegreVariety) -> list[GroupGenerator]:
    n, k = v.n, v.k
    swap = (1, 0) + tuple(range(2, n))
    out = []
    for j in range(k):
        for perm in (swap, _cycle(n)):
            t = v.tuples.copy()
            t[:, j] = np.array(perm)[t[:, j]]
            out.append(GroupGenerator("coordinate", (j, perm), _index(v, t)))
    if k > 1:
        for fperm in ((1, 0) + tuple(range(2, k)), _cycle(k)):
            t = np.empty_like(v.tuples)
            for i in range(k):
                t[:, fperm[i]] = v.tuples[:, i]
            out.append(GroupGenerator("dimension", fperm, _index(v, t)))
    return out


def _index(v: SegreVariety, tuples: np.ndarray) -> np.ndarray:
    return (tuples * np.array(v.strides)).sum(axis=1)


def group_order(v: SegreVariety) -> int:
    return math.factorial(v.n) ** v.k * math.factorial(v.k)


def permute_mask(mask: int, point_map) -> int:
    out = 0
    for p, g in enumerate(point_map):
        if mask >> p & 1:
            out |= 1 << int(g)
    return out


def permute_masks(masks, point_map) -> np.ndarray:
    masks = np.asarray(masks, dtype=np.uint64)
    out = np.zeros_like(masks)
    one = np.uint64(1)
    for p, g in enumerate(point_map):
        out |= ((masks >> np.uint64(p)) & one) << np.uint64(g)
    return out


@dataclass
class OrbitPartition:
    labels: np.ndarray
    sizes: np.ndarray
    stage_one: np.ndarray

    @property
    def count(self) -> int:
        return len(self.sizes)

    def members(self, orbit: int) -> np.ndarray:
        return np.flatnonzero(self.labels == orbit)


def _components(n: int, images) -> np.ndarray:
    rows = np.concatenate([np.arange(n)] + [np.arange(n)] * len(images))
    cols = np.concatenate([np.arange(n)] + [np.asarray(im) for im in images])
    g = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, lab = connected_components(g, directed=True, connection="weak")
    # canonical numbering: by smallest member
    first = np.full(lab.max() + 1, n, dtype=np.int64)
    np.minimum.at(first, lab, np.arange(n))
    order = np.argsort(first)
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    return rank[lab]


def orbit_partition(n: int, stage_one, stage_two) -> OrbitPartition:
    """Orbits from generator images (arrays mapping element -> image element)."""
    for im in list(stage_one) + list(stage_two):
        im = np.asarray(im)
        if len(im) != n or im.min() < 0 or im.max() >= n:
            raise KeyError("generator image outside the universe")
    first = _components(n, list(stage_one))
    labels = _components(n, list(stage_one) + list(stage_two))
    return OrbitPartition(labels, np.bincount(labels), first)


def hyperplane_images(sp) -> list[tuple[GroupGenerator, np.ndarray]]:
    out = []
    for g in generators(sp.variety):
        out.append((g, sp.indices(permute_masks(sp.masks, g.point_map))))
    return out


def hyperplane_orbits(sp) -> OrbitPartition:
    imgs = hyperplane_images(sp)
    return orbit_partition(
        sp.count,
        [im for g, im in imgs if g.kind == "coordinate"],
        [im for g, im in imgs if g.kind == "dimension"],
    )


def line_images(sp, lines=None) -> list[tuple[GroupGenerator, np.ndarray]]:
    lines = sp.lines if lines is None else lines
    out = []
    for g, im in hyperplane_images(sp):
        out.append((g, sp.line_indices(im[lines])))
    return out


def line_orbits(sp) -> OrbitPartition:
    imgs = line_images(sp)
    return orbit_partition(
        len(sp.lines),
        [im for g, im in imgs if g.kind == "coordinate"],
        [im for g, im in imgs if g.kind == "dimension"],
    )


def cross_check(classes: np.ndarray, orbits: OrbitPartition) -> dict:
    """Compare a signature partition with an orbit partition.

    Returns orbits meeting several classes (should be none) and classes made of
    several orbits, with the orbit sizes.
    """
    per_orbit = defaultdict(set)
    per_class = defaultdict(set)
    for c, o in zip(np.asarray(classes).tolist(), orbits.labels.tolist()):
        per_orbit[o].add(c)
        per_class[c].add(o)
    mixed = {o: sorted(cs) for o, cs in per_orbit.items() if len(cs) > 1}
    split = {
        c: sorted(int(orbits.sizes[o]) for o in os_) for c, os_ in per_class.items() if len(os_) > 1
    }
    return {"mixed_orbits": mixed, "split_classes": split}


class DisjointSet:
    """Union-find over hashable items, used for small linkage problems."""

    def __init__(self, items=()):
        self.parent = {}
        for x in items:
            self.add(x)

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if repr(rb) < repr(ra):
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self) -> list[list]:
        out = defaultdict(list)
        for x in self.parent:
            out[self.find(x)].append(x)
        return sorted((sorted(g, key=repr) for g in out.values()), key=lambda g: repr(g[0]))


def orbit_size_histogram(orbits: OrbitPartition) -> Counter:
    return Counter(orbits.sizes.tolist())
