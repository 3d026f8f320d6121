"""Quadric and symplectic selections of S_4(3) hyperplane types, and weights.

A blown-up hyperplane is a point of the hyperbolic quadric Q+(15,3) when its
source has a core of size 1 mod 3; a trivial source counts with the point
set of its hyperplane.  The split form on dual coordinates gives a second,
independent membership test.

The weight of a hyperplane is 1 for singular ones and n when it lies on a
Veldkamp line with a singular hyperplane and one of weight n - 1.  On
projective lines this is a statement about dual vectors: h has weight <= n
iff its dual is u + s with u of weight <= n - 1 and s the dual of a singular
hyperplane, so weights are found by growing sum sets of pure tensors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import tables
from .census import TRIVIAL, refined_names, row_fields
from .geometry import build
from .gf import keys_to_vectors

SINGULAR = "H1"


def core_is_quadric(core_points: int) -> bool:
    return core_points % 3 == 1


def node_cores(l3) -> dict[int, int]:
    """Core size of every source node used by the census."""
    sp = l3.sp
    out = {}
    sizes = np.bitwise_count(sp.cores).astype(np.int64)
    for o in np.unique(l3.line_orbit):
        vals = np.unique(sizes[l3.line_orbit == o])
        if len(vals) != 1:
            raise ValueError("core size varies inside a line orbit")
        out[int(o)] = int(vals[0])
    pts = np.bitwise_count(sp.masks).astype(np.int64)
    for o in np.unique(l3.hyp_orbit):
        out[TRIVIAL + int(o)] = int(np.unique(pts[l3.hyp_orbit == o])[0])
    return out


def quadric_membership(l3, kind: int, source: int) -> bool:
    """Membership of a blow-up from its provenance (kind 0 line, 1 hyperplane)."""
    sp = l3.sp
    if kind == 0:
        return core_is_quadric(int(np.bitwise_count(sp.cores[source])))
    return core_is_quadric(int(np.bitwise_count(sp.masks[source])))


@dataclass
class Selection:
    types: tuple[str, ...]
    total: int
    consistent: bool  # every class has sources of a single verdict


@dataclass
class FormReport:
    """How the zero set of the split form sits in the refined census."""

    zeros: int
    classes_whole: bool  # each refined class lies entirely inside or outside
    zero_classes: tuple[str, ...]  # refined labels inside
    agrees_with_selection: bool


def select_quadric(census, l3) -> Selection:
    cores = node_cores(l3)
    types, total, consistent = [], 0, True
    for c in census.classes:
        verdicts = {core_is_quadric(cores[n]) for n in c.sources}
        consistent &= len(verdicts) == 1
        if verdicts == {True}:
            types.append(c.label)
            total += c.count
    return Selection(tuple(types), total, consistent)


def form_report(census, selection: Selection) -> FormReport:
    zeros, whole, inside = 0, True, []
    chosen = set(selection.types)
    agrees = True
    for c in census.classes:
        sizes = dict(c.subtypes)
        names = refined_names(c)
        for comp, n in c.subtypes:
            z = c.form_zeros.get(comp, 0)
            zeros += z
            whole &= z in (0, sizes[comp])
            if z:
                inside.append(names[comp])
            agrees &= (z == sizes[comp]) == (c.label in chosen)
    return FormReport(zeros, whole, tuple(inside), agrees)


def select_symplectic(census, quadric: Selection, sp, strict: bool = True) -> Selection:
    """Quadric types whose sections avoid H3 and H5 (H5* included).

    With `strict` the selection must hold the points of W(15,3).
    """
    picked, total = [], 0
    keep = set(quadric.types)
    for c in census.classes:
        if c.label not in keep:
            continue
        sec = row_fields(sp, c.row)["sections"]
        if sec[3] == 0 and sec[5] == 0:
            picked.append(c.label)
            total += c.count
    if strict and total != tables.K4_SYMPLECTIC_TOTAL:
        raise ValueError(f"symplectic selection sums to {total}")
    return Selection(tuple(picked), total, True)


# --- weights -----------------------------------------------------------------


def weights_bfs(sp, lines: Optional[np.ndarray] = None) -> np.ndarray:
    """Weights by layering over Veldkamp lines; -1 where no layer reaches."""
    lines = sp.lines if lines is None else lines
    single = sp.type_labels.index(SINGULAR)
    w = np.where(sp.types == single, 1, -1)
    is_single = sp.types[lines] == single
    n = 1
    while True:
        lw = w[lines]
        prev = lw == n
        if n == 1:
            ok = is_single.sum(axis=1) >= 2
        else:
            ok = is_single.any(axis=1) & prev.any(axis=1)
        targets = np.unique(lines[ok][lw[ok] < 0])
        if len(targets) == 0:
            return w
        n += 1
        w[targets] = n


class DualWeights:
    """Weights of projective hyperplanes of S_k(3) from their dual vectors.

    Sums of up to `depth` pure tensors are tabulated over all 3^(2^k)
    vectors; one or two further levels are resolved by search.
    """

    def __init__(self, k: int, depth: Optional[int] = None):
        self.k = k
        self.n = 2**k
        self.depth = depth if depth is not None else (3 if k >= 4 else 16)
        self.pow3 = 3 ** np.arange(self.n, dtype=np.int64)
        t = build(3, k).tensor.astype(np.int64) % 3
        self.w1 = np.unique(np.concatenate([t, 2 * t % 3]), axis=0)
        size = 3**self.n
        self.table = np.full(size, 255, dtype=np.uint8)
        self.table[0] = 0
        level = np.zeros((1, self.n), dtype=np.int64)
        self.levels = [level]
        for d in range(1, self.depth + 1):
            found = []
            for s in self.w1:
                vecs = (level + s) % 3
                idx = vecs @ self.pow3
                fresh = self.table[idx] == 255
                self.table[idx[fresh]] = d
                if d < self.depth:
                    found.append(vecs[fresh])
            if d == self.depth:
                break
            level = np.unique(np.concatenate(found), axis=0)
            if len(level) == 0:
                break
            self.levels.append(level)
        self.upto2 = np.concatenate(self.levels[1:3])

    def weight_of_vector(self, v) -> Optional[int]:
        v = np.asarray(v, dtype=np.int64) % 3
        w = int(self.table[int(v @ self.pow3)])
        if w != 255:
            return w
        near = ((v - self.w1) % 3) @ self.pow3
        if (self.table[near] <= self.depth).any():
            return self.depth + 1
        near = ((v - self.upto2) % 3) @ self.pow3
        if (self.table[near] <= self.depth).any():
            return self.depth + 2
        return None

    def weights_of_keys(self, keys) -> list[Optional[int]]:
        return [self.weight_of_vector(v) for v in keys_to_vectors(keys, self.n)]
