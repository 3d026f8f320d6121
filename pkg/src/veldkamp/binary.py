"""Copies of S_3(2) inside S_3(3) and extension of binary hyperplanes and lines.

A copy keeps three of the four labels in every factor; binary label b maps
to the b-th kept label.  A ternary hyperplane restricts to the copy by
reading its bits at the copy's 27 points.  A ternary Veldkamp line extends
a binary line when three of its members restrict exactly to the three
members of the binary line.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass

import numpy as np

from .geometry import build, mask_of
from .space import VeldkampSpace, space


@dataclass(frozen=True)
class BinaryCopy:
    labels: tuple[tuple[int, ...], ...]  # kept labels per factor
    points: np.ndarray  # ternary index of binary point i

    @property
    def mask(self) -> int:
        return mask_of(self.points.tolist())


def binary_copies(k: int = 3) -> list[BinaryCopy]:
    v3 = build(3, k)
    v2 = build(2, k)
    out = []
    choices = [tuple(c) for c in itertools.combinations(range(4), 3)]
    for labels in itertools.product(choices, repeat=k):
        t = np.array([[labels[j][b] for j, b in enumerate(row)] for row in v2.tuples])
        out.append(BinaryCopy(labels, (t * np.array(v3.strides)).sum(axis=1)))
    return out


def restrict(masks, copy: BinaryCopy) -> np.ndarray:
    masks = np.asarray(masks, dtype=np.uint64)
    out = np.zeros(len(masks), dtype=np.uint64)
    one = np.uint64(1)
    for i, p in enumerate(copy.points.tolist()):
        out |= ((masks >> np.uint64(p)) & one) << np.uint64(i)
    return out


def restriction_ids(sp2: VeldkampSpace, restricted) -> np.ndarray:
    """Binary hyperplane index of each restriction; -1 full copy, -2 neither."""
    r = np.asarray(restricted, dtype=np.uint64)
    pos = np.minimum(np.searchsorted(sp2.masks, r), sp2.count - 1)
    ids = np.where(sp2.masks[pos] == r, pos, -2)
    ids[r == np.uint64(sp2.variety.full)] = -1
    return ids


@dataclass
class RestrictionReport:
    """Kinds of restriction of every ternary hyperplane to every copy."""

    hyperplane: int
    full: int
    neither: int
    neither_types: Counter

    @property
    def hereditary(self) -> bool:
        return self.neither == 0


def restriction_report(sp3: VeldkampSpace, sp2: VeldkampSpace, copies) -> RestrictionReport:
    rep = RestrictionReport(0, 0, 0, Counter())
    for c in copies:
        ids = restriction_ids(sp2, restrict(sp3.masks, c))
        rep.hyperplane += int((ids >= 0).sum())
        rep.full += int((ids == -1).sum())
        rep.neither += int((ids == -2).sum())
        rep.neither_types.update(sp3.type_of(i) for i in np.flatnonzero(ids == -2))
    return rep


def extend_hyperplane(sp3: VeldkampSpace, sp2: VeldkampSpace, copy: BinaryCopy, h: int) -> np.ndarray:
    """Ternary hyperplanes whose restriction to the copy is binary hyperplane h."""
    ids = restriction_ids(sp2, restrict(sp3.masks, copy))
    return np.flatnonzero(ids == h)


def hyperplane_extensions(sp3, sp2, copy) -> dict[str, Counter]:
    ids = restriction_ids(sp2, restrict(sp3.masks, copy))
    out = {lab: Counter() for lab in sp2.type_labels}
    for t, b in zip(sp3.types.tolist(), ids.tolist()):
        if b >= 0:
            out[sp2.type_of(b)][sp3.type_labels[t]] += 1
    return out


def line_extensions(sp3: VeldkampSpace, sp2: VeldkampSpace, copy: BinaryCopy) -> dict[int, list[int]]:
    """Binary line index -> ternary line indices extending it."""
    ids = restriction_ids(sp2, restrict(sp3.masks, copy))
    r = ids[sp3.lines]  # (lines, 4)
    keys = np.sort(sp2.lines, axis=1)
    base = sp2.count + 1
    code = {int(((a * base) + b) * base + c): i for i, (a, b, c) in enumerate(keys.tolist())}
    out = defaultdict(set)
    for drop in range(4):
        keep = [j for j in range(4) if j != drop]
        tri = np.sort(r[:, keep], axis=1)
        ok = (tri[:, 0] >= 0) & (tri[:, 0] < tri[:, 1]) & (tri[:, 1] < tri[:, 2])
        cand = np.flatnonzero(ok)
        cc = ((tri[cand, 0] * base) + tri[cand, 1]) * base + tri[cand, 2]
        for li, c in zip(cand.tolist(), cc.tolist()):
            b = code.get(int(c))
            if b is not None:
                out[b].add(li)
    return {b: sorted(v) for b, v in out.items()}


def extend_line(sp3, sp2, copy, binary_line: int) -> list[int]:
    return line_extensions(sp3, sp2, copy).get(binary_line, [])


@dataclass
class ExtensionCensus:
    """Ternary line labels reached from each binary line class in one copy."""

    targets: dict[str, Counter]  # binary class label -> ternary label counts

    @property
    def extendable(self) -> list[str]:
        return sorted((b for b, c in self.targets.items() if c), key=lambda s: int(s.rstrip("*")))

    def nonprojective(self) -> dict[str, Counter]:
        return {
            b: Counter({t: n for t, n in c.items() if t.endswith("*")})
            for b, c in self.targets.items()
            if any(t.endswith("*") for t in c)
        }

    def ternary_labels(self) -> set[str]:
        return {t for c in self.targets.values() for t in c}


def extension_census(sp3, sp2, copy) -> ExtensionCensus:
    ext = line_extensions(sp3, sp2, copy)
    out = {lab: Counter() for lab in sp2.line_labels}
    for b, lines in ext.items():
        blab = sp2.line_labels[sp2.line_class[b]]
        for li in lines:
            out[blab][sp3.line_labels[sp3.line_class[li]]] += 1
    return ExtensionCensus(out)


def binary_spaces(threads=None) -> tuple[VeldkampSpace, VeldkampSpace]:
    return space(3, 3, threads), space(2, 3, threads)
