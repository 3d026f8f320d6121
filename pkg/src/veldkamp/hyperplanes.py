"""Geometric hyperplanes: validation, point orders, projectivity and signatures."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Protocol

import numpy as np

from .geometry import SegreVariety, bits
from .gf import ranks_and_kernels


class HyperplaneError(ValueError):
    pass


def is_hyperplane(v: SegreVariety, s: int) -> bool:
    if s <= 0 or s >= v.full:
        return False
    n = v.n
    for m in v.line_masks:
        c = (s & m).bit_count()
        if c != 1 and c != n:
            return False
    return True


def point_orders(v: SegreVariety, s: int) -> dict[int, int]:
    """Order of each member point: the number of its lines lying inside s."""
    full = [s & m == m for m in v.line_masks]
    return {p: sum(full[li] for li in v.lines_through[p]) for p in bits(s)}


def order_masks(v: SegreVariety, s: int) -> list[int]:
    """masks[t] = member points of order t, for t = 0..k."""
    out = [0] * (v.k + 1)
    for p, t in point_orders(v, s).items():
        out[t] |= 1 << p
    return out


def order_histogram(v: SegreVariety, s: int) -> tuple[int, ...]:
    return tuple(m.bit_count() for m in order_masks(v, s))


def singular_points(v: SegreVariety, nucleus: int) -> int:
    d = np.count_nonzero(v.tuples != v.tuples[nucleus], axis=1)
    return sum(1 << int(p) for p in np.flatnonzero(d < v.k))


def tensor_matrix(v: SegreVariety, s: int) -> np.ndarray:
    return v.tensor[bits(s)]


def projectivity_many(v: SegreVariety, masks) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised rank test: (projective flags, duals with zero rows elsewhere)."""
    dim = 2**v.k
    ranks, duals = ranks_and_kernels([tensor_matrix(v, int(s)) for s in masks], v.q, dim)
    if np.any(ranks < dim - 1):
        bad = int(np.flatnonzero(ranks < dim - 1)[0])
        raise HyperplaneError(f"hyperplane spans too little (rank {ranks[bad]})")
    proj = ranks == dim - 1
    duals[~proj] = 0
    return proj, duals


def projectivity(v: SegreVariety, s: int) -> tuple[bool, Optional[np.ndarray]]:
    proj, duals = projectivity_many(v, [s])
    return (True, duals[0]) if proj[0] else (False, None)


def zero_locus(v: SegreVariety, dual) -> int:
    vals = (v.tensor.astype(np.int64) @ np.asarray(dual, dtype=np.int64)) % v.q
    return sum(1 << int(p) for p in np.flatnonzero(vals == 0))


@dataclass(frozen=True)
class Hyperplane:
    points: int
    variety: SegreVariety
    projective: bool
    dual: Optional[tuple[int, ...]]
    order_profile: tuple[int, ...]
    deep_points: int

    @classmethod
    def from_points(cls, v: SegreVariety, s: int) -> Hyperplane:
        if not is_hyperplane(v, s):
            raise HyperplaneError("point set is not a geometric hyperplane")
        masks = order_masks(v, s)
        proj, dual = projectivity(v, s)
        return cls(
            points=s,
            variety=v,
            projective=proj,
            dual=None if dual is None else tuple(int(x) for x in dual),
            order_profile=tuple(m.bit_count() for m in masks),
            deep_points=masks[v.k],
        )

    def __len__(self):
        return self.points.bit_count()


def singular_hyperplane(v: SegreVariety, nucleus: int) -> Hyperplane:
    return Hyperplane.from_points(v, singular_points(v, nucleus))


class LowerClassifier(Protocol):
    def section_label(self, mask: int) -> str: ...

    def line_label(self, sections: list[int]) -> str: ...

    def label_rank(self, label: str) -> tuple: ...


@dataclass(frozen=True)
class TypeSignature:
    point_count: int
    line_count: int
    order_histogram: tuple[int, ...]
    section_census: tuple[tuple[str, int], ...]
    spread_line_types: Optional[tuple[str, ...]]
    projective: bool

    def sections(self, label: str) -> int:
        return dict(self.section_census).get(label, 0)


def signature(
    v: SegreVariety,
    h: Hyperplane | int,
    lower: Optional[LowerClassifier] = None,
    projective: Optional[bool] = None,
) -> TypeSignature:
    s = h.points if isinstance(h, Hyperplane) else int(h)
    if projective is None:
        projective = h.projective if isinstance(h, Hyperplane) else projectivity(v, s)[0]
    hist = order_histogram(v, s)
    census: tuple = ()
    vl = None
    if lower is not None and v.k > 1:
        counts = Counter()
        kinds = []
        for j in range(v.k):
            secs = v.sections(s, j)
            for sec in secs:
                counts[lower.section_label(sec)] += 1
            kinds.append(lower.line_label(secs))
        census = tuple(sorted(counts.items(), key=lambda kv: lower.label_rank(kv[0])))
        vl = tuple(sorted(kinds, key=lower.label_rank))
    return TypeSignature(
        point_count=s.bit_count(),
        line_count=len(v.full_lines(s)),
        order_histogram=hist,
        section_census=census,
        spread_line_types=vl,
        projective=bool(projective),
    )
