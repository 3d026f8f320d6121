"""Segre varieties S_k(q) as explicit point-line incidence structures.

A point is a tuple (a_1, ..., a_k) of labels in 0..q; its index is the base
q+1 number with a_1 most significant.  Point sets are Python ints used as
bitsets (bit i = point i); `PointSet` wraps one for serialization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gf import check_field, tensor_product

LABEL_VECTORS = {
    2: ((1, 0), (0, 1), (1, 1)),
    3: ((1, 0), (0, 1), (1, 1), (1, 2)),
}


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(points) -> int:
    m = 0
    for p in points:
        m |= 1 << int(p)
    return m


@dataclass(frozen=True)
class PointSet:
    bits: int
    width: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.width:
            raise ValueError("bits outside the point range")

    def __len__(self):
        return self.bits.bit_count()

    def __contains__(self, p):
        return bool(self.bits >> p & 1)

    def __iter__(self):
        return iter(bits(self.bits))

    def __and__(self, other):
        return PointSet(self.bits & other.bits, self.width)

    def __or__(self, other):
        return PointSet(self.bits | other.bits, self.width)

    def __invert__(self):
        return PointSet(~self.bits & ((1 << self.width) - 1), self.width)

    @property
    def nbytes(self) -> int:
        return (self.width + 7) // 8

    def to_bytes(self) -> bytes:
        return self.bits.to_bytes(self.nbytes, "little")

    @classmethod
    def from_bytes(cls, data: bytes, width: int) -> PointSet:
        return cls(int.from_bytes(data, "little"), width)


class SegreVariety:
    """S_k(q) = PG(1,q) x ... x PG(1,q) with its lines, spreads and layers."""

    def __init__(self, q: int, k: int):
        check_field(q)
        if not 1 <= k <= 4:
            raise ValueError(f"unsupported factor count {k}")
        self.q, self.k = q, k
        n = self.n = q + 1
        self.point_count = n**k
        self.full = (1 << self.point_count) - 1
        self.tuples = np.array(list(itertools.product(range(n), repeat=k)), dtype=np.int64)
        self.strides = [n ** (k - 1 - j) for j in range(k)]
        self.point_vectors = LABEL_VECTORS[q]

        lines, spreads = [], []
        for j in range(k):
            base = np.flatnonzero(self.tuples[:, j] == 0)
            start = len(lines)
            for b in base:
                lines.append([b + a * self.strides[j] for a in range(n)])
            spreads.append(list(range(start, len(lines))))
        self.lines = np.array(lines, dtype=np.int64)
        self.spreads = spreads
        self.line_masks = [mask_of(line) for line in lines]
        self.line_direction = np.repeat(np.arange(k), n ** (k - 1))

        # layer (j, a): points with coordinate j equal to a, listed in the
        # index order of the lower variety
        self.layer_points = [
            [np.flatnonzero(self.tuples[:, j] == a) for a in range(n)] for j in range(k)
        ]
        self.layers = [[mask_of(p) for p in row] for row in self.layer_points]

        self.lines_through = [[] for _ in range(self.point_count)]
        for li, line in enumerate(lines):
            for p in line:
                self.lines_through[p].append(li)

        self.tensor = np.array(
            [tensor_product([self.point_vectors[a] for a in t], q) for t in self.tuples],
            dtype=np.int8,
        )

    def __repr__(self):
        return f"SegreVariety(q={self.q}, k={self.k})"

    def index(self, t) -> int:
        return int(sum(int(a) * s for a, s in zip(t, self.strides)))

    def point_tuple(self, p: int) -> tuple[int, ...]:
        return tuple(int(a) for a in self.tuples[p])

    def distance(self, p: int, r: int) -> int:
        return int(np.count_nonzero(self.tuples[p] != self.tuples[r]))

    def tensor_coordinates(self, p: int) -> np.ndarray:
        return self.tensor[p]

    def section(self, mask: int, j: int, a: int) -> int:
        """Restriction of a point set to layer (j, a), in lower-variety indexing."""
        out = 0
        for t, p in enumerate(self.layer_points[j][a]):
            if mask >> int(p) & 1:
                out |= 1 << t
        return out

    def sections(self, mask: int, j: int) -> list[int]:
        return [self.section(mask, j, a) for a in range(self.n)]

    def lower_full(self) -> int:
        return (1 << (self.point_count // self.n)) - 1

    def full_lines(self, mask: int) -> list[int]:
        return [li for li, m in enumerate(self.line_masks) if mask & m == m]

    def collinearity_distances(self, source: int) -> np.ndarray:
        """Breadth-first distances in the collinearity graph (test oracle)."""
        dist = np.full(self.point_count, -1, dtype=np.int64)
        dist[source] = 0
        frontier = [source]
        while frontier:
            nxt = []
            for p in frontier:
                for li in self.lines_through[p]:
                    for r in self.lines[li]:
                        if dist[r] < 0:
                            dist[r] = dist[p] + 1
                            nxt.append(int(r))
            frontier = nxt
        return dist


@lru_cache(maxsize=None)
def build(q: int, k: int) -> SegreVariety:
    return SegreVariety(q, k)
