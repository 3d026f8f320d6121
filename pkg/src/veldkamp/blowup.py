"""Hyperplanes of S_k from Veldkamp lines and hyperplanes of S_{k-1}.

The new factor is prepended: in the blown-up variety the layer with first
coordinate i is a copy of the lower variety occupying the point indices
i*N .. (i+1)*N - 1, N being the lower point count.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .geometry import SegreVariety, build
from .gf import dual_keys, normalize_rows
from .hyperplanes import is_hyperplane


def permutations(n: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(n)))


def blow_up_ordinary(members, permutation, lower_points: int) -> int:
    """Layer i of the result is the member h_{permutation[i]}."""
    members = [int(m) for m in members]
    core = members[0]
    for m in members[1:]:
        core &= m
    for a, b in itertools.combinations(members, 2):
        if a & b != core:
            raise ValueError("line members have inconsistent pairwise intersections")
    out = 0
    for i, p in enumerate(permutation):
        out |= members[p] << (i * lower_points)
    return out


def blow_up_trivial(h: int, full_layer: int, lower_points: int, n: int) -> int:
    full = (1 << lower_points) - 1
    out = 0
    for i in range(n):
        out |= (full if i == full_layer else int(h)) << (i * lower_points)
    return out


def project(mask: int, lower_points: int, n: int) -> list[int]:
    """Sections along the new direction (layers 0..n-1)."""
    full = (1 << lower_points) - 1
    return [(mask >> (i * lower_points)) & full for i in range(n)]


@dataclass(frozen=True)
class BlowupRecord:
    hyperplane: int
    source_line: int
    permutation: tuple[int, ...]
    kind: str


def blowup_masks(lower_masks, lines, q: int, lower_points: int, hyperplane_ids=None):
    """All blow-ups into one machine word: (masks, provenance records).

    Provenance rows are (kind, source index, arrangement index) with kind 0
    for ordinary lines (arrangement = permutation index) and 1 for trivial
    ones (arrangement = position of the full layer).
    """
    n = q + 1
    if n * lower_points > 64:
        raise ValueError("blown-up variety does not fit one word")
    H = np.asarray(lower_masks, dtype=np.uint64)
    lines = np.asarray(lines, dtype=np.int64).reshape(-1, n)
    if hyperplane_ids is None:
        hyperplane_ids = np.arange(len(H))
    hyperplane_ids = np.asarray(hyperplane_ids, dtype=np.int64)
    perms = permutations(n)
    shifts = [np.uint64(i * lower_points) for i in range(n)]
    out, prov = [], []
    for pi, perm in enumerate(perms):
        m = np.zeros(len(lines), dtype=np.uint64)
        for i, p in enumerate(perm):
            m |= H[lines[:, p]] << shifts[i]
        out.append(m)
        prov.append(np.column_stack([np.zeros(len(lines), np.int64), np.arange(len(lines)), np.full(len(lines), pi)]))
    full = np.uint64((1 << lower_points) - 1)
    for j in range(n):
        m = np.zeros(len(hyperplane_ids), dtype=np.uint64)
        for i in range(n):
            m |= (full if i == j else H[hyperplane_ids]) << shifts[i]
        out.append(m)
        prov.append(np.column_stack([np.ones(len(hyperplane_ids), np.int64), hyperplane_ids, np.full(len(hyperplane_ids), j)]))
    return np.concatenate(out), np.concatenate(prov)


def brute_force(v: SegreVariety) -> np.ndarray:
    """Every geometric hyperplane by scanning all subsets (point_count <= 20)."""
    if v.point_count > 20:
        raise ValueError("brute force is limited to small varieties")
    subsets = np.arange(1, (1 << v.point_count) - 1, dtype=np.uint64)
    ok = np.ones(len(subsets), dtype=bool)
    for m in v.line_masks:
        c = np.bitwise_count(subsets & np.uint64(m))
        ok &= (c == 1) | (c == v.n)
    return subsets[ok]


def blowup_duals_ordinary(member_duals, perm) -> np.ndarray:
    """Dual vectors of blow-ups of projective ternary lines.

    With layer vectors x_0=(1,0), x_1=(0,1), x_2=(1,1), x_3=(1,2) the form is
    (g_0, g_1) where g_0 = c_{perm[0]} and g_1 = lam * c_{perm[1]}, the scalar
    lam being fixed by g_0 + g_1 ~ c_{perm[2]}.  `member_duals` has shape
    (lines, 4, d) with normalized rows.
    """
    c = np.asarray(member_duals, dtype=np.int64)
    g0 = c[:, perm[0]]
    c1 = c[:, perm[1]]
    target = dual_keys(c[:, perm[2]])
    lam = np.where(dual_keys(normalize_rows(g0 + c1, 3)) == target, 1, 2)
    g1 = lam[:, None] * c1 % 3
    return np.concatenate([g0, g1], axis=1).astype(np.int8)


def blowup_duals_trivial(duals, full_layer: int) -> np.ndarray:
    """Dual of the blow-up with layer `full_layer` full and copies of h elsewhere."""
    c = np.asarray(duals, dtype=np.int64)
    z = np.zeros_like(c)
    g = {0: (z, c), 1: (c, z), 2: (c, 2 * c % 3), 3: (c, c)}[full_layer]
    return np.concatenate(g, axis=1).astype(np.int8)


def check_blowups(v: SegreVariety, masks) -> bool:
    return all(is_hyperplane(v, int(m)) for m in masks)


def lift(q: int, k: int) -> SegreVariety:
    return build(q, k + 1)
