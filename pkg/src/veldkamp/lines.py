"""Veldkamp lines: the pair scan, dual-space shortcut, cores and line signatures.

Hyperplane collections are sorted arrays of uint64 bitsets (varieties with
at most 64 points).  Lines are integer arrays of q+1 member identifiers,
ascending within a row, rows in lexicographic order.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .geometry import SegreVariety, bits
from .gf import dual_keys, normalize_rows


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1


def _partition(N: int, parts: int) -> list[tuple[int, int]]:
    # pair-scan work for first index i grows like (N - i)^2; cut into equal shares
    if N == 0:
        return []
    parts = max(1, min(parts * 4, N))
    w = (np.arange(N, 0, -1, dtype=np.float64)) ** 2
    cum = np.concatenate([[0.0], np.cumsum(w)])
    cuts = np.searchsorted(cum, np.linspace(0, cum[-1], parts + 1))
    cuts[0], cuts[-1] = 0, N
    cuts = np.unique(cuts)
    return [(int(a), int(b)) for a, b in zip(cuts[:-1], cuts[1:]) if b > a]


def sort_lines(lines: np.ndarray) -> np.ndarray:
    lines = np.sort(np.asarray(lines, dtype=np.int64), axis=1)
    if len(lines) == 0:
        return lines
    lines = np.unique(lines, axis=0)
    return lines


def find_lines(masks, q: int, threads: Optional[int] = None) -> np.ndarray:
    """All ordinary Veldkamp lines of a hyperplane collection.

    Every line is reported once, from the pair of its two smallest members.
    """
    H = np.ascontiguousarray(masks, dtype=np.uint64)
    threads = threads or default_threads()
    chunks = _partition(len(H), threads)
    if threads == 1:
        parts = [_kernels.scan_lines(H, q, a, b) for a, b in chunks]
    else:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda ab: _kernels.scan_lines(H, q, *ab), chunks))
    parts = [p for p in parts if len(p)]
    if not parts:
        return np.zeros((0, q + 1), dtype=np.int64)
    return sort_lines(np.concatenate(parts))


def candidate_histogram(masks, maxc: int = 8, threads: Optional[int] = None) -> np.ndarray:
    """Pairs of hyperplanes grouped by how many further hyperplanes share their core.

    Pairs with zero candidates are the two-member families that the pair scan
    never reports as lines.
    """
    H = np.ascontiguousarray(masks, dtype=np.uint64)
    threads = threads or default_threads()
    chunks = _partition(len(H), threads)
    with ThreadPoolExecutor(threads) as pool:
        parts = list(pool.map(lambda ab: _kernels.candidate_histogram(H, ab[0], ab[1], maxc), chunks))
    return np.sum(parts, axis=0) if parts else np.zeros(maxc + 1, dtype=np.int64)


def line_cores(masks, lines) -> np.ndarray:
    H = np.asarray(masks, dtype=np.uint64)
    return np.bitwise_and.reduce(H[np.asarray(lines)], axis=1)


def line_projectivity(duals, projective, lines, q: int) -> np.ndarray:
    """A line is projective iff its members are and their duals are collinear."""
    lines = np.asarray(lines)
    duals = np.asarray(duals, dtype=np.int64)
    ok = np.all(np.asarray(projective)[lines], axis=1)
    c0, c1 = duals[lines[:, 0]], duals[lines[:, 1]]
    if q == 2:
        return ok & np.all((c0 + c1) % 2 == duals[lines[:, 2]], axis=1)
    s = dual_keys(normalize_rows(c0 + c1, 3))
    d = dual_keys(normalize_rows(c0 + 2 * c1, 3))
    k2 = dual_keys(duals[lines[:, 2]])
    k3 = dual_keys(duals[lines[:, 3]])
    same = ((k2 == s) & (k3 == d)) | ((k2 == d) & (k3 == s))
    return ok & same


def projective_lines_fast(duals, q: int) -> np.ndarray:
    """Lines of the dual projective space through pairs of the given points.

    `duals` are normalized dual vectors; member identifiers refer to their
    row positions.  Raises if a row is zero (no dual vector).
    """
    duals = np.asarray(duals, dtype=np.int64)
    if len(duals) and not np.all(duals.any(axis=1)):
        raise ValueError("member without dual vector")
    keys = dual_keys(duals)
    order = np.argsort(keys)
    skeys = keys[order]

    def ids(vs):
        kk = dual_keys(normalize_rows(vs, q))
        pos = np.searchsorted(skeys, kk)
        pos = np.minimum(pos, len(skeys) - 1)
        found = skeys[pos] == kk
        return np.where(found, order[pos], -1)

    out = []
    N = len(duals)
    for i in range(N):
        j = np.arange(i + 1, N)
        if not len(j):
            continue
        ci, cj = duals[i], duals[j]
        if q == 2:
            rows = np.column_stack([np.full(len(j), i), j, ids(ci + cj)])
        else:
            rows = np.column_stack([np.full(len(j), i), j, ids(ci + cj), ids(ci + 2 * cj)])
        rows = rows[np.all(rows[:, 2:] > j[:, None], axis=1)]
        out.append(rows)
    if not out:
        return np.zeros((0, q + 1), dtype=np.int64)
    return sort_lines(np.concatenate(out))


@dataclass(frozen=True)
class VeldkampLine:
    members: tuple[int, ...]
    core: int
    core_lines: int
    kind: str
    projective: bool


def trivial_lines(ids, projective=None) -> list[VeldkampLine]:
    """One trivial line (whole variety plus h counted thrice) per hyperplane id."""
    out = []
    for t, h in enumerate(ids):
        proj = True if projective is None else bool(projective[t])
        out.append(VeldkampLine(members=(int(h),), core=-1, core_lines=-1, kind="trivial", projective=proj))
    return out


def make_line(v: SegreVariety, masks, members, projective: bool) -> VeldkampLine:
    ms = [int(masks[m]) for m in members]
    core = ms[0]
    for m in ms[1:]:
        core &= m
    for a, b in itertools.combinations(ms, 2):
        if a & b != core:
            raise ValueError("members do not form a Veldkamp line")
    return VeldkampLine(
        members=tuple(sorted(int(m) for m in members)),
        core=core,
        core_lines=len(v.full_lines(core)),
        kind="ordinary",
        projective=bool(projective),
    )


# ---------------------------------------------------------------------------
# line signatures

# order-two coincidences are only compared on cores this small; on larger
# cores they would separate lines that belong to one geometric class
ORDER_TWO_CORE_LIMIT = 4


@dataclass(frozen=True)
class CoreFeatures:
    concurrency: int
    zero_order_in_core: tuple[tuple[str, int], ...]
    deep_distances: tuple[int, ...]
    deep_in_core: int
    order_two_distances: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class LineSignature:
    projective: bool
    core_points: int
    core_lines: int
    member_types: tuple[str, ...]
    tiebreakers: tuple


def intersecting_line_pairs(v: SegreVariety) -> np.ndarray:
    pairs = set()
    for through in v.lines_through:
        for a, b in itertools.combinations(through, 2):
            pairs.add((min(a, b), max(a, b)))
    return np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2)


def core_features(v: SegreVariety, member_masks, member_labels, core: Optional[int] = None) -> CoreFeatures:
    from .hyperplanes import point_orders

    member_masks = [int(m) for m in member_masks]
    if core is None:
        core = member_masks[0]
        for m in member_masks[1:]:
            core &= m
    full = v.full_lines(core)
    conc = sum(
        1 for a, b in itertools.combinations(full, 2) if v.line_masks[a] & v.line_masks[b]
    )
    orders = [point_orders(v, m) for m in member_masks]
    zero = {}
    for lab, od in zip(member_labels, orders):
        zero[lab] = zero.get(lab, 0) + sum(1 for p, t in od.items() if t == 0 and core >> p & 1)
    deep = [[p for p, t in od.items() if t == v.k] for od in orders]
    deep_d = []
    for a, b in itertools.combinations(range(len(deep)), 2):
        deep_d += [v.distance(x, y) for x in deep[a] for y in deep[b]]
    deep_in_core = sum(1 for ps in deep for p in ps if core >> p & 1)
    o2 = []
    for od in orders:
        pts = [p for p, t in od.items() if t == 2 and core >> p & 1]
        if len(pts) >= 2:
            o2.append(tuple(sorted(v.distance(x, y) for x, y in itertools.combinations(pts, 2))))
    return CoreFeatures(
        concurrency=conc,
        zero_order_in_core=tuple(sorted(zero.items())),
        deep_distances=tuple(sorted(deep_d)),
        deep_in_core=deep_in_core,
        order_two_distances=tuple(sorted(o2)),
    )


def tiebreaker_key(features: CoreFeatures, core_points: int) -> tuple:
    """The part of the core features that enters the line signature."""
    small = core_points <= ORDER_TWO_CORE_LIMIT
    return (
        features.concurrency,
        features.zero_order_in_core,
        features.deep_in_core,
        features.order_two_distances if small else (),
    )


def line_signature(v: SegreVariety, member_masks, member_labels, projective: bool, rank=None) -> LineSignature:
    core = int(member_masks[0])
    for m in member_masks[1:]:
        core &= int(m)
    f = core_features(v, member_masks, member_labels, core)
    key = sorted(member_labels, key=rank) if rank else sorted(member_labels)
    return LineSignature(
        projective=bool(projective),
        core_points=core.bit_count(),
        core_lines=len(v.full_lines(core)),
        member_types=tuple(key),
        tiebreakers=tiebreaker_key(f, core.bit_count()),
    )


def _pairwise_code(v: SegreVariety, pts: list[int]) -> tuple[int, ...]:
    return tuple(sorted(v.distance(x, y) for x, y in itertools.combinations(pts, 2)))


def signature_rows(
    v: SegreVariety,
    masks: np.ndarray,
    types: np.ndarray,
    ntypes: int,
    zero_masks: np.ndarray,
    deep_masks: np.ndarray,
    two_masks: np.ndarray,
    lines: np.ndarray,
    projective: np.ndarray,
) -> tuple[np.ndarray, list]:
    """Vectorised line signatures as integer rows.

    Columns: projective, core points, core lines, member type counts,
    concurrency, zero-order core points per member type, deep points in core,
    code of the order-two coincidence distances.  Returns the rows and the
    decoding list for the last column.
    """
    lines = np.asarray(lines)
    H = np.asarray(masks, dtype=np.uint64)
    mem = H[lines]
    core = np.bitwise_and.reduce(mem, axis=1)
    L = len(lines)
    lm = np.array(v.line_masks, dtype=np.uint64)
    full = np.empty((L, len(lm)), dtype=bool)
    for t, m in enumerate(lm):
        full[:, t] = (core & m) == m
    pairs = intersecting_line_pairs(v)
    conc = np.zeros(L, dtype=np.int64)
    for a, b in pairs:
        conc += full[:, a] & full[:, b]
    mt = np.asarray(types)[lines]
    comp = np.stack([(mt == t).sum(axis=1) for t in range(ntypes)], axis=1)
    z = np.bitwise_count(np.asarray(zero_masks, dtype=np.uint64)[lines] & core[:, None]).astype(np.int64)
    zs = np.stack([(z * (mt == t)).sum(axis=1) for t in range(ntypes)], axis=1)
    deep = np.bitwise_count(np.asarray(deep_masks, dtype=np.uint64)[lines] & core[:, None]).sum(axis=1)
    cpts = np.bitwise_count(core).astype(np.int64)

    codes = [()]
    index = {(): 0}
    o2 = np.zeros(L, dtype=np.int64)
    tw = np.asarray(two_masks, dtype=np.uint64)[lines] & core[:, None]
    many = np.bitwise_count(tw) >= 2
    todo = np.flatnonzero((cpts <= ORDER_TWO_CORE_LIMIT) & many.any(axis=1))
    for i in todo:
        key = tuple(sorted(_pairwise_code(v, bits(int(m))) for m in tw[i] if int(m).bit_count() >= 2))
        if key not in index:
            index[key] = len(codes)
            codes.append(key)
        o2[i] = index[key]
    rows = np.column_stack(
        [
            np.asarray(projective, dtype=np.int64),
            cpts,
            full.sum(axis=1),
            comp,
            conc,
            zs,
            deep,
            o2,
        ]
    )
    return rows, codes


def decode_row(row, labels: list[str], codes: list, rank=None) -> LineSignature:
    T = len(labels)
    row = [int(x) for x in row]
    comp = row[3 : 3 + T]
    conc = row[3 + T]
    zs = row[4 + T : 4 + 2 * T]
    deep, o2 = row[4 + 2 * T], row[5 + 2 * T]
    members = [lab for lab, c in zip(labels, comp) for _ in range(c)]
    zero = tuple(sorted((lab, z) for lab, c, z in zip(labels, comp, zs) if c))
    small = row[1] <= ORDER_TWO_CORE_LIMIT
    return LineSignature(
        projective=bool(row[0]),
        core_points=row[1],
        core_lines=row[2],
        member_types=tuple(sorted(members, key=rank) if rank else sorted(members)),
        tiebreakers=(conc, zero, deep, codes[o2] if small else ()),
    )
