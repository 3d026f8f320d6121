"""Hyperplanes of S_4(3): generation, dedup and classification in bulk.

A hyperplane of S_4(3) is held as four 64-bit words, word i being its
section with first coordinate i (a hyperplane of S_3(3) or the full S_3(3)).
Projective ones are also keyed by their dual vector packed into 32 bits.
Every signature ingredient (points, lines, point orders, the 16 sections
and the Veldkamp lines obtained along all four spreads) is computed with
word-parallel bit operations, so the whole store is classified exactly.
"""

from __future__ import annotations

import os
import tempfile
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np

from . import tables
from .blowup import blowup_duals_ordinary, blowup_duals_trivial, permutations
from .geometry import build
from .gf import keys_to_vectors, ranks_and_kernels, split_form
from .orbits import DisjointSet, hyperplane_orbits, line_orbits
from .space import VeldkampSpace, label_rank, trivial_label

U = np.uint64
FULL = U(0xFFFFFFFFFFFFFFFF)
_M1 = U(0xFFFF)
_M2 = U(0x000F000F000F000F)
_M3 = U(0x1111111111111111)
_STRIDE = {1: U(16), 2: U(4), 3: U(1)}
_BASE = {1: _M1, 2: _M2, 3: _M3}


def _compress_nibbles(x):
    # nibbles at bit offsets 0, 16, 32, 48 -> one 16-bit value
    x = (x | (x >> U(12))) & U(0x000000FF000000FF)
    return (x | (x >> U(24))) & U(0xFFFF)


def _compress_bits(x):
    # bits at offsets 0, 4, ..., 60 -> one 16-bit value
    x = (x | (x >> U(3))) & U(0x0303030303030303)
    x = (x | (x >> U(6))) & U(0x000F000F000F000F)
    x = (x | (x >> U(12))) & U(0x000000FF000000FF)
    return (x | (x >> U(24))) & U(0xFFFF)


def layer_words(words: np.ndarray, d: int, a: int) -> np.ndarray:
    """Section (d, a) of each hyperplane as an S_3(3) bitset."""
    if d == 0:
        return words[:, a].copy()
    out = np.zeros(len(words), dtype=U)
    for w in range(4):
        x = words[:, w]
        if d == 1:
            part = (x >> U(16 * a)) & _M1
        elif d == 2:
            part = _compress_nibbles((x >> U(4 * a)) & _M2)
        else:
            part = _compress_bits((x >> U(a)) & _M3)
        out |= part << U(16 * w)
    return out


def _full_in_word(x, d):
    s = _STRIDE[d]
    return x & (x >> s) & (x >> (s + s)) & (x >> (s + s + s)) & _BASE[d]


def _spread(f, d):
    s = _STRIDE[d]
    return f | (f << s) | (f << (s + s)) | (f << (s + s + s))


def words_are_hyperplanes(words: np.ndarray) -> np.ndarray:
    """Every line meets the set in exactly one or four points, set proper."""
    w = [words[:, i] for i in range(4)]
    ok = np.ones(len(words), dtype=bool)
    # lines across the words: per position count how many words contain it
    one = (w[0] ^ w[1] ^ w[2] ^ w[3]) & ~((w[0] & w[1]) | (w[2] & w[3]) | ((w[0] ^ w[1]) & (w[2] ^ w[3])))
    four = w[0] & w[1] & w[2] & w[3]
    ok &= (one | four) == FULL
    for x in w:
        for d in (1, 2, 3):
            s = _STRIDE[d]
            a, b, c, e = x, x >> s, x >> (s + s), x >> (s + s + s)
            exactly_one = (a ^ b ^ c ^ e) & ~((a & b) | (c & e) | ((a ^ b) & (c ^ e)))
            all4 = a & b & c & e
            ok &= ((exactly_one | all4) & _BASE[d]) == _BASE[d]
    total = sum(np.bitwise_count(x).astype(np.int64) for x in w)
    ok &= (total > 0) & (total < 256)
    return ok


def point_line_orders(words: np.ndarray):
    """(point count, line count, order histogram (B, 5))."""
    w = [words[:, i] for i in range(4)]
    d0 = w[0] & w[1] & w[2] & w[3]
    lines = np.bitwise_count(d0).astype(np.int64)
    hist = np.zeros((len(words), 5), dtype=np.int64)
    for x in w:
        f = [_full_in_word(x, d) for d in (1, 2, 3)]
        for fd in f:
            lines += np.bitwise_count(fd)
        ind = [d0, _spread(f[0], 1), _spread(f[1], 2), _spread(f[2], 3)]
        # bit-sliced count of how many indicator masks contain each point
        s0 = np.zeros_like(x)
        s1 = np.zeros_like(x)
        s2 = np.zeros_like(x)
        for m in ind:
            c0 = s0 & m
            s0 ^= m
            c1 = s1 & c0
            s1 ^= c0
            s2 |= c1
        hist[:, 0] += np.bitwise_count(x & ~s0 & ~s1 & ~s2)
        hist[:, 1] += np.bitwise_count(s0 & ~s1 & ~s2)
        hist[:, 2] += np.bitwise_count(~s0 & s1 & ~s2)
        hist[:, 3] += np.bitwise_count(s0 & s1 & ~s2)
        hist[:, 4] += np.bitwise_count(s2)
    pts = sum(np.bitwise_count(x).astype(np.int64) for x in w)
    return pts, lines, hist


def words_from_keys(keys, tensor: np.ndarray) -> np.ndarray:
    """Zero loci of packed dual vectors on the 256 points."""
    vecs = keys_to_vectors(keys, 16).astype(np.float32)
    vals = vecs @ tensor.T.astype(np.float32)
    zero = np.fmod(vals, 3.0) == 0
    return np.packbits(zero, axis=1, bitorder="little").view("<u8")


def words_to_points(words: np.ndarray) -> np.ndarray:
    """(B, 4) words -> (B, 256) membership flags."""
    raw = np.ascontiguousarray(words.astype("<u8")).view(np.uint8)
    return np.unpackbits(raw, axis=1, bitorder="little").astype(bool)


def word_ranks(words: np.ndarray, chunk: int = 2048) -> tuple[np.ndarray, np.ndarray]:
    """Rank of the point tensors of each hyperplane and its normalized dual (or zeros)."""
    tensor = build(3, 4).tensor.astype(np.int64)
    ranks, duals = [], []
    for s in range(0, len(words), chunk):
        pts = words_to_points(words[s : s + chunk])
        r, d = ranks_and_kernels([tensor[p] for p in pts], 3, 16)
        ranks.append(r)
        duals.append(d)
    if not ranks:
        return np.zeros(0, np.int64), np.zeros((0, 16), np.int8)
    return np.concatenate(ranks), np.concatenate(duals)


@dataclass
class Level3:
    """Lookup data from S_3(3) used to label sections and projected lines."""

    sp: VeldkampSpace
    line_orbit: np.ndarray
    hyp_orbit: np.ndarray

    @classmethod
    def from_space(cls, sp: VeldkampSpace) -> Level3:
        return cls(sp, line_orbits(sp).labels, hyperplane_orbits(sp).labels)

    @property
    def ntypes(self) -> int:
        return len(self.sp.type_labels)


# codes for projected lines: ordinary classes keep their class index, trivial
# lines are TRIVIAL + hyperplane type; source nodes similarly use line orbits
# and TRIVIAL + hyperplane orbit
TRIVIAL = 1000


def classify_words(l3: Level3, words: np.ndarray):
    """Signature rows and the source node of each spread direction.

    Row layout: points, lines, orders 0..4, sections (D then each S_3(3)
    type), the four projected line codes sorted.  Raises ValueError when a
    section or projection does not belong to V(S_3(3)).
    """
    sp = l3.sp
    B = len(words)
    pts, lns, hist = point_line_orders(words)
    T = l3.ntypes
    sec = np.zeros((B, T + 1), dtype=np.int64)
    codes = np.zeros((B, 4), dtype=np.int64)
    nodes = np.zeros((B, 4), dtype=np.int64)
    ar = np.arange(B)
    for d in range(4):
        ids = np.empty((B, 4), dtype=np.int64)
        for a in range(4):
            x = layer_words(words, d, a) if d else words[:, a]
            full = x == FULL
            idx = np.full(B, -1, dtype=np.int64)
            if (~full).any():
                try:
                    idx[~full] = sp.indices(x[~full])
                except KeyError:
                    raise ValueError("a section is neither full nor an S_3(3) hyperplane") from None
            ids[:, a] = idx
            lab = np.where(full, 0, sp.types[np.maximum(idx, 0)] + 1)
            np.add.at(sec, (ar, lab), 1)
        nfull = (ids < 0).sum(axis=1)
        triv = nfull == 1
        ordinary = nfull == 0
        if not np.all(triv | ordinary):
            raise ValueError("projection along a spread is not a Veldkamp line")
        if triv.any():
            srt = np.sort(ids[triv], axis=1)
            if not np.all((srt[:, 1] == srt[:, 2]) & (srt[:, 2] == srt[:, 3])):
                raise ValueError("projection along a spread is not a Veldkamp line")
            h = srt[:, 3]
            codes[triv, d] = TRIVIAL + sp.types[h]
            nodes[triv, d] = TRIVIAL + l3.hyp_orbit[h]
        if ordinary.any():
            try:
                li = sp.line_indices(ids[ordinary])
            except KeyError:
                raise ValueError("projection along a spread is not a Veldkamp line") from None
            codes[ordinary, d] = sp.line_class[li]
            nodes[ordinary, d] = l3.line_orbit[li]
    rows = np.column_stack([pts, lns, hist, sec, np.sort(codes, axis=1)])
    return rows, nodes


_HASH = np.random.default_rng(20240611).integers(1, 2**63, size=64, dtype=np.int64).astype(np.uint64) | U(1)


def unique_rows(rows: np.ndarray):
    """Distinct integer rows with counts, grouped through a 64-bit hash.

    Every group is compared against its representative, so a hash collision
    raises instead of merging rows silently.
    """
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    with np.errstate(over="ignore"):
        h = (rows.astype(np.uint64) * _HASH[: rows.shape[1]]).sum(axis=1, dtype=np.uint64)
        h ^= h >> U(29)
    _, first, inv, cnt = np.unique(h, return_index=True, return_inverse=True, return_counts=True)
    rep = rows[first]
    if not np.array_equal(rep[inv.ravel()], rows):
        raise RuntimeError("row hash collision")
    return rep, cnt, first


def code_label(sp: VeldkampSpace, code: int) -> str:
    if code >= TRIVIAL:
        return trivial_label(sp.type_labels[code - TRIVIAL])
    return sp.line_labels[code]


# --- generation ------------------------------------------------------------


@dataclass
class Batch:
    words: np.ndarray
    keys: Optional[np.ndarray]
    kind: int  # 0 ordinary, 1 trivial
    source: np.ndarray  # line id or hyperplane id per row
    arrangement: int  # permutation index or full-layer position


def generate(
    sp: VeldkampSpace,
    line_ids: np.ndarray,
    hyperplane_ids: np.ndarray,
    with_keys: bool = True,
    chunk: int = 1 << 20,
) -> Iterator[Batch]:
    """Blow-ups of the given lines (all 24 arrangements) and hyperplanes (4)."""
    H = sp.masks
    lines = sp.lines[line_ids]
    for pi, perm in enumerate(permutations(4)):
        for s in range(0, len(lines), chunk):
            part = lines[s : s + chunk]
            words = np.stack([H[part[:, perm[i]]] for i in range(4)], axis=1)
            keys = None
            if with_keys:
                duals = blowup_duals_ordinary(sp.duals[part], perm)
                keys = _keys32(duals)
            yield Batch(words, keys, 0, line_ids[s : s + chunk], pi)
    for j in range(4):
        for s in range(0, len(hyperplane_ids), chunk):
            hid = hyperplane_ids[s : s + chunk]
            words = np.stack([np.full(len(hid), FULL) if i == j else H[hid] for i in range(4)], axis=1)
            keys = _keys32(blowup_duals_trivial(sp.duals[hid], j)) if with_keys else None
            yield Batch(words, keys, 1, hid, j)


def _keys32(duals: np.ndarray) -> np.ndarray:
    shifts = (2 * np.arange(duals.shape[1])).astype(np.uint32)
    return (duals.astype(np.uint32) << shifts).sum(axis=1, dtype=np.uint32)


def dedup_keys(chunks, max_mem: Optional[int] = None, tmpdir: Optional[str] = None) -> tuple[np.ndarray, int]:
    """Sorted distinct keys and the total number of keys seen.

    With a memory ceiling the keys are spread over files by their top byte
    and each bucket is deduplicated separately (an external bucket sort).
    """
    if max_mem is None:
        parts = list(chunks)
        allk = np.concatenate(parts) if parts else np.zeros(0, np.uint32)
        return np.unique(allk), len(allk)
    nb = 256
    total = 0
    with tempfile.TemporaryDirectory(dir=tmpdir) as tmp:
        files = [open(os.path.join(tmp, f"b{b:03d}"), "wb") for b in range(nb)]
        try:
            for c in chunks:
                c = np.asarray(c, dtype=np.uint32)
                total += len(c)
                top = (c >> np.uint32(24)).astype(np.int64)
                order = np.argsort(top, kind="stable")
                c, top = c[order], top[order]
                cuts = np.searchsorted(top, np.arange(nb + 1))
                for b in range(nb):
                    if cuts[b + 1] > cuts[b]:
                        files[b].write(c[cuts[b] : cuts[b + 1]].tobytes())
        finally:
            for f in files:
                f.close()
        out = []
        for b in range(nb):
            data = np.fromfile(os.path.join(tmp, f"b{b:03d}"), dtype=np.uint32)
            out.append(np.unique(data))
    return np.concatenate(out), total


def dedup_records(chunks, max_mem: Optional[int] = None, tmpdir: Optional[str] = None) -> tuple[np.ndarray, int]:
    """First record of every distinct "key" in structured chunks, sorted by key.

    Same bucket scheme as `dedup_keys`; "first" follows chunk order.
    """
    if max_mem is None:
        parts = list(chunks)
        if not parts:
            raise ValueError("no records")
        allr = np.concatenate(parts)
        _, first = np.unique(allr["key"], return_index=True)
        return allr[first], len(allr)
    nb = 256
    total = 0
    dtype = None
    with tempfile.TemporaryDirectory(dir=tmpdir) as tmp:
        files = [open(os.path.join(tmp, f"b{b:03d}"), "wb") for b in range(nb)]
        try:
            for c in chunks:
                dtype = c.dtype
                total += len(c)
                top = (c["key"] >> np.uint32(24)).astype(np.int64)
                order = np.argsort(top, kind="stable")
                c, top = c[order], top[order]
                cuts = np.searchsorted(top, np.arange(nb + 1))
                for b in range(nb):
                    if cuts[b + 1] > cuts[b]:
                        files[b].write(c[cuts[b] : cuts[b + 1]].tobytes())
        finally:
            for f in files:
                f.close()
        if dtype is None:
            raise ValueError("no records")
        out = []
        for b in range(nb):
            data = np.fromfile(os.path.join(tmp, f"b{b:03d}"), dtype=dtype)
            _, first = np.unique(data["key"], return_index=True)
            out.append(data[first])
    return np.concatenate(out), total


# --- census ----------------------------------------------------------------


@dataclass
class K4Class:
    label: str
    row: tuple
    count: int
    vl: tuple[str, ...]
    sources: tuple
    subtypes: list = field(default_factory=list)  # [(component, count)]
    form_zeros: dict = field(default_factory=dict)  # component -> zeros of the split form
    representatives: dict = field(default_factory=dict)  # component -> (words, key)


@dataclass
class K4Census:
    classes: list[K4Class]
    total: int
    distinct: Optional[int]
    axiom_failures: int
    dual_mismatches: int
    dual_checked: int
    components: list
    projective: bool
    keys: Optional[np.ndarray] = None
    class_of_node: dict = field(default_factory=dict)

    def by_label(self) -> dict[str, K4Class]:
        return {c.label: c for c in self.classes}

    def refined(self) -> list[tuple[str, int]]:
        out = []
        for c in self.classes:
            names = refined_names(c)
            out.extend(sorted(((names[i], n) for i, n in c.subtypes), key=lambda x: x[0]))
        return out


def refined_names(c: K4Class) -> dict:
    """Subtype names a, b, ... by increasing size; unsplit classes keep their label."""
    if len(c.subtypes) == 1:
        return {c.subtypes[0][0]: c.label}
    order = sorted(c.subtypes, key=lambda s: (s[1], s[0]))
    return {comp: c.label + chr(ord("a") + t) for t, (comp, _) in enumerate(order)}


class Accumulator:
    """Streaming classification of S_4(3) hyperplanes held as word arrays.

    Hyperplanes are grouped by signature row and by the stabilizer orbit of
    their projection along the first spread; the projections along all four
    spreads link those orbits into classes.  Dual keys, when given, feed the
    dedup, the round-trip check and the split-form count.
    """

    def __init__(self, l3: Level3, dual_stride: int = 1):
        self.l3 = l3
        self.dual_stride = dual_stride
        self.tensor = build(3, 4).tensor
        self.counts: Counter = Counter()
        self.reps: dict = {}
        self.links: set = set()
        self.key_chunks: list = []
        self.word_chunks: list = []
        self.total = self.fails = self.mism = self.checked = 0

    def add(self, words: np.ndarray, keys: Optional[np.ndarray] = None) -> None:
        self.total += len(words)
        self.fails += int((~words_are_hyperplanes(words)).sum())
        if keys is not None:
            self.key_chunks.append(keys)
            if self.dual_stride:
                for s in range(0, len(keys), self.dual_stride << 16):
                    e = s + (1 << 16)
                    rebuilt = words_from_keys(keys[s:e], self.tensor)
                    self.mism += int(np.any(rebuilt != words[s:e], axis=1).sum())
                    self.checked += len(rebuilt)
            qzero = split_form(keys_to_vectors(keys, 16)) == 0
        else:
            self.word_chunks.append(words)
            qzero = np.zeros(len(words), dtype=bool)
        rows, nodes = classify_words(self.l3, words)
        full = np.column_stack([rows, nodes[:, 0], qzero])
        uniq, cnt, first = unique_rows(full)
        for r, c, f in zip(map(tuple, uniq.tolist()), cnt.tolist(), first.tolist()):
            self.counts[r] += c
            if r[:-1] not in self.reps:
                self.reps[r[:-1]] = (words[f].copy(), None if keys is None else int(keys[f]))
        for r in unique_rows(nodes)[0].tolist():
            self.links.add(tuple(r))

    def finish(self, projective: bool, max_mem: Optional[int] = None, keep_keys: bool = False) -> K4Census:
        sp = self.l3.sp
        if self.key_chunks:
            keys, _ = dedup_keys(self.key_chunks, max_mem)
            distinct = len(keys)
        else:
            allw = np.concatenate(self.word_chunks) if self.word_chunks else np.zeros((0, 4), U)
            distinct = len(unique_rows(allw.view(np.int64))[0])
            keys = None
        ds = DisjointSet()
        for r in self.links:
            for x in r:
                ds.union(r[0], x)
        comps = ds.groups()
        comp_of = {x: i for i, g in enumerate(comps) for x in g}
        by_row = defaultdict(Counter)
        qzero = defaultdict(Counter)
        rep_of = {}
        for r, c in self.counts.items():
            row, node, qz = r[:-2], r[-2], r[-1]
            by_row[row][comp_of[node]] += c
            if qz:
                qzero[row][comp_of[node]] += c
        for r, wk in self.reps.items():
            rep_of.setdefault((r[:-1], comp_of[r[-1]]), wk)
        classes = []
        for row, percomp in by_row.items():
            vl = tuple(sorted({code_label(sp, c) for c in row[-4:]}, key=label_rank))
            srcs = tuple(sorted({x for x, i in comp_of.items() if i in percomp}))
            classes.append(
                K4Class(
                    label="",
                    row=row,
                    count=sum(percomp.values()),
                    vl=vl,
                    sources=srcs,
                    subtypes=sorted(percomp.items()),
                    form_zeros={i: qzero[row][i] for i in percomp},
                    representatives={i: rep_of[(row, i)] for i in percomp},
                )
            )
        _name_classes(sp, classes, projective)
        classes.sort(key=lambda c: label_rank(c.label))
        return K4Census(
            classes=classes,
            total=self.total,
            distinct=distinct,
            axiom_failures=self.fails,
            dual_mismatches=self.mism,
            dual_checked=self.checked,
            components=comps,
            projective=projective,
            keys=keys if keep_keys else None,
        )


def census_sources(sp: VeldkampSpace, projective: bool) -> tuple[np.ndarray, np.ndarray]:
    """Line and hyperplane ids whose blow-ups form the projective (or starred) store."""
    if projective:
        return np.flatnonzero(sp.line_projective), np.flatnonzero(sp.projective)
    allproj = np.all(sp.projective[sp.lines], axis=1)
    return np.flatnonzero(~sp.line_projective & allproj), np.flatnonzero(~sp.projective)


def run_census(
    l3: Level3,
    projective: bool = True,
    dual_stride: int = 1,
    keep_keys: bool = False,
    max_mem: Optional[int] = None,
    progress: Optional[Callable[[int], None]] = None,
) -> K4Census:
    """Blow up every (non-)projective line and hyperplane of S_3(3) and classify.

    projective=True: lines with collinear duals and the 3280 projective
    hyperplanes; projective=False: the non-projective lines whose members are
    all projective, plus the non-projective hyperplanes.  The dual round trip
    rebuilds one block of 65536 hyperplanes in every `dual_stride` blocks
    from its key (0 skips it, 1 checks all).
    """
    line_ids, hyp_ids = census_sources(l3.sp, projective)
    acc = Accumulator(l3, dual_stride)
    for b in generate(l3.sp, line_ids, hyp_ids, with_keys=projective):
        acc.add(b.words, b.keys)
        if progress:
            progress(acc.total)
    return acc.finish(projective, max_mem, keep_keys)


def census_of_keys(l3: Level3, keys, projective: bool = True, max_mem: Optional[int] = None, chunk: int = 1 << 18) -> K4Census:
    """Classify a store of dual keys (no provenance needed)."""
    keys = np.asarray(keys).astype(np.uint32)
    acc = Accumulator(l3, dual_stride=0)
    for s in range(0, len(keys), chunk):
        part = keys[s : s + chunk]
        acc.add(words_from_keys(part, acc.tensor), part)
    return acc.finish(projective, max_mem)


def census_of_words(l3: Level3, words, projective: bool, chunk: int = 1 << 18) -> K4Census:
    """Classify a store of S_4(3) bitsets given as (n, 4) word arrays."""
    words = np.asarray(words, dtype=np.uint64)
    acc = Accumulator(l3, dual_stride=0)
    for s in range(0, len(words), chunk):
        acc.add(words[s : s + chunk])
    return acc.finish(projective)


def row_fields(sp: VeldkampSpace, row) -> dict:
    """Split a signature row; sections merge H5* into H5 as the reference rows do."""
    T = len(sp.type_labels)
    secs = dict(zip(["D"] + sp.type_labels, row[7 : 8 + T]))
    merged = tuple(
        secs.get(lab, 0) + (secs.get(lab + "*", 0)) for lab in ["D", "H1", "H2", "H3", "H4", "H5"]
    )
    return {"points": row[0], "lines": row[1], "orders": tuple(row[2:7]), "sections": merged}


def _name_classes(sp: VeldkampSpace, classes: list[K4Class], projective: bool) -> None:
    ref = tables.K4_HYPERPLANES if projective else tables.K4_NONPROJECTIVE
    used = set()
    for n, c in enumerate(sorted(classes, key=lambda c: (-c.row[0], -c.row[1], -c.count))):
        f = row_fields(sp, c.row)
        cands = [
            r
            for r in ref
            if r.label not in used
            and (r.points, r.lines, r.orders, r.sections, r.count)
            == (f["points"], f["lines"], f["orders"], f["sections"], c.count)
        ]
        if len(cands) > 1:
            cands = [r for r in cands if set(r.vl) == set(c.vl)]
        if len(cands) == 1:
            c.label = cands[0].label
            used.add(c.label)
        else:
            c.label = f"?{n + 1}"
