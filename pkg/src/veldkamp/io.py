"""Binary hyperplane and line files, provenance sidecars and TSV reports.

Hyperplane file: b"SVHY", version, q, k, flags, count (u64 LE), records.
Flag bit 0 marks a projective-only store, bit 1 dual-key records.  Bitset
records take ceil(points / 8) bytes with point 0 in the lowest bit of the
first byte; dual-key records pack 2 bits per coordinate (coordinate 0 in
the lowest bits) into whole bytes.  Records are sorted as byte strings.

Line file: b"SVLN", version, q, k, flags, count, then per record q + 1
member indices (u64 LE, strictly increasing) into the companion hyperplane
file and one projectivity byte; records sorted lexicographically.
"""

from __future__ import annotations

import csv
import struct
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

VERSION = 1
HYP_MAGIC = b"SVHY"
LINE_MAGIC = b"SVLN"
PROJECTIVE_ONLY = 1
DUAL_KEYS = 2
LINES_FAST = 1
LINES_NONPROJECTIVE_MEMBERS = 2
_HEADER = struct.Struct("<4sBBBBQ")

PROVENANCE_DTYPE = np.dtype([("kind", "u1"), ("source", "<u4"), ("arrangement", "u1")])


class FormatError(ValueError):
    pass


def record_width(q: int, k: int, dual: bool) -> int:
    if dual:
        return (2 * 2**k + 7) // 8
    return ((q + 1) ** k + 7) // 8


def _byte_order(records: np.ndarray) -> np.ndarray:
    """Stable permutation sorting fixed-width records as byte strings."""
    n, width = records.shape
    if width == 0:
        return np.arange(n)
    # big-endian 8-byte columns compare like the bytes they hold
    words = (width + 7) // 8
    pad = np.zeros((n, words * 8), dtype=np.uint8)
    pad[:, :width] = records
    cols = pad.view(">u8").astype(np.uint64)
    return np.lexsort(cols.T[::-1])


def masks_to_records(masks, width: int) -> np.ndarray:
    """uint64 bitsets (one word) or (n, words) arrays -> (n, width) bytes."""
    m = np.asarray(masks, dtype="<u8")
    if m.ndim == 1:
        m = m[:, None]
    raw = np.ascontiguousarray(m).view(np.uint8).reshape(len(m), 8 * m.shape[1])
    if raw.shape[1] < width:
        raise ValueError("bitsets narrower than the record width")
    return raw[:, :width].copy()


def records_to_masks(records: np.ndarray) -> np.ndarray:
    """(n, width) bytes -> uint64 (width <= 8) or (n, words) uint64."""
    n, width = records.shape
    words = (width + 7) // 8
    pad = np.zeros((n, words * 8), dtype=np.uint8)
    pad[:, :width] = records
    out = pad.view("<u8").astype(np.uint64)
    return out[:, 0] if words == 1 else out


@dataclass
class HyperplaneFile:
    q: int
    k: int
    flags: int
    records: np.ndarray  # (count, width) uint8, sorted

    @property
    def count(self) -> int:
        return len(self.records)

    @property
    def projective_only(self) -> bool:
        return bool(self.flags & PROJECTIVE_ONLY)

    @property
    def dual(self) -> bool:
        return bool(self.flags & DUAL_KEYS)

    def masks(self) -> np.ndarray:
        if self.dual:
            raise FormatError("store holds dual keys, not bitsets")
        return records_to_masks(self.records)

    def keys(self) -> np.ndarray:
        if not self.dual:
            raise FormatError("store holds bitsets, not dual keys")
        return records_to_masks(self.records)


def write_hyperplanes(
    path, q: int, k: int, values, projective_only: bool = False, dual: bool = False
) -> np.ndarray:
    """Write a store and return the permutation taking input order to file order."""
    width = record_width(q, k, dual)
    rec = masks_to_records(values, width)
    order = _byte_order(rec)
    rec = rec[order]
    if len(rec) > 1 and not np.all(np.any(rec[1:] != rec[:-1], axis=1)):
        raise ValueError("duplicate hyperplane records")
    flags = (PROJECTIVE_ONLY if projective_only else 0) | (DUAL_KEYS if dual else 0)
    with open(path, "wb") as f:
        f.write(_HEADER.pack(HYP_MAGIC, VERSION, q, k, flags, len(rec)))
        f.write(rec.tobytes())
    return order


def _read_header(f, magic: bytes):
    head = f.read(_HEADER.size)
    if len(head) != _HEADER.size:
        raise FormatError("truncated header")
    m, ver, q, k, flags, count = _HEADER.unpack(head)
    if m != magic:
        raise FormatError(f"bad magic {m!r}")
    if ver != VERSION:
        raise FormatError(f"unsupported version {ver}")
    return q, k, flags, count


def read_hyperplanes(path) -> HyperplaneFile:
    with open(path, "rb") as f:
        q, k, flags, count = _read_header(f, HYP_MAGIC)
        width = record_width(q, k, bool(flags & DUAL_KEYS))
        data = np.frombuffer(f.read(), dtype=np.uint8)
    if len(data) != count * width:
        raise FormatError("record section does not match the header count")
    return HyperplaneFile(q, k, flags, data.reshape(count, width).copy())


@dataclass
class LineFile:
    q: int
    k: int
    flags: int
    members: np.ndarray  # (count, q + 1) int64
    projective: np.ndarray  # (count,) bool

    @property
    def count(self) -> int:
        return len(self.members)


def write_lines(path, q: int, k: int, members, projective, flags: int = 0) -> np.ndarray:
    m = np.sort(np.asarray(members, dtype=np.int64), axis=1)
    if m.shape[1] != q + 1:
        raise ValueError("lines must have q + 1 members")
    if len(m) and not np.all(m[:, 1:] > m[:, :-1]):
        raise ValueError("line members must be distinct")
    order = np.lexsort(m.T[::-1])
    m = m[order]
    p = np.asarray(projective, dtype=np.uint8)[order]
    rec = np.zeros((len(m), 8 * (q + 1) + 1), dtype=np.uint8)
    rec[:, :-1] = np.ascontiguousarray(m.astype("<u8")).view(np.uint8).reshape(len(m), 8 * (q + 1))
    rec[:, -1] = p
    with open(path, "wb") as f:
        f.write(_HEADER.pack(LINE_MAGIC, VERSION, q, k, flags, len(m)))
        f.write(rec.tobytes())
    return order


def read_lines(path) -> LineFile:
    with open(path, "rb") as f:
        q, k, flags, count = _read_header(f, LINE_MAGIC)
        width = 8 * (q + 1) + 1
        data = np.frombuffer(f.read(), dtype=np.uint8)
    if len(data) != count * width:
        raise FormatError("record section does not match the header count")
    rec = data.reshape(count, width)
    members = np.ascontiguousarray(rec[:, :-1]).view("<u8").astype(np.int64).reshape(count, q + 1)
    return LineFile(q, k, flags, members, rec[:, -1].astype(bool))


def provenance_path(path) -> str:
    return str(path) + ".prov.npy"


def write_provenance(path, rows) -> None:
    """rows: (n, 3) integers (kind, source, arrangement) in file order."""
    rows = np.asarray(rows)
    out = np.zeros(len(rows), dtype=PROVENANCE_DTYPE)
    out["kind"], out["source"], out["arrangement"] = rows[:, 0], rows[:, 1], rows[:, 2]
    np.save(provenance_path(path), out)


def read_provenance(path) -> np.ndarray:
    return np.load(provenance_path(path))


def check_compatible(a, b) -> None:
    if (a.q, a.k) != (b.q, b.k):
        raise FormatError("inputs describe different varieties")


def write_tsv(path: Optional[str], header: Sequence[str], rows) -> None:
    f = open(path, "w", newline="", encoding="utf-8") if path else sys.stdout
    try:
        w = csv.writer(f, delimiter="\t", lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(r)
    finally:
        if path:
            f.close()
