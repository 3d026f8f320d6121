"""Dense linear algebra over GF(2) and GF(3).

Vectors and matrices are plain numpy integer arrays with entries in 0..q-1.
`rank` and `kernel_vector` are straightforward row reductions; the packed
variants below store each row as two bit planes and are what the bulk
pipelines call.
"""

from __future__ import annotations

import numpy as np

from . import _kernels

FIELDS = (2, 3)


def check_field(q: int) -> None:
    if q not in FIELDS:
        raise ValueError(f"unsupported field order {q}")


def inverse(a: int, q: int) -> int:
    check_field(q)
    a %= q
    if a == 0:
        raise ZeroDivisionError("0 has no inverse")
    # over GF(2) and GF(3) every unit is its own inverse
    return a


def normalize(v, q: int) -> np.ndarray:
    """Scale v so that its first nonzero coordinate is 1."""
    check_field(q)
    v = np.asarray(v, dtype=np.int64) % q
    nz = np.flatnonzero(v)
    if nz.size == 0:
        raise ValueError("zero vector has no projective representative")
    return (v * inverse(int(v[nz[0]]), q) % q).astype(np.int8)


def tensor_product(vectors, q: int) -> np.ndarray:
    """Kronecker product, first factor most significant."""
    check_field(q)
    out = np.ones(1, dtype=np.int64)
    for vec in vectors:
        vec = np.asarray(vec, dtype=np.int64) % q
        if not vec.any():
            raise ValueError("zero vector is not a projective point")
        out = np.outer(out, vec).ravel() % q
    return out.astype(np.int8)


def row_reduce(m, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with first-nonzero pivoting."""
    check_field(q)
    a = np.array(m, dtype=np.int64, copy=True) % q
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] * inverse(int(a[r, c]), q) % q
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % q
        pivots.append(c)
        r += 1
    return a.astype(np.int8), pivots


def rank(m, q: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(row_reduce(m, q)[1])


def kernel_vector(m, q: int) -> np.ndarray:
    """The normalized generator of a one-dimensional right kernel."""
    m = np.asarray(m)
    cols = m.shape[1]
    red, pivots = row_reduce(m, q)
    if len(pivots) != cols - 1:
        raise ValueError("kernel not one-dimensional")
    free = next(c for c in range(cols) if c not in pivots)
    v = np.zeros(cols, dtype=np.int64)
    v[free] = 1
    for i, c in enumerate(pivots):
        v[c] = -int(red[i, free])
    return normalize(v, q)


def pack_rows(m, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Bit-plane packing of a matrix with at most 64 columns."""
    m = np.asarray(m, dtype=np.int64) % q
    if m.ndim != 2 or m.shape[1] > 64:
        raise ValueError("packing needs a 2-d matrix with <= 64 columns")
    weights = np.uint64(1) << np.arange(m.shape[1], dtype=np.uint64)
    ones = ((m == 1).astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
    twos = ((m == 2).astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
    return ones, twos


def packed_rank(m, q: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    ones, twos = pack_rows(m, q)
    offsets = np.array([0, len(ones)], dtype=np.int64)
    return int(_kernels.packed_rank_batch(ones, twos, offsets, m.shape[1], q)[0])


def ranks_and_kernels(matrices, q: int, ncols: int) -> tuple[np.ndarray, np.ndarray]:
    """Batch rank plus normalized kernel vector (zero row when rank != ncols-1)."""
    check_field(q)
    mats = [np.asarray(x, dtype=np.int64).reshape(-1, ncols) for x in matrices]
    offsets = np.zeros(len(mats) + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(x) for x in mats])
    if offsets[-1]:
        ones, twos = pack_rows(np.concatenate(mats), q)
    else:
        ones = twos = np.zeros(0, dtype=np.uint64)
    return _kernels.packed_kernel_batch(ones, twos, offsets, ncols, q)


def dual_key(v) -> int:
    """Two bits per coordinate, coordinate i at bits 2i."""
    key = 0
    for i, x in enumerate(np.asarray(v, dtype=np.int64)):
        key |= int(x) << (2 * i)
    return key


def dual_keys(vs) -> np.ndarray:
    vs = np.asarray(vs, dtype=np.uint64)
    shifts = np.uint64(2) * np.arange(vs.shape[1], dtype=np.uint64)
    return (vs << shifts).sum(axis=1, dtype=np.uint64)


def key_to_vector(key: int, length: int) -> np.ndarray:
    return np.array([(key >> (2 * i)) & 3 for i in range(length)], dtype=np.int8)


def keys_to_vectors(keys, length: int) -> np.ndarray:
    keys = np.asarray(keys, dtype=np.uint64)
    shifts = np.uint64(2) * np.arange(length, dtype=np.uint64)
    return ((keys[:, None] >> shifts) & np.uint64(3)).astype(np.int8)


def normalize_rows(vs, q: int) -> np.ndarray:
    """Row-wise `normalize`; zero rows stay zero."""
    vs = np.asarray(vs, dtype=np.int64) % q
    lead_pos = np.argmax(vs != 0, axis=1)
    lead = vs[np.arange(len(vs)), lead_pos]
    # inverse of 1 is 1 and of 2 is 2
    return (vs * np.where(lead == 0, 1, lead)[:, None] % q).astype(np.int8)


def split_form(vs) -> np.ndarray:
    """Quadratic form sum_{b < ~b} (-1)^{|b|} c_b c_~b on tensors of 2^k coordinates, mod 3.

    It is the form attached to the k-th tensor power of the symplectic form
    x0 y1 - x1 y0 on each factor (symmetric for even k); its zero set is a
    hyperbolic quadric when k is even.
    """
    vs = np.asarray(vs, dtype=np.int64)
    n = vs.shape[-1]
    half = np.arange(n // 2)
    sign = np.where(np.array([bin(b).count("1") % 2 for b in half]) == 0, 1, -1)
    return ((vs[..., half] * vs[..., n - 1 - half]) * sign).sum(axis=-1) % 3
