"""Compiled inner loops: GF(3)/GF(2) packed elimination and the pair scan."""

from __future__ import annotations

import numpy as np
from numba import njit


# A row over GF(q) is stored as two bit planes: `ones` marks entries equal to 1,
# `twos` marks entries equal to 2 (always empty for q = 2).


@njit(cache=True, nogil=True)
def _add3(a1, a2, b1, b2):
    az = ~(a1 | a2)
    bz = ~(b1 | b2)
    r1 = (a1 & bz) | (b1 & az) | (a2 & b2)
    r2 = (a2 & bz) | (b2 & az) | (a1 & b1)
    return r1, r2


@njit(cache=True, nogil=True)
def packed_rref(ones, twos, ncols, q):
    """Reduce rows in place; returns (rank, pivot columns)."""
    nrows = ones.shape[0]
    pivots = np.empty(ncols, np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        bit = np.uint64(1) << np.uint64(c)
        p = -1
        for i in range(r, nrows):
            if (ones[i] | twos[i]) & bit:
                p = i
                break
        if p < 0:
            continue
        ones[r], ones[p] = ones[p], ones[r]
        twos[r], twos[p] = twos[p], twos[r]
        if twos[r] & bit:
            ones[r], twos[r] = twos[r], ones[r]
        for i in range(nrows):
            if i == r:
                continue
            if q == 2:
                if ones[i] & bit:
                    ones[i] ^= ones[r]
            elif ones[i] & bit:
                # row_i - row_r
                ones[i], twos[i] = _add3(ones[i], twos[i], twos[r], ones[r])
            elif twos[i] & bit:
                ones[i], twos[i] = _add3(ones[i], twos[i], ones[r], twos[r])
        pivots[r] = c
        r += 1
    return r, pivots[:r]


@njit(cache=True, nogil=True)
def packed_rank_batch(ones, twos, offsets, ncols, q):
    """Rank of every matrix; matrix m owns rows offsets[m]:offsets[m+1]."""
    n = offsets.shape[0] - 1
    out = np.empty(n, np.int64)
    for m in range(n):
        a = ones[offsets[m]:offsets[m + 1]].copy()
        b = twos[offsets[m]:offsets[m + 1]].copy()
        out[m] = packed_rref(a, b, ncols, q)[0]
    return out


@njit(cache=True, nogil=True)
def packed_kernel_batch(ones, twos, offsets, ncols, q):
    """Rank plus the normalized kernel vector when the kernel is a line."""
    n = offsets.shape[0] - 1
    ranks = np.empty(n, np.int64)
    kern = np.zeros((n, ncols), np.int8)
    for m in range(n):
        a = ones[offsets[m]:offsets[m + 1]].copy()
        b = twos[offsets[m]:offsets[m + 1]].copy()
        r, piv = packed_rref(a, b, ncols, q)
        ranks[m] = r
        if r != ncols - 1:
            continue
        free = -1
        j = 0
        for c in range(ncols):
            if j < r and piv[j] == c:
                j += 1
            else:
                free = c
                break
        fb = np.uint64(1) << np.uint64(free)
        kern[m, free] = 1
        for i in range(r):
            if a[i] & fb:
                kern[m, piv[i]] = q - 1
            elif b[i] & fb:
                kern[m, piv[i]] = 1
        lead = 0
        for c in range(ncols):
            if kern[m, c] != 0:
                lead = kern[m, c]
                break
        if lead == 2:
            for c in range(ncols):
                kern[m, c] = (kern[m, c] * 2) % 3
    return ranks, kern


@njit(cache=True, nogil=True)
def _push(buf, n, row):
    if n == buf.shape[0]:
        grown = np.empty((2 * buf.shape[0], buf.shape[1]), buf.dtype)
        grown[:n] = buf
        buf = grown
    for t in range(row.shape[0]):
        buf[n, t] = row[t]
    return buf


@njit(cache=True, nogil=True)
def scan_lines(H, q, start, stop):
    """Lines whose two smallest members i < j have start <= i < stop.

    For every pair the candidates are the later hyperplanes h with
    h & H[i] == h & H[j] == H[i] & H[j]; the line is completed from them.
    """
    N = H.shape[0]
    width = q + 1
    buf = np.empty((1024, width), np.int64)
    n = 0
    cand = np.empty(N, np.int64)
    row = np.empty(width, np.int64)
    for i in range(start, stop):
        hi = H[i]
        for j in range(i + 1, N):
            hj = H[j]
            core = hi & hj
            nc = 0
            for h in range(j + 1, N):
                x = H[h]
                if (x & hi) == core and (x & hj) == core:
                    cand[nc] = h
                    nc += 1
            if q == 2:
                for a in range(nc):
                    row[0] = i
                    row[1] = j
                    row[2] = cand[a]
                    buf = _push(buf, n, row)
                    n += 1
            else:
                for a in range(nc):
                    xa = H[cand[a]]
                    for b in range(a + 1, nc):
                        if (xa & H[cand[b]]) == core:
                            row[0] = i
                            row[1] = j
                            row[2] = cand[a]
                            row[3] = cand[b]
                            buf = _push(buf, n, row)
                            n += 1
    return buf[:n].copy()


@njit(cache=True, nogil=True)
def candidate_histogram(H, start, stop, maxc):
    """hist[c] = number of pairs (i < j) with exactly c third members."""
    N = H.shape[0]
    hist = np.zeros(maxc + 1, np.int64)
    for i in range(start, stop):
        hi = H[i]
        for j in range(i + 1, N):
            hj = H[j]
            core = hi & hj
            nc = 0
            for h in range(N):
                if h == i or h == j:
                    continue
                x = H[h]
                if (x & hi) == core and (x & hj) == core:
                    nc += 1
            hist[min(nc, maxc)] += 1
    return hist
