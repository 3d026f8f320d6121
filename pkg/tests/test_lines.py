from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from veldkamp.gf import rank
from veldkamp.lines import find_lines, line_cores, line_projectivity, projective_lines_fast, sort_lines
from veldkamp.space import space


def lines_by_definition(masks, q, full):
    """Sets of q+1 hyperplanes covering the points with one common pairwise intersection."""
    H = [int(m) for m in masks]
    found = set()
    for a, b in itertools.combinations(range(len(H)), 2):
        core = H[a] & H[b]
        cand = [h for h in range(len(H)) if h not in (a, b) and H[h] & H[a] == core and H[h] & H[b] == core]
        for rest in itertools.combinations(cand, q - 1):
            fam = (a, b) + rest
            if any(H[x] & H[y] != core for x, y in itertools.combinations(fam, 2)):
                continue
            union = 0
            for x in fam:
                union |= H[x]
            if union == full:
                found.add(tuple(sorted(fam)))
    return found


@pytest.mark.parametrize("q,k,count", [(3, 2, 136), (2, 2, 35)])
def test_scan_matches_definition(q, k, count):
    sp = space(q, k)
    lines = find_lines(sp.masks, q, threads=1)
    assert {tuple(r) for r in lines.tolist()} == lines_by_definition(sp.masks, q, sp.variety.full)
    assert len(lines) == count


def test_binary_k3_line_count():
    assert len(space(2, 3).lines) == 10795


@pytest.mark.parametrize("q,k", [(3, 2), (2, 3)])
def test_thread_count_does_not_change_lines(q, k):
    sp = space(q, k)
    a = find_lines(sp.masks, q, threads=1)
    b = find_lines(sp.masks, q, threads=3)
    assert a.tobytes() == b.tobytes()


def test_members_share_the_core(sp3):
    lines = sp3.lines
    cores = line_cores(sp3.masks, lines)
    for x, y in itertools.combinations(range(4), 2):
        assert np.array_equal(sp3.masks[lines[:, x]] & sp3.masks[lines[:, y]], cores)
    # members partition the points off the core
    union = np.bitwise_or.reduce(sp3.masks[lines] & ~cores[:, None], axis=1)
    assert np.all(union == np.uint64(sp3.variety.full) & ~cores)


@pytest.mark.parametrize("q,k", [(3, 2), (3, 3), (2, 3)])
def test_fast_projective_lines_equal_scan(q, k):
    sp = space(q, k)
    ids = np.flatnonzero(sp.projective)
    fast = projective_lines_fast(sp.duals[ids], q)
    fast_set = {tuple(sorted(ids[r].tolist())) for r in fast}
    scan = {tuple(r) for r, p in zip(sp.lines.tolist(), sp.line_projective) if p}
    assert fast_set == scan


@given(st.integers(0, 10_000))
@settings(max_examples=50, deadline=None)
def test_line_projectivity_is_dual_collinearity(i):
    sp = space(3, 3)
    li = i * 89 % len(sp.lines)
    members = sp.lines[li]
    expected = bool(sp.projective[members].all()) and rank(sp.duals[members], 3) == 2
    assert bool(sp.line_projective[li]) == expected


def test_line_projectivity_binary():
    sp = space(2, 3)
    lp = line_projectivity(sp.duals, sp.projective, sp.lines, 2)
    assert lp.all()


def test_sort_lines_is_canonical():
    rows = np.array([[5, 1, 3, 2], [0, 4, 2, 1], [3, 2, 1, 5]])
    out = sort_lines(rows)
    assert out.tolist() == [[0, 1, 2, 4], [1, 2, 3, 5]]
