from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from veldkamp.blowup import (
    blow_up_ordinary,
    blow_up_trivial,
    blowup_duals_ordinary,
    blowup_duals_trivial,
    blowup_masks,
    brute_force,
    permutations,
    project,
)
from veldkamp.census import generate, words_from_keys
from veldkamp.geometry import build
from veldkamp.gf import normalize_rows
from veldkamp.hyperplanes import is_hyperplane, projectivity_many
from veldkamp.space import space


@pytest.mark.parametrize("q", [2, 3])
def test_blowup_of_s1_equals_subset_scan_of_s2(q):
    low = space(q, 1)
    lines = low.lines if len(low.lines) else np.zeros((0, q + 1), np.int64)
    masks, _ = blowup_masks(low.masks, lines, q, q + 1)
    assert np.array_equal(np.unique(masks), brute_force(build(q, 2)))


@pytest.mark.parametrize("q,count", [(2, 255), (3, 3424)])
def test_blowup_of_s2_gives_distinct_hyperplanes(q, count):
    low = space(q, 2)
    masks, prov = blowup_masks(low.masks, low.lines, q, low.variety.point_count)
    assert len(masks) == len(np.unique(masks)) == count
    v = build(q, 3)
    assert all(is_hyperplane(v, int(m)) for m in masks)
    assert len(prov) == len(masks)


@given(st.integers(0, 135), st.integers(0, 23))
def test_scalar_and_vector_blowups_agree(li, pi):
    sp = space(3, 2)
    members = sp.masks[sp.lines[li]]
    perm = permutations(4)[pi]
    m = blow_up_ordinary(members, perm, 16)
    masks, prov = blowup_masks(sp.masks, sp.lines[li : li + 1], 3, 16, hyperplane_ids=[])
    assert m == int(masks[pi])
    assert project(m, 16, 4) == [int(members[p]) for p in perm]


def test_trivial_blowups():
    sp = space(3, 2)
    h = int(sp.masks[5])
    for j in range(4):
        m = blow_up_trivial(h, j, 16, 4)
        assert project(m, 16, 4) == [0xFFFF if i == j else h for i in range(4)]
        assert is_hyperplane(build(3, 3), m)


def test_inconsistent_members_rejected():
    with pytest.raises(ValueError):
        blow_up_ordinary([0b0011, 0b0101, 0b1001, 0b1111], (0, 1, 2, 3), 4)


def test_blowup_duals_match_rank_test_at_k3():
    sp = space(3, 2)
    pl = sp.lines[sp.line_projective]
    v3 = build(3, 3)
    for pi, perm in enumerate(permutations(4)):
        masks, _ = blowup_masks(sp.masks, pl, 3, 16, hyperplane_ids=[])
        proj, duals = projectivity_many(v3, masks[pi * len(pl) : (pi + 1) * len(pl)])
        assert proj.all()
        got = normalize_rows(blowup_duals_ordinary(sp.duals[pl], perm), 3)
        assert np.array_equal(got, duals)
    for j in range(4):
        masks = [blow_up_trivial(int(h), j, 16, 4) for h in sp.masks]
        proj, duals = projectivity_many(v3, masks)
        assert np.array_equal(normalize_rows(blowup_duals_trivial(sp.duals, j), 3), duals)


def test_k4_keys_describe_the_blown_up_words(sp3):
    rng = np.random.default_rng(7)
    lids = rng.choice(np.flatnonzero(sp3.line_projective), 40, replace=False)
    hids = rng.choice(np.flatnonzero(sp3.projective), 10, replace=False)
    tensor = build(3, 4).tensor
    n = 0
    for b in generate(sp3, lids, hids):
        assert np.array_equal(words_from_keys(b.keys, tensor), b.words)
        n += len(b.words)
    assert n == 40 * 24 + 10 * 4
