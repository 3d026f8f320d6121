from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from veldkamp.geometry import PointSet, bits, build, mask_of
from veldkamp.gf import rank


@pytest.mark.parametrize("q,k", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (3, 4)])
def test_point_and_line_counts(q, k):
    v = build(q, k)
    n = q + 1
    assert v.point_count == n**k
    assert len(v.lines) == k * n ** (k - 1)
    assert all(len(line) == n for line in v.lines)
    # every point lies on exactly k lines, one per direction
    assert {len(x) for x in v.lines_through} == {k}
    for j, spread in enumerate(v.spreads):
        covered = np.sort(v.lines[spread].ravel())
        assert np.array_equal(covered, np.arange(v.point_count))


@pytest.mark.parametrize("q,k", [(2, 3), (3, 3)])
def test_lines_are_coordinate_lines(q, k):
    v = build(q, k)
    for line in v.lines:
        t = v.tuples[line]
        varying = np.flatnonzero((t != t[0]).any(axis=0))
        assert len(varying) == 1


@given(st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_index_and_tuple_are_inverse(t):
    v = build(3, 3)
    p = v.index(t)
    assert v.point_tuple(p) == tuple(t)
    # first coordinate is the most significant base-4 digit
    assert p == t[0] * 16 + t[1] * 4 + t[2]


@given(st.integers(0, 63), st.integers(0, 63))
def test_distance_equals_collinearity_distance(a, b):
    v = build(3, 3)
    assert v.distance(a, b) == v.collinearity_distances(a)[b]


@pytest.mark.parametrize("q,k", [(2, 3), (3, 2), (3, 3)])
def test_segre_embedding_spans_the_ambient_space(q, k):
    v = build(q, k)
    assert rank(v.tensor, q) == 2**k
    # points of one line span a projective line
    assert rank(v.tensor[v.lines[0]], q) == 2


def test_collinear_points_have_dependent_tensors():
    v = build(3, 3)
    for line in v.lines[:: len(v.lines) // 7]:
        for trio in itertools.combinations(line, 3):
            assert rank(v.tensor[list(trio)], 3) == 2


@given(st.integers(0, (1 << 64) - 1), st.integers(0, 2), st.integers(0, 3))
def test_sections_partition_the_points(mask, j, a):
    v = build(3, 3)
    secs = v.sections(mask, j)
    assert sum(bin(s).count("1") for s in secs) == bin(mask).count("1")
    pts = v.layer_points[j][a]
    assert v.section(mask, j, a) == mask_of([t for t, p in enumerate(pts) if mask >> int(p) & 1])


@given(st.sets(st.integers(0, 80)))
def test_point_set_round_trip(points):
    s = PointSet(mask_of(points), 81)
    assert set(s) == set(points) == set(bits(s.bits))
    assert PointSet.from_bytes(s.to_bytes(), 81) == s
    assert len(~s) == 81 - len(points)


def test_bad_arguments():
    with pytest.raises(ValueError):
        build(5, 2)
    with pytest.raises(ValueError):
        build(3, 5)
