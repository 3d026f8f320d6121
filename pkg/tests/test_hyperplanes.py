from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from veldkamp.blowup import brute_force
from veldkamp.geometry import build
from veldkamp.gf import normalize
from veldkamp.hyperplanes import (
    Hyperplane,
    HyperplaneError,
    is_hyperplane,
    order_histogram,
    projectivity,
    singular_hyperplane,
    singular_points,
    zero_locus,
)


def hyperplane_by_definition(v, s):
    """Meets every line in one point or all of them, from point tuples alone."""
    if s == 0 or s == v.full:
        return False
    members = {v.point_tuple(p) for p in range(v.point_count) if s >> p & 1}
    for p in range(v.point_count):
        t = v.point_tuple(p)
        for j in range(v.k):
            if t[j] != 0:
                continue
            line = [t[:j] + (a,) + t[j + 1 :] for a in range(v.n)]
            c = sum(x in members for x in line)
            if c not in (1, v.n):
                return False
    return True


@pytest.mark.parametrize("q,k,count", [(2, 1, 3), (3, 1, 4), (2, 2, 15), (3, 2, 40)])
def test_subset_scan_counts(q, k, count):
    assert len(brute_force(build(q, k))) == count


@given(st.integers(0, (1 << 16) - 1))
@settings(max_examples=300)
def test_axiom_matches_definition(s):
    v = build(3, 2)
    assert is_hyperplane(v, s) == hyperplane_by_definition(v, s)


def test_axiom_on_all_subset_scan_results():
    v = build(3, 2)
    assert all(hyperplane_by_definition(v, int(s)) for s in brute_force(v))


@pytest.mark.parametrize("q,k", [(2, 3), (3, 2), (3, 3)])
def test_singular_hyperplanes(q, k):
    v = build(q, k)
    for nucleus in (0, v.point_count - 1):
        h = singular_hyperplane(v, nucleus)
        assert len(h) == (q + 1) ** k - q**k
        assert h.deep_points >> nucleus & 1
        assert h.projective
        assert h.points == singular_points(v, nucleus)


@pytest.mark.parametrize("k", [2, 3, 4])
@given(data=st.data())
@settings(max_examples=25, deadline=None)
def test_zero_loci_are_projective_hyperplanes(k, data):
    v = build(3, k)
    d = data.draw(arrays(np.int64, 2**k, elements=st.integers(0, 2)).filter(lambda x: x.any()))
    s = zero_locus(v, d)
    assert is_hyperplane(v, s)
    if k <= 3:
        proj, dual = projectivity(v, s)
        assert proj
        assert np.array_equal(dual, normalize(d, 3))


@given(st.integers(0, 39))
def test_order_histogram_counts(i):
    v = build(3, 2)
    s = int(brute_force(v)[i])
    hist = order_histogram(v, s)
    assert sum(hist) == bin(s).count("1")
    assert sum(t * n for t, n in enumerate(hist)) == v.n * len(v.full_lines(s))


def test_from_points_rejects_non_hyperplanes():
    v = build(3, 2)
    with pytest.raises(HyperplaneError):
        Hyperplane.from_points(v, 1)
    assert not is_hyperplane(v, 0) and not is_hyperplane(v, v.full)
