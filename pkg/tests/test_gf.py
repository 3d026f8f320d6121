from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from veldkamp import gf


def span_size(m, q):
    """Number of vectors in the row space, by listing every combination."""
    m = np.asarray(m, dtype=np.int64)
    seen = set()
    for coeffs in itertools.product(range(q), repeat=len(m)):
        seen.add(tuple((np.asarray(coeffs) @ m) % q))
    return len(seen)


def matrices(q, max_rows=5, max_cols=6):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda s: arrays(np.int64, s, elements=st.integers(0, q - 1))
    )


@pytest.mark.parametrize("q", [2, 3])
@given(data=st.data())
@settings(max_examples=60, deadline=None)
def test_rank_matches_row_space_size(q, data):
    m = data.draw(matrices(q))
    r = gf.rank(m, q)
    assert q**r == span_size(m, q)
    assert gf.packed_rank(m, q) == r


@pytest.mark.parametrize("q", [2, 3])
@given(data=st.data())
@settings(max_examples=60, deadline=None)
def test_batch_kernel_is_annihilating_and_normalized(q, data):
    m = data.draw(matrices(q, max_rows=7, max_cols=5))
    ranks, kers = gf.ranks_and_kernels([m], q, m.shape[1])
    assert ranks[0] == gf.rank(m, q)
    if ranks[0] == m.shape[1] - 1:
        v = kers[0].astype(np.int64)
        assert not np.any((m @ v) % q)
        assert v[np.flatnonzero(v)[0]] == 1
        assert np.array_equal(v, gf.kernel_vector(m, q))
    else:
        assert not kers[0].any()


def test_kernel_vector_rejects_wide_kernel():
    with pytest.raises(ValueError):
        gf.kernel_vector(np.zeros((1, 3), dtype=np.int64), 3)


@given(arrays(np.int64, 8, elements=st.integers(0, 2)).filter(lambda v: v.any()), st.integers(1, 2))
def test_normalize_is_scale_invariant(v, c):
    a = gf.normalize(v, 3)
    assert a[np.flatnonzero(a)[0]] == 1
    assert np.array_equal(a, gf.normalize(c * v, 3))
    assert np.array_equal(gf.normalize_rows(np.stack([v, c * v]), 3), np.stack([a, a]))


def test_normalize_rejects_zero_and_bad_field():
    with pytest.raises(ValueError):
        gf.normalize([0, 0], 3)
    with pytest.raises(ValueError):
        gf.normalize([1, 0], 5)
    with pytest.raises(ZeroDivisionError):
        gf.inverse(0, 3)


@given(arrays(np.int64, (5, 16), elements=st.integers(0, 2)))
def test_dual_key_round_trip(vs):
    keys = gf.dual_keys(vs)
    assert [gf.dual_key(v) for v in vs] == keys.tolist()
    assert np.array_equal(gf.keys_to_vectors(keys, 16), vs)
    assert np.array_equal(gf.key_to_vector(int(keys[0]), 16), vs[0])


def test_tensor_product_first_factor_most_significant():
    t = gf.tensor_product([[1, 2], [0, 1]], 3)
    assert t.tolist() == [0, 1, 0, 2]
    with pytest.raises(ValueError):
        gf.tensor_product([[0, 0]], 3)


def projective_points(n, q=3):
    pts = []
    for v in itertools.product(range(q), repeat=n):
        v = np.array(v)
        if v.any() and v[np.flatnonzero(v)[0]] == 1:
            pts.append(v)
    return np.array(pts)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_split_form_zero_count_is_hyperbolic(n):
    # Q+(n-1, 3) has (3^m - 1)(3^(m-1) + 1)/2 points, m = n/2
    m = n // 2
    zeros = int((gf.split_form(projective_points(n)) == 0).sum())
    assert zeros == (3**m - 1) * (3 ** (m - 1) + 1) // 2
