from __future__ import annotations

import math

import networkx as nx
import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from veldkamp.orbits import (
    DisjointSet,
    cross_check,
    generators,
    group_order,
    hyperplane_orbits,
    line_orbits,
    permute_mask,
    permute_masks,
)
from veldkamp.space import space


def closure(gens):
    """Every product of the generators, as point permutations."""
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = tuple(s[i] for i in g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def test_generators_generate_the_whole_stabilizer(sp2):
    v = sp2.variety
    group = closure([tuple(g.point_map.tolist()) for g in generators(v)])
    assert len(group) == group_order(v) == math.factorial(4) ** 2 * 2


def test_hyperplane_orbits_match_explicit_group(sp2):
    group = closure([tuple(g.point_map.tolist()) for g in generators(sp2.variety)])
    orb = hyperplane_orbits(sp2)
    for i, m in enumerate(sp2.masks.tolist()):
        images = {permute_mask(m, g) for g in group}
        ids = {sp2.index(x) for x in images}
        assert ids == set(orb.members(orb.labels[i]).tolist())


def test_generators_preserve_lines_and_hyperplanes(sp3):
    v = sp3.variety
    lines = set(v.line_masks)
    for g in generators(v):
        assert {permute_mask(m, g.point_map) for m in v.line_masks} == lines
        img = permute_masks(sp3.masks, g.point_map)
        assert np.array_equal(np.sort(img), sp3.masks)


def test_k3_orbits_refine_types(sp3):
    h = hyperplane_orbits(sp3)
    assert int(h.sizes.sum()) == sp3.count
    assert cross_check(sp3.types, h)["mixed_orbits"] == {}
    assert np.all(group_order(sp3.variety) % h.sizes == 0)


def test_binary_line_orbits_are_signature_classes():
    sp = space(2, 2)
    orb = line_orbits(sp)
    cc = cross_check(sp.line_class, orb)
    assert cc["mixed_orbits"] == {}
    assert int(orb.sizes.sum()) == len(sp.lines)


@given(st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)), max_size=60))
def test_disjoint_set_matches_connected_components(edges):
    ds = DisjointSet(range(31))
    g = nx.Graph()
    g.add_nodes_from(range(31))
    for a, b in edges:
        ds.union(a, b)
        g.add_edge(a, b)
    ours = sorted(sorted(x) for x in ds.groups())
    ref = sorted(sorted(c) for c in nx.connected_components(g))
    assert ours == ref
