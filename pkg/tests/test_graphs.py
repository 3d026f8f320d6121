from __future__ import annotations

import networkx as nx
import numpy as np
import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from veldkamp.geometry import build, mask_of
from veldkamp.graphs import (
    classify_graph,
    collinearity_graph,
    disjoint_pairs,
    generalized_petersen,
    invariants,
    is_isomorphic,
    opposite,
    reference,
)


def automorphisms(g):
    return sum(1 for _ in GraphMatcher(g, g).isomorphisms_iter())


def test_dyck_reference():
    g = reference("dyck")
    assert (g.number_of_nodes(), g.number_of_edges()) == (32, 48)
    assert {d for _, d in g.degree()} == {3}
    assert nx.girth(g) == 6 and nx.is_bipartite(g) and nx.diameter(g) == 5
    assert automorphisms(g) == 192


def test_nauru_reference_matches_lcf_description():
    g = reference("nauru")
    assert nx.is_isomorphic(g, nx.LCF_graph(24, [5, -9, 7, -7, 9, -5], 4))
    assert nx.girth(g) == 6
    assert automorphisms(g) == 144


def test_four_cubes_reference():
    g = reference("four-cubes")
    comps = [g.subgraph(c) for c in nx.connected_components(g)]
    assert len(comps) == 4
    assert all(nx.is_isomorphic(c, nx.hypercube_graph(3)) for c in comps)


def test_classify_graph():
    assert classify_graph(reference("dyck")) == "dyck"
    assert classify_graph(generalized_petersen(12, 5)) == "nauru"
    assert classify_graph(nx.petersen_graph()) == "other"
    # a cubic bipartite graph of girth 6 on 32 vertices that is not the Dyck graph
    assert not is_isomorphic(nx.disjoint_union(nx.heawood_graph(), nx.heawood_graph()), "dyck")
    with pytest.raises(ValueError):
        reference("petersen")


def test_collinearity_graph_of_whole_variety():
    v = build(3, 2)
    g = collinearity_graph(v, v.full)
    assert g.number_of_edges() == len(v.lines) * 6
    assert {d for _, d in g.degree()} == {6}
    assert invariants(g)[0] == 16


def test_collinearity_matches_distance_one():
    v = build(3, 3)
    rng = np.random.default_rng(5)
    pts = rng.choice(64, 20, replace=False).tolist()
    g = collinearity_graph(v, mask_of(pts))
    for a in pts:
        for b in pts:
            if a < b:
                assert g.has_edge(a, b) == (v.distance(a, b) == 1)


def test_disjoint_pairs():
    m = np.array([0b0011, 0b1100, 0b0110, 0b1000], dtype=np.uint64)
    assert disjoint_pairs(m) == [(0, 1), (0, 3), (2, 3)]


def test_opposite_points():
    v = build(3, 3)
    quad = [v.index((a, a, a)) for a in range(4)]
    assert opposite(v, quad)
    assert not opposite(v, quad[:2] + [v.index((0, 1, 1))])
