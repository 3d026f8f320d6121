"""Collinearity graphs of ovoid unions in S_3(3).

Disjoint pairs of projective ovoids give the Dyck graph or four disjoint
cubes; disjoint pairs of non-projective ovoids never give the Dyck graph;
the symmetric difference of two non-projective ovoids meeting in four
mutually opposite points gives the Nauru graph GP(12,5).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import networkx as nx
import numpy as np

from .geometry import SegreVariety, bits

REFERENCES = ("dyck", "four-cubes", "nauru")


def collinearity_graph(v: SegreVariety, mask: int) -> nx.Graph:
    pts = np.array(bits(mask), dtype=np.int64)
    t = v.tuples[pts]
    differ = (t[:, None, :] != t[None, :, :]).sum(axis=2)
    ii, jj = np.nonzero(np.triu(differ == 1))
    g = nx.Graph()
    g.add_nodes_from(pts.tolist())
    g.add_edges_from(zip(pts[ii].tolist(), pts[jj].tolist()))
    return g


def generalized_petersen(n: int, k: int) -> nx.Graph:
    g = nx.Graph()
    for i in range(n):
        g.add_edge(("u", i), ("u", (i + 1) % n))
        g.add_edge(("u", i), ("v", i))
        g.add_edge(("v", i), ("v", (i + k) % n))
    return g


@lru_cache(maxsize=None)
def reference(name: str) -> nx.Graph:
    if name == "dyck":
        return nx.LCF_graph(32, [5, -5, 13, -13], 8)
    if name == "four-cubes":
        return nx.disjoint_union_all([nx.hypercube_graph(3) for _ in range(4)])
    if name == "nauru":
        return generalized_petersen(12, 5)
    raise ValueError(f"unknown reference graph {name!r}")


def invariants(g: nx.Graph) -> tuple:
    """Cheap isomorphism screen: order, size, degrees, components, bipartite, girth, diameter."""
    comps = sorted(len(c) for c in nx.connected_components(g))
    diam = max(nx.diameter(g.subgraph(c)) for c in nx.connected_components(g)) if len(g) else 0
    return (
        g.number_of_nodes(),
        g.number_of_edges(),
        tuple(sorted(d for _, d in g.degree())),
        tuple(comps),
        nx.is_bipartite(g),
        nx.girth(g),
        diam,
    )


@lru_cache(maxsize=None)
def reference_invariants(name: str) -> tuple:
    return invariants(reference(name))


def is_isomorphic(g: nx.Graph, name: str, screen: tuple | None = None) -> bool:
    screen = invariants(g) if screen is None else screen
    if screen != reference_invariants(name):
        return False
    return nx.is_isomorphic(g, reference(name))


@dataclass
class SweepReport:
    pairs: int
    outcomes: Counter = field(default_factory=Counter)

    def only(self, *names: str) -> bool:
        return set(self.outcomes) <= set(names)


def classify_graph(g: nx.Graph) -> str:
    screen = invariants(g)
    for name in REFERENCES:
        if is_isomorphic(g, name, screen):
            return name
    return "other"


def disjoint_pairs(masks) -> list[tuple[int, int]]:
    masks = np.asarray(masks, dtype=np.uint64)
    out = []
    for i in range(len(masks)):
        js = np.flatnonzero((masks[i + 1 :] & masks[i]) == 0) + i + 1
        out.extend((i, int(j)) for j in js)
    return out


def ovoid_sweep(v: SegreVariety, ovoids) -> SweepReport:
    """Classify the union graph of every disjoint pair of ovoids."""
    ovoids = np.asarray(ovoids, dtype=np.uint64)
    pairs = disjoint_pairs(ovoids)
    rep = SweepReport(len(pairs))
    for i, j in pairs:
        g = collinearity_graph(v, int(ovoids[i] | ovoids[j]))
        rep.outcomes[classify_graph(g)] += 1
    return rep


def opposite(v: SegreVariety, points) -> bool:
    return all(v.distance(a, b) == v.k for a, b in itertools.combinations(points, 2))


def nauru_sweep(v: SegreVariety, ovoids) -> SweepReport:
    """Symmetric differences of ovoid pairs meeting in four mutually opposite points."""
    ovoids = np.asarray(ovoids, dtype=np.uint64)
    rep = SweepReport(0)
    for i in range(len(ovoids)):
        rest = ovoids[i + 1 :]
        meet = np.bitwise_count(rest & ovoids[i])
        for j in np.flatnonzero(meet == 4) + i + 1:
            common = bits(int(ovoids[i] & ovoids[j]))
            if not opposite(v, common):
                continue
            rep.pairs += 1
            g = collinearity_graph(v, int(ovoids[i] ^ ovoids[j]))
            rep.outcomes[classify_graph(g)] += 1
    return rep


def line_orbit_sweep(sp, orbits, line_label: str) -> dict[int, Counter]:
    """Union-graph outcomes of member pairs of the lines of one class, by orbit size."""
    cls = sp.line_labels.index(line_label)
    out: dict[int, Counter] = {}
    for li in np.flatnonzero(sp.line_class == cls):
        size = int(orbits.sizes[orbits.labels[li]])
        for a, b in itertools.combinations(sp.lines[li].tolist(), 2):
            g = collinearity_graph(sp.variety, int(sp.masks[a] | sp.masks[b]))
            out.setdefault(size, Counter())[classify_graph(g)] += 1
    return {k: dict(v) for k, v in sorted(out.items())}
