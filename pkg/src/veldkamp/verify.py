"""Verification suites comparing computed censuses with the reference data in `tables`.

Each suite returns a list of `Check`s; `run_suite` prints one PASS/FAIL line
per check.  Expensive objects (the S_4(3) census, orbit partitions) are
cached on a `Context` so several suites can share them.
"""

from __future__ import annotations

import itertools
import os
import tempfile
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Optional

import networkx as nx
import numpy as np

from . import tables
from .binary import binary_copies, extension_census, hyperplane_extensions
from .blowup import blowup_masks
from .census import (
    Level3,
    census_sources,
    generate,
    refined_names,
    row_fields,
    run_census,
    word_ranks,
    words_are_hyperplanes,
    words_from_keys,
)
from .geometry import build
from .graphs import line_orbit_sweep, nauru_sweep, ovoid_sweep, reference
from .gf import dual_keys, ranks_and_kernels
from .hyperplanes import is_hyperplane, tensor_matrix
from .io import write_lines
from .lines import find_lines, projective_lines_fast
from .orbits import cross_check, generators, group_order, line_orbits, permute_masks
from .quadric import DualWeights, form_report, select_quadric, select_symplectic, weights_bfs
from .space import space


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")


def check(name: str, expected: Any, actual: Any) -> Check:
    ok = expected == actual
    detail = f"{actual}" if ok else f"expected {expected}, got {actual}"
    if len(detail) > 300:
        detail = detail[:297] + "..."
    return Check(name, ok, detail)


@dataclass
class Context:
    threads: Optional[int] = None
    max_mem: Optional[int] = None
    dual_stride: int = 1
    random_samples: int = 100_000
    seed: int = 0
    cache: dict = field(default_factory=dict)

    def space(self, q: int, k: int):
        return space(q, k, self.threads)

    @cached_property
    def l3(self) -> Level3:
        return Level3.from_space(self.space(3, 3))

    @cached_property
    def census(self):
        return run_census(self.l3, True, self.dual_stride, max_mem=self.max_mem)

    @cached_property
    def starred_census(self):
        return run_census(self.l3, False)

    @cached_property
    def line_orbits3(self):
        return line_orbits(self.space(3, 3))


# --- k = 2 ---------------------------------------------------------------------


def _ovoid_lines(sp):
    h2 = sp.type_labels.index("H2")
    return [i for i, m in enumerate(sp.lines.tolist()) if all(sp.types[x] == h2 for x in m)]


def suite_table1(ctx: Context) -> list[Check]:
    sp = ctx.space(3, 2)
    out = [check("S2(3) hyperplanes", (40, {"H1": 16, "H2": 24}), (sp.count, sp.type_counts()))]
    nonproj = np.flatnonzero(~sp.line_projective)
    members = sp.lines[nonproj]
    ovoids = set(np.flatnonzero(sp.types == sp.type_labels.index("H2")).tolist())
    flat = members.ravel().tolist()
    out.append(
        check(
            "non-projective lines partition the ovoids into quadruples",
            (6, True, True),
            (len(nonproj), sorted(flat) == sorted(ovoids), len(set(flat)) == len(flat)),
        )
    )
    return out


def suite_table2(ctx: Context) -> list[Check]:
    sp = ctx.space(3, 2)
    counts = sp.line_type_counts()
    expected = {r.label: r.count for r in tables.K2_LINES}
    fast = projective_lines_fast(sp.duals[sp.projective], 3)
    ids = np.flatnonzero(sp.projective)
    fast_set = {tuple(sorted(ids[r].tolist())) for r in fast}
    alg1 = {tuple(r) for r, p in zip(sp.lines.tolist(), sp.line_projective) if p}
    return [
        check("V(S2(3)) ordinary lines", 136, len(sp.lines)),
        check("line classes", expected, counts),
        check("projective lines", 130, int(sp.line_projective.sum())),
        check("projective-fast equals subset scan", True, fast_set == alg1),
    ]


def parallel_classes(member_sets: list[frozenset], universe: frozenset) -> list[tuple[int, ...]]:
    """All sets of pairwise disjoint lines covering the universe."""
    out = []
    n = len(member_sets)

    def grow(chosen, covered, start):
        if covered == universe:
            out.append(tuple(chosen))
            return
        for i in range(start, n):
            if not (member_sets[i] & covered):
                grow(chosen + [i], covered | member_sets[i], i + 1)

    grow([], frozenset(), 0)
    return out


def suite_table3(ctx: Context) -> list[Check]:
    sp = ctx.space(3, 2)
    lines = _ovoid_lines(sp)
    sets = [frozenset(sp.lines[i].tolist()) for i in lines]
    universe = frozenset().union(*sets)
    classes = parallel_classes(sets, universe)
    nonproj = tuple(j for j, i in enumerate(lines) if not sp.line_projective[i])
    # a grouping of all 24 lines into four parallel classes, one of them non-projective
    found = False
    for combo in itertools.combinations(classes, 4):
        used = [x for c in combo for x in c]
        if len(set(used)) == len(lines) and nonproj in combo:
            found = True
            break
    return [
        check("ovoidal lines", 24, len(lines)),
        check("each parallel class has six lines", True, all(len(c) == 6 for c in classes)),
        check("grouping into four partitions with the non-projective one", True, found),
    ]


# --- k = 3 ---------------------------------------------------------------------


def k3_hyperplane_rows(sp) -> dict[str, tuple]:
    out = {}
    counts = sp.type_counts()
    for lab, sig in sp.type_signatures.items():
        sec = dict(sig.section_census)
        out[lab] = (
            sig.point_count,
            sig.line_count,
            sig.order_histogram,
            (sec.get("D", 0), sec.get("H1", 0), sec.get("H2", 0)),
            tuple(sorted({t for t in sig.spread_line_types})),
            counts[lab],
        )
    return out


def suite_table4(ctx: Context) -> list[Check]:
    sp = ctx.space(3, 3)
    rows = k3_hyperplane_rows(sp)
    out = [check("S3(3) hyperplanes", 3424, sp.count)]
    for r in tables.K3_HYPERPLANES:
        exp = (r.points, r.lines, r.orders, r.sections, tuple(sorted(r.vl)), r.count)
        out.append(check(f"type {r.label}", exp, rows.get(r.label)))
    w = weights_bfs(sp)
    got = {lab: sorted(set(w[sp.types == i].tolist())) for i, lab in enumerate(sp.type_labels)}
    exp = {r.label: list(r.weight) if r.weight else [-1] for r in tables.K3_HYPERPLANES}
    out.append(check("weights by layering", exp, got))
    return out


def suite_table5(ctx: Context) -> list[Check]:
    sp = ctx.space(3, 3)
    counts = sp.line_type_counts()
    out = [
        check("projective lines", tables.K3_PROJECTIVE_LINES, int(sp.line_projective.sum())),
    ]
    exp = {r.label: r.count for r in tables.K3_LINES}
    got = {lab: counts.get(lab) for lab in exp}
    out.append(check("66 line classes", exp, got))
    allproj = np.all(sp.projective[sp.lines], axis=1)
    out.append(
        check(
            "non-projective lines with projective members",
            tables.K3_NONPROJECTIVE_PROJECTIVE_MEMBERS,
            int((~sp.line_projective & allproj).sum()),
        )
    )
    return out


def suite_table6(ctx: Context) -> list[Check]:
    sp = ctx.space(3, 3)
    counts = sp.line_type_counts()
    exp = {r.label: r.count for r in tables.K3_STARRED_OVOID_LINES}
    h5s = sp.type_labels.index("H5*")
    with_star = np.any(sp.types[sp.lines] == h5s, axis=1)
    return [
        check("lines through non-projective ovoids", exp, {lab: counts.get(lab) for lab in exp}),
        check("their total", tables.K3_LINES_WITH_STARRED_OVOIDS, int(with_star.sum())),
    ]


def suite_table7(ctx: Context) -> list[Check]:
    sp = ctx.space(3, 3)
    orb = ctx.line_orbits3
    cc = cross_check(sp.line_class, orb)
    proj_orbits = len(np.unique(orb.labels[sp.line_projective]))
    split = {sp.line_labels[c]: tuple(s) for c, s in cc["split_classes"].items()}
    proj_split = {lab: s for lab, s in split.items() if not lab.endswith("*")}
    return [
        check("no orbit meets two classes", {}, cc["mixed_orbits"]),
        check("projective line orbits", 69, proj_orbits),
        check("split projective classes", tables.K3_ORBIT_SPLITS, proj_split),
        check("orbit sizes divide the group order", True, bool(np.all(group_order(sp.variety) % orb.sizes == 0))),
    ]


def suite_table8(ctx: Context) -> list[Check]:
    sp3, sp2 = ctx.space(3, 3), ctx.space(2, 3)
    copies = binary_copies()
    ext = [extension_census(sp3, sp2, copies[i]) for i in (0, 21, 63)]
    e = ext[0]
    nonproj = e.nonprojective()
    hyp = hyperplane_extensions(sp3, sp2, copies[0])
    return [
        check("copies of S3(2)", 64, len(copies)),
        check("extendable binary line classes", tables.BINARY_EXTENSION_COUNT, len(e.extendable)),
        check("ternary targets", set(tables.BINARY_EXTENSION_TARGETS), e.ternary_labels()),
        check(
            "single non-projective extension reaches only 44*",
            (1, {"44*"}),
            (len(nonproj), {t for c in nonproj.values() for t in c}),
        ),
        check("same census in three copies", True, all(x.targets == e.targets for x in ext)),
        check(
            "hyperplane extensions",
            {"H1": {"H1"}, "H2": {"H2"}, "H3": {"H3"}, "H4": set(), "H5": {"H4"}},
            {b: set(c) for b, c in hyp.items()},
        ),
    ]


def suite_counts(ctx: Context) -> list[Check]:
    out = []
    for q, k, exp in [(3, 1, 4), (3, 2, 40), (3, 3, 3424), (2, 2, 15), (2, 3, 255)]:
        out.append(check(f"S{k}({q}) hyperplanes", exp, ctx.space(q, k).count))
    for q, k, exp in [(3, 2, 136), (2, 2, 35), (2, 3, 10795)]:
        out.append(check(f"V(S{k}({q})) lines", exp, len(ctx.space(q, k).lines)))
    sp2 = ctx.space(2, 3)
    out.append(
        check(
            "binary S3(2): all projective, 5 hyperplane and 41 line types",
            (True, True, 5, 41),
            (bool(sp2.projective.all()), bool(sp2.line_projective.all()), len(sp2.type_labels), len(sp2.line_labels)),
        )
    )
    return out


# --- k = 4 ---------------------------------------------------------------------


def suite_table9(ctx: Context) -> list[Check]:
    c = ctx.census
    sp = ctx.space(3, 3)
    exp = {r.label: r.count for r in tables.K4_HYPERPLANES}
    got = {x.label: x.count for x in c.classes}
    rows_ok = []
    for r in tables.K4_HYPERPLANES:
        x = c.by_label().get(r.label)
        if x is None:
            rows_ok.append(r.label)
            continue
        f = row_fields(sp, x.row)
        if (f["points"], f["lines"], f["orders"], f["sections"], set(x.vl)) != (
            r.points, r.lines, r.orders, r.sections, set(r.vl),
        ):
            rows_ok.append(r.label)
    identity = tables.K3_PROJECTIVE_LINES * 24 + 3280 * 4
    return [
        check("blow-ups", identity, c.total),
        check("distinct dual keys", tables.K4_PROJECTIVE_TOTAL, c.distinct),
        check("hyperplane axiom failures", 0, c.axiom_failures),
        check("dual round-trip mismatches", 0, c.dual_mismatches),
        check("43 types with their cardinalities", exp, got),
        check("rows disagreeing on points, lines, orders, sections or VL", [], rows_ok),
    ]


def suite_refinement(ctx: Context) -> list[Check]:
    c = ctx.census
    split = {x.label: tuple(sorted(n for _, n in x.subtypes)) for x in c.classes if len(x.subtypes) > 1}
    o43 = split.get("43")
    return [
        check("refined classes", 48, len(c.refined())),
        check("split types", set(tables.K4_SPLIT_TYPES), set(split)),
        check("type 43 subtypes", tables.K4_OVOID_SUBTYPES, o43),
    ]


def suite_weights(ctx: Context) -> list[Check]:
    c = ctx.census
    dw = DualWeights(4)
    ref = {r.label: r.weight for r in tables.K4_HYPERPLANES}
    got, exp = {}, {}
    for x in c.classes:
        names = refined_names(x)
        ws = {names[i]: dw.weights_of_keys([x.representatives[i][1]])[0] for i, _ in x.subtypes}
        got.update(ws)
        if len(ws) == 1:
            exp.update({k: ref[x.label][0] for k in ws})
        elif len(set(ref[x.label])) == 1:
            exp.update({k: ref[x.label][0] for k in ws})
        else:
            exp.update({n: w for n, w in zip(sorted(ws), ref[x.label])})
    sp = ctx.space(3, 3)
    d3 = DualWeights(3)
    pr = np.flatnonzero(sp.projective)
    agree = bool(np.array_equal(np.array(d3.weights_of_keys(dual_keys(sp.duals[pr]))), weights_bfs(sp)[pr]))
    return [
        check("k=3 layering agrees with dual sums", True, agree),
        check("k=4 representative weights", exp, got),
    ]


def suite_table10(ctx: Context) -> list[Check]:
    c = ctx.census
    q = select_quadric(c, ctx.l3)
    f = form_report(c, q)
    return [
        check("quadric types", set(tables.K4_QUADRIC_TYPES), set(q.types)),
        check("quadric total", (3**7 + 1) * (3**8 - 1) // 2, q.total),
        check("sources of each class agree", True, q.consistent),
        check("split form zero count", tables.K4_QUADRIC_TOTAL, f.zeros),
        check("split form zeros are unions of refined classes", True, f.classes_whole),
    ]


def suite_table11(ctx: Context) -> list[Check]:
    c = ctx.census
    q = select_quadric(c, ctx.l3)
    try:
        s = select_symplectic(c, q, ctx.space(3, 3))
        types, total = set(s.types), s.total
    except ValueError as e:
        types, total = str(e), None
    return [
        check("symplectic types", set(tables.K4_SYMPLECTIC_TYPES), types),
        check("symplectic total", (3 + 1) * (3**2 + 1) * (3**3 + 1) * (3**4 + 1), total),
    ]


def suite_table12(ctx: Context) -> list[Check]:
    c = ctx.starred_census
    sp = ctx.space(3, 3)
    lids, hids = census_sources(sp, False)
    words = np.concatenate([b.words for b in generate(sp, lids, hids, with_keys=False)])
    ranks, _ = word_ranks(words)
    return [
        check("blow-ups", 2268 * 24 + 144 * 4, c.total),
        check("distinct", tables.K4_NONPROJECTIVE_TOTAL, c.distinct),
        check("all of rank 16 (not projective)", True, bool(np.all(ranks == 16))),
        check("types", {r.label: r.count for r in tables.K4_NONPROJECTIVE}, {x.label: x.count for x in c.classes}),
    ]


# --- graphs and invariants -----------------------------------------------------


def suite_graphs(ctx: Context) -> list[Check]:
    sp = ctx.space(3, 3)
    v = sp.variety
    proj = sp.masks[sp.types == sp.type_labels.index("H5")]
    star = sp.masks[sp.types == sp.type_labels.index("H5*")]
    d = reference("dyck")
    dyck = (d.number_of_nodes(), d.number_of_edges(), nx.girth(d), nx.diameter(d), nx.is_bipartite(d))
    p = ovoid_sweep(v, proj)
    s = ovoid_sweep(v, star)
    n = nauru_sweep(v, star)
    by_orbit = line_orbit_sweep(sp, ctx.line_orbits3, "62")
    return [
        check("Dyck reference", (32, 48, 6, 5, True), dyck),
        Check(
            "projective pairs: Dyck or four cubes only",
            p.only("dyck", "four-cubes"),
            f"{dict(p.outcomes)} over {p.pairs} pairs; by orbit of the ovoidal line: {by_orbit}",
        ),
        check("non-projective pairs never Dyck", 0, s.outcomes.get("dyck", 0)),
        check("Nauru from opposite quadruples", (True, True), (n.pairs > 0, n.only("nauru"))),
    ]


def suite_invariants(ctx: Context) -> list[Check]:
    rng = np.random.default_rng(ctx.seed)
    out = []
    sp2, sp3 = ctx.space(3, 2), ctx.space(3, 3)
    masks, _ = blowup_masks(sp2.masks, sp2.lines, 3, 16)
    v3 = build(3, 3)
    out.append(check("axiom on every k=3 blow-up", True, all(is_hyperplane(v3, int(m)) for m in np.unique(masks))))
    lids, hids = census_sources(sp3, True)
    n = ctx.random_samples
    pick = rng.choice(lids, size=max(1, n // 24), replace=False)
    words, keys = [], []
    for b in generate(sp3, pick, rng.choice(hids, 25, replace=False)):
        words.append(b.words)
        keys.append(b.keys)
    words, keys = np.concatenate(words), np.concatenate(keys)
    sel = rng.choice(len(words), size=min(n, len(words)), replace=False)
    out.append(check(f"axiom on {len(sel)} random k=4 blow-ups", True, bool(words_are_hyperplanes(words[sel]).all())))
    few = sel[:2000]
    ranks, duals = word_ranks(words[few])
    out.append(check("rank dichotomy on sampled k=4 blow-ups", {15}, set(ranks.tolist())))
    out.append(
        check(
            "dual round-trip on sampled k=4 blow-ups",
            (True, True),
            (
                bool(np.all(dual_keys(duals).astype(np.uint32) == keys[few])),
                bool(np.all(words_from_keys(keys[few], build(3, 4).tensor) == words[few])),
            ),
        )
    )
    for sp in (sp2, sp3):
        r, _ = ranks_and_kernels([tensor_matrix(sp.variety, int(m)) for m in sp.masks], 3, 2**sp.k)
        out.append(check(f"rank dichotomy at k={sp.k}", True, set(r.tolist()) <= {2**sp.k - 1, 2**sp.k}))
    inv = True
    for g in generators(sp3.variety):
        img = sp3.indices(permute_masks(sp3.masks, g.point_map))
        inv &= bool(np.all(sp3.types[img] == sp3.types))
        lines = sp3.line_indices(img[sp3.lines])
        inv &= bool(np.all(sp3.line_class[lines] == sp3.line_class))
    out.append(check("signatures invariant under every generator", True, inv))
    out.append(check("thread count does not change line files", True, thread_determinism(sp3.masks)))
    return out


def thread_determinism(masks, q: int = 3) -> bool:
    blobs = []
    with tempfile.TemporaryDirectory() as tmp:
        for t in (1, 2):
            lines = find_lines(masks, q, t)
            path = os.path.join(tmp, f"l{t}")
            write_lines(path, q, 3, lines, np.ones(len(lines), bool))
            with open(path, "rb") as f:
                blobs.append(f.read())
    return blobs[0] == blobs[1]


SUITES: dict[str, Callable[[Context], list[Check]]] = {
    "table1": suite_table1,
    "table2": suite_table2,
    "table3": suite_table3,
    "table4": suite_table4,
    "table5": suite_table5,
    "table6": suite_table6,
    "table7": suite_table7,
    "table8": suite_table8,
    "table9": suite_table9,
    "refinement": suite_refinement,
    "table10": suite_table10,
    "table11": suite_table11,
    "table12": suite_table12,
    "weights": suite_weights,
    "graphs": suite_graphs,
    "counts": suite_counts,
    "invariants": suite_invariants,
}


def run_suite(name: str, ctx: Optional[Context] = None, echo: Callable[[str], None] = print) -> list[Check]:
    ctx = ctx or Context()
    checks = SUITES[name](ctx)
    for c in checks:
        echo(f"[{name}] {c.line()}")
    return checks
