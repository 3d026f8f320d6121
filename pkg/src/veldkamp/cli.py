"""Command-line pipeline over hyperplane (.svh) and line (.svl) stores.

Exit codes: 0 success, 1 failed checks or invariant violations, 2 usage or
I/O errors.  Reports are UTF-8 TSV with a header row, written to --report
or to stdout; progress and summaries go to stderr.
"""

from __future__ import annotations

import argparse
import re
import sys
from collections import Counter
from types import SimpleNamespace
from typing import Optional

import numpy as np

from . import io, tables
from .binary import binary_copies, binary_spaces, extension_census, hyperplane_extensions, restriction_report
from .blowup import blowup_masks
from .census import (
    Level3,
    census_of_keys,
    census_of_words,
    census_sources,
    dedup_records,
    generate,
    refined_names,
    row_fields,
    unique_rows,
    words_are_hyperplanes,
)
from .geometry import build
from .gf import dual_keys
from .graphs import line_orbit_sweep, nauru_sweep, ovoid_sweep
from .hyperplanes import HyperplaneError, is_hyperplane, projectivity_many
from .lines import find_lines, line_projectivity, projective_lines_fast, sort_lines
from .orbits import cross_check, hyperplane_orbits, line_orbits
from .quadric import DualWeights, form_report, select_quadric, select_symplectic, weights_bfs
from .space import VeldkampSpace, label_rank, space, trivial_label
from .verify import SUITES, Context, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

PROVENANCE_RECORD = np.dtype([("key", "<u4"), ("kind", "u1"), ("source", "<u4"), ("arrangement", "u1")])


class UsageError(Exception):
    pass


class InvariantError(Exception):
    pass


def parse_size(text: str) -> int:
    m = re.fullmatch(r"\s*(\d+(?:\.\d+)?)\s*([kmgt]?)i?b?\s*", text.lower())
    if not m:
        raise argparse.ArgumentTypeError(f"bad size {text!r}")
    scale = {"": 1, "k": 1 << 10, "m": 1 << 20, "g": 1 << 30, "t": 1 << 40}[m.group(2)]
    return int(float(m.group(1)) * scale)


def note(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _join(items) -> str:
    return ",".join(str(x) for x in items)


def _counts(pairs) -> str:
    return " ".join(f"{k}={v}" for k, v in pairs if v)


# --- loading ---------------------------------------------------------------------


def _bitset_space(hf: io.HyperplaneFile, threads) -> tuple[VeldkampSpace, np.ndarray]:
    """Space over the stored hyperplanes and the map file index -> space index."""
    if hf.dual or (hf.q + 1) ** hf.k > 64:
        raise UsageError("this command needs a bitset store of a variety with at most 64 points")
    masks = hf.masks()
    lower = space(hf.q, hf.k - 1, threads) if hf.k > 1 else None
    sp = VeldkampSpace(hf.q, hf.k, masks, lower, threads)
    return sp, sp.indices(masks)


def _with_lines(sp: VeldkampSpace, pos: np.ndarray, lf: io.LineFile) -> VeldkampSpace:
    if lf.count and lf.members.max() >= len(pos):
        raise io.FormatError("line members outside the hyperplane store")
    sp.__dict__["lines"] = sort_lines(pos[lf.members]) if lf.count else np.zeros((0, sp.q + 1), np.int64)
    return sp


def _level3(threads) -> Level3:
    return Level3.from_space(space(3, 3, threads))


def _k4_census(path: Optional[str], args, projective: bool = True):
    """Census of a k=4 store, or of all projective blow-ups when no store is given."""
    if path is None:
        ctx = Context(args.threads, args.max_mem, dual_stride=0)
        return ctx.census, ctx.l3
    l3 = _level3(args.threads)
    hf = io.read_hyperplanes(path)
    if (hf.q, hf.k) != (3, 4):
        raise UsageError("expected a store of S_4(3) hyperplanes")
    if hf.dual:
        return census_of_keys(l3, hf.keys(), projective, args.max_mem), l3
    return census_of_words(l3, io.records_to_masks(hf.records), hf.projective_only), l3


# --- blow-ups ----------------------------------------------------------------------


def _blowup_small(q, k, masks, members, line_ids, hyp_ids):
    """Blow-ups into S_{k+1}(q) as one-word bitsets with provenance rows."""
    pts = (q + 1) ** k
    out, prov = blowup_masks(masks, members[line_ids], q, pts, hyp_ids)
    lines = prov[:, 0] == 0
    prov[lines, 1] = line_ids[prov[lines, 1]]
    uniq, first = np.unique(out, return_index=True)
    v = build(q, k + 1)
    bad = sum(not is_hyperplane(v, int(m)) for m in uniq)
    if bad:
        raise InvariantError(f"{bad} blow-ups violate the hyperplane axiom")
    return uniq, prov[first], len(out)


def _blowup_k4_keys(src, line_ids, hyp_ids, max_mem):
    fails = 0

    def chunks():
        nonlocal fails
        for b in generate(src, line_ids, hyp_ids, with_keys=True):
            fails += int((~words_are_hyperplanes(b.words)).sum())
            rec = np.zeros(len(b.keys), dtype=PROVENANCE_RECORD)
            rec["key"], rec["kind"], rec["source"], rec["arrangement"] = b.keys, b.kind, b.source, b.arrangement
            yield rec

    recs, total = dedup_records(chunks(), max_mem)
    if fails:
        raise InvariantError(f"{fails} blow-ups violate the hyperplane axiom")
    prov = np.column_stack([recs["kind"], recs["source"], recs["arrangement"]])
    return recs["key"], prov, total


def _blowup_k4_words(src, line_ids, hyp_ids):
    words, prov = [], []
    for b in generate(src, line_ids, hyp_ids, with_keys=False):
        words.append(b.words)
        prov.append(np.column_stack([np.full(len(b.words), b.kind), b.source, np.full(len(b.words), b.arrangement)]))
    words = np.concatenate(words)
    fails = int((~words_are_hyperplanes(words)).sum())
    if fails:
        raise InvariantError(f"{fails} blow-ups violate the hyperplane axiom")
    _, _, first = unique_rows(words.view(np.int64))
    first = np.sort(first)
    return words[first], np.concatenate(prov)[first], len(words)


def _write_store(path, q, k, values, prov, projective_only, dual) -> int:
    order = io.write_hyperplanes(path, q, k, values, projective_only, dual)
    if prov is not None:
        io.write_provenance(path, np.asarray(prov)[order])
    return len(order)


# --- subcommands -------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    q, k = args.q, args.k
    if q not in (2, 3):
        raise UsageError("q must be 2 or 3")
    if k <= 3 and (q + 1) ** k <= 64:
        sp = space(q, k, args.threads)
        masks = sp.masks[sp.projective] if args.projective_only else sp.masks
        v = sp.variety
        bad = sum(not is_hyperplane(v, int(m)) for m in masks)
        if bad:
            raise InvariantError(f"{bad} stored sets violate the hyperplane axiom")
        n = _write_store(args.out, q, k, masks, None, args.projective_only, False)
    elif (q, k) == (3, 4):
        if not args.projective_only:
            raise UsageError("S_4(3) is enumerated from blow-ups; pass --projective-only")
        sp = space(3, 3, args.threads)
        lids, hids = census_sources(sp, True)
        keys, _, _ = _blowup_k4_keys(sp, lids, hids, args.max_mem)
        n = _write_store(args.out, 3, 4, keys, None, True, True)
    else:
        raise UsageError(f"no enumeration for S_{k}({q})")
    note(f"S_{k}({q}): {n} hyperplanes -> {args.out}")
    return EXIT_OK


def cmd_lines(args) -> int:
    hf = io.read_hyperplanes(args.hyps)
    if hf.dual or (hf.q + 1) ** hf.k > 64:
        raise UsageError("line search needs a bitset store of a variety with at most 64 points")
    q = hf.q
    masks = hf.masks()
    proj, duals = projectivity_many(build(q, hf.k), masks)
    parts = []
    if args.projective_fast:
        pm = np.flatnonzero(proj)
        fast = projective_lines_fast(duals[pm], q)
        parts.append(pm[fast] if len(fast) else fast)
    if args.include_nonprojective_members or not args.projective_fast:
        scan = find_lines(masks, q, args.threads)
        allproj = proj[scan].all(axis=1) if len(scan) else np.zeros(0, bool)
        if args.projective_fast:
            scan = scan[~allproj]
        elif not args.include_nonprojective_members:
            scan = scan[allproj]
        parts.append(scan)
    members = sort_lines(np.concatenate(parts)) if parts else np.zeros((0, q + 1), np.int64)
    lp = line_projectivity(duals, proj, members, q) if len(members) else np.zeros(0, bool)
    flags = (io.LINES_FAST if args.projective_fast else 0) | (
        io.LINES_NONPROJECTIVE_MEMBERS if args.include_nonprojective_members else 0
    )
    io.write_lines(args.out, q, hf.k, members, lp, flags)
    note(f"{len(members)} lines ({int(lp.sum())} projective) -> {args.out}")
    return EXIT_OK


def cmd_classify_hyperplanes(args) -> int:
    hf = io.read_hyperplanes(args.hyps)
    if (hf.q, hf.k) == (3, 4):
        census, l3 = _k4_census(args.hyps, args, hf.projective_only or hf.dual)
        rows = []
        for c in census.classes:
            f = row_fields(l3.sp, c.row)
            rows.append(
                [
                    c.label,
                    f["points"],
                    f["lines"],
                    _join(f["orders"]),
                    _counts(zip(["D", "H1", "H2", "H3", "H4", "H5"], f["sections"])),
                    _join(c.vl),
                    c.count,
                    "yes" if census.projective else "no",
                    _join(sorted(n for _, n in c.subtypes)),
                ]
            )
        io.write_tsv(
            args.report,
            ["type", "points", "lines", "orders", "sections", "vl", "count", "projective", "subtypes"],
            rows,
        )
        note(f"{census.distinct} hyperplanes in {len(census.classes)} types")
        if census.axiom_failures:
            raise InvariantError(f"{census.axiom_failures} records violate the hyperplane axiom")
        return EXIT_OK
    sp, _ = _bitset_space(hf, args.threads)
    counts = sp.type_counts()
    rows = []
    for lab in sp.type_labels:
        sig = sp.type_signatures[lab]
        rows.append(
            [
                lab,
                sig.point_count,
                sig.line_count,
                _join(sig.order_histogram),
                _counts(sig.section_census),
                _join(sorted(sig.spread_line_types or ())),
                counts[lab],
                "yes" if sig.projective else "no",
            ]
        )
    io.write_tsv(args.report, ["type", "points", "lines", "orders", "sections", "vl", "count", "projective"], rows)
    note(f"{sp.count} hyperplanes in {len(sp.type_labels)} types")
    return EXIT_OK


def cmd_classify_lines(args) -> int:
    hf, lf = io.read_hyperplanes(args.hyps), io.read_lines(args.lines)
    io.check_compatible(hf, lf)
    sp, pos = _bitset_space(hf, args.threads)
    _with_lines(sp, pos, lf)
    if lf.count:
        computed = line_projectivity(sp.duals, sp.projective, pos[lf.members], sp.q)
        if not np.array_equal(computed, lf.projective):
            raise InvariantError("stored line projectivity disagrees with the dual vectors")
    rows = []
    ordinary = sorted(zip(sp.line_labels, sp.line_signatures, sp.line_class_counts.tolist()), key=lambda r: label_rank(r[0]))
    for lab, sig, n in ordinary:
        comp = Counter(sig.member_types)
        rows.append(
            [lab, "ordinary", sig.core_points, sig.core_lines, _counts(sorted(comp.items())), n, "yes" if sig.projective else "no"]
        )
    counts = sp.type_counts()
    for lab in sp.type_labels:
        sig = sp.type_signatures[lab]
        rows.append(
            [
                trivial_label(lab),
                "trivial",
                sig.point_count,
                sig.line_count,
                f"D=1 {lab}=3",
                counts[lab],
                "yes" if sig.projective else "no",
            ]
        )
    io.write_tsv(args.report, ["class", "kind", "core_points", "core_lines", "composition", "count", "projective"], rows)
    note(f"{len(sp.lines)} ordinary lines in {len(sp.line_labels)} classes")
    return EXIT_OK


def cmd_orbits(args) -> int:
    hf = io.read_hyperplanes(args.hyps)
    sp, pos = _bitset_space(hf, args.threads)
    try:
        if args.lines:
            lf = io.read_lines(args.lines)
            io.check_compatible(hf, lf)
            _with_lines(sp, pos, lf)
            orb, classes, labels = line_orbits(sp), sp.line_class, sp.line_labels
        else:
            orb, classes, labels = hyperplane_orbits(sp), sp.types, sp.type_labels
    except KeyError:
        raise InvariantError("the stored collection is not closed under the stabilizer") from None
    first = np.full(orb.count, -1)
    for i, o in enumerate(orb.labels.tolist()):
        if first[o] < 0:
            first[o] = i
    rows = [[o, int(orb.sizes[o]), labels[classes[first[o]]]] for o in range(orb.count)]
    io.write_tsv(args.report, ["orbit", "size", "class"], rows)
    cc = cross_check(classes, orb)
    split = {labels[c]: s for c, s in cc["split_classes"].items()}
    note(f"{orb.count} orbits over {len(labels)} classes; split classes: {split}")
    if cc["mixed_orbits"]:
        note(f"orbits meeting several classes: {cc['mixed_orbits']}")
        return EXIT_FAIL
    return EXIT_OK


def cmd_blowup(args) -> int:
    hf, lf = io.read_hyperplanes(args.hyps), io.read_lines(args.lines)
    io.check_compatible(hf, lf)
    if hf.dual:
        raise UsageError("blow-ups need a bitset store")
    q, k = hf.q, hf.k
    masks = hf.masks()
    if lf.count and lf.members.max() >= len(masks):
        raise io.FormatError("line members outside the hyperplane store")
    proj, duals = projectivity_many(build(q, k), masks)
    if args.projective_only:
        line_ids, hyp_ids = np.flatnonzero(lf.projective), np.flatnonzero(proj)
    else:
        line_ids, hyp_ids = np.arange(lf.count), np.arange(len(masks))
    if (q + 1) ** (k + 1) <= 64:
        values, prov, total = _blowup_small(q, k, masks, lf.members, line_ids, hyp_ids)
        dual = False
    elif (q, k) == (3, 3):
        src = SimpleNamespace(masks=masks, lines=lf.members, duals=duals)
        if args.projective_only:
            values, prov, total = _blowup_k4_keys(src, line_ids, hyp_ids, args.max_mem)
        else:
            values, prov, total = _blowup_k4_words(src, line_ids, hyp_ids)
        dual = args.projective_only
    else:
        raise UsageError(f"no blow-up from S_{k}({q})")
    n = _write_store(args.out, q, k + 1, values, prov, args.projective_only, dual)
    note(f"{total} blow-ups, {n} distinct -> {args.out} (+ {io.provenance_path(args.out)})")
    return EXIT_OK


def cmd_quadric(args) -> int:
    census, l3 = _k4_census(args.hyps, args)
    sel = select_quadric(census, l3)
    form = form_report(census, sel)
    sym = select_symplectic(census, sel, l3.sp, strict=census.distinct == tables.K4_PROJECTIVE_TOTAL)
    chosen, symp = set(sel.types), set(sym.types)
    rows = []
    for c in census.classes:
        names = refined_names(c)
        for comp, n in c.subtypes:
            rows.append(
                [
                    names[comp],
                    c.label,
                    n,
                    "yes" if c.label in chosen else "no",
                    c.form_zeros.get(comp, 0),
                    "yes" if c.label in symp else "no",
                ]
            )
    io.write_tsv(args.report, ["class", "type", "count", "quadric", "split_form_zeros", "symplectic"], rows)
    note(
        f"quadric: {len(sel.types)} types, {sel.total} hyperplanes; "
        f"split form zeros: {form.zeros}; symplectic: {len(sym.types)} types, {sym.total} hyperplanes"
    )
    return EXIT_OK


def cmd_weights(args) -> int:
    if args.k == 3:
        sp = space(3, 3, args.threads)
        w = weights_bfs(sp)
        dw = DualWeights(3)
        pr = np.flatnonzero(sp.projective)
        wd = np.full(sp.count, -1)
        wd[pr] = [x if x is not None else -1 for x in dw.weights_of_keys(dual_keys(sp.duals[pr]))]
        rows = []
        for i, lab in enumerate(sp.type_labels):
            sel = sp.types == i
            rows.append(
                [
                    lab,
                    int(sel.sum()),
                    _join(sorted(set(w[sel].tolist()))),
                    _join(sorted(set(wd[sel].tolist()))) if sp.projective[sel].all() else "",
                ]
            )
        io.write_tsv(args.report, ["type", "count", "weight", "dual_weight"], rows)
        return EXIT_OK
    census, _ = _k4_census(args.hyps, args)
    dw = DualWeights(4)
    rows = []
    for c in census.classes:
        names = refined_names(c)
        for comp, n in c.subtypes:
            key = c.representatives[comp][1]
            w = dw.weights_of_keys([key])[0] if key is not None else None
            rows.append([names[comp], c.label, n, "" if w is None else w])
    io.write_tsv(args.report, ["class", "type", "count", "weight"], rows)
    return EXIT_OK


def cmd_graphs(args) -> int:
    sp = space(3, 3, args.threads)
    v = sp.variety
    proj = sp.masks[sp.types == sp.type_labels.index("H5")]
    star = sp.masks[sp.types == sp.type_labels.index("H5*")]
    rows = []
    for name, rep in (
        ("projective-pairs", ovoid_sweep(v, proj)),
        ("nonprojective-pairs", ovoid_sweep(v, star)),
        ("nauru", nauru_sweep(v, star)),
    ):
        rows.extend([name, rep.pairs, g, n] for g, n in sorted(rep.outcomes.items()))
    for size, out in line_orbit_sweep(sp, line_orbits(sp), "62").items():
        pairs = sum(out.values())
        rows.extend([f"class-62-orbit-{size}", pairs, g, n] for g, n in sorted(out.items()))
    io.write_tsv(args.report, ["sweep", "pairs", "graph", "count"], rows)
    return EXIT_OK


def cmd_binary_embed(args) -> int:
    sp3, sp2 = binary_spaces(args.threads)
    copies = binary_copies()
    if not 0 <= args.copy < len(copies):
        raise UsageError(f"copy must lie in 0..{len(copies) - 1}")
    copy = copies[args.copy]
    rows = []
    for b, c in hyperplane_extensions(sp3, sp2, copy).items():
        rows.extend(["hyperplane", b, t, n] for t, n in sorted(c.items()))
        if not c:
            rows.append(["hyperplane", b, "", 0])
    ext = extension_census(sp3, sp2, copy)
    for b in sp2.line_labels:
        c = ext.targets[b]
        rows.extend(["line", b, t, n] for t, n in sorted(c.items()))
    io.write_tsv(args.report, ["kind", "binary", "ternary", "count"], rows)
    rep = restriction_report(sp3, sp2, [copy])
    note(
        f"{len(ext.extendable)} extendable binary line classes; non-projective: "
        f"{ {b: dict(c) for b, c in ext.nonprojective().items()} }; "
        f"restrictions: {rep.hyperplane} hyperplanes, {rep.full} full, {rep.neither} neither"
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(SUITES) if "all" in args.suite else args.suite
    ctx = Context(args.threads, args.max_mem, args.dual_stride, args.samples, args.seed)
    failed = total = 0
    for name in names:
        checks = run_suite(name, ctx)
        total += len(checks)
        failed += sum(not c.passed for c in checks)
    print(f"{total - failed}/{total} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


# --- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: available cores)")
    common.add_argument("--max-mem", type=parse_size, default=None, help="memory ceiling, e.g. 2G; spills the k=4 dedup to disk")

    p = argparse.ArgumentParser(prog="veldkamp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", parents=[common], help="all hyperplanes of S_k(q)")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--projective-only", action="store_true")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("lines", parents=[common], help="Veldkamp lines of a hyperplane store")
    s.add_argument("--hyps", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--projective-fast", action="store_true", help="projective lines from the dual space")
    s.add_argument("--include-nonprojective-members", action="store_true")
    s.set_defaults(func=cmd_lines)

    s = sub.add_parser("classify-hyperplanes", parents=[common], help="hyperplane types")
    s.add_argument("--hyps", required=True)
    s.add_argument("--report")
    s.set_defaults(func=cmd_classify_hyperplanes)

    s = sub.add_parser("classify-lines", parents=[common], help="Veldkamp line classes")
    s.add_argument("--lines", required=True)
    s.add_argument("--hyps", required=True)
    s.add_argument("--report")
    s.set_defaults(func=cmd_classify_lines)

    s = sub.add_parser("orbits", parents=[common], help="stabilizer orbits of hyperplanes or lines")
    s.add_argument("--hyps", required=True)
    s.add_argument("--lines", help="line store; without it hyperplane orbits are reported")
    s.add_argument("--report")
    s.set_defaults(func=cmd_orbits)

    s = sub.add_parser("blowup", parents=[common], help="hyperplanes of the next dimension")
    s.add_argument("--lines", required=True)
    s.add_argument("--hyps", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--projective-only", action="store_true", help="projective sources; k=3 -> 4 stores dual keys")
    s.set_defaults(func=cmd_blowup)

    s = sub.add_parser("quadric", parents=[common], help="quadric and symplectic selections at k=4")
    s.add_argument("--hyps", help="S_4(3) store (default: recompute the projective blow-ups)")
    s.add_argument("--report")
    s.set_defaults(func=cmd_quadric)

    s = sub.add_parser("weights", parents=[common], help="hyperplane weights")
    s.add_argument("--k", type=int, choices=(3, 4), default=3)
    s.add_argument("--hyps", help="S_4(3) store for --k 4")
    s.add_argument("--report")
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("graphs", parents=[common], help="collinearity graphs of ovoid unions")
    s.add_argument("--report")
    s.set_defaults(func=cmd_graphs)

    s = sub.add_parser("binary-embed", parents=[common], help="extensions from a copy of S_3(2)")
    s.add_argument("--copy", type=int, default=0)
    s.add_argument("--report")
    s.set_defaults(func=cmd_binary_embed)

    s = sub.add_parser("verify", parents=[common], help="compare with the reference tables")
    s.add_argument("--suite", action="append", required=True, choices=list(SUITES) + ["all"])
    s.add_argument("--dual-stride", type=int, default=1, help="check one k=4 key block in N (0: none)")
    s.add_argument("--samples", type=int, default=100_000, help="random k=4 blow-ups for the axiom check")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvariantError, HyperplaneError) as e:
        note(f"error: {e}")
        return EXIT_FAIL
    except (UsageError, io.FormatError, OSError, ValueError) as e:
        note(f"error: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
