from __future__ import annotations

import csv

import numpy as np
import pytest

from veldkamp import cli, io, verify
from veldkamp.blowup import blow_up_ordinary, blow_up_trivial, blowup_duals_ordinary, blowup_duals_trivial, permutations
from veldkamp.census import Level3, classify_words, TRIVIAL
from veldkamp.gf import dual_keys
from veldkamp.hyperplanes import projectivity_many
from veldkamp.geometry import build
from veldkamp.space import space


def run(*argv):
    return cli.main([str(a) for a in argv])


def read_tsv(path):
    with open(path, encoding="utf-8") as f:
        return list(csv.DictReader(f, delimiter="\t"))


@pytest.fixture(scope="module")
def k2(tmp_path_factory):
    d = tmp_path_factory.mktemp("k2")
    assert run("enumerate", "--q", 3, "--k", 2, "--out", d / "h.svh") == 0
    assert run("lines", "--hyps", d / "h.svh", "--out", d / "l.svl") == 0
    return d


@pytest.fixture(scope="module")
def k3(tmp_path_factory):
    d = tmp_path_factory.mktemp("k3")
    assert run("enumerate", "--q", 3, "--k", 3, "--out", d / "h.svh") == 0
    return d


def test_enumerate_counts(k2, tmp_path):
    assert io.read_hyperplanes(k2 / "h.svh").count == 40
    for q, k, n in [(2, 2, 15), (2, 3, 255), (3, 1, 4)]:
        assert run("enumerate", "--q", q, "--k", k, "--out", tmp_path / "x.svh") == 0
        assert io.read_hyperplanes(tmp_path / "x.svh").count == n
    assert run("enumerate", "--q", 3, "--k", 3, "--projective-only", "--out", tmp_path / "p.svh") == 0
    hf = io.read_hyperplanes(tmp_path / "p.svh")
    assert hf.count == 3280 and hf.projective_only


def test_lines_fast_and_scan_agree(k2):
    assert run("lines", "--hyps", k2 / "h.svh", "--out", k2 / "f.svl", "--projective-fast") == 0
    scan, fast = io.read_lines(k2 / "l.svl"), io.read_lines(k2 / "f.svl")
    assert (scan.count, int(scan.projective.sum()), fast.count) == (136, 130, 130)
    assert {tuple(r) for r in scan.members[scan.projective].tolist()} == {tuple(r) for r in fast.members.tolist()}
    assert fast.flags == io.LINES_FAST


def test_line_flags_at_k3(k3):
    h = k3 / "h.svh"
    assert run("lines", "--hyps", h, "--out", k3 / "a.svl") == 0
    assert run("lines", "--hyps", h, "--out", k3 / "b.svl", "--include-nonprojective-members") == 0
    assert run("lines", "--hyps", h, "--out", k3 / "c.svl", "--projective-fast", "--include-nonprojective-members") == 0
    a, b, c = (io.read_lines(k3 / f"{x}.svl") for x in "abc")
    assert (a.count, b.count) == (896260 + 2268, 896260 + 2268 + 5400)
    # the dual shortcut yields only projective lines, so lines whose members are all
    # projective but which are not themselves projective drop out
    assert c.count == 896260 + 5400 and int(c.projective.sum()) == 896260
    bset = {tuple(r) for r in b.members.tolist()}
    assert all(tuple(r) in bset for r in c.members.tolist())
    assert np.array_equal(a.members[a.projective], c.members[c.projective])
    assert run("lines", "--hyps", h, "--out", k3 / "t1.svl", "--threads", 1, "--include-nonprojective-members") == 0
    assert (k3 / "t1.svl").read_bytes() == (k3 / "b.svl").read_bytes()


def test_classify_reports(k2, k3, tmp_path):
    assert run("classify-hyperplanes", "--hyps", k3 / "h.svh", "--report", tmp_path / "h.tsv") == 0
    rows = {r["type"]: r for r in read_tsv(tmp_path / "h.tsv")}
    assert {t: int(r["count"]) for t, r in rows.items()} == {"H1": 64, "H2": 288, "H3": 1728, "H4": 768, "H5": 432, "H5*": 144}
    assert rows["H1"]["orders"] == "0,0,27,10" and rows["H5*"]["projective"] == "no"
    assert run("classify-lines", "--hyps", k2 / "h.svh", "--lines", k2 / "l.svl", "--report", tmp_path / "l.tsv") == 0
    rows = {r["class"]: r for r in read_tsv(tmp_path / "l.tsv")}
    assert {c: int(r["count"]) for c, r in rows.items()} == {"1": 8, "2": 72, "3": 32, "4": 18, "4*": 6, "I": 16, "II": 24}
    assert rows["4*"]["projective"] == "no" and rows["1"]["core_lines"] == "1"


def test_orbits_report(k2, tmp_path):
    assert run("orbits", "--hyps", k2 / "h.svh", "--lines", k2 / "l.svl", "--report", tmp_path / "o.tsv") == 0
    sizes = sorted(int(r["size"]) for r in read_tsv(tmp_path / "o.tsv"))
    assert sizes == [6, 8, 18, 32, 72]
    assert run("orbits", "--hyps", k2 / "h.svh", "--report", tmp_path / "h.tsv") == 0
    assert sorted(int(r["size"]) for r in read_tsv(tmp_path / "h.tsv")) == [16, 24]


def test_orbits_need_closed_collections(k2, tmp_path):
    hf = io.read_hyperplanes(k2 / "h.svh")
    io.write_hyperplanes(tmp_path / "part.svh", 3, 2, hf.masks()[:7])
    assert run("orbits", "--hyps", tmp_path / "part.svh") == 1


def test_blowup_k2_provenance_rebuilds_every_record(k2):
    out = k2 / "b.svh"
    assert run("blowup", "--hyps", k2 / "h.svh", "--lines", k2 / "l.svl", "--out", out) == 0
    hf, lf, src = io.read_hyperplanes(out), io.read_lines(k2 / "l.svl"), io.read_hyperplanes(k2 / "h.svh").masks()
    prov = io.read_provenance(out)
    assert hf.count == len(prov) == 3424
    perms = permutations(4)
    for m, (kind, s, a) in zip(hf.masks().tolist(), prov.tolist()):
        if kind == 0:
            assert m == blow_up_ordinary(src[lf.members[s]], perms[a], 16)
        else:
            assert m == blow_up_trivial(int(src[s]), a, 16, 4)
    assert out.read_bytes()[16:] == hf.records.tobytes()


@pytest.fixture(scope="module")
def k3_subset(k3):
    """A small line store over the S_3(3) hyperplanes: 60 projective and 20 other lines."""
    sp = space(3, 3)
    hf = io.read_hyperplanes(k3 / "h.svh")
    pos = sp.indices(hf.masks())
    inv = np.empty_like(pos)
    inv[pos] = np.arange(len(pos))
    rng = np.random.default_rng(2)
    pl = rng.choice(np.flatnonzero(sp.line_projective), 60, replace=False)
    nl = rng.choice(np.flatnonzero(~sp.line_projective), 20, replace=False)
    ids = np.concatenate([pl, nl])
    io.write_lines(k3 / "s.svl", 3, 3, inv[sp.lines[ids]], sp.line_projective[ids])
    return k3


def test_blowup_k3_keys_provenance_and_determinism(k3_subset, ctx):
    d = k3_subset
    args = ["blowup", "--hyps", d / "h.svh", "--lines", d / "s.svl", "--projective-only"]
    assert run(*args, "--out", d / "k4a.svh") == 0
    assert run(*args, "--out", d / "k4b.svh", "--threads", 1, "--max-mem", "1K") == 0
    for suffix in ("", ".prov.npy"):
        assert (d / f"k4a.svh{suffix}").read_bytes() == (d / f"k4b.svh{suffix}").read_bytes()
    hf = io.read_hyperplanes(d / "k4a.svh")
    assert hf.dual and hf.projective_only and hf.count == 60 * 24 + 3280 * 4
    lf = io.read_lines(d / "s.svl")
    masks = io.read_hyperplanes(d / "h.svh").masks()
    proj, duals = projectivity_many(build(3, 3), masks)
    prov = io.read_provenance(d / "k4a.svh")
    perms = permutations(4)
    keys = hf.keys()
    sel = np.random.default_rng(0).choice(hf.count, 500, replace=False)
    for i in sel:
        kind, s, a = prov[i].tolist()
        if kind == 0:
            dv = blowup_duals_ordinary(duals[lf.members[s]][None], perms[a])
        else:
            dv = blowup_duals_trivial(duals[s][None], a)
        assert int(dual_keys(dv)[0]) == int(keys[i])
    # the provenance names the projection along the new direction
    l3: Level3 = ctx.l3
    sp = l3.sp
    pos = sp.indices(masks)
    from veldkamp.census import words_from_keys

    words = words_from_keys(keys[sel].astype(np.uint32), build(3, 4).tensor)
    _, nodes = classify_words(l3, words)
    for node, i in zip(nodes[:, 0].tolist(), sel):
        kind, s, _ = prov[i].tolist()
        if kind == 0:
            assert node == l3.line_orbit[sp.line_index(pos[lf.members[s]].tolist())]
        else:
            assert node == TRIVIAL + l3.hyp_orbit[pos[s]]


def test_blowup_k3_bitsets_and_classification(k3_subset, tmp_path):
    d = k3_subset
    out = tmp_path / "w.svh"
    assert run("blowup", "--hyps", d / "h.svh", "--lines", d / "s.svl", "--out", out) == 0
    hf = io.read_hyperplanes(out)
    assert not hf.dual and hf.count == 80 * 24 + 3424 * 4
    assert hf.records.shape[1] == 32
    assert run("classify-hyperplanes", "--hyps", out, "--report", tmp_path / "r.tsv") == 0
    assert sum(int(r["count"]) for r in read_tsv(tmp_path / "r.tsv")) == hf.count
    assert run("quadric", "--hyps", d / "k4a.svh", "--report", tmp_path / "q.tsv") == 0
    assert sum(int(r["count"]) for r in read_tsv(tmp_path / "q.tsv")) == 60 * 24 + 3280 * 4


def test_weights_and_binary_reports(tmp_path):
    assert run("weights", "--k", 3, "--report", tmp_path / "w.tsv") == 0
    rows = {r["type"]: r for r in read_tsv(tmp_path / "w.tsv")}
    assert [rows[t]["weight"] for t in ("H1", "H2", "H3", "H4", "H5")] == ["1", "2", "2", "3", "3"]
    assert all(rows[t]["weight"] == rows[t]["dual_weight"] for t in ("H1", "H2", "H3", "H4", "H5"))
    assert run("binary-embed", "--copy", 3, "--report", tmp_path / "b.tsv") == 0
    rows = read_tsv(tmp_path / "b.tsv")
    lines = {(r["binary"], r["ternary"]) for r in rows if r["kind"] == "line"}
    assert len({b for b, _ in lines}) == 15
    assert ("28", "44*") in lines
    assert run("binary-embed", "--copy", 64) == 2


def test_verify_exit_codes(monkeypatch, capsys):
    assert run("verify", "--suite", "table1", "--suite", "table2") == 0
    out = capsys.readouterr().out
    assert "[table1] PASS" in out and "FAIL" not in out
    monkeypatch.setitem(verify.SUITES, "table1", lambda ctx: [verify.Check("broken", False)])
    assert run("verify", "--suite", "table1") == 1
    assert "[table1] FAIL broken" in capsys.readouterr().out


def test_usage_and_format_errors(k2, tmp_path):
    bad = tmp_path / "bad.svh"
    bad.write_bytes(b"SVLN" + bytes(12))
    assert run("lines", "--hyps", bad, "--out", tmp_path / "x.svl") == 2
    assert run("enumerate", "--q", 5, "--k", 2, "--out", tmp_path / "x") == 2
    assert run("enumerate", "--q", 3, "--k", 4, "--out", tmp_path / "x") == 2
    assert run("lines", "--hyps", tmp_path / "missing.svh", "--out", tmp_path / "x") == 2
    run("enumerate", "--q", 2, "--k", 2, "--out", tmp_path / "b2.svh")
    assert run("classify-lines", "--hyps", tmp_path / "b2.svh", "--lines", k2 / "l.svl") == 2
    with pytest.raises(SystemExit) as e:
        run("verify")
    assert e.value.code == 2
    assert cli.parse_size("2G") == 2 << 30 and cli.parse_size("512m") == 512 << 20 and cli.parse_size("100") == 100
