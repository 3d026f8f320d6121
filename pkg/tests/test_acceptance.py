"""Acceptance criteria, one marked group of tests per criterion.

Each test runs verification suites from `veldkamp.verify` (or the CLI) and fails on the
first failing check.  The terminal summary prints one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import subprocess
import sys

import pytest

from veldkamp import io, tables
from veldkamp.verify import SUITES


def assert_suites(ctx, *names):
    lines, failed = [], []
    for name in names:
        for c in SUITES[name](ctx):
            lines.append(f"[{name}] {c.line()}")
            if not c.passed:
                failed.append(lines[-1])
    print("\n".join(lines))
    assert not failed, "\n".join(failed)


def cli(*argv):
    r = subprocess.run([sys.executable, "-m", "veldkamp", *map(str, argv)], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    return r


# the CLI run comes first so the subprocess does not share memory with a cached census
@pytest.mark.criterion(6, "S4(3) blow-up census")
def test_cli_blowup_of_all_projective_lines(tmp_path):
    h, l, out = tmp_path / "h.svh", tmp_path / "l.svl", tmp_path / "k4.svh"
    cli("enumerate", "--q", 3, "--k", 3, "--projective-only", "--out", h)
    cli("lines", "--hyps", h, "--out", l, "--projective-fast")
    cli("blowup", "--hyps", h, "--lines", l, "--out", out, "--projective-only")
    hf = io.read_hyperplanes(out)
    assert (hf.count, hf.dual, hf.projective_only) == (tables.K4_PROJECTIVE_TOTAL, True, True)
    assert len(io.read_provenance(out)) == hf.count


@pytest.mark.criterion(6, "S4(3) blow-up census")
def test_k4_projective_census(ctx):
    assert_suites(ctx, "table9")


@pytest.mark.criterion(1, "S2(3) census and ovoid quadruples")
def test_k2_hyperplanes(ctx):
    assert_suites(ctx, "table1", "table3")


@pytest.mark.criterion(2, "V(S2(3)) lines and fast route")
def test_k2_lines(ctx):
    assert_suites(ctx, "table2")


@pytest.mark.criterion(3, "S3(3) census with orders and sections")
def test_k3_hyperplanes(ctx):
    assert_suites(ctx, "table4")


@pytest.mark.criterion(4, "V(S3(3)) line classes")
def test_k3_lines(ctx):
    assert_suites(ctx, "table5", "table6")


@pytest.mark.criterion(5, "orbit refinement at k=3")
def test_k3_line_orbits(ctx):
    assert_suites(ctx, "table7")


@pytest.mark.criterion(7, "refined S4(3) classes")
def test_k4_refinement(ctx):
    assert_suites(ctx, "refinement")


@pytest.mark.criterion(8, "quadric and symplectic selections")
def test_quadric_and_symplectic(ctx):
    assert_suites(ctx, "table10", "table11")


@pytest.mark.criterion(9, "non-projective S4(3) hyperplanes")
def test_k4_nonprojective(ctx):
    assert_suites(ctx, "table12")


@pytest.mark.criterion(10, "weights")
def test_weights(ctx):
    assert_suites(ctx, "weights")


@pytest.mark.criterion(11, "collinearity graphs of ovoid pairs")
def test_graph_properties(ctx):
    assert_suites(ctx, "graphs")


@pytest.mark.criterion(12, "binary pipelines and extensions")
def test_binary(ctx):
    assert_suites(ctx, "counts", "table8")


@pytest.mark.criterion(13, "property suites")
def test_properties(ctx):
    assert_suites(ctx, "invariants")
