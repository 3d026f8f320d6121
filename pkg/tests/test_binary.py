from __future__ import annotations

import numpy as np
import pytest

from veldkamp.binary import (
    binary_copies,
    binary_spaces,
    extend_hyperplane,
    extend_line,
    line_extensions,
    restrict,
    restriction_ids,
    restriction_report,
)
from veldkamp.geometry import build


@pytest.fixture(scope="module")
def spaces():
    return binary_spaces()


@pytest.fixture(scope="module")
def copies():
    return binary_copies()


def test_copies_are_sub_segre_varieties(copies):
    v3, v2 = build(3, 3), build(2, 3)
    assert len(copies) == 64
    assert len({c.mask for c in copies}) == 64
    ternary_lines = set(v3.line_masks)
    for c in copies[::9]:
        assert bin(c.mask).count("1") == 27
        for line in v2.lines:
            pts = c.points[line]
            # the three points lie on one ternary line
            assert any(all(m >> int(p) & 1 for p in pts) for m in ternary_lines)


def test_restriction_of_the_copy_itself_is_full(spaces, copies):
    sp3, sp2 = spaces
    c = copies[17]
    r = restrict(np.array([c.mask], dtype=np.uint64), c)
    assert int(r[0]) == sp2.variety.full
    assert restriction_ids(sp2, r)[0] == -1


def test_hyperplane_extensions(spaces, copies):
    sp3, sp2 = spaces
    c = copies[0]
    for b in range(sp2.count):
        ext = extend_hyperplane(sp3, sp2, c, b)
        rest = restrict(sp3.masks[ext], c)
        assert np.all(rest == sp2.masks[b])
    h4 = sp2.type_labels.index("H4")
    assert all(len(extend_hyperplane(sp3, sp2, c, b)) == 0 for b in np.flatnonzero(sp2.types == h4))


def test_line_extensions_restrict_to_the_binary_line(spaces, copies):
    sp3, sp2 = spaces
    c = copies[5]
    ext = line_extensions(sp3, sp2, c)
    assert ext
    ids = restriction_ids(sp2, restrict(sp3.masks, c))
    for b, tls in list(ext.items())[:200]:
        target = sorted(sp2.lines[b].tolist())
        for li in tls:
            r = ids[sp3.lines[li]]
            assert any(sorted(np.delete(r, drop).tolist()) == target for drop in range(4))
    assert extend_line(sp3, sp2, c, b) == tls


def test_restriction_is_not_hereditary(spaces, copies):
    sp3, sp2 = spaces
    rep = restriction_report(sp3, sp2, copies[:2])
    assert rep.hyperplane > 0 and rep.neither > 0
    assert not rep.hereditary
