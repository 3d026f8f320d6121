"""Hyperplanes and Veldkamp lines of one variety, built bottom-up.

`space(q, k)` returns the (cached) `VeldkampSpace` for S_k(q), k <= 3: its
hyperplanes with projectivity, duals, order data and type labels, and
lazily its ordinary Veldkamp lines with cores, projectivity and classes.
The hyperplanes of S_1 and S_2 come from a subset scan, those of S_3 from
blowing up the lines and hyperplanes of S_2.
"""

from __future__ import annotations

import re
from collections import Counter
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np

from . import tables
from .blowup import blowup_masks, brute_force
from .geometry import build
from .hyperplanes import HyperplaneError, is_hyperplane, order_masks, projectivity_many, signature
from .lines import decode_row, find_lines, line_cores, line_projectivity, signature_rows

ROMAN = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X"]
_ROMAN_VALUE = {r: i for i, r in enumerate(ROMAN)}


def label_rank(label: str) -> tuple:
    """Sort key putting D first, then hyperplane types, trivial and ordinary lines."""
    star = label.endswith("*")
    base = label.rstrip("*")
    if base == "D":
        return (0, 0, "", star)
    if base.startswith("H"):
        return (1, int(base[1:]), "", star)
    if base in _ROMAN_VALUE:
        return (2, _ROMAN_VALUE[base], "", star)
    m = re.match(r"(\d+)(.*)", base)
    if m:
        return (3, int(m.group(1)), m.group(2), star)
    return (4, 0, base, star)


def trivial_label(type_label: str) -> str:
    star = "*" if type_label.endswith("*") else ""
    return ROMAN[int(type_label.rstrip("*")[1:]) - 1] + star


def line_keys(lines: np.ndarray) -> np.ndarray:
    lines = np.asarray(lines, dtype=np.int64)
    key = np.zeros(len(lines), dtype=np.int64)
    for t in range(lines.shape[1]):
        key = (key << 12) | lines[:, t]
    return key


class VeldkampSpace:
    def __init__(self, q: int, k: int, masks, lower: Optional[VeldkampSpace] = None, threads=None):
        self.q, self.k = q, k
        self.variety = v = build(q, k)
        if v.point_count > 64:
            raise ValueError("VeldkampSpace handles varieties with at most 64 points")
        self.lower = lower
        self.threads = threads
        self.masks = np.unique(np.asarray(masks, dtype=np.uint64))
        self.count = len(self.masks)
        self.projective, self.duals = projectivity_many(v, self.masks)
        om = np.array([order_masks(v, int(s)) for s in self.masks], dtype=np.uint64).reshape(self.count, k + 1)
        self.order_masks = om
        self._type_by_id()

    # --- hyperplanes ------------------------------------------------------

    def index(self, mask: int) -> int:
        i = int(np.searchsorted(self.masks, np.uint64(mask)))
        if i == self.count or int(self.masks[i]) != mask:
            raise KeyError("not a hyperplane of this space")
        return i

    def indices(self, masks) -> np.ndarray:
        masks = np.asarray(masks, dtype=np.uint64)
        pos = np.minimum(np.searchsorted(self.masks, masks), self.count - 1)
        if not np.all(self.masks[pos] == masks):
            raise KeyError("image outside the hyperplane collection")
        return pos

    def _type_by_id(self):
        v = self.variety
        sigs = [
            signature(v, int(s), self.lower, projective=bool(p))
            for s, p in zip(self.masks, self.projective)
        ]
        distinct = sorted(
            set(sigs),
            key=lambda s: (-s.point_count, -s.line_count, s.order_histogram, not s.projective),
        )
        names = {}
        proj_names = {}
        h = 0
        for s in distinct:
            if s.projective:
                h += 1
                names[s] = f"H{h}"
                twin = (s.point_count, s.line_count, s.order_histogram)
                proj_names[twin] = names[s]
        for s in distinct:
            if not s.projective:
                twin = (s.point_count, s.line_count, s.order_histogram)
                h_name = proj_names.get(twin)
                if h_name is None:
                    h += 1
                    h_name = f"H{h}"
                names[s] = h_name + "*"
        self.type_labels = sorted(set(names.values()), key=label_rank)
        code = {lab: i for i, lab in enumerate(self.type_labels)}
        self.type_signatures = {names[s]: s for s in distinct}
        self.types = np.array([code[names[s]] for s in sigs], dtype=np.int64)
        self.signatures = sigs

    def type_of(self, i: int) -> str:
        return self.type_labels[self.types[i]]

    def type_counts(self) -> dict[str, int]:
        c = Counter(self.types.tolist())
        return {self.type_labels[t]: c[t] for t in range(len(self.type_labels))}

    @property
    def zero_masks(self):
        return self.order_masks[:, 0]

    @property
    def deep_masks(self):
        return self.order_masks[:, self.k]

    @property
    def two_masks(self):
        return self.order_masks[:, 2] if self.k >= 2 else np.zeros(self.count, np.uint64)

    # --- classifier interface used by signatures one level up ------------

    def section_label(self, mask: int) -> str:
        if mask == self.variety.full:
            return "D"
        try:
            return self.type_of(self.index(mask))
        except KeyError:
            raise HyperplaneError("section is neither full nor a hyperplane") from None

    def line_label(self, sections) -> str:
        full = self.variety.full
        sections = [int(s) for s in sections]
        if full in sections:
            rest = [s for s in sections if s != full]
            if len(rest) != len(sections) - 1 or len(set(rest)) != 1:
                raise HyperplaneError("sections do not form a Veldkamp line")
            return trivial_label(self.section_label(rest[0]))
        ids = sorted(self.index(s) for s in sections)
        li = self.line_index(ids)
        return self.line_labels[self.line_class[li]]

    def label_rank(self, label: str) -> tuple:
        return label_rank(label)

    # --- lines ------------------------------------------------------------

    @cached_property
    def lines(self) -> np.ndarray:
        return find_lines(self.masks, self.q, self.threads)

    @cached_property
    def line_key_array(self) -> np.ndarray:
        return line_keys(self.lines)

    def line_index(self, members) -> int:
        key = int(line_keys(np.array([sorted(members)]))[0])
        i = int(np.searchsorted(self.line_key_array, key))
        if i == len(self.lines) or self.line_key_array[i] != key:
            raise HyperplaneError("sections do not form a Veldkamp line")
        return i

    def line_indices(self, member_rows) -> np.ndarray:
        keys = line_keys(np.sort(np.asarray(member_rows), axis=1))
        pos = np.minimum(np.searchsorted(self.line_key_array, keys), len(self.lines) - 1)
        if not np.all(self.line_key_array[pos] == keys):
            raise KeyError("image outside the line collection")
        return pos

    @cached_property
    def cores(self) -> np.ndarray:
        return line_cores(self.masks, self.lines)

    @cached_property
    def line_projective(self) -> np.ndarray:
        return line_projectivity(self.duals, self.projective, self.lines, self.q)

    @cached_property
    def _line_classes(self):
        rows, codes = signature_rows(
            self.variety,
            self.masks,
            self.types,
            len(self.type_labels),
            self.zero_masks,
            self.deep_masks,
            self.two_masks,
            self.lines,
            self.line_projective,
        )
        uniq, inverse, counts = np.unique(rows, axis=0, return_inverse=True, return_counts=True)
        sigs = [decode_row(r, self.type_labels, codes, label_rank) for r in uniq]
        labels = name_line_classes(self, sigs, counts)
        return inverse.ravel(), sigs, counts, labels

    @property
    def line_class(self) -> np.ndarray:
        return self._line_classes[0]

    @property
    def line_signatures(self):
        return self._line_classes[1]

    @property
    def line_class_counts(self) -> np.ndarray:
        return self._line_classes[2]

    @property
    def line_labels(self) -> list[str]:
        return self._line_classes[3]

    def line_type_counts(self) -> dict[str, int]:
        return {lab: int(c) for lab, c in zip(self.line_labels, self.line_class_counts)}

    def composition(self, sig) -> tuple[int, ...]:
        c = Counter(sig.member_types)
        return tuple(c.get(t, 0) for t in self.type_labels)

    def trivial_line_counts(self) -> dict[str, int]:
        return {trivial_label(lab): n for lab, n in self.type_counts().items()}


def name_line_classes(sp: VeldkampSpace, sigs, counts) -> list[str]:
    """Conventional labels where a reference census exists, else ordinal ones."""
    if sp.q == 3 and sp.k in (2, 3):
        ref = tables.K2_LINES if sp.k == 2 else tables.K3_LINES + tables.K3_STARRED_OVOID_LINES
        width = len(ref[0].composition)
        used, labels = set(), []
        h3 = sp.type_labels.index("H3") if "H3" in sp.type_labels else None
        for sig, n in zip(sigs, counts):
            comp = sp.composition(sig)
            comp = comp + (0,) * (width - len(comp))
            cands = [
                r
                for r in ref
                if r.label not in used
                and (r.core_points, r.core_lines, r.composition, r.count, r.projective)
                == (sig.core_points, sig.core_lines, comp, int(n), sig.projective)
            ]
            if len(cands) > 1 and h3 is not None:
                z = dict(sig.tiebreakers[1]).get("H3", 0)
                cands = [r for r in cands if tables.K3_ZERO_ORDER_HINTS.get(r.label, z) == z]
            if len(cands) == 1:
                used.add(cands[0].label)
                labels.append(cands[0].label)
            else:
                labels.append(f"?{len(labels) + 1}")
        return labels
    order = sorted(
        range(len(sigs)),
        key=lambda i: (
            not sigs[i].projective,
            -sigs[i].core_points,
            -sigs[i].core_lines,
            tuple(-x for x in sp.composition(sigs[i])),
            int(counts[i]),
            repr(sigs[i].tiebreakers),
        ),
    )
    labels = [""] * len(sigs)
    for rank, i in enumerate(order):
        labels[i] = str(rank + 1) + ("" if sigs[i].projective else "*")
    return labels


def _subset_space(q: int, k: int, lower=None, threads=None) -> VeldkampSpace:
    return VeldkampSpace(q, k, brute_force(build(q, k)), lower, threads)


@lru_cache(maxsize=None)
def space(q: int, k: int, threads: Optional[int] = None) -> VeldkampSpace:
    if k == 1:
        return _subset_space(q, 1, None, threads)
    lower = space(q, k - 1, threads)
    if k == 2:
        return _subset_space(q, 2, lower, threads)
    if k == 3:
        masks, _ = blowup_masks(lower.masks, lower.lines, q, lower.variety.point_count)
        v = build(q, k)
        uniq = np.unique(masks)
        bad = [int(m) for m in uniq if not is_hyperplane(v, int(m))]
        if bad:
            raise HyperplaneError(f"{len(bad)} blow-ups violate the hyperplane axiom")
        return VeldkampSpace(q, k, uniq, lower, threads)
    raise ValueError("VeldkampSpace is available for k <= 3")
