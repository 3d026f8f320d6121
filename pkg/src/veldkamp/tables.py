"""Expected censuses used to name classes and to verify computed results.

Rows are keyed by the combinatorial data that identifies a class; type
labels are the conventional ones ("H1".."H5", "H5*" for hyperplanes of
S_3(3); "1".."62" with starred non-projective variants for lines of
V(S_3(3)); "1".."43" for hyperplanes of S_4(3)).
"""

from __future__ import annotations

from typing import NamedTuple


class LineRow(NamedTuple):
    label: str
    core_points: int
    core_lines: int
    composition: tuple[int, ...]
    count: int
    projective: bool


class HyperplaneRow(NamedTuple):
    label: str
    points: int
    lines: int
    orders: tuple[int, ...]
    sections: tuple[int, ...]  # D, then one entry per lower hyperplane type
    vl: tuple[str, ...]
    count: int
    bs: str
    weight: tuple[int, ...]
    projective: bool


# --- S_2(3) ----------------------------------------------------------------

K2_HYPERPLANE_LABELS = {(7, 2): "H1", (4, 0): "H2"}
K2_TYPES = ("H1", "H2")

K2_LINES = [
    LineRow("1", 4, 1, (4, 0), 8, True),
    LineRow("2", 2, 0, (2, 2), 72, True),
    LineRow("3", 1, 0, (1, 3), 32, True),
    LineRow("4", 0, 0, (0, 4), 18, True),
    LineRow("4*", 0, 0, (0, 4), 6, False),
]

# --- S_3(3) ----------------------------------------------------------------

K3_TYPES = ("H1", "H2", "H3", "H4", "H5", "H5*")

K3_HYPERPLANES = [
    HyperplaneRow("H1", 37, 21, (0, 0, 27, 10), (3, 9, 0), ("I",), 64, "2", (1,), True),
    HyperplaneRow("H2", 28, 12, (0, 12, 12, 4), (1, 8, 3), ("1", "II"), 288, "3", (2,), True),
    HyperplaneRow("H3", 22, 6, (4, 12, 6, 0), (0, 6, 6), ("2",), 1728, "4", (2,), True),
    HyperplaneRow("H4", 19, 3, (9, 9, 0, 1), (0, 3, 9), ("3",), 768, "5", (3,), True),
    HyperplaneRow("H5", 16, 0, (16, 0, 0, 0), (0, 0, 12), ("4",), 432, "6", (3,), True),
    HyperplaneRow("H5*", 16, 0, (16, 0, 0, 0), (0, 0, 12), ("4*",), 144, "-", (), False),
]


def _line(label, pts, lns, comp, count, projective=True):
    comp = tuple(comp) + (0,) * (6 - len(comp))
    return LineRow(label, pts, lns, comp, count, projective)


# composition columns: H1, H2, H3, H4, H5, H5*
K3_LINES = [
    _line("1", 28, 15, (4, 0, 0, 0, 0), 48),
    _line("2", 22, 10, (2, 2, 0, 0, 0), 864),
    _line("3", 19, 9, (1, 3, 0, 0, 0), 384),
    _line("4", 18, 6, (2, 0, 2, 0, 0), 864),
    _line("5", 16, 8, (0, 4, 0, 0, 0), 216),
    _line("5*", 16, 8, (0, 4, 0, 0, 0), 72, False),
    _line("6", 16, 4, (0, 4, 0, 0, 0), 72),
    _line("7", 15, 4, (1, 1, 2, 0, 0), 10368),
    _line("8", 13, 4, (1, 0, 3, 0, 0), 3456),
    _line("9", 13, 3, (1, 1, 0, 2, 0), 3456),
    _line("10", 13, 3, (1, 0, 3, 0, 0), 6912),
    _line("11", 13, 3, (0, 3, 0, 1, 0), 2304),
    _line("12", 12, 3, (0, 2, 2, 0, 0), 20736),
    _line("13", 12, 2, (1, 0, 2, 1, 0), 20736),
    _line("14", 12, 2, (0, 2, 2, 0, 0), 2592),
    _line("15", 10, 3, (1, 0, 0, 3, 0), 256),
    _line("16", 10, 2, (0, 1, 3, 0, 0), 20736),
    _line("17", 10, 2, (0, 1, 3, 0, 0), 3456),
    _line("18", 10, 1, (0, 2, 0, 2, 0), 3456),
    _line("19", 10, 1, (0, 1, 3, 0, 0), 13824),
    _line("20", 10, 0, (1, 0, 1, 1, 1), 6912),
    _line("21", 9, 2, (0, 1, 2, 1, 0), 20736),
    _line("22", 9, 2, (0, 1, 2, 1, 0), 20736),
    _line("23", 9, 1, (0, 1, 2, 1, 0), 20736),
    _line("24", 9, 0, (1, 0, 1, 0, 2), 6912),
    _line("25", 9, 0, (1, 0, 0, 2, 1), 6912),
    _line("26", 8, 2, (0, 0, 4, 0, 0), 3888),
    _line("26*", 8, 2, (0, 0, 4, 0, 0), 1296, False),
    _line("27", 8, 1, (0, 0, 4, 0, 0), 10368),
    _line("28", 8, 1, (0, 0, 4, 0, 0), 10368),
    _line("29", 8, 1, (0, 0, 4, 0, 0), 41472),
    _line("30", 8, 0, (0, 2, 0, 0, 2), 3888),
    _line("31", 8, 0, (0, 1, 2, 0, 1), 10368),
    _line("32", 8, 0, (0, 1, 2, 0, 1), 20736),
    _line("33", 8, 0, (0, 1, 1, 2, 0), 10368),
    _line("34", 8, 0, (0, 1, 1, 2, 0), 20736),
    _line("35", 8, 0, (0, 0, 4, 0, 0), 5184),
    _line("36", 7, 1, (0, 1, 0, 3, 0), 2304),
    _line("37", 7, 1, (0, 0, 3, 1, 0), 41472),
    _line("38", 7, 0, (0, 1, 1, 1, 1), 41472),
    _line("39", 7, 0, (0, 0, 3, 1, 0), 2304),
    _line("40", 7, 0, (0, 0, 3, 1, 0), 69120),
    _line("41", 6, 1, (0, 0, 2, 2, 0), 20736),
    _line("42", 6, 0, (0, 1, 1, 0, 2), 10368),
    _line("43", 6, 0, (0, 1, 0, 2, 1), 10368),
    _line("44", 6, 0, (0, 0, 3, 0, 1), 6912),
    _line("45", 6, 0, (0, 0, 3, 0, 1), 62208),
    _line("46", 6, 0, (0, 0, 2, 2, 0), 62208),
    _line("47", 6, 0, (0, 0, 2, 2, 0), 6912),
    _line("48", 5, 0, (0, 0, 2, 1, 1), 82944),
    _line("49", 5, 0, (0, 0, 2, 1, 1), 20736),
    _line("50", 5, 0, (0, 0, 1, 3, 0), 20736),
    _line("51", 4, 1, (0, 0, 0, 4, 0), 1728),
    _line("51*", 4, 1, (0, 0, 0, 4, 0), 576, False),
    _line("52", 4, 0, (0, 1, 0, 0, 3), 1728),
    _line("53", 4, 0, (0, 0, 2, 0, 2), 20736),
    _line("54", 4, 0, (0, 0, 2, 0, 2), 10368),
    _line("55", 4, 0, (0, 0, 1, 2, 1), 20736),
    _line("56", 4, 0, (0, 0, 1, 2, 1), 13824),
    _line("57", 4, 0, (0, 0, 0, 4, 0), 3456),
    _line("58", 4, 0, (0, 0, 0, 4, 0), 576),
    _line("59", 3, 0, (0, 0, 1, 1, 2), 13824),
    _line("60", 2, 0, (0, 0, 0, 2, 2), 10368),
    _line("61", 1, 0, (0, 0, 0, 1, 3), 2304),
    _line("62", 0, 0, (0, 0, 0, 0, 4), 756),
    _line("62*", 0, 0, (0, 0, 0, 0, 4), 324, False),
]

# lines with a non-projective ovoid among their members
K3_STARRED_OVOID_LINES = [
    _line("30*", 8, 0, (0, 2, 0, 0, 0, 2), 1296, False),
    _line("44*", 6, 0, (0, 0, 3, 0, 0, 1), 2304, False),
    _line("52*", 4, 0, (0, 1, 0, 0, 0, 3), 576, False),
    _line("62_1*", 0, 0, (0, 0, 0, 0, 2, 2), 864, False),
    _line("62_2*", 0, 0, (0, 0, 0, 0, 0, 4), 360, False),
]

# pairs of classes with identical core data, told apart by the number of
# zero-order points of the H3 members that lie in the core
K3_ZERO_ORDER_HINTS = {"21": 2, "22": 0, "27": 4, "28": 8}

# classes that are unions of two orbits of the stabilizer group
K3_ORBIT_SPLITS = {
    "26": (1296, 2592),
    "30": (1296, 2592),
    "40": (27648, 41472),
    "45": (20736, 41472),
    "46": (20736, 41472),
    "48": (41472, 41472),
    "62": (108, 648),
}

K3_PROJECTIVE_LINES = 896260
K3_NONPROJECTIVE_PROJECTIVE_MEMBERS = 2268
K3_LINES_WITH_STARRED_OVOIDS = 5400

# --- S_4(3) ----------------------------------------------------------------


def _k4(label, pts, lns, orders, sections, vl, count, bs, weight):
    w = weight if isinstance(weight, tuple) else (weight,)
    return HyperplaneRow(label, pts, lns, orders, sections, tuple(vl), count, bs, w, True)


# sections: D, H1, H2, H3, H4, H5
K4_HYPERPLANES = [
    _k4("1", 175, 148, (0, 0, 0, 108, 67), (4, 12, 0, 0, 0, 0), ["I"], 256, "2", 1),
    _k4("2", 148, 112, (0, 0, 36, 72, 40), (2, 8, 6, 0, 0, 0), ["II", "1"], 2304, "3", 2),
    _k4("3", 130, 88, (0, 12, 36, 60, 22), (1, 6, 6, 3, 0, 0), ["III", "2"], 27648, "4", 2),
    _k4("4", 121, 76, (0, 27, 27, 45, 22), (1, 3, 9, 0, 3, 0), ["IV", "3"], 12288, "6", 3),
    _k4("5", 118, 72, (8, 0, 48, 56, 6), (0, 8, 0, 8, 0, 0), ["4"], 20736, "5", 2),
    _k4("6", 112, 64, (0, 48, 0, 48, 16), (1, 0, 12, 0, 0, 3), ["V", "5"], 6912, "7", 3),
    _k4("7", 112, 64, (0, 0, 96, 0, 16), (0, 0, 16, 0, 0, 0), ["6"], 1728, "18", 4),
    _k4("8", 109, 60, (4, 16, 48, 36, 5), (0, 4, 4, 8, 0, 0), ["7"], 248832, "11", 3),
    _k4("9", 103, 52, (12, 12, 48, 24, 7), (0, 4, 2, 6, 4, 0), ["8", "9"], 165888, "8", 3),
    _k4("10", 103, 52, (6, 21, 45, 27, 4), (0, 3, 3, 9, 1, 0), ["10", "11"], 221184, "9", 3),
    _k4("11", 100, 48, (6, 26, 42, 22, 4), (0, 2, 4, 8, 2, 0), ["12", "13"], 995328, "12", 3),
    _k4("12", 100, 48, (0, 32, 48, 16, 4), (0, 0, 8, 8, 0, 0), ["14"], 62208, "24", 4),
    _k4("13", 94, 40, (27, 0, 54, 0, 13), (0, 4, 0, 0, 12, 0), ["15"], 6144, "16", 4),
    _k4("14", 94, 40, (6, 36, 36, 12, 4), (0, 0, 6, 6, 4, 0), ["17", "18"], 165888, "20", 4),
    _k4("15", 94, 40, (8, 33, 33, 19, 1), (0, 1, 3, 10, 1, 1), ["16", "20"], 663552, "10", 3),
    _k4("16", 94, 40, (3, 36, 42, 12, 1), (0, 0, 4, 12, 0, 0), ["19"], 331776, "22", 4),
    _k4("17", 91, 36, (13, 33, 27, 15, 3), (0, 1, 3, 6, 5, 1), ["21", "25"], 663552, "17", 4),
    _k4("18", 91, 36, (15, 27, 33, 13, 3), (0, 1, 3, 7, 3, 2), ["22", "24"], 663552, "13", 3),
    _k4("19", 91, 36, (8, 36, 36, 8, 3), (0, 0, 4, 8, 4, 0), ["23"], 497664, "25", 4),
    _k4("20", 88, 32, (16, 32, 24, 16, 0), (0, 0, 4, 8, 0, 4), ["26", "30"], 186624, "27+30", 4),
    _k4("21", 88, 32, (8, 44, 24, 12, 0), (0, 0, 2, 10, 4, 0), ["28", "33"], 497664, "28", 4),
    _k4("22", 88, 32, (10, 38, 30, 10, 0), (0, 0, 2, 11, 2, 1), ["29", "32", "34"], 1990656, "31", 4),
    _k4("23", 88, 32, (12, 32, 36, 8, 0), (0, 0, 2, 12, 0, 2), ["27", "31"], 497664, "29", 4),
    _k4("24", 88, 32, (8, 32, 48, 0, 0), (0, 0, 0, 16, 0, 0), ["35"], 124416, "46", 4),
    _k4("25", 85, 28, (18, 36, 24, 0, 7), (0, 0, 4, 0, 12, 0), ["36"], 55296, "19", 4),
    _k4("26", 85, 28, (16, 36, 24, 8, 1), (0, 0, 2, 8, 4, 2), ["37", "38"], 1990656, "23", 4),
    _k4("27", 85, 28, (12, 36, 36, 0, 1), (0, 0, 0, 12, 4, 0), ["39"], 55296, "14", 3),
    _k4("28", 85, 28, (11, 40, 30, 4, 0), (0, 0, 0, 12, 4, 0), ["40"], 1658880, "39+44", 4),
    _k4("29", 82, 24, (22, 34, 18, 6, 2), (0, 0, 2, 5, 6, 3), ["41", "42", "43"], 995328, "26", 4),
    _k4("30", 82, 24, (14, 48, 12, 8, 0), (0, 0, 0, 8, 8, 0), ["47"], 165888, "40", 4),
    _k4("31", 82, 24, (18, 36, 24, 4, 0), (0, 0, 0, 10, 4, 2), ["45", "46"], 2985984, "36+45", 4),
    _k4("32", 82, 24, (22, 24, 36, 0, 0), (0, 0, 0, 12, 0, 4), ["44"], 165888, "15", 3),
    _k4("33", 79, 20, (22, 40, 12, 4, 1), (0, 0, 0, 6, 8, 2), ["49", "50"], 995328, "35", 4),
    _k4("34", 79, 20, (25, 32, 18, 4, 0), (0, 0, 0, 8, 4, 4), ["48"], 1990656, "37+42", 4),
    _k4("35", 76, 16, (36, 24, 12, 0, 4), (0, 0, 2, 0, 8, 6), ["51", "52"], 82944, "21", 4),
    _k4("36", 76, 16, (24, 48, 0, 0, 4), (0, 0, 0, 0, 16, 0), ["58"], 13824, "32", 4),
    _k4("37", 76, 16, (29, 36, 6, 4, 1), (0, 0, 0, 4, 8, 4), ["56"], 331776, "34", 4),
    _k4("38", 76, 16, (32, 28, 12, 4, 0), (0, 0, 0, 6, 4, 6), ["53", "55"], 995328, "43", 4),
    _k4("39", 76, 16, (32, 28, 12, 4, 0), (0, 0, 0, 6, 4, 6), ["54", "57"], 331776, "38", 4),
    _k4("40", 73, 12, (39, 24, 6, 4, 0), (0, 0, 0, 4, 4, 8), ["59"], 331776, "41", 4),
    _k4("41", 70, 8, (44, 24, 0, 0, 2), (0, 0, 0, 0, 8, 8), ["60"], 248832, "48", 5),
    _k4("42", 67, 4, (54, 12, 0, 0, 1), (0, 0, 0, 0, 4, 12), ["61"], 55296, "33", 4),
    _k4("43", 64, 0, (64, 0, 0, 0, 0), (0, 0, 0, 0, 0, 16), ["62"], 18144, "47+49", (4, 5)),
]

K4_PROJECTIVE_TOTAL = 21523360

# types made of two orbits; the ovoid type is the worked example with known sizes
K4_SPLIT_TYPES = ("20", "28", "31", "34", "43")
K4_OVOID_SUBTYPES = (2592, 15552)

K4_QUADRIC_TYPES = (
    "1", "2", "3", "4", "6", "7", "9", "10", "13", "14", "15", "16",
    "25", "26", "27", "28", "35", "36", "37", "38", "39", "42",
)
K4_QUADRIC_TOTAL = 7176640

K4_SYMPLECTIC_TYPES = ("1", "2", "4", "7", "13", "25", "36")
K4_SYMPLECTIC_TOTAL = 91840

K4_NONPROJECTIVE = [
    HyperplaneRow("6*", 112, 64, (0, 48, 0, 48, 16), (1, 0, 12, 0, 0, 3), ("5*", "V*"), 2304, "-", (), False),
    HyperplaneRow("20*", 88, 32, (16, 32, 24, 16, 0), (0, 0, 4, 8, 0, 4), ("26*",), 31104, "-", (), False),
    HyperplaneRow("35*", 76, 16, (36, 24, 12, 0, 4), (0, 0, 2, 0, 8, 6), ("51*",), 13824, "-", (), False),
    HyperplaneRow("43*", 64, 0, (64, 0, 0, 0, 0), (0, 0, 0, 0, 0, 16), ("62*",), 7776, "-", (), False),
]
K4_NONPROJECTIVE_TOTAL = 55008

# --- binary ----------------------------------------------------------------

BINARY_COUNTS = {2: (15, 35), 3: (255, 10795)}
BINARY_K3_HYPERPLANE_TYPES = 5
BINARY_K3_LINE_TYPES = 41

# ternary line types reached by extending binary lines, and the single
# binary class whose extension is not projective
BINARY_EXTENSION_TARGETS = (
    "1", "2", "3", "4", "6", "7", "10", "11", "15", "16", "17", "18", "20", "23", "44*",
)
BINARY_EXTENSION_COUNT = 15
