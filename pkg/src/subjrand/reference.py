"""Published tables that the reproduction code is checked against.

Codes are base-10 encodings of 8-bit windows (O = 0, X = 1).
"""
from __future__ import annotations

from dataclasses import dataclass

from .rating import SRValue

V = SRValue.of


@dataclass(frozen=True)
class Table1Row:
    finite: SRValue
    context: SRValue  # as printed
    members: tuple[int, ...]


TABLE1 = (
    Table1Row(V(5, 6), V(5, 6), (77,)),
    Table1Row(V(5, 5), V(5, 5), (105,)),
    Table1Row(V(5, 4), V(5, 4), (41, 69, 74, 82, 89, 93, 101, 107)),
    Table1Row(V(5, 3), V(5, 3), (38, 44, 46, 50, 52, 66, 70, 76, 78, 98, 100, 110, 114, 116, 118)),
    Table1Row(V(4, 6), V(4, 6), (18, 22, 37, 45, 54, 72, 75, 90, 91, 104, 108)),
    Table1Row(V(4, 5), V(4, 5), (20, 26, 40, 43, 53, 58, 81, 83, 86, 88, 92, 94, 106, 117, 122)),
    Table1Row(V(4, 7), V(1, 4.5), (34, 68, 102)),
    Table1Row(V(4, 4), V(4, 4), (9, 11, 13, 19, 23, 25, 27, 29, 33, 35, 39, 47, 49, 55, 57,
                                 59, 61, 65, 67, 71, 79, 97, 99, 103, 111, 113, 115, 121, 123, 125)),
    Table1Row(V(3, 7), V(3, 7), (36, 73, 109)),
    Table1Row(V(3, 6), V(3, 6), (5, 10, 21, 42, 80, 84, 87, 95)),
    Table1Row(V(4, 4), V(3, 5.5), (17, 51, 119)),
    Table1Row(V(3, 5), V(3, 5), (2, 4, 6, 8, 12, 14, 16, 24, 28, 30, 32, 48, 56, 60, 62, 64,
                                 96, 112, 120, 124, 126)),
    Table1Row(V(2, 7), V(2, 7), (85,)),
    Table1Row(V(2, 6), V(2, 6), (1, 3, 7, 15, 31, 63, 127)),
    Table1Row(V(1, 7), V(1, 7), (0,)),
)

# Row 7 prints alpha * delta^4.5; the duplication rule gives alpha^4 * delta^4.5,
# which is also the only value consistent with the row's position.
TABLE1_ROW7_INDEX = 6
TABLE1_ROW7_CONTEXT = V(4, 4.5)
TABLE1_DEVIATION_NOTE = (
    "Table 1 row 7 (codes 34, 68, 102) prints the context-sensitive value "
    "a^1 d^4.5; the duplication rule yields a^4 d^4.5 = dp+(OXXO) + [1,3.5] = "
    "[3,1] + [1,3.5], the only value consistent with the row's position "
    "between a^4 d^5 and a^4 d^4. Reproduced as [4,4.5]."
)


def table1_context(row_index: int) -> SRValue:
    """Context value of a Table 1 row with the row-7 correction applied."""
    if row_index == TABLE1_ROW7_INDEX:
        return TABLE1_ROW7_CONTEXT
    return TABLE1[row_index].context


@dataclass(frozen=True)
class Table2Row:
    threshold: SRValue
    vertices: tuple[int, ...]  # one entry per non-trivial component
    arcs: tuple[int, ...]
    cycle_basis: tuple[int, ...]
    members: tuple[frozenset[int], ...] | None = None  # explicit component lists
    excluded: frozenset[int] | None = None  # S([m,n]) minus C([m,n])


C1_53 = frozenset({44, 89, 178, 101, 203, 150})
C2_53 = frozenset({77, 154, 52, 105, 211, 166})
C_46_EXTRA = frozenset({22, 38, 41, 45, 46, 54, 69, 74, 75, 82, 90, 93, 100, 104, 107, 108, 116,
                        139, 147, 148, 151, 155, 162, 165, 173, 180, 181, 186, 201, 209, 210, 214,
                        217, 233})
_EXCL_44 = frozenset({190, 125, 65, 130})

TABLE2 = (
    Table2Row(V(5, 3), (6, 6), (6, 6), (1, 1), members=(C1_53, C2_53)),
    Table2Row(V(4, 6), (46,), (58,), (13,), members=(C1_53 | C2_53 | C_46_EXTRA,)),
    Table2Row(V(4, 5), (80,), (120,), (41,),
              excluded=frozenset({18, 37, 50, 66, 72, 76, 91, 94, 110, 118, 122, 133, 137, 145,
                                  161, 164, 179, 183, 189, 205, 218, 237})),
    Table2Row(V(4, 4.5), (102,), (158,), (57,),
              excluded=frozenset({66, 94, 122, 133, 161, 189})),
    Table2Row(V(4, 4), (164,), (280,), (117,), excluded=_EXCL_44),
    Table2Row(V(3, 7), (170,), (298,), (129,), excluded=_EXCL_44),
    Table2Row(V(3, 6), (190,), (342,), (153,), excluded=frozenset()),
    Table2Row(V(3, 5.5), (196,), (360,), (165,), excluded=frozenset()),
    Table2Row(V(3, 5), (238,), (462,), (225,), excluded=frozenset()),
    Table2Row(V(2, 7), (240,), (467,), (228,), excluded=frozenset()),
    Table2Row(V(2, 6), (254,), (505,), (252,), excluded=frozenset()),
    Table2Row(V(1, 7), (256,), (512,), (254,), excluded=frozenset()),
)

TABLE2_THRESHOLDS = tuple(row.threshold for row in TABLE2)
