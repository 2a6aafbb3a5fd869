"""Triangular prisms: rising/falling side cuts and the 3-tet split.

A prism has bottom triangle (b0, b1, b2) and top (t0, t1, t2) with each
``t_i`` above ``b_i``; side quad ``i`` is the loop b_i -> b_{i+1} -> t_{i+1}
-> t_i, counterclockwise seen from outside. Its diagonal is rising (R) when
it is {b_i, t_{i+1}} and falling (F) when it is {b_{i+1}, t_i}.

Prism-local labels used by the table: b0, b1, b2 = 0, 1, 2 and
t0, t1, t2 = 3, 4, 5.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import BadDiagonal, DegeneratePrism, IllegalConfig


class Orientation(enum.Enum):
    R = "R"
    F = "F"

    def flipped(self) -> "Orientation":
        return Orientation.F if self is Orientation.R else Orientation.R


class PrismClass(enum.Enum):
    VALID = "Valid"
    DEGENERATE = "Degenerate"


R, F = Orientation.R, Orientation.F


@dataclass(frozen=True)
class Prism:
    bottom: tuple
    top: tuple

    def __post_init__(self):
        verts = tuple(self.bottom) + tuple(self.top)
        if len(self.bottom) != 3 or len(self.top) != 3 or len(set(verts)) != 6:
            raise IllegalConfig(f"a prism needs 6 distinct vertices, got {verts}")

    @property
    def vertices(self) -> tuple:
        return tuple(self.bottom) + tuple(self.top)

    def side(self, i: int) -> tuple:
        j = (i + 1) % 3
        return (self.bottom[i], self.bottom[j], self.top[j], self.top[i])

    def rising(self, i: int) -> frozenset:
        return frozenset((self.bottom[i], self.top[(i + 1) % 3]))

    def falling(self, i: int) -> frozenset:
        return frozenset((self.bottom[(i + 1) % 3], self.top[i]))


def side_orientation(prism: Prism, side_index: int, diagonal) -> Orientation:
    pair = frozenset(diagonal)
    if pair == prism.rising(side_index):
        return R
    if pair == prism.falling(side_index):
        return F
    raise BadDiagonal(f"{tuple(diagonal)} is not a diagonal of side {side_index} {prism.side(side_index)}")


def classify_prism(o0: Orientation, o1: Orientation, o2: Orientation) -> PrismClass:
    """RRR and FFF are the only side-cut triples with no tetrahedralization."""
    return PrismClass.DEGENERATE if o0 is o1 is o2 else PrismClass.VALID


# Orientation triple -> 3 tets in prism-local labels, each positively oriented
# for the reference prism b=(0,0,0),(1,0,0),(0,1,0), t=b+(0,0,1).
_TABLE = {
    (R, R, F): ((0, 1, 2, 5), (0, 1, 5, 4), (0, 3, 4, 5)),
    (R, F, R): ((0, 1, 2, 4), (0, 2, 3, 4), (2, 3, 4, 5)),
    (R, F, F): ((0, 1, 2, 4), (0, 2, 5, 4), (0, 3, 4, 5)),
    (F, R, R): ((0, 1, 2, 3), (1, 2, 3, 5), (1, 3, 4, 5)),
    (F, R, F): ((0, 1, 2, 5), (0, 1, 5, 3), (1, 3, 4, 5)),
    (F, F, R): ((0, 1, 2, 3), (1, 2, 3, 4), (2, 3, 4, 5)),
}


def prism_decomposition_table() -> dict:
    return dict(_TABLE)


def _reference_det6(tet):
    ref = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1))
    a, b, c, d = (ref[v] for v in tet)
    u = [b[k] - a[k] for k in range(3)]
    v = [c[k] - a[k] for k in range(3)]
    w = [d[k] - a[k] for k in range(3)]
    return (u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
            + u[2] * (v[0] * w[1] - v[1] * w[0]))


def peel_decomposition(orientations) -> tuple:
    """Constructive 3-tet split, independent of the table.

    Find two consecutive sides whose diagonals meet at a vertex x; the tet
    spanned by x and the opposite cap comes off, leaving a pyramid with apex
    x over the third side, which that side's diagonal splits in two.
    """
    o = tuple(orientations)
    if classify_prism(*o) is PrismClass.DEGENERATE:
        raise DegeneratePrism(f"{''.join(x.value for x in o)} has no tetrahedralization")
    i = next(i for i in range(3) if o[i] is not o[(i + 1) % 3])
    j = (i + 1) % 3
    if o[i] is F:
        x, first = j, (j, 3, 4, 5)
    else:
        x, first = 3 + j, (3 + j, 0, 1, 2)
    k = (i + 2) % 3
    m = (k + 1) % 3
    quad = (k, m, 3 + m, 3 + k)
    p, q = (k, 3 + m) if o[k] is R else (m, 3 + k)
    r, s = (v for v in quad if v not in (p, q))
    out = []
    for t in (first, (x, p, q, r), (x, p, q, s)):
        t = tuple(sorted(t))
        out.append(t if _reference_det6(t) > 0 else (t[0], t[1], t[3], t[2]))
    return tuple(sorted(out))


def prism_orientations(prism: Prism, diagonals) -> tuple:
    return tuple(side_orientation(prism, i, d) for i, d in enumerate(diagonals))


def triangulate_prism(prism: Prism, diagonals) -> list:
    """Split a prism into 3 tets honouring the three side diagonals.

    Tets are returned in the prism's own vertex ids and are positively
    oriented whenever the prism is (bottom triangle counterclockwise seen
    from the top cap).
    """
    if len(diagonals) != 3:
        raise IllegalConfig("a prism has exactly three side diagonals")
    o = prism_orientations(prism, diagonals)
    if classify_prism(*o) is PrismClass.DEGENERATE:
        raise DegeneratePrism(f"side cuts {''.join(x.value for x in o)} cannot be tetrahedralized")
    labels = prism.vertices
    return [tuple(labels[v] for v in t) for t in _TABLE[o]]
