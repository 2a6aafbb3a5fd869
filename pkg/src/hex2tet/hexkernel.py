"""Single-hexahedron triangulation from a partial face-cut prescription.

All routines work in local cube labels (v0..v7, plus 8 for a Steiner
vertex) and are pure functions of the config, so results are cached by the
0/1/None class tuple.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Optional

from .core import (
    EVEN,
    FACE_DIAGONALS,
    FACES,
    Method,
    OPPOSITE,
    PAIRS,
    REF_COORDS,
    CUBE_EDGES,
    diagonal_class,
)
from .errors import (
    BadDiagonal,
    DifferentOrientationPair,
    IllegalConfig,
    NotCut,
    NotFiveEligible,
)
from .prism import Prism, PrismClass, classify_prism, prism_orientations, triangulate_prism

STEINER_VERTEX = 8

_FACE_INDEX = {frozenset(q): f for f, q in enumerate(FACES)}
# coordinate axis normal to each face
_FACE_AXIS = (2, 2, 1, 0, 1, 0)


@dataclass(frozen=True)
class HexCutConfig:
    """Per local face: ``None`` (uncut) or the sorted local diagonal pair."""

    diagonals: tuple = (None,) * 6

    def __post_init__(self):
        if len(self.diagonals) != 6:
            raise IllegalConfig("a hex config has exactly 6 faces")
        norm = []
        for f, d in enumerate(self.diagonals):
            if d is None:
                norm.append(None)
                continue
            try:
                norm.append(FACE_DIAGONALS[f][diagonal_class(f, d)])
            except BadDiagonal as exc:
                raise IllegalConfig(str(exc)) from None
        object.__setattr__(self, "diagonals", tuple(norm))

    @classmethod
    def from_classes(cls, classes) -> "HexCutConfig":
        if len(classes) != 6 or any(c not in (None, 0, 1) for c in classes):
            raise IllegalConfig(f"bad class tuple {classes!r}")
        return cls(tuple(None if c is None else FACE_DIAGONALS[f][c] for f, c in enumerate(classes)))

    @classmethod
    def from_id(cls, config_id: int) -> "HexCutConfig":
        """Fully cut config; bit f selects the class-1 diagonal of face f."""
        if not 0 <= config_id < 64:
            raise IllegalConfig(f"config id {config_id} outside 0..63")
        return cls.from_classes(tuple((config_id >> f) & 1 for f in range(6)))

    @cached_property
    def classes(self) -> tuple:
        return tuple(None if d is None else FACE_DIAGONALS[f].index(d) for f, d in enumerate(self.diagonals))

    @property
    def n_cut(self) -> int:
        return sum(d is not None for d in self.diagonals)

    @property
    def complete(self) -> bool:
        return self.n_cut == 6

    @property
    def config_id(self) -> int:
        if not self.complete:
            raise IllegalConfig("only fully cut configs have an id")
        return sum(c << f for f, c in enumerate(self.classes))

    def with_cut(self, face: int, diagonal) -> "HexCutConfig":
        d = list(self.diagonals)
        d[face] = diagonal
        return HexCutConfig(tuple(d))


class OutcomeKind(enum.Enum):
    SIX = "Six"
    FIVE = "Five"
    STEINER = "Steiner"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class HexOutcome:
    kind: OutcomeKind
    config: HexCutConfig
    tets: tuple = ()
    witness: tuple = ()
    split_pair: Optional[tuple] = None
    main_diagonal: Optional[tuple] = None
    case: str = ""

    @cached_property
    def method(self) -> Optional[Method]:
        if self.kind is OutcomeKind.FIVE:
            return Method.FIVE
        if self.kind is OutcomeKind.STEINER:
            return Method.STEINER12
        if self.kind is OutcomeKind.SIX:
            common = set.intersection(*(set(t) for t in self.tets))
            return Method.MARCHING6 if len(common) >= 2 else Method.PRISM_SPLIT6
        return None

    @property
    def steiner_vertex(self) -> Optional[int]:
        return STEINER_VERTEX if self.kind is OutcomeKind.STEINER else None


def _classes(config) -> tuple:
    if isinstance(config, HexCutConfig):
        return config.classes
    return _checked(tuple(config))


@lru_cache(maxsize=None)
def _checked(classes: tuple) -> tuple:
    return HexCutConfig.from_classes(classes).classes


# ------------------------------------------------------------ predicates

def different_pairs(classes) -> list:
    """Fully cut opposite pairs whose diagonals are not parallel (same parity class)."""
    return [(f, g) for f, g in PAIRS
            if classes[f] is not None and classes[f] == classes[g]]


def same_pairs(classes) -> list:
    return [(f, g) for f, g in PAIRS
            if classes[f] is not None and classes[g] is not None and classes[f] != classes[g]]


def offending_faces(classes) -> tuple:
    """The four cuts of two Different pairs lying in different parity classes, or ()."""
    diff = different_pairs(classes)
    for i in range(len(diff)):
        for j in range(i + 1, len(diff)):
            p, q = diff[i], diff[j]
            if classes[p[0]] != classes[q[0]]:
                return tuple(sorted(p + q))
    return ()


def is_five_eligible(classes) -> bool:
    cut = {c for c in classes if c is not None}
    return len(cut) <= 1


def is_isolated_cut(config, face: int, among=None) -> bool:
    """True iff no other cut diagonal (optionally restricted to ``among``) touches this one."""
    cls = _classes(config)
    if cls[face] is None:
        raise NotCut(f"face {face} is not cut")
    mine = set(FACE_DIAGONALS[face][cls[face]])
    faces = range(6) if among is None else among
    for g in faces:
        if g != face and cls[g] is not None and mine & set(FACE_DIAGONALS[g][cls[g]]):
            return False
    return True


def describe_case(classes) -> str:
    n = sum(c is not None for c in classes)
    same, diff = same_pairs(classes), different_pairs(classes)
    if n <= 1:
        return "0-1 cuts"
    if n <= 3:
        if diff:
            return f"{n} cuts: opposite pair, different orientation"
        if same:
            return f"{n} cuts: opposite pair, same orientation"
        return f"{n} cuts: no opposite pair"
    label = "6 cuts" if n == 6 else "4-5 cuts"
    if offending_faces(classes):
        return f"{label}: two different pairs, isolated"
    if len(diff) >= 2:
        return f"{label}: two different pairs meeting"
    if same:
        return f"{label}: same-orientation pair"
    return f"{label}: one different pair"


# ------------------------------------------------------------- prism split

def _partner(v: int, axis: int) -> int:
    c = list(REF_COORDS[v])
    c[axis] = 1 - c[axis]
    return REF_COORDS.index(tuple(c))


def _det6(tet, coords=REF_COORDS):
    a, b, c, d = (coords[v] for v in tet)
    u = [b[k] - a[k] for k in range(3)]
    v = [c[k] - a[k] for k in range(3)]
    w = [d[k] - a[k] for k in range(3)]
    return (u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
            + u[2] * (v[0] * w[1] - v[1] * w[0]))


def rectangle_diagonals(pair, classes) -> list:
    """The two main-diagonal choices of the plane spanned by a Same pair, sorted."""
    f, g = pair
    df, dg = FACE_DIAGONALS[f][classes[f]], FACE_DIAGONALS[g][classes[g]]
    out = [tuple(sorted((x, y))) for x in df for y in dg if frozenset((x, y)) not in CUBE_EDGES]
    return sorted(out)


def split_hex_into_prisms(config, face_pair, main_diagonal):
    """Cut the hex along the diagonal plane of a Same-orientation pair.

    Returns two prisms (caps on the pair's faces, bottom on ``face_pair[0]``)
    and the main diagonal, which is a side cut of both.
    """
    cls = _classes(config)
    f, g = face_pair
    if OPPOSITE[f] != g:
        raise IllegalConfig(f"faces {f} and {g} are not opposite")
    if cls[f] is None or cls[g] is None:
        raise NotCut("both faces of the splitting pair must carry a diagonal")
    if cls[f] == cls[g]:
        raise DifferentOrientationPair(f"faces {f} and {g} carry non-parallel diagonals")
    main = tuple(sorted(main_diagonal))
    if main not in rectangle_diagonals((f, g), cls):
        raise BadDiagonal(f"{main} is not a diagonal of the splitting plane")
    axis = _FACE_AXIS[f]
    p, q = FACE_DIAGONALS[f][cls[f]]
    prisms = []
    for r in sorted(set(FACES[f]) - {p, q}):
        b = (p, r, q)
        if _det6((p, r, q, _partner(p, axis))) < 0:
            b = (p, q, r)
        prisms.append(Prism(b, tuple(_partner(v, axis) for v in b)))
    return prisms[0], prisms[1], main


def _prism_side_diagonals(prism, main, cls):
    """Side diagonals of one prism; free hex faces get the diagonal touching ``main``."""
    diags = []
    for i in range(3):
        side = frozenset(prism.side(i))
        h = _FACE_INDEX.get(side)
        if h is None:
            diags.append(main)
            continue
        if cls[h] is None:
            cls[h] = 0 if set(FACE_DIAGONALS[h][0]) & set(main) else 1
        diags.append(FACE_DIAGONALS[h][cls[h]])
    return diags


def _split_candidates(classes):
    """Splitting pairs with cap classes, in preference order.

    Existing Same pairs first; otherwise an uncut pair is cut in the same
    orientation, then a half-cut pair is completed to match.
    """
    out = []
    for f, g in same_pairs(classes):
        out.append(((f, g), (classes[f], classes[g])))
    for f, g in PAIRS:
        if classes[f] is None and classes[g] is None:
            out += [((f, g), (0, 1)), ((f, g), (1, 0))]
    for f, g in PAIRS:
        if (classes[f] is None) != (classes[g] is None):
            c = classes[f] if classes[f] is not None else 1 - classes[g]
            out.append(((f, g), (c, 1 - c)))
    return out


def prism_decomposition(classes):
    """Six-tet split via two prisms, or None when no splitting plane works."""
    for (f, g), (cf, cg) in _split_candidates(classes):
        base = list(classes)
        base[f], base[g] = cf, cg
        for main in rectangle_diagonals((f, g), base):
            cls = list(base)
            p1, p2, _ = split_hex_into_prisms(tuple(cls), (f, g), main)
            tets = []
            for prism in (p1, p2):
                diags = _prism_side_diagonals(prism, main, cls)
                if classify_prism(*prism_orientations(prism, diags)) is PrismClass.DEGENERATE:
                    break
                tets += triangulate_prism(prism, diags)
            else:
                return tuple(cls), (f, g), main, tuple(tets)
    return None


# ------------------------------------------------------------ five and twelve

def _five_class(classes) -> int:
    cut = {c for c in classes if c is not None}
    if len(cut) > 1:
        raise NotFiveEligible("cut diagonals span both parity classes")
    return cut.pop() if cut else 0


def _oriented(tet, coords=REF_COORDS):
    return tet if _det6(tet, coords) > 0 else (tet[0], tet[1], tet[3], tet[2])


def five_tets(cls: int) -> tuple:
    """Four corner tets around the off-class vertices plus the central tet."""
    inner = sorted(EVEN if cls == 0 else set(range(8)) - EVEN)
    corners = []
    for c in sorted(set(range(8)) - set(inner)):
        nbrs = sorted(v for v in inner if frozenset((c, v)) in CUBE_EDGES)
        corners.append(_oriented((c, *nbrs)))
    return tuple(corners) + (_oriented(tuple(inner)),)


def five_tet_decompose(config) -> HexOutcome:
    cls = _classes(config)
    k = _five_class(cls)
    done = HexCutConfig.from_classes((k,) * 6)
    return HexOutcome(OutcomeKind.FIVE, done, five_tets(k), case=describe_case(cls))


def six_from_five(cls: int) -> tuple:
    """A six-tet split with the five-tet boundary: merge the central tet with
    one corner tet and re-split the bipyramid along the corner's space diagonal."""
    inner = sorted(EVEN if cls == 0 else set(range(8)) - EVEN)
    outer = sorted(set(range(8)) - set(inner))
    c = outer[0]
    apex = _partner(_partner(_partner(c, 0), 1), 2)
    nbrs = sorted(v for v in inner if frozenset((c, v)) in CUBE_EDGES)
    tets = [t for t in five_tets(cls)[:-1] if c not in t]
    for i in range(3):
        for j in range(i + 1, 3):
            tets.append(_oriented(tuple(sorted((c, apex, nbrs[i], nbrs[j])))))
    return tuple(tets)


_STEINER_COORDS = tuple(tuple(2 * x for x in c) for c in REF_COORDS) + ((1, 1, 1),)


def complete_like_opposite(classes) -> tuple:
    """Cut every uncut face in the same orientation as its opposite face."""
    cls = list(classes)
    for f, g in PAIRS:
        if cls[f] is None and cls[g] is None:
            cls[f], cls[g] = 0, 1
        elif cls[f] is None:
            cls[f] = 1 - cls[g]
        elif cls[g] is None:
            cls[g] = 1 - cls[f]
    return tuple(cls)


def steiner_decompose(config) -> HexOutcome:
    """Twelve tets around a Steiner vertex (local id 8) at the hex centroid."""
    cls = complete_like_opposite(_classes(config))
    tets = []
    for f, quad in enumerate(FACES):
        p, q = FACE_DIAGONALS[f][cls[f]]
        for r in (v for v in quad if v not in (p, q)):
            tets.append(_oriented((STEINER_VERTEX, p, q, r), _STEINER_COORDS))
    return HexOutcome(OutcomeKind.STEINER, HexCutConfig.from_classes(cls), tuple(tets),
                      case=describe_case(_classes(config)))


# ---------------------------------------------------------------- dispatch

@lru_cache(maxsize=None)
def _triangulate(classes: tuple, force_six: bool) -> HexOutcome:
    case = describe_case(classes)
    n = sum(c is not None for c in classes)
    if n >= 4 and len(different_pairs(classes)) >= 2:
        bad = offending_faces(classes)
        if bad:
            return HexOutcome(OutcomeKind.DEGENERATE, HexCutConfig.from_classes(classes), witness=bad, case=case)
        if is_five_eligible(classes):
            if not force_six:
                return five_tet_decompose(classes)
            split = prism_decomposition(classes)
            if split is None:
                k = _five_class(classes)
                return HexOutcome(OutcomeKind.SIX, HexCutConfig.from_classes((k,) * 6), six_from_five(k), case=case)
            cls, pair, main, tets = split
            return HexOutcome(OutcomeKind.SIX, HexCutConfig.from_classes(cls), tets, split_pair=pair,
                              main_diagonal=main, case=case)
    split = prism_decomposition(classes)
    if split is None:
        raise AssertionError(f"no prism split for non-degenerate config {classes}")
    cls, pair, main, tets = split
    return HexOutcome(OutcomeKind.SIX, HexCutConfig.from_classes(cls), tets, split_pair=pair,
                      main_diagonal=main, case=case)


def triangulate_hex(config, *, force_six: bool = False) -> HexOutcome:
    """Triangulate one hex, completing its uncut faces.

    Returns a Six or Five outcome with the fully cut config, or a Degenerate
    outcome naming the four offending cuts. Prescribed cuts are never changed.
    """
    return _triangulate(_classes(config), bool(force_six))


def production_verdicts() -> dict:
    """Config id -> production outcome name for the 64 fully cut configs."""
    return {cid: triangulate_hex(HexCutConfig.from_id(cid)).kind.value for cid in range(64)}
