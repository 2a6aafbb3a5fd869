"""Hexahedral complex data model.

Local vertex numbering follows the unit-cube binary convention::

    v0=(0,0,0) v1=(1,0,0) v2=(1,1,0) v3=(0,1,0)
    v4=(0,0,1) v5=(1,0,1) v6=(1,1,1) v7=(0,1,1)

which coincides with the Gmsh and VTK hexahedron ordering.

Every quad diagonal joins two vertices of equal coordinate parity, so a face
cut is fully described by its *parity class*: class 0 uses the even vertices
``{v0, v2, v5, v7}`` and class 1 the odd vertices ``{v1, v3, v4, v6}``.
Internally the per-hex kernels work on these 0/1 labels; the complex itself
stores cuts as global vertex pairs, which is what both incident hexes agree on.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    BadDiagonal,
    DanglingVertex,
    DuplicateVertex,
    MeshStructureError,
    NonManifoldFace,
    NotCut,
    NotOpposite,
    UnknownFace,
)

REF_COORDS = (
    (0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
    (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1),
)

BOTTOM, TOP, FRONT, RIGHT, BACK, LEFT = range(6)
FACE_NAMES = ("bottom", "top", "front", "right", "back", "left")

# Outward-oriented quads, cyclic order.
FACES = (
    (0, 3, 2, 1),
    (4, 5, 6, 7),
    (0, 1, 5, 4),
    (1, 2, 6, 5),
    (2, 3, 7, 6),
    (3, 0, 4, 7),
)
OPPOSITE = (TOP, BOTTOM, BACK, LEFT, FRONT, RIGHT)
PAIRS = ((BOTTOM, TOP), (FRONT, BACK), (RIGHT, LEFT))

EVEN = frozenset((0, 2, 5, 7))
ODD = frozenset((1, 3, 4, 6))
PARITY_CLASSES = (EVEN, ODD)


def parity(v: int) -> int:
    return sum(REF_COORDS[v]) % 2


def _face_diagonals(face):
    a, b, c, d = face
    diags = [tuple(sorted((a, c))), tuple(sorted((b, d)))]
    diags.sort(key=lambda p: parity(p[0]))
    return tuple(diags)


# FACE_DIAGONALS[f][cls] is the sorted local vertex pair of class ``cls``.
FACE_DIAGONALS = tuple(_face_diagonals(f) for f in FACES)

CUBE_EDGES = frozenset(
    frozenset((u, v))
    for u in range(8)
    for v in range(u + 1, 8)
    if sum(abs(a - b) for a, b in zip(REF_COORDS[u], REF_COORDS[v])) == 1
)

# Space diagonals (antipodal pairs).
SPACE_DIAGONALS = tuple(
    (u, v) for u in range(8) for v in range(u + 1, 8)
    if all(a != b for a, b in zip(REF_COORDS[u], REF_COORDS[v]))
)


class Relation(enum.Enum):
    SAME = "same"
    DIFFERENT = "different"


class Method(enum.IntEnum):
    MARCHING6 = 1
    PRISM_SPLIT6 = 2
    FIVE = 3
    STEINER12 = 4

    @property
    def tag(self) -> str:
        return _METHOD_TAGS[self]


_METHOD_TAGS = {
    Method.MARCHING6: "Marching6",
    Method.PRISM_SPLIT6: "PrismSplit6",
    Method.FIVE: "Five",
    Method.STEINER12: "Steiner12",
}


def opposite_face(local_face: int) -> int:
    """Local face sharing no vertex with ``local_face``."""
    if not 0 <= local_face < 6:
        raise ValueError(f"local face index out of range: {local_face}")
    return OPPOSITE[local_face]


def diagonal_class(local_face: int, diagonal: Sequence[int]) -> int:
    """Parity class (0 or 1) of a local diagonal of ``local_face``."""
    pair = tuple(sorted(diagonal))
    diags = FACE_DIAGONALS[local_face]
    if pair == diags[0]:
        return 0
    if pair == diags[1]:
        return 1
    raise BadDiagonal(f"{pair} is not a diagonal of {FACE_NAMES[local_face]} face {FACES[local_face]}")


def pair_orientation_relation(face_a: int, diag_a, face_b: int, diag_b) -> Relation:
    """Relation between cuts on two opposite local faces.

    SAME when the four endpoints are joined pairwise by cube edges, i.e. the
    diagonals are parallel and span a diagonal rectangle of the cube.
    """
    if diag_a is None or diag_b is None:
        raise NotCut("both faces of the pair must be cut")
    if OPPOSITE[face_a] != face_b:
        raise NotOpposite(f"{FACE_NAMES[face_a]} and {FACE_NAMES[face_b]} are not opposite")
    diagonal_class(face_a, diag_a)
    diagonal_class(face_b, diag_b)
    a0, a1 = diag_a
    b0, b1 = diag_b
    linked = (
        (frozenset((a0, b0)) in CUBE_EDGES and frozenset((a1, b1)) in CUBE_EDGES)
        or (frozenset((a0, b1)) in CUBE_EDGES and frozenset((a1, b0)) in CUBE_EDGES)
    )
    return Relation.SAME if linked else Relation.DIFFERENT


class HexCell(NamedTuple):
    id: int
    verts: tuple


FaceKey = tuple  # sorted 4-tuple of global vertex ids


def _as_points(points, exact: bool) -> np.ndarray:
    if exact:
        rows = [[Fraction(c) for c in p] for p in points]
        arr = np.empty((len(rows), 3), dtype=object)
        for i, r in enumerate(rows):
            if len(r) != 3:
                raise MeshStructureError(f"point {i} does not have 3 coordinates")
            arr[i] = r
        return arr
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise MeshStructureError(f"points must have shape (n, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise MeshStructureError("non-finite coordinate in double mode")
    return arr


@dataclass
class HexComplex:
    """Vertices, hexes, shared faces and the per-face cut state.

    ``cut`` holds, for every face id, the sorted global vertex pair of its
    diagonal or ``(-1, -1)`` when uncut. Face ids index ``face_keys``, which
    is sorted lexicographically so iteration order is deterministic.
    """

    points: np.ndarray
    hexes: np.ndarray
    face_keys: np.ndarray
    hex_faces: np.ndarray
    face_hexes: np.ndarray
    cut: np.ndarray
    prescribed: np.ndarray
    marked: np.ndarray
    exact: bool = False
    vertex_labels: Optional[np.ndarray] = None
    _index: Optional[dict] = field(default=None, repr=False, compare=False)

    @property
    def n_hexes(self) -> int:
        return len(self.hexes)

    @property
    def n_faces(self) -> int:
        return len(self.face_keys)

    def hex(self, h: int) -> HexCell:
        return HexCell(h, tuple(int(v) for v in self.hexes[h]))

    def face_id(self, key) -> int:
        if self._index is None:
            self._index = {tuple(k): i for i, k in enumerate(self.face_keys.tolist())}
        try:
            return self._index[tuple(sorted(int(v) for v in key))]
        except KeyError:
            raise UnknownFace(f"{tuple(key)} is not a face of the complex") from None

    def face_id_of(self, h: int, local_face: int) -> int:
        return int(self.hex_faces[h, local_face])

    @property
    def adjacency(self) -> dict:
        """FaceKey -> tuple of incident hex ids."""
        return {
            tuple(k): tuple(int(x) for x in hs if x >= 0)
            for k, hs in zip(self.face_keys.tolist(), self.face_hexes.tolist())
        }

    @property
    def cuts(self) -> dict:
        """FaceKey -> sorted diagonal pair, for cut faces only."""
        out = {}
        for k, c in zip(self.face_keys.tolist(), self.cut.tolist()):
            if c[0] >= 0:
                out[tuple(k)] = (c[0], c[1])
        return out

    def cut_state(self, key):
        """Diagonal of a face (sorted global pair) or None when uncut."""
        c = self.cut[self.face_id(key)]
        return None if c[0] < 0 else (int(c[0]), int(c[1]))

    def interior_faces(self) -> np.ndarray:
        return np.flatnonzero(self.face_hexes[:, 1] >= 0)

    def neighbor(self, h: int, local_face: int) -> Optional[int]:
        """Hex across a local face of ``h``, or None on the boundary."""
        a, b = self.face_hexes[self.hex_faces[h, local_face]]
        other = b if a == h else a
        return None if other < 0 else int(other)

    def local_face_of(self, h: int, face_id: int) -> int:
        row = self.hex_faces[h]
        hits = np.flatnonzero(row == face_id)
        if len(hits) != 1:
            raise MeshStructureError(f"face {face_id} is not a face of hex {h}")
        return int(hits[0])

    def local_classes(self, h: int) -> tuple:
        """Per local face: None if uncut, else the parity class of its cut."""
        verts = self.hexes[h]
        out = []
        for f in range(6):
            lo = self.cut[self.hex_faces[h, f], 0]
            if lo < 0:
                out.append(None)
            else:
                a, c = FACE_DIAGONALS[f][0]
                out.append(0 if lo in (verts[a], verts[c]) else 1)
        return tuple(out)

    def set_local_cut(self, h: int, local_face: int, cls: int) -> None:
        a, b = FACE_DIAGONALS[local_face][cls]
        p, q = sorted((int(self.hexes[h, a]), int(self.hexes[h, b])))
        self.cut[self.hex_faces[h, local_face]] = (p, q)

    def copy(self) -> "HexComplex":
        return HexComplex(
            points=self.points.copy(),
            hexes=self.hexes.copy(),
            face_keys=self.face_keys.copy(),
            hex_faces=self.hex_faces.copy(),
            face_hexes=self.face_hexes.copy(),
            cut=self.cut.copy(),
            prescribed=self.prescribed.copy(),
            marked=self.marked.copy(),
            exact=self.exact,
            vertex_labels=None if self.vertex_labels is None else self.vertex_labels.copy(),
        )

    def check_invariants(self) -> None:
        """Re-derive adjacency from the hexes and compare; raise on mismatch."""
        seen: dict = {}
        for h, verts in enumerate(self.hexes.tolist()):
            for f, quad in enumerate(FACES):
                key = tuple(sorted(verts[i] for i in quad))
                fid = self.face_id(key)
                if self.hex_faces[h, f] != fid:
                    raise MeshStructureError(f"hex {h} face {f} maps to the wrong face id")
                seen.setdefault(fid, []).append(h)
        for fid, hs in seen.items():
            stored = sorted(int(x) for x in self.face_hexes[fid] if x >= 0)
            if stored != sorted(hs):
                raise MeshStructureError(f"adjacency of face {fid} is inconsistent")
        if len(seen) != self.n_faces:
            raise MeshStructureError("face table lists faces no hex uses")


def _normalise_prescriptions(prescriptions) -> Iterable:
    if prescriptions is None:
        return []
    if isinstance(prescriptions, Mapping):
        return list(prescriptions.items())
    out = []
    for entry in prescriptions:
        if isinstance(entry, Mapping):
            out.append((entry["face"], entry["diagonal"]))
        else:
            face, diag = entry
            out.append((face, diag))
    return out


def build_complex(points, hex_vertex_lists, prescriptions=None, *, exact: bool = False,
                  vertex_labels=None) -> HexComplex:
    """Build a :class:`HexComplex` and install prescribed face diagonals.

    ``prescriptions`` is either a mapping ``face vertices -> diagonal`` or an
    iterable of ``(face vertices, diagonal)`` pairs / ``{"face", "diagonal"}``
    dicts, all in global vertex ids. Face vertex order is irrelevant.
    """
    pts = _as_points(points, exact)
    hexes = np.asarray(hex_vertex_lists, dtype=np.int64)
    if hexes.ndim != 2 or hexes.shape[1] != 8:
        raise MeshStructureError(f"hexes must have shape (m, 8), got {hexes.shape}")
    if hexes.size and (hexes.min() < 0 or hexes.max() >= len(pts)):
        bad = int(np.flatnonzero((hexes < 0).any(1) | (hexes >= len(pts)).any(1))[0])
        raise DanglingVertex(f"hex {bad} references a vertex outside 0..{len(pts) - 1}")
    srt = np.sort(hexes, axis=1)
    dup = np.flatnonzero((srt[:, 1:] == srt[:, :-1]).any(1))
    if len(dup):
        raise DuplicateVertex(f"hex {int(dup[0])} lists a vertex twice")

    m = len(hexes)
    quads = hexes[:, np.asarray(FACES)]  # (m, 6, 4)
    keys = np.sort(quads.reshape(-1, 4), axis=1)
    if m:
        face_keys, inverse, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    else:
        face_keys = np.zeros((0, 4), dtype=np.int64)
        inverse = np.zeros(0, dtype=np.int64)
        counts = np.zeros(0, dtype=np.int64)
    inverse = inverse.reshape(-1)
    if np.any(counts > 2):
        k = tuple(int(v) for v in face_keys[int(np.flatnonzero(counts > 2)[0])])
        raise NonManifoldFace(f"face {k} is shared by more than two hexes")
    hex_faces = inverse.reshape(m, 6)

    face_hexes = np.full((len(face_keys), 2), -1, dtype=np.int64)
    owner = np.repeat(np.arange(m, dtype=np.int64), 6)
    order = np.argsort(inverse, kind="stable")
    sorted_faces = inverse[order]
    first = np.ones(len(order), dtype=bool)
    first[1:] = sorted_faces[1:] != sorted_faces[:-1]
    face_hexes[sorted_faces[first], 0] = owner[order][first]
    face_hexes[sorted_faces[~first], 1] = owner[order][~first]

    cx = HexComplex(
        points=pts,
        hexes=hexes,
        face_keys=face_keys,
        hex_faces=hex_faces,
        face_hexes=face_hexes,
        cut=np.full((len(face_keys), 2), -1, dtype=np.int64),
        prescribed=np.zeros(len(face_keys), dtype=bool),
        marked=np.zeros(m, dtype=bool),
        exact=exact,
        vertex_labels=None if vertex_labels is None else np.asarray(vertex_labels),
    )
    for face, diag in _normalise_prescriptions(prescriptions):
        install_prescription(cx, face, diag)
    return cx


def install_prescription(cx: HexComplex, face, diagonal) -> None:
    fid = cx.face_id(face)
    h = int(cx.face_hexes[fid, 0])
    f = cx.local_face_of(h, fid)
    verts = cx.hexes[h]
    pair = tuple(sorted(int(v) for v in diagonal))
    legal = [tuple(sorted((int(verts[a]), int(verts[b])))) for a, b in FACE_DIAGONALS[f]]
    if pair not in legal:
        raise BadDiagonal(f"{pair} is not a diagonal of face {tuple(int(v) for v in cx.face_keys[fid])}")
    if cx.prescribed[fid] and tuple(cx.cut[fid]) != pair:
        raise BadDiagonal(f"conflicting prescriptions for face {tuple(int(v) for v in cx.face_keys[fid])}")
    cx.cut[fid] = pair
    cx.prescribed[fid] = True


def inverted_hexes(cx: HexComplex) -> list:
    """Hex ids with a non-positive corner Jacobian (geometric inversion)."""
    ref = np.asarray(REF_COORDS)
    bad = []
    pts = cx.points
    for c in range(8):
        nbrs = []
        for axis in range(3):
            step = ref[c].copy()
            step[axis] = 1 - step[axis]
            nbrs.append(int(np.flatnonzero((ref == step).all(1))[0]))
        sign = np.sign(np.linalg.det((ref[nbrs] - ref[c]).astype(float)))
        p0 = pts[cx.hexes[:, c]]
        e = [pts[cx.hexes[:, n]] - p0 for n in nbrs]
        det = (
            e[0][:, 0] * (e[1][:, 1] * e[2][:, 2] - e[1][:, 2] * e[2][:, 1])
            - e[0][:, 1] * (e[1][:, 0] * e[2][:, 2] - e[1][:, 2] * e[2][:, 0])
            + e[0][:, 2] * (e[1][:, 0] * e[2][:, 1] - e[1][:, 1] * e[2][:, 0])
        )
        bad.append(np.asarray(det * sign <= 0, dtype=bool))
    return np.flatnonzero(np.any(bad, axis=0)).tolist() if bad else []


@dataclass
class TetMesh:
    """Output tetrahedra with per-tet provenance.

    ``points`` holds the original vertices followed by Steiner vertices;
    ``n_original`` marks where the Steiner block starts. ``face_keys`` and
    ``face_diagonals`` record the final diagonal of every hex face so the
    native format is lossless.
    """

    points: np.ndarray
    tets: np.ndarray
    source_hex: np.ndarray
    method: np.ndarray
    n_original: int
    face_keys: np.ndarray = field(default_factory=lambda: np.zeros((0, 4), dtype=np.int64))
    face_diagonals: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))
    vertex_labels: Optional[np.ndarray] = None

    @property
    def n_tets(self) -> int:
        return len(self.tets)

    @property
    def steiner_vertices(self) -> np.ndarray:
        return np.arange(self.n_original, len(self.points))

    def is_steiner(self, v: int) -> bool:
        return v >= self.n_original

    @property
    def face_cuts(self) -> dict:
        return {tuple(k): tuple(d) for k, d in zip(self.face_keys.tolist(), self.face_diagonals.tolist())}
