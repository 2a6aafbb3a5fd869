"""Exact certification of tetrahedral decompositions.

Nothing in here consults the production kernels: the brute-force oracle
enumerates every interior-vertex-free triangulation of the reference cube and
prism from scratch, and the tiling checks use integer / rational arithmetic
only. The one float path is :func:`check_conformity` on double-precision
meshes, where volume conservation is compared at a relative tolerance.
"""
from __future__ import annotations

import enum
import io
import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .core import FACES, FACE_DIAGONALS, REF_COORDS, HexComplex, TetMesh

REF_PRISM_COORDS = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1))


# ---------------------------------------------------------------- predicates

def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def det6(a, b, c, d):
    """Six times the signed volume of tetrahedron (a, b, c, d)."""
    return _dot(_sub(b, a), _cross(_sub(c, a), _sub(d, a)))


def signed_volume(tet, points):
    """Signed volume of a tet given vertex ids into ``points``.

    Exact (a :class:`~fractions.Fraction`) whenever the coordinates are ints
    or Fractions.
    """
    a, b, c, d = (tuple(points[v]) for v in tet)
    d6 = det6(a, b, c, d)
    if isinstance(d6, (int, Fraction)):
        return Fraction(d6) / 6
    return d6 / 6


def interiors_disjoint(p: Sequence, q: Sequence) -> bool:
    """True iff two non-degenerate tets (4 vertex coordinates each) have disjoint interiors.

    Separating-axis test: the Minkowski difference of two tets has facet
    normals drawn from the face normals of either tet and the cross products
    of their edges, so a weakly separating plane exists iff one of those
    axes separates.
    """
    def normals(t):
        out = []
        for i in range(4):
            a, b, c = (t[j] for j in range(4) if j != i)
            out.append(_cross(_sub(b, a), _sub(c, a)))
        return out

    def edges(t):
        return [_sub(t[j], t[i]) for i in range(4) for j in range(i + 1, 4)]

    axes = normals(p) + normals(q)
    ep, eq = edges(p), edges(q)
    axes += [_cross(u, v) for u in ep for v in eq]
    for n in axes:
        if n == (0, 0, 0):
            continue
        dp = [_dot(n, x) for x in p]
        dq = [_dot(n, x) for x in q]
        if max(dp) <= min(dq) or max(dq) <= min(dp):
            return True
    return False


def tri_key(a, b, c):
    return tuple(sorted((a, b, c)))


def tet_faces(tet):
    a, b, c, d = tet
    return (tri_key(b, c, d), tri_key(a, c, d), tri_key(a, b, d), tri_key(a, b, c))


# -------------------------------------------------------------- tiling check

def quad_triangles(quad, diagonal):
    """Outward triangles of an outward-oriented quad split along ``diagonal``."""
    a, b, c, d = quad
    if set(diagonal) == {a, c}:
        return [(a, b, c), (a, c, d)]
    if set(diagonal) == {b, d}:
        return [(a, b, d), (b, c, d)]
    raise ValueError(f"{diagonal} is not a diagonal of {quad}")


def hex_boundary_triangles(hex_verts, classes) -> list:
    """Expected boundary triangles of a hex whose faces carry ``classes`` (0/1 per face)."""
    out = []
    for f, quad in enumerate(FACES):
        a, b = FACE_DIAGONALS[f][classes[f]]
        q = tuple(hex_verts[i] for i in quad)
        out += quad_triangles(q, (hex_verts[a], hex_verts[b]))
    return out


def prism_boundary_triangles(bottom, top, diagonals) -> list:
    """Outward boundary triangles of a prism; ``diagonals[i]`` splits side i."""
    b, t = bottom, top
    out = [(b[0], b[2], b[1]), (t[0], t[1], t[2])]
    for i in range(3):
        j = (i + 1) % 3
        out += quad_triangles((b[i], b[j], t[j], t[i]), diagonals[i])
    return out


def enclosed_volume(triangles, points):
    """Volume enclosed by a closed, outward-oriented triangle surface."""
    o = tuple(points[triangles[0][0]])
    total = 0
    for a, b, c in triangles:
        total += det6(o, tuple(points[a]), tuple(points[b]), tuple(points[c]))
    if isinstance(total, (int, Fraction)):
        return Fraction(total) / 6
    return total / 6


@dataclass
class TilingReport:
    volume_ok: bool
    face_matching_ok: bool
    boundary_match_ok: bool
    tet_volume: object = None
    region_volume: object = None
    offending: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.volume_ok and self.face_matching_ok and self.boundary_match_ok


def certify_tiling(tets, points, boundary_triangles, *, check_disjoint: bool = True) -> TilingReport:
    """Certify that ``tets`` tile the region bounded by ``boundary_triangles``.

    volume_ok: every tet has positive volume and the volumes sum to the
    enclosed region volume. face_matching_ok: every tet triangle is shared by
    exactly two tets or is a boundary triangle, and tets have pairwise
    disjoint interiors. boundary_match_ok: the once-used triangles are
    exactly the expected boundary triangles.
    """
    offending = []
    vols = [signed_volume(t, points) for t in tets]
    region = enclosed_volume(boundary_triangles, points)
    nonpos = [t for t, v in zip(tets, vols) if v <= 0]
    if nonpos:
        offending.append(("non-positive volume", nonpos))
    total = sum(vols)
    volume_ok = not nonpos and total == region

    counts: dict = {}
    for t in tets:
        for tri in tet_faces(tuple(t)):
            counts[tri] = counts.get(tri, 0) + 1
    expected = {tri_key(*tri) for tri in boundary_triangles}
    once = {k for k, c in counts.items() if c == 1}
    over = [k for k, c in counts.items() if c > 2]
    stray = sorted(once - expected)
    face_ok = not over and not stray
    if over:
        offending.append(("triangle used by more than two tets", over))
    if stray:
        offending.append(("unmatched interior triangle", stray))
    if face_ok and check_disjoint:
        coords = [[tuple(points[v]) for v in t] for t in tets]
        for i, j in itertools.combinations(range(len(tets)), 2):
            if not interiors_disjoint(coords[i], coords[j]):
                offending.append(("overlapping interiors", (tuple(tets[i]), tuple(tets[j]))))
                face_ok = False
                break
    missing = sorted(expected - once)
    if missing:
        offending.append(("missing boundary triangle", missing))
    return TilingReport(
        volume_ok=volume_ok,
        face_matching_ok=face_ok,
        boundary_match_ok=not missing and not stray,
        tet_volume=total,
        region_volume=region,
        offending=offending,
    )


def certify_hex_tiling(tets, classes, points=None, hex_verts=tuple(range(8)), *,
                       check_disjoint: bool = True) -> TilingReport:
    """Certify local (or global) hex tets against a fully decided face config.

    With ``points`` omitted the reference unit cube is used, plus its
    centroid as vertex 8 for Steiner decompositions.
    """
    if points is None:
        points = list(REF_COORDS) + [(Fraction(1, 2),) * 3]
    return certify_tiling([tuple(t) for t in tets], points, hex_boundary_triangles(hex_verts, classes),
                          check_disjoint=check_disjoint)


# ------------------------------------------------------- brute-force oracle

def _candidate_tets(coords):
    out = []
    for quad in itertools.combinations(range(len(coords)), 4):
        a, b, c, d = quad
        d6 = det6(coords[a], coords[b], coords[c], coords[d])
        if d6 == 0:
            continue
        out.append(((a, b, c, d) if d6 > 0 else (a, b, d, c), abs(d6)))
    return out


def _on_boundary(tri, boundary_sets):
    s = set(tri)
    return any(s <= b for b in boundary_sets)


def enumerate_triangulations(coords, boundary_sets, target6):
    """All interior-vertex-free triangulations of a convex polytope.

    ``coords`` are the polytope's vertices (exact), ``boundary_sets`` the
    vertex sets of its facets and ``target6`` six times its volume. A choice
    of candidate tets is a triangulation iff the tets have pairwise disjoint
    interiors, their volumes add up to the whole, and every triangle is used
    twice or lies on a facet (face-to-face).
    """
    cands = _candidate_tets(coords)
    n = len(cands)
    pts = [[coords[v] for v in t] for t, _ in cands]
    compat = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            ok = interiors_disjoint(pts[i], pts[j])
            compat[i][j] = compat[j][i] = ok
    results = []

    def conforming(chosen):
        counts: dict = {}
        for idx in chosen:
            for tri in tet_faces(cands[idx][0]):
                counts[tri] = counts.get(tri, 0) + 1
        return all(c == 2 or (c == 1 and _on_boundary(tri, boundary_sets)) for tri, c in counts.items())

    def search(start, chosen, vol):
        if vol == target6:
            if conforming(chosen):
                results.append(tuple(cands[i][0] for i in chosen))
            return
        for k in range(start, n):
            w = cands[k][1]
            if vol + w <= target6 and all(compat[k][c] for c in chosen):
                chosen.append(k)
                search(k + 1, chosen, vol + w)
                chosen.pop()

    search(0, [], 0)
    return results


CUBE_FACET_SETS = tuple(frozenset(f) for f in FACES)
PRISM_FACET_SETS = (
    frozenset((0, 1, 2)), frozenset((3, 4, 5)),
    frozenset((0, 1, 4, 3)), frozenset((1, 2, 5, 4)), frozenset((2, 0, 3, 5)),
)


@lru_cache(maxsize=None)
def cube_triangulations() -> tuple:
    """Every triangulation of the unit cube using only its 8 corners."""
    target6 = 6 * enclosed_volume(hex_boundary_triangles(tuple(range(8)), (0,) * 6), REF_COORDS)
    return tuple(enumerate_triangulations(REF_COORDS, CUBE_FACET_SETS, int(target6)))


def boundary_config(tets) -> int:
    """6-bit config id of a cube triangulation: bit f set iff face f uses its class-1 diagonal."""
    counts: dict = {}
    for t in tets:
        for tri in tet_faces(t):
            counts[tri] = counts.get(tri, 0) + 1
    bits = 0
    for f, quad in enumerate(FACES):
        tris = [tri for tri, c in counts.items() if c == 1 and set(tri) <= set(quad)]
        shared = set(tris[0]) & set(tris[1])
        if tuple(sorted(shared)) == FACE_DIAGONALS[f][1]:
            bits |= 1 << f
    return bits


def config_classes(config_id: int) -> tuple:
    return tuple((config_id >> f) & 1 for f in range(6))


def config_id(classes) -> int:
    return sum(int(c) << f for f, c in enumerate(classes))


class Verdict(enum.Enum):
    FIVE_OK = "FiveOK"
    SIX_OK = "SixOK"
    BOTH_OK = "BothOK"
    DEGENERATE_ONLY = "DegenerateOnly"


@dataclass(frozen=True)
class ConfigClass:
    config_id: int
    verdict: Verdict
    n_five: int
    n_six: int

    @property
    def bits(self) -> str:
        return "".join(str(c) for c in config_classes(self.config_id))


def brute_force_cube(config) -> ConfigClass:
    """Oracle verdict for a fully prescribed cube config (id 0..63 or 6 classes)."""
    cid = config if isinstance(config, int) else config_id(config)
    sizes = [len(t) for t in cube_triangulations() if boundary_config(t) == cid]
    n5, n6 = sizes.count(5), sizes.count(6)
    if n5 and n6:
        v = Verdict.BOTH_OK
    elif n5:
        v = Verdict.FIVE_OK
    elif n6:
        v = Verdict.SIX_OK
    else:
        v = Verdict.DEGENERATE_ONLY
    return ConfigClass(cid, v, n5, n6)


def oracle_witnesses(config) -> list:
    cid = config if isinstance(config, int) else config_id(config)
    return [t for t in cube_triangulations() if boundary_config(t) == cid]


def classify_all_64() -> list:
    return [brute_force_cube(c) for c in range(64)]


def classification_csv(table=None, production=None) -> str:
    """CSV rows ``config_id,bits,verdict[,production]`` for the 64 configs."""
    table = classify_all_64() if table is None else table
    buf = io.StringIO()
    header = ["config_id", "bits", "verdict", "n_five", "n_six"]
    if production is not None:
        header.append("production")
    buf.write(",".join(header) + "\n")
    for row in table:
        cells = [str(row.config_id), row.bits, row.verdict.value, str(row.n_five), str(row.n_six)]
        if production is not None:
            cells.append(production[row.config_id])
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


@lru_cache(maxsize=None)
def cube_symmetries() -> tuple:
    """The 48 symmetries of the cube as permutations of local vertex ids."""
    index = {c: i for i, c in enumerate(REF_COORDS)}
    perms = []
    for axes in itertools.permutations(range(3)):
        for flips in itertools.product((0, 1), repeat=3):
            perm = []
            for c in REF_COORDS:
                img = tuple(c[axes[k]] ^ flips[k] for k in range(3))
                perm.append(index[img])
            perms.append(tuple(perm))
    return tuple(perms)


def transform_config(classes, perm) -> tuple:
    """Image of a (possibly partial) face config under a vertex permutation."""
    out = [None] * 6
    for f, cls in enumerate(classes):
        img_face = frozenset(perm[v] for v in FACES[f])
        g = CUBE_FACET_SETS.index(img_face)
        if cls is None:
            continue
        a, b = FACE_DIAGONALS[f][cls]
        img = tuple(sorted((perm[a], perm[b])))
        out[g] = FACE_DIAGONALS[g].index(img)
    return tuple(out)


class PrismVerdict(enum.Enum):
    VALID = "Valid"
    DEGENERATE = "Degenerate"


@lru_cache(maxsize=None)
def prism_triangulations() -> tuple:
    diags = [tuple(_prism_side_diagonal(i, True)) for i in range(3)]
    target6 = 6 * enclosed_volume(prism_boundary_triangles((0, 1, 2), (3, 4, 5), diags), REF_PRISM_COORDS)
    return tuple(enumerate_triangulations(REF_PRISM_COORDS, PRISM_FACET_SETS, int(target6)))


def _prism_side_diagonal(i: int, rising: bool):
    j = (i + 1) % 3
    return frozenset((i, 3 + j)) if rising else frozenset((j, 3 + i))


def brute_force_prism(orientations):
    """Oracle for a reference prism; ``orientations`` is a triple of 'R'/'F'.

    Local labels: b0..b2 = 0..2, t0..t2 = 3..5. Returns the verdict and every
    witness triangulation whose boundary carries the requested side cuts.
    """
    wanted = [_prism_side_diagonal(i, getattr(o, "value", o) == "R") for i, o in enumerate(orientations)]
    witnesses = []
    for tri in prism_triangulations():
        counts: dict = {}
        for t in tri:
            for k in tet_faces(t):
                counts[k] = counts.get(k, 0) + 1
        ok = True
        for i in range(3):
            j = (i + 1) % 3
            side = {i, j, 3 + i, 3 + j}
            halves = [set(k) for k, c in counts.items() if c == 1 and set(k) <= side]
            if frozenset(halves[0] & halves[1]) != wanted[i]:
                ok = False
                break
        if ok:
            witnesses.append(tri)
    return (PrismVerdict.VALID if witnesses else PrismVerdict.DEGENERATE), witnesses


# ------------------------------------------------------- mesh conformity

@dataclass
class ConformityReport:
    positive_volumes: bool
    interior_ok: bool
    boundary_ok: bool
    faces_ok: bool
    volume_ok: bool
    tet_volume: object
    hex_volume: object
    issues: list = field(default_factory=list)

    @property
    def conforming(self) -> bool:
        return self.positive_volumes and self.interior_ok and self.boundary_ok and self.faces_ok and self.volume_ok


def _tet_det6_array(points, tets):
    p = points[tets]
    a = p[:, 1] - p[:, 0]
    b = p[:, 2] - p[:, 0]
    c = p[:, 3] - p[:, 0]
    return (
        a[:, 0] * (b[:, 1] * c[:, 2] - b[:, 2] * c[:, 1])
        - a[:, 1] * (b[:, 0] * c[:, 2] - b[:, 2] * c[:, 0])
        + a[:, 2] * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    )


def _perm_sign3(x):
    """Sign of the permutation sorting each row of a (n,3) int array."""
    inv = (x[:, 0] > x[:, 1]).astype(np.int64) + (x[:, 0] > x[:, 2]) + (x[:, 1] > x[:, 2])
    return 1 - 2 * (inv % 2)


_BITS = 21


def _pack(tri):
    """Sorted triangles -> one int64 each (vertex ids below 2**21)."""
    tri = np.asarray(tri, dtype=np.int64)
    if len(tri) and tri.max() >= 1 << _BITS:
        raise ValueError("too many vertices for packed triangle keys")
    return (tri[:, 0] << (2 * _BITS)) | (tri[:, 1] << _BITS) | tri[:, 2]


def _unpack(key):
    mask = (1 << _BITS) - 1
    return np.column_stack([key >> (2 * _BITS), (key >> _BITS) & mask, key & mask])


def check_conformity(mesh: TetMesh, cx: HexComplex, *, rel_tol: float = 1e-12) -> ConformityReport:
    """Global certificate for a converted mesh.

    The combination checked here (all tets positively oriented, every
    interior triangle used exactly twice with opposite orientations, the
    once-used triangles being exactly the hex boundary faces split by their
    diagonals, every interior hex face realised by its two triangles,
    volumes conserved) certifies a face-to-face tiling of the complex.
    """
    issues = []
    tets = np.asarray(mesh.tets, dtype=np.int64)
    exact = mesh.points.dtype == object
    d6 = _tet_det6_array(mesh.points, tets) if len(tets) else np.zeros(0)
    positive = bool(np.all(d6 > 0))
    if not positive:
        issues.append(f"{int(np.sum(~(d6 > 0)))} tets with non-positive volume")

    # outward faces of a positively oriented tet (a, b, c, d)
    a, b, c, d = tets.T
    tris = np.concatenate([
        np.stack([b, c, d], 1), np.stack([a, d, c], 1),
        np.stack([a, b, d], 1), np.stack([a, c, b], 1),
    ])
    sign = _perm_sign3(tris)
    keys = np.sort(tris, axis=1)
    uniq_packed, inv, counts = np.unique(_pack(keys), return_inverse=True, return_counts=True)
    uniq = _unpack(uniq_packed)
    inv = inv.reshape(-1)
    sign_sum = np.bincount(inv, weights=sign, minlength=len(uniq))
    interior_ok = bool(np.all(counts <= 2) and np.all(sign_sum[counts == 2] == 0))
    if not interior_ok:
        issues.append("triangle used more than twice or with inconsistent orientation")

    # what the hex faces demand; final diagonals come from the mesh
    cut = mesh.face_diagonals if len(mesh.face_diagonals) == cx.n_faces else cx.cut
    if np.any(cut[:, 0] < 0):
        issues.append("uncut hex face after conversion")
        faces_ok = boundary_ok = False
    else:
        fk = cx.face_keys
        keep = (fk != cut[:, :1]) & (fk != cut[:, 1:])
        others = fk[keep].reshape(-1, 2)
        shared = cx.face_hexes[:, 1] >= 0
        want = np.where(shared, 2, 1)
        packed = _pack(uniq)
        faces_ok = True
        for k in range(2):
            t = _pack(np.sort(np.column_stack([cut, others[:, k]]), axis=1))
            pos = np.clip(np.searchsorted(packed, t), 0, max(len(packed) - 1, 0))
            got = np.where(packed[pos] == t, counts[pos], 0) if len(packed) else np.zeros(len(t), int)
            if np.any(got != want):
                faces_ok = False
                issues.append(f"{int(np.sum(got != want))} hex faces not realised by their diagonal")
        boundary_ok = int(np.sum(counts == 1)) == 2 * int(np.sum(~shared))
        if not boundary_ok:
            issues.append("once-used triangles that are not hex boundary faces")

    tet_vol = d6.sum() if len(d6) else 0
    hex_vol = _hex_volume6(cx, cut)
    if exact:
        tet_vol, hex_vol = Fraction(tet_vol) / 6, Fraction(hex_vol) / 6
        volume_ok = tet_vol == hex_vol
    else:
        tet_vol, hex_vol = float(tet_vol) / 6, float(hex_vol) / 6
        volume_ok = abs(tet_vol - hex_vol) <= rel_tol * max(abs(hex_vol), 1e-300)
    if not volume_ok:
        issues.append(f"volume mismatch: tets {tet_vol} vs hexes {hex_vol}")
    return ConformityReport(positive, interior_ok, boundary_ok, faces_ok, volume_ok, tet_vol, hex_vol, issues)


def _hex_volume6(cx: HexComplex, cut):
    """Six times the total hex volume with each face split by its final diagonal."""
    if np.any(cut[:, 0] < 0):
        return float("nan")
    pts = cx.points
    total = 0
    for f, quad in enumerate(FACES):
        q = cx.hexes[:, list(quad)]
        lo = cut[cx.hex_faces[:, f], 0]
        a0 = FACE_DIAGONALS[f][0]
        cls0 = (lo == cx.hexes[:, a0[0]]) | (lo == cx.hexes[:, a0[1]])
        # position of the class-0 diagonal inside the cyclic quad
        qa = list(quad)
        on_ac = {qa[0], qa[2]} == set(a0)
        use_ac = cls0 if on_ac else ~cls0
        t_ac = [np.stack([q[:, 0], q[:, 1], q[:, 2]], 1), np.stack([q[:, 0], q[:, 2], q[:, 3]], 1)]
        t_bd = [np.stack([q[:, 0], q[:, 1], q[:, 3]], 1), np.stack([q[:, 1], q[:, 2], q[:, 3]], 1)]
        o = cx.hexes[:, 0]
        for k in range(2):
            tri = np.where(use_ac[:, None], t_ac[k], t_bd[k])
            cone = np.column_stack([o, tri])
            v = _tet_det6_array(pts, cone)
            total = total + v
    # mirrored hexes enclose negative volume under the outward convention
    if isinstance(total, np.ndarray) and total.dtype == object:
        return sum(abs(x) for x in total)
    return np.abs(total).sum()


def _to_fractions(points) -> np.ndarray:
    if points.dtype == object:
        return points
    out = np.empty(points.shape, dtype=object)
    out[:] = [[Fraction(float(c)) for c in p] for p in points]
    return out


def certify_exact(mesh: TetMesh, cx: HexComplex) -> ConformityReport:
    """check_conformity with every coordinate lifted to an exact rational.

    Binary doubles are rationals, so this certifies the double-mode output
    itself, not an approximation of it.
    """
    lifted = replace(mesh, points=_to_fractions(np.asarray(mesh.points)))
    return check_conformity(lifted, replace(cx, points=_to_fractions(cx.points), exact=True))
