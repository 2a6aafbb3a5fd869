"""Mesh, prescription and report files.

Supported: Gmsh MSH 2.2 ASCII (hexahedra in, tetrahedra out), VTK legacy
ASCII unstructured grids (out) and a native JSON format for hex meshes with
cuts and for tet meshes with provenance. Native coordinates are written as
JSON numbers in double mode and as ``"p/q"`` strings in exact mode, so a
round trip is lossless in both.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import HexComplex, Method, TetMesh, build_complex
from .errors import ParseError, UnsupportedElement

GMSH_HEX = 5
GMSH_TET = 4
# points, lines, triangles, quads: boundary entities that hex meshes often carry
GMSH_SKIPPED = {15, 1, 2, 3, 8, 9, 10, 16, 26, 21, 36}
VTK_TETRA = 10
NATIVE_TAG = "hex2tet-native"

_EXTENSIONS = {".msh": "gmsh", ".vtk": "vtk", ".json": "native", ".h2t": "native"}


def guess_format(path) -> str:
    fmt = _EXTENSIONS.get(Path(path).suffix.lower())
    if fmt is None:
        raise ParseError(f"cannot infer the format of {path}; pass it explicitly", path=path)
    return fmt


# ------------------------------------------------------------------ gmsh

def read_gmsh(path):
    """Parse an MSH 2.2 ASCII file into (points, hexes, node_tags)."""
    lines = Path(path).read_text().splitlines()
    nodes: dict = {}
    node_order = []
    hexes = []
    i = 0

    def err(msg, line_no, col=None):
        return ParseError(msg, line=line_no + 1, column=col, path=path)

    def fields(line_no, n_min=1):
        parts = lines[line_no].split()
        if len(parts) < n_min:
            raise err(f"expected at least {n_min} fields", line_no)
        return parts

    seen_format = False
    while i < len(lines):
        tag = lines[i].strip()
        if tag == "$MeshFormat":
            parts = fields(i + 1, 3)
            if not parts[0].startswith("2"):
                raise err(f"unsupported MSH version {parts[0]}", i + 1, 1)
            if parts[1] != "0":
                raise err("binary MSH files are not supported", i + 1, len(parts[0]) + 2)
            seen_format = True
            i += 2
        elif tag == "$Nodes":
            n = _int(lines, i + 1, 0, err)
            for k in range(n):
                ln = i + 2 + k
                if ln >= len(lines):
                    raise err("unexpected end of file in $Nodes", ln)
                parts = lines[ln].split()
                if len(parts) != 4:
                    raise err("node lines have 4 fields: tag x y z", ln)
                tag_id = _int(lines, ln, 0, err)
                coords = []
                for c in parts[1:]:
                    try:
                        coords.append(float(c))
                    except ValueError:
                        raise err(f"bad coordinate {c!r}", ln, _column(lines[ln], parts, c)) from None
                if tag_id in nodes:
                    raise err(f"duplicate node tag {tag_id}", ln, 1)
                nodes[tag_id] = coords
                node_order.append(tag_id)
            i += 2 + n
        elif tag == "$Elements":
            n = _int(lines, i + 1, 0, err)
            for k in range(n):
                ln = i + 2 + k
                if ln >= len(lines):
                    raise err("unexpected end of file in $Elements", ln)
                parts = lines[ln].split()
                try:
                    vals = [int(p) for p in parts]
                except ValueError:
                    raise err("non-integer field in element line", ln) from None
                if len(vals) < 3:
                    raise err("element line too short", ln)
                etype, ntags = vals[1], vals[2]
                conn = vals[3 + ntags:]
                if etype == GMSH_HEX:
                    if len(conn) != 8:
                        raise err("hexahedron needs 8 nodes", ln)
                    hexes.append((ln, conn))
                elif etype in GMSH_SKIPPED:
                    continue
                else:
                    raise UnsupportedElement(f"element type {etype} is not a hexahedron", line=ln + 1,
                                             column=lines[ln].find(parts[1]) + 1, path=path)
            i += 2 + n
        else:
            i += 1
    if not seen_format:
        raise ParseError("missing $MeshFormat section", path=path)
    if not hexes:
        raise ParseError("no hexahedral elements found", path=path)
    index = {t: k for k, t in enumerate(node_order)}
    points = np.array([nodes[t] for t in node_order], dtype=np.float64)
    conn = []
    for ln, c in hexes:
        try:
            conn.append([index[t] for t in c])
        except KeyError as exc:
            raise err(f"element references unknown node {exc.args[0]}", ln) from None
    return points, np.array(conn, dtype=np.int64), np.array(node_order, dtype=np.int64)


def _column(line, parts, token):
    """1-based column of ``token``, counting whitespace-separated fields."""
    pos = 0
    for p in parts:
        pos = line.index(p, pos)
        if p is token:
            return pos + 1
        pos += len(p)
    return None


def _int(lines, ln, field_no, err):
    if ln >= len(lines):
        raise err("unexpected end of file", ln)
    parts = lines[ln].split()
    try:
        return int(parts[field_no])
    except (IndexError, ValueError):
        raise err("expected an integer", ln, 1) from None


def _labels(mesh: TetMesh) -> list:
    if mesh.vertex_labels is None:
        return list(range(1, len(mesh.points) + 1))
    labels = [int(v) for v in mesh.vertex_labels]
    top = max(labels) if labels else 0
    return labels + list(range(top + 1, top + 1 + len(mesh.points) - len(labels)))


def _fmt(x) -> str:
    return repr(float(x))


def write_gmsh(mesh: TetMesh, path) -> None:
    """MSH 2.2 ASCII; tags are (method code, source hex + 1)."""
    labels = _labels(mesh)
    out = ["$MeshFormat", "2.2 0 8", "$EndMeshFormat", "$Nodes", str(len(mesh.points))]
    for lab, p in zip(labels, mesh.points):
        out.append(f"{lab} {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}")
    out += ["$EndNodes", "$Elements", str(len(mesh.tets))]
    for k, (t, h, m) in enumerate(zip(mesh.tets.tolist(), mesh.source_hex.tolist(), mesh.method.tolist())):
        out.append(f"{k + 1} {GMSH_TET} 2 {m} {h + 1} " + " ".join(str(labels[v]) for v in t))
    out.append("$EndElements")
    Path(path).write_text("\n".join(out) + "\n")


def write_gmsh_hexes(points, hexes, path) -> None:
    out = ["$MeshFormat", "2.2 0 8", "$EndMeshFormat", "$Nodes", str(len(points))]
    for k, p in enumerate(points):
        out.append(f"{k + 1} {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}")
    out += ["$EndNodes", "$Elements", str(len(hexes))]
    for k, h in enumerate(hexes):
        out.append(f"{k + 1} {GMSH_HEX} 2 1 1 " + " ".join(str(int(v) + 1) for v in h))
    out.append("$EndElements")
    Path(path).write_text("\n".join(out) + "\n")


# ------------------------------------------------------------------- vtk

def write_vtk(mesh: TetMesh, path) -> None:
    n, k = len(mesh.points), len(mesh.tets)
    out = ["# vtk DataFile Version 3.0", "hex2tet tetrahedral mesh", "ASCII", "DATASET UNSTRUCTURED_GRID",
           f"POINTS {n} double"]
    out += [f"{_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}" for p in mesh.points]
    out.append(f"CELLS {k} {5 * k}")
    out += ["4 " + " ".join(str(v) for v in t) for t in mesh.tets.tolist()]
    out.append(f"CELL_TYPES {k}")
    out += [str(VTK_TETRA)] * k
    out += [f"CELL_DATA {k}", "SCALARS source_hex int 1", "LOOKUP_TABLE default"]
    out += [str(h) for h in mesh.source_hex.tolist()]
    out += ["SCALARS method int 1", "LOOKUP_TABLE default"]
    out += [str(m) for m in mesh.method.tolist()]
    out += [f"POINT_DATA {n}", "SCALARS steiner int 1", "LOOKUP_TABLE default"]
    out += ["1" if v >= mesh.n_original else "0" for v in range(n)]
    Path(path).write_text("\n".join(out) + "\n")


# ---------------------------------------------------------------- native

def _encode_coord(c):
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return float(c)


def _decode_points(raw, path):
    exact = any(isinstance(c, str) for p in raw for c in p)
    try:
        if exact:
            return [[Fraction(c) for c in p] for p in raw], True
        return np.asarray(raw, dtype=np.float64).reshape(-1, 3), False
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(f"bad coordinate: {exc}", path=path) from None


def _load_json(path):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno, path=path) from None


def write_native_hexmesh(points, hexes, path, cuts=None) -> None:
    doc = {
        "format": NATIVE_TAG,
        "version": 1,
        "kind": "hexmesh",
        "points": [[_encode_coord(c) for c in p] for p in points],
        "hexes": [[int(v) for v in h] for h in hexes],
        "cuts": [{"face": [int(v) for v in f], "diagonal": [int(v) for v in d]} for f, d in (cuts or [])],
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def read_native(path) -> dict:
    doc = _load_json(path)
    if not isinstance(doc, dict) or doc.get("format") != NATIVE_TAG:
        raise ParseError(f"not a {NATIVE_TAG} document", path=path)
    kind = doc.get("kind")
    if kind not in ("hexmesh", "tetmesh"):
        raise ParseError(f"unknown native kind {kind!r}", path=path)
    return doc


def read_native_hexmesh(path):
    doc = read_native(path)
    if doc["kind"] != "hexmesh":
        raise UnsupportedElement("native file holds tetrahedra, not hexahedra", path=path)
    points, exact = _decode_points(doc.get("points", []), path)
    hexes = doc.get("hexes", [])
    if not hexes:
        raise ParseError("no hexahedral elements found", path=path)
    if any(len(h) != 8 for h in hexes):
        raise UnsupportedElement("every native hex lists 8 vertices", path=path)
    cuts = _parse_cut_entries(doc.get("cuts", []), path)
    return points, np.asarray(hexes, dtype=np.int64), cuts, exact


def write_native_tetmesh(mesh: TetMesh, path) -> None:
    doc = {
        "format": NATIVE_TAG,
        "version": 1,
        "kind": "tetmesh",
        "n_original": int(mesh.n_original),
        "points": [[_encode_coord(c) for c in p] for p in mesh.points],
        "tets": mesh.tets.tolist(),
        "source_hex": mesh.source_hex.tolist(),
        "method": [Method(int(m)).tag for m in mesh.method.tolist()],
        "face_cuts": [{"face": k, "diagonal": d}
                      for k, d in zip(mesh.face_keys.tolist(), mesh.face_diagonals.tolist())],
    }
    if mesh.vertex_labels is not None:
        doc["vertex_labels"] = [int(v) for v in mesh.vertex_labels]
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def read_native_tetmesh(path) -> TetMesh:
    doc = read_native(path)
    if doc["kind"] != "tetmesh":
        raise ParseError("native file holds hexahedra, not tetrahedra", path=path)
    points, exact = _decode_points(doc["points"], path)
    if exact:
        arr = np.empty((len(points), 3), dtype=object)
        arr[:] = points
        points = arr
    by_tag = {m.tag: int(m) for m in Method}
    fc = doc.get("face_cuts", [])
    return TetMesh(
        points=points,
        tets=np.asarray(doc["tets"], dtype=np.int64).reshape(-1, 4),
        source_hex=np.asarray(doc["source_hex"], dtype=np.int64),
        method=np.asarray([by_tag[m] for m in doc["method"]], dtype=np.int64),
        n_original=int(doc["n_original"]),
        face_keys=np.asarray([e["face"] for e in fc], dtype=np.int64).reshape(-1, 4),
        face_diagonals=np.asarray([e["diagonal"] for e in fc], dtype=np.int64).reshape(-1, 2),
        vertex_labels=None if "vertex_labels" not in doc else np.asarray(doc["vertex_labels"]),
    )


# ------------------------------------------------------------ front door

def read_mesh(path, fmt=None, *, exact: bool = False) -> HexComplex:
    """Read a hex mesh (no prescriptions installed)."""
    fmt = fmt or guess_format(path)
    if fmt == "gmsh":
        points, hexes, tags = read_gmsh(path)
        if exact:
            points = [[Fraction(float(c)) for c in p] for p in points]
        return build_complex(points, hexes, exact=exact, vertex_labels=tags)
    if fmt == "native":
        points, hexes, _, file_exact = read_native_hexmesh(path)
        return build_complex(points, hexes, exact=exact or file_exact)
    raise ParseError(f"{fmt} is not an input format", path=path)


def write_tetmesh(mesh: TetMesh, path, fmt=None) -> None:
    fmt = fmt or guess_format(path)
    if fmt == "gmsh":
        write_gmsh(mesh, path)
    elif fmt == "vtk":
        write_vtk(mesh, path)
    elif fmt == "native":
        write_native_tetmesh(mesh, path)
    else:
        raise ValueError(f"unknown output format {fmt!r}")


def _parse_cut_entries(entries, path):
    out = []
    seen = set()
    if not isinstance(entries, list):
        raise ParseError("cuts must be a list of {face, diagonal} entries", path=path)
    for k, e in enumerate(entries):
        try:
            face = [int(v) for v in e["face"]]
            diag = [int(v) for v in e["diagonal"]]
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"cut entry {k} needs integer 'face' and 'diagonal' lists", path=path) from None
        if len(face) != 4 or len(diag) != 2:
            raise ParseError(f"cut entry {k}: face has 4 vertices, diagonal 2", path=path)
        key = frozenset(face)
        if key in seen:
            raise ParseError(f"cut entry {k}: face {sorted(face)} listed twice", path=path)
        seen.add(key)
        out.append((face, diag))
    return out


def read_cuts(path) -> list:
    """Prescription sidecar: ``{"cuts": [{"face": [...4], "diagonal": [...2]}]}`` or a bare list."""
    doc = _load_json(path)
    entries = doc.get("cuts", []) if isinstance(doc, dict) else doc
    return _parse_cut_entries(entries, path)


def write_cuts(cuts, path) -> None:
    doc = {"cuts": [{"face": [int(v) for v in f], "diagonal": [int(v) for v in d]} for f, d in cuts]}
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def relabel_cuts(cuts, cx: HexComplex) -> list:
    """Map cut vertex ids from file labels (e.g. Gmsh node tags) to complex indices."""
    if cx.vertex_labels is None:
        return cuts
    index = {int(t): k for k, t in enumerate(cx.vertex_labels)}
    try:
        return [([index[v] for v in f], [index[v] for v in d]) for f, d in cuts]
    except KeyError as exc:
        raise ParseError(f"cut references unknown node {exc.args[0]}") from None


def write_report(report, path, extra=None) -> None:
    doc = report.to_dict()
    if extra:
        doc.update(extra)
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
