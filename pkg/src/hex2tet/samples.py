"""Small mesh generators used by tests, scripts and the CLI demos."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .core import FACES, build_complex


def structured_grid(nx: int, ny: int, nz: int, *, spacing=1):
    """Points and hexes of an nx*ny*nz block of unit cells (x varies fastest)."""
    ix, iy, iz = np.meshgrid(np.arange(nx + 1), np.arange(ny + 1), np.arange(nz + 1), indexing="ij")
    points = np.column_stack([ix.ravel(order="F"), iy.ravel(order="F"), iz.ravel(order="F")]) * spacing

    def vid(i, j, k):
        return i + (nx + 1) * (j + (ny + 1) * k)

    i, j, k = np.meshgrid(np.arange(nx), np.arange(ny), np.arange(nz), indexing="ij")
    i, j, k = (a.ravel(order="F") for a in (i, j, k))
    hexes = np.column_stack([
        vid(i, j, k), vid(i + 1, j, k), vid(i + 1, j + 1, k), vid(i, j + 1, k),
        vid(i, j, k + 1), vid(i + 1, j, k + 1), vid(i + 1, j + 1, k + 1), vid(i, j + 1, k + 1),
    ])
    return points, hexes


def grid_complex(nx, ny, nz, prescriptions=None, *, exact=False):
    points, hexes = structured_grid(nx, ny, nz)
    if exact:
        points = [[Fraction(int(c)) for c in p] for p in points]
    return build_complex(points, hexes, prescriptions, exact=exact)


def unit_cube(prescriptions=None, *, exact=True):
    return grid_complex(1, 1, 1, prescriptions, exact=exact)


def four_cube_torus(*, exact=True):
    """A solid torus of 4 hexes around a square hole.

    Hex k spans the inner edge i_k -> i_{k+1} and the outer edge
    o_k -> o_{k+1}; its left face (local 5) is glued to the right face
    (local 3) of hex k-1, so every hex has exactly two neighbours.
    """
    # clockwise seen from +z so that every hex is positively oriented
    inner = [(1, 1), (1, -1), (-1, -1), (-1, 1)]
    outer = [(3, 3), (3, -3), (-3, -3), (-3, 3)]
    pts = []
    for z in (0, 1):
        for x, y in inner + outer:
            pts.append((x, y, z))
    i = lambda k, z: (k % 4) + 8 * z
    o = lambda k, z: 4 + (k % 4) + 8 * z
    hexes = []
    for k in range(4):
        hexes.append([i(k, 0), i(k + 1, 0), o(k + 1, 0), o(k, 0),
                      i(k, 1), i(k + 1, 1), o(k + 1, 1), o(k, 1)])
    if exact:
        pts = [[Fraction(c) for c in p] for p in pts]
    return pts, hexes


def torus_degenerate_prescriptions(hexes, *, target: int = 0):
    """Cuts forcing every hex's pair of glued faces into a Different pair,
    plus bottom/top cuts that make hex ``target`` degenerate.

    Across each glued face the parity class flips, so alternating classes
    around the ring give matching-class (Different) radial pairs in all
    four hexes, and no neighbour flip can help.
    """
    from .core import FACE_DIAGONALS, RIGHT, LEFT, BOTTOM, TOP

    out = []
    for k, h in enumerate(hexes):
        cls = k % 2
        faces = [RIGHT] if k != target else [RIGHT, LEFT]
        for f in faces:
            a, b = FACE_DIAGONALS[f][cls]
            out.append(([h[v] for v in FACES[f]], [h[a], h[b]]))
    h = hexes[target]
    radial = target % 2
    for f in (BOTTOM, TOP):
        a, b = FACE_DIAGONALS[f][1 - radial]
        out.append(([h[v] for v in FACES[f]], [h[a], h[b]]))
    return out
