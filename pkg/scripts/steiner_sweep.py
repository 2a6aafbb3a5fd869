"""How often random prescriptions on a grid still need a Steiner point.

For each seed, k random faces of an n^3 grid get a random diagonal; the
conversion is run with and without the driver lookahead and every
Steiner hex is classified as degenerate from its prescriptions alone or
made degenerate by earlier completions.
"""
import argparse
from collections import Counter

import numpy as np

from hex2tet.core import FACE_DIAGONALS, FACES
from hex2tet.driver import DriverConfig, hex_to_tet
from hex2tet.hexkernel import OutcomeKind, triangulate_hex
from hex2tet.samples import grid_complex


def random_cuts(cx, k, rng):
    out = []
    for fid in np.sort(rng.choice(cx.n_faces, size=k, replace=False)).tolist():
        h = int(cx.face_hexes[fid, 0])
        f = cx.local_face_of(h, fid)
        a, b = FACE_DIAGONALS[f][int(rng.integers(2))]
        verts = cx.hexes[h].tolist()
        out.append(([verts[v] for v in FACES[f]], [verts[a], verts[b]]))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--cuts", type=int, default=50)
    ap.add_argument("--seeds", type=int, default=300)
    args = ap.parse_args()
    base = grid_complex(args.n, args.n, args.n)
    for lookahead in (False, True):
        stats = Counter()
        for seed in range(args.seeds):
            cx = grid_complex(args.n, args.n, args.n, random_cuts(base, args.cuts, np.random.default_rng(seed)))
            mesh, rep = hex_to_tet(cx, DriverConfig(lookahead=lookahead))
            assert rep.conforming
            stats["seeds with steiner"] += bool(rep.steiner_points)
            stats["seeds with flips"] += bool(rep.flips_performed)
            for h, _ in rep.steiner_points:
                pre = triangulate_hex(cx.local_classes(h)).kind is OutcomeKind.DEGENERATE
                stats["steiner: prescribed degenerate" if pre else "steiner: induced"] += 1
        print(f"lookahead={lookahead} seeds={args.seeds}: {dict(stats)}")


if __name__ == "__main__":
    main()
