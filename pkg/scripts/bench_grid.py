"""Wall-clock timing of build, conversion and certification on n^3 grids."""
import argparse
import time

from hex2tet.core import build_complex
from hex2tet.driver import hex_to_tet
from hex2tet.samples import structured_grid
from hex2tet.verify import check_conformity


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("sizes", nargs="*", type=int, default=[10, 20, 30, 40, 50])
    args = ap.parse_args()
    print("n,hexes,tets,build_s,convert_s,check_s,conforming")
    for n in args.sizes:
        pts, hexes = structured_grid(n, n, n)
        t0 = time.perf_counter()
        cx = build_complex(pts, hexes)
        t1 = time.perf_counter()
        mesh, _ = hex_to_tet(cx, check=False)
        t2 = time.perf_counter()
        ok = check_conformity(mesh, cx).conforming
        t3 = time.perf_counter()
        print(f"{n},{cx.n_hexes},{mesh.n_tets},{t1 - t0:.3f},{t2 - t1:.3f},{t3 - t2:.3f},{ok}")


if __name__ == "__main__":
    main()
