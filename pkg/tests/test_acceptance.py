"""Acceptance criteria, one PASS/FAIL line each.

Tolerances: exact rational equality wherever exact mode applies; relative
1e-12 on double-mode volumes; wall-clock limits 1 s (prism), 60 s (cube
classification), 10 s (50^3 grid).
"""
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_cuts
from hex2tet.core import REF_COORDS, build_complex
from hex2tet.driver import hex_to_tet
from hex2tet.formats import write_gmsh, write_native_tetmesh, write_report, write_vtk
from hex2tet.hexkernel import HexCutConfig, OutcomeKind, steiner_decompose, triangulate_hex
from hex2tet.prism import F, R, Prism, PrismClass, classify_prism, triangulate_prism
from hex2tet.verify import (
    REF_PRISM_COORDS, PrismVerdict, Verdict, brute_force_cube, brute_force_prism, certify_hex_tiling,
    certify_tiling, check_conformity, config_classes, cube_symmetries, cube_triangulations,
    prism_boundary_triangles, prism_triangulations, signed_volume, transform_config,
)
from hex2tet.samples import four_cube_torus, grid_complex, structured_grid, torus_degenerate_prescriptions

STEINER_POINTS = list(REF_COORDS) + [(Fraction(1, 2),) * 3]
SEED = 0
AGREES = {Verdict.FIVE_OK: OutcomeKind.FIVE, Verdict.BOTH_OK: OutcomeKind.FIVE,
          Verdict.SIX_OK: OutcomeKind.SIX, Verdict.DEGENERATE_ONLY: OutcomeKind.DEGENERATE}


@pytest.fixture
def verdict(capsys):
    def emit(tag, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {tag}: {detail}")
        assert ok, detail
    return emit


def test_c1_prism_classification(verdict):
    prism_triangulations.cache_clear()
    t0 = time.perf_counter()
    ref = Prism((0, 1, 2), (3, 4, 5))
    triples = [(a, b, c) for a in (R, F) for b in (R, F) for c in (R, F)]
    degenerate, tiled = [], 0
    for t in triples:
        oracle, _ = brute_force_prism(t)
        if classify_prism(*t) is PrismClass.DEGENERATE:
            degenerate.append("".join(o.value for o in t))
            assert oracle is PrismVerdict.DEGENERATE
            continue
        assert oracle is PrismVerdict.VALID
        diags = [tuple(ref.rising(i) if o is R else ref.falling(i)) for i, o in enumerate(t)]
        tets = triangulate_prism(ref, diags)
        rep = certify_tiling(tets, REF_PRISM_COORDS, prism_boundary_triangles(ref.bottom, ref.top, diags))
        tiled += len(tets) == 3 and rep.certified and rep.tet_volume == Fraction(1, 2)
    dt = time.perf_counter() - t0
    ok = degenerate == ["RRR", "FFF"] and tiled == 6 and dt < 1.0
    verdict("C1 prism", ok, f"degenerate={degenerate}, certified 3-tet tilings of volume 1/2: {tiled}/6, "
                            f"{dt:.3f}s (<1s)")


def test_c2_cube_classification(verdict):
    cube_triangulations.cache_clear()
    t0 = time.perf_counter()
    table = [brute_force_cube(c) for c in range(64)]
    agree = sum(triangulate_hex(HexCutConfig.from_id(c)).kind is AGREES[table[c].verdict] for c in range(64))
    invariant = 0
    for c in range(64):
        cls = config_classes(c)
        kinds = {triangulate_hex(transform_config(cls, p)).kind for p in cube_symmetries()}
        oracles = {brute_force_cube(transform_config(cls, p)).verdict for p in cube_symmetries()}
        invariant += len(kinds) == 1 and len(oracles) == 1
    dt = time.perf_counter() - t0
    n_deg = sum(r.verdict is Verdict.DEGENERATE_ONLY for r in table)
    ok = agree == 64 and invariant == 64 and dt < 60
    verdict("C2 cube configs", ok, f"production agrees with oracle on {agree}/64 ({n_deg} degenerate), "
                                   f"symmetry-invariant {invariant}/64 under 48 maps, {dt:.1f}s (<60s, exact)")


def test_c3_tet_counts(verdict):
    six_ok = five_ok = steiner_ok = True
    for c in range(64):
        cfg = HexCutConfig.from_id(c)
        out = triangulate_hex(cfg)
        vols = sorted(signed_volume(t, REF_COORDS) for t in out.tets)
        if out.kind is OutcomeKind.SIX:
            six_ok &= vols == [Fraction(1, 6)] * 6
        elif out.kind is OutcomeKind.FIVE:
            five_ok &= vols == [Fraction(1, 6)] * 4 + [Fraction(1, 3)]
        st = steiner_decompose(cfg)
        steiner_ok &= sorted(signed_volume(t, STEINER_POINTS) for t in st.tets) == [Fraction(1, 12)] * 12
        steiner_ok &= certify_hex_tiling(st.tets, st.config.classes, check_disjoint=False).certified
    verdict("C3 tet counts", six_ok and five_ok and steiner_ok,
            f"Six=6x1/6 {six_ok}, Five=4x1/6+1x1/3 {five_ok}, Steiner=12x1/12 {steiner_ok} (exact, unit cube)")


def test_c4_flip_invariance(verdict):
    tested = passed = 0
    for c in range(64):
        out = triangulate_hex(HexCutConfig.from_id(c))
        if out.kind is not OutcomeKind.SIX or out.split_pair is None:
            continue
        f, g = out.split_pair
        cls = list(out.config.classes)
        if cls[f] == cls[g]:
            continue
        tested += 1
        cls[f], cls[g] = 1 - cls[f], 1 - cls[g]
        again = triangulate_hex(tuple(cls))
        passed += again.kind is OutcomeKind.SIX and certify_hex_tiling(again.tets, tuple(cls)).certified
    verdict("C4 flip invariance", tested > 0 and passed == tested,
            f"{passed}/{tested} Same-pair Six configs stay certified Six after the pair flip")


def test_c5_torus(verdict):
    pts, hexes = four_cube_torus()
    cx = build_complex(pts, hexes, torus_degenerate_prescriptions(hexes), exact=True)
    mesh, rep = hex_to_tet(cx)
    cert = check_conformity(mesh, cx)
    ok = rep.flips_performed == [] and len(rep.steiner_points) == 1 and cert.conforming
    verdict("C5 torus", ok, f"flips={len(rep.flips_performed)}, steiner={len(rep.steiner_points)}, "
                            f"tets={mesh.n_tets}, exact conformity={cert.conforming}, volume={cert.tet_volume}")


@pytest.mark.parametrize("exact", [True, False], ids=["exact", "double"])
def test_c6_grid_conservation(verdict, exact):
    base = grid_complex(4, 4, 4)
    details, ok = [], True
    for label, cuts in (("none", None), ("50 random", random_cuts(base, 50, np.random.default_rng(SEED)))):
        cx = grid_complex(4, 4, 4, cuts, exact=exact)
        mesh, rep = hex_to_tet(cx)
        cert = check_conformity(mesh, cx)
        n = cx.n_hexes
        if exact:
            vol_ok = cert.tet_volume == cert.hex_volume == 64
        else:
            vol_ok = abs(cert.tet_volume - cert.hex_volume) <= 1e-12 * cert.hex_volume
        good = cert.conforming and vol_ok and 5 * n <= mesh.n_tets <= 6 * n and not rep.steiner_points
        ok &= good
        details.append(f"{label}: conforming={cert.conforming} volume_ok={vol_ok} tets={mesh.n_tets} "
                       f"steiner={len(rep.steiner_points)} flips={len(rep.flips_performed)}")
    mode = "exact" if exact else "double rel<=1e-12"
    verdict(f"C6 4x4x4 grid ({mode}, seed {SEED})", ok, "; ".join(details))


def test_c7_performance(verdict):
    pts, hexes = structured_grid(50, 50, 50)
    t0 = time.perf_counter()
    cx = build_complex(pts, hexes)
    mesh, rep = hex_to_tet(cx)
    dt = time.perf_counter() - t0
    ok = dt < 10 and rep.conforming and mesh.n_tets <= 750_000
    verdict("C7 50^3 grid", ok, f"{cx.n_hexes} hexes -> {mesh.n_tets} tets in {dt:.2f}s (<10s, double, "
                                f"incl. build and conformity check)")


def test_c8_determinism(verdict, tmp_path):
    pts, hexes = four_cube_torus()
    cases = {
        "grid": lambda: grid_complex(4, 4, 4, random_cuts(grid_complex(4, 4, 4), 50, np.random.default_rng(SEED))),
        "torus": lambda: build_complex(pts, hexes, torus_degenerate_prescriptions(hexes), exact=True),
    }
    same = 0
    for name, make in cases.items():
        blobs = []
        for run in range(2):
            mesh, rep = hex_to_tet(make())
            d = tmp_path / f"{name}{run}"
            d.mkdir()
            write_gmsh(mesh, d / "m.msh")
            write_vtk(mesh, d / "m.vtk")
            write_native_tetmesh(mesh, d / "m.json")
            write_report(rep, d / "r.json")
            blobs.append([(d / f).read_bytes() for f in ("m.msh", "m.vtk", "m.json", "r.json")])
        same += blobs[0] == blobs[1]
    verdict("C8 determinism", same == len(cases), f"{same}/{len(cases)} inputs give byte-identical "
                                                  f"gmsh/vtk/native meshes and reports across runs")
