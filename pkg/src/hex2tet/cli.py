"""Command-line front end: ``hex2tet --input mesh.msh --output mesh.vtk``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .core import install_prescription, inverted_hexes
from .driver import DriverConfig, hex_to_tet
from .errors import Hex2TetError, UnresolvedDegenerate
from .formats import (
    guess_format,
    read_cuts,
    read_mesh,
    read_native_hexmesh,
    relabel_cuts,
    write_report,
    write_tetmesh,
)
from .hexkernel import production_verdicts
from .verify import certify_exact, classification_csv

EXIT_OK, EXIT_INPUT, EXIT_UNRESOLVED, EXIT_VERIFY = 0, 2, 3, 4

log = logging.getLogger("hex2tet")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hex2tet", description="Conforming hex-to-tet conversion.")
    p.add_argument("--input", type=Path, help="hexahedral mesh file")
    p.add_argument("--input-format", choices=("gmsh", "native"))
    p.add_argument("--cuts", type=Path, help="prescribed face diagonals (JSON sidecar)")
    p.add_argument("--output", type=Path, help="tetrahedral mesh file (CSV with --classify-configs)")
    p.add_argument("--output-format", choices=("gmsh", "vtk", "native"))
    p.add_argument("--no-flips", action="store_true", help="never flip diagonals of neighbouring hexes")
    p.add_argument("--no-steiner", action="store_true", help="never insert a Steiner point")
    p.add_argument("--force-six", action="store_true", help="use 6 tets even where 5 would do")
    p.add_argument("--flip-mode", choices=("pair", "single"), default="pair")
    p.add_argument("--exact", action="store_true", help="convert input coordinates to exact rationals")
    p.add_argument("--reject-inverted", action="store_true",
                   help="fail on hexes with a non-positive corner Jacobian (default: warn)")
    p.add_argument("--verify", action="store_true", help="certify the output with exact arithmetic")
    p.add_argument("--report", type=Path, help="write a JSON conversion report")
    p.add_argument("--classify-configs", action="store_true",
                   help="print the 64-config verdict table as CSV and exit")
    return p


def _load(args):
    fmt = args.input_format or guess_format(args.input)
    cx = read_mesh(args.input, fmt, exact=args.exact)
    cuts = []
    if fmt == "native":
        cuts += read_native_hexmesh(args.input)[2]
    if args.cuts is not None:
        cuts += relabel_cuts(read_cuts(args.cuts), cx)
    for face, diag in cuts:
        install_prescription(cx, face, diag)
    return cx


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="hex2tet: %(message)s")

    if args.classify_configs:
        csv = classification_csv(production=production_verdicts())
        if args.output is None:
            sys.stdout.write(csv)
        else:
            args.output.write_text(csv)
        return EXIT_OK

    if args.input is None or args.output is None:
        log.error("--input and --output are required")
        return EXIT_INPUT
    try:
        cx = _load(args)
        out_fmt = args.output_format or guess_format(args.output)
        config = DriverConfig(allow_flips=not args.no_flips, allow_steiner=not args.no_steiner,
                              force_six=args.force_six, flip_mode=args.flip_mode)
    except (Hex2TetError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT

    bad = inverted_hexes(cx)
    if bad:
        log.warning("%d inverted hexes (first: %d)", len(bad), bad[0])
        if args.reject_inverted:
            return EXIT_INPUT

    try:
        mesh, report = hex_to_tet(cx, config)
    except UnresolvedDegenerate as exc:
        log.error("unresolved degenerate hexes: %s", exc)
        if args.report is not None:
            write_report(exc.report, args.report, {"status": "unresolved"})
        return EXIT_UNRESOLVED

    status, code = "ok", EXIT_OK
    extra = {"n_hexes": cx.n_hexes, "n_tets": mesh.n_tets, "n_points": len(mesh.points)}
    if args.verify:
        cert = certify_exact(mesh, cx)
        extra["verified"] = cert.conforming
        if not cert.conforming:
            for issue in cert.issues:
                log.error("verification: %s", issue)
            status, code = "verification_failed", EXIT_VERIFY
    elif not report.conforming:
        status, code = "not_conforming", EXIT_VERIFY
    try:
        write_tetmesh(mesh, args.output, out_fmt)
        if args.report is not None:
            extra["status"] = status
            write_report(report, args.report, extra)
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
