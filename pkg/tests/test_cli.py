import json
import subprocess
import sys

import pytest

from conftest import face_cut
from hex2tet.cli import main
from hex2tet.core import BOTTOM, LEFT, RIGHT, TOP
from hex2tet.formats import write_cuts, write_gmsh_hexes, write_native_hexmesh
from hex2tet.samples import structured_grid
from hex2tet.verify import Verdict, classify_all_64

ISOLATED_FOUR = ((BOTTOM, 0), (TOP, 0), (LEFT, 1), (RIGHT, 1))


@pytest.fixture
def cube(tmp_path):
    pts, hexes = structured_grid(1, 1, 1)
    write_gmsh_hexes(pts, hexes, tmp_path / "cube.msh")
    # gmsh node tags are 1-based
    write_cuts([([v + 1 for v in f], [v + 1 for v in d]) for f, d in
                (face_cut(hexes, 0, g, c) for g, c in ISOLATED_FOUR)], tmp_path / "isolated.json")
    return tmp_path


def test_cube_to_vtk(cube):
    assert main(["--input", str(cube / "cube.msh"), "--output", str(cube / "cube.vtk")]) == 0
    assert "CELLS 6 30" in (cube / "cube.vtk").read_text()


def test_degenerate_cuts_without_repairs_exit_3(cube):
    rc = main(["--input", str(cube / "cube.msh"), "--cuts", str(cube / "isolated.json"),
               "--no-steiner", "--no-flips", "--output", str(cube / "x.msh"),
               "--report", str(cube / "r.json")])
    assert rc == 3
    assert json.loads((cube / "r.json").read_text())["status"] == "unresolved"


def test_degenerate_cuts_with_steiner_verify(cube):
    rc = main(["--input", str(cube / "cube.msh"), "--cuts", str(cube / "isolated.json"), "--verify",
               "--output", str(cube / "s.vtk"), "--report", str(cube / "r.json")])
    assert rc == 0
    rep = json.loads((cube / "r.json").read_text())
    assert rep["verified"] and rep["n_tets"] == 12 and rep["steiner_points"] == [{"hex": 0, "vertex": 8}]


def test_classify_configs(cube, capsys):
    assert main(["--classify-configs"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert len(rows) == 65 and rows[0].endswith(",production")
    oracle = {r.config_id: r.verdict for r in classify_all_64()}
    agree = {Verdict.FIVE_OK: {"Five"}, Verdict.BOTH_OK: {"Five"}, Verdict.SIX_OK: {"Six"},
             Verdict.DEGENERATE_ONLY: {"Degenerate"}}
    for row in rows[1:]:
        cid, *_, production = row.split(",")
        assert production in agree[oracle[int(cid)]]
    assert main(["--classify-configs", "--output", str(cube / "t.csv")]) == 0
    assert (cube / "t.csv").read_text().count("\n") == 65


@pytest.mark.parametrize("args", [
    ["--input", "missing.msh", "--output", "o.vtk"],
    ["--input", "{d}/cube.msh", "--output", "o.xyz"],
    ["--input", "{d}/cube.msh", "--cuts", "{d}/bad.json", "--output", "{d}/o.vtk"],
    ["--output", "o.vtk"],
])
def test_input_errors_exit_2(cube, args):
    (cube / "bad.json").write_text(json.dumps({"cuts": [{"face": [1, 2, 4, 3], "diagonal": [1, 2]}]}))
    assert main([a.format(d=cube) for a in args]) == 2


def test_bad_flag_exits_2(cube):
    with pytest.raises(SystemExit) as info:
        main(["--flip-mode", "sideways"])
    assert info.value.code == 2


def test_inverted_hexes_warn_or_reject(tmp_path):
    pts, hexes = structured_grid(1, 1, 1)
    write_gmsh_hexes(pts, hexes[:, [4, 5, 6, 7, 0, 1, 2, 3]], tmp_path / "inv.msh")
    base = ["--input", str(tmp_path / "inv.msh"), "--output", str(tmp_path / "o.vtk")]
    assert main(base + ["--reject-inverted"]) == 2
    # accepted by default; every tet is re-oriented positive so the output still certifies
    assert main(base + ["--verify"]) == 0


def test_native_in_and_out(tmp_path):
    pts, hexes = structured_grid(2, 1, 1)
    write_native_hexmesh(pts, hexes, tmp_path / "h.json", cuts=[face_cut(hexes, 0, BOTTOM, 1)])
    rc = main(["--input", str(tmp_path / "h.json"), "--output", str(tmp_path / "t.json"), "--exact", "--verify"])
    assert rc == 0
    doc = json.loads((tmp_path / "t.json").read_text())
    assert doc["kind"] == "tetmesh" and len(doc["tets"]) == 12
    assert isinstance(doc["points"][0][0], str)
    cut = dict((tuple(e["face"]), e["diagonal"]) for e in doc["face_cuts"])
    face, diag = face_cut(hexes, 0, BOTTOM, 1)
    assert cut[tuple(sorted(face))] == sorted(diag)


def test_outputs_are_byte_identical(cube):
    outs = []
    for k in range(2):
        args = ["--input", str(cube / "cube.msh"), "--cuts", str(cube / "isolated.json"),
                "--output", str(cube / f"o{k}.msh"), "--report", str(cube / f"r{k}.json")]
        assert main(args) == 0
        outs.append(((cube / f"o{k}.msh").read_bytes(), (cube / f"r{k}.json").read_bytes()))
    assert outs[0] == outs[1]


def test_module_entry_point(cube):
    proc = subprocess.run([sys.executable, "-m", "hex2tet", "--input", str(cube / "cube.msh"),
                           "--output", str(cube / "m.vtk")], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "CELL_TYPES 6\n" in (cube / "m.vtk").read_text()
