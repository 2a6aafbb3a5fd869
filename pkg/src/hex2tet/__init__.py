"""Conforming conversion of hexahedral meshes with prescribed face cuts into tetrahedra."""
from .core import (
    FACES,
    FACE_DIAGONALS,
    OPPOSITE,
    PAIRS,
    HexComplex,
    Method,
    Relation,
    TetMesh,
    build_complex,
    diagonal_class,
    install_prescription,
    inverted_hexes,
    opposite_face,
    pair_orientation_relation,
)
from .driver import ConversionReport, DriverConfig, apply_flip, degenerate_case, hex_to_tet
from .errors import *  # noqa: F401,F403
from .formats import read_cuts, read_mesh, write_cuts, write_report, write_tetmesh
from .hexkernel import (
    HexCutConfig,
    HexOutcome,
    OutcomeKind,
    five_tet_decompose,
    is_five_eligible,
    is_isolated_cut,
    split_hex_into_prisms,
    steiner_decompose,
    triangulate_hex,
)
from .prism import Orientation, Prism, PrismClass, classify_prism, triangulate_prism
from .verify import (
    Verdict,
    brute_force_cube,
    brute_force_prism,
    certify_exact,
    certify_hex_tiling,
    check_conformity,
    classify_all_64,
)

__version__ = "0.1.0"
