import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hex2tet.core import FACE_DIAGONALS, REF_COORDS, Method
from hex2tet.errors import (
    BadDiagonal, DifferentOrientationPair, IllegalConfig, NotCut, NotFiveEligible,
)
from hex2tet.hexkernel import (
    HexCutConfig, OutcomeKind, five_tet_decompose, five_tets, is_five_eligible, is_isolated_cut,
    production_verdicts, split_hex_into_prisms, steiner_decompose, triangulate_hex,
)
from hex2tet.verify import (
    boundary_config, certify_hex_tiling, config_classes, cube_symmetries, cube_triangulations,
    signed_volume, transform_config,
)

ALL_PARTIAL = list(itertools.product((None, 0, 1), repeat=6))
STEINER_POINTS = list(REF_COORDS) + [(Fraction(1, 2),) * 3]
ISOLATED_FOUR = (0, 0, 1, None, 1, None)  # two Different pairs in opposite classes


def oracle_admits(classes) -> bool:
    for tri in cube_triangulations():
        full = config_classes(boundary_config(tri))
        if all(c is None or c == full[f] for f, c in enumerate(classes)):
            return True
    return False


def test_every_partial_config_agrees_with_the_oracle():
    for classes in ALL_PARTIAL:
        out = triangulate_hex(classes)
        assert (out.kind is OutcomeKind.DEGENERATE) == (not oracle_admits(classes)), classes


@pytest.mark.parametrize("force_six", [False, True])
def test_outcomes_honour_prescriptions_and_tile(force_six):
    for classes in ALL_PARTIAL:
        out = triangulate_hex(classes, force_six=force_six)
        if out.kind is OutcomeKind.DEGENERATE:
            continue
        done = out.config.classes
        assert out.config.complete
        assert all(c is None or c == done[f] for f, c in enumerate(classes))
        assert len(out.tets) == (5 if out.kind is OutcomeKind.FIVE else 6)
        rep = certify_hex_tiling(out.tets, done, check_disjoint=False)
        assert rep.certified, (classes, rep.offending)


def test_no_cuts_gives_marching_six():
    out = triangulate_hex(HexCutConfig())
    assert out.kind is OutcomeKind.SIX and out.method is Method.MARCHING6
    assert all(signed_volume(t, REF_COORDS) == Fraction(1, 6) for t in out.tets)


def test_parity_class_config_gives_the_five_split():
    out = triangulate_hex((0,) * 6)
    assert out.kind is OutcomeKind.FIVE
    want = [{0, 1, 2, 5}, {0, 2, 3, 7}, {0, 4, 5, 7}, {2, 5, 6, 7}, {0, 2, 5, 7}]
    assert sorted(map(sorted, map(set, out.tets))) == sorted(map(sorted, want))
    vols = sorted(signed_volume(t, REF_COORDS) for t in out.tets)
    assert vols == [Fraction(1, 6)] * 4 + [Fraction(1, 3)]
    assert set(five_tets(1)[-1]) == {1, 3, 4, 6}


def test_force_six_avoids_five():
    out = triangulate_hex((1,) * 6, force_six=True)
    assert out.kind is OutcomeKind.SIX and len(out.tets) == 6
    assert certify_hex_tiling(out.tets, (1,) * 6).certified


def test_isolated_four_cut_configuration_is_degenerate_with_isolated_witness():
    cfg = HexCutConfig.from_classes(ISOLATED_FOUR)
    out = triangulate_hex(cfg)
    assert out.kind is OutcomeKind.DEGENERATE
    assert out.witness == (0, 1, 2, 4)
    assert all(is_isolated_cut(cfg, f, among=out.witness) for f in out.witness)


def test_isolation():
    assert is_isolated_cut((0, None, None, None, None, None), 0)
    # bottom {0,2} and front {0,5} share vertex 0
    both = (0, None, 0, None, None, None)
    assert not is_isolated_cut(both, 0) and not is_isolated_cut(both, 2)
    # a single cut is isolated but never degenerate
    assert triangulate_hex((0, None, None, None, None, None)).kind is OutcomeKind.SIX
    with pytest.raises(NotCut):
        is_isolated_cut(both, 1)


def test_five_eligibility():
    assert is_five_eligible((0, 0, None, 0, None, None))
    assert not is_five_eligible((0, 1, None, None, None, None))
    with pytest.raises(NotFiveEligible):
        five_tet_decompose((0, 1, None, None, None, None))


@pytest.mark.parametrize("cid", range(64))
def test_steiner_split_tiles_any_config(cid):
    out = steiner_decompose(HexCutConfig.from_id(cid))
    assert out.kind is OutcomeKind.STEINER and len(out.tets) == 12
    assert out.config.classes == config_classes(cid)
    assert all(signed_volume(t, STEINER_POINTS) == Fraction(1, 12) for t in out.tets)
    assert certify_hex_tiling(out.tets, out.config.classes, check_disjoint=False).certified


def test_steiner_completion_copies_opposite_orientation():
    out = steiner_decompose(ISOLATED_FOUR)
    done = out.config.classes
    assert done[3] == 1 - done[5]
    assert certify_hex_tiling(out.tets, done).certified


def test_prism_split_and_guards():
    a, b, main = split_hex_into_prisms((0, 1, None, None, None, None), (0, 1), (0, 6))
    assert main == (0, 6)
    assert set(a.vertices) | set(b.vertices) == set(range(8))
    with pytest.raises(DifferentOrientationPair):
        split_hex_into_prisms((0, 0, None, None, None, None), (0, 1), (0, 6))
    with pytest.raises(NotCut):
        split_hex_into_prisms((0, None, None, None, None, None), (0, 1), (0, 6))
    with pytest.raises(IllegalConfig):
        split_hex_into_prisms((0, 1, None, None, None, None), (0, 2), (0, 6))
    with pytest.raises(BadDiagonal):
        split_hex_into_prisms((0, 1, None, None, None, None), (0, 1), (0, 5))


def test_flip_invariance_over_full_configs():
    checked = 0
    for cid in range(64):
        out = triangulate_hex(HexCutConfig.from_id(cid))
        if out.kind is not OutcomeKind.SIX or out.split_pair is None:
            continue
        f, g = out.split_pair
        cls = list(out.config.classes)
        if cls[f] == cls[g]:
            continue
        cls[f], cls[g] = 1 - cls[f], 1 - cls[g]
        again = triangulate_hex(tuple(cls))
        assert again.kind is OutcomeKind.SIX
        assert certify_hex_tiling(again.tets, tuple(cls), check_disjoint=False).certified
        checked += 1
    assert checked > 0


@given(st.sampled_from(ALL_PARTIAL), st.sampled_from(cube_symmetries()))
def test_verdict_is_symmetry_invariant(classes, perm):
    image = transform_config(classes, perm)
    assert (triangulate_hex(image).kind is OutcomeKind.DEGENERATE) == \
        (triangulate_hex(classes).kind is OutcomeKind.DEGENERATE)


def test_config_validation():
    with pytest.raises(IllegalConfig):
        HexCutConfig.from_id(64)
    with pytest.raises(IllegalConfig):
        HexCutConfig(((0, 1),) + (None,) * 5)
    with pytest.raises(IllegalConfig):
        HexCutConfig.from_classes((2,) + (None,) * 5)
    cfg = HexCutConfig().with_cut(0, FACE_DIAGONALS[0][1])
    assert cfg.classes[0] == 1 and cfg.n_cut == 1 and not cfg.complete
    assert HexCutConfig.from_id(37).config_id == 37


def test_production_verdicts_cover_all_configs():
    v = production_verdicts()
    assert sorted(v) == list(range(64))
    assert list(v.values()).count("Degenerate") == 18
    assert v[0] == v[63] == "Five"
