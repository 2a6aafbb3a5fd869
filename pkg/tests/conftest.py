import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hex2tet.core import FACE_DIAGONALS, FACES

settings.register_profile(
    "repro", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")


def face_cut(hexes, h, f, cls):
    """(global face, global diagonal) giving local face f of hex h the class cls."""
    verts = [int(v) for v in hexes[h]]
    a, b = FACE_DIAGONALS[f][cls]
    return [verts[v] for v in FACES[f]], [verts[a], verts[b]]


def random_cuts(cx, k, rng):
    """k distinct faces of cx, each with a uniformly random diagonal."""
    fids = np.sort(rng.choice(cx.n_faces, size=k, replace=False))
    out = []
    for fid in fids.tolist():
        h = int(cx.face_hexes[fid, 0])
        out.append(face_cut(cx.hexes, h, cx.local_face_of(h, fid), int(rng.integers(2))))
    return out


@pytest.fixture
def tmp(tmp_path):
    return tmp_path
