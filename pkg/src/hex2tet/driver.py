"""Whole-complex conversion: one pass over the hexes in ascending id order.

Each hex sees the cuts already fixed on its faces (prescriptions plus the
faces decided by earlier hexes), is triangulated by the hex kernel, and
writes its completed diagonals back so later neighbours inherit them. A
degenerate hex first tries an opposite-pair flip in an adjacent hex and
otherwise receives a Steiner vertex.
"""
from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .core import FACE_DIAGONALS, OPPOSITE, HexComplex, Method, TetMesh
from .errors import (
    DifferentOrientationPair,
    FlipBreaksMarkedNeighbor,
    NotCut,
    NotOpposite,
    UnresolvedDegenerate,
)
from .hexkernel import (
    STEINER_VERTEX,
    HexOutcome,
    OutcomeKind,
    steiner_decompose,
    triangulate_hex,
)
from .verify import _tet_det6_array, check_conformity

log = logging.getLogger(__name__)


@dataclass
class DriverConfig:
    allow_flips: bool = True
    allow_steiner: bool = True
    force_six: bool = False
    flip_mode: str = "pair"
    traversal: str = "ascending"
    # steer free faces away from diagonals that would leave an unprocessed
    # neighbour degenerate; False gives the plain one-hex-at-a-time completion
    lookahead: bool = True

    def __post_init__(self):
        if self.flip_mode not in ("pair", "single"):
            raise ValueError(f"flip_mode must be 'pair' or 'single', got {self.flip_mode!r}")
        if self.traversal != "ascending":
            raise ValueError("only ascending traversal is supported")


@dataclass
class ConversionReport:
    counts: dict = field(default_factory=lambda: {m.tag: 0 for m in Method})
    flips_performed: list = field(default_factory=list)
    steiner_points: list = field(default_factory=list)
    conforming: Optional[bool] = None
    failures: list = field(default_factory=list)
    retriangulated: list = field(default_factory=list)

    @property
    def n_hexes(self) -> int:
        return sum(self.counts.values())

    def to_dict(self) -> dict:
        return {
            "counts": dict(self.counts),
            "flips_performed": [{"hex": h, "face": list(k)} for h, k in self.flips_performed],
            "steiner_points": [{"hex": h, "vertex": v} for h, v in self.steiner_points],
            "retriangulated": list(self.retriangulated),
            "conforming": self.conforming,
            "failures": list(self.failures),
        }


class Resolution(enum.Enum):
    FLIP_APPLIED = "FlipApplied"
    STEINER_APPLIED = "SteinerApplied"
    UNRESOLVED = "Unresolved"


@dataclass
class DegenerateResolution:
    kind: Resolution
    outcome: Optional[HexOutcome] = None
    flipped_hex: Optional[int] = None
    flipped_faces: tuple = ()


def apply_flip(cx: HexComplex, h: int, face_c: int, face_c_opp: int, *, mode: str = "pair",
               guard_hex: Optional[int] = None) -> tuple:
    """Swap the diagonals of an opposite Same pair of hex ``h``.

    ``mode="single"`` swaps only ``face_c_opp``. Raises FlipBreaksMarkedNeighbor
    when the hex across ``face_c_opp`` is already marked (``guard_hex``, the
    hex currently being resolved, is exempt). Returns the flipped face ids.
    """
    if OPPOSITE[face_c] != face_c_opp:
        raise NotOpposite(f"faces {face_c} and {face_c_opp} are not opposite")
    cls = cx.local_classes(h)
    if cls[face_c] is None or cls[face_c_opp] is None:
        raise NotCut("both faces of a flipped pair must be cut")
    if cls[face_c] == cls[face_c_opp]:
        raise DifferentOrientationPair("only a Same-orientation pair can be flipped")
    beyond = cx.neighbor(h, face_c_opp)
    if beyond is not None and beyond != guard_hex and cx.marked[beyond]:
        raise FlipBreaksMarkedNeighbor(f"hex {beyond} across the far face is already final")
    faces = (face_c, face_c_opp) if mode == "pair" else (face_c_opp,)
    for f in faces:
        cx.set_local_cut(h, f, 1 - cls[f])
    if triangulate_hex(cx.local_classes(h)).kind is OutcomeKind.DEGENERATE:
        for f in faces:
            cx.set_local_cut(h, f, cls[f])
        raise FlipBreaksMarkedNeighbor(f"flip would make hex {h} degenerate")
    return tuple(cx.face_id_of(h, f) for f in faces)


def _undo_flip(cx: HexComplex, face_ids) -> None:
    for fid in face_ids:
        h = int(cx.face_hexes[fid, 0])
        f = cx.local_face_of(h, fid)
        cls = cx.local_classes(h)[f]
        cx.set_local_cut(h, f, 1 - cls)


def degenerate_case(h: int, cx: HexComplex, config: Optional[DriverConfig] = None,
                    *, can_retriangulate=None) -> DegenerateResolution:
    """Resolve a degenerate hex by a neighbour flip, else a Steiner point.

    For each offending cut C (ascending local face), H' is the hex across C
    and C' the face of H' opposite C. The flip is eligible when C and C' form
    a Same pair in H' and the hex beyond C' is unmarked or absent; it is kept
    only if ``h`` stops being degenerate. ``can_retriangulate(h')`` decides
    whether an already-marked H' may be re-triangulated; by default it may not.
    """
    config = config or DriverConfig()
    outcome = triangulate_hex(cx.local_classes(h), force_six=config.force_six)
    if outcome.kind is not OutcomeKind.DEGENERATE:
        raise ValueError(f"hex {h} is not degenerate")
    if config.allow_flips:
        for f in outcome.witness:
            hp = cx.neighbor(h, f)
            if hp is None:
                continue
            if cx.marked[hp] and not (can_retriangulate and can_retriangulate(hp)):
                continue
            fp = cx.local_face_of(hp, cx.face_id_of(h, f))
            try:
                flipped = apply_flip(cx, hp, fp, OPPOSITE[fp], mode=config.flip_mode, guard_hex=h)
            except (NotCut, DifferentOrientationPair, FlipBreaksMarkedNeighbor):
                continue
            again = triangulate_hex(cx.local_classes(h), force_six=config.force_six)
            if again.kind is OutcomeKind.DEGENERATE:
                _undo_flip(cx, flipped)
                continue
            return DegenerateResolution(Resolution.FLIP_APPLIED, again, hp, flipped)
    if config.allow_steiner:
        return DegenerateResolution(Resolution.STEINER_APPLIED, steiner_decompose(outcome.config))
    return DegenerateResolution(Resolution.UNRESOLVED)


@lru_cache(maxsize=None)
def _degenerate_set() -> frozenset:
    """All 729 partial class tuples the kernel reports as degenerate."""
    return frozenset(c for c in itertools.product((None, 0, 1), repeat=6)
                     if triangulate_hex(c).kind is OutcomeKind.DEGENERATE)


def _is_degenerate(classes) -> bool:
    return classes in _degenerate_set()


def _across_table(cx: HexComplex) -> list:
    """Per hex and local face: (neighbour or -1, its local face, class shift).

    ``shift`` is the neighbour's class for our class-0 diagonal: a
    diagonal of class c here is class ``c ^ shift`` over there.
    """
    m = cx.n_hexes
    hf = cx.hex_faces
    rows = cx.face_hexes[hf]  # (m, 6, 2)
    me = np.arange(m)[:, None]
    hp = np.where(rows[..., 0] == me, rows[..., 1], rows[..., 0])
    safe = np.maximum(hp, 0)
    fp = np.argmax(hf[safe] == hf[:, :, None], axis=2)
    even = np.asarray([FACE_DIAGONALS[f][0] for f in range(6)])
    lo = np.minimum(cx.hexes[me, even[:, 0]], cx.hexes[me, even[:, 1]])
    vp = cx.hexes[safe]
    ea = np.take_along_axis(vp, even[fp, 0][..., None], axis=2)[..., 0]
    eb = np.take_along_axis(vp, even[fp, 1][..., None], axis=2)[..., 0]
    shift = np.where((lo == ea) | (lo == eb), 0, 1)
    hp = np.where(hp >= 0, hp, -1)
    return [list(zip(a, b, c)) for a, b, c in zip(hp.tolist(), fp.tolist(), shift.tolist())]


class _Run:
    def __init__(self, cx: HexComplex, config: DriverConfig):
        self.cx = cx
        self.config = config
        m = cx.n_hexes
        self.hexes = cx.hexes.tolist()
        self.hex_faces = cx.hex_faces.tolist()
        self.lo = cx.cut[:, 0].tolist()
        self.outcomes: list = [None] * m
        self.steiner: dict = {}
        self.report = ConversionReport()
        # local endpoints of the class-0 diagonal of each face
        self.even = [FACE_DIAGONALS[f][0] for f in range(6)]
        self.done = [False] * m
        self._across_table = _across_table(cx) if config.lookahead else None

    def classes(self, h):
        verts = self.hexes[h]
        out = []
        for f, fid in enumerate(self.hex_faces[h]):
            c = self.lo[fid]
            if c < 0:
                out.append(None)
            else:
                a, b = self.even[f]
                out.append(0 if c == verts[a] or c == verts[b] else 1)
        return tuple(out)

    def install(self, h, classes):
        verts = self.hexes[h]
        faces = self.hex_faces[h]
        cut = self.cx.cut
        for f in range(6):
            fid = faces[f]
            a, b = FACE_DIAGONALS[f][classes[f]]
            p, q = verts[a], verts[b]
            if p > q:
                p, q = q, p
            if self.lo[fid] != p:
                self.lo[fid] = p
                cut[fid, 0] = p
                cut[fid, 1] = q

    def sync(self, face_ids):
        for fid in face_ids:
            self.lo[fid] = int(self.cx.cut[fid, 0])

    def retriangulable(self, h):
        out = self.outcomes[h]
        return out is not None and out.kind is OutcomeKind.SIX

    def lookahead(self, h, classes):
        """Pre-set free faces of h with the neighbour's interests in mind.

        A diagonal that would make the unmarked neighbour degenerate is
        avoided; if both are harmless, the one giving the neighbour a Same
        pair is taken, since only Different pairs combine into a degenerate
        hex. A choice is kept only if h itself stays non-degenerate.
        """
        out = list(classes)
        table = self._across_table[h]
        for f in range(6):
            if out[f] is not None:
                continue
            hp, fp, shift = table[f]
            if hp < 0 or self.done[hp]:
                continue
            theirs = list(self.classes(hp))
            bad = []
            for cls in (0, 1):
                theirs[fp] = cls ^ shift
                if _is_degenerate(tuple(theirs)):
                    bad.append(cls)
            if len(bad) == 1:
                want = 1 - bad[0]
            elif not bad and theirs[OPPOSITE[fp]] is not None:
                want = theirs[OPPOSITE[fp]] ^ shift ^ 1
            else:
                continue
            out[f] = want
            if _is_degenerate(tuple(out)):
                out[f] = None
        return tuple(out)

    def process(self, h):
        cfg = self.config
        classes = self.classes(h)
        if cfg.lookahead and not _is_degenerate(classes):
            classes = self.lookahead(h, classes)
        outcome = triangulate_hex(classes, force_six=cfg.force_six)
        if outcome.kind is OutcomeKind.DEGENERATE:
            res = degenerate_case(h, self.cx, cfg, can_retriangulate=self.retriangulable)
            if res.kind is Resolution.FLIP_APPLIED:
                self.sync(res.flipped_faces)
                for fid in res.flipped_faces:
                    self.report.flips_performed.append(
                        (res.flipped_hex, tuple(int(v) for v in self.cx.face_keys[fid])))
                if self.cx.marked[res.flipped_hex]:
                    again = triangulate_hex(self.classes(res.flipped_hex), force_six=cfg.force_six)
                    if again.kind is not OutcomeKind.SIX:
                        raise AssertionError(f"flip left hex {res.flipped_hex} without a six-tet split")
                    self._count(self.outcomes[res.flipped_hex], -1)
                    self.outcomes[res.flipped_hex] = again
                    self._count(again, +1)
                    self.report.retriangulated.append(res.flipped_hex)
                outcome = res.outcome
            elif res.kind is Resolution.STEINER_APPLIED:
                outcome = res.outcome
            else:
                self.report.failures.append(
                    f"hex {h}: degenerate cuts on local faces {list(outcome.witness)} could not be resolved")
                self.cx.marked[h] = True
                self.done[h] = True
                return
        self.install(h, outcome.config.classes)
        self.outcomes[h] = outcome
        self._count(outcome, +1)
        self.cx.marked[h] = True
        self.done[h] = True

    def _count(self, outcome, delta):
        self.report.counts[outcome.method.tag] += delta

    def assemble(self) -> TetMesh:
        cx = self.cx
        m = cx.n_hexes
        n0 = len(cx.points)
        steiner_hexes = [h for h, o in enumerate(self.outcomes) if o is not None and o.kind is OutcomeKind.STEINER]
        ext = np.full((m, 9), -1, dtype=np.int64)
        ext[:, :8] = cx.hexes
        new_points = []
        for k, h in enumerate(steiner_hexes):
            ext[h, STEINER_VERTEX] = n0 + k
            corners = cx.points[cx.hexes[h]]
            if cx.exact:
                new_points.append([sum(corners[:, j], Fraction(0)) / 8 for j in range(3)])
            else:
                new_points.append(corners.mean(axis=0))
            self.report.steiner_points.append((h, n0 + k))
        if new_points:
            extra = np.empty((len(new_points), 3), dtype=cx.points.dtype)
            extra[:] = new_points
            points = np.concatenate([cx.points, extra])
        else:
            points = cx.points.copy()

        groups: dict = {}
        for h, o in enumerate(self.outcomes):
            if o is not None:
                groups.setdefault(o.tets, []).append(h)
        blocks, owners, local, methods = [], [], [], []
        for tets, hs in groups.items():
            hs = np.asarray(hs, dtype=np.int64)
            pattern = np.asarray(tets, dtype=np.int64)
            k = len(pattern)
            blocks.append(ext[hs][:, pattern].reshape(-1, 4))
            owners.append(np.repeat(hs, k))
            local.append(np.tile(np.arange(k), len(hs)))
            methods.append(np.full(len(hs) * k, int(self.outcomes[int(hs[0])].method)))
        if blocks:
            tets = np.concatenate(blocks)
            owner = np.concatenate(owners)
            order = np.lexsort((np.concatenate(local), owner))
            tets, owner, method = tets[order], owner[order], np.concatenate(methods)[order]
        else:
            tets = np.zeros((0, 4), dtype=np.int64)
            owner = np.zeros(0, dtype=np.int64)
            method = np.zeros(0, dtype=np.int64)
        if len(tets):
            d6 = _tet_det6_array(points, tets)
            flip = np.asarray(d6 < 0, dtype=bool)
            if flip.any():
                tets[flip] = tets[flip][:, [0, 1, 3, 2]]
            if np.any(d6 == 0):
                log.warning("%d tets have zero volume (degenerate hex geometry)", int(np.sum(d6 == 0)))
        return TetMesh(
            points=points,
            tets=tets,
            source_hex=owner,
            method=method,
            n_original=n0,
            face_keys=cx.face_keys.copy(),
            face_diagonals=cx.cut.copy(),
            vertex_labels=None if cx.vertex_labels is None else cx.vertex_labels.copy(),
        )


def hex_to_tet(cx: HexComplex, config: Optional[DriverConfig] = None, *, check: bool = True):
    """Convert a hex complex into a conforming tet mesh.

    The input complex is not modified; the returned mesh records the final
    diagonal of every face. Raises UnresolvedDegenerate (carrying the
    report) if some hex could be neither flipped nor Steiner-split.
    """
    config = config or DriverConfig()
    work = cx.copy()
    work.marked[:] = False
    run = _Run(work, config)
    for h in range(work.n_hexes):
        run.process(h)
    mesh = run.assemble()
    report = run.report
    if report.failures:
        report.conforming = False
        err = UnresolvedDegenerate("; ".join(report.failures))
        err.report = report
        err.mesh = mesh
        raise err
    if check:
        report.conforming = check_conformity(mesh, work).conforming
    return mesh, report
