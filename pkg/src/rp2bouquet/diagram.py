"""Immersed bouquet diagrams in the disk model of the projective plane.

A *bouquet* of n circles is n loops sharing a single base vertex V.  A diagram
records a generic immersion of the bouquet into RP^2 as exact rational
polylines in the closed unit disk:

* a :class:`Leg` is a polyline that stays inside the open disk except possibly
  at its two endpoints, which may lie on the seam (the boundary circle) or at
  the vertex;
* a :class:`LoopPath` chains legs together: each loop starts at V, ends at V,
  and consecutive legs hand over through the seam at exactly antipodal points
  with matching differentials (see :func:`rp2bouquet.geometry.seam_reflection`);
* a :class:`BouquetDiagram` owns the vertex and the n loops.

"Generic position" is decided exactly by :func:`validate`: all the familiar
transversality conditions (no tangencies, no triple points, no crossing at the
vertex, distinct non-antipodal seam points, no cusps in the PL sense, distinct
half-edge directions at V) become sign conditions on rational determinants.
Every other operation in the package requires a diagram that validates
cleanly, and :func:`crossings` refuses to run on anything else.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .geometry import (
    Point,
    Rat,
    SegKind,
    mat_apply,
    on_unit_circle,
    rat,
    seam_reflection,
    segment_intersection,
    sign,
)

__all__ = [
    "HalfEdge",
    "Leg",
    "LoopPath",
    "BouquetDiagram",
    "LoopParam",
    "Crossing",
    "Violation",
    "InvalidDiagram",
    "DiagramFormatError",
    "validate",
    "crossings",
    "vertex_directions",
    "to_json_obj",
    "from_json_obj",
    "dumps",
    "loads",
]


class InvalidDiagram(ValueError):
    """Operation requires a diagram in generic position and this one is not."""


class DiagramFormatError(ValueError):
    """The serialized form could not be parsed into a diagram."""


# ---------------------------------------------------------------------------
# symbols
# ---------------------------------------------------------------------------

_SYMBOL_RE = re.compile(r"^e([1-9][0-9]*)(\^-1)?$")


@dataclass(frozen=True, slots=True, order=True)
class HalfEdge:
    """One of the 2n half-edge symbols at the vertex: e_i or e_i^-1.

    Ordering is e1 < e1^-1 < e2 < e2^-1 < ..., which is the symbol order used
    when canonical cyclic words are compared lexicographically.
    """

    loop: int
    inverted: bool

    def __str__(self) -> str:
        return f"e{self.loop + 1}" + ("^-1" if self.inverted else "")

    @staticmethod
    def parse(text: str) -> "HalfEdge":
        m = _SYMBOL_RE.match(text)
        if not m:
            raise DiagramFormatError(f"bad half-edge symbol {text!r}")
        return HalfEdge(int(m.group(1)) - 1, m.group(2) is not None)


# ---------------------------------------------------------------------------
# data model
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Leg:
    """A polyline between seam/vertex endpoints; at least two points."""

    points: tuple[Point, ...]

    def __len__(self) -> int:
        return len(self.points)

    @property
    def segments(self) -> int:
        return len(self.points) - 1


@dataclass(frozen=True, slots=True)
class LoopPath:
    """One loop of the bouquet: legs chained through the seam."""

    legs: tuple[Leg, ...]

    @property
    def seam_crossings(self) -> int:
        return len(self.legs) - 1

    def first_direction(self) -> Point:
        leg = self.legs[0]
        return leg.points[1] - leg.points[0]

    def last_direction(self) -> Point:
        leg = self.legs[-1]
        return leg.points[-1] - leg.points[-2]


@dataclass(frozen=True)
class BouquetDiagram:
    """n loops based at a common vertex strictly inside the unit disk."""

    n: int
    vertex: Point
    loops: tuple[LoopPath, ...]

    def segment(self, loop: int, leg: int, seg: int) -> tuple[Point, Point]:
        pts = self.loops[loop].legs[leg].points
        return pts[seg], pts[seg + 1]

    def iter_segments(self) -> Iterator[tuple[int, int, int, Point, Point]]:
        for li, loop in enumerate(self.loops):
            for ki, leg in enumerate(loop.legs):
                pts = leg.points
                for si in range(len(pts) - 1):
                    yield li, ki, si, pts[si], pts[si + 1]


@dataclass(frozen=True, slots=True, order=True)
class LoopParam:
    """Position along a loop: (leg, segment, fraction), fraction in (0, 1).

    Lexicographic order on the triple is the traversal order of the loop.
    """

    leg: int
    seg: int
    frac: Rat


@dataclass(frozen=True, slots=True)
class Crossing:
    """A transversal double point.

    For a self-crossing (loop_a == loop_b) the two parameters are ordered
    param_a < param_b; for distinct loops, loop_a < loop_b.  `frame` is the
    orientation sign of the ordered frame (direction at param_a, direction at
    param_b): +1 for a counterclockwise frame.
    """

    loop_a: int
    loop_b: int
    param_a: LoopParam
    param_b: LoopParam
    location: Point
    frame: int

    def sort_key(self):
        return (self.loop_a, self.param_a, self.loop_b, self.param_b)

    def involves(self, loop: int, keys: set[tuple[int, int]]) -> bool:
        return (self.loop_a == loop and (self.param_a.leg, self.param_a.seg) in keys) or (
            self.loop_b == loop and (self.param_b.leg, self.param_b.seg) in keys
        )


@dataclass(frozen=True, slots=True)
class Violation:
    """One failed generic-position condition, with enough indices to find it."""

    kind: str
    loop: int | None = None
    leg: int | None = None
    segment: int | None = None
    note: str = ""

    def __str__(self) -> str:
        parts = [self.kind]
        for label, value in (("loop", self.loop), ("leg", self.leg), ("segment", self.segment)):
            if value is not None:
                parts.append(f"{label}={value}")
        if self.note:
            parts.append(self.note)
        return " ".join(parts)


@dataclass(frozen=True)
class DiagramAnalysis:
    violations: tuple[Violation, ...]
    crossings: tuple[Crossing, ...]


# ---------------------------------------------------------------------------
# structural checks
# ---------------------------------------------------------------------------

def _check_leg(out: list[Violation], vertex: Point, li: int, ki: int, leg: Leg,
               is_first: bool, is_last: bool) -> None:
    pts = leg.points
    if len(pts) < 2:
        out.append(Violation("ShortLeg", li, ki))
        return
    for i in range(len(pts) - 1):
        if pts[i] == pts[i + 1]:
            out.append(Violation("RepeatedPoint", li, ki, i))
    for i in range(1, len(pts) - 1):
        d1 = pts[i] - pts[i - 1]
        d2 = pts[i + 1] - pts[i]
        if not d1.is_zero() and not d2.is_zero() and d1.cross(d2) == 0 and d1.dot(d2) < 0:
            out.append(Violation("Cusp", li, ki, i, "exact direction reversal"))
    for i in range(1, len(pts) - 1):
        n2 = pts[i].norm2()
        if n2 > 1:
            out.append(Violation("PointOutsideDisk", li, ki, i))
        elif n2 == 1:
            out.append(Violation("PointOnCircle", li, ki, i, "non-seam point on the seam circle"))
    for idx, must_be_vertex in ((0, is_first), (len(pts) - 1, is_last)):
        p = pts[idx]
        if must_be_vertex:
            if p != vertex:
                out.append(Violation("LoopEndpointNotVertex", li, ki, idx))
        else:
            if not on_unit_circle(p):
                out.append(Violation("SeamPointOffCircle", li, ki, idx))


def _check_joints(out: list[Violation], li: int, loop: LoopPath) -> None:
    for ki in range(len(loop.legs) - 1):
        a, b = loop.legs[ki], loop.legs[ki + 1]
        if len(a.points) < 2 or len(b.points) < 2:
            continue
        p, q = a.points[-1], b.points[0]
        if not on_unit_circle(p) or not on_unit_circle(q):
            continue  # already reported as SeamPointOffCircle
        if q != -p:
            out.append(Violation("SeamNotAntipodal", li, ki, note="legs must rejoin at the antipode"))
            continue
        d_out = p - a.points[-2]
        d_in = b.points[1] - q
        if d_out.is_zero() or d_in.is_zero():
            continue
        w = mat_apply(seam_reflection(p), d_out)
        if not (w.cross(d_in) == 0 and w.dot(d_in) > 0):
            out.append(Violation("SeamRegularity", li, ki,
                                 note="entry direction must match the reflected exit direction"))


def _check_vertex_directions(out: list[Violation], d: BouquetDiagram) -> None:
    vecs: list[tuple[int, Point]] = []
    for li, loop in enumerate(d.loops):
        if any(len(leg.points) < 2 for leg in loop.legs):
            return
        vecs.append((li, loop.first_direction()))
        vecs.append((li, -loop.last_direction()))
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            u, v = vecs[i][1], vecs[j][1]
            if u.is_zero() or v.is_zero():
                continue
            if u.cross(v) == 0 and u.dot(v) > 0:
                out.append(Violation("CodirectionalAtVertex", vecs[i][0],
                                     note=f"half-edges of loops {vecs[i][0]} and {vecs[j][0]}"))


def _check_seam_table(out: list[Violation], d: BouquetDiagram) -> None:
    exits: list[tuple[int, Point]] = []
    for li, loop in enumerate(d.loops):
        for leg in loop.legs[:-1]:
            exits.append((li, leg.points[-1]))
    for i in range(len(exits)):
        for j in range(i + 1, len(exits)):
            p, q = exits[i][1], exits[j][1]
            if p == q:
                out.append(Violation("CoincidentSeamPoints", exits[i][0],
                                     note=f"loops {exits[i][0]} and {exits[j][0]}"))
            elif p == -q:
                out.append(Violation("AntipodalSeamPoints", exits[i][0],
                                     note=f"loops {exits[i][0]} and {exits[j][0]}"))


def _structural_violations(d: BouquetDiagram) -> list[Violation]:
    out: list[Violation] = []
    if d.n < 1:
        out.append(Violation("BadLoopCount", note="n must be >= 1"))
    if len(d.loops) != d.n:
        out.append(Violation("BadLoopCount", note=f"expected {d.n} loops, found {len(d.loops)}"))
    if d.vertex.norm2() >= 1:
        out.append(Violation("VertexOutsideDisk"))
    for li, loop in enumerate(d.loops):
        if not loop.legs:
            out.append(Violation("ShortLeg", li, note="loop with no legs"))
            continue
        last = len(loop.legs) - 1
        for ki, leg in enumerate(loop.legs):
            _check_leg(out, d.vertex, li, ki, leg, ki == 0, ki == last)
        _check_joints(out, li, loop)
    if not out:
        _check_vertex_directions(out, d)
        _check_seam_table(out, d)
    return out


# ---------------------------------------------------------------------------
# pairwise segment scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class _Seg:
    loop: int
    leg: int
    seg: int
    a: Point
    b: Point
    minx: Rat
    maxx: Rat
    miny: Rat
    maxy: Rat
    at_vertex: bool


def _segment_records(d: BouquetDiagram) -> list[_Seg]:
    records = []
    for li, loop in enumerate(d.loops):
        last_leg = len(loop.legs) - 1
        for ki, leg in enumerate(loop.legs):
            pts = leg.points
            last_seg = len(pts) - 2
            for si in range(len(pts) - 1):
                a, b = pts[si], pts[si + 1]
                at_v = (ki == 0 and si == 0) or (ki == last_leg and si == last_seg)
                minx, maxx = (a.x, b.x) if a.x <= b.x else (b.x, a.x)
                miny, maxy = (a.y, b.y) if a.y <= b.y else (b.y, a.y)
                records.append(_Seg(li, ki, si, a, b, minx, maxx, miny, maxy, at_v))
    return records


def _skip_pair(s: _Seg, t: _Seg) -> bool:
    if s.loop == t.loop and s.leg == t.leg and abs(s.seg - t.seg) == 1:
        return True  # consecutive corner; cusp/overlap handled structurally
    if s.at_vertex and t.at_vertex:
        return True  # both touch V; overlap handled by the codirection check
    return False


def _pair_crossing(s: _Seg, t: _Seg, res) -> Crossing:
    pa = LoopParam(s.leg, s.seg, res.t1)
    pb = LoopParam(t.leg, t.seg, res.t2)
    da = s.b - s.a
    db = t.b - t.a
    if s.loop == t.loop:
        if pa <= pb:
            return Crossing(s.loop, t.loop, pa, pb, res.point, sign(da.cross(db)))
        return Crossing(s.loop, t.loop, pb, pa, res.point, sign(db.cross(da)))
    if s.loop < t.loop:
        return Crossing(s.loop, t.loop, pa, pb, res.point, sign(da.cross(db)))
    return Crossing(t.loop, s.loop, pb, pa, res.point, sign(db.cross(da)))


def _scan_pairs(records: list[_Seg], pairs: Iterable[tuple[_Seg, _Seg]],
                out_violations: list[Violation], out_crossings: list[Crossing]) -> None:
    for s, t in pairs:
        res = segment_intersection(s.a, s.b, t.a, t.b)
        if res.kind is SegKind.PROPER:
            out_crossings.append(_pair_crossing(s, t, res))
        elif res.kind is SegKind.DEGENERATE:
            out_violations.append(Violation(
                "NonTransversal", s.loop, s.leg, s.seg,
                note=f"against loop={t.loop} leg={t.leg} segment={t.seg}"))


def _all_pairs(records: list[_Seg]) -> Iterator[tuple[_Seg, _Seg]]:
    order = sorted(range(len(records)), key=lambda i: records[i].minx)
    active: list[int] = []
    for idx in order:
        s = records[idx]
        kept = []
        for j in active:
            t = records[j]
            if t.maxx < s.minx:
                continue
            kept.append(j)
            if t.miny > s.maxy or t.maxy < s.miny or _skip_pair(s, t):
                continue
            yield s, t
        kept.append(idx)
        active = kept


def _check_crossing_set(out: list[Violation], vertex: Point, found: list[Crossing]) -> None:
    seen: dict[tuple[Rat, Rat], Crossing] = {}
    for c in found:
        key = (c.location.x, c.location.y)
        if key in seen:
            out.append(Violation("TriplePoint", c.loop_a, c.param_a.leg, c.param_a.seg,
                                 note="two crossings at the same point"))
        seen[key] = c
        if c.location == vertex:
            out.append(Violation("CrossingAtVertex", c.loop_a, c.param_a.leg, c.param_a.seg))


def _analyze(d: BouquetDiagram) -> DiagramAnalysis:
    violations = _structural_violations(d)
    if violations:
        return DiagramAnalysis(tuple(violations), ())
    records = _segment_records(d)
    found: list[Crossing] = []
    _scan_pairs(records, _all_pairs(records), violations, found)
    _check_crossing_set(violations, d.vertex, found)
    if violations:
        return DiagramAnalysis(tuple(violations), ())
    found.sort(key=Crossing.sort_key)
    return DiagramAnalysis((), tuple(found))


def analysis(d: BouquetDiagram) -> DiagramAnalysis:
    cached = getattr(d, "_cache", None)
    if cached is None:
        cached = _analyze(d)
        object.__setattr__(d, "_cache", cached)
    return cached


def _set_analysis(d: BouquetDiagram, value: DiagramAnalysis) -> None:
    object.__setattr__(d, "_cache", value)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def validate(d: BouquetDiagram) -> list[Violation]:
    """All generic-position violations of the diagram; empty means valid."""
    return list(analysis(d).violations)


def crossings(d: BouquetDiagram) -> tuple[Crossing, ...]:
    """All transversal double points, sorted by (loop_a, param_a, loop_b, param_b).

    Raises :class:`InvalidDiagram` when the diagram is not in generic
    position: crossing data of a degenerate diagram would be meaningless.
    """
    a = analysis(d)
    if a.violations:
        raise InvalidDiagram(f"{len(a.violations)} violation(s), first: {a.violations[0]}")
    return a.crossings


def vertex_directions(d: BouquetDiagram) -> list[tuple[HalfEdge, Point]]:
    """The 2n (half-edge symbol, direction) pairs at the vertex.

    The outgoing half-edge e_i points along the first segment of loop i; the
    incoming half-edge e_i^-1 points along the *reversed* last segment, so
    both directions emanate from V.
    """
    out: list[tuple[HalfEdge, Point]] = []
    for li, loop in enumerate(d.loops):
        out.append((HalfEdge(li, False), loop.first_direction()))
        out.append((HalfEdge(li, True), -loop.last_direction()))
    return out


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _point_to_json(p: Point) -> list[int]:
    return [int(p.x.numerator), int(p.x.denominator), int(p.y.numerator), int(p.y.denominator)]


def _point_from_json(obj) -> Point:
    if not (isinstance(obj, list) and len(obj) == 4 and all(isinstance(v, int) for v in obj)):
        raise DiagramFormatError(f"point must be [xnum, xden, ynum, yden] of ints, got {obj!r}")
    xn, xd, yn, yd = obj
    if xd == 0 or yd == 0:
        raise DiagramFormatError("zero denominator in point")
    return Point(rat(xn, xd), rat(yn, yd))


def to_json_obj(d: BouquetDiagram) -> dict:
    return {
        "n": d.n,
        "vertex": _point_to_json(d.vertex),
        "loops": [
            {"legs": [[_point_to_json(p) for p in leg.points] for leg in loop.legs]}
            for loop in d.loops
        ],
    }


def from_json_obj(obj) -> BouquetDiagram:
    if not isinstance(obj, dict):
        raise DiagramFormatError("top level must be an object")
    try:
        n = obj["n"]
        vertex = obj["vertex"]
        loops = obj["loops"]
    except KeyError as exc:
        raise DiagramFormatError(f"missing key {exc.args[0]!r}") from None
    if not isinstance(n, int):
        raise DiagramFormatError("n must be an integer")
    if not isinstance(loops, list):
        raise DiagramFormatError("loops must be a list")
    parsed_loops = []
    for loop_obj in loops:
        if not isinstance(loop_obj, dict) or "legs" not in loop_obj:
            raise DiagramFormatError("each loop must be an object with a 'legs' list")
        legs_obj = loop_obj["legs"]
        if not isinstance(legs_obj, list) or not legs_obj:
            raise DiagramFormatError("legs must be a non-empty list")
        legs = []
        for leg_obj in legs_obj:
            if not isinstance(leg_obj, list) or len(leg_obj) < 2:
                raise DiagramFormatError("each leg needs at least two points")
            legs.append(Leg(tuple(_point_from_json(p) for p in leg_obj)))
        parsed_loops.append(LoopPath(tuple(legs)))
    return BouquetDiagram(n, _point_from_json(vertex), tuple(parsed_loops))


def dumps(d: BouquetDiagram) -> str:
    """Compact, canonical (lowest terms, positive denominators) JSON text."""
    return json.dumps(to_json_obj(d), separators=(",", ":")) + "\n"


def loads(text: str) -> BouquetDiagram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramFormatError(f"not valid JSON: {exc}") from None
    return from_json_obj(obj)
