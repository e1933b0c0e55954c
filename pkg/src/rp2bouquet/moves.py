"""Regular-homotopy moves and non-regular control edits on bouquet diagrams.

Moves (:class:`MoveSpec`) realize regular homotopies, so applying one must
preserve the full invariant tuple; edits (:class:`EditSpec`) are deliberate
invariant breakers used as negative controls.  Everything is applied the same
way: a template polyline built from the spec's exact rational parameters is
spliced into the target loop, and the candidate result is then *checked*, not
trusted -

* the changed loop, the vertex star and the seam table must still be in
  generic position;
* every crossing of the input diagram must survive at its exact location
  (so a template never lands on top of existing geometry);
* the freshly created crossings must match the move's contract exactly, e.g.
  a kink pair adds two self-crossings of opposite sign and nothing else.

Any failure raises :class:`MoveBlocked`; there is no notion of an "almost
legal" move.  Smallness never needs to be argued: the checks are exact.

Templates in segment-local coordinates (e = segment vector, v = left normal):

* curl - four points making one loop over the segment, one self-crossing
  whose sign is -sign(h) before seam transport;
* kink pair - two curls of opposite side on disjoint windows;
* detour - two curls of equal side followed by a short excursion through the
  seam (out at q, back in through a second transition at r close to -q),
  adding two seam crossings and shifting the signed index by exactly +-2;
* finger push - a rectangular finger over one other strand, two transversal
  crossings with it;
* seam reroute (edit) - replaces a window with a one-transition trip through
  the seam, flipping the loop's homotopy class bit;
* single kink (edit) - one curl, flipping the loop's parity bit.

Applying a move only re-examines segments the splice touched; the analysis of
the rest of the diagram is reused and updated, which is what keeps long random
move sequences cheap.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator

from .geometry import Point, Rat, SegKind, circle_point, mat_apply, rat, seam_reflection, segment_intersection, sign
from .diagram import (
    BouquetDiagram,
    Crossing,
    DiagramAnalysis,
    InvalidDiagram,
    Leg,
    LoopParam,
    LoopPath,
    Violation,
    _check_joints,
    _check_leg,
    _check_seam_table,
    _check_vertex_directions,
    _pair_crossing,
    _segment_records,
    _set_analysis,
    _skip_pair,
    analysis,
    vertex_directions,
)
from .geometry import angle_sort

__all__ = [
    "MOVE_KINDS",
    "EDIT_KINDS",
    "MoveBlocked",
    "Exhausted",
    "MoveSpec",
    "EditSpec",
    "EditOutcome",
    "apply_move",
    "apply_edit",
    "apply_edit_outcome",
    "random_move",
    "random_move_applied",
    "random_edit",
]

MOVE_KINDS = ("KinkPair", "Detour", "FingerPush", "Jiggle", "Subdivide")
EDIT_KINDS = ("SingleKink", "SeamReroute")

_PARAM_COUNTS = {
    "KinkPair": 4,     # t1 t2 w h
    "Detour": 5,       # sigma t w uq ur
    "FingerPush": 7,   # t w loop2 leg2 seg2 s2 reach
    "Jiggle": 2,       # dx dy            (target's third index is the point)
    "Subdivide": 1,    # t
    "SingleKink": 3,   # t w h
    "SeamReroute": 3,  # t w uq
}


class MoveBlocked(RuntimeError):
    """The move cannot be applied here: the result would not be generic or
    would not satisfy the move's crossing contract."""


class Exhausted(RuntimeError):
    """random_move gave up after its retry budget."""


def _format_params(params: tuple[Rat, ...]) -> str:
    return " ".join(f"{p.numerator}/{p.denominator}" for p in params)


def _parse_rat(token: str) -> Rat:
    num, slash, den = token.partition("/")
    if not slash:
        return rat(int(num))
    return rat(int(num), int(den))


@dataclass(frozen=True)
class MoveSpec:
    """One invariant-preserving move.

    `loop`, `leg`, `segment` address the spliced segment, except for Jiggle
    where the third index addresses the interior polyline point being moved.
    `params` are the kind-specific rationals listed in the module docstring.
    """

    kind: str
    loop: int
    leg: int
    segment: int
    params: tuple[Rat, ...]

    def __post_init__(self):
        if self.kind not in _PARAM_COUNTS or self.kind in EDIT_KINDS:
            raise ValueError(f"unknown move kind {self.kind!r}")
        if len(self.params) != _PARAM_COUNTS[self.kind]:
            raise ValueError(f"{self.kind} takes {_PARAM_COUNTS[self.kind]} params")
        if min(self.loop, self.leg, self.segment) < 0:
            raise ValueError("target indices must be non-negative")

    def to_line(self) -> str:
        return f"{self.kind} {self.loop} {self.leg} {self.segment} {_format_params(self.params)}"

    @staticmethod
    def from_line(line: str) -> "MoveSpec":
        tokens = line.split()
        if len(tokens) < 4:
            raise ValueError(f"malformed move line {line!r}")
        kind = tokens[0]
        if kind not in MOVE_KINDS:
            raise ValueError(f"unknown move kind {kind!r}")
        loop, leg, seg = (int(t) for t in tokens[1:4])
        params = tuple(_parse_rat(t) for t in tokens[4:])
        return MoveSpec(kind, loop, leg, seg, params)


@dataclass(frozen=True)
class EditSpec:
    """One deliberately non-regular edit (negative control)."""

    kind: str
    loop: int
    leg: int
    segment: int
    params: tuple[Rat, ...]

    def __post_init__(self):
        if self.kind not in EDIT_KINDS:
            raise ValueError(f"unknown edit kind {self.kind!r}")
        if len(self.params) != _PARAM_COUNTS[self.kind]:
            raise ValueError(f"{self.kind} takes {_PARAM_COUNTS[self.kind]} params")
        if min(self.loop, self.leg, self.segment) < 0:
            raise ValueError("target indices must be non-negative")

    def to_line(self) -> str:
        return f"{self.kind} {self.loop} {self.leg} {self.segment} {_format_params(self.params)}"

    @staticmethod
    def from_line(line: str) -> "EditSpec":
        tokens = line.split()
        if len(tokens) < 4:
            raise ValueError(f"malformed edit line {line!r}")
        kind = tokens[0]
        if kind not in EDIT_KINDS:
            raise ValueError(f"unknown edit kind {kind!r}")
        loop, leg, seg = (int(t) for t in tokens[1:4])
        params = tuple(_parse_rat(t) for t in tokens[4:])
        return EditSpec(kind, loop, leg, seg, params)


# ---------------------------------------------------------------------------
# splice machinery
# ---------------------------------------------------------------------------

@dataclass
class _Splice:
    loop: int
    new_legs: tuple[Leg, ...]
    replaced: set[tuple[int, int]]                      # old (leg, seg) keys no longer present
    remap: Callable[[int, int], tuple[int, int]]        # old key -> new key, for keys not replaced
    changed: set[tuple[int, int]]                       # new (leg, seg) keys to re-examine
    contract: Callable[[list[Crossing]], str | None]    # additions -> error message or None
    check_persistence: bool = True                      # old crossing locations must survive


def _contribution(c: Crossing) -> int:
    """Signed-index contribution of a self-crossing at orientation +1."""
    return (-1 if c.param_a.leg % 2 else 1) * c.frame


def _changed_pairs(records, chkeys) -> Iterator[tuple]:
    changed = [r for r in records if (r.loop, r.leg, r.seg) in chkeys]
    for u in changed:
        ku = (u.loop, u.leg, u.seg)
        for v in records:
            kv = (v.loop, v.leg, v.seg)
            if kv == ku or (kv in chkeys and kv <= ku):
                continue
            if v.maxx < u.minx or v.minx > u.maxx or v.maxy < u.miny or v.miny > u.maxy:
                continue
            if _skip_pair(u, v):
                continue
            yield u, v


def _remap_crossing(c: Crossing, splice: _Splice) -> Crossing:
    pa, pb = c.param_a, c.param_b
    if c.loop_a == splice.loop:
        leg, seg = splice.remap(pa.leg, pa.seg)
        pa = LoopParam(leg, seg, pa.frac)
    if c.loop_b == splice.loop:
        leg, seg = splice.remap(pb.leg, pb.seg)
        pb = LoopParam(leg, seg, pb.frac)
    if pa is c.param_a and pb is c.param_b:
        return c
    return Crossing(c.loop_a, c.loop_b, pa, pb, c.location, c.frame)


def _structural_ok(d2: BouquetDiagram, loop: int) -> Violation | None:
    viols: list[Violation] = []
    lp = d2.loops[loop]
    if not lp.legs:
        return Violation("ShortLeg", loop)
    last = len(lp.legs) - 1
    for ki, leg in enumerate(lp.legs):
        _check_leg(viols, d2.vertex, loop, ki, leg, ki == 0, ki == last)
        if viols:
            return viols[0]
    _check_joints(viols, loop, lp)
    if viols:
        return viols[0]
    _check_vertex_directions(viols, d2)
    _check_seam_table(viols, d2)
    return viols[0] if viols else None


def _apply_splice(d: BouquetDiagram, splice: _Splice) -> tuple[BouquetDiagram, list[Crossing]]:
    base = analysis(d)
    if base.violations:
        raise InvalidDiagram(f"cannot move on an invalid diagram: {base.violations[0]}")
    loops = list(d.loops)
    loops[splice.loop] = LoopPath(splice.new_legs)
    d2 = BouquetDiagram(d.n, d.vertex, tuple(loops))

    bad = _structural_ok(d2, splice.loop)
    if bad is not None:
        raise MoveBlocked(f"result not generic: {bad}")

    records = _segment_records(d2)
    chkeys = {(splice.loop, k, s) for (k, s) in splice.changed}
    found: list[Crossing] = []
    for u, v in _changed_pairs(records, chkeys):
        res = segment_intersection(u.a, u.b, v.a, v.b)
        if res.kind is SegKind.PROPER:
            found.append(_pair_crossing(u, v, res))
        elif res.kind is SegKind.DEGENERATE:
            raise MoveBlocked(
                f"template touches loop={v.loop} leg={v.leg} segment={v.seg} non-transversally")

    olds = [
        _remap_crossing(c, splice)
        for c in base.crossings
        if not c.involves(splice.loop, splice.replaced)
    ]
    new_crossings = olds + found
    locations: set[tuple[Rat, Rat]] = set()
    for c in new_crossings:
        key = (c.location.x, c.location.y)
        if key in locations:
            raise MoveBlocked("two crossings would coincide")
        locations.add(key)
        if c.location == d2.vertex:
            raise MoveBlocked("crossing would land on the vertex")

    old_locations = {(c.location.x, c.location.y) for c in base.crossings}
    if splice.check_persistence and not old_locations <= locations:
        raise MoveBlocked("an existing crossing would be destroyed")
    additions = [c for c in found if (c.location.x, c.location.y) not in old_locations]
    err = splice.contract(additions)
    if err:
        raise MoveBlocked(err)

    new_crossings.sort(key=Crossing.sort_key)
    _set_analysis(d2, DiagramAnalysis((), tuple(new_crossings)))
    return d2, additions


def _get_segment(d: BouquetDiagram, loop: int, leg: int, seg: int) -> tuple[Point, Point]:
    try:
        lp = d.loops[loop]
        pts = lp.legs[leg].points
        if loop < 0 or leg < 0 or seg < 0 or seg >= len(pts) - 1:
            raise IndexError
        return pts[seg], pts[seg + 1]
    except IndexError:
        raise MoveBlocked(f"no segment ({loop}, {leg}, {seg})") from None


def _insert_chain(d: BouquetDiagram, loop: int, leg: int, seg: int,
                  inserted: tuple[Point, ...], contract, check_persistence=True) -> _Splice:
    legs = d.loops[loop].legs
    pts = legs[leg].points
    new_leg = Leg(pts[:seg + 1] + inserted + pts[seg + 1:])
    new_legs = legs[:leg] + (new_leg,) + legs[leg + 1:]
    m = len(inserted)

    def remap(kk: int, ss: int) -> tuple[int, int]:
        if kk != leg or ss < seg:
            return kk, ss
        return kk, ss + m

    changed = {(leg, seg + j) for j in range(m + 1)}
    return _Splice(loop, new_legs, {(leg, seg)}, remap, changed, contract, check_persistence)


# ---------------------------------------------------------------------------
# templates
# ---------------------------------------------------------------------------

def _curl_points(a: Point, b: Point, t: Rat, w: Rat, h: Rat) -> tuple[Point, ...]:
    # one self-crossing between the first and last inserted segments, sign
    # -sign(h) before seam transport, located at a + t*e + (2h/3)*v
    e = b - a
    v = e.perp()
    return (
        a + e.scale(t - w),
        a + e.scale(t + w / 2) + v.scale(h),
        a + e.scale(t - w / 2) + v.scale(h),
        a + e.scale(t + w),
    )


def _window_ok(lo: Rat, hi: Rat) -> bool:
    return 0 < lo < hi < 1


def _build_kink_pair(d, spec) -> _Splice:
    t1, t2, w, h = spec.params
    if w <= 0 or h == 0 or not _window_ok(t1 - w, t1 + w) or not _window_ok(t2 - w, t2 + w) \
            or t1 + w >= t2 - w:
        raise MoveBlocked("kink windows must be disjoint and inside the segment")
    a, b = _get_segment(d, spec.loop, spec.leg, spec.segment)
    inserted = _curl_points(a, b, t1, w, h) + _curl_points(a, b, t2, w, -h)

    def contract(additions: list[Crossing]) -> str | None:
        if len(additions) != 2:
            return f"kink pair must add exactly 2 crossings, got {len(additions)}"
        if any(c.loop_a != spec.loop or c.loop_b != spec.loop for c in additions):
            return "kink pair may only add self-crossings of the target loop"
        if sorted(_contribution(c) for c in additions) != [-1, 1]:
            return "kink pair crossings must have opposite signs"
        return None

    return _insert_chain(d, spec.loop, spec.leg, spec.segment, inserted, contract)


def _build_single_kink(d, spec) -> _Splice:
    t, w, h = spec.params
    if w <= 0 or h == 0 or not _window_ok(t - w, t + w):
        raise MoveBlocked("kink window must sit inside the segment")
    a, b = _get_segment(d, spec.loop, spec.leg, spec.segment)
    inserted = _curl_points(a, b, t, w, h)

    def contract(additions: list[Crossing]) -> str | None:
        if len(additions) != 1:
            return f"single kink must add exactly 1 crossing, got {len(additions)}"
        c = additions[0]
        if c.loop_a != spec.loop or c.loop_b != spec.loop:
            return "single kink may only add a self-crossing of the target loop"
        return None

    return _insert_chain(d, spec.loop, spec.leg, spec.segment, inserted, contract)


def _seam_step(p: Point, d_out: Point) -> Point:
    """First interior point after entering at -p with the reflected direction."""
    return -p + mat_apply(seam_reflection(p), d_out).scale(rat(1, 32))


def _build_detour(d, spec) -> _Splice:
    sig_raw, t, w, uq, ur = spec.params
    if sig_raw not in (1, -1):
        raise MoveBlocked("detour sign must be +1 or -1")
    sigma = int(sig_raw)
    if w <= 0 or not _window_ok(t - w, t + w):
        raise MoveBlocked("detour window must sit inside the segment")
    a, b = _get_segment(d, spec.loop, spec.leg, spec.segment)
    e = b - a
    q = circle_point(uq)
    r = circle_point(ur)
    if r == q or r == -q:
        raise MoveBlocked("detour seam transitions must be distinct and non-antipodal")

    # curl side chosen so each curl contributes sigma at orientation +1
    hsign = -sigma if spec.leg % 2 == 0 else sigma
    h = (w / 8) * hsign
    curl_a = _curl_points(a, b, t - 3 * w / 4, w / 8, h)
    curl_b = _curl_points(a, b, t - w / 4, w / 8, h)
    x1 = a + e.scale(t + w / 4)
    x2 = a + e.scale(t + 3 * w / 4)
    g1 = q - x1
    if g1.is_zero() or (e.cross(g1) == 0 and e.dot(g1) < 0):
        raise MoveBlocked("detour exit folds back on the segment")
    y1 = _seam_step(q, g1)
    g2 = r - y1
    if g2.is_zero():
        raise MoveBlocked("degenerate detour turn")
    z1 = _seam_step(r, g2)

    legs = d.loops[spec.loop].legs
    pts = legs[spec.leg].points
    leg_a = Leg(pts[:spec.segment + 1] + curl_a + curl_b + (x1, q))
    leg_m = Leg((-q, y1, r))
    leg_b = Leg((-r, z1, x2) + pts[spec.segment + 1:])
    new_legs = legs[:spec.leg] + (leg_a, leg_m, leg_b) + legs[spec.leg + 1:]

    k, s = spec.leg, spec.segment

    def remap(kk: int, ss: int) -> tuple[int, int]:
        if kk < k:
            return kk, ss
        if kk == k:
            return (k, ss) if ss < s else (k + 2, ss - s + 2)
        return kk + 2, ss

    changed = {(k, s + j) for j in range(10)} | {(k + 1, 0), (k + 1, 1)} \
        | {(k + 2, 0), (k + 2, 1), (k + 2, 2)}

    def contract(additions: list[Crossing]) -> str | None:
        self_adds = [c for c in additions if c.loop_a == spec.loop and c.loop_b == spec.loop]
        if len(self_adds) != 2:
            return f"detour must add exactly 2 self-crossings, got {len(self_adds)}"
        if any(_contribution(c) != sigma for c in self_adds):
            return "detour curls must both carry the requested sign"
        return None

    return _Splice(spec.loop, new_legs, {(k, s)}, remap, changed, contract)


def _build_seam_reroute(d, spec) -> _Splice:
    t, w, uq = spec.params
    if w <= 0 or not _window_ok(t - w, t + w):
        raise MoveBlocked("reroute window must sit inside the segment")
    a, b = _get_segment(d, spec.loop, spec.leg, spec.segment)
    e = b - a
    q = circle_point(uq)
    x1 = a + e.scale(t - w)
    x2 = a + e.scale(t + w)
    g1 = q - x1
    if g1.is_zero() or (e.cross(g1) == 0 and e.dot(g1) < 0):
        raise MoveBlocked("reroute exit folds back on the segment")
    z1 = _seam_step(q, g1)

    legs = d.loops[spec.loop].legs
    pts = legs[spec.leg].points
    leg_a = Leg(pts[:spec.segment + 1] + (x1, q))
    leg_b = Leg((-q, z1, x2) + pts[spec.segment + 1:])
    new_legs = legs[:spec.leg] + (leg_a, leg_b) + legs[spec.leg + 1:]

    k, s = spec.leg, spec.segment

    def remap(kk: int, ss: int) -> tuple[int, int]:
        if kk < k:
            return kk, ss
        if kk == k:
            return (k, ss) if ss < s else (k + 1, ss - s + 2)
        return kk + 1, ss

    changed = {(k, s), (k, s + 1)} | {(k + 1, 0), (k + 1, 1), (k + 1, 2)}

    # created crossings are unconstrained: the edit's index damage is reported,
    # not controlled
    return _Splice(spec.loop, new_legs, {(k, s)}, remap, changed, lambda adds: None)


def _build_finger_push(d, spec) -> _Splice:
    t, w, loop2_r, leg2_r, seg2_r, s2, reach = spec.params
    for v in (loop2_r, leg2_r, seg2_r):
        if v.denominator != 1 or v < 0:
            raise MoveBlocked("finger push strand indices must be non-negative integers")
    loop2, leg2, seg2 = int(loop2_r), int(leg2_r), int(seg2_r)
    if w <= 0 or not _window_ok(t - w, t + w) or not (0 < s2 < 1) or reach <= 0:
        raise MoveBlocked("finger push window parameters out of range")
    if (loop2, leg2, seg2) == (spec.loop, spec.leg, spec.segment):
        raise MoveBlocked("cannot push a segment across itself")
    if loop2 == spec.loop and leg2 == spec.leg and abs(seg2 - spec.segment) == 1:
        raise MoveBlocked("cannot push across an adjacent segment")
    a, b = _get_segment(d, spec.loop, spec.leg, spec.segment)
    c, dd = _get_segment(d, loop2, leg2, seg2)
    e = b - a
    target = c + (dd - c).scale(s2)
    center = a + e.scale(t)
    wvec = target - center
    if wvec.is_zero() or e.cross(wvec) == 0:
        raise MoveBlocked("finger direction is degenerate")
    x1 = a + e.scale(t - w)
    x2 = a + e.scale(t + w)
    f1 = x1 + wvec.scale(1 + reach)
    f2 = x2 + wvec.scale(1 + reach)
    inserted = (x1, f1, f2, x2)

    splice = _insert_chain(d, spec.loop, spec.leg, spec.segment, inserted, lambda adds: None)
    expected_other = (loop2,) + (splice.remap(leg2, seg2) if loop2 == spec.loop else (leg2, seg2))
    vertical_keys = {(spec.loop, spec.leg, spec.segment + 1), (spec.loop, spec.leg, spec.segment + 3)}

    def contract(additions: list[Crossing]) -> str | None:
        if len(additions) != 2:
            return f"finger push must add exactly 2 crossings, got {len(additions)}"
        seen_verticals = set()
        for cr in additions:
            sides = {
                (cr.loop_a, cr.param_a.leg, cr.param_a.seg),
                (cr.loop_b, cr.param_b.leg, cr.param_b.seg),
            }
            if expected_other not in sides:
                return "finger push crossing misses the chosen strand"
            seen_verticals |= sides & vertical_keys
        if len(seen_verticals) != 2:
            return "finger push must cross the strand with both fingers"
        if loop2 == spec.loop:
            if sum(_contribution(cr) for cr in additions) != 0:
                return "same-loop finger push crossings must cancel"
        elif any(cr.loop_a == cr.loop_b for cr in additions):
            return "cross-loop finger push may not add self-crossings"
        return None

    splice.contract = contract
    return splice


def _build_subdivide(d, spec) -> _Splice:
    (t,) = spec.params
    if not (0 < t < 1):
        raise MoveBlocked("subdivision point must be interior")
    a, b = _get_segment(d, spec.loop, spec.leg, spec.segment)
    inserted = (a + (b - a).scale(t),)

    def contract(additions: list[Crossing]) -> str | None:
        if additions:
            return "subdividing must not create crossings"
        return None

    return _insert_chain(d, spec.loop, spec.leg, spec.segment, inserted, contract)


# ---------------------------------------------------------------------------
# jiggle (point move, no insertion)
# ---------------------------------------------------------------------------

def _vertex_cycle(d: BouquetDiagram):
    pairs = vertex_directions(d)
    order = angle_sort([direction for _, direction in pairs])
    seq = tuple(pairs[i][0] for i in order)
    return min(seq[r:] + seq[:r] for r in range(len(seq)))


def _apply_jiggle(d: BouquetDiagram, spec: MoveSpec) -> BouquetDiagram:
    base = analysis(d)
    if base.violations:
        raise InvalidDiagram(f"cannot move on an invalid diagram: {base.violations[0]}")
    dx, dy = spec.params
    loop, k, idx = spec.loop, spec.leg, spec.segment
    try:
        legs = d.loops[loop].legs
        pts = legs[k].points
    except IndexError:
        raise MoveBlocked(f"no leg ({loop}, {k})") from None
    if not (1 <= idx <= len(pts) - 2):
        raise MoveBlocked("only interior polyline points can be jiggled")
    moved = pts[idx] + Point(dx, dy)
    new_leg = Leg(pts[:idx] + (moved,) + pts[idx + 1:])
    new_legs = legs[:k] + (new_leg,) + legs[k + 1:]
    changed = {(k, idx - 1), (k, idx)}

    splice = _Splice(loop, new_legs, changed, lambda kk, ss: (kk, ss), changed,
                     lambda adds: None, check_persistence=False)

    old_cycle = _vertex_cycle(d)
    old_involved = [c for c in base.crossings if c.involves(loop, changed)]

    loops = list(d.loops)
    loops[loop] = LoopPath(new_legs)
    d2 = BouquetDiagram(d.n, d.vertex, tuple(loops))
    bad = _structural_ok(d2, loop)
    if bad is not None:
        raise MoveBlocked(f"result not generic: {bad}")

    records = _segment_records(d2)
    chkeys = {(loop, kk, ss) for (kk, ss) in changed}
    found: list[Crossing] = []
    for u, v in _changed_pairs(records, chkeys):
        res = segment_intersection(u.a, u.b, v.a, v.b)
        if res.kind is SegKind.PROPER:
            found.append(_pair_crossing(u, v, res))
        elif res.kind is SegKind.DEGENERATE:
            raise MoveBlocked(
                f"jiggled corner touches loop={v.loop} leg={v.leg} segment={v.seg}")

    def signature(crs):
        return sorted(
            ((c.loop_a, c.param_a.leg, c.param_a.seg),
             (c.loop_b, c.param_b.leg, c.param_b.seg), c.frame)
            for c in crs
        )

    if signature(found) != signature(old_involved):
        raise MoveBlocked("jiggle would change the crossing pattern")
    if _vertex_cycle(d2) != old_cycle:
        raise MoveBlocked("jiggle would reorder the vertex star")

    olds = [c for c in base.crossings if not c.involves(loop, changed)]
    new_crossings = olds + found
    locations: set[tuple[Rat, Rat]] = set()
    for c in new_crossings:
        key = (c.location.x, c.location.y)
        if key in locations:
            raise MoveBlocked("two crossings would coincide")
        locations.add(key)
        if c.location == d2.vertex:
            raise MoveBlocked("crossing would land on the vertex")

    new_crossings.sort(key=Crossing.sort_key)
    _set_analysis(d2, DiagramAnalysis((), tuple(new_crossings)))
    return d2


# ---------------------------------------------------------------------------
# public application
# ---------------------------------------------------------------------------

_MOVE_BUILDERS = {
    "KinkPair": _build_kink_pair,
    "Detour": _build_detour,
    "FingerPush": _build_finger_push,
    "Subdivide": _build_subdivide,
}

_EDIT_BUILDERS = {
    "SingleKink": _build_single_kink,
    "SeamReroute": _build_seam_reroute,
}


@dataclass(frozen=True)
class EditOutcome:
    """Result of a control edit plus its promised invariant damage.

    `parity_flip` is the predicted change (0 or 1) to the edited loop's
    index-parity bit: the parity of the number of self-crossings the edit
    created.  Pre-existing crossings only ever have their signed-index
    contribution flipped by +-2, which cannot move the parity.
    """

    diagram: BouquetDiagram
    loop: int
    created_self: int

    @property
    def parity_flip(self) -> int:
        return self.created_self % 2


def apply_move(d: BouquetDiagram, spec: MoveSpec) -> BouquetDiagram:
    """Apply an invariant-preserving move; raise MoveBlocked if illegal here.

    The returned diagram is freshly validated (incrementally) and carries its
    updated crossing analysis, so chains of moves stay cheap.
    """
    if spec.kind == "Jiggle":
        return _apply_jiggle(d, spec)
    d2, _ = _apply_splice(d, _MOVE_BUILDERS[spec.kind](d, spec))
    return d2


def apply_edit_outcome(d: BouquetDiagram, spec: EditSpec) -> EditOutcome:
    """Apply a control edit and report the self-crossings it created."""
    d2, additions = _apply_splice(d, _EDIT_BUILDERS[spec.kind](d, spec))
    created = sum(1 for c in additions if c.loop_a == spec.loop and c.loop_b == spec.loop)
    return EditOutcome(d2, spec.loop, created)


def apply_edit(d: BouquetDiagram, spec: EditSpec) -> BouquetDiagram:
    """Apply a non-regular control edit; raise MoveBlocked if illegal here."""
    return apply_edit_outcome(d, spec).diagram


# ---------------------------------------------------------------------------
# random proposals
# ---------------------------------------------------------------------------

def _segment_keys(d: BouquetDiagram) -> list[tuple[int, int, int]]:
    return [(li, ki, si) for li, ki, si, _, _ in d.iter_segments()]


def _crossing_fracs(d: BouquetDiagram, key: tuple[int, int, int]) -> list[Rat]:
    loop, leg, seg = key
    fracs = []
    for c in analysis(d).crossings:
        if c.loop_a == loop and c.param_a.leg == leg and c.param_a.seg == seg:
            fracs.append(c.param_a.frac)
        if c.loop_b == loop and c.param_b.leg == leg and c.param_b.seg == seg:
            fracs.append(c.param_b.frac)
    fracs.sort()
    return fracs


def _free_window(d, rng: random.Random, key) -> tuple[Rat, Rat] | None:
    """A (center, halfwidth) window on the segment avoiding existing crossings."""
    cuts = [rat(0)] + _crossing_fracs(d, key) + [rat(1)]
    gaps = [(lo, hi) for lo, hi in zip(cuts, cuts[1:]) if hi > lo]
    if not gaps:
        return None
    lo, hi = gaps[rng.randrange(len(gaps))]
    width = hi - lo
    center = lo + width * rat(rng.randrange(7, 14), 20)
    half = width * rat(rng.randrange(2, 5), 20)
    if not _window_ok(center - half, center + half):
        return None
    return center, half


def _rand_rat(rng: random.Random, lo_num: int, hi_num: int, den: int) -> Rat:
    return rat(rng.randrange(lo_num, hi_num), den)


def _outward_u(p: Point, rng: random.Random) -> Rat | None:
    """Tan-half-angle of roughly the outward radial direction at p.

    Float arithmetic here only steers the proposal; all applied geometry
    stays exact.  Returns None near the vertex or near the left pole, where
    the caller falls back to uniform sampling.
    """
    fx, fy = float(p.x), float(p.y)
    norm = (fx * fx + fy * fy) ** 0.5
    if norm < 1e-9:
        return None
    den = norm + fx
    if abs(den) < 1e-9:
        return None
    u = fy / den
    if abs(u) > 12:
        return None
    return rat(round(u * 64) + rng.randrange(-6, 7), 64)


def _propose_move(d: BouquetDiagram, rng: random.Random) -> MoveSpec | None:
    kind = rng.choices(MOVE_KINDS, weights=(24, 14, 20, 27, 15))[0]
    keys = _segment_keys(d)
    loop, leg, seg = keys[rng.randrange(len(keys))]

    if kind == "Jiggle":
        lp = d.loops[loop]
        pts = lp.legs[leg].points
        if len(pts) < 3:
            return None
        idx = rng.randrange(1, len(pts) - 1)
        # moving a point next to a seam endpoint always breaks the joint
        if idx == 1 and leg > 0:
            return None
        if idx == len(pts) - 2 and leg < len(lp.legs) - 1:
            return None
        d1 = pts[idx] - pts[idx - 1]
        d2 = pts[idx + 1] - pts[idx]
        scale = min(max(abs(d1.x), abs(d1.y)), max(abs(d2.x), abs(d2.y)))
        if scale == 0:
            return None
        dx = scale * _rand_rat(rng, -40, 41, 256)
        dy = scale * _rand_rat(rng, -40, 41, 256)
        if dx == 0 and dy == 0:
            return None
        return MoveSpec("Jiggle", loop, leg, idx, (dx, dy))

    window = _free_window(d, rng, (loop, leg, seg))
    if window is None:
        return None
    center, half = window

    if kind == "Subdivide":
        return MoveSpec("Subdivide", loop, leg, seg, (center,))

    if kind == "KinkPair":
        w = half / 4
        t1 = center - half / 2
        t2 = center + half / 2
        h = w * rat(rng.choice([-1, 1]), 4)
        return MoveSpec("KinkPair", loop, leg, seg, (t1, t2, w, h))

    if kind == "Detour":
        sigma = rng.choice([1, -1])
        a, b = d.segment(loop, leg, seg)
        uq = None
        if rng.random() < 0.75:
            uq = _outward_u(a + (b - a).scale(center), rng)
        if uq is None:
            uq = _rand_rat(rng, -48, 49, 16)
        if uq == 0:
            return None
        tilt = rat(rng.choice([-1, 1]) * rng.randrange(1, 12), 96)
        ur = -1 / uq + tilt
        return MoveSpec("Detour", loop, leg, seg, (rat(sigma), center, half, uq, ur))

    # FingerPush: aim at some other strand
    others = [key for key in keys if key != (loop, leg, seg)
              and not (key[0] == loop and key[1] == leg and abs(key[2] - seg) == 1)]
    if not others:
        return None
    loop2, leg2, seg2 = others[rng.randrange(len(others))]
    s2 = _rand_rat(rng, 5, 16, 20)
    reach = _rand_rat(rng, 2, 9, 16)
    w = half / 2
    return MoveSpec("FingerPush", loop, leg, seg,
                    (center, w, rat(loop2), rat(leg2), rat(seg2), s2, reach))


_RETRY_BUDGET = 10_000


def random_move_applied(d: BouquetDiagram, seed: int) -> tuple[MoveSpec, BouquetDiagram]:
    """Deterministically propose and apply one legal random move."""
    rng = random.Random(f"rp2bouquet-move:{seed}")
    for _ in range(_RETRY_BUDGET):
        spec = _propose_move(d, rng)
        if spec is None:
            continue
        try:
            return spec, apply_move(d, spec)
        except MoveBlocked:
            continue
    raise Exhausted(f"no legal move found in {_RETRY_BUDGET} attempts (seed {seed})")


def random_move(d: BouquetDiagram, seed: int) -> MoveSpec:
    """A random move that is guaranteed to apply legally to d.

    Deterministic in (d, seed); retries internally and raises
    :class:`Exhausted` after 10000 failed proposals.
    """
    spec, _ = random_move_applied(d, seed)
    return spec


def random_edit(d: BouquetDiagram, seed: int, kind: str | None = None) -> tuple[EditSpec, EditOutcome]:
    """Deterministically propose and apply one legal random control edit."""
    rng = random.Random(f"rp2bouquet-edit:{seed}")
    kinds = EDIT_KINDS if kind is None else (kind,)
    for _ in range(_RETRY_BUDGET):
        pick = kinds[rng.randrange(len(kinds))]
        keys = _segment_keys(d)
        loop, leg, seg = keys[rng.randrange(len(keys))]
        window = _free_window(d, rng, (loop, leg, seg))
        if window is None:
            continue
        center, half = window
        if pick == "SingleKink":
            w = half / 2
            h = w * rat(rng.choice([-1, 1]), 4)
            spec = EditSpec("SingleKink", loop, leg, seg, (center, w, h))
        else:
            uq = None
            if rng.random() < 0.75:
                a, b = d.segment(loop, leg, seg)
                uq = _outward_u(a + (b - a).scale(center), rng)
            if uq is None:
                uq = _rand_rat(rng, -48, 49, 16)
            if uq == 0:
                continue
            spec = EditSpec("SeamReroute", loop, leg, seg, (center, half, uq))
        try:
            return spec, apply_edit_outcome(d, spec)
        except MoveBlocked:
            continue
    raise Exhausted(f"no legal edit found in {_RETRY_BUDGET} attempts (seed {seed})")
