"""Synthesis of diagrams realizing a prescribed invariant value.

Every value of the invariant tuple is realizable, and :func:`realize` builds a
concrete witness:

* the 2n half-edge rays leave the vertex in the cyclic order spelled by the
  word, along the directions of an integer ladder of tan-half-angle
  parameters (monotone in angle, so the counterclockwise star order equals
  the ladder order);
* a loop with homotopy bit 0 is a one-leg petal: out along its first ray,
  around a chordal arc at a loop-specific radius, back along its second ray;
* a loop with homotopy bit 1 makes one trip through the seam at a reserved
  transition point, giving it two legs;
* finally each loop whose parity bit disagrees with the target receives one
  deliberate kink, which flips exactly that bit.

The construction is deterministic: a small ladder of global perturbations is
tried until the result passes full validation and classifies back to the
requested tuple (the first perturbation almost always succeeds).

:func:`enumerate_classes` lists every invariant value for small n; the counts
are 4, 48, 3840 for n = 1, 2, 3.  The list grows as (2n-1)!/2 * 4^n, so the
enumeration is capped at n = 4 (645120 classes, the largest size that is
practical to materialize); larger n raises :class:`LimitExceeded`.
"""

from __future__ import annotations

import random
from itertools import permutations

from .geometry import Point, Rat, circle_point, mat_apply, pt, rat, seam_reflection
from .diagram import BouquetDiagram, HalfEdge, Leg, LoopPath, analysis, validate
from .invariants import CyclicWord, InvariantTuple, invariants, inv3
from .moves import EditSpec, MoveBlocked, apply_edit

__all__ = [
    "MAX_ENUM_N",
    "RealizationError",
    "LimitExceeded",
    "realize",
    "enumerate_classes",
    "classify",
    "random_tuple",
]

MAX_ENUM_N = 4


class RealizationError(ValueError):
    """The requested invariant tuple is malformed or could not be realized."""


class LimitExceeded(ValueError):
    """enumerate_classes was asked for more classes than it will materialize."""


def classify(d: BouquetDiagram) -> InvariantTuple:
    """The invariant tuple of a diagram (alias of :func:`invariants`)."""
    return invariants(d)


def _validate_tuple(t: InvariantTuple) -> int:
    n = t.order.n
    expected = {HalfEdge(i, inv) for i in range(n) for inv in (False, True)}
    if set(t.order.symbols) != expected or len(t.order.symbols) != 2 * n:
        raise RealizationError("word must use each half-edge symbol exactly once")
    if CyclicWord.from_symbols(t.order.symbols) != t.order:
        raise RealizationError("word must be in canonical spelling")
    for name, bits in (("h", t.h), ("w", t.w)):
        if len(bits) != n or any(b not in (0, 1) for b in bits):
            raise RealizationError(f"{name} must be a tuple of n bits")
    return n


def _arc_points(radius: Rat, u_from: int, u_to: int) -> list[Point]:
    """Chordal arc of the radius-scaled circle between two ladder parameters.

    Interior waypoints sit at quarter-integer parameters so that no waypoint
    lies exactly on another loop's integer-parameter ray from the vertex.
    """
    out = [circle_point(rat(u_from)).scale(radius)]
    if u_to > u_from:
        u = rat(4 * u_from + 1, 4)
        while u < u_to:
            out.append(circle_point(u).scale(radius))
            u = u + rat(1, 2)
    else:
        u = rat(4 * u_from - 1, 4)
        while u > u_to:
            out.append(circle_point(u).scale(radius))
            u = u - rat(1, 2)
    out.append(circle_point(rat(u_to)).scale(radius))
    return out


def _build_base(t: InvariantTuple, n: int, attempt: int) -> BouquetDiagram:
    # star position of each half-edge symbol: ladder parameter j - n
    position = {sym: j for j, sym in enumerate(t.order.symbols)}
    loops = []
    for i in range(n):
        u_a = position[HalfEdge(i, False)] - n
        u_b = position[HalfEdge(i, True)] - n
        if t.h[i] == 0:
            radius = rat(n + 1 + i, 2 * n + 2 + attempt)
            petal = [pt(0, 0)] + _arc_points(radius, u_a, u_b) + [pt(0, 0)]
            loops.append(LoopPath((Leg(tuple(petal)),)))
        else:
            inner = rat(i + 1, 8 * (n + 1) + attempt)
            s_a = circle_point(rat(u_a)).scale(inner)
            s_b = circle_point(rat(u_b)).scale(inner)
            q = circle_point(rat(7 * (n + 1 + i) + attempt, 7))
            d_out = q - s_a
            entry = -q + mat_apply(seam_reflection(q), d_out).scale(rat(1, 32))
            loops.append(LoopPath((
                Leg((pt(0, 0), s_a, q)),
                Leg((-q, entry, s_b, pt(0, 0))),
            )))
    return BouquetDiagram(n, pt(0, 0), tuple(loops))


def _segment_gaps(d: BouquetDiagram, loop: int, leg: int, seg: int) -> list[tuple[Rat, Rat]]:
    fracs = []
    for c in analysis(d).crossings:
        if c.loop_a == loop and c.param_a.leg == leg and c.param_a.seg == seg:
            fracs.append(c.param_a.frac)
        if c.loop_b == loop and c.param_b.leg == leg and c.param_b.seg == seg:
            fracs.append(c.param_b.frac)
    cuts = [rat(0)] + sorted(fracs) + [rat(1)]
    gaps = [(lo, hi) for lo, hi in zip(cuts, cuts[1:]) if hi > lo]
    gaps.sort(key=lambda g: g[1] - g[0], reverse=True)
    return gaps


def _flip_parity(d: BouquetDiagram, loop: int) -> BouquetDiagram:
    """Insert one kink on the loop, flipping exactly its parity bit."""
    for leg_i, leg in enumerate(d.loops[loop].legs):
        for seg_i in range(len(leg.points) - 1):
            for lo, hi in _segment_gaps(d, loop, leg_i, seg_i)[:2]:
                center = (lo + hi) / 2
                width = hi - lo
                for shrink in range(8):
                    w = width / (8 * 4 ** shrink)
                    for hsign in (1, -1):
                        h = (w / 8) * hsign
                        spec = EditSpec("SingleKink", loop, leg_i, seg_i, (center, w, h))
                        try:
                            return apply_edit(d, spec)
                        except MoveBlocked:
                            continue
    raise RealizationError(f"could not place a parity kink on loop {loop}")


_BUILD_ATTEMPTS = 40


def realize(t: InvariantTuple) -> BouquetDiagram:
    """A valid diagram whose invariant tuple is exactly t.

    Raises :class:`RealizationError` if t is malformed (each half-edge symbol
    must appear exactly once, the word must be canonical, the bit vectors must
    have one bit per loop) -- every well-formed tuple is realizable.
    """
    n = _validate_tuple(t)
    last = "no attempt succeeded"
    for attempt in range(_BUILD_ATTEMPTS):
        d = _build_base(t, n, attempt)
        if validate(d):
            last = f"base diagram not generic (attempt {attempt})"
            continue
        try:
            for i in range(n):
                if inv3(d)[i] != t.w[i]:
                    d = _flip_parity(d, i)
        except RealizationError as exc:
            last = str(exc)
            continue
        if invariants(d) == t:
            return d
        last = f"self-check failed (attempt {attempt})"
    raise RealizationError(f"could not realize {t.text()}: {last}")


def _all_bit_vectors(n: int) -> list[tuple[int, ...]]:
    return [tuple((m >> (n - 1 - i)) & 1 for i in range(n)) for m in range(2 ** n)]


def enumerate_classes(n: int) -> list[InvariantTuple]:
    """All invariant values for n loops, deterministically ordered.

    len(enumerate_classes(n)) = (2n-1)!/2 * 4^n for n >= 2, and 4 for n = 1.
    Capped at n <= MAX_ENUM_N (= 4); beyond that the list would exceed tens of
    millions of entries, so :class:`LimitExceeded` is raised.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_ENUM_N:
        raise LimitExceeded(
            f"enumerate_classes is capped at n = {MAX_ENUM_N}; "
            f"n = {n} would need {_class_count(n)} entries")
    rest = [HalfEdge(i, inv) for i in range(n) for inv in (False, True)][1:]
    anchor = HalfEdge(0, False)
    words = {CyclicWord.from_symbols((anchor,) + p) for p in permutations(rest)}
    ordered_words = sorted(words, key=lambda w: w.symbols)
    bit_vectors = _all_bit_vectors(n)
    return [
        InvariantTuple(word, h, w)
        for word in ordered_words
        for h in bit_vectors
        for w in bit_vectors
    ]


def _class_count(n: int) -> int:
    words = 1
    for k in range(2, 2 * n):
        words *= k
    words = max(words // 2, 1)
    return words * 4 ** n


def random_tuple(n: int, seed: int) -> InvariantTuple:
    """A uniformly random invariant value, deterministic in (n, seed)."""
    rng = random.Random(f"rp2bouquet-tuple:{n}:{seed}")
    symbols = [HalfEdge(i, inv) for i in range(n) for inv in (False, True)]
    rng.shuffle(symbols)
    word = CyclicWord.from_symbols(symbols)
    h = tuple(rng.randrange(2) for _ in range(n))
    w = tuple(rng.randrange(2) for _ in range(n))
    return InvariantTuple(word, h, w)
