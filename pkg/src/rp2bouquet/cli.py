"""Command-line frontend: file IO, user-facing verbs, deterministic fuzz
campaigns, and static SVG rendering.

Verbs::

    rp2bouquet validate   <diagram.json>
    rp2bouquet invariants <diagram.json>
    rp2bouquet equiv      <a.json> <b.json>
    rp2bouquet realize    "<tuple text>" [--out file]
    rp2bouquet enumerate  <n>
    rp2bouquet fuzz       [--seed S] [--steps K] [--trials T] [--out DIR]
    rp2bouquet fuzz       --replay <script>
    rp2bouquet render-svg <diagram.json> [--out file]

Exit codes: 0 success, 1 domain error (invalid diagram, mismatched loop
count, unrealizable tuple), 2 parse/usage error, 3 fuzz violation found.

All verbs are deterministic for fixed inputs and seeds, and output is
byte-stable: rationals are serialized exactly, and SVG converts to decimal
only at the final formatting step with fixed precision 9.

A fuzz violation produces a self-contained replay script: one comment header,
the starting diagram as a single JSON line, then one move per line.  Running
``fuzz --replay`` on it re-applies the sequence and reports the first move
after which the invariant tuple changed.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .diagram import BouquetDiagram, DiagramFormatError, analysis, dumps, loads, validate
from .invariants import InvariantTuple, MismatchedLoopCount, equiv, invariants
from .moves import Exhausted, MoveBlocked, MoveSpec, apply_move, random_move_applied
from .normal_form import LimitExceeded, RealizationError, enumerate_classes, random_tuple, realize

__all__ = ["main", "run_fuzz", "run_replay", "render_svg", "FuzzReport"]


# ---------------------------------------------------------------------------
# fuzz campaign
# ---------------------------------------------------------------------------

@dataclass
class FuzzViolation:
    trial: int
    step: int
    message: str
    script: list[str]


@dataclass
class FuzzReport:
    trials: int
    steps: int
    seed: int
    moves_applied: int = 0
    violations: list[FuzzViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _artifact_script(seed: int, trial: int, step: int, start: BouquetDiagram,
                     specs: list[MoveSpec]) -> list[str]:
    lines = [f"# fuzz violation: seed={seed} trial={trial} step={step}"]
    lines.append(dumps(start).rstrip("\n"))
    lines.extend(spec.to_line() for spec in specs)
    return lines


def fuzz_trial(seed: int, trial: int, steps: int) -> tuple[int, FuzzViolation | None]:
    """One deterministic trial: random tuple, realize, random move chain."""
    rng = random.Random(f"rp2bouquet-fuzz:{seed}:{trial}")
    n = rng.choice((1, 2, 3))
    start = realize(random_tuple(n, rng.randrange(10 ** 9)))
    reference = invariants(start)
    d = start
    applied: list[MoveSpec] = []
    for step in range(steps):
        try:
            spec, d2 = random_move_applied(d, rng.randrange(10 ** 9))
        except Exhausted as exc:
            return step, FuzzViolation(
                trial, step, f"move generator exhausted: {exc}",
                _artifact_script(seed, trial, step, start, applied))
        applied.append(spec)
        current = invariants(d2)
        if current != reference:
            return step, FuzzViolation(
                trial, step,
                f"invariants changed after {spec.kind}: "
                f"{reference.text()!r} -> {current.text()!r}",
                _artifact_script(seed, trial, step, start, applied))
        d = d2
    return steps, None


def run_fuzz(seed: int, steps: int, trials: int, out=None) -> FuzzReport:
    report = FuzzReport(trials=trials, steps=steps, seed=seed)
    for trial in range(trials):
        done, violation = fuzz_trial(seed, trial, steps)
        report.moves_applied += done
        if violation is not None:
            report.violations.append(violation)
        if out is not None and (trial + 1) % 100 == 0:
            print(f"  {trial + 1}/{trials} trials, {report.moves_applied} moves applied",
                  file=out)
    return report


def run_replay(lines: list[str]) -> tuple[bool, str]:
    """Re-run a violation script; report the first invariant change."""
    body = [ln for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not body:
        raise DiagramFormatError("replay script has no diagram line")
    d = loads(body[0])
    bad = validate(d)
    if bad:
        raise DiagramFormatError(f"replay start diagram invalid: {bad[0]}")
    reference = invariants(d)
    for i, line in enumerate(body[1:], start=1):
        spec = MoveSpec.from_line(line)
        try:
            d = apply_move(d, spec)
        except MoveBlocked as exc:
            return False, f"replay failed: move {i} ({spec.kind}) cannot be applied: {exc}"
        current = invariants(d)
        if current != reference:
            return False, (f"reproduced: invariants changed at move {i} ({spec.kind}): "
                           f"{reference.text()!r} -> {current.text()!r}")
    return True, f"all {max(len(body) - 1, 0)} moves preserve {reference.text()!r}"


# ---------------------------------------------------------------------------
# SVG rendering
# ---------------------------------------------------------------------------

_PALETTE = ("#1b6ca8", "#c0392b", "#1e8449", "#8e44ad", "#b7950b", "#148f77")
_SEAM_MARK = 0.024  # half-size of the square seam markers, in viewBox units


def _fmt(value) -> str:
    text = f"{float(value):.9f}"
    return "0.000000000" if text == "-0.000000000" else text


def _xy(p) -> str:
    # SVG y grows downward; diagram y grows upward
    return f"{_fmt(p.x)},{_fmt(-p.y)}"


def render_svg(d: BouquetDiagram) -> str:
    """Static SVG figure: loops colored per index, crossings and seam points
    marked, the seam circle dashed.  Formatting is fixed-precision so output
    is byte-stable; the exact rational core is never fed from this path."""
    crossings = analysis(d).crossings
    out = []
    out.append('<svg xmlns="http://www.w3.org/2000/svg" width="640" height="640" '
               'viewBox="-1.15 -1.15 2.3 2.3">')
    out.append('<rect x="-1.15" y="-1.15" width="2.3" height="2.3" fill="white"/>')
    out.append('<circle cx="0" cy="0" r="1" fill="none" stroke="#888888" '
               'stroke-width="0.012" stroke-dasharray="0.05,0.035"/>')
    for li, loop in enumerate(d.loops):
        color = _PALETTE[li % len(_PALETTE)]
        for leg in loop.legs:
            points = " ".join(_xy(p) for p in leg.points)
            out.append(f'<polyline points="{points}" fill="none" stroke="{color}" '
                       'stroke-width="0.014" stroke-linejoin="round"/>')
        for leg in loop.legs[:-1]:
            p = leg.points[-1]
            for mark in (p, -p):
                out.append(f'<rect x="{_fmt(float(mark.x) - _SEAM_MARK)}" '
                           f'y="{_fmt(-float(mark.y) - _SEAM_MARK)}" '
                           f'width="{_fmt(2 * _SEAM_MARK)}" height="{_fmt(2 * _SEAM_MARK)}" '
                           f'fill="{color}" stroke="black" stroke-width="0.006"/>')
    for c in crossings:
        out.append(f'<circle cx="{_fmt(c.location.x)}" cy="{_fmt(-c.location.y)}" r="0.022" '
                   'fill="none" stroke="black" stroke-width="0.01"/>')
    out.append(f'<circle cx="{_fmt(d.vertex.x)}" cy="{_fmt(-d.vertex.y)}" r="0.025" '
               'fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------

def _load_diagram(path: str) -> BouquetDiagram:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DiagramFormatError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def _emit(text: str, out_path: str | None, stdout) -> None:
    if out_path:
        Path(out_path).write_text(text)
    else:
        stdout.write(text)


def _cmd_validate(args, stdout) -> int:
    d = _load_diagram(args.path)
    violations = validate(d)
    for v in violations:
        print(f"VIOLATION: {v}", file=stdout)
    if not violations:
        print("OK", file=stdout)
        return 0
    return 1


def _cmd_invariants(args, stdout) -> int:
    d = _load_diagram(args.path)
    violations = validate(d)
    if violations:
        for v in violations:
            print(f"VIOLATION: {v}", file=stdout)
        return 1
    print(invariants(d).text(), file=stdout)
    return 0


def _cmd_equiv(args, stdout) -> int:
    d1 = _load_diagram(args.path_a)
    d2 = _load_diagram(args.path_b)
    for d, path in ((d1, args.path_a), (d2, args.path_b)):
        violations = validate(d)
        if violations:
            print(f"VIOLATION: {violations[0]} (in {path})", file=stdout)
            return 1
    try:
        same = equiv(d1, d2)
    except MismatchedLoopCount as exc:
        print(f"ERROR: MismatchedLoopCount: {exc}", file=stdout)
        return 1
    if same:
        print("EQUIVALENT", file=stdout)
        return 0
    t1, t2 = invariants(d1), invariants(d2)
    differing = [name for name, a, b in
                 (("order", t1.order, t2.order), ("h", t1.h, t2.h), ("w", t1.w, t2.w))
                 if a != b]
    print(f"DISTINCT ({','.join(differing)})", file=stdout)
    return 0


def _cmd_realize(args, stdout) -> int:
    t = InvariantTuple.parse(args.tuple_text)
    d = realize(t)
    _emit(dumps(d), args.out, stdout)
    return 0


def _cmd_enumerate(args, stdout) -> int:
    for t in enumerate_classes(args.n):
        print(t.text(), file=stdout)
    return 0


def _cmd_fuzz(args, stdout) -> int:
    if args.replay:
        lines = Path(args.replay).read_text().splitlines()
        ok, message = run_replay(lines)
        print(message, file=stdout)
        return 0 if ok else 3
    started = time.time()
    report = run_fuzz(args.seed, args.steps, args.trials, out=stdout)
    elapsed = time.time() - started
    if report.ok:
        print(f"OK {report.trials}/{report.trials} trials, "
              f"{report.moves_applied} moves, {elapsed:.1f}s", file=stdout)
        return 0
    out_dir = Path(args.out) if args.out else Path.cwd()
    out_dir.mkdir(parents=True, exist_ok=True)
    for violation in report.violations:
        path = out_dir / f"fuzz_violation_seed{report.seed}_trial{violation.trial}.txt"
        path.write_text("\n".join(violation.script) + "\n")
        print(f"VIOLATION trial={violation.trial} step={violation.step}: "
              f"{violation.message}", file=stdout)
        print(f"replay script: {path}", file=stdout)
    print(f"FAILED {len(report.violations)}/{report.trials} trials", file=stdout)
    return 3


def _cmd_render(args, stdout) -> int:
    d = _load_diagram(args.path)
    violations = validate(d)
    if violations:
        for v in violations:
            print(f"VIOLATION: {v}", file=stdout)
        return 1
    _emit(render_svg(d), args.out, stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rp2bouquet",
        description="Invariants, moves and normal forms for loop bouquets "
                    "immersed in the projective plane (disk model).")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("validate", help="check a diagram file for generic position")
    p.add_argument("path")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("invariants", help="print the invariant tuple of a diagram")
    p.add_argument("path")
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("equiv", help="decide regular-homotopy equivalence of two diagrams")
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("realize", help="build a diagram realizing a tuple text")
    p.add_argument("tuple_text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("enumerate", help="list all invariant tuples for n loops")
    p.add_argument("n", type=int)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("fuzz", help="random move sequences must preserve invariants")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--out", default=None, help="directory for violation scripts")
    p.add_argument("--replay", default=None, help="re-run a violation script")
    p.set_defaults(func=_cmd_fuzz)

    p = sub.add_parser("render-svg", help="render a diagram to a static SVG figure")
    p.add_argument("path")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_render)

    return parser


def main(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, stdout)
    except (DiagramFormatError, ValueError) as exc:
        if isinstance(exc, (MismatchedLoopCount, RealizationError, LimitExceeded)):
            print(f"ERROR: {type(exc).__name__}: {exc}", file=stdout)
            return 1
        print(f"ERROR: {exc}", file=stdout)
        return 2
    except OSError as exc:
        print(f"ERROR: {exc}", file=stdout)
        return 2


if __name__ == "__main__":
    sys.exit(main())
