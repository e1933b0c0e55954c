#!/usr/bin/env python3
"""Long-running invariance campaign, with an optional deep consistency mode.

The plain mode runs the same deterministic trials as ``rp2bouquet fuzz`` but
over many more seeds, printing throughput as it goes.  Violation scripts are
written to the artifact directory for ``rp2bouquet fuzz --replay``.

With ``--cross-check`` each intermediate diagram is additionally rebuilt from
scratch and its full analysis (violations and crossing set) compared against
the incrementally maintained one.  This is the strongest internal consistency
check available and too slow to run on every step of the regular test suite.
"""

import argparse
import random
import sys
import time
from pathlib import Path

from rp2bouquet import BouquetDiagram, crossings, invariants, realize, validate
from rp2bouquet.cli import fuzz_trial
from rp2bouquet.moves import random_move_applied
from rp2bouquet.normal_form import random_tuple


def cross_check_trial(seed: int, trial: int, steps: int) -> str | None:
    rng = random.Random(f"fuzz-campaign-deep:{seed}:{trial}")
    n = rng.choice((1, 2, 3))
    d = realize(random_tuple(n, rng.randrange(10 ** 9)))
    reference = invariants(d)
    for step in range(steps):
        spec, d = random_move_applied(d, rng.randrange(10 ** 9))
        fresh = BouquetDiagram(d.n, d.vertex, d.loops)
        if validate(fresh):
            return f"trial {trial} step {step}: rebuilt diagram invalid after {spec.kind}"
        if crossings(fresh) != crossings(d):
            return f"trial {trial} step {step}: incremental crossings diverge after {spec.kind}"
        if invariants(d) != reference:
            return f"trial {trial} step {step}: invariants changed after {spec.kind}"
    return None


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seed", type=int, default=0, help="campaign seed (default 0)")
    ap.add_argument("--trials", type=int, default=2000, help="number of trials (default 2000)")
    ap.add_argument("--steps", type=int, default=20, help="moves per trial (default 20)")
    ap.add_argument("--artifacts", default="fuzz_artifacts",
                    help="directory for violation scripts (default fuzz_artifacts)")
    ap.add_argument("--cross-check", action="store_true",
                    help="rebuild every intermediate diagram and compare analyses")
    args = ap.parse_args()

    start = time.perf_counter()
    moves_applied = 0
    failures = 0
    artifacts = []
    for trial in range(args.trials):
        if args.cross_check:
            message = cross_check_trial(args.seed, trial, args.steps)
            moves_applied += args.steps
            if message is not None:
                failures += 1
                print(f"FAIL {message}", flush=True)
        else:
            done, violation = fuzz_trial(args.seed, trial, args.steps)
            moves_applied += done
            if violation is not None:
                failures += 1
                print(f"VIOLATION in trial {trial}: {violation.message}", flush=True)
                artifacts.append((violation.trial, violation.script))
        if (trial + 1) % 200 == 0:
            rate = moves_applied / (time.perf_counter() - start)
            print(f"  {trial + 1}/{args.trials} trials ({rate:.0f} moves/s)", flush=True)

    elapsed = time.perf_counter() - start
    mode = "cross-checked" if args.cross_check else "plain"
    print(f"\n{mode}: {args.trials} trials x {args.steps} moves in {elapsed:.1f}s "
          f"({moves_applied / elapsed:.0f} moves/s)")
    if artifacts:
        outdir = Path(args.artifacts)
        outdir.mkdir(parents=True, exist_ok=True)
        for trial, script in artifacts:
            path = outdir / f"fuzz_violation_seed{args.seed}_trial{trial}.txt"
            path.write_text(script)
            print(f"wrote {path}")
    if failures:
        print(f"{failures} failing trials")
        return 3
    print("no violations")
    return 0


if __name__ == "__main__":
    sys.exit(main())
