"""Regenerate the diagram files under tests/data/.

Every file is produced deterministically from the library, so the data
directory can be rebuilt from scratch at any time:

    python3 scripts/make_fixtures.py

The two hand-written negative files (an off-circle seam point and a
syntactically broken JSON) are emitted verbatim.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from rp2bouquet import InvariantTuple, dumps, random_move_applied, realize

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"

TUPLES = {
    "circle.json": "order=e1,e1^-1; h=0; w=0",
    "figure_eight.json": "order=e1,e1^-1; h=0; w=1",
    "seam_chord.json": "order=e1,e1^-1; h=1; w=0",
    "chord_kink.json": "order=e1,e1^-1; h=1; w=1",
    "two_loops.json": "order=e1,e2,e1^-1,e2^-1; h=00; w=00",
    "three_loops.json": "order=e1,e2,e3,e1^-1,e2^-1,e3^-1; h=010; w=001",
}

INVALID_SEAM = {
    "n": 1,
    "vertex": [0, 1, 0, 1],
    "loops": [{"legs": [
        [[0, 1, 0, 1], [9, 10, 0, 1]],
        [[-9, 10, 0, 1], [0, 1, 0, 1]],
    ]}],
}


def main() -> int:
    DATA.mkdir(parents=True, exist_ok=True)
    for name, text in TUPLES.items():
        d = realize(InvariantTuple.parse(text))
        (DATA / name).write_text(dumps(d))
        print(f"wrote {name}: {text}")

    d = realize(InvariantTuple.parse(TUPLES["circle.json"]))
    for seed in range(5):
        _, d = random_move_applied(d, seed)
    (DATA / "circle_after_moves.json").write_text(dumps(d))
    print("wrote circle_after_moves.json: 5 moves applied")

    (DATA / "invalid_seam.json").write_text(json.dumps(INVALID_SEAM) + "\n")
    (DATA / "malformed.json").write_text("{this is not json\n")
    print("wrote invalid_seam.json, malformed.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
