"""Regenerate the frozen expected values under tests/golden.

Algebra rows and invariant values come from the brute-force oracles in
tests/oracles.py, not from the library's own decision code. The CLI reports are
plain regression snapshots.
"""

from __future__ import annotations

import contextlib
import io
import json
import sys
from itertools import product
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from oracles import naive_eval, naive_f_b, naive_max_separated, subset_right_separated, row_sets  # noqa: E402

from balab.cli import main  # noqa: E402
from balab.terms import literal  # noqa: E402

GOLDEN = ROOT / "tests" / "golden"

# six indices in two blocks, depth 4 over 3 letters
NU = ["01", "20"]
RHO = ["00", "01", "10", "12", "21", "22"]
CHI = [0, 3, 6]


def base6():
    eta = []
    for a, r in enumerate(RHO):
        j = 0 if a < CHI[1] else 1
        eta.append("".join(x + y for x, y in zip(NU[j], r)))
    A = {""} | {"".join(p) for p in product("012", repeat=2)}
    return eta, A


def write_base6_file():
    eta, A = base6()
    lines = ["base v1", "depth 4", "alphabet 3", "chi " + " ".join(map(str, CHI))]
    lines += [f"A {a or '-'}" for a in sorted(A, key=lambda s: (len(s), s))]
    lines += [f"eta {k} {e}" for k, e in enumerate(eta)]
    (ROOT / "data" / "base6.txt").write_text("\n".join(lines) + "\n")


def base6_rows():
    eta, A = base6()
    L = len(eta)
    return sorted({"".join(str(naive_f_b(eta, A, a, c)) for c in range(L)) for a in range(L)})


def base6_report(rows):
    n = len(rows[0])
    pool, seen = [], set()
    for i in range(n):
        for neg in (0, 1):
            t = literal(i, neg)
            s = frozenset(k for k, r in enumerate(rows) if naive_eval(r, t))
            if s and s not in seen:
                seen.add(s)
                pool.append(t)
    sets = row_sets(rows, pool)
    right = subset_right_separated(sets)
    return {
        "arity": 1,
        "pool_size": len(pool),
        "spread": naive_max_separated(rows, pool, "ideal"),
        "left": right,  # reversing an arrangement swaps the two notions
        "right": right,
        "atoms": len(set(rows)),
    }


def cli_snapshot(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return {"argv": argv, "exit": code, "stdout": json.loads(buf.getvalue())}


def main_():
    GOLDEN.mkdir(exist_ok=True)
    write_base6_file()
    rows = base6_rows()
    (GOLDEN / "base6_algebra.txt").write_text("algebra v1\nw 6\n" + "".join(f"f {r}\n" for r in rows))
    (GOLDEN / "base6_report.json").write_text(json.dumps(base6_report(rows), indent=2, sort_keys=True) + "\n")
    # pair amalgam of the single points (0,0) and (1,0), widths (1,1), derived by hand:
    # f_(0,0) = 11 and f_(1,0) = 01, so the rows are 0, the two truncations of each
    (GOLDEN / "amalgam_disjoint_algebra.txt").write_text("algebra v1\nw 2\nf 00\nf 01\nf 11\n")
    snaps = [
        ["base", "clx2", "--trials", "10", "--seed", "1", "--json"],
        ["forcing", "leq", "--flavor", "q", "data/q1.txt", "data/q2.txt", "--json"],
        ["forcing", "triple", "--flavor", "q", "--trials", "5", "--seed", "3", "--json"],
        ["search", "--algebra", "data/chain4.txt", "--kind", "right", "--json"],
    ]
    (GOLDEN / "cli_snapshots.json").write_text(json.dumps([cli_snapshot(a) for a in snaps], indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    import os

    os.chdir(ROOT)
    main_()
