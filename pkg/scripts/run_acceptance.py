"""Run the acceptance criteria outside pytest and print one line per criterion.

    python3 scripts/run_acceptance.py          # all criteria
    python3 scripts/run_acceptance.py 6 9      # a subset
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from test_acceptance import CRITERIA, run  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("numbers", type=int, nargs="*", help="criteria to run (default: all)")
    args = ap.parse_args()
    numbers = args.numbers or [c[0] for c in CRITERIA]
    failed = 0
    for k in numbers:
        ok, line = run(k)
        print(line, flush=True)
        failed += not ok
    print(f"{len(numbers) - failed}/{len(numbers)} criteria passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
