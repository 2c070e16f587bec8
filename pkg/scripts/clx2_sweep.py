"""Sweep the meet/lex domination check over random interleaved bases.

The built-in example base comes first. For every (depth, alphabet) pair a
handful of bases is drawn, and each gets a batch of validated configurations,
a share of them forced onto the nested-meet alternative when the base admits
it. Prints one row per base and optionally writes a CSV.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from dataclasses import asdict, dataclass

from balab.base import (
    Base,
    algebra_from_base,
    check_clx2_config,
    example_base,
    nested_capable,
    random_clx2_config,
    random_interleaved_base,
    uses_nested,
)


@dataclass
class SweepConfig:
    seed: int = 0
    bases_per_shape: int = 4
    configs_per_base: int = 200
    nested_share: float = 0.3
    max_L: int = 12
    shapes: tuple = ((6, 2), (6, 3), (8, 2), (8, 3))


@dataclass
class Row:
    depth: int
    alphabet: int
    L: int
    J: int
    capable: int
    configs: int
    nested: int
    rejections: int
    failures: int
    seconds: float


def run_base(b: Base, cfg: SweepConfig, rng: random.Random) -> Row:
    alg = algebra_from_base(b)
    capable = len(nested_capable(b))
    start = time.perf_counter()
    nested = rejections = failures = 0
    for _ in range(cfg.configs_per_base):
        force = capable > 0 and rng.random() < cfg.nested_share
        c, rej = random_clx2_config(b, rng, require_nested=force)
        rejections += rej
        nested += uses_nested(c)
        failures += not check_clx2_config(b, c, alg)[0]
    return Row(b.depth, b.alphabet, b.L, b.J, capable, cfg.configs_per_base, nested, rejections, failures, time.perf_counter() - start)


def sweep(cfg: SweepConfig) -> list[Row]:
    rng = random.Random(cfg.seed)
    rows = [run_base(example_base(), cfg, rng)]
    for depth, m in cfg.shapes:
        for _ in range(cfg.bases_per_shape):
            L = rng.randint(5, min(cfg.max_L, m ** (depth // 2)))
            b = random_interleaved_base(rng, depth, m, L, J=rng.randint(3, min(L, 5)))
            rows.append(run_base(b, cfg, rng))
    return rows


def main() -> int:
    ap = argparse.ArgumentParser(description="meet/lex domination sweep")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--configs", type=int, default=200)
    ap.add_argument("--csv")
    a = ap.parse_args()
    rows = sweep(SweepConfig(seed=a.seed, configs_per_base=a.configs))
    print(f"{'d':>2} {'m':>2} {'L':>3} {'J':>2} {'cap':>4} {'nested':>7} {'rej':>6} {'fail':>5} {'sec':>6}")
    for r in rows:
        print(f"{r.depth:>2} {r.alphabet:>2} {r.L:>3} {r.J:>2} {r.capable:>4} {r.nested:>7} {r.rejections:>6} {r.failures:>5} {r.seconds:>6.2f}")
    if a.csv:
        with open(a.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(asdict(rows[0])))
            w.writeheader()
            w.writerows(asdict(r) for r in rows)
    return 1 if any(r.failures for r in rows) else 0


if __name__ == "__main__":
    sys.exit(main())
