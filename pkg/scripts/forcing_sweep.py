"""Exhaustive poset checks and random triple amalgams for several grid sizes.

For each grid the script enumerates every condition of both flavours, checks
that the order is reflexive and transitive, that condition algebras grow along
the order and that generators are separated, then amalgamates random triple
instances and counts failures per construction case.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from collections import Counter
from dataclasses import dataclass, field

from balab.algebra import subalgebra_check
from balab.forcing import SParams, condition_algebra, enumerate_conditions, leq, triple_amalgamate
from balab.forcing.instances import random_instance
from balab.separation import Kind, is_separated
from balab.terms import Var


@dataclass
class ForcingSweepConfig:
    seed: int = 0
    grids: list = field(default_factory=lambda: [((1, 2), 3), ((2, 2), 3), ((1, 2, 1), 3)])
    triples: int = 500


def poset_checks(params: SParams, flavor: str) -> dict:
    conds = enumerate_conditions(params, flavor)
    algs = [condition_algebra(params, c) for c in conds]
    rel = {(a, b) for a in range(len(conds)) for b in range(len(conds)) if leq(params, conds[a], conds[b])}
    succ: dict = {}
    for a, b in rel:
        succ.setdefault(a, set()).add(b)
    trans = sum((a, c) not in rel for a, b in rel for c in succ.get(b, ()))
    kind = Kind.RIGHT_SEPARATED if flavor == "q" else Kind.LEFT_SEPARATED
    return {
        "conditions": len(conds),
        "related": len(rel),
        "reflexive_fail": sum((k, k) not in rel for k in range(len(conds))),
        "transitive_fail": trans,
        "monotone_fail": sum(not subalgebra_check(algs[a], algs[b]) for a, b in rel),
        "separation_fail": sum(not is_separated(al, [Var(k) for k in range(al.n)], kind) for al in algs),
    }


def main() -> int:
    ap = argparse.ArgumentParser(description="forcing poset sweep")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--triples", type=int, default=500)
    a = ap.parse_args()
    cfg = ForcingSweepConfig(seed=a.seed, triples=a.triples)
    bad = 0
    for chi, cap in cfg.grids:
        params = SParams(len(chi), chi, cap)
        for flavor in ("q", "p"):
            start = time.perf_counter()
            res = poset_checks(params, flavor)
            bad += sum(v for k, v in res.items() if k.endswith("_fail"))
            print(f"chi={chi} ucap={cap} {flavor}: {res} ({time.perf_counter() - start:.1f}s)")
    rng = random.Random(cfg.seed)
    for flavor in ("q", "p"):
        cases: Counter = Counter()
        fails = 0
        for _ in range(cfg.triples):
            res = triple_amalgamate(random_instance(rng, flavor))
            fails += not res.ok
            cases.update(res.cases.values())
        bad += fails
        print(f"triples {flavor}: {cfg.triples - fails}/{cfg.triples} ok; cases used {dict(sorted(cases.items()))}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
