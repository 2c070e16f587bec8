"""Command-line entry point ``balab``.

Exit codes: 0 for success or a true verdict, 1 for a false verdict or a
refusal, 2 for usage and format errors. ``--json`` prints one JSON document
(keys sorted, schema ``balab/1``).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from . import io
from .algebra import PresentedAlgebra, find_separating_row, oracle_leq, row_to_bits
from .base import (
    HypothesisError,
    algebra_from_base,
    check_base,
    check_clx1,
    check_clx2_config,
    example_base,
    interleaved_base,
    nested_capable,
    random_clx2_config,
    random_interleaved_base,
    uses_nested,
)
from .combinatorics import delta_system_extract, delta_system_sequences, free_set_search
from .forcing.amalgam import PreconditionError, p_pair_amalgamate, q_pair_amalgamate, triple_amalgamate
from .forcing.conditions import (
    ChainError,
    SParams,
    chain_union_algebra,
    condition_algebra,
    condition_iso,
    leq,
    validate_condition,
)
from .forcing.instances import random_instance
from .separation import Kind, elementary_candidates, invariant_report, max_separated_length
from .terms import TermSyntaxError, check_range, format_term, parse_term

SCHEMA = "balab/1"


@dataclass
class RunConfig:
    seed: int = 0
    budget: int = 1_000_000
    json: bool = False
    max_enum: int = 1_000_000


class UsageError(Exception):
    pass


class Reporter:
    def __init__(self, cfg: RunConfig, command: str):
        self.cfg = cfg
        self.doc: dict = {"schema": SCHEMA, "command": command}

    def line(self, text: str):
        if not self.cfg.json:
            print(text)

    def set(self, **kw):
        self.doc.update(kw)

    def finish(self, code: int) -> int:
        if self.cfg.json:
            self.doc["exit"] = code
            print(json.dumps(self.doc, sort_keys=True, indent=2))
        return code


# ---------------------------------------------------------------------------
# helpers


def _term(text: str, alg: PresentedAlgebra):
    t = parse_term(text)
    check_range(t, alg.n)
    return t


def _load(loader, path):
    try:
        return loader(io.read_text(path))
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load_condition(path, flavor: str) -> io.ConditionFile:
    cf = _load(io.parse_condition, path)
    if cf.condition.flavor != flavor:
        raise UsageError(f"{path} holds a {cf.condition.flavor}-condition, expected {flavor}")
    return cf


def _joint_params(files) -> SParams:
    chis = {cf.params.chi for cf in files}
    if len(chis) != 1:
        raise UsageError("condition files disagree on chi")
    return files[0].params.with_cap(max(cf.params.ucap for cf in files))


def _write_or_print(text: str, out: str | None, rep: Reporter, key: str):
    if out:
        Path(out).write_text(text)
        rep.line(f"wrote {out}")
    else:
        rep.line(text.rstrip("\n"))
    rep.set(**{key: text})


# ---------------------------------------------------------------------------
# term engine and separation


def cmd_eval(a, cfg) -> int:
    rep = Reporter(cfg, "eval")
    alg = _load(io.parse_algebra, a.algebra)
    for note in io.algebra_notes(alg):
        rep.line(f"note: {note}")
    t = _term(a.term, alg)
    row = find_separating_row(alg, t, [])
    nz = row is not None
    rep.line(f"{format_term(t)} is {'nonzero' if nz else 'zero'}" + (f" (row {row_to_bits(row, alg.n)})" if nz else ""))
    rep.set(term=format_term(t), nonzero=nz, witness_row=row_to_bits(row, alg.n) if nz else None)
    return rep.finish(0 if nz else 1)


def cmd_leq(a, cfg) -> int:
    rep = Reporter(cfg, "leq")
    alg = _load(io.parse_algebra, a.algebra)
    lhs = _term(a.lhs, alg)
    rhs = [_term(r, alg) for r in a.rhs]
    row = find_separating_row(alg, lhs, rhs)
    holds = row is None
    shown = " | ".join(format_term(r) for r in rhs) or "0"
    rep.line(f"{format_term(lhs)} <= {shown}: {'holds' if holds else 'fails'}")
    if not holds:
        rep.line(f"counterexample row {row_to_bits(row, alg.n)}")
    doc = {"lhs": format_term(lhs), "rhs": [format_term(r) for r in rhs], "holds": holds}
    doc["counterexample_row"] = None if holds else row_to_bits(row, alg.n)
    if a.oracle:
        agree = oracle_leq(alg, lhs, rhs) == holds
        rep.line(f"oracle agrees: {agree}")
        doc["oracle_agrees"] = agree
    rep.set(**doc)
    return rep.finish(0 if holds else 1)


def cmd_search(a, cfg) -> int:
    rep = Reporter(cfg, "search")
    alg = _load(io.parse_algebra, a.algebra)
    pool = elementary_candidates(alg, a.arity if a.arity is not None else alg.n)
    if not pool:
        raise UsageError("the candidate pool is empty (the algebra has no nonzero element)")
    res = max_separated_length(alg, Kind(a.kind), pool, cfg.budget)
    rep.line(f"{a.kind}: length {res.length} ({'exact' if res.exact else 'lower bound'}, {res.nodes} nodes)")
    for t, r in zip(res.witness.elements, res.witness.rows):
        rep.line(f"  {format_term(t)}  row {row_to_bits(r, alg.n)}")
    rep.set(**res.to_json(alg.n))
    return rep.finish(0)


def cmd_report(a, cfg) -> int:
    rep = Reporter(cfg, "report")
    if a.algebra:
        alg = _load(io.parse_algebra, a.algebra)
    elif a.base:
        alg = algebra_from_base(_load(io.parse_base, a.base))
    else:
        raise UsageError("give --algebra or --base")
    r = invariant_report(alg, a.arity, cfg.budget)
    for name, length in zip(("spread", "left", "right"), r.lengths()):
        rep.line(f"{name}: {length}")
    rep.line(f"atoms: {r.atoms}")
    rep.line(f"exact: {r.exact}")
    rep.set(**r.to_json(alg.n))
    return rep.finish(0)


# ---------------------------------------------------------------------------
# combinatorics


def cmd_delta(a, cfg) -> int:
    rep = Reporter(cfg, "delta")
    fam = _load(io.parse_family, a.file)
    if a.sequences:
        got = delta_system_sequences(fam, a.target)
        heart = None if got is None else [[k, v] for k, v in got.heart.items()]
    else:
        got = delta_system_extract(fam, a.target)
        heart = None if got is None else sorted(got.heart, key=lambda v: (isinstance(v, str), v))
    if got is None:
        rep.line(f"no delta-system of size {a.target}")
        rep.set(found=False, target=a.target)
        return rep.finish(1)
    rep.line(f"members {got.indices} heart {heart}" + ("" if got.exact else " (greedy)"))
    rep.set(found=True, target=a.target, indices=got.indices, heart=heart, exact=got.exact)
    return rep.finish(0)


def cmd_freeset(a, cfg) -> int:
    rep = Reporter(cfg, "freeset")
    m = _load(io.parse_setmap, a.file)
    got = free_set_search(m, a.target)
    if got is None:
        rep.line(f"no free set of size {a.target}")
        rep.set(found=False, target=a.target)
        return rep.finish(1)
    rep.line("free set: " + " ".join(map(str, got)))
    rep.set(found=True, target=a.target, free_set=got)
    return rep.finish(0)


# ---------------------------------------------------------------------------
# bases


def _base_arg(a):
    return _load(io.parse_base, a.base) if a.base else example_base()


def cmd_base_gen(a, cfg) -> int:
    rep = Reporter(cfg, "base gen")
    if a.interleave:
        nu = _load(io.parse_strings, a.interleave[0])
        rho = _load(io.parse_strings, a.interleave[1])
        if not nu or not rho:
            raise UsageError("empty string file")
        chi = a.chi if a.chi else [0, len(rho)] if len(nu) == 1 else None
        if chi is None:
            raise UsageError("--chi is required with more than one block string")
        b = interleaved_base(nu, rho, 2 * len(nu[0]), a.alphabet, chi)
    elif a.random:
        b = random_interleaved_base(random.Random(cfg.seed), a.depth, a.alphabet, a.random)
    else:
        b = example_base()
    _write_or_print(io.format_base(b), a.out, rep, "base")
    return rep.finish(0)


def cmd_base_check(a, cfg) -> int:
    rep = Reporter(cfg, "base check")
    b = _base_arg(a)
    verdicts = check_base(b, a.y0, a.plus, cfg.max_enum)
    ok = True
    for v in verdicts:
        status = "refused" if v.refused else ("holds" if v.holds else "fails")
        rep.line(f"axiom {v.axiom}: {status}" + (f" {v.witness}" if v.witness and not v.holds else ""))
        ok &= v.holds
    rep.set(verdicts=[v.to_json() for v in verdicts], holds=ok)
    return rep.finish(0 if ok else 1)


def cmd_base_algebra(a, cfg) -> int:
    rep = Reporter(cfg, "base algebra")
    alg = algebra_from_base(_base_arg(a))
    _write_or_print(io.format_algebra(alg), a.out, rep, "algebra")
    return rep.finish(0)


def cmd_base_clx1(a, cfg) -> int:
    rep = Reporter(cfg, "base clx1")
    out = check_clx1(_base_arg(a))
    for v in out:
        rep.line(f"block {v.block}: {'PASS' if v.holds else f'FAIL at index {v.failed_at}'}")
    ok = all(v.holds for v in out)
    rep.set(blocks=[{"block": v.block, "holds": v.holds, "failed_at": v.failed_at} for v in out], holds=ok)
    return rep.finish(0 if ok else 1)


def cmd_base_clx2(a, cfg) -> int:
    rep = Reporter(cfg, "base clx2")
    b = _base_arg(a)
    alg = algebra_from_base(b)
    rng = random.Random(cfg.seed)
    if a.nested and not nested_capable(b):
        raise UsageError("this base admits no nested-meet configuration")
    trials, passed, rejections = [], 0, 0
    for k in range(a.trials):
        try:
            c, rej = random_clx2_config(b, rng, require_nested=a.nested)
        except RuntimeError as e:
            rep.line(f"trial {k}: REFUSED ({e})")
            trials.append({"trial": k, "refused": str(e)})
            continue
        rejections += rej
        holds, row = check_clx2_config(b, c, alg)
        passed += holds
        tag = "nested" if uses_nested(c) else "direct"
        rep.line(f"trial {k}: {'PASS' if holds else 'FAIL'} ({tag}, k={len(c.alpha)}, l={len(c.alpha_l)})")
        entry = {"trial": k, "holds": holds, "config": c.to_json(), "nested": uses_nested(c)}
        if not holds:
            entry["counterexample_row"] = row_to_bits(row, alg.n)
        trials.append(entry)
    rep.line(f"{passed}/{a.trials} passed, {rejections} proposals rejected by hypothesis validation")
    rep.set(trials=trials, passed=passed, total=a.trials, rejections=rejections)
    return rep.finish(0 if passed == a.trials else 1)


# ---------------------------------------------------------------------------
# forcing


def cmd_forcing_validate(a, cfg) -> int:
    rep = Reporter(cfg, "forcing validate")
    cf = _load_condition(a.file, a.flavor)
    v = validate_condition(cf.params, cf.condition, a.flavor)
    rep.line("valid" if v else f"invalid: clause ({v.clause}) {v.detail}")
    rep.set(**v.to_json())
    return rep.finish(0 if v else 1)


def _two(a):
    f1, f2 = _load_condition(a.p, a.flavor), _load_condition(a.q, a.flavor)
    params = _joint_params([f1, f2])
    for f, path in ((f1, a.p), (f2, a.q)):
        v = validate_condition(params, f.condition)
        if not v:
            raise UsageError(f"{path} is invalid: clause ({v.clause}) {v.detail}")
    return params, f1.condition, f2.condition


def cmd_forcing_leq(a, cfg) -> int:
    rep = Reporter(cfg, "forcing leq")
    params, p, q = _two(a)
    res = leq(params, p, q)
    rep.line("p <= q: " + ("holds" if res else f"fails at clause ({res.clause}) {res.detail}"))
    for w in res.certificate:
        extra = ""
        if w.source is not None:
            extra = f" from f{io.format_point(w.source)}"
        if w.eps is not None:
            extra += f" eps={w.eps}"
        if w.level is not None:
            extra += f" cut={w.level}"
        rep.line(f"  {io.format_point(w.point)}: {w.case}{extra}")
    rep.set(**res.to_json())
    return rep.finish(0 if res else 1)


def cmd_forcing_iso(a, cfg) -> int:
    rep = Reporter(cfg, "forcing iso")
    _, p, q = _two(a)
    res = condition_iso(p, q)
    if res:
        rep.line("isomorphic: " + ", ".join(f"{io.format_point(s)}->{io.format_point(t)}" for s, t in res.H.items()))
    else:
        rep.line(f"not isomorphic: clause ({res.clause}) {res.detail}")
    rep.set(**res.to_json())
    return rep.finish(0 if res else 1)


def cmd_forcing_amalgamate(a, cfg) -> int:
    rep = Reporter(cfg, "forcing amalgamate")
    params, p, q = _two(a)
    big = params.with_cap(max(params.ucap, a.cap or 0, len(p.uset | q.uset)))
    fn = q_pair_amalgamate if a.flavor == "q" else p_pair_amalgamate
    try:
        r = fn(big, p, q)
    except PreconditionError as e:
        rep.line(f"refused: {e}")
        rep.set(refused=True, clause=e.clause, detail=str(e))
        return rep.finish(1)
    ok = bool(validate_condition(big, r)) and bool(leq(big, p, r)) and bool(leq(big, q, r))
    text = io.format_condition(r, big)
    _write_or_print(text, a.out, rep, "condition")
    rep.line(f"valid upper bound: {ok}")
    rep.set(refused=False, upper_bound=ok)
    return rep.finish(0 if ok else 1)


def cmd_forcing_triple(a, cfg) -> int:
    rep = Reporter(cfg, "forcing triple")
    rng = random.Random(cfg.seed)
    passed, out = 0, []
    for k in range(a.trials):
        inst = random_instance(rng, a.flavor)
        res = triple_amalgamate(inst)
        passed += res.ok
        rep.line(f"instance {k}: {'PASS' if res.ok else 'FAIL'} (|u^r|={len(res.r.u)})")
        entry = {"instance": k, "holds": res.holds, "dominates": res.dominates, "size": len(res.r.u)}
        if not res.ok:
            entry["r"] = io.format_condition(res.r, inst.params.with_cap(max(inst.params.ucap, len(res.r.u))))
            if res.counterexample is not None:
                entry["counterexample_row"] = [list(s) for s in sorted(res.counterexample)]
        out.append(entry)
    rep.line(f"{passed}/{a.trials} passed")
    rep.set(instances=out, passed=passed, total=a.trials)
    return rep.finish(0 if passed == a.trials else 1)


def cmd_forcing_algebra(a, cfg) -> int:
    rep = Reporter(cfg, "forcing algebra")
    cf = _load_condition(a.file, a.flavor)
    v = validate_condition(cf.params, cf.condition)
    if not v:
        raise UsageError(f"invalid condition: clause ({v.clause}) {v.detail}")
    alg = condition_algebra(cf.params, cf.condition)
    rep.line("# generators: " + " ".join(io.format_point(s) for s in cf.condition.u))
    _write_or_print(io.format_algebra(alg), a.out, rep, "algebra")
    rep.set(generators=[list(s) for s in cf.condition.u])
    return rep.finish(0)


def cmd_forcing_chain(a, cfg) -> int:
    rep = Reporter(cfg, "forcing chain")
    files = [_load_condition(p, a.flavor) for p in a.files]
    params = _joint_params(files)
    try:
        alg = chain_union_algebra(params, [f.condition for f in files])
    except ChainError as e:
        rep.line(f"refused: {e}")
        rep.set(ok=False, failed_index=e.index, detail=str(e))
        return rep.finish(1)
    rep.line(f"chain of {len(files)} verified; final algebra has {alg.n} generators and {len(alg.rows)} rows")
    rep.set(ok=True, algebra=io.format_algebra(alg))
    return rep.finish(0)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--budget", type=int, default=1_000_000, help="node budget for searches")
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--max-enum", type=int, default=1_000_000, help="node bound for exhaustive checks")

    p = argparse.ArgumentParser(prog="balab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="decide whether a term is nonzero")
    s.add_argument("--algebra", required=True)
    s.add_argument("--term", required=True)
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser("leq", parents=[common], help="decide lhs <= join of rhs")
    s.add_argument("--algebra", required=True)
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", nargs="*", default=[])
    s.add_argument("--oracle", action="store_true", help="cross-check with the set-algebra oracle")
    s.set_defaults(fn=cmd_leq)

    s = sub.add_parser("search", parents=[common], help="longest separated sequence of elementary conjunctions")
    s.add_argument("--algebra", required=True)
    s.add_argument("--kind", choices=[k.value for k in Kind], required=True)
    s.add_argument("--arity", type=int)
    s.set_defaults(fn=cmd_search)

    s = sub.add_parser("report", parents=[common], help="all three sequence searches and the atom count")
    s.add_argument("--algebra")
    s.add_argument("--base")
    s.add_argument("--arity", type=int)
    s.set_defaults(fn=cmd_report)

    s = sub.add_parser("delta", parents=[common], help="delta-system in a family")
    s.add_argument("--file", required=True)
    s.add_argument("--target", type=int, required=True)
    s.add_argument("--sequences", action="store_true", help="members are sequences, not sets")
    s.set_defaults(fn=cmd_delta)

    s = sub.add_parser("freeset", parents=[common], help="free set for a set map")
    s.add_argument("--file", required=True)
    s.add_argument("--target", type=int, required=True)
    s.set_defaults(fn=cmd_freeset)

    base = sub.add_parser("base", help="bases and their algebras").add_subparsers(dest="base_command", required=True)
    s = base.add_parser("gen", parents=[common], help="build a base (interleaved, random or the built-in example)")
    s.add_argument("--interleave", nargs=2, metavar=("NU_FILE", "RHO_FILE"))
    s.add_argument("--chi", type=int, nargs="+")
    s.add_argument("--alphabet", type=int, default=2)
    s.add_argument("--random", type=int, metavar="L", help="random interleaved base with L indices")
    s.add_argument("--depth", type=int, default=6)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_base_gen)
    for name, fn, helptext in (
        ("check", cmd_base_check, "check the base axioms"),
        ("algebra", cmd_base_algebra, "print the algebra of a base"),
        ("clx1", cmd_base_clx1, "ideal independence of each block"),
        ("clx2", cmd_base_clx2, "random domination configurations"),
    ):
        s = base.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--base", help="base file (default: the built-in example)")
        s.set_defaults(fn=fn)
        if name == "check":
            s.add_argument("--y0", type=int, required=True)
            s.add_argument("--plus", action="store_true")
        if name == "algebra":
            s.add_argument("--out")
        if name == "clx2":
            s.add_argument("--trials", type=int, default=10)
            s.add_argument("--nested", action="store_true", help="force the nested-meet alternative")

    forcing = sub.add_parser("forcing", help="condition posets").add_subparsers(dest="forcing_command", required=True)
    for name, fn, files in (
        ("validate", cmd_forcing_validate, ["file"]),
        ("leq", cmd_forcing_leq, ["p", "q"]),
        ("iso", cmd_forcing_iso, ["p", "q"]),
        ("amalgamate", cmd_forcing_amalgamate, ["p", "q"]),
        ("triple", cmd_forcing_triple, []),
        ("algebra", cmd_forcing_algebra, ["file"]),
        ("chain", cmd_forcing_chain, None),
    ):
        s = forcing.add_parser(name, parents=[common])
        s.add_argument("--flavor", choices=["q", "p"], required=True)
        if files is None:
            s.add_argument("files", nargs="+")
        for f in files or []:
            s.add_argument(f)
        if name == "amalgamate":
            s.add_argument("--cap", type=int, help="cap on |u| for the amalgam")
            s.add_argument("--out")
        if name == "algebra":
            s.add_argument("--out")
        if name == "triple":
            s.add_argument("--trials", type=int, default=10)
        s.set_defaults(fn=fn)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    cfg = RunConfig(a.seed, a.budget, a.json, a.max_enum)
    try:
        return a.fn(a, cfg)
    except (io.FormatError, TermSyntaxError, UsageError, HypothesisError, ValueError, IndexError) as e:
        print(f"balab: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
