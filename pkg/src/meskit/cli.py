"""The ``mes`` command line: check proofs, list models, build free algebras,
decide equations and run the law suites."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Iterable, Optional, TextIO

from .algebra import enumerate_models
from .eml import ProofError, check, soundness_audit
from .finset import FinSet
from .freealg import Decider, Finite, build, verify_witness
from .parse import ParseError, format_equation, parse_equation, parse_presentation, parse_proof
from .syntax import Presentation, validate


class Report:
    """Collects one record per check; prints text and, optionally, JSON lines."""

    def __init__(self, json_out: bool = False, stream: TextIO = sys.stdout, sink: Optional[TextIO] = None):
        self.json_out = json_out
        self.stream = stream
        self.sink = sink
        self.failed = False

    def say(self, text: str) -> None:
        if not self.json_out:
            print(text, file=self.stream)

    def record(self, name: str, ok: bool, witness: Optional[str] = None, **extra) -> None:
        self.failed |= not ok
        rec = {"check": name, "status": "pass" if ok else "fail", "witness": witness, **extra}
        line = json.dumps(rec, sort_keys=True, ensure_ascii=False)
        if self.json_out:
            print(line, file=self.stream)
        if self.sink is not None:
            print(line, file=self.sink)

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0


def _load_presentation(path: str) -> Presentation:
    text = Path(path).read_text(encoding="utf-8")
    p = parse_presentation(text, name=Path(path).stem, source=path)
    problems = validate(p)
    if problems:
        raise ParseError(0, 0, problems[0], path)
    return p


def _check_proof(args, rep: Report) -> None:
    p = _load_presentation(args.presentation)
    text = Path(args.proof).read_text(encoding="utf-8")
    proof = parse_proof(text, p, source=args.proof)
    try:
        j = check(p, proof)
    except ProofError as err:
        rep.say(f"rejected: {err}")
        rep.record("check-proof", False, str(err))
        return
    rep.say(f"accepted: {j}")
    rep.record("check-proof", True, judgement=str(j))
    if args.audit_k:
        audit = soundness_audit(p, proof, args.audit_k)
        rep.say(f"audit over {audit.models_checked} models of size ≤ {args.audit_k}: "
                + ("no counterexample" if audit.sound else f"{len(audit.counterexamples)} counterexamples"))
        witness = None
        if not audit.sound:
            c = audit.counterexamples[0]
            witness = f"{c.environment.label} at {c.coarity_element} in\n{c.algebra}"
            rep.say(witness)
        rep.record("soundness-audit", audit.sound, witness, models=audit.models_checked)


def _models(args, rep: Report) -> None:
    p = _load_presentation(args.presentation)
    count = 0
    for alg in enumerate_models(p, args.max_size):
        count += 1
        rep.say(f"model {count}: {alg}")
        rep.record("model", True, carrier=list(alg.carrier), index=count)
    rep.say(f"{count} models of size ≤ {args.max_size}")
    rep.record("models", True, count=count)


def _free(args, rep: Report) -> None:
    p = _load_presentation(args.presentation)
    gens = FinSet(g.strip() for g in args.gens.split(",") if g.strip())
    start = time.perf_counter()
    result = build(p, gens, args.depth)
    elapsed = time.perf_counter() - start
    history = result.table.history
    if isinstance(result, Finite):
        rep.say(
            f"finite: {len(result.classes)} classes, stable from depth {result.stable_depth} "
            f"(class counts {history}, {elapsed:.2f}s)"
        )
        for c in result.classes:
            rep.say(f"  [{c}]")
        rep.say(str(result.algebra))
        rep.record("free", True, status="finite", classes=list(result.classes), history=history)
    else:
        rep.say(f"truncated at depth {result.depth}: class counts {history} ({elapsed:.2f}s)")
        rep.record("free", True, status="truncated", depth=result.depth, history=history)


def _decide(args, rep: Report) -> None:
    p = _load_presentation(args.presentation)
    e = parse_equation(args.eq, p.signature)
    verdict = Decider(p, d_max=args.depth, k=args.max_size).decide(e)
    rep.say(f"{format_equation(e)}")
    rep.say(f"verdict: {verdict}")
    witness = None
    ok = verdict.status != "Unknown"
    if verdict.witness is not None:
        w = verdict.witness
        ok = verify_witness(p, e, w)
        witness = (
            f"{w.environment.label} gives {w.lhs_value} ≠ {w.rhs_value} in the model\n{w.algebra}"
        )
        rep.say(f"witness: {witness}")
        rep.say("witness verified" if ok else "witness FAILED verification")
    rep.record("decide", ok, witness, verdict=verdict.status, basis=verdict.basis)


def _selfcheck(args, rep: Report) -> None:
    from .laws import selfcheck

    for r in selfcheck(args.sizes):
        rep.say(r.line())
        rep.record(f"{r.module}: {r.name}", r.passed, None if r.passed else r.detail, cases=r.checked)
    rep.say("all checks passed" if not rep.failed else "some checks FAILED")


def _search(args, rep: Report) -> None:
    from .parse import format_proof
    from .rewrite import search
    from .finset import UNIT_POINT

    p = _load_presentation(args.presentation)
    e = parse_equation(args.eq, p.signature)
    proof = search(p, e.lhs(UNIT_POINT), e.rhs(UNIT_POINT), e.arity, max_steps=args.steps)
    if proof is None:
        rep.say(f"no rewrite proof within {args.steps} steps")
        rep.record("search", False, f"bound of {args.steps} steps reached")
        return
    j = check(p, proof)
    rep.say(format_proof(proof))
    rep.say(f"checked: {j}")
    rep.record("search", True, proof=format_proof(proof))


def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mes", description=__doc__)
    ap.add_argument("--json", action="store_true", help="print JSON lines instead of text")
    ap.add_argument("--report", metavar="PATH", help="also write JSON lines to PATH")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check-proof", help="check a proof against a presentation")
    c.add_argument("presentation")
    c.add_argument("proof")
    c.add_argument("--audit-k", type=int, default=0, help="also audit in models of size ≤ N")
    c.set_defaults(run=_check_proof)

    m = sub.add_parser("models", help="list the models of size ≤ K")
    m.add_argument("presentation")
    m.add_argument("--max-size", type=int, default=2)
    m.set_defaults(run=_models)

    f = sub.add_parser("free", help="build the free algebra on some generators")
    f.add_argument("presentation")
    f.add_argument("--gens", required=True, help="comma-separated generator names")
    f.add_argument("--depth", type=int, default=4)
    f.set_defaults(run=_free)

    d = sub.add_parser("decide", help="decide an equation")
    d.add_argument("presentation")
    d.add_argument("--eq", required=True, help='e.g. "meet(x,y) = meet(y,x)"')
    d.add_argument("--depth", type=int, default=4)
    d.add_argument("--max-size", type=int, default=3)
    d.set_defaults(run=_decide)

    s = sub.add_parser("selfcheck", help="run every law suite")
    s.add_argument("--sizes", type=int, default=2)
    s.set_defaults(run=_selfcheck)

    r = sub.add_parser("search", help="bounded rewrite search for a proof")
    r.add_argument("presentation")
    r.add_argument("--eq", required=True)
    r.add_argument("--steps", type=int, default=4)
    r.set_defaults(run=_search)
    return ap


def main(argv: Optional[Iterable[str]] = None) -> int:
    args = parser().parse_args(list(argv) if argv is not None else None)
    sink = open(args.report, "w", encoding="utf-8") if args.report else None
    rep = Report(args.json, sys.stdout, sink)
    try:
        args.run(args, rep)
    except (ParseError, ValueError, OSError) as err:
        print(f"mes: error: {err}", file=sys.stderr)
        rep.record(args.command, False, str(err))
        return 2
    finally:
        if sink is not None:
            sink.close()
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
