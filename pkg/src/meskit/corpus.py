"""Stock presentations and a generated corpus of checked proofs."""

from __future__ import annotations

import random
from typing import Optional

from .eml import Axiom, Comp, Ext, Local, Local1, Proof, Ref, Sym, Trans
from .finset import UNIT, UNIT_POINT, FinFun, FinSet, coproduct
from .parse import parse_presentation
from .rewrite import chain, rewrite_steps
from .syntax import App, KleisliMap, Presentation, Term, Var, terms_up_to

SEMILATTICE = """\
name semilattice
sig meet/2
ax assoc: forall x y z. meet(meet(x,y),z) = meet(x,meet(y,z))
ax comm: forall x y. meet(x,y) = meet(y,x)
ax idem: forall x. meet(x,x) = x
"""

MONOID = """\
name monoid
sig e/0
sig mul/2
ax assoc: forall x y z. mul(mul(x,y),z) = mul(x,mul(y,z))
ax left_unit: forall x. mul(e,x) = x
ax right_unit: forall x. mul(x,e) = x
"""


def semilattice() -> Presentation:
    return parse_presentation(SEMILATTICE)


def monoid() -> Presentation:
    return parse_presentation(MONOID)


def _random_term(rng: random.Random, p: Presentation, A: FinSet, d: int) -> Term:
    pool = terms_up_to(p.signature, A, d)
    return rng.choice(pool)


def random_walk(
    p: Presentation, t: Term, A: FinSet, steps: int, rng: random.Random, coprod: bool = False
) -> tuple[Term, Optional[Proof]]:
    """A Trans chain of ``steps`` random rewrites starting at t."""
    proofs = []
    for _ in range(steps):
        options = list(rewrite_steps(p, t, A, coprod=coprod))
        if not options:
            break
        t, proof = rng.choice(options)
        proofs.append(proof)
    return t, (chain(proofs) if proofs else None)


def generate_corpus(p: Presentation, n: int = 24, seed: int = 0) -> list[tuple[str, Proof]]:
    """At least n proofs touching every rule, primitive and derived."""
    rng = random.Random(seed)
    A = FinSet.of("a", "b", "c")
    out: list[tuple[str, Proof]] = []
    for eq in p.axioms:
        out.append((f"axiom-{eq.name}", Axiom(eq.name)))
        out.append((f"sym-{eq.name}", Sym(Axiom(eq.name))))
        out.append((f"ext-{eq.name}", Ext(FinSet.of("0", "1"), Axiom(eq.name))))
    first = p.axioms[0]
    out.append(("ref", Ref(KleisliMap.single(_random_term(rng, p, A, 2), A))))
    # an instance of a two-coarity equation reassembled from its halves
    left, right = first.lhs(UNIT_POINT), first.rhs(UNIT_POINT)
    C = FinSet.of("p", "q")
    u = KleisliMap.from_mapping(C, first.arity, {"p": left, "q": right})
    v = KleisliMap.from_mapping(C, first.arity, {"p": right, "q": left})
    e_p = FinFun.from_mapping(UNIT, C, {UNIT_POINT: "p"})
    e_q = FinFun.from_mapping(UNIT, C, {UNIT_POINT: "q"})
    out.append(("local-pair", Local(u, v, (e_p, e_q), (Axiom(first.name), Sym(Axiom(first.name))))))
    # Local1 along a surjection C → 1, premise obtained by precomposition
    e = FinFun.from_mapping(C, UNIT, {"p": UNIT_POINT, "q": UNIT_POINT})
    pre = Comp(Ref(KleisliMap.from_fun(e)), Axiom(first.name))
    out.append(("local1", Local1(first.lhs, first.rhs, e, pre)))
    out.append(("local1-identity", Local1(first.lhs, first.rhs, FinFun.identity(UNIT), Axiom(first.name))))
    i = 0
    while len(out) < n or i < 8:
        coprod = i % 3 == 2
        start = _random_term(rng, p, A, 2)
        end, proof = random_walk(p, start, A, 1 + i % 3, rng, coprod=coprod)
        i += 1
        if proof is None:
            continue
        tag = "walk-coprod" if coprod else "walk"
        out.append((f"{tag}-{i}", proof))
        if i % 4 == 0:
            out.append((f"ext-{tag}-{i}", Ext(FinSet.of("0", "1"), proof)))
    return out
