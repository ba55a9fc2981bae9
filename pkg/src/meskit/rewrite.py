"""Single rewrite steps as proofs, and a bounded breadth-first prover.

A step replaces one subterm by an axiom instance.  Its proof substitutes
into the axiom with Comp and plugs the result into the surrounding context
with Comp over a Local that keeps every other variable fixed.  The search
is a demo utility: it explores a bounded neighbourhood and promises nothing
when it gives up.
"""

from __future__ import annotations

from collections import deque
from typing import Iterator, Optional

from .eml import Axiom, Comp, CompCoprod, Local, Proof, Ref, Sym, Trans
from .finset import UNIT, UNIT_POINT, FinFun, FinSet, coproduct, pair_label
from .monad import relabel
from .syntax import App, Equation, KleisliMap, Presentation, Term, Var, subterms, variables

HOLE = "□"


def match(pattern: Term, t: Term, sigma: Optional[dict] = None) -> Optional[dict]:
    """Syntactic matching: σ with pattern{σ} = t, or None."""
    sigma = dict(sigma or {})
    stack = [(pattern, t)]
    while stack:
        pat, s = stack.pop()
        if isinstance(pat, Var):
            bound = sigma.get(pat.name)
            if bound is None:
                sigma[pat.name] = s
            elif bound != s:
                return None
        elif isinstance(s, App) and s.op == pat.op and len(s.args) == len(pat.args):
            stack.extend(zip(pat.args, s.args))
        else:
            return None
    return sigma


def subterm_at(t: Term, path: tuple[int, ...]) -> Term:
    for i in path:
        t = t.args[i]
    return t


def replace_at(t: Term, path: tuple[int, ...], new: Term) -> Term:
    if not path:
        return new
    i = path[0]
    args = list(t.args)
    args[i] = replace_at(args[i], path[1:], new)
    return App(t.op, tuple(args))


def _hole_name(A: FinSet) -> str:
    name = HOLE
    while name in A:
        name += "'"
    return name


def instance_proof(eq: Equation, sigma: dict, A: FinSet, flip: bool) -> Proof:
    """Proof of l{σ} ≐ r{σ} (or its reverse) at arity A."""
    sub = KleisliMap.from_mapping(eq.arity, A, sigma)
    step: Proof = Comp(Axiom(eq.name), Ref(sub))
    return Sym(step) if flip else step


def in_context(
    t: Term, path: tuple[int, ...], proof: Proof, new: Term, A: FinSet, coprod: bool = False
) -> tuple[Term, Proof]:
    """Lift a proof of t|path ≐ new to t ≐ t[path := new].

    With ``coprod`` the lift uses Comp over a coproduct of arities instead of
    Comp with an explicit Local.
    """
    result = replace_at(t, path, new)
    if not path:
        return result, proof
    hole = _hole_name(A)
    context = replace_at(t, path, Var(hole))
    if coprod:
        carrier, (inj_hole, inj_rest) = coproduct(UNIT, A)
        tag = {hole: inj_hole(UNIT_POINT)}
        tag.update({a: inj_rest(a) for a in A})
        ctx = KleisliMap.single(relabel(context, tag.__getitem__), carrier)
        return result, CompCoprod(Ref(ctx), (proof, Ref(KleisliMap.identity(A))))
    B = FinSet(list(A) + [hole])
    ctx = KleisliMap.single(context, B)
    old = subterm_at(t, path)
    keep = {a: Var(a) for a in A}
    u = KleisliMap.from_mapping(B, A, {**keep, hole: old})
    v = KleisliMap.from_mapping(B, A, {**keep, hole: new})
    e_hole = FinFun.from_mapping(UNIT, B, {UNIT_POINT: hole})
    e_rest = FinFun.from_callable(A, B, lambda a: a)
    local = Local(u, v, (e_hole, e_rest), (proof, Ref(KleisliMap.identity(A))))
    return result, Comp(Ref(ctx), local)


def rewrite_steps(p: Presentation, t: Term, A: FinSet, coprod: bool = False) -> Iterator[tuple[Term, Proof]]:
    """Every one-step rewrite of t by a single-term axiom in either direction."""
    for path, s in subterms(t):
        for eq in p.axioms:
            if eq.coarity != UNIT:
                continue
            l, r = eq.lhs(UNIT_POINT), eq.rhs(UNIT_POINT)
            for pattern, target, flip in ((l, r, False), (r, l, True)):
                free = set(eq.arity)
                if not free <= variables(pattern):
                    continue
                sigma = match(pattern, s)
                if sigma is None:
                    continue
                sigma = {a: sigma[a] for a in eq.arity}
                new = _apply(target, sigma)
                if new == s:
                    continue
                step = instance_proof(eq, sigma, A, flip)
                yield in_context(t, path, step, new, A, coprod)


def _apply(t: Term, sigma: dict) -> Term:
    if isinstance(t, Var):
        return sigma[t.name]
    return App(t.op, tuple(_apply(a, sigma) for a in t.args))


def chain(proofs: list[Proof]) -> Proof:
    out = proofs[0]
    for q in proofs[1:]:
        out = Trans(out, q)
    return out


def search(
    p: Presentation, lhs: Term, rhs: Term, A: FinSet, max_steps: int = 4, max_terms: int = 20000
) -> Optional[Proof]:
    """Breadth-first over rewrite sequences from lhs; None when the bound is hit."""
    if lhs == rhs:
        return Ref(KleisliMap.single(lhs, A))
    seen = {lhs: None}
    queue = deque([(lhs, 0)])
    back: dict[Term, tuple[Term, Proof]] = {}
    while queue:
        t, d = queue.popleft()
        if d >= max_steps:
            continue
        for new, proof in rewrite_steps(p, t, A):
            if new in seen:
                continue
            seen[new] = t
            back[new] = (t, proof)
            if new == rhs:
                steps = []
                cur = new
                while cur != lhs:
                    prev, pr = back[cur]
                    steps.append(pr)
                    cur = prev
                return chain(list(reversed(steps)))
            if len(seen) >= max_terms:
                return None
            queue.append((new, d + 1))
    return None
