"""The free strong monad on a signature: unit, map, multiplication, strength."""

from __future__ import annotations

from typing import Callable, Hashable, Mapping, Optional, Union

from .finset import FinFun, FinSet, act, pair_label
from .syntax import App, KleisliMap, Term, Var


def unit(A: FinSet, a: str) -> Var:
    if a not in A:
        raise ValueError(f"{a!r} is not in the arity {A}")
    return Var(a)


def relabel(t: Term, fn: Callable[[Hashable], Hashable]) -> Term:
    memo: dict[Term, Term] = {}

    def go(s: Term) -> Term:
        hit = memo.get(s)
        if hit is None:
            hit = Var(fn(s.name)) if type(s) is Var else App(s.op, tuple(go(a) for a in s.args))
            memo[s] = hit
        return hit

    return go(t)


def map_term(f: Union[FinFun, Callable[[Hashable], Hashable]], t: Term) -> Term:
    """T(f): rename every variable along f, keeping the tree shape."""
    return relabel(t, f)


def substitute(
    t: Term,
    sigma: Union[Mapping, Callable[[Hashable], Term]],
    memo: Optional[dict] = None,
    pool: Optional[dict] = None,
) -> Term:
    """t{σ}; pass the same ``memo`` to share work across calls with one σ.

    With a ``pool``, every node built is hash-consed into it, so equal
    results from different calls are the same object.
    """
    get = sigma.__getitem__ if type(sigma) is dict or isinstance(sigma, Mapping) else sigma
    memo = {} if memo is None else memo

    def go(s: Term) -> Term:
        hit = memo.get(s)
        if hit is not None:
            return hit
        out = get(s.name) if type(s) is Var else App(s.op, tuple([go(a) for a in s.args]))
        if pool is not None:
            out = pool.setdefault(out, out)
        memo[s] = out
        return out

    return go(t)


def mu(tt: Term) -> Term:
    """Flatten a term whose variables are themselves terms."""
    return substitute(tt, lambda s: s)


def kleisli_compose(w1: KleisliMap, w2: KleisliMap, pool: Optional[dict] = None) -> KleisliMap:
    """w1{w2}: replace each variable b in w1 by w2(b); see :func:`substitute`
    for ``pool``."""
    if w1.arity != w2.coarity:
        raise ValueError(
            f"cannot compose: arity {w1.arity} of the first map "
            f"differs from coarity {w2.coarity} of the second"
        )
    table = dict(w2.items())
    memo: dict[Term, Term] = {}
    return KleisliMap(w1.coarity, w2.arity, tuple(substitute(t, table, memo, pool) for t in w1.body))


def pair_with(v: Hashable, a: Hashable) -> Hashable:
    # labels pair to labels; other payloads (e.g. terms inside TT) pair to tuples
    if isinstance(v, str) and isinstance(a, str):
        return pair_label(v, a)
    return (v, a)


def strength(V: FinSet, v: str, t: Term) -> Term:
    """φ_{V,A}(v, t): tag every variable a with v."""
    if v not in V:
        raise ValueError(f"{v!r} is not in {V}")
    return relabel(t, lambda a: pair_with(v, a))


def ext(V: FinSet, w: KleisliMap) -> KleisliMap:
    """V ⊙ w followed by the strength: V⊙C → T(V⊙A)."""
    coarity = act(V, w.coarity).carrier
    arity = act(V, w.arity).carrier
    body = {
        pair_label(v, c): strength(V, v, t) for v in V for c, t in w.items()
    }
    return KleisliMap.from_mapping(coarity, arity, body)


def kleisli_act(h: FinFun, f: KleisliMap) -> KleisliMap:
    """h ⊙_T f = φ ∘ (h ⊙ f): V⊙A → T(V'⊙A') on the Kleisli category."""
    V2 = h.cod
    coarity = act(h.dom, f.coarity).carrier
    arity = act(V2, f.arity).carrier
    body = {
        pair_label(v, a): strength(V2, h(v), t) for v in h.dom for a, t in f.items()
    }
    return KleisliMap.from_mapping(coarity, arity, body)


def identity_subst(A: FinSet) -> KleisliMap:
    return KleisliMap.identity(A)


def unique_extension(alg, f: FinFun, V: FinSet, v: str, t: Term) -> str:
    """f#(v, t): evaluate t in ``alg`` with each generator x sent to f(v, x)."""
    from .algebra import eval_term

    if f.cod != alg.carrier:
        raise ValueError("f must land in the algebra's carrier")
    if v not in V:
        raise ValueError(f"{v!r} is not in {V}")
    return eval_term(alg, lambda x: f(pair_label(v, x)), t)
