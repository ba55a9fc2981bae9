"""Law suites: every invariant as a function returning a :class:`LawResult`.

The CLI ``selfcheck`` runs them at a chosen size; the tests call them with
the bounds they need.
"""

from __future__ import annotations

import functools
import gc
import itertools
import os
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

from . import clone as K
from .algebra import (
    FiniteAlgebra,
    enumerate_algebras,
    enumerate_models,
    eval_term,
    interpret,
    is_homomorphism,
    satisfies,
)
from .finset import (
    UNIT,
    UNIT_POINT,
    FinFun,
    FinSet,
    act,
    act_map,
    assoc_iso,
    ev_left,
    ev_right,
    functions,
    lhom,
    pair_label,
    rhom,
    right_unit_iso,
    swap,
    transpose_left,
    transpose_right,
    unit_iso,
    untranspose_left,
    untranspose_right,
)
from .monad import ext, kleisli_act, kleisli_compose, map_term, mu, relabel, strength, unit
from .syntax import App, Equation, KleisliMap, Presentation, Signature, Term, Var, terms_up_to, variables


@dataclass(frozen=True)
class LawResult:
    module: str
    name: str
    passed: bool
    checked: int
    detail: str = ""

    def line(self) -> str:
        mark = "pass" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"[{mark}] {self.module}: {self.name}: {self.checked} cases{extra}"

    def record(self) -> dict:
        return {
            "module": self.module,
            "check": self.name,
            "status": "pass" if self.passed else "fail",
            "cases": self.checked,
            "witness": None if self.passed else self.detail,
        }


class _Tally:
    def __init__(self, module: str, name: str):
        self.module, self.name = module, name
        self.count = 0
        self.failure: Optional[str] = None

    def check(self, ok: bool, why: Callable[[], str]) -> None:
        self.count += 1
        if not ok and self.failure is None:
            self.failure = why()

    def bulk(self, n: int, ok: bool, why: Callable[[], str]) -> None:
        """Record n cases decided together."""
        self.count += n - 1
        self.check(ok, why)

    def result(self, note: str = "") -> LawResult:
        if self.failure is not None:
            return LawResult(self.module, self.name, False, self.count, self.failure)
        return LawResult(self.module, self.name, True, self.count, note)


def _gc_paused(fn):
    """Terms are acyclic, so the cycle collector only slows the big suites."""

    @functools.wraps(fn)
    def run(*args, **kwargs):
        was = gc.isenabled()
        gc.disable()
        try:
            return fn(*args, **kwargs)
        finally:
            if was:
                gc.enable()

    return run


def seed() -> int:
    return int(os.environ.get("MES_SEED", "0"))


def sets_up_to(n: int, prefix: str = "") -> list[FinSet]:
    return [FinSet(f"{prefix}{i}" for i in range(k)) for k in range(n + 1)]


MEET = Signature([("meet", 2)])
RICH = Signature([("e", 0), ("g", 1), ("f", 2)])


# -- finset-action -----------------------------------------------------------


def action_coherence(max_size: int = 2) -> list[LawResult]:
    """The two unit triangles and the associativity pentagon, elementwise."""
    sets = sets_up_to(max_size, "s")
    left = _Tally("finset", "action unit triangle (I⊗V)⊙C")
    right = _Tally("finset", "action unit triangle (V⊗I)⊙C")
    pent = _Tally("finset", "action associativity diagram")
    for V, C in itertools.product(sets, repeat=2):
        a = assoc_iso(UNIT, V, C)
        lam = unit_iso(act(V, C).carrier)
        lam_v = act_map(unit_iso(V), FinFun.identity(C))
        for x in a.dom:
            left.check(lam(a(x)) == lam_v(x), lambda: f"{x}")
        a2 = assoc_iso(V, UNIT, C)
        v_lam = act_map(FinFun.identity(V), unit_iso(C))
        rho_c = act_map(right_unit_iso(V), FinFun.identity(C))
        for x in a2.dom:
            right.check(v_lam(a2(x)) == rho_c(x), lambda: f"{x}")
    for U, V, W, C in itertools.product(sets, repeat=4):
        UV = act(U, V).carrier
        VW = act(V, W).carrier
        top1 = act_map(assoc_iso(U, V, W), FinFun.identity(C))
        top2 = assoc_iso(U, VW, C)
        top3 = act_map(FinFun.identity(U), assoc_iso(V, W, C))
        down = assoc_iso(UV, W, C)
        bottom = assoc_iso(U, V, act(W, C).carrier)
        for x in top1.dom:
            pent.check(top3(top2(top1(x))) == bottom(down(x)), lambda: f"{x}")
    return [left.result(), right.result(), pent.result()]


def adjunction_round_trips(max_size: int = 2) -> LawResult:
    t = _Tally("finset", "transpose round trips")
    sets = sets_up_to(max_size, "s")
    for V, C, D in itertools.product(sets, repeat=3):
        P = act(V, C).carrier
        for f in functions(P, D):
            g = transpose_right(f, V, C)
            t.check(untranspose_right(g, C, D) == f, lambda: f"right: {f.label}")
            h = transpose_left(f, V, C)
            t.check(untranspose_left(h, V, D) == f, lambda: f"left: {f.label}")
    return t.result()


def triangle_identities(max_size: int = 2) -> LawResult:
    t = _Tally("finset", "transpose of ev_left∘swap is the identity")
    for V, X in itertools.product(sets_up_to(max_size, "s"), repeat=2):
        L = lhom(V, X)
        f = ev_left(V, X)
        # transpose_left expects V⊙C; ev_left is already on V⊙[V,X]
        t.check(transpose_left(f, V, L) == FinFun.identity(L), lambda: f"V={V}, X={X}")
        g = swap(L, V).then(f) if L else None
        if g is not None:
            t.check(g.dom == act(L, V).carrier, lambda: "swap domain")
        e = ev_right(V, X)
        t.check(
            transpose_right(swap(V, rhom(V, X)).then(e), V, rhom(V, X)).cod == rhom(rhom(V, X), X),
            lambda: "ev_right transpose codomain",
        )
    return t.result()


def cardinalities(max_size: int = 3) -> LawResult:
    t = _Tally("finset", "|rhom|, |lhom|, |act| formulas")
    for C, D in itertools.product(sets_up_to(max_size, "s"), repeat=2):
        t.check(len(rhom(C, D)) == len(D) ** len(C), lambda: f"rhom {C} {D}")
        t.check(len(lhom(C, D)) == len(D) ** len(C), lambda: f"lhom {C} {D}")
        t.check(len(act(C, D)) == len(C) * len(D), lambda: f"act {C} {D}")
    return t.result()


# -- term monad --------------------------------------------------------------


@_gc_paused
def strength_coherence(max_size: int = 2, depth: int = 2, sig: Signature = MEET) -> list[LawResult]:
    """The four strength diagrams of T, elementwise."""
    sets = sets_up_to(max_size, "v")
    vsets = [FinSet(f"u{i}" for i in range(k)) for k in range(max_size + 1)]
    csets = sets_up_to(max_size, "c")
    d1 = _Tally("term-monad", "strength unit-iso diagram")
    d2 = _Tally("term-monad", "strength associativity diagram")
    d3 = _Tally("term-monad", "strength vs unit")
    d4 = _Tally("term-monad", "strength vs multiplication")
    for C in csets:
        terms = terms_up_to(sig, C, depth)
        lam = unit_iso(C)
        for t in terms:
            d1.check(map_term(lam, strength(UNIT, UNIT_POINT, t)) == t, lambda: f"t={t}")
        for U, V in itertools.product(vsets, sets):
            alpha = assoc_iso(U, V, C)
            for u, v in itertools.product(U, V):
                for t in terms:
                    lhs = strength(U, u, strength(V, v, t))
                    rhs = map_term(alpha, strength(act(U, V).carrier, pair_label(u, v), t))
                    d2.check(lhs == rhs, lambda: f"u={u}, v={v}, t={t}")
        for V in sets:
            for v, c in itertools.product(V, C):
                d3.check(
                    strength(V, v, unit(C, c)) == unit(act(V, C).carrier, pair_label(v, c)),
                    lambda: f"v={v}, c={c}",
                )
        inner = terms
        pairs = list(itertools.combinations(inner, 2)) or [(x,) for x in inner]
        # elements of V⊙TTC: outer terms over every pair of inner terms
        names = FinSet.of("0", "1")
        outer = terms_up_to(sig, names, depth)
        for V in sets:
            tagged = {(v, s): strength(V, v, s) for v in V for s in inner}
            for chosen in pairs:
                sub = dict(zip(names, chosen))
                for o in outer:
                    if not set(variables(o)) <= set(sub):
                        continue
                    tt = relabel(o, sub.__getitem__)
                    flat = mu(tt)
                    for v in V:
                        lhs = strength(V, v, flat)
                        rhs = mu(relabel(tt, lambda s, v=v: tagged[(v, s)]))
                        d4.check(lhs == rhs, lambda: f"v={v}, tt={o} over {chosen}")
    return [d1.result(), d2.result(), d3.result(), d4.result()]


def _maps_into(B: FinSet, pool: list[Term], A: FinSet) -> Iterator[KleisliMap]:
    for body in itertools.product(pool, repeat=len(B)):
        yield KleisliMap(B, A, tuple(body))


def _covering_family(B: FinSet, A: FinSet) -> list[KleisliMap]:
    """A few substitutions B → TA: identity-like, collapsing, deepening, mixing."""
    if not A:
        return []
    a = list(A)
    fam = [
        KleisliMap(B, A, tuple(Var(a[i % len(a)]) for i in range(len(B)))),
        KleisliMap(B, A, tuple(Var(a[(i + 1) % len(a)]) for i in range(len(B)))),
        KleisliMap(B, A, tuple(Var(a[0]) for _ in B)),
        KleisliMap(
            B, A, tuple(App("meet", (Var(a[i % len(a)]), Var(a[(i + 1) % len(a)]))) for i in range(len(B)))
        ),
        KleisliMap(
            B,
            A,
            tuple(
                App("meet", (App("meet", (Var(a[-1]), Var(a[i % len(a)]))), Var(a[0])))
                if i % 2 == 0
                else Var(a[i % len(a)])
                for i in range(len(B))
            ),
        ),
    ]
    return fam


@_gc_paused
def monad_laws(max_size: int = 3, depth: int = 3, random_triples: int = 300) -> list[LawResult]:
    """Unit and associativity laws of Kleisli composition over meet/2."""
    right_u = _Tally("term-monad", "right unit w{η} = w")
    left_u = _Tally("term-monad", "left unit η{w} = w")
    assoc = _Tally("term-monad", "associativity (w1{w2}){w3} = w1{w2{w3}}")
    sets = [FinSet(f"x{i}" for i in range(k)) for k in range(1, max_size + 1)]
    terms = {A: terms_up_to(MEET, A, depth) for A in sets}
    everything = {
        B: KleisliMap(FinSet(f"t{i:06d}" for i in range(len(terms[B]))), B, tuple(terms[B])) for B in sets
    }
    for A in sets:
        got = kleisli_compose(everything[A], KleisliMap.identity(A)).body
        bad = next((t for t, u in zip(terms[A], got) if t != u), None)
        right_u.bulk(len(got), bad is None, lambda: f"t={bad}")
    for B in sets:
        for A in sets:
            filler = Var(A.elements[0])
            for b in B:
                for t in terms[A]:
                    body = tuple(t if x == b else filler for x in B)
                    w = KleisliMap(B, A, body)
                    composed = kleisli_compose(KleisliMap.single(unit(B, b), B), w)
                    left_u.check(composed.body[0] == t, lambda: f"b={b}, t={t}")
    # associativity: w1 runs over every term at once, as one map out of a
    # coarity of that size, against a covering family of w2, w3.  Below the largest arity every pair from the family is used; at
    # it, each member meets one partner, to keep the suite within budget.
    for B, C in itertools.product(sets, repeat=2):
        W1 = everything[B]
        f2 = _covering_family(B, C)
        pool: dict = {}  # shared so equal sides are one object and compare by identity
        lefts = [kleisli_compose(W1, w2, pool) for w2 in f2]
        for A in sets:
            f3 = _covering_family(C, A)
            if len(B) == max_size and len(terms[B]) > 5000:
                pairs = [(i, f3[(i + 1) % len(f3)]) for i in range(len(f2))]
            else:
                pairs = list(itertools.product(range(len(f2)), f3))
            for i, w3 in pairs:
                w2 = f2[i]
                lhs = kleisli_compose(lefts[i], w3, pool)
                rhs = kleisli_compose(W1, kleisli_compose(w2, w3, pool), pool)
                bad = next((j for j, (x, y) in enumerate(zip(lhs.body, rhs.body)) if x != y), None)
                assoc.bulk(len(W1.body), bad is None, lambda: f"t={W1.body[bad]}, w2={w2}, w3={w3}")
    # and every pair of depth ≤ 1 substitutions against shallow outer terms
    small = [s for s in sets if len(s) <= 2]
    for B, C, A in itertools.product(small, repeat=3):
        pool_c = terms_up_to(MEET, C, 1)
        pool_a = terms_up_to(MEET, A, 1)
        outer = terms_up_to(MEET, B, 1)
        for w2 in _maps_into(B, pool_c, C):
            for w3 in _maps_into(C, pool_a, A):
                w23 = kleisli_compose(w2, w3)
                for t in outer:
                    w1 = KleisliMap.single(t, B)
                    lhs = kleisli_compose(kleisli_compose(w1, w2), w3)
                    rhs = kleisli_compose(w1, w23)
                    assoc.check(lhs == rhs, lambda: f"t={t}, w2={w2}, w3={w3}")
    rng = random.Random(seed())
    for _ in range(random_triples):
        B, C, A = (rng.choice(sets) for _ in range(3))
        w1 = KleisliMap.single(rng.choice(terms[B]), B)
        w2 = KleisliMap(B, C, tuple(rng.choice(terms[C]) for _ in B))
        w3 = KleisliMap(C, A, tuple(rng.choice(terms[A]) for _ in C))
        lhs = kleisli_compose(kleisli_compose(w1, w2), w3)
        rhs = kleisli_compose(w1, kleisli_compose(w2, w3))
        assoc.check(lhs == rhs, lambda: f"random triple {w1}, {w2}, {w3}")
    return [right_u.result(), left_u.result(), assoc.result()]


def kleisli_action_laws(max_size: int = 2) -> list[LawResult]:
    """h ⊙_T f = φ∘(h⊙f) preserves identities and composites in both arguments."""
    ident = _Tally("term-monad", "Kleisli action preserves identities")
    comp = _Tally("term-monad", "Kleisli action preserves composites")
    vsets = [FinSet(f"v{i}" for i in range(k)) for k in range(1, max_size + 1)]
    asets = [FinSet(f"a{i}" for i in range(k)) for k in range(1, max_size + 1)]
    for V, A in itertools.product(vsets, asets):
        got = kleisli_act(FinFun.identity(V), KleisliMap.identity(A))
        ident.check(got == KleisliMap.identity(act(V, A).carrier), lambda: f"V={V}, A={A}")
    for V1, V2, V3 in itertools.product(vsets, repeat=3):
        hs = list(functions(V1, V2))
        ks = list(functions(V2, V3))
        for A1, A2, A3 in itertools.product(asets, repeat=3):
            fs = _covering_family(A1, A2)
            gs = _covering_family(A2, A3)
            for h, k in itertools.product(hs, ks):
                hk = h.then(k)
                for f, g in itertools.product(fs, gs):
                    lhs = kleisli_act(hk, kleisli_compose(f, g))
                    rhs = kleisli_compose(kleisli_act(h, f), kleisli_act(k, g))
                    comp.check(lhs == rhs, lambda: f"h={h.label}, k={k.label}, f={f}, g={g}")
    return [ident.result(), comp.result()]


def ext_laws(max_size: int = 2) -> list[LawResult]:
    dist = _Tally("term-monad", "ext distributes over Kleisli composition")
    idl = _Tally("term-monad", "ext of the identity substitution")
    vsets = [FinSet(f"v{i}" for i in range(k)) for k in range(max_size + 1)]
    asets = [FinSet(f"a{i}" for i in range(k)) for k in range(1, max_size + 1)]
    for V in vsets:
        for A in asets:
            idl.check(ext(V, KleisliMap.identity(A)) == KleisliMap.identity(act(V, A).carrier), lambda: f"{V} {A}")
        for A1, A2, A3 in itertools.product(asets, repeat=3):
            for w1 in _covering_family(A1, A2):
                for w2 in _covering_family(A2, A3):
                    lhs = ext(V, kleisli_compose(w1, w2))
                    rhs = kleisli_compose(ext(V, w1), ext(V, w2))
                    dist.check(lhs == rhs, lambda: f"V={V}, w1={w1}, w2={w2}")
    return [dist.result(), idl.result()]


# -- clone monad -------------------------------------------------------------


def _xs(max_size: int) -> list[FinSet]:
    return [FinSet.range(n) for n in range(1, max_size + 1)]


def mult_coincidence(
    X: FinSet, A: FinSet, exhaustive_limit: int = 1 << 16, samples: int = 64
) -> LawResult:
    """clone_mult = dd_mult as maps on codes of K_X K_X A.

    Every element is compared when there are at most ``exhaustive_limit``;
    otherwise both routes are run on the generic probe, which settles the
    comparison for all elements at once, and on seeded random elements.
    """
    t = _Tally("clone", f"clone_mult = dd_mult at |X|={len(X)}, |A|={len(A)}")
    KA = K.DDCarrier.of(X, A)
    KK = K.kk_carrier(KA)
    clone_m, dd_m = K.clone_mult(X, A), K.dd_mult(X, A)
    if KK.size <= exhaustive_limit:
        for G in KK.codes():
            t.check(clone_m(G) == dd_m(G), lambda: f"G={G}")
        return t.result("exhaustive")
    probe = K.Probe(KK)
    a = KA.code(K.clone_mult_fn(probe))
    b = KA.code(K.dd_mult_fn(probe))
    t.check(a == b, lambda: "routes read the probe at different environments")
    t.check(probe.calls == 2 * KA.env_count, lambda: f"probe read {probe.calls} times")
    rng = random.Random(seed())
    for _ in range(samples):
        G = tuple(rng.choice(X.elements) for _ in range(KK.env_count))
        t.check(clone_m(G) == dd_m(G), lambda: "random element")
    return t.result(f"probe + {samples} samples of {KK.size.bit_length() - 1}-bit space")


def unit_coincidence(max_size: int = 2) -> LawResult:
    t = _Tally("clone", "clone unit = double-dualization unit")
    for X in _xs(max_size):
        for A in sets_up_to(max_size, "a"):
            t.check(K.clone_unit(X, A) == K.dd_unit(X, A), lambda: f"X={X}, A={A}")
    return t.result()


def dd_monad_laws(max_size: int = 2) -> list[LawResult]:
    lu = _Tally("clone", "μ∘η_K = id")
    ru = _Tally("clone", "μ∘K(η) = id")
    asc = _Tally("clone", "μ∘K(μ) = μ∘μ_K")
    inj = _Tally("clone", "dd_unit injective for |X| ≥ 2")
    for X in _xs(max_size):
        for A in sets_up_to(max_size, "a"):
            KA = K.DDCarrier.of(X, A)
            KK = K.kk_carrier(KA)
            units = [K.dd_unit_code(KA, a) for a in A]
            if len(X) >= 2:
                inj.check(len(set(units)) == len(units), lambda: f"X={X}, A={A}")
            for F in KA.codes():
                Ff = KA.functional(F)
                lu.check(KA.code(K.dd_mult_fn(K.dd_unit_fn(Ff))) == F, lambda: f"F={F}")
                ru.check(KA.code(K.dd_mult_fn(K.k_map(K.dd_unit_fn)(Ff))) == F, lambda: f"F={F}")
            # K_X K_X K_X A is never enumerable here.  H reads its environment
            # ρ''' only by applying it, so recording ρ''' at a generic element of
            # K_X K_X A decides the law for every H at once.
            G = K.Probe(KK, name="G")
            H = lambda rho3: ("probe", "H", rho3(G))
            lhs = KA.code(K.dd_mult_fn(K.k_map(K.dd_mult_fn)(H)))
            rhs = KA.code(K.dd_mult_fn(K.dd_mult_fn(H)))
            asc.check(lhs == rhs, lambda: f"X={X}, A={A}")
    return [lu.result(), ru.result(), asc.result(), inj.result()]


def clone_strength_coherence(max_size: int = 2) -> list[LawResult]:
    d1 = _Tally("clone", "κ unit-iso diagram")
    d2 = _Tally("clone", "κ associativity diagram")
    d3 = _Tally("clone", "κ vs unit")
    d4 = _Tally("clone", "κ vs multiplication")
    vsets = [FinSet(f"v{i}" for i in range(k)) for k in range(1, max_size + 1)]
    usets = [FinSet(f"u{i}" for i in range(k)) for k in range(1, max_size + 1)]
    for X in _xs(max_size):
        for A in sets_up_to(max_size, "a"):
            KA = K.DDCarrier.of(X, A)
            codes = list(KA.codes())
            K1 = K.DDCarrier.of(X, act(UNIT, A).carrier)
            lam = unit_iso(A)
            for F in codes:
                Ff = KA.functional(F)
                got = KA.code(K.k_map(lam)(K.clone_strength_fn(UNIT_POINT, Ff)))
                d1.check(got == F, lambda: f"X={X}, A={A}, F={F}")
            for U, V in itertools.product(usets, vsets):
                alpha = assoc_iso(U, V, A)
                UVA = act(U, act(V, A).carrier).carrier
                KU = K.DDCarrier.of(X, UVA)
                for u, v in itertools.product(U, V):
                    for F in codes:
                        Ff = KA.functional(F)
                        lhs = KU.code(K.clone_strength_fn(u, K.clone_strength_fn(v, Ff)))
                        rhs = KU.code(K.k_map(alpha)(K.clone_strength_fn(pair_label(u, v), Ff)))
                        d2.check(lhs == rhs, lambda: f"u={u}, v={v}, F={F}")
            for V in vsets:
                KV = K.DDCarrier.of(X, act(V, A).carrier)
                for v, a in itertools.product(V, A):
                    lhs = KV.code(K.clone_strength_fn(v, K.dd_unit_fn(a)))
                    rhs = KV.code(K.dd_unit_fn(pair_label(v, a)))
                    d3.check(lhs == rhs, lambda: f"v={v}, a={a}")
                KK = K.kk_carrier(KA)
                if KK.size <= 1 << 16:
                    elements = [KK.functional(G) for G in KK.codes()]
                    how = "exhaustive"
                else:
                    elements = [K.Probe(KK)]
                    how = "probe"
                for G in elements:
                    for v in V:
                        lhs = KV.code(K.clone_strength_fn(v, K.dd_mult_fn(G)))
                        rhs = KV.code(
                            K.dd_mult_fn(K.k_map(K._kappa_pair)(K.clone_strength_fn(v, G)))
                        )
                        d4.check(lhs == rhs, lambda: f"v={v} ({how})")
    return [d1.result(), d2.result(), d3.result(), d4.result()]


def semantics_morphism_laws(max_size: int = 2, depth: int = 2) -> list[LawResult]:
    """ω(s) is a strong monad morphism T → K_X, and agrees with ι(s) transposed."""
    ut = _Tally("clone", "ω unit triangle")
    ms = _Tally("clone", "ω multiplication square")
    ss = _Tally("clone", "ω strength square")
    it = _Tally("clone", "ω agrees with the transposed interpretation map")
    nat = _Tally("clone", "ω tables are natural")
    for alg in enumerate_algebras(MEET, max_size):
        X = alg.carrier
        for A in sets_up_to(2, "a"):
            KA = K.DDCarrier.of(X, A)
            terms = terms_up_to(MEET, A, depth)
            for a in A:
                ut.check(K.semantics_transform(alg, A, Var(a)) == K.dd_unit_code(KA, a), lambda: f"a={a}")
            for t in terms:
                it.check(
                    K.semantics_transform(alg, A, t) == K.interpretation_transpose(alg, A, t),
                    lambda: f"t={t}",
                )
            V = FinSet.of("p", "q")
            KV = K.DDCarrier.of(X, act(V, A).carrier)
            for t in terms:
                for v in V:
                    lhs = K.semantics_transform(alg, act(V, A).carrier, strength(V, v, t))
                    rhs = KV.code(K.clone_strength_fn(v, K.semantics_fn(alg, t)))
                    ss.check(lhs == rhs, lambda: f"t={t}, v={v}")
            inner = terms_up_to(MEET, A, 1)
            for pair in itertools.combinations(inner, 2):
                names = FinSet.of("0", "1")
                sub = dict(zip(names, pair))
                for o in terms_up_to(MEET, names, depth):
                    tt = relabel(o, sub.__getitem__)
                    lhs = K.semantics_transform(alg, A, mu(tt))
                    inner_fn = lambda s: K.semantics_fn(alg, s)
                    G = K.k_map(inner_fn)(K.semantics_fn(alg, tt))
                    rhs = KA.code(K.dd_mult_fn(G))
                    ms.check(lhs == rhs, lambda: f"tt={o} over {pair}")
        table = K.semantics_table(alg, [FinSet.of("a0"), FinSet.of("a0", "a1")], depth)
        nat.check(table.is_natural(), lambda: f"{alg}")
    return [ut.result(), ms.result(), ss.result(), it.result(), nat.result()]


def bijection_laws(size: int = 2, depth: int = 2) -> list[LawResult]:
    """α(ω(s)) = s for every table on a carrier of the given size, ω(α(τ)) = τ."""
    ao = _Tally("clone", f"α(ω(s)) = s for all tables at |X|={size}")
    oa = _Tally("clone", f"ω(α(τ)) = τ on recorded arities at |X|={size}")
    X = FinSet.range(size)
    for alg in enumerate_algebras(MEET, size):
        if len(alg.carrier) != size:
            continue
        arities = [X, FinSet.of("a0"), FinSet.of("a0", "a1")]
        tau = K.semantics_table(alg, arities, depth)
        back = K.algebra_of_morphism(tau)
        ao.check(back == alg, lambda: f"{alg}")
        again = K.semantics_table(back, arities, depth)
        same = all(again.components[A] == tau.components[A] for A in arities)
        oa.check(same, lambda: f"{alg}")
    return [ao.result(), oa.result()]


def dd_change_triangle(max_size: int = 2, depth: int = 2) -> list[LawResult]:
    """ω(s_k) = ω(k)∘ω(s) for the K_X-algebras k = [δ_V, X] on [V, X]."""
    tri = _Tally("clone", "ω(s_k) = ω(k)∘ω(s)")
    pw = _Tally("clone", "s_k for k = [δ_V,X] is the power algebra")
    for alg in enumerate_algebras(MEET, max_size):
        X = alg.carrier
        for V in sets_up_to(max_size, "v"):
            KY, k = K.power_dd_structure(X, V)
            Y = lhom(V, X)
            s_k = K.algebra_through(alg, Y, k)
            pw.check(s_k == K.power_algebra(alg, V), lambda: f"V={V}, {alg}")
            omega_k = K.morphism_of_dd_algebra(k)
            for A in sets_up_to(2, "a"):
                KYA = K.DDCarrier.of(Y, A)
                for t in terms_up_to(MEET, A, depth):
                    lhs = K.semantics_transform(s_k, A, t)
                    rhs = KYA.code(omega_k(K.semantics_fn(alg, t)))
                    tri.check(lhs == rhs, lambda: f"t={t}, V={V}")
    return [tri.result(), pw.result()]


# -- algebra -----------------------------------------------------------------


def substitution_lemma(max_size: int = 2, depth: int = 2) -> LawResult:
    t = _Tally("algebra", "eval(w1{w2}) = eval(w1, eval∘w2)")
    A = FinSet.of("a", "b")
    B = FinSet.of("x", "y")
    outer = terms_up_to(MEET, B, depth)
    fam = _covering_family(B, A)
    for alg in enumerate_algebras(MEET, max_size):
        for w2 in fam:
            for rho in itertools.product(alg.carrier.elements, repeat=len(A)):
                env = dict(zip(A, rho))
                inner = {b: eval_term(alg, env, w2(b)) for b in B}
                for o in outer:
                    lhs = eval_term(alg, env, kleisli_compose(KleisliMap.single(o, B), w2).body[0])
                    t.check(lhs == eval_term(alg, inner, o), lambda: f"{o} with {w2}")
    return t.result()


def closure_laws(p: Presentation, k: int = 3, power_k: int = 2) -> list[LawResult]:
    """Subalgebra (monomorphism) and power closure of satisfaction."""
    mono = _Tally("algebra", "injective homomorphisms reflect satisfaction")
    power = _Tally("algebra", "satisfaction is invariant under powers")
    algs = list(enumerate_algebras(p.signature, k))
    models = [a for a in algs if all(satisfies(a, e) for e in p.axioms)]
    # the domains stay at size ≤ 2: there are 3^9 binary tables on 3 points
    for dom in (a for a in algs if len(a.carrier) <= min(k, 2)):
        for cod in models:
            if len(dom.carrier) > len(cod.carrier):
                continue
            for h in functions(dom.carrier, cod.carrier):
                if h.is_injective() and is_homomorphism(h, dom, cod):
                    mono.check(all(satisfies(dom, e) for e in p.axioms), lambda: f"{dom} into {cod}")
    for alg in enumerate_algebras(p.signature, power_k):
        for V in sets_up_to(2, "v"):
            P = K.power_algebra(alg, V)
            for e in p.axioms:
                if V:
                    power.check(satisfies(alg, e) == satisfies(P, e), lambda: f"{e.name} at V={V}")
                else:
                    power.check(satisfies(P, e), lambda: "empty power")
    return [mono.result(), power.result()]


def naturality_transfer(max_size: int = 2, depth: int = 2) -> LawResult:
    """h ∘ ι(s) = ι(t) ∘ (C(A,h) ⊙ TA) for homomorphisms h."""
    t = _Tally("algebra", "homomorphisms commute with interpretation")
    algs = list(enumerate_algebras(MEET, max_size))
    A = FinSet.of("a", "b")
    terms = terms_up_to(MEET, A, depth)
    for s, r in itertools.product(algs, repeat=2):
        for h in functions(s.carrier, r.carrier):
            if not is_homomorphism(h, s, r):
                continue
            for rho in itertools.product(s.carrier.elements, repeat=len(A)):
                env = dict(zip(A, rho))
                pushed = {a: h(x) for a, x in env.items()}
                for term in terms:
                    t.check(
                        h(eval_term(s, env, term)) == eval_term(r, pushed, term),
                        lambda: f"h={h.label}, t={term}",
                    )
    return t.result()


def unique_extension_candidates(
    alg: FiniteAlgebra, f: FinFun, V: FinSet, X: FinSet, depth: int = 2, cap: int = 2
) -> list[dict]:
    """Every graph g on V × (terms over X up to ``depth``) with both cells of
    the extension diagram commuting, found by backtracking.

    The bottom cell asks g(v, x) = f(v, x); the top one asks
    g(v, op(t1..tn)) = op_Y(g(v, t1) .. g(v, tn)).  At most ``cap`` graphs
    are returned.
    """
    terms = sorted(terms_up_to(alg.signature, X, depth), key=lambda t: (_depth(t),))
    points = [(v, t) for t in terms for v in V]
    Y = alg.carrier.elements
    found: list[dict] = []
    g: dict = {}

    def ok(v, t, y) -> bool:
        if isinstance(t, Var):
            return y == f(pair_label(v, t.name))
        return y == alg.op(t.op, *(g[(v, a)] for a in t.args))

    def search(i: int) -> None:
        if len(found) >= cap:
            return
        if i == len(points):
            found.append(dict(g))
            return
        v, t = points[i]
        for y in Y:
            if ok(v, t, y):
                g[(v, t)] = y
                search(i + 1)
                del g[(v, t)]

    search(0)
    return found


def _depth(t: Term) -> int:
    from .syntax import depth

    return depth(t)


def unique_extension_law(
    alg: FiniteAlgebra, f: FinFun, V: FinSet, X: FinSet, depth: int = 2
) -> LawResult:
    from .monad import unique_extension

    t = _Tally("term-monad", "f# is the only graph making both cells commute")
    found = unique_extension_candidates(alg, f, V, X, depth)
    t.check(len(found) == 1, lambda: f"{len(found)} candidate graphs")
    if found:
        for (v, term), y in found[0].items():
            t.check(unique_extension(alg, f, V, v, term) == y, lambda: f"v={v}, t={term}")
    return t.result()


# -- eml ---------------------------------------------------------------------


def eml_suite(p: Presentation, k: int = 3, n: int = 24) -> list[LawResult]:
    from .corpus import generate_corpus
    from .eml import check, elaborate_derived, is_primitive, soundness_audit
    from .parse import format_proof, parse_proof

    checked = _Tally("eml", "generated corpus passes the checker")
    derived = _Tally("eml", "elaborating derived rules keeps the conclusion")
    sound = _Tally("eml", f"soundness audit over models of size ≤ {k}")
    trip = _Tally("eml", "proof text round trip")
    corpus = generate_corpus(p, n, seed())
    models = list(enumerate_models(p, k))
    for name, proof in corpus:
        j = check(p, proof)
        checked.check(True, lambda: name)
        flat = elaborate_derived(proof, p)
        derived.check(is_primitive(flat) and check(p, flat) == j, lambda: name)
        rep = soundness_audit(p, proof, k)
        sound.check(rep.sound, lambda: f"{name}: {rep.counterexamples[:1]}")
        back = parse_proof(format_proof(proof), p)
        trip.check(check(p, back) == j, lambda: name)
    return [checked.result(), derived.result(), sound.result(f"{len(models)} models"), trip.result()]


def parse_suite(p: Presentation) -> list[LawResult]:
    from .parse import format_equation, format_presentation, format_term, parse_equation, parse_presentation, parse_term

    t = _Tally("parse", "format/parse round trips")
    again = parse_presentation(format_presentation(p))
    t.check(format_presentation(again) == format_presentation(p), lambda: "presentation")
    for e in p.axioms:
        back = parse_equation(format_equation(e), p.signature, e.name)
        t.check(back.lhs == e.lhs and back.rhs == e.rhs, lambda: e.name)
    A = FinSet.of("x", "y")
    for term in terms_up_to(p.signature, A, 2):
        t.check(parse_term(format_term(term), p.signature, A) == term, lambda: f"{term}")
    return [t.result()]


# -- free algebras -----------------------------------------------------------


def free_cardinalities(p: Presentation, sizes: Iterable[int], expect: Callable[[int], int], d_max: int = 4) -> LawResult:
    from .freealg import Finite, build

    t = _Tally("free-alg", "free algebra class counts")
    for n in sizes:
        r = build(p, FinSet(f"g{i}" for i in range(n)), d_max)
        t.check(isinstance(r, Finite), lambda: f"n={n}: no stabilization by depth {d_max}")
        if isinstance(r, Finite):
            t.check(len(r.classes) == expect(n), lambda: f"n={n}: {len(r.classes)} classes, expected {expect(n)}")
    return t.result()


def quotient_laws(p: Presentation, max_gens: int = 2, depth: int = 3) -> list[LawResult]:
    from .freealg import Finite, build, quotient_map

    model = _Tally("free-alg", "the quotient is a model")
    square = _Tally("free-alg", "the quotient map is a homomorphism")
    table = _Tally("free-alg", "quotient map agrees with the congruence table")
    mono = _Tally("free-alg", "class counts never decrease with depth")
    for n in range(1, max_gens + 1):
        X = FinSet(f"g{i}" for i in range(n))
        r = build(p, X, 4)
        if not isinstance(r, Finite):
            continue
        model.check(all(satisfies(r.algebra, e) for e in p.axioms), lambda: f"n={n}")
        hist = r.table.history
        mono.check(all(a <= b for a, b in zip(hist, hist[1:])), lambda: f"history {hist}")
        terms = terms_up_to(p.signature, X, depth)
        for t in terms:
            q = quotient_map(r, t)
            if isinstance(t, App):
                parts = [quotient_map(r, a) for a in t.args]
                square.check(q == r.algebra.op(t.op, *parts), lambda: f"t={t}")
        shallow = {t: quotient_map(r, t) for t in terms if _depth(t) <= min(r.stable_depth + 1, 2)}
        for s, u in itertools.product(shallow, repeat=2):
            same = shallow[s] == shallow[u]
            table.check(same == r.table.same_class(s, u), lambda: f"{s} vs {u}")
    return [model.result(), square.result(), table.result(), mono.result()]


@_gc_paused
def factoring_law(p: Presentation, k: int = 3, depth: int = 3) -> LawResult:
    """eval in every model of size ≤ k equals hom_extension ∘ quotient_map."""
    from .freealg import Finite, build, hom_extension, quotient_map

    t = _Tally("free-alg", "evaluation factors through the free algebra")
    frees: dict = {}
    for alg in enumerate_models(p, k):
        X = alg.carrier
        if X not in frees:
            frees[X] = build(p, X, 4)
        r = frees[X]
        t.check(isinstance(r, Finite), lambda: f"no finite free algebra on {X}")
        if not isinstance(r, Finite):
            continue
        h = hom_extension(r, alg)
        ident = lambda x: x
        for term in terms_up_to(p.signature, X, depth):
            t.check(
                eval_term(alg, ident, term) == h(quotient_map(r, term)),
                lambda: f"{alg}: t={term}",
            )
    return t.result()


@_gc_paused
def completeness_cross_check(p: Presentation, n_vars: int = 2, depth: int = 2, k: int = 4, d_max: int = 4) -> list[LawResult]:
    """decide agrees with satisfaction in every model of size ≤ k."""
    from .freealg import Decider, verify_witness

    agree = _Tally("free-alg", f"decide agrees with all models of size ≤ {k}")
    wit = _Tally("free-alg", "NotEqual verdicts carry verified witnesses")
    known = _Tally("free-alg", "decide never answers Unknown")
    models = list(enumerate_models(p, k))
    dec = Decider(p, d_max=d_max, k=min(k, 3))
    A = FinSet(f"x{i}" for i in range(n_vars))
    terms = terms_up_to(p.signature, A, depth)
    for l, r in itertools.product(terms, repeat=2):
        used = FinSet(sorted(variables(l) | variables(r)))
        e = Equation.of_terms("goal", l, r, used)
        v = dec.decide(e)
        known.check(v.status != "Unknown", lambda: f"{l} = {r}")
        holds = all(satisfies(m, e) for m in models)
        agree.check((v.status == "Equal") == holds, lambda: f"{l} = {r}: {v}, models say {holds}")
        if v.status == "NotEqual":
            wit.check(v.witness is not None and verify_witness(p, e, v.witness), lambda: f"{l} = {r}")
    return [agree.result(f"{len(models)} models"), wit.result(), known.result()]


def strength_check_law(p: Presentation, max_v: int = 2, max_x: int = 2) -> LawResult:
    from .freealg import quotient_strength_failures

    t = _Tally("free-alg", "quotient map commutes with the strengths")
    for n, m in itertools.product(range(1, max_x + 1), range(1, max_v + 1)):
        X = FinSet(f"g{i}" for i in range(n))
        V = FinSet(f"v{i}" for i in range(m))
        bad = quotient_strength_failures(p, X, V)
        t.check(not bad, lambda: f"|X|={n}, |V|={m}: {bad[:1]}")
    return t.result()


def freealg_suite(p: Presentation, size: int = 2) -> list[LawResult]:
    out = [free_cardinalities(p, range(1, size + 2), lambda n: 2**n - 1)]
    out += quotient_laws(p, size)
    out.append(factoring_law(p, min(size + 1, 3), 2 if size < 3 else 3))
    out += completeness_cross_check(p, 2, 1 if size < 2 else 2, 3)
    out.append(strength_check_law(p, min(size, 2), min(size, 2)))
    return out


# -- runner ------------------------------------------------------------------


def selfcheck(size: int = 2) -> Iterator[LawResult]:
    """Every suite at the given size, lazily so a caller can stream lines."""
    from .corpus import semilattice

    small = min(size, 2)
    p = semilattice()
    yield from action_coherence(size)
    yield adjunction_round_trips(small)
    yield cardinalities(size + 1)
    yield from strength_coherence(small, 2)
    yield from monad_laws(min(size + 1, 3), 2 if size < 3 else 3, random_triples=100)
    yield from kleisli_action_laws(small)
    yield from ext_laws(small)
    rng = random.Random(seed())
    algs = list(enumerate_algebras(MEET, 2))
    alg = rng.choice([a for a in algs if len(a.carrier) == 2])
    V, X = FinSet.of("v0", "v1"), FinSet.of("x0", "x1")
    f = FinFun.from_callable(act(V, X).carrier, alg.carrier, lambda _: rng.choice(alg.carrier.elements))
    yield unique_extension_law(alg, f, V, X, 2)
    yield unit_coincidence(small)
    yield from dd_monad_laws(small)
    yield mult_coincidence(FinSet.range(small), FinSet.of("a"))
    yield from clone_strength_coherence(1)
    yield from semantics_morphism_laws(small, 2)
    yield from bijection_laws(small)
    yield from dd_change_triangle(small)
    yield substitution_lemma(small)
    yield from closure_laws(p, min(size + 1, 3), small)
    yield naturality_transfer(small)
    yield from eml_suite(p, min(size + 1, 3))
    yield from parse_suite(p)
    yield from freealg_suite(p, small)
