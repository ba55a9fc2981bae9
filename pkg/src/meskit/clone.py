"""The clone monad K_X(A) = [C(A,X), X] on a finite carrier X.

Two representations live side by side.  A *code* is a tuple of carrier
labels, one per environment A → X listed in product order; codes give
decidable equality.  A *functional* is a Python callable taking an
environment (itself a callable) to a carrier element; functionals let the
clone-monad composites run on sets far too large to enumerate, such as
K_X K_X A.  :class:`DDCarrier` converts between the two.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from .algebra import FiniteAlgebra, eval_term
from .finset import (
    FinFun,
    FinSet,
    act,
    apply_label,
    ev_left,
    ev_right,
    functions,
    graph_label,
    lhom,
    pair_label,
    parse_graph_label,
    rhom,
    unpair_label,
)
from .monad import map_term, pair_with, strength
from .syntax import App, Signature, Term, Var, terms_up_to

Code = tuple
Functional = Callable[[Callable], Hashable]


def _unpair(p) -> tuple:
    return unpair_label(p) if isinstance(p, str) else p


class DDCarrier:
    """K_X(B) for an explicitly listed base B.

    ``view`` is how base elements are handed to functionals; it defaults to
    the elements themselves and is e.g. :meth:`functional` when the base is
    itself a clone carrier.
    """

    def __init__(self, X: FinSet, base: Iterable[Hashable], view: Optional[Callable] = None):
        self.X = X
        self.base = tuple(base)
        self.view = view
        self._xpos = {x: i for i, x in enumerate(X.elements)}
        self._bpos = {b: i for i, b in enumerate(self.base)}
        if len(self._bpos) != len(self.base):
            raise ValueError("base elements must be distinct")
        self.n = len(X)
        self.env_count = self.n ** len(self.base)

    @classmethod
    def of(cls, X: FinSet, A: FinSet) -> "DDCarrier":
        return cls(X, A.elements)

    def __repr__(self) -> str:
        return f"DDCarrier(X={self.X}, |base|={len(self.base)})"

    @property
    def size(self) -> int:
        return self.n**self.env_count

    def envs(self) -> Iterator[tuple]:
        return itertools.product(self.X.elements, repeat=len(self.base))

    def env_index(self, values: Sequence[str]) -> int:
        i = 0
        for x in values:
            i = i * self.n + self._xpos[x]
        return i

    def env_values(self, rho: Callable) -> tuple:
        view = self.view
        if view is None:
            return tuple(rho(b) for b in self.base)
        return tuple(rho(view(b)) for b in self.base)

    def env_fn(self, values: Sequence[str]) -> Callable:
        if self.view is not None:
            raise ValueError("explicit environments need an unwrapped base")
        pos = self._bpos
        return lambda b: values[pos[b]]

    def codes(self) -> Iterator[Code]:
        """Every element, in product order; only sensible for small carriers."""
        return itertools.product(self.X.elements, repeat=self.env_count)

    def functional(self, code: Code) -> Functional:
        if len(code) != self.env_count:
            raise ValueError("code length does not match the environment count")
        return lambda rho: code[self.env_index(self.env_values(rho))]

    def code(self, F: Functional) -> Code:
        return tuple(F(self.env_fn(values)) for values in self.envs())

    def env_label(self, values: Sequence[str]) -> str:
        return graph_label(zip(map(str, self.base), values))

    def label(self, code: Code) -> str:
        return graph_label(zip((self.env_label(e) for e in self.envs()), code))

    def code_of_label(self, label: str) -> Code:
        graph = parse_graph_label(label)
        return tuple(graph[self.env_label(e)] for e in self.envs())

    def carrier(self) -> FinSet:
        """lhom(rhom(A,X), X) with graph labels; equal to the enumerated codes."""
        return FinSet(self.label(c) for c in self.codes())


def dd_carrier(X: FinSet, A: FinSet) -> FinSet:
    return lhom(rhom(A, X), X)


# -- the double-dualization presentation ------------------------------------


def delta(rho: Callable) -> Functional:
    """δ(ρ) = (F ↦ F(ρ)), the counit of C(-,X) ⊣ [-,X]."""
    return lambda F: F(rho)


def dd_unit_fn(a: Hashable) -> Functional:
    """Transpose of ev: a ↦ (ρ ↦ ρ(a))."""
    return lambda rho: rho(a)


def dd_mult_fn(G: Functional) -> Functional:
    """[δ, X]: precompose with δ."""
    return lambda rho: G(delta(rho))


def dd_unit(X: FinSet, A: FinSet) -> FinFun:
    K = DDCarrier.of(X, A)
    return FinFun.from_callable(A, K.carrier(), lambda a: K.label(K.code(dd_unit_fn(a))))


def dd_unit_code(K: DDCarrier, a: Hashable) -> Code:
    return K.code(dd_unit_fn(a))


def kk_carrier(K: DDCarrier) -> DDCarrier:
    """K_X(K_X A) over the enumerated codes of K, viewed as functionals."""
    return DDCarrier(K.X, list(K.codes()), view=K.functional)


def dd_mult_code(K: DDCarrier, KK: DDCarrier, G: Code) -> Code:
    """μ on codes: G(δ(ρ)) for each environment ρ of A."""
    fs = list(K.codes())
    out = []
    for i, _ in enumerate(K.envs()):
        out.append(G[KK.env_index(tuple(F[i] for F in fs))])
    return tuple(out)


# -- the clone presentation -------------------------------------------------


def k_map(f: Callable) -> Callable[[Functional], Functional]:
    """K_X(f) = [C(f,X), X]: F ↦ (ρ ↦ F(ρ∘f))."""
    return lambda F: (lambda rho: F(lambda b: rho(f(b))))


def cleval(F: Functional):
    """Counit K_X X → X: evaluate at the identity environment."""
    return F(lambda x: x)


def ev(pair) -> Hashable:
    """Right evaluation C(A,X) ⊙ A → X, (ρ, a) ↦ ρ(a)."""
    rho, a = _unpair(pair)
    return rho(a)


def ev_dual(pair) -> Hashable:
    """Left evaluation W ⊙ [W,X] → X, (w, F) ↦ F(w)."""
    w, F = _unpair(pair)
    return F(w)


def _alpha_inv(p):
    rho, vf = _unpair(p)
    v, F = _unpair(vf)
    return ((rho, v), F)


def _e_hat(rho_v) -> Callable:
    """ê: C(V⊙A,X) × V → C(A,X), the transpose of ev∘α̂."""
    rho, v = rho_v
    return lambda a: ev((rho, pair_with(v, a)))


def clone_strength_fn(v: Hashable, F: Functional) -> Functional:
    """κ(v, F): transpose of ev ∘ (ê ⊙ id) ∘ α̂⁻¹ at (ρ, (v, F))."""

    def out(rho):
        rho_v, G = _alpha_inv((rho, (v, F)))
        return ev_dual((_e_hat(rho_v), G))

    return out


def _kappa_pair(p) -> Functional:
    v, F = _unpair(p)
    return clone_strength_fn(v, F)


def clone_unit_fn(a: Hashable) -> Functional:
    """Transpose of the interpretation of id_X at the identity functor."""
    # ι(id)_A = id ∘ Id(ev) ∘ φ with φ the identity strength, i.e. ev itself.
    return lambda rho: ev((rho, a))


def clone_mult_fn(G: Functional) -> Functional:
    """Transpose of cleval ∘ K(cleval) ∘ KK(ev) ∘ K(κ) ∘ κ at (ρ, G)."""

    def out(rho):
        s1 = clone_strength_fn(rho, G)
        s2 = k_map(_kappa_pair)(s1)
        s3 = k_map(k_map(ev))(s2)
        s4 = k_map(cleval)(s3)
        return cleval(s4)

    return out


def clone_unit(X: FinSet, A: FinSet) -> FinFun:
    K = DDCarrier.of(X, A)
    return FinFun.from_callable(A, K.carrier(), lambda a: K.label(K.code(clone_unit_fn(a))))


def dd_mult(X: FinSet, A: FinSet) -> Callable[[Code], Code]:
    """μ^X_A on codes of K_X K_X A (see :func:`kk_carrier`)."""
    K = DDCarrier.of(X, A)
    KK = kk_carrier(K)
    return lambda G: dd_mult_code(K, KK, G)


def clone_mult(X: FinSet, A: FinSet) -> Callable[[Code], Code]:
    """The clone multiplication on codes, through the strength composite."""
    K = DDCarrier.of(X, A)
    KK = kk_carrier(K)
    return lambda G: K.code(clone_mult_fn(KK.functional(G)))


def clone_strength(X: FinSet, V: FinSet, A: FinSet) -> Callable[[str, Code], Code]:
    """κ_{V,A} on codes: (v, F ∈ K_X A) ↦ element of K_X(V⊙A)."""
    K = DDCarrier.of(X, A)
    KV = DDCarrier.of(X, act(V, A).carrier)

    def go(v: str, F: Code) -> Code:
        if v not in V:
            raise ValueError(f"{v!r} is not in {V}")
        return KV.code(clone_strength_fn(v, K.functional(F)))

    return go


class Probe:
    """A generic functional: records the environment it is applied to.

    Maps built only from application, precomposition and pairing send the
    probe to ``("probe", name, values)``; two such maps agree on every
    functional exactly when they agree on the probe.
    """

    def __init__(self, space: DDCarrier, name: str = "G"):
        self.space = space
        self.name = name
        self.calls = 0

    def __call__(self, rho: Callable):
        self.calls += 1
        return ("probe", self.name, self.space.env_values(rho))


# -- semantics transformation -----------------------------------------------


def semantics_transform(alg: FiniteAlgebra, A: FinSet, t: Term) -> Code:
    """ω(s)_A(t) = (ρ ↦ eval(t, ρ)) as a code over DDCarrier(X, A)."""
    K = DDCarrier.of(alg.carrier, A)
    return tuple(eval_term(alg, dict(zip(A, e)), t) for e in K.envs())


def semantics_fn(alg: FiniteAlgebra, t: Term) -> Functional:
    return lambda rho: eval_term(alg, rho, t)


def interpretation_transpose(alg: FiniteAlgebra, A: FinSet, t: Term) -> Code:
    """Transpose of ι(s)_A = s ∘ T(ev) ∘ φ, computed without direct evaluation."""
    X = alg.carrier
    R = rhom(A, X)
    ev_ax = ev_right(A, X)
    K = DDCarrier.of(X, A)
    out = []
    for values in K.envs():
        rho = graph_label(zip(A, values))
        tagged = strength(R, rho, t)
        over_x = map_term(ev_ax, tagged)
        out.append(eval_term(alg, lambda x: x, over_x))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class MonadMorphismTable:
    """Finitely many components τ_A: TA → K_X A, each on terms up to a depth."""

    signature: Signature
    X: FinSet
    depth: int
    components: Mapping[FinSet, Mapping[Term, Code]] = field(default_factory=dict)

    def arities(self) -> list[FinSet]:
        return list(self.components)

    def __call__(self, A: FinSet, t: Term) -> Code:
        return self.components[A][t]

    def space(self, A: FinSet) -> DDCarrier:
        return DDCarrier.of(self.X, A)

    def naturality_violations(self, limit: int = 5) -> list[str]:
        """K(f)∘τ_A = τ_B∘T(f) for every f: A → B among recorded arities."""
        out = []
        for A, comp_a in self.components.items():
            KA = self.space(A)
            for B, comp_b in self.components.items():
                KB = self.space(B)
                for f in functions(A, B):
                    for t, code in comp_a.items():
                        image = map_term(f, t)
                        if image not in comp_b:
                            continue
                        pushed = KB.code(k_map(f)(KA.functional(code)))
                        if pushed != comp_b[image]:
                            out.append(f"naturality fails at {f.label} on {t}")
                            if len(out) >= limit:
                                return out
        return out

    def is_natural(self) -> bool:
        return not self.naturality_violations(limit=1)


def semantics_table(
    alg: FiniteAlgebra, arities: Iterable[FinSet], depth: int = 2
) -> MonadMorphismTable:
    comps = {}
    for A in arities:
        comps[A] = {t: semantics_transform(alg, A, t) for t in terms_up_to(alg.signature, A, depth)}
    return MonadMorphismTable(alg.signature, alg.carrier, depth, comps)


def algebra_of_morphism(tau: MonadMorphismTable) -> FiniteAlgebra:
    """α(τ) = cleval ∘ τ_X, read off at the arity equal to the carrier."""
    X = tau.X
    if X not in tau.components:
        raise ValueError("the table must record the carrier itself as an arity")
    if tau.depth < 1 and tau.signature.ops:
        raise ValueError("the table must reach depth 1 to determine operations")
    problems = tau.naturality_violations(limit=1)
    if problems:
        raise ValueError(f"table is not natural: {problems[0]}")
    K = tau.space(X)
    comp = tau.components[X]
    tables = []
    for sym, ar in tau.signature.ops:
        row = []
        for args in itertools.product(X.elements, repeat=ar):
            F = K.functional(comp[App(sym, tuple(Var(x) for x in args))])
            row.append(cleval(F))
        tables.append(tuple(row))
    return FiniteAlgebra(tau.signature, X, tuple(tables))


# -- algebras built from the clone structure --------------------------------


@dataclass(frozen=True)
class CloneAlgebra:
    """The K_X-algebra (X, cleval)."""

    X: FinSet

    def structure(self, F: Functional):
        return cleval(F)


@dataclass(frozen=True)
class Translation:
    """A signature map: each source symbol of arity n becomes a target term
    over the variables "0" .. "n-1"."""

    source: Signature
    target: Signature
    images: tuple[tuple[str, Term], ...]

    @classmethod
    def identity(cls, sig: Signature) -> "Translation":
        return cls(
            sig,
            sig,
            tuple((s, App(s, tuple(Var(str(i)) for i in range(n)))) for s, n in sig.ops),
        )

    @classmethod
    def inclusion(cls, source: Signature, target: Signature) -> "Translation":
        missing = [s for s in source.symbols if target.arities.get(s) != source.arity(s)]
        if missing:
            raise ValueError(f"symbols {missing} are not in the target signature")
        return cls(
            source,
            target,
            tuple((s, App(s, tuple(Var(str(i)) for i in range(n)))) for s, n in source.ops),
        )

    def image(self, sym: str) -> Term:
        return dict(self.images)[sym]

    def apply(self, t: Term) -> Term:
        from .monad import substitute

        if isinstance(t, Var):
            return t
        args = [self.apply(a) for a in t.args]
        return substitute(self.image(t.op), lambda i: args[int(i)])


def restrict_algebra(tau, alg) -> FiniteAlgebra:
    """(X, s') ↦ (X, s' ∘ τ_X).

    ``tau`` is either a :class:`Translation` (with ``alg`` a finite algebra
    of its target signature) or a :class:`MonadMorphismTable` into K_X
    (with ``alg`` the :class:`CloneAlgebra` on X).
    """
    if isinstance(tau, Translation):
        if not isinstance(alg, FiniteAlgebra) or alg.signature != tau.target:
            raise ValueError("algebra must be over the translation's target signature")
        X = alg.carrier
        tables = []
        for sym, ar in tau.source.ops:
            body = tau.image(sym)
            tables.append(
                tuple(
                    eval_term(alg, lambda i, a=args: a[int(i)], body)
                    for args in itertools.product(X.elements, repeat=ar)
                )
            )
        return FiniteAlgebra(tau.source, X, tuple(tables))
    if isinstance(tau, MonadMorphismTable):
        if not isinstance(alg, CloneAlgebra) or alg.X != tau.X:
            raise ValueError("a table into K_X restricts the clone algebra on the same X")
        return algebra_of_morphism(tau)
    raise TypeError(f"cannot restrict along {type(tau).__name__}")


def power_algebra(alg: FiniteAlgebra, V: FinSet) -> FiniteAlgebra:
    """The algebra on [V, X] whose structure is s ∘ T(ev) ∘ φ, transposed."""
    X = alg.carrier
    P = lhom(V, X)
    evl = ev_left(V, X)
    tables = []
    for sym, ar in alg.signature.ops:
        row = []
        for args in itertools.product(P.elements, repeat=ar):
            t = App(sym, tuple(Var(g) for g in args))
            graph = []
            for v in V:
                tagged = strength(V, v, t)
                graph.append((v, eval_term(alg, lambda x: x, map_term(evl, tagged))))
            row.append(graph_label(graph))
        tables.append(tuple(row))
    return FiniteAlgebra(alg.signature, P, tuple(tables))


def power_dd_structure(X: FinSet, V: FinSet) -> tuple[DDCarrier, Callable[[Functional], str]]:
    """[δ_V, X]: the K_X-algebra structure on [V, X], as (carrier space, k)."""
    Y = lhom(V, X)
    KY = DDCarrier.of(X, Y)

    def k(H: Functional) -> str:
        return graph_label((v, H(lambda g, v=v: apply_label(g, v))) for v in V)

    return KY, k


def algebra_through(alg: FiniteAlgebra, Y: FinSet, k: Callable[[Functional], str]) -> FiniteAlgebra:
    """s_k = k ∘ ω(s)_Y for a K_X-algebra (Y, k)."""
    tables = []
    for sym, ar in alg.signature.ops:
        tables.append(
            tuple(
                k(semantics_fn(alg, App(sym, tuple(Var(y) for y in args))))
                for args in itertools.product(Y.elements, repeat=ar)
            )
        )
    return FiniteAlgebra(alg.signature, Y, tuple(tables))


def morphism_of_dd_algebra(k: Callable[[Functional], str]) -> Callable[[Functional], Functional]:
    """ω(k)_A: K_X A → K_Y A, F ↦ (ρ: A → Y) ↦ k(K_X(ρ)(F))."""
    return lambda F: (lambda rho: k(k_map(rho)(F)))
