"""Proof objects for equational metalogic and their checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .algebra import FiniteAlgebra, Environment, counterexample, enumerate_models
from .finset import FinFun, FinSet, coproduct
from .monad import ext, kleisli_compose
from .syntax import Equation, KleisliMap, Presentation, fmt_path


@dataclass(frozen=True)
class Judgement:
    presentation: str
    lhs: KleisliMap
    rhs: KleisliMap

    @property
    def coarity(self) -> FinSet:
        return self.lhs.coarity

    @property
    def arity(self) -> FinSet:
        return self.lhs.arity

    def as_equation(self, name: str = "goal") -> Equation:
        return Equation(name, self.lhs, self.rhs)

    def __str__(self) -> str:
        prefix = f"{self.presentation} ⊢ " if self.presentation else "⊢ "
        return f"{prefix}{self.lhs} ≐ {self.rhs}"


@dataclass(frozen=True)
class Ref:
    u: KleisliMap


@dataclass(frozen=True)
class Sym:
    p: "Proof"


@dataclass(frozen=True)
class Trans:
    p: "Proof"
    q: "Proof"


@dataclass(frozen=True)
class Axiom:
    name: str


@dataclass(frozen=True)
class Comp:
    """From u1 ≐ v1 : C → TB and u2 ≐ v2 : B → TA, conclude u1{u2} ≐ v1{v2}."""

    outer: "Proof"
    inner: "Proof"


@dataclass(frozen=True)
class Ext:
    V: FinSet
    p: "Proof"


@dataclass(frozen=True)
class Local:
    """Reassemble u ≐ v from its restrictions along a jointly surjective family."""

    u: KleisliMap
    v: KleisliMap
    family: tuple[FinFun, ...]
    proofs: tuple["Proof", ...]


@dataclass(frozen=True)
class CompCoprod:
    """Substitute a copaired family of equal pairs into u ≐ v : C → T(∐ B_i)."""

    p: "Proof"
    branches: tuple["Proof", ...]


@dataclass(frozen=True)
class Local1:
    """u ≐ v from u∘e ≐ v∘e for a single surjection e."""

    u: KleisliMap
    v: KleisliMap
    e: FinFun
    p: "Proof"


Proof = Union[Ref, Sym, Trans, Axiom, Comp, Ext, Local, CompCoprod, Local1]

PRIMITIVE = (Ref, Sym, Trans, Axiom, Comp, Ext, Local)


class ProofError(ValueError):
    def __init__(self, path: tuple[int, ...], kind: str, reason: str):
        self.path = path
        self.kind = kind
        self.reason = reason
        super().__init__(f"at {fmt_path(path)} ({kind}): {reason}")


def kind_of(node: Proof) -> str:
    return type(node).__name__.lower()


def children(node: Proof) -> tuple[Proof, ...]:
    if isinstance(node, (Sym, Ext)):
        return (node.p,)
    if isinstance(node, Trans):
        return (node.p, node.q)
    if isinstance(node, Comp):
        return (node.outer, node.inner)
    if isinstance(node, Local):
        return tuple(node.proofs)
    if isinstance(node, CompCoprod):
        return (node.p,) + tuple(node.branches)
    if isinstance(node, Local1):
        return (node.p,)
    return ()


def proof_size(node: Proof) -> int:
    return 1 + sum(proof_size(c) for c in children(node))


def jointly_surjective(family, C: FinSet) -> bool:
    """True iff the images of the family cover C."""
    covered: set[str] = set()
    for e in family:
        if e.cod != C:
            raise ValueError(f"family member lands in {e.cod}, expected {C}")
        covered |= e.image()
    return covered == set(C)


def copair(maps: tuple[KleisliMap, ...], carrier: FinSet, injections: tuple[FinFun, ...]) -> KleisliMap:
    """[w_i]: ∐ B_i → TA from w_i: B_i → TA."""
    arity = maps[0].arity
    body = {}
    for w, inj in zip(maps, injections):
        for b, t in w.items():
            body[inj(b)] = t
    return KleisliMap.from_mapping(carrier, arity, body)


class Checker:
    def __init__(self, presentation: Presentation):
        self.p = presentation
        self.sig = presentation.signature
        self._axioms = {e.name: e for e in presentation.axioms}

    def judgement(self, u: KleisliMap, v: KleisliMap) -> Judgement:
        return Judgement(self.p.name, u, v)

    def _wellformed(self, path, kind: str, *maps: KleisliMap) -> None:
        for w in maps:
            bad = w.violations(self.sig)
            if bad:
                raise ProofError(path, kind, f"ill-formed Kleisli map: {bad[0]}")

    def check(self, node: Proof, path: tuple[int, ...] = ()) -> Judgement:
        kind = kind_of(node)
        if isinstance(node, Ref):
            self._wellformed(path, kind, node.u)
            return self.judgement(node.u, node.u)
        if isinstance(node, Sym):
            j = self.check(node.p, path + (0,))
            return self.judgement(j.rhs, j.lhs)
        if isinstance(node, Trans):
            j1 = self.check(node.p, path + (0,))
            j2 = self.check(node.q, path + (1,))
            if j1.rhs != j2.lhs:
                raise ProofError(
                    path, kind, f"middle terms differ: {j1.rhs} versus {j2.lhs}"
                )
            return self.judgement(j1.lhs, j2.rhs)
        if isinstance(node, Axiom):
            e = self._axioms.get(node.name)
            if e is None:
                raise ProofError(path, kind, f"unknown axiom {node.name!r}")
            return self.judgement(e.lhs, e.rhs)
        if isinstance(node, Comp):
            j1 = self.check(node.outer, path + (0,))
            j2 = self.check(node.inner, path + (1,))
            if j1.arity != j2.coarity:
                raise ProofError(
                    path,
                    kind,
                    f"outer arity {j1.arity} does not match inner coarity {j2.coarity}",
                )
            return self.judgement(
                kleisli_compose(j1.lhs, j2.lhs), kleisli_compose(j1.rhs, j2.rhs)
            )
        if isinstance(node, Ext):
            j = self.check(node.p, path + (0,))
            return self.judgement(ext(node.V, j.lhs), ext(node.V, j.rhs))
        if isinstance(node, Local):
            return self._local(node, path)
        if isinstance(node, CompCoprod):
            return self._comp_coprod(node, path)
        if isinstance(node, Local1):
            return self._local1(node, path)
        raise ProofError(path, kind, f"unknown proof node {type(node).__name__}")

    def _pair_shape(self, path, kind, u: KleisliMap, v: KleisliMap) -> None:
        self._wellformed(path, kind, u, v)
        if u.coarity != v.coarity or u.arity != v.arity:
            raise ProofError(path, kind, "declared pair does not share coarity and arity")

    def _local(self, node: Local, path) -> Judgement:
        kind = "local"
        u, v = node.u, node.v
        self._pair_shape(path, kind, u, v)
        if len(node.family) != len(node.proofs):
            raise ProofError(path, kind, "one premise is needed per family member")
        try:
            covers = jointly_surjective(node.family, u.coarity)
        except ValueError as exc:
            raise ProofError(path, kind, str(exc)) from None
        if not covers:
            raise ProofError(path, kind, "family is not jointly surjective")
        for i, (e, sub) in enumerate(zip(node.family, node.proofs)):
            j = self.check(sub, path + (i,))
            if j.lhs != u.precompose(e) or j.rhs != v.precompose(e):
                raise ProofError(
                    path, kind, f"premise {i} is not the restriction of the pair along e_{i}"
                )
        return self.judgement(u, v)

    def _comp_coprod(self, node: CompCoprod, path) -> Judgement:
        kind = "compcoprod"
        j = self.check(node.p, path + (0,))
        js = [self.check(b, path + (i + 1,)) for i, b in enumerate(node.branches)]
        if not js:
            raise ProofError(path, kind, "at least one branch is required")
        arity = js[0].arity
        if any(b.arity != arity for b in js):
            raise ProofError(path, kind, "branches must share one arity")
        if len(js) == 1 and j.arity == js[0].coarity:
            return self.judgement(
                kleisli_compose(j.lhs, js[0].lhs), kleisli_compose(j.rhs, js[0].rhs)
            )
        carrier, inj = coproduct(*(b.coarity for b in js))
        if j.arity != carrier:
            raise ProofError(
                path, kind, f"main premise arity {j.arity} is not the coproduct {carrier}"
            )
        lhs = copair(tuple(b.lhs for b in js), carrier, inj)
        rhs = copair(tuple(b.rhs for b in js), carrier, inj)
        return self.judgement(kleisli_compose(j.lhs, lhs), kleisli_compose(j.rhs, rhs))

    def _local1(self, node: Local1, path) -> Judgement:
        kind = "local1"
        self._pair_shape(path, kind, node.u, node.v)
        if node.e.cod != node.u.coarity:
            raise ProofError(path, kind, "e must land in the coarity of the pair")
        if not node.e.is_surjective():
            raise ProofError(path, kind, "e is not surjective")
        j = self.check(node.p, path + (0,))
        if j.lhs != node.u.precompose(node.e) or j.rhs != node.v.precompose(node.e):
            raise ProofError(path, kind, "premise is not the restriction of the pair along e")
        return self.judgement(node.u, node.v)


def check(p: Presentation, proof: Proof) -> Judgement:
    return Checker(p).check(proof)


def elaborate_derived(node: Proof, p: Optional[Presentation] = None) -> Proof:
    """Rewrite every derived-rule node into primitive rules.

    Local1 becomes Local over the one-member family (or the subproof itself
    when e is an identity); Comp over a coproduct becomes Comp with a Local
    over the coproduct injections.  The presentation is needed only for the
    coproduct case, to compute the branch conclusions.
    """
    if isinstance(node, Ref) or isinstance(node, Axiom):
        return node
    if isinstance(node, Sym):
        return Sym(elaborate_derived(node.p, p))
    if isinstance(node, Trans):
        return Trans(elaborate_derived(node.p, p), elaborate_derived(node.q, p))
    if isinstance(node, Comp):
        return Comp(elaborate_derived(node.outer, p), elaborate_derived(node.inner, p))
    if isinstance(node, Ext):
        return Ext(node.V, elaborate_derived(node.p, p))
    if isinstance(node, Local):
        return Local(node.u, node.v, node.family, tuple(elaborate_derived(q, p) for q in node.proofs))
    if isinstance(node, Local1):
        sub = elaborate_derived(node.p, p)
        if node.e == FinFun.identity(node.u.coarity):
            return sub
        return Local(node.u, node.v, (node.e,), (sub,))
    if isinstance(node, CompCoprod):
        if p is None:
            raise ValueError("elaborating a coproduct composition needs the presentation")
        checker = Checker(p)
        main = elaborate_derived(node.p, p)
        branches = tuple(elaborate_derived(b, p) for b in node.branches)
        js = [checker.check(b) for b in branches]
        j = checker.check(main)
        if len(js) == 1 and j.arity == js[0].coarity:
            return Comp(main, branches[0])
        carrier, inj = coproduct(*(b.coarity for b in js))
        lhs = copair(tuple(b.lhs for b in js), carrier, inj)
        rhs = copair(tuple(b.rhs for b in js), carrier, inj)
        return Comp(main, Local(lhs, rhs, inj, branches))
    raise ValueError(f"unknown proof node {type(node).__name__}")


def is_primitive(node: Proof) -> bool:
    return isinstance(node, PRIMITIVE) and all(is_primitive(c) for c in children(node))


@dataclass(frozen=True)
class Counterexample:
    algebra: FiniteAlgebra
    environment: Environment
    coarity_element: str


@dataclass(frozen=True)
class AuditReport:
    judgement: Judgement
    max_size: int
    models_checked: int
    counterexamples: tuple[Counterexample, ...] = field(default=())

    @property
    def sound(self) -> bool:
        return not self.counterexamples


def soundness_audit(p: Presentation, proof: Proof, k: int, limit: int = 10) -> AuditReport:
    """Check the conclusion in every model of size ≤ k."""
    j = check(p, proof)
    goal = j.as_equation()
    found = []
    count = 0
    for model in enumerate_models(p, k):
        count += 1
        hit = counterexample(model, goal)
        if hit is not None and len(found) < limit:
            found.append(Counterexample(model, hit[0], hit[1]))
    return AuditReport(j, k, count, tuple(found))
