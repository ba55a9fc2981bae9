"""Free algebras of a presentation by staged congruence closure.

Stage d makes every term of depth ≤ d over the generators present, then
merges both sides of every axiom instance whose variables range over the
classes reached so far, closing under congruence until nothing changes.
When stage d+1 neither reaches a new class nor merges two old ones, the
stage-d classes with their induced operations are the free algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Union

from .algebra import (
    Environment,
    FiniteAlgebra,
    counterexample,
    enumerate_models,
    eval_term,
    homomorphism_witness,
    is_model,
)
from .finset import FinFun, FinSet, act, pair_label
from .monad import strength, unique_extension
from .syntax import (
    App,
    Equation,
    Presentation,
    Term,
    Var,
    depth,
    size,
    term_key,
    terms_up_to,
    validate,
)

Node = tuple  # (op, child class ids) or (None, generator)


class EGraph:
    """Hash-consed term nodes over a union-find of classes."""

    def __init__(self) -> None:
        self.parent: list[int] = []
        self.nodes: dict[Node, int] = {}
        self.merges = 0

    def copy(self) -> "EGraph":
        other = EGraph()
        other.parent = list(self.parent)
        other.nodes = dict(self.nodes)
        other.merges = self.merges
        return other

    def find(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def _canon(self, node: Node) -> Node:
        op, rest = node
        if op is None:
            return node
        return (op, tuple(self.find(c) for c in rest))

    def add_node(self, node: Node) -> int:
        node = self._canon(node)
        hit = self.nodes.get(node)
        if hit is not None:
            return self.find(hit)
        c = len(self.parent)
        self.parent.append(c)
        self.nodes[node] = c
        return c

    def add_var(self, x: Hashable) -> int:
        return self.add_node((None, x))

    def add_term(self, t: Term, env: Optional[Mapping] = None) -> int:
        """Insert t; variables become generators, or classes when ``env`` maps them."""
        if isinstance(t, Var):
            if env is not None:
                return self.find(env[t.name])
            return self.add_var(t.name)
        return self.add_node((t.op, tuple(self.add_term(a, env) for a in t.args)))

    def lookup(self, t: Term) -> Optional[int]:
        """The class of t if all its nodes are already present."""
        if isinstance(t, Var):
            hit = self.nodes.get((None, t.name))
        else:
            kids = []
            for a in t.args:
                k = self.lookup(a)
                if k is None:
                    return None
                kids.append(k)
            hit = self.nodes.get((t.op, tuple(kids)))
        return None if hit is None else self.find(hit)

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.merges += 1
        return True

    def rebuild(self) -> None:
        """Restore the congruence invariant: equal canonical nodes share a class."""
        changed = True
        while changed:
            changed = False
            fresh: dict[Node, int] = {}
            for node, c in self.nodes.items():
                key = self._canon(node)
                c = self.find(c)
                other = fresh.get(key)
                if other is None:
                    fresh[key] = c
                elif self.find(other) != c:
                    self.union(other, c)
                    changed = True
            self.nodes = fresh

    def classes(self) -> set[int]:
        return {self.find(c) for c in self.nodes.values()}

    def class_depths(self) -> dict[int, int]:
        """Least depth of a term in each class."""
        best: dict[int, int] = {}
        changed = True
        while changed:
            changed = False
            for (op, rest), c in self.nodes.items():
                c = self.find(c)
                if op is None:
                    d = 0
                else:
                    kids = [best.get(self.find(k)) for k in rest]
                    if any(k is None for k in kids):
                        continue
                    d = 1 + max(kids, default=0)
                if d < best.get(c, d + 1):
                    best[c] = d
                    changed = True
        return best

    def representatives(self) -> dict[int, Term]:
        """Least term of each class by (depth, size, canonical order)."""
        best: dict[int, tuple] = {}
        changed = True
        while changed:
            changed = False
            for (op, rest), c in self.nodes.items():
                c = self.find(c)
                if op is None:
                    t: Term = Var(rest)
                else:
                    kids = [best.get(self.find(k)) for k in rest]
                    if any(k is None for k in kids):
                        continue
                    t = App(op, tuple(k[1] for k in kids))
                key = (depth(t), size(t), term_key(t))
                cur = best.get(c)
                if cur is None or key < cur[0]:
                    best[c] = (key, t)
                    changed = True
        return {c: t for c, (_, t) in best.items()}


@dataclass(frozen=True)
class TermIndex:
    """All terms over the generators up to a depth, canonically ordered."""

    generators: FinSet
    depth: int
    signature: object

    def terms(self) -> list[Term]:
        return terms_up_to(self.signature, self.generators, self.depth)


@dataclass
class CongruenceTable:
    """The e-graph after a stage, with the classes reached at that depth."""

    depth: int
    egraph: EGraph
    index: frozenset
    history: list[int] = field(default_factory=list)

    def class_count(self) -> int:
        return len(self.index)

    def same_class(self, s: Term, t: Term) -> bool:
        a, b = self.egraph.lookup(s), self.egraph.lookup(t)
        return a is not None and a == b


@dataclass(frozen=True)
class Finite:
    presentation: Presentation
    generators: FinSet
    algebra: FiniteAlgebra
    class_of: Mapping[int, str]
    representatives: Mapping[str, Term]
    table: CongruenceTable
    stable_depth: int

    status = "finite"

    @property
    def classes(self) -> FinSet:
        return self.algebra.carrier

    def generator_class(self, x: str) -> str:
        return self.class_of[self.table.egraph.lookup(Var(x))]


@dataclass(frozen=True)
class Truncated:
    presentation: Presentation
    generators: FinSet
    depth: int
    table: CongruenceTable

    status = "truncated"


FreeAlgebraResult = Union[Finite, Truncated]


def _instances(eq: Equation, classes: list[int]) -> Iterator[tuple[Term, Term, dict]]:
    A = eq.arity
    for values in itertools.product(classes, repeat=len(A)):
        env = dict(zip(A, values))
        for c in eq.coarity:
            yield eq.lhs(c), eq.rhs(c), env


class _OutOfBudget(Exception):
    pass


class _Budget:
    """Counts axiom instances and added nodes; a stage that overruns is dropped."""

    def __init__(self, limit: Optional[int]):
        self.limit = limit
        self.spent = 0

    def spend(self, n: int = 1) -> None:
        self.spent += n
        if self.limit is not None and self.spent > self.limit:
            raise _OutOfBudget()


def _saturate(p: Presentation, eg: EGraph, d: int, budget: Optional[_Budget] = None) -> None:
    budget = budget or _Budget(None)
    while True:
        depths = eg.class_depths()
        index = sorted(c for c, k in depths.items() if k <= d)
        before = eg.merges
        for eq in p.axioms:
            for lhs, rhs, env in _instances(eq, index):
                budget.spend()
                a = eg.add_term(lhs, env)
                b = eg.add_term(rhs, env)
                eg.union(a, b)
            eg.rebuild()
        if eg.merges == before:
            return


def _extend(p: Presentation, eg: EGraph, d: int, budget: Optional[_Budget] = None) -> None:
    budget = budget or _Budget(None)
    depths = eg.class_depths()
    below = sorted(c for c, k in depths.items() if k <= d - 1)
    for sym, n in p.signature.ops:
        budget.spend(len(below) ** n)
        for args in itertools.product(below, repeat=n):
            eg.add_node((sym, args))


def _index(eg: EGraph, d: int) -> frozenset:
    return frozenset(c for c, k in eg.class_depths().items() if k <= d)


def stabilized(before: CongruenceTable, after: CongruenceTable) -> bool:
    """Stage d+1 reached no new class and merged no two stage-d classes."""
    eg = after.egraph
    old = {eg.find(c) for c in before.index}
    return len(old) == len(before.index) and set(after.index) == old


DEFAULT_BUDGET = 200_000


def build(
    p: Presentation, X: FinSet, d_max: int = 4, budget: Optional[int] = DEFAULT_BUDGET
) -> FreeAlgebraResult:
    """Stage by stage up to d_max (plus one confirming stage).

    ``budget`` caps the axiom instances and nodes processed over the whole
    build; when a stage would overrun it, the result is Truncated at the
    last completed stage.  ``None`` removes the cap.
    """
    problems = validate(p)
    if problems:
        raise ValueError(f"invalid presentation: {problems[0]}")
    meter = _Budget(budget)
    eg = EGraph()
    for x in X:
        eg.add_var(x)
    _saturate(p, eg, 0)
    prev = CongruenceTable(0, eg.copy(), _index(eg, 0), [len(_index(eg, 0))])
    history = list(prev.history)
    for d in range(1, d_max + 2):
        try:
            _extend(p, eg, d, meter)
            eg.rebuild()
            _saturate(p, eg, d, meter)
        except _OutOfBudget:
            return Truncated(p, X, prev.depth, prev)
        cur = CongruenceTable(d, eg.copy(), _index(eg, d))
        history.append(cur.class_count())
        cur.history = list(history)
        if stabilized(prev, cur):
            prev.history = list(history)
            prev.egraph = cur.egraph
            prev.index = frozenset(cur.egraph.find(c) for c in prev.index)
            return _finite(p, X, prev, d - 1)
        if d > d_max:
            break
        prev = cur
    return Truncated(p, X, d_max, prev)


def _finite(p: Presentation, X: FinSet, table: CongruenceTable, d: int) -> Finite:
    eg = table.egraph
    reps = eg.representatives()
    label = {c: str(reps[c]) for c in table.index}
    carrier = FinSet(label.values())
    ids = {v: c for c, v in label.items()}
    tables = []
    for sym, n in p.signature.ops:
        row = []
        for args in itertools.product(carrier.elements, repeat=n):
            node = eg._canon((sym, tuple(ids[a] for a in args)))
            c = eg.nodes.get(node)
            if c is None or eg.find(c) not in label:
                raise RuntimeError("stabilized quotient is not closed under operations")
            row.append(label[eg.find(c)])
        tables.append(tuple(row))
    alg = FiniteAlgebra(p.signature, carrier, tuple(tables))
    if not is_model(alg, p):
        raise RuntimeError("stabilized quotient fails an axiom")
    return Finite(
        p, X, alg, label, {label[c]: reps[c] for c in table.index}, table, d
    )


def quotient_map(result: FreeAlgebraResult, t: Term) -> str:
    """The class of t, by evaluating it in the quotient algebra."""
    if not isinstance(result, Finite):
        raise ValueError("quotient maps need a finite free algebra")
    return eval_term(result.algebra, result.generator_class, t)


def hom_extension(result: FreeAlgebraResult, alg: FiniteAlgebra) -> FinFun:
    """The homomorphism from the free algebra on alg's carrier back to alg."""
    if not isinstance(result, Finite):
        raise ValueError("homomorphic extension needs a finite free algebra")
    if result.generators != alg.carrier:
        raise ValueError("the free algebra must be generated by the algebra's carrier")
    ident = lambda x: x
    h = FinFun.from_callable(
        result.classes, alg.carrier, lambda c: eval_term(alg, ident, result.representatives[c])
    )
    bad = homomorphism_witness(h, result.algebra, alg)
    if bad is not None:
        raise ValueError(
            f"algebra is not a model: class representatives disagree at {bad[0]}{bad[1]}"
        )
    for x in alg.carrier:
        if h(result.generator_class(x)) != x:
            raise ValueError(f"generator {x} is not fixed")
    return h


# -- deciding equations ------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    algebra: FiniteAlgebra
    environment: Environment
    coarity_element: str
    lhs_value: str
    rhs_value: str


@dataclass(frozen=True)
class Verdict:
    status: str  # "Equal" | "NotEqual" | "Unknown"
    basis: str
    witness: Optional[Witness] = None
    free: Optional[FreeAlgebraResult] = None

    def __str__(self) -> str:
        return f"{self.status} ({self.basis})"


def verify_witness(p: Presentation, e: Equation, w: Witness) -> bool:
    """A witness is valid when its algebra is a model and separates the sides."""
    if not is_model(w.algebra, p):
        return False
    env = w.environment.as_dict()
    a = eval_term(w.algebra, env, e.lhs(w.coarity_element))
    b = eval_term(w.algebra, env, e.rhs(w.coarity_element))
    return a != b and (a, b) == (w.lhs_value, w.rhs_value)


def _witness(alg: FiniteAlgebra, e: Equation) -> Optional[Witness]:
    hit = counterexample(alg, e)
    if hit is None:
        return None
    env, c = hit
    d = env.as_dict()
    return Witness(alg, env, c, eval_term(alg, d, e.lhs(c)), eval_term(alg, d, e.rhs(c)))


def model_screen(p: Presentation, e: Equation, k: int, models=None) -> Optional[Witness]:
    for alg in models if models is not None else enumerate_models(p, k):
        w = _witness(alg, e)
        if w is not None:
            return w
    return None


class Decider:
    """Caches free algebras per arity so many equations share one build."""

    def __init__(self, p: Presentation, d_max: int = 4, k: int = 3, models=None):
        problems = validate(p)
        if problems:
            raise ValueError(f"invalid presentation: {problems[0]}")
        self.p = p
        self.d_max = d_max
        self.k = k
        self._models = list(models) if models is not None else None
        self._free: dict[FinSet, FreeAlgebraResult] = {}

    def models(self) -> list[FiniteAlgebra]:
        if self._models is None:
            self._models = list(enumerate_models(self.p, self.k)) if self.k > 0 else []
        return self._models

    def free(self, X: FinSet) -> FreeAlgebraResult:
        if X not in self._free:
            self._free[X] = build(self.p, X, self.d_max)
        return self._free[X]

    def decide(self, e: Equation) -> Verdict:
        problems = e.violations(self.p.signature)
        if problems:
            raise ValueError(problems[0])
        if e.lhs == e.rhs:
            return Verdict("Equal", "syntactic")
        result = self.free(e.arity)
        if isinstance(result, Finite):
            if all(quotient_map(result, e.lhs(c)) == quotient_map(result, e.rhs(c)) for c in e.coarity):
                return Verdict("Equal", "free algebra", free=result)
            w = model_screen(self.p, e, self.k, self.models())
            if w is None:
                w = _free_witness(result, e)
            return Verdict("NotEqual", "free algebra", witness=w, free=result)
        table = result.table
        eg = table.egraph.copy()
        if all(
            eg.find(eg.add_term(e.lhs(c))) == eg.find(eg.add_term(e.rhs(c)))
            for c in e.coarity
        ):
            return Verdict("Equal", f"closure to depth {result.depth}", free=result)
        w = model_screen(self.p, e, self.k, self.models())
        if w is not None:
            return Verdict("NotEqual", f"model of size {len(w.algebra.carrier)}", witness=w, free=result)
        return Verdict("Unknown", f"no merge by depth {result.depth}", free=result)


def _free_witness(result: Finite, e: Equation) -> Witness:
    """The free algebra itself separates the sides under x ↦ [x]."""
    alg = result.algebra
    env = Environment(e.arity, tuple(result.generator_class(a) for a in e.arity))
    d = env.as_dict()
    for c in e.coarity:
        a, b = eval_term(alg, d, e.lhs(c)), eval_term(alg, d, e.rhs(c))
        if a != b:
            return Witness(alg, env, c, a, b)
    raise RuntimeError("free algebra does not separate an unequal equation")


def decide(p: Presentation, e: Equation, d_max: int = 4, k: int = 3) -> Verdict:
    return Decider(p, d_max, k).decide(e)


def quotient_strength_check(
    p: Presentation, X: FinSet, V: FinSet, term_depth: int = 3, d_max: int = 4
) -> bool:
    """q(φ(v, t)) = φ^S(v, q(t)) for every v and every t up to ``term_depth``."""
    return not quotient_strength_failures(p, X, V, term_depth, d_max, limit=1)


def quotient_strength_failures(
    p: Presentation, X: FinSet, V: FinSet, term_depth: int = 3, d_max: int = 4, limit: int = 5
) -> list[str]:
    VX = act(V, X).carrier
    free_x = build(p, X, d_max)
    free_vx = build(p, VX, d_max)
    if not isinstance(free_x, Finite) or not isinstance(free_vx, Finite):
        raise ValueError("strength check needs finite free algebras on X and V⊙X")
    unit_vx = FinFun.from_callable(VX, free_vx.classes, free_vx.generator_class)
    out = []
    for t in terms_up_to(p.signature, X, term_depth):
        rep = free_x.representatives[quotient_map(free_x, t)]
        for v in V:
            lhs = quotient_map(free_vx, strength(V, v, t))
            rhs = unique_extension(free_vx.algebra, unit_vx, V, v, rep)
            if lhs != rhs:
                out.append(f"v={v}, t={t}: {lhs} versus {rhs}")
                if len(out) >= limit:
                    return out
    return out
