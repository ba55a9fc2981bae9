"""Finite algebras: evaluation, satisfaction, homomorphisms, model enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence, Union

from .finset import FinFun, FinSet, act, graph_label, pair_label, rhom
from .syntax import App, Equation, KleisliMap, Presentation, Signature, Term, Var


class SignatureMismatch(ValueError):
    pass


@dataclass(frozen=True)
class FiniteAlgebra:
    """A carrier with one total table per symbol.

    ``tables`` lists, per symbol in signature order, the results for all
    argument tuples enumerated in product order of the carrier.
    """

    signature: Signature
    carrier: FinSet
    tables: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.carrier)
        if len(self.tables) != len(self.signature.ops):
            raise ValueError("one table per symbol is required")
        for (sym, ar), table in zip(self.signature.ops, self.tables):
            if len(table) != n**ar:
                raise ValueError(f"table for {sym} must have {n ** ar} entries")
            bad = [y for y in table if y not in self.carrier]
            if bad:
                raise ValueError(f"table for {sym} leaves the carrier: {bad[:3]}")
        lookup = {
            sym: dict(zip(itertools.product(self.carrier.elements, repeat=ar), table))
            for (sym, ar), table in zip(self.signature.ops, self.tables)
        }
        object.__setattr__(self, "_lookup", lookup)

    @classmethod
    def from_ops(
        cls,
        signature: Signature,
        carrier: FinSet,
        ops: Mapping[str, Union[Callable[..., str], Mapping[tuple, str]]],
    ) -> "FiniteAlgebra":
        tables = []
        for sym, ar in signature.ops:
            spec = ops[sym]
            args = itertools.product(carrier.elements, repeat=ar)
            if callable(spec):
                tables.append(tuple(spec(*a) for a in args))
            else:
                tables.append(tuple(spec[a] for a in args))
        return cls(signature, carrier, tuple(tables))

    def op(self, sym: str, *args: str) -> str:
        try:
            return self._lookup[sym][args]
        except KeyError:
            if sym not in self._lookup:
                raise SignatureMismatch(f"algebra has no operation {sym!r}") from None
            raise

    def table(self, sym: str) -> dict[tuple, str]:
        return dict(self._lookup[sym])

    def __str__(self) -> str:
        lines = [f"carrier {self.carrier}"]
        for sym, ar in self.signature.ops:
            if ar == 0:
                lines.append(f"  {sym} = {self.op(sym)}")
                continue
            entries = ", ".join(
                f"{sym}({','.join(a)})={y}" for a, y in self._lookup[sym].items()
            )
            lines.append(f"  {entries}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Environment:
    """An assignment of carrier elements to the variables of an arity."""

    arity: FinSet
    assignment: tuple[str, ...]

    @classmethod
    def from_mapping(cls, arity: FinSet, m: Mapping[str, str]) -> "Environment":
        return cls(arity, tuple(m[a] for a in arity))

    def __call__(self, a: str) -> str:
        return self.assignment[self.arity.index(a)]

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.arity, self.assignment))

    @property
    def label(self) -> str:
        return graph_label(zip(self.arity, self.assignment))


Env = Union[Environment, Mapping, Callable[[str], str]]


def _env_getter(env: Env) -> Callable:
    if isinstance(env, Mapping):
        return env.__getitem__
    return env


def eval_term(alg: FiniteAlgebra, env: Env, t: Term) -> str:
    """Var(a) ↦ env(a); App(o, ts) ↦ table_o(evaluated ts)."""
    get = _env_getter(env)
    lookup = alg._lookup
    memo: dict[Term, str] = {}

    def go(s: Term) -> str:
        hit = memo.get(s)
        if hit is not None:
            return hit
        if isinstance(s, Var):
            out = get(s.name)
        else:
            table = lookup.get(s.op)
            if table is None:
                raise SignatureMismatch(f"algebra has no operation {s.op!r}")
            args = tuple(go(a) for a in s.args)
            try:
                out = table[args]
            except KeyError:
                raise SignatureMismatch(
                    f"{s.op} applied to {len(args)} arguments does not match the table"
                ) from None
        memo[s] = out
        return out

    return go(t)


def environments(A: FinSet, X: FinSet) -> Iterator[Environment]:
    for values in itertools.product(X.elements, repeat=len(A)):
        yield Environment(A, values)


def interpret(alg: FiniteAlgebra, u: KleisliMap) -> FinFun:
    """(ρ, c) ↦ eval(u(c), ρ) as a graph on C(A,X) ⊙ C."""
    X = alg.carrier
    dom = act(rhom(u.arity, X), u.coarity).carrier
    graph = {}
    for env in environments(u.arity, X):
        getter = env.as_dict()
        for c, t in u.items():
            graph[pair_label(env.label, c)] = eval_term(alg, getter, t)
    return FinFun.from_mapping(dom, X, graph)


def counterexample(alg: FiniteAlgebra, e: Equation) -> Optional[tuple[Environment, str]]:
    """A (ρ, c) separating the two sides, or None when the equation holds."""
    for env in environments(e.arity, alg.carrier):
        getter = env.as_dict()
        for c in e.coarity:
            if eval_term(alg, getter, e.lhs(c)) != eval_term(alg, getter, e.rhs(c)):
                return env, c
    return None


def satisfies(alg: FiniteAlgebra, e: Equation) -> bool:
    return counterexample(alg, e) is None


def is_model(alg: FiniteAlgebra, p: Presentation) -> bool:
    return all(satisfies(alg, e) for e in p.axioms)


def is_homomorphism(h: FinFun, a1: FiniteAlgebra, a2: FiniteAlgebra) -> bool:
    if h.dom != a1.carrier or h.cod != a2.carrier:
        return False
    if a1.signature != a2.signature:
        return False
    for sym, ar in a1.signature.ops:
        for args in itertools.product(a1.carrier.elements, repeat=ar):
            if h(a1.op(sym, *args)) != a2.op(sym, *(h(x) for x in args)):
                return False
    return True


def homomorphism_witness(
    h: FinFun, a1: FiniteAlgebra, a2: FiniteAlgebra
) -> Optional[tuple[str, tuple[str, ...]]]:
    for sym, ar in a1.signature.ops:
        for args in itertools.product(a1.carrier.elements, repeat=ar):
            if h(a1.op(sym, *args)) != a2.op(sym, *(h(x) for x in args)):
                return sym, args
    return None


def carrier_of_size(n: int) -> FinSet:
    return FinSet.range(n)


def _algebra_from_cells(sig: Signature, carrier: FinSet, cells: Sequence[int]) -> FiniteAlgebra:
    n = len(carrier)
    labels = carrier.elements
    tables, pos = [], 0
    for _, ar in sig.ops:
        width = n**ar
        tables.append(tuple(labels[v] for v in cells[pos : pos + width]))
        pos += width
    return FiniteAlgebra(sig, carrier, tuple(tables))


def enumerate_algebras(sig: Signature, k: int) -> Iterator[FiniteAlgebra]:
    """Every table assignment on carriers {0..n-1} for n = 1..k, lazily."""
    if k < 1:
        raise ValueError("k must be at least 1")
    for n in range(1, k + 1):
        carrier = carrier_of_size(n)
        width = sum(n**ar for _, ar in sig.ops)
        for cells in itertools.product(range(n), repeat=width):
            yield _algebra_from_cells(sig, carrier, cells)


def _compile(t: Term, arity: FinSet, offsets: dict[str, int], n: int):
    """Term → nested tuples over integer slots for the pruned search."""
    if isinstance(t, Var):
        return ("v", arity.index(t.name))
    return ("a", offsets[t.op], tuple(_compile(a, arity, offsets, n) for a in t.args))


class _Stuck(Exception):
    def __init__(self, cell: int):
        self.cell = cell


def _partial_eval(code, env: tuple[int, ...], cells: list, n: int) -> int:
    if code[0] == "v":
        return env[code[1]]
    idx = 0
    for sub in code[2]:
        idx = idx * n + _partial_eval(sub, env, cells, n)
    cell = code[1] + idx
    value = cells[cell]
    if value is None:
        raise _Stuck(cell)
    return value


def enumerate_models(p: Presentation, k: int) -> Iterator[FiniteAlgebra]:
    """The algebras of :func:`enumerate_algebras` that satisfy every axiom.

    Same stream, same order; partial tables are abandoned as soon as some
    axiom instance is fully determined and violated.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    sig = p.signature
    for n in range(1, k + 1):
        yield from _models_of_size(p, sig, n)


def _models_of_size(p: Presentation, sig: Signature, n: int) -> Iterator[FiniteAlgebra]:
    carrier = carrier_of_size(n)
    offsets, width = {}, 0
    for sym, ar in sig.ops:
        offsets[sym] = width
        width += n**ar
    instances = []
    for e in p.axioms:
        for c in e.coarity:
            lhs = _compile(e.lhs(c), e.arity, offsets, n)
            rhs = _compile(e.rhs(c), e.arity, offsets, n)
            for env in itertools.product(range(n), repeat=len(e.arity)):
                instances.append((lhs, rhs, env))
    cells: list = [None] * width
    watch: dict[int, list] = {}

    def check(inst) -> Optional[int]:
        """Return the blocking cell, -1 when satisfied; raise on violation."""
        lhs, rhs, env = inst
        try:
            a = _partial_eval(lhs, env, cells, n)
            b = _partial_eval(rhs, env, cells, n)
        except _Stuck as s:
            return s.cell
        if a != b:
            raise _Violated
        return -1

    try:
        for inst in instances:
            blocked = check(inst)
            if blocked >= 0:
                watch.setdefault(blocked, []).append(inst)
    except _Violated:
        return

    def search(i: int) -> Iterator[FiniteAlgebra]:
        if i == width:
            yield _algebra_from_cells(sig, carrier, cells)
            return
        pending = watch.pop(i, [])
        for value in range(n):
            cells[i] = value
            added: list[int] = []
            ok = True
            try:
                for inst in pending:
                    blocked = check(inst)
                    if blocked >= 0:
                        watch.setdefault(blocked, []).append(inst)
                        added.append(blocked)
            except _Violated:
                ok = False
            if ok:
                yield from search(i + 1)
            for b in added:
                watch[b].pop()
        cells[i] = None
        if pending:
            watch[i] = pending

    yield from search(0)


class _Violated(Exception):
    pass


def filter_models(p: Presentation, algebras: Iterable[FiniteAlgebra]) -> Iterator[FiniteAlgebra]:
    """Plain generate-and-test; the reference for :func:`enumerate_models`."""
    for alg in algebras:
        if is_model(alg, p):
            yield alg
