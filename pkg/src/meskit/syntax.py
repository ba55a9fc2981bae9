"""Signatures, terms, Kleisli maps, equations and presentations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Union

from .finset import UNIT, FinFun, FinSet


class Var:
    __slots__ = ("name", "_hash")

    def __init__(self, name: Hashable):
        self.name = name
        self._hash = hash(("var", name))

    def __eq__(self, other: object) -> bool:
        return type(other) is Var and self.name == other.name

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Var({self.name!r})"

    def __str__(self) -> str:
        return str(self.name)


class App:
    __slots__ = ("op", "args", "_hash", "_depth")

    def __init__(self, op: str, args: Iterable["Term"] = ()):
        self.op = op
        self.args = args = args if type(args) is tuple else tuple(args)
        # hashing the cached child hashes avoids a method call per child
        d = 0
        hs = [op]
        for a in args:
            hs.append(a._hash)
            if type(a) is App and a._depth > d:
                d = a._depth
        self._hash = hash(tuple(hs))
        self._depth = 1 + d

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            type(other) is App
            and self._hash == other._hash
            and self.op == other.op
            and self.args == other.args
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"App({self.op!r}, {self.args!r})"

    def __str__(self) -> str:
        if not self.args:
            return self.op
        return f"{self.op}({','.join(str(a) for a in self.args)})"


Term = Union[Var, App]


def app(op: str, *args: Term) -> App:
    return App(op, args)


def depth(t: Term) -> int:
    """Number of App nodes on the longest root-to-leaf path."""
    return 0 if isinstance(t, Var) else t._depth


def size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(size(a) for a in t.args)


def term_key(t: Term) -> tuple:
    """Total canonical order: variables first, then by symbol and children."""
    if isinstance(t, Var):
        return (0, str(t.name))
    return (1, t.op, tuple(term_key(a) for a in t.args))


def variables(t: Term) -> set:
    if isinstance(t, Var):
        return {t.name}
    out: set = set()
    for a in t.args:
        out |= variables(a)
    return out


def vars_of(t: Term) -> FinSet:
    return FinSet(variables(t))


def subterms(t: Term) -> Iterator[tuple[tuple[int, ...], Term]]:
    """All (path, subterm) pairs in pre-order."""
    stack: list[tuple[tuple[int, ...], Term]] = [((), t)]
    while stack:
        path, s = stack.pop()
        yield path, s
        if isinstance(s, App):
            for i in reversed(range(len(s.args))):
                stack.append((path + (i,), s.args[i]))


def fmt_path(path: tuple[int, ...]) -> str:
    return "root" if not path else "root." + ".".join(map(str, path))


@dataclass(frozen=True)
class Signature:
    ops: tuple[tuple[str, int], ...] = ()

    def __init__(self, ops: Iterable[tuple[str, int]] = ()):
        ops = tuple((str(s), int(n)) for s, n in ops)
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "_arities", dict(ops))

    @property
    def arities(self) -> dict[str, int]:
        return self._arities

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.ops)

    def arity(self, symbol: str) -> int:
        try:
            return self.arities[symbol]
        except KeyError:
            raise KeyError(f"unknown symbol {symbol!r}") from None

    def __contains__(self, symbol: object) -> bool:
        return symbol in self.arities

    def violations(self) -> list[str]:
        out = []
        seen: set[str] = set()
        for s, n in self.ops:
            if s in seen:
                out.append(f"duplicate symbol {s!r}")
            seen.add(s)
            if n < 0:
                out.append(f"symbol {s!r} has negative arity {n}")
        return out

    def __str__(self) -> str:
        return ", ".join(f"{s}/{n}" for s, n in self.ops)


def term_violations(sig: Signature, t: Term, arity: FinSet) -> list[str]:
    out = []
    known = sig.arities
    for path, s in subterms(t):
        where = fmt_path(path)
        if isinstance(s, Var):
            if s.name not in arity:
                out.append(f"{where}: variable {s.name!r} is not in the arity {arity}")
        elif s.op not in known:
            out.append(f"{where}: unknown symbol {s.op!r}")
        elif len(s.args) != known[s.op]:
            out.append(
                f"{where}: {s.op} expects {known[s.op]} arguments, got {len(s.args)}"
            )
    return out


@dataclass(frozen=True)
class KleisliMap:
    """A coarity-indexed family of terms over the arity: a substitution C → TA."""

    coarity: FinSet
    arity: FinSet
    body: tuple[Term, ...]

    def __post_init__(self) -> None:
        if len(self.body) != len(self.coarity):
            raise ValueError("Kleisli map body must be total on the coarity")

    @classmethod
    def from_mapping(
        cls, coarity: FinSet, arity: FinSet, mapping: Mapping[str, Term]
    ) -> "KleisliMap":
        missing = [c for c in coarity if c not in mapping]
        if missing:
            raise ValueError(f"Kleisli map undefined on {missing}")
        return cls(coarity, arity, tuple(mapping[c] for c in coarity))

    @classmethod
    def single(cls, t: Term, arity: FinSet) -> "KleisliMap":
        return cls(UNIT, arity, (t,))

    @classmethod
    def identity(cls, A: FinSet) -> "KleisliMap":
        return cls(A, A, tuple(Var(a) for a in A))

    @classmethod
    def from_fun(cls, f: FinFun) -> "KleisliMap":
        """η ∘ f for a plain function f: C → A."""
        return cls(f.dom, f.cod, tuple(Var(y) for y in f.values))

    def __call__(self, c: str) -> Term:
        return self.body[self.coarity.index(c)]

    def items(self) -> Iterator[tuple[str, Term]]:
        return zip(self.coarity, self.body)

    def precompose(self, e: FinFun) -> "KleisliMap":
        """u ∘ e for e: C' → C."""
        if e.cod != self.coarity:
            raise ValueError("precomposition needs e to land in the coarity")
        return KleisliMap(e.dom, self.arity, tuple(self(y) for y in e.values))

    def violations(self, sig: Signature) -> list[str]:
        out = []
        for c, t in self.items():
            out.extend(f"[{c}] {v}" for v in term_violations(sig, t, self.arity))
        return out

    def depth(self) -> int:
        return max((depth(t) for t in self.body), default=0)

    def __str__(self) -> str:
        entries = ", ".join(f"{c}↦{t}" for c, t in self.items())
        return f"[{entries}] : {self.coarity} → T{self.arity}"


@dataclass(frozen=True)
class Equation:
    name: str
    lhs: KleisliMap
    rhs: KleisliMap

    @classmethod
    def of_terms(cls, name: str, lhs: Term, rhs: Term, arity: FinSet) -> "Equation":
        return cls(name, KleisliMap.single(lhs, arity), KleisliMap.single(rhs, arity))

    @property
    def arity(self) -> FinSet:
        return self.lhs.arity

    @property
    def coarity(self) -> FinSet:
        return self.lhs.coarity

    def violations(self, sig: Signature) -> list[str]:
        out = []
        if self.lhs.coarity != self.rhs.coarity:
            out.append(f"equation {self.name}: sides have different coarities")
        if self.lhs.arity != self.rhs.arity:
            out.append(f"equation {self.name}: sides have different arities")
        out.extend(f"equation {self.name}: lhs{v}" for v in self.lhs.violations(sig))
        out.extend(f"equation {self.name}: rhs{v}" for v in self.rhs.violations(sig))
        return out

    def __str__(self) -> str:
        if self.coarity == UNIT:
            vs = " ".join(self.arity)
            return f"{self.name}: forall {vs}. {self.lhs(UNIT.elements[0])} = {self.rhs(UNIT.elements[0])}"
        return f"{self.name}: {self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class Presentation:
    signature: Signature
    axioms: tuple[Equation, ...] = ()
    name: str = field(default="", compare=False)

    def __init__(self, signature: Signature, axioms: Iterable[Equation] = (), name: str = ""):
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "axioms", tuple(axioms))
        object.__setattr__(self, "name", name)

    def axiom(self, name: str) -> Equation:
        for e in self.axioms:
            if e.name == name:
                return e
        raise KeyError(f"no axiom named {name!r}")

    def axiom_names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.axioms)


def validate(p: Presentation) -> list[str]:
    """All invariant violations of a presentation; empty means well-formed."""
    out = list(p.signature.violations())
    seen: set[str] = set()
    for e in p.axioms:
        if e.name in seen:
            out.append(f"duplicate axiom name {e.name!r}")
        seen.add(e.name)
        out.extend(e.violations(p.signature))
    return out


def terms_up_to(sig: Signature, gens: Iterable[Hashable], d: int) -> list[Term]:
    """Every term over the generators with depth ≤ d, canonically ordered."""
    layers: list[list[Term]] = [[Var(g) for g in sorted(gens, key=str)]]
    everything = list(layers[0])
    for _ in range(d):
        prev = everything
        new: list[Term] = []
        newest = set(layers[-1])
        for sym, n in sig.ops:
            for args in itertools.product(prev, repeat=n):
                # only terms whose depth grows by exactly one are new
                if n == 0:
                    if len(layers) == 1:
                        new.append(App(sym, ()))
                    continue
                if any(a in newest for a in args):
                    new.append(App(sym, args))
        layers.append(new)
        everything = everything + new
    return sorted(everything, key=lambda t: (depth(t), term_key(t)))
