"""Finite sets and functions with the cartesian Set-action.

Elements are string labels kept in lexicographic order.  Composite labels
(pairs ``⟨l,r⟩`` and function graphs ``{a↦x,b↦y}``) are built from their
components without re-escaping; only atoms escape the reserved characters,
so nested labels stay readable and parse back by bracket matching.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

RESERVED = frozenset("⟨⟩{}[](),↦\\")
_OPEN = {"⟨": "⟩", "{": "}", "[": "]", "(": ")"}
_CLOSE = frozenset(_OPEN.values())

UNIT_POINT = "*"


class LabelError(ValueError):
    pass


def atom(name: str) -> str:
    """Escape a raw name so it can sit inside composite labels."""
    return "".join("\\" + ch if ch in RESERVED else ch for ch in name)


def unatom(label: str) -> str:
    out = []
    it = iter(label)
    for ch in it:
        out.append(next(it, "") if ch == "\\" else ch)
    return "".join(out)


def _split_top(body: str, sep: str) -> list[str]:
    parts, depth, start, i = [], 0, 0, 0
    stack: list[str] = []
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            i += 2
            continue
        if ch in _OPEN:
            stack.append(_OPEN[ch])
            depth += 1
        elif ch in _CLOSE:
            if not stack or stack.pop() != ch:
                raise LabelError(f"unbalanced label: {body!r}")
            depth -= 1
        elif depth == 0 and body.startswith(sep, i):
            parts.append(body[start:i])
            start = i + len(sep)
            i = start
            continue
        i += 1
    if stack:
        raise LabelError(f"unbalanced label: {body!r}")
    parts.append(body[start:])
    return parts


def pair_label(left: str, right: str) -> str:
    return f"⟨{left},{right}⟩"


def unpair_label(label: str) -> tuple[str, str]:
    if not (label.startswith("⟨") and label.endswith("⟩")):
        raise LabelError(f"not a pair label: {label!r}")
    parts = _split_top(label[1:-1], ",")
    if len(parts) != 2:
        raise LabelError(f"not a pair label: {label!r}")
    return parts[0], parts[1]


def graph_label(items: Iterable[tuple[str, str]]) -> str:
    return "{" + ",".join(f"{k}↦{v}" for k, v in items) + "}"


def parse_graph_label(label: str) -> dict[str, str]:
    if not (label.startswith("{") and label.endswith("}")):
        raise LabelError(f"not a graph label: {label!r}")
    body = label[1:-1]
    if not body:
        return {}
    graph = {}
    for entry in _split_top(body, ","):
        kv = _split_top(entry, "↦")
        if len(kv) != 2:
            raise LabelError(f"bad graph entry {entry!r} in {label!r}")
        graph[kv[0]] = kv[1]
    return graph


@dataclass(frozen=True)
class FinSet:
    elements: tuple[str, ...]

    def __init__(self, elements: Iterable[str] = ()):
        elems = tuple(elements)
        ordered = tuple(sorted(set(elems)))
        if len(ordered) != len(elems):
            dup = sorted({e for e in elems if elems.count(e) > 1})
            raise ValueError(f"duplicate labels in FinSet: {dup}")
        object.__setattr__(self, "elements", ordered)

    @classmethod
    def of(cls, *names: str) -> "FinSet":
        return cls(names)

    @classmethod
    def atoms(cls, names: Iterable[str]) -> "FinSet":
        return cls(atom(n) for n in names)

    @classmethod
    def range(cls, n: int) -> "FinSet":
        return cls(str(i) for i in range(n))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._positions

    @property
    def _positions(self) -> dict[str, int]:
        pos = self.__dict__.get("_pos")
        if pos is None:
            pos = {e: i for i, e in enumerate(self.elements)}
            object.__setattr__(self, "_pos", pos)
        return pos

    def index(self, x: str) -> int:
        try:
            return self._positions[x]
        except KeyError:
            raise KeyError(f"{x!r} is not an element of {self}") from None

    def __repr__(self) -> str:
        return "{" + ", ".join(self.elements) + "}"


UNIT = FinSet.of(UNIT_POINT)
EMPTY = FinSet()


@dataclass(frozen=True)
class FinFun:
    """A total function given by its graph, stored in domain order."""

    dom: FinSet
    cod: FinSet
    values: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.dom):
            raise ValueError("graph must be total on the domain")
        for x, y in zip(self.dom, self.values):
            if y not in self.cod:
                raise ValueError(f"image {y!r} of {x!r} is not in the codomain")

    @classmethod
    def from_mapping(cls, dom: FinSet, cod: FinSet, graph: Mapping[str, str]) -> "FinFun":
        missing = [x for x in dom if x not in graph]
        if missing:
            raise ValueError(f"graph undefined on {missing}")
        return cls(dom, cod, tuple(graph[x] for x in dom))

    @classmethod
    def from_callable(cls, dom: FinSet, cod: FinSet, fn: Callable[[str], str]) -> "FinFun":
        return cls(dom, cod, tuple(fn(x) for x in dom))

    @classmethod
    def identity(cls, A: FinSet) -> "FinFun":
        return cls(A, A, A.elements)

    def __call__(self, x: str) -> str:
        return self.values[self.dom.index(x)]

    def items(self) -> Iterator[tuple[str, str]]:
        return zip(self.dom, self.values)

    def graph(self) -> dict[str, str]:
        return dict(self.items())

    def then(self, g: "FinFun") -> "FinFun":
        """Diagrammatic composite: first ``self``, then ``g``."""
        if self.cod != g.dom:
            raise ValueError("composable only when codomain matches domain")
        return FinFun(self.dom, g.cod, tuple(g(y) for y in self.values))

    def image(self) -> set[str]:
        return set(self.values)

    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def is_surjective(self) -> bool:
        return set(self.values) == set(self.cod.elements)

    @property
    def label(self) -> str:
        return graph_label(self.items())


def compose(g: FinFun, f: FinFun) -> FinFun:
    """``g ∘ f``."""
    return f.then(g)


@dataclass(frozen=True)
class PairSet:
    left: FinSet
    right: FinSet
    carrier: FinSet

    def pair(self, l: str, r: str) -> str:
        label = pair_label(l, r)
        if label not in self.carrier:
            raise KeyError(f"({l!r}, {r!r}) is not in {self.left} × {self.right}")
        return label

    def split(self, label: str) -> tuple[str, str]:
        if label not in self.carrier:
            raise KeyError(f"{label!r} is not in the pair set")
        return unpair_label(label)

    def __len__(self) -> int:
        return len(self.carrier)

    def __iter__(self) -> Iterator[str]:
        return iter(self.carrier)


def act(V: FinSet, C: FinSet) -> PairSet:
    """The action V⊙C, a copy of C for each element of V."""
    return PairSet(V, C, FinSet(pair_label(v, c) for v in V for c in C))


def functions(C: FinSet, D: FinSet) -> Iterator[FinFun]:
    """All total functions C → D, in product order of their value tuples."""
    for values in itertools.product(D.elements, repeat=len(C)):
        yield FinFun(C, D, values)


def rhom(C: FinSet, D: FinSet) -> FinSet:
    """Right-hom: the hom-set of functions C → D, labelled by graph."""
    return FinSet(f.label for f in functions(C, D))


def lhom(V: FinSet, C: FinSet) -> FinSet:
    """Left-hom [V, C]: the V-fold power of C, as functions V → C."""
    return FinSet(f.label for f in functions(V, C))


def fun_of_label(label: str, dom: FinSet, cod: FinSet) -> FinFun:
    return FinFun.from_mapping(dom, cod, parse_graph_label(label))


def apply_label(fun_label: str, x: str) -> str:
    return parse_graph_label(fun_label)[x]


def ev_right(A: FinSet, X: FinSet) -> FinFun:
    """Counit C(A,X) ⊙ A → X, (ρ, a) ↦ ρ(a)."""
    P = act(rhom(A, X), A)

    def ev(label: str) -> str:
        rho, a = unpair_label(label)
        return apply_label(rho, a)

    return FinFun.from_callable(P.carrier, X, ev)


def ev_left(V: FinSet, X: FinSet) -> FinFun:
    """Counit V ⊙ [V,X] → X, (v, g) ↦ g(v)."""
    P = act(V, lhom(V, X))

    def ev(label: str) -> str:
        v, g = unpair_label(label)
        return apply_label(g, v)

    return FinFun.from_callable(P.carrier, X, ev)


def act_map(h: FinFun, f: FinFun) -> FinFun:
    """Functorial action h ⊙ f : V⊙C → V'⊙C'."""
    src = act(h.dom, f.dom)
    tgt = act(h.cod, f.cod)

    def go(label: str) -> str:
        v, c = unpair_label(label)
        return pair_label(h(v), f(c))

    return FinFun.from_callable(src.carrier, tgt.carrier, go)


def swap(V: FinSet, C: FinSet) -> FinFun:
    def go(label: str) -> str:
        v, c = unpair_label(label)
        return pair_label(c, v)

    return FinFun.from_callable(act(V, C).carrier, act(C, V).carrier, go)


def _check_dom(f: FinFun, V: FinSet, C: FinSet) -> None:
    if f.dom != act(V, C).carrier:
        raise ValueError(f"domain mismatch: expected {V} ⊙ {C}, got {f.dom}")


def transpose_right(f: FinFun, V: FinSet, C: FinSet) -> FinFun:
    """Curry f: V⊙C → D into V → C(C, D)."""
    _check_dom(f, V, C)
    D = f.cod
    return FinFun.from_callable(
        V, rhom(C, D), lambda v: graph_label((c, f(pair_label(v, c))) for c in C)
    )


def untranspose_right(g: FinFun, C: FinSet, D: FinSet) -> FinFun:
    """Inverse of :func:`transpose_right`."""
    if g.cod != rhom(C, D):
        raise ValueError(f"codomain mismatch: expected C({C}, {D})")
    P = act(g.dom, C)

    def go(label: str) -> str:
        v, c = unpair_label(label)
        return apply_label(g(v), c)

    return FinFun.from_callable(P.carrier, D, go)


def transpose_left(f: FinFun, V: FinSet, C: FinSet) -> FinFun:
    """Curry f: V⊙C → D into C → [V, D]."""
    _check_dom(f, V, C)
    D = f.cod
    return FinFun.from_callable(
        C, lhom(V, D), lambda c: graph_label((v, f(pair_label(v, c))) for v in V)
    )


def untranspose_left(g: FinFun, V: FinSet, D: FinSet) -> FinFun:
    if g.cod != lhom(V, D):
        raise ValueError(f"codomain mismatch: expected [{V}, {D}]")
    P = act(V, g.dom)

    def go(label: str) -> str:
        v, c = unpair_label(label)
        return apply_label(g(c), v)

    return FinFun.from_callable(P.carrier, D, go)


def assoc_iso(U: FinSet, V: FinSet, C: FinSet) -> FinFun:
    """(U×V)⊙C → U⊙(V⊙C)."""
    src = act(act(U, V).carrier, C).carrier
    tgt = act(U, act(V, C).carrier).carrier

    def go(label: str) -> str:
        uv, c = unpair_label(label)
        u, v = unpair_label(uv)
        return pair_label(u, pair_label(v, c))

    return FinFun.from_callable(src, tgt, go)


def assoc_inv(U: FinSet, V: FinSet, C: FinSet) -> FinFun:
    src = act(U, act(V, C).carrier).carrier
    tgt = act(act(U, V).carrier, C).carrier

    def go(label: str) -> str:
        u, vc = unpair_label(label)
        v, c = unpair_label(vc)
        return pair_label(pair_label(u, v), c)

    return FinFun.from_callable(src, tgt, go)


def unit_iso(C: FinSet) -> FinFun:
    """1⊙C → C, ⟨*,c⟩ ↦ c."""
    return FinFun.from_callable(
        act(UNIT, C).carrier, C, lambda label: unpair_label(label)[1]
    )


def unit_inv(C: FinSet) -> FinFun:
    return FinFun.from_callable(C, act(UNIT, C).carrier, lambda c: pair_label(UNIT_POINT, c))


def right_unit_iso(V: FinSet) -> FinFun:
    """V×1 → V, the right unitor of the cartesian monoidal structure."""
    return FinFun.from_callable(
        act(V, UNIT).carrier, V, lambda label: unpair_label(label)[0]
    )


def coproduct(*summands: FinSet) -> tuple[FinSet, tuple[FinFun, ...]]:
    """Tagged sum with its injections; the i-th summand is tagged ``i``."""
    carrier = FinSet(pair_label(str(i), b) for i, B in enumerate(summands) for b in B)
    injections = tuple(
        FinFun.from_callable(B, carrier, lambda b, i=i: pair_label(str(i), b))
        for i, B in enumerate(summands)
    )
    return carrier, injections


def is_bijection(f: FinFun) -> bool:
    return f.is_injective() and f.is_surjective()


def inverse(f: FinFun) -> FinFun:
    if not is_bijection(f):
        raise ValueError("only bijections have inverses")
    return FinFun.from_mapping(f.cod, f.dom, {y: x for x, y in f.items()})

