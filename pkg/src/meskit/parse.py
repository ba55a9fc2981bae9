"""Text formats: presentations (line-oriented) and proofs (s-expressions).

Presentation files::

    sig meet/2
    ax comm: forall x y. meet(x,y) = meet(y,x)

Proof files are s-expressions over the node keywords ``ref sym trans axiom
comp ext local comp+ local1``; a bare Kleisli map such as
``(subst (x b) (y a))`` stands for its reflexivity proof.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .eml import Axiom, Comp, CompCoprod, Ext, Local, Local1, Proof, Ref, Sym, Trans
from .finset import UNIT, UNIT_POINT, FinFun, FinSet
from .syntax import (
    App,
    Equation,
    KleisliMap,
    Presentation,
    Signature,
    Term,
    Var,
    validate,
    variables,
    vars_of,
)


class ParseError(ValueError):
    def __init__(self, line: int, col: int, reason: str, source: str = ""):
        self.line, self.col, self.reason, self.source = line, col, reason, source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {reason}")


# -- infix terms -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z0-9_][A-Za-z0-9_']*)|(?P<punct>[(),=.:/]))")


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text: str, line: int, offset: int = 0) -> list[_Tok]:
    toks, i = [], 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ParseError(line, offset + i + 1, f"unexpected character {text[i]!r}")
        kind = "name" if m.group("name") else "punct"
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), offset + start + 1))
        i = m.end()
    return toks


class _TermParser:
    def __init__(self, toks: list[_Tok], line: int, sig: Signature, variables: Optional[set]):
        self.toks, self.pos, self.line = toks, 0, line
        self.sig, self.variables = sig, variables
        self.seen: set[str] = set()

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def error(self, reason: str, tok: Optional[_Tok] = None) -> ParseError:
        tok = tok or self.peek()
        col = tok.col if tok else (self.toks[-1].col + len(self.toks[-1].text) if self.toks else 1)
        return ParseError(self.line, col, reason)

    def expect(self, text: str) -> _Tok:
        tok = self.peek()
        if tok is None or tok.text != text:
            raise self.error(f"expected {text!r}")
        self.pos += 1
        return tok

    def term(self) -> Term:
        tok = self.peek()
        if tok is None or tok.kind != "name":
            raise self.error("expected a term")
        self.pos += 1
        nxt = self.peek()
        if nxt is not None and nxt.text == "(":
            self.pos += 1
            args = []
            if self.peek() is not None and self.peek().text == ")":
                self.pos += 1
            else:
                while True:
                    args.append(self.term())
                    sep = self.peek()
                    if sep is not None and sep.text == ",":
                        self.pos += 1
                        continue
                    self.expect(")")
                    break
            return self._app(tok, args)
        if tok.text in self.sig:
            if self.variables is not None and tok.text in self.variables:
                raise self.error(f"{tok.text!r} is both a variable and a symbol", tok)
            return self._app(tok, [])
        if self.variables is not None and tok.text not in self.variables:
            raise self.error(f"variable {tok.text!r} is not declared by forall", tok)
        self.seen.add(tok.text)
        return Var(tok.text)

    def _app(self, tok: _Tok, args: list) -> App:
        if tok.text not in self.sig:
            raise self.error(f"unknown symbol {tok.text!r}", tok)
        want = self.sig.arity(tok.text)
        if want != len(args):
            raise self.error(f"{tok.text} expects {want} arguments, got {len(args)}", tok)
        return App(tok.text, tuple(args))


def parse_term(text: str, sig: Signature, variables: Optional[set] = None, line: int = 1) -> Term:
    p = _TermParser(_tokenize(text, line), line, sig, variables)
    t = p.term()
    if p.peek() is not None:
        raise p.error("trailing input after term")
    return t


def _parse_equation_body(
    toks: list[_Tok], line: int, sig: Signature, name: str
) -> Equation:
    variables: Optional[list[str]] = None
    pos = 0
    if toks and toks[0].kind == "name" and toks[0].text == "forall":
        pos = 1
        variables = []
        while pos < len(toks) and toks[pos].kind == "name":
            if toks[pos].text in variables:
                raise ParseError(line, toks[pos].col, f"variable {toks[pos].text!r} declared twice")
            if toks[pos].text in sig:
                raise ParseError(line, toks[pos].col, f"{toks[pos].text!r} is a symbol, not a variable")
            variables.append(toks[pos].text)
            pos += 1
        if pos >= len(toks) or toks[pos].text != ".":
            col = toks[pos].col if pos < len(toks) else toks[-1].col
            raise ParseError(line, col, "expected '.' after the forall variables")
        pos += 1
    rest = toks[pos:]
    declared = set(variables) if variables is not None else None
    p = _TermParser(rest, line, sig, declared)
    lhs = p.term()
    p.expect("=")
    rhs = p.term()
    if p.peek() is not None:
        raise p.error("trailing input after equation")
    arity = FinSet(variables) if variables is not None else FinSet(p.seen)
    return Equation.of_terms(name, lhs, rhs, arity)


_NAMED = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_']*)\s*:")


def parse_equation(text: str, sig: Signature, name: str = "goal") -> Equation:
    """``[NAME:] [forall x y.] lhs = rhs``; without forall the arity is the
    variables used."""
    m = _NAMED.match(text)
    if m:
        name = m.group(1)
        text = " " * m.end() + text[m.end():]
    return _parse_equation_body(_tokenize(text, 1), 1, sig, name)


def parse_presentation(text: str, name: str = "", source: str = "") -> Presentation:
    ops: list[tuple[str, int]] = []
    axioms: list[Equation] = []
    pending: list[tuple[int, int, str, str, int]] = []
    try:
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0]
            stripped = line.strip()
            if not stripped:
                continue
            indent = len(line) - len(line.lstrip())
            keyword, _, rest = stripped.partition(" ")
            offset = indent + len(keyword) + 1
            if keyword == "sig":
                toks = _tokenize(rest, lineno, offset)
                i = 0
                if not toks:
                    raise ParseError(lineno, offset + 1, "expected symbol/arity")
                while i < len(toks):
                    if (
                        i + 2 >= len(toks)
                        or toks[i].kind != "name"
                        or toks[i + 1].text != "/"
                        or not toks[i + 2].text.isdigit()
                    ):
                        raise ParseError(lineno, toks[i].col, "expected symbol/arity")
                    sym = toks[i].text
                    if any(s == sym for s, _ in ops):
                        raise ParseError(lineno, toks[i].col, f"duplicate symbol {sym!r}")
                    ops.append((sym, int(toks[i + 2].text)))
                    i += 3
                    if i < len(toks) and toks[i].text == ",":
                        i += 1
            elif keyword == "ax":
                toks = _tokenize(rest, lineno, offset)
                if len(toks) < 2 or toks[0].kind != "name" or toks[1].text != ":":
                    col = toks[0].col if toks else offset + 1
                    raise ParseError(lineno, col, "expected 'ax NAME: equation'")
                pending.append((lineno, toks[0].col, toks[0].text, rest, offset))
            elif keyword == "name":
                name = name or rest.strip()
            else:
                raise ParseError(lineno, indent + 1, f"unknown directive {keyword!r}")
        sig = Signature(ops)
        seen: set[str] = set()
        for lineno, col, axname, rest, offset in pending:
            if axname in seen:
                raise ParseError(lineno, col, f"duplicate axiom name {axname!r}")
            seen.add(axname)
            toks = _tokenize(rest, lineno, offset)[2:]
            if not toks:
                raise ParseError(lineno, col, "missing equation")
            axioms.append(_parse_equation_body(toks, lineno, sig, axname))
    except ParseError as exc:
        if source and not exc.source:
            raise ParseError(exc.line, exc.col, exc.reason, source) from None
        raise
    p = Presentation(sig, axioms, name)
    problems = validate(p)
    if problems:
        raise ParseError(0, 0, problems[0], source)
    return p


def format_term(t: Term) -> str:
    return str(t)


def format_equation(e: Equation) -> str:
    if e.coarity != UNIT:
        raise ValueError("the surface syntax holds single-term equations only")
    vs = " ".join(e.arity)
    head = f"forall {vs}." if vs else "forall ."
    return f"{e.name}: {head} {e.lhs(UNIT_POINT)} = {e.rhs(UNIT_POINT)}"


def format_presentation(p: Presentation) -> str:
    lines = [f"name {p.name}"] if p.name else []
    lines += [f"sig {s}/{n}" for s, n in p.signature.ops]
    lines += [f"ax {format_equation(e)}" for e in p.axioms]
    return "\n".join(lines) + ("\n" if lines else "")


# -- s-expressions -----------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int
    col: int


SExpr = Union[Atom, SList]


def read_sexprs(text: str) -> list[SExpr]:
    """Atoms are runs of non-space, non-paren characters or "quoted" strings."""
    out: list[SExpr] = []
    stack: list[tuple[list, int, int]] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def push(x):
        (stack[-1][0] if stack else out).append(x)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "(":
            stack.append(([], line, col))
            i, col = i + 1, col + 1
            continue
        if ch == ")":
            if not stack:
                raise ParseError(line, col, "unbalanced ')'")
            items, l0, c0 = stack.pop()
            push(SList(tuple(items), l0, c0))
            i, col = i + 1, col + 1
            continue
        if ch == '"':
            j, buf = i + 1, []
            while j < n and text[j] != '"':
                if text[j] == "\\" and j + 1 < n:
                    j += 1
                if text[j] == "\n":
                    raise ParseError(line, col, "unterminated string")
                buf.append(text[j])
                j += 1
            if j >= n:
                raise ParseError(line, col, "unterminated string")
            push(Atom("".join(buf), line, col))
            col += j + 1 - i
            i = j + 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in '();"':
            j += 1
        push(Atom(text[i:j], line, col))
        col += j - i
        i = j
    if stack:
        _, l0, c0 = stack[-1]
        raise ParseError(l0, c0, "unclosed '('")
    return out


def _where(x: SExpr) -> tuple[int, int]:
    return x.line, x.col


def _err(x: SExpr, reason: str) -> ParseError:
    return ParseError(x.line, x.col, reason)


def _head(x: SExpr) -> Optional[str]:
    if isinstance(x, SList) and x.items and isinstance(x.items[0], Atom):
        return x.items[0].text
    return None


class ProofReader:
    def __init__(self, p: Presentation):
        self.p = p
        self.sig = p.signature

    def term(self, x: SExpr) -> Term:
        if isinstance(x, Atom):
            if x.text in self.sig:
                if self.sig.arity(x.text) != 0:
                    raise _err(x, f"{x.text} expects {self.sig.arity(x.text)} arguments")
                return App(x.text, ())
            return Var(x.text)
        if not x.items or not isinstance(x.items[0], Atom):
            raise _err(x, "expected (symbol args...)")
        sym = x.items[0].text
        if sym not in self.sig:
            raise _err(x.items[0], f"unknown symbol {sym!r}")
        args = tuple(self.term(a) for a in x.items[1:])
        if len(args) != self.sig.arity(sym):
            raise _err(x, f"{sym} expects {self.sig.arity(sym)} arguments, got {len(args)}")
        return App(sym, args)

    def _atoms(self, x: SExpr, what: str) -> list[str]:
        if not isinstance(x, SList) or not all(isinstance(a, Atom) for a in x.items):
            raise _err(x, f"expected a list of {what}")
        return [a.text for a in x.items]

    def _over(self, items: list, x: SExpr) -> tuple[Optional[FinSet], list]:
        if items and isinstance(items[0], Atom) and items[0].text == ":over":
            if len(items) < 2:
                raise _err(x, ":over needs a list of variables")
            return FinSet(self._atoms(items[1], "variables")), items[2:]
        return None, items

    def kleisli(self, x: SExpr) -> KleisliMap:
        head = _head(x)
        if head == "term":
            over, rest = self._over(list(x.items[1:]), x)
            if len(rest) != 1:
                raise _err(x, "(term [:over (vars)] T) takes one term")
            t = self.term(rest[0])
            arity = over if over is not None else vars_of(t)
            return self._checked(KleisliMap.single(t, arity), x)
        if head == "subst":
            over, rest = self._over(list(x.items[1:]), x)
            body = {}
            for entry in rest:
                if not isinstance(entry, SList) or len(entry.items) != 2 or not isinstance(entry.items[0], Atom):
                    raise _err(entry, "expected (name term)")
                key = entry.items[0].text
                if key in body:
                    raise _err(entry, f"{key!r} is substituted twice")
                body[key] = self.term(entry.items[1])
            arity = over
            if arity is None:
                names: set = set()
                for t in body.values():
                    names |= variables(t)
                arity = FinSet(names)
            return self._checked(KleisliMap.from_mapping(FinSet(body), arity, body), x)
        raise _err(x, "expected a Kleisli map: (subst ...) or (term ...)")

    def _checked(self, w: KleisliMap, x: SExpr) -> KleisliMap:
        bad = w.violations(self.sig)
        if bad:
            raise _err(x, bad[0])
        return w

    def fun(self, x: SExpr, cod: FinSet) -> FinFun:
        if _head(x) != "fun":
            raise _err(x, "expected (fun (c d) ...)")
        graph = {}
        for entry in x.items[1:]:
            pair = self._atoms(entry, "two names")
            if len(pair) != 2:
                raise _err(entry, "expected (c d)")
            if pair[1] not in cod:
                raise _err(entry, f"{pair[1]!r} is not in {cod}")
            graph[pair[0]] = pair[1]
        return FinFun.from_mapping(FinSet(graph), cod, graph)

    def proof(self, x: SExpr) -> Proof:
        head = _head(x)
        if head is None:
            raise _err(x, "expected a proof node")
        args = list(x.items[1:])

        def arity(k: int) -> None:
            if len(args) != k:
                raise _err(x, f"({head} ...) takes {k} argument{'s' if k != 1 else ''}")

        if head == "axiom":
            arity(1)
            if not isinstance(args[0], Atom):
                raise _err(x, "axiom name expected")
            if args[0].text not in self.p.axiom_names():
                raise _err(args[0], f"unknown axiom {args[0].text!r}")
            return Axiom(args[0].text)
        if head == "ref":
            arity(1)
            return Ref(self.kleisli(args[0]))
        if head in ("subst", "term"):
            return Ref(self.kleisli(x))
        if head == "sym":
            arity(1)
            return Sym(self.proof(args[0]))
        if head == "trans":
            arity(2)
            return Trans(self.proof(args[0]), self.proof(args[1]))
        if head == "comp":
            arity(2)
            return Comp(self.proof(args[0]), self.proof(args[1]))
        if head == "ext":
            arity(2)
            return Ext(FinSet(self._atoms(args[0], "names")), self.proof(args[1]))
        if head == "local":
            if len(args) < 2:
                raise _err(x, "(local U V (via F P)...) needs the pair")
            u, v = self.kleisli(args[0]), self.kleisli(args[1])
            family, proofs = [], []
            for via in args[2:]:
                if _head(via) != "via" or len(via.items) != 3:
                    raise _err(via, "expected (via F P)")
                family.append(self.fun(via.items[1], u.coarity))
                proofs.append(self.proof(via.items[2]))
            return Local(u, v, tuple(family), tuple(proofs))
        if head == "comp+":
            if len(args) < 2:
                raise _err(x, "(comp+ P P1 ...) needs at least one branch")
            return CompCoprod(self.proof(args[0]), tuple(self.proof(a) for a in args[1:]))
        if head == "local1":
            arity(4)
            u, v = self.kleisli(args[0]), self.kleisli(args[1])
            return Local1(u, v, self.fun(args[2], u.coarity), self.proof(args[3]))
        raise _err(x, f"unknown proof node {head!r}")


def parse_proof(text: str, p: Presentation, source: str = "") -> Proof:
    try:
        exprs = read_sexprs(text)
        if len(exprs) != 1:
            line, col = _where(exprs[1]) if len(exprs) > 1 else (1, 1)
            raise ParseError(line, col, "a proof file holds exactly one proof")
        return ProofReader(p).proof(exprs[0])
    except ParseError as exc:
        if source and not exc.source:
            raise ParseError(exc.line, exc.col, exc.reason, source) from None
        raise


def _atom_text(s: str) -> str:
    if s and not any(ch.isspace() or ch in '();"' for ch in s):
        return s
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def sexpr_term(t: Term) -> str:
    if isinstance(t, Var):
        return _atom_text(str(t.name))
    if not t.args:
        return _atom_text(t.op)
    return "(" + " ".join([_atom_text(t.op)] + [sexpr_term(a) for a in t.args]) + ")"


def sexpr_kleisli(w: KleisliMap) -> str:
    over = " ".join(_atom_text(a) for a in w.arity)
    parts = [f"(subst :over ({over})"]
    parts += [f"({_atom_text(c)} {sexpr_term(t)})" for c, t in w.items()]
    return " ".join(parts) + ")"


def sexpr_fun(f: FinFun) -> str:
    body = " ".join(f"({_atom_text(x)} {_atom_text(y)})" for x, y in f.items())
    return f"(fun {body})" if body else "(fun)"


def format_proof(node: Proof) -> str:
    if isinstance(node, Axiom):
        return f"(axiom {_atom_text(node.name)})"
    if isinstance(node, Ref):
        return f"(ref {sexpr_kleisli(node.u)})"
    if isinstance(node, Sym):
        return f"(sym {format_proof(node.p)})"
    if isinstance(node, Trans):
        return f"(trans {format_proof(node.p)} {format_proof(node.q)})"
    if isinstance(node, Comp):
        return f"(comp {format_proof(node.outer)} {format_proof(node.inner)})"
    if isinstance(node, Ext):
        names = " ".join(_atom_text(v) for v in node.V)
        return f"(ext ({names}) {format_proof(node.p)})"
    if isinstance(node, Local):
        vias = "".join(
            f" (via {sexpr_fun(e)} {format_proof(q)})" for e, q in zip(node.family, node.proofs)
        )
        return f"(local {sexpr_kleisli(node.u)} {sexpr_kleisli(node.v)}{vias})"
    if isinstance(node, CompCoprod):
        parts = " ".join(format_proof(b) for b in node.branches)
        return f"(comp+ {format_proof(node.p)} {parts})"
    if isinstance(node, Local1):
        return (
            f"(local1 {sexpr_kleisli(node.u)} {sexpr_kleisli(node.v)} "
            f"{sexpr_fun(node.e)} {format_proof(node.p)})"
        )
    raise ValueError(f"unknown proof node {type(node).__name__}")
