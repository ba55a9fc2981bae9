from __future__ import annotations

import pytest
from hypothesis import given, settings

from meskit.corpus import MONOID, SEMILATTICE, monoid, semilattice
from meskit.eml import check
from meskit.finset import UNIT_POINT, FinSet
from meskit.laws import parse_suite
from meskit.parse import (
    ParseError,
    format_equation,
    format_presentation,
    format_proof,
    format_term,
    parse_equation,
    parse_presentation,
    parse_proof,
    parse_term,
)
from meskit.syntax import App, Var, app

from strategies import SIG, terms

P = semilattice()


def test_stock_presentations():
    assert P.name == "semilattice"
    assert P.signature.ops == (("meet", 2),)
    assert [e.name for e in P.axioms] == ["assoc", "comm", "idem"]
    assert len(monoid().signature.ops) == 2


def test_empty_file_is_the_empty_presentation():
    p = parse_presentation("")
    assert p.signature.ops == () and len(p.axioms) == 0
    p = parse_presentation("# only a comment\n\n")
    assert len(p.axioms) == 0


def test_comments_and_several_symbols_per_line():
    p = parse_presentation("sig e/0, mul/2  # a monoid signature\nax u: forall x. mul(e,x) = x\n")
    assert p.signature.ops == (("e", 0), ("mul", 2))


def test_constants_parse_without_parentheses():
    sig = monoid().signature
    assert parse_term("mul(e, x)", sig) == app("mul", App("e"), Var("x"))
    assert parse_term("e()", sig) == App("e")


def test_equation_without_forall_uses_the_variables_seen():
    e = parse_equation("meet(x,y) = meet(y,x)", P.signature)
    assert set(e.arity) == {"x", "y"}
    assert e.name == "goal"


def test_named_equation_prefix():
    e = parse_equation("c: forall x y z. meet(x,y) = meet(y,x)", P.signature)
    assert e.name == "c" and len(e.arity) == 3


@pytest.mark.parametrize(
    "text,line,col,reason",
    [
        ("sig meet/2\nax a: forall x. join(x,x) = x\n", 2, 17, "unknown symbol"),
        ("sig meet/2\nax a: forall x. meet(x,y) = x\n", 2, 24, "not declared"),
        ("sig meet/2\nax a: forall x. meet(x) = x\n", 2, 17, "expects 2"),
        ("sig meet/2\nfoo bar\n", 2, 1, "unknown directive"),
        ("sig meet 2\n", 1, 5, "symbol/arity"),
        ("sig meet/2, meet/2\n", 1, 13, "duplicate symbol"),
        ("sig meet/2\nax a: forall x. x = x\nax a: forall x. x = x\n", 3, 4, "duplicate axiom"),
        ("sig meet/2\nax a: forall x x. x = x\n", 2, 16, "declared twice"),
        ("sig meet/2\nax a: forall x. meet(x,x) x\n", 2, 27, "expected '='"),
    ],
)
def test_errors_are_located(text, line, col, reason):
    with pytest.raises(ParseError) as err:
        parse_presentation(text, source="f.mes")
    e = err.value
    assert reason in e.reason
    assert (e.line, e.col) == (line, col), str(e)
    assert str(e).startswith(f"f.mes:{line}:{col}:")


def test_proof_errors_are_located():
    with pytest.raises(ParseError) as err:
        parse_proof("(trans (axiom comm)\n  (axiom nope))", P)
    assert (err.value.line, err.value.col) == (2, 10)
    with pytest.raises(ParseError, match="unbalanced|unclosed|unexpected"):
        parse_proof("(sym (axiom comm)", P)
    with pytest.raises(ParseError, match="unknown proof node"):
        parse_proof("(frob)", P)


def test_presentation_round_trip():
    for text in (SEMILATTICE, MONOID):
        p = parse_presentation(text)
        again = parse_presentation(format_presentation(p))
        assert format_presentation(again) == format_presentation(p)
        assert again.axioms == p.axioms


def test_equation_round_trip():
    for e in P.axioms:
        assert parse_equation(format_equation(e), P.signature) == e


def test_parse_suites():
    for p in (semilattice(), monoid()):
        for r in parse_suite(p):
            assert r.passed, r.line()


def test_proof_round_trip():
    proof = parse_proof("(comp (axiom comm) (subst (x b) (y a)))", P)
    again = parse_proof(format_proof(proof), P)
    assert again == proof
    assert check(P, again).lhs(UNIT_POINT) == app("meet", Var("b"), Var("a"))


@settings(max_examples=100, deadline=None)
@given(terms(FinSet.of("x", "y"), SIG, 8))
def test_term_round_trip(t):
    assert parse_term(format_term(t), SIG) == t
