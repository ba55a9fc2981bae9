from __future__ import annotations

import pytest

from meskit.algebra import FiniteAlgebra, enumerate_models, satisfies
from meskit.corpus import generate_corpus, monoid, semilattice
from meskit.eml import check
from meskit.finset import UNIT_POINT, FinSet
from meskit.freealg import (
    Decider,
    Finite,
    Truncated,
    build,
    decide,
    hom_extension,
    model_screen,
    quotient_map,
    quotient_strength_check,
    verify_witness,
)
from meskit.laws import quotient_laws
from meskit.parse import parse_equation, parse_presentation
from meskit.syntax import Presentation, Signature, Var, app

P = semilattice()
a, b = Var("a"), Var("b")


@pytest.mark.parametrize("n,count", [(1, 1), (2, 3), (3, 7)])
def test_semilattice_free_algebra_sizes(n, count):
    r = build(P, FinSet(f"g{i}" for i in range(n)))
    assert isinstance(r, Finite)
    assert len(r.classes) == count


def test_history_and_stable_depth():
    r = build(P, FinSet.of("a", "b"))
    assert r.table.history == [2, 3, 3]
    assert r.stable_depth == 1


def test_quotient_map_example():
    r = build(P, FinSet.of("a", "b"))
    lhs = quotient_map(r, app("meet", a, app("meet", b, a)))
    assert lhs == quotient_map(r, app("meet", a, b))
    assert lhs != quotient_map(r, a)


def test_empty_signature_gives_the_generators():
    r = build(Presentation(Signature(), []), FinSet.of("a", "b", "c"))
    assert isinstance(r, Finite) and len(r.classes) == 3


def test_no_generators_and_no_constants_is_empty():
    r = build(P, FinSet())
    assert isinstance(r, Finite) and len(r.classes) == 0


def test_monoid_is_truncated_with_growing_counts():
    r = build(monoid(), FinSet.of("a"), d_max=3)
    assert isinstance(r, Truncated)
    h = r.table.history
    assert all(x < y for x, y in zip(h, h[1:]))


def test_budget_truncates_early():
    r = build(monoid(), FinSet.of("a", "b"))
    assert isinstance(r, Truncated)
    assert r.depth == 2 and r.table.history == [2, 7, 31]
    small = build(P, FinSet.of("a", "b", "c"), budget=50)
    assert isinstance(small, Truncated)


def test_invalid_presentation_is_refused():
    j = parse_equation("x = join(x,x)", Signature([("join", 2)]), "j")
    bad = Presentation(Signature([("meet", 2)]), [j])
    with pytest.raises(ValueError):
        build(bad, FinSet.of("a"))


def test_quotient_is_a_model_and_a_homomorphic_image():
    for r in quotient_laws(P, 2, 3):
        assert r.passed, r.line()


def test_hom_extension_rejects_non_models():
    left = FiniteAlgebra.from_ops(P.signature, FinSet.range(2), {"meet": lambda x, y: x})
    r = build(P, FinSet.range(2))
    with pytest.raises(ValueError, match="not a model"):
        hom_extension(r, left)
    good = next(m for m in enumerate_models(P, 2) if len(m.carrier) == 2)
    h = hom_extension(r, good)
    assert h.dom == r.classes


@pytest.mark.parametrize(
    "text,status",
    [
        ("meet(x,y) = meet(y,x)", "Equal"),
        ("meet(x,meet(y,x)) = meet(x,y)", "Equal"),
        ("meet(x,y) = x", "NotEqual"),
        ("x = y", "NotEqual"),
        ("x = x", "Equal"),
    ],
)
def test_decide_semilattice(text, status):
    e = parse_equation(text, P.signature)
    v = decide(P, e)
    assert v.status == status
    if status == "NotEqual":
        assert verify_witness(P, e, v.witness)


def test_decide_on_truncated_builds():
    m = monoid()
    dec = Decider(m, d_max=3, k=3)
    eq = dec.decide(parse_equation("mul(mul(e,x),y) = mul(x,y)", m.signature))
    assert eq.status == "Equal" and eq.basis.startswith("closure")
    ne = dec.decide(parse_equation("mul(x,y) = mul(y,x)", m.signature))
    assert ne.status == "NotEqual" and verify_witness(m, parse_equation("mul(x,y) = mul(y,x)", m.signature), ne.witness)


def test_decide_unknown_when_nothing_separates():
    # no model of size ≤ 1 separates anything, and closure never merges
    m = monoid()
    e = parse_equation("mul(x,y) = mul(y,x)", m.signature)
    v = Decider(m, d_max=1, k=1).decide(e)
    assert v.status == "Unknown"


def test_forged_witness_is_rejected():
    e = parse_equation("meet(x,y) = x", P.signature)
    w = model_screen(P, e, 2)
    assert verify_witness(P, e, w)
    left = FiniteAlgebra.from_ops(P.signature, FinSet.range(2), {"meet": lambda x, y: x})
    forged = type(w)(left, w.environment, w.coarity_element, w.lhs_value, w.rhs_value)
    assert not verify_witness(P, e, forged)


def test_decide_validates_symbols():
    e = parse_equation("join(x,y) = x", Signature([("join", 2)]))
    with pytest.raises(ValueError):
        decide(P, e)


def test_strength_check():
    assert quotient_strength_check(P, FinSet.of("a"), FinSet.of("v", "w"))
    assert quotient_strength_check(P, FinSet.of("a", "b"), FinSet.of("v"))


def test_corpus_conclusions_agree_with_the_quotient():
    dec = Decider(P)
    for name, proof in generate_corpus(P, 24, seed=0):
        j = check(P, proof)
        if len(j.coarity) != 1:
            continue
        e = j.as_equation(name)
        assert dec.decide(e).status == "Equal", name
