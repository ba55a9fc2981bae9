from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from meskit.algebra import (
    Environment,
    FiniteAlgebra,
    SignatureMismatch,
    counterexample,
    enumerate_algebras,
    enumerate_models,
    eval_term,
    filter_models,
    interpret,
    is_homomorphism,
    is_model,
    satisfies,
)
from meskit.corpus import monoid, semilattice
from meskit.finset import FinFun, FinSet, ev_right, pair_label
from meskit.laws import closure_laws, naturality_transfer, substitution_lemma
from meskit.monad import kleisli_compose
from meskit.parse import parse_presentation
from meskit.syntax import App, Equation, KleisliMap, Presentation, Signature, Var, app

from strategies import SIG, kleisli_maps

MEET = Signature([("meet", 2)])
TWO = FinSet.range(2)
MIN = FiniteAlgebra.from_ops(MEET, TWO, {"meet": min})
LEFT = FiniteAlgebra.from_ops(MEET, TWO, {"meet": lambda a, b: a})
x, y = Var("x"), Var("y")


def test_eval_examples():
    assert eval_term(MIN, {"x": "1"}, x) == "1"
    assert eval_term(MIN, {"x": "1", "y": "0"}, app("meet", x, y)) == "0"


def test_eval_needs_the_symbol():
    with pytest.raises(SignatureMismatch):
        eval_term(MIN, {"x": "0"}, app("join", x, x))


def test_interpret_identity_is_evaluation():
    A = FinSet.of("a", "b")
    g = interpret(MIN, KleisliMap.identity(A))
    assert g == ev_right(A, TWO)


def test_interpret_constant_term():
    sig = Signature([("e", 0), ("meet", 2)])
    alg = FiniteAlgebra.from_ops(sig, TWO, {"e": lambda: "1", "meet": min})
    g = interpret(alg, KleisliMap.single(App("e"), FinSet.of("x")))
    assert set(g.values) == {"1"}


def test_comm_sides_agree_in_min_algebra():
    p = semilattice()
    comm = p.axiom("comm")
    assert interpret(MIN, comm.lhs) == interpret(MIN, comm.rhs)


def test_satisfaction_examples():
    p = semilattice()
    assert is_model(MIN, p)
    assert satisfies(LEFT, p.axiom("idem"))
    env, c = counterexample(LEFT, p.axiom("comm"))
    assert env.as_dict() == {"x": "0", "y": "1"}
    refl = Equation.of_terms("refl", app("meet", x, y), app("meet", x, y), FinSet.of("x", "y"))
    assert all(satisfies(a, refl) for a in enumerate_algebras(MEET, 2))


def test_homomorphism_examples():
    assert is_homomorphism(FinFun.identity(TWO), MIN, MIN)
    const = FinFun.from_callable(TWO, TWO, lambda _: "0")
    assert is_homomorphism(const, MIN, MIN)
    flip = FinFun.from_mapping(TWO, TWO, {"0": "1", "1": "0"})
    assert not is_homomorphism(flip, MIN, MIN)


def test_enumeration_counts():
    assert len(list(enumerate_algebras(Signature(), 1))) == 1
    assert len(list(enumerate_algebras(MEET, 2))) == 17
    assert len(list(enumerate_algebras(Signature([("e", 0), ("meet", 2)]), 2))) == 33


def test_semilattice_models():
    models = list(enumerate_models(semilattice(), 2))
    # the trivial algebra, and min and max on {0, 1}
    assert len(models) == 3
    assert MIN in models
    assert len(list(enumerate_models(semilattice(), 3))) == 12


def test_inconsistent_presentation_has_only_trivial_models():
    p = parse_presentation("sig meet/2\nax triv: forall x y. x = y\n")
    assert [len(m.carrier) for m in enumerate_models(p, 2)] == [1]


def test_no_axioms_means_every_algebra():
    p = Presentation(MEET, [])
    assert list(enumerate_models(p, 2)) == list(enumerate_algebras(MEET, 2))


@pytest.mark.parametrize("p", [semilattice(), monoid()], ids=["semilattice", "monoid"])
def test_pruned_enumeration_matches_the_filter(p):
    assert list(enumerate_models(p, 3)) == list(filter_models(p, enumerate_algebras(p.signature, 3)))


def test_tables_must_be_total_and_closed():
    with pytest.raises(ValueError):
        FiniteAlgebra(MEET, TWO, (("0", "1"),))
    with pytest.raises(ValueError, match="leaves the carrier"):
        FiniteAlgebra(MEET, TWO, (("0", "1", "2", "0"),))


def test_environment_label():
    env = Environment.from_mapping(FinSet.of("x", "y"), {"x": "1", "y": "0"})
    assert env("x") == "1"
    assert env.label == "{x↦1,y↦0}"


def test_law_suites():
    assert substitution_lemma(2).passed
    assert naturality_transfer(2).passed
    for r in closure_laws(semilattice(), 3, 2):
        assert r.passed, r.line()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_substitution_lemma_random(data):
    A, B = FinSet.of("a", "b"), FinSet.of("u", "v")
    sig = SIG
    alg = FiniteAlgebra.from_ops(
        sig, TWO, {"e": lambda: "1", "g": lambda a: "1" if a == "0" else "0", "f": max}
    )
    w1 = data.draw(kleisli_maps(FinSet.of("c"), B, sig))
    w2 = data.draw(kleisli_maps(B, A, sig))
    rho = dict(zip(A, data.draw(st.tuples(*[st.sampled_from(["0", "1"])] * 2))))
    inner = {b: eval_term(alg, rho, w2(b)) for b in B}
    assert eval_term(alg, rho, kleisli_compose(w1, w2).body[0]) == eval_term(alg, inner, w1.body[0])
