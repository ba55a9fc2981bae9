from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from meskit import clone as K
from meskit.algebra import FiniteAlgebra, enumerate_algebras, eval_term
from meskit.finset import FinSet, lhom
from meskit.laws import (
    bijection_laws,
    clone_strength_coherence,
    dd_change_triangle,
    dd_monad_laws,
    mult_coincidence,
    semantics_morphism_laws,
    unit_coincidence,
)
from meskit.syntax import App, Signature, Var, app

MEET = Signature([("meet", 2)])
TWO = FinSet.range(2)
MIN = FiniteAlgebra.from_ops(MEET, TWO, {"meet": min})


def test_carrier_sizes():
    A = FinSet.of("a", "b")
    KA = K.DDCarrier.of(TWO, A)
    assert KA.size == 16
    assert len(K.dd_carrier(TWO, A)) == 16
    assert KA.carrier() == K.dd_carrier(TWO, A)
    KK = K.kk_carrier(KA)
    assert KK.env_count == 2**16
    assert KK.size.bit_length() - 1 == 2**16


def test_code_functional_round_trip():
    KA = K.DDCarrier.of(TWO, FinSet.of("a", "b"))
    for code in KA.codes():
        assert KA.code(KA.functional(code)) == code
        assert KA.code_of_label(KA.label(code)) == code


def test_base_must_be_distinct():
    with pytest.raises(ValueError):
        K.DDCarrier(TWO, ["a", "a"])


def test_unit_is_evaluation():
    KA = K.DDCarrier.of(TWO, FinSet.of("a", "b"))
    assert K.dd_unit_code(KA, "a") == ("0", "0", "1", "1")
    assert K.dd_unit_code(KA, "b") == ("0", "1", "0", "1")


def test_units_coincide():
    assert unit_coincidence(2).passed


@pytest.mark.parametrize("X,A", [(FinSet.range(1), FinSet.of("a", "b")), (TWO, FinSet.of("a"))])
def test_multiplications_coincide_exhaustively(X, A):
    r = mult_coincidence(X, A)
    assert r.passed and "exhaustive" in r.detail


def test_multiplications_coincide_on_the_probe():
    r = mult_coincidence(TWO, FinSet.of("a", "b"), samples=8)
    assert r.passed and "probe" in r.detail


def test_probe_detects_a_wrong_route():
    # reading G at a constant environment instead of δ(ρ) must be caught
    KA = K.DDCarrier.of(TWO, FinSet.of("a", "b"))
    KK = K.kk_carrier(KA)
    probe = K.Probe(KK)
    wrong = lambda G: (lambda rho: G(K.delta(lambda a: "0")))
    assert KA.code(wrong(probe)) != KA.code(K.dd_mult_fn(probe))
    assert KA.code(K.clone_mult_fn(probe)) == KA.code(K.dd_mult_fn(probe))


def test_dd_monad_laws():
    for r in dd_monad_laws(2):
        assert r.passed, r.line()


def test_clone_strength_laws():
    for r in clone_strength_coherence(1):
        assert r.passed, r.line()


def test_semantics_of_min_is_pointwise_min():
    A = FinSet.of("a", "b")
    KA = K.DDCarrier.of(TWO, A)
    code = K.semantics_transform(MIN, A, app("meet", Var("a"), Var("b")))
    assert code == tuple(min(e) for e in KA.envs())


def test_semantics_laws():
    for r in semantics_morphism_laws(1, 2):
        assert r.passed, r.line()


def test_bijection():
    for r in bijection_laws(2, 2):
        assert r.passed, r.line()


def test_algebra_of_morphism_needs_the_carrier_arity():
    tau = K.semantics_table(MIN, [FinSet.of("a0")], 1)
    with pytest.raises(ValueError, match="carrier"):
        K.algebra_of_morphism(tau)


def test_unnatural_table_is_rejected():
    A, B = FinSet.of("a0"), TWO
    tau = K.semantics_table(MIN, [A, B], 1)
    comps = {A: dict(tau.components[A]), B: tau.components[B]}
    comps[A][Var("a0")] = ("1", "0")  # swaps the projection
    bad = K.MonadMorphismTable(MEET, TWO, 1, comps)
    assert not bad.is_natural()
    with pytest.raises(ValueError, match="natural"):
        K.algebra_of_morphism(bad)


def test_restrict_along_translations():
    assert K.restrict_algebra(K.Translation.identity(MEET), MIN) == MIN
    sig = Signature([("join", 2)])
    flip = K.Translation(sig, MEET, (("join", app("meet", Var("1"), Var("0"))),))
    got = K.restrict_algebra(flip, MIN)
    assert got.table("join") == MIN.table("meet")
    with pytest.raises(ValueError):
        K.Translation.inclusion(sig, MEET)


def test_restrict_clone_algebra_is_alpha():
    tau = K.semantics_table(MIN, [TWO], 1)
    assert K.restrict_algebra(tau, K.CloneAlgebra(TWO)) == MIN


def test_power_algebra_is_pointwise():
    V = FinSet.of("p", "q")
    P = K.power_algebra(MIN, V)
    assert len(P.carrier) == 4
    for f, g in itertools.product(P.carrier, repeat=2):
        h = P.op("meet", f, g)
        for v in V:
            from meskit.finset import apply_label

            assert apply_label(h, v) == min(apply_label(f, v), apply_label(g, v))


def test_power_structure_through_dd_is_the_power_algebra():
    for r in dd_change_triangle(1, 2):
        assert r.passed, r.line()
    V = FinSet.of("p", "q")
    KY, k = K.power_dd_structure(TWO, V)
    assert K.algebra_through(MIN, lhom(V, TWO), k) == K.power_algebra(MIN, V)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(list(enumerate_algebras(MEET, 2))), st.integers(0, 15))
def test_cleval_of_semantics_is_evaluation(alg, n):
    X = alg.carrier
    a = X.elements[n % len(X)]
    b = X.elements[(n // 2) % len(X)]
    t = app("meet", Var(a), app("meet", Var(b), Var(a)))
    assert K.cleval(K.semantics_fn(alg, t)) == eval_term(alg, {x: x for x in X}, t)
