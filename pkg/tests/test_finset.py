from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from meskit.finset import (
    EMPTY,
    UNIT,
    FinFun,
    FinSet,
    LabelError,
    act,
    apply_label,
    assoc_inv,
    assoc_iso,
    coproduct,
    ev_left,
    ev_right,
    functions,
    graph_label,
    inverse,
    is_bijection,
    lhom,
    pair_label,
    parse_graph_label,
    rhom,
    swap,
    transpose_left,
    transpose_right,
    unit_iso,
    unpair_label,
    untranspose_left,
    untranspose_right,
)
from meskit.laws import action_coherence, adjunction_round_trips, cardinalities, sets_up_to

names = st.text(alphabet="abcxyz01_", min_size=1, max_size=4)


def test_finset_is_sorted_and_rejects_duplicates():
    assert FinSet.of("b", "a").elements == ("a", "b")
    assert FinSet.of("b", "a") == FinSet.of("a", "b")
    with pytest.raises(ValueError, match="duplicate"):
        FinSet.of("b", "a", "b")


def test_act_examples():
    assert list(act(FinSet.of("v"), FinSet.of("c"))) == [pair_label("v", "c")]
    assert len(act(EMPTY, FinSet.of("a", "b"))) == 0
    assert len(act(FinSet.of("0", "1"), FinSet.of("a", "b", "c"))) == 6


def test_hom_examples():
    assert len(rhom(FinSet.of("a"), FinSet.of("0", "1"))) == 2
    assert len(rhom(EMPTY, FinSet.of("0", "1"))) == 1
    assert len(rhom(FinSet.of("a", "b"), FinSet.of("0", "1", "2"))) == 9
    X = FinSet.of("p", "q", "r")
    assert len(lhom(FinSet.of("v"), X)) == len(X)
    assert len(lhom(EMPTY, X)) == 1
    assert len(lhom(FinSet.of("0", "1"), FinSet.of("a", "b"))) == 4


def test_ev_right_is_pointwise_application():
    A, X = FinSet.of("a", "b"), FinSet.of("0", "1")
    ev = ev_right(A, X)
    assert len(ev.dom) == 8
    for rho, a in itertools.product(rhom(A, X), A):
        assert ev(pair_label(rho, a)) == apply_label(rho, a)
    one = FinSet.of("a")
    assert ev_right(one, X)(pair_label(graph_label([("a", "1")]), "a")) == "1"
    assert ev.is_surjective()


def test_ev_left_evaluates_at_the_left_point():
    V, X = FinSet.of("0", "1"), FinSet.of("a", "b")
    ev = ev_left(V, X)
    for v, g in itertools.product(V, lhom(V, X)):
        assert ev(pair_label(v, g)) == parse_graph_label(g)[v]


def test_transpose_of_projection_is_constant_family():
    V, C = FinSet.of("0", "1"), FinSet.of("a", "b")
    proj = FinFun.from_callable(act(V, C).carrier, V, lambda p: unpair_label(p)[0])
    g = transpose_right(proj, V, C)
    for v in V:
        assert set(parse_graph_label(g(v)).values()) == {v}


def test_transpose_of_evaluation_is_identity():
    for V, X in itertools.product(sets_up_to(2, "s"), repeat=2):
        L = lhom(V, X)
        assert transpose_left(ev_left(V, X), V, L) == FinFun.identity(L)


def test_round_trips_exhaustive_small():
    assert adjunction_round_trips(2).passed


def test_round_trips_at_three():
    V, C, D = FinSet.of("0", "1", "2"), FinSet.of("a"), FinSet.of("x", "y", "z")
    for f in itertools.islice(functions(act(V, C).carrier, D), 0, None, 3):
        assert untranspose_right(transpose_right(f, V, C), C, D) == f
        assert untranspose_left(transpose_left(f, V, C), V, D) == f


def test_unit_and_assoc_isos():
    A = FinSet.of("a", "b")
    assert unit_iso(A)(pair_label("*", "a")) == "a"
    one = FinSet.of("u")
    iso = assoc_iso(one, one, one)
    assert is_bijection(iso) and len(iso.dom) == 1
    U, V, C = FinSet.of("0", "1"), FinSet.of("p"), FinSet.of("a", "b")
    assert assoc_iso(U, V, C).then(assoc_inv(U, V, C)) == FinFun.identity(assoc_iso(U, V, C).dom)


def test_coherence_suite():
    assert all(r.passed for r in action_coherence(2))
    assert cardinalities(3).passed


def test_coproduct_injections_are_jointly_surjective():
    carrier, (i, j) = coproduct(FinSet.of("a"), FinSet.of("a", "b"))
    assert len(carrier) == 3
    assert i.image() | j.image() == set(carrier)
    assert not (i.image() & j.image())


def test_swap_is_an_involution():
    V, C = FinSet.of("0", "1"), FinSet.of("a", "b", "c")
    assert swap(V, C).then(swap(C, V)) == FinFun.identity(act(V, C).carrier)
    assert inverse(swap(V, C)) == swap(C, V)


def test_finfun_rejects_partial_graphs():
    with pytest.raises(ValueError):
        FinFun.from_mapping(FinSet.of("a", "b"), FinSet.of("0"), {"a": "0"})


def test_reserved_characters_rejected():
    with pytest.raises(LabelError):
        unpair_label("not a pair")


@given(names, names)
def test_pair_label_round_trip(a, b):
    assert unpair_label(pair_label(a, b)) == (a, b)


@given(st.lists(st.tuples(names, names), max_size=4, unique_by=lambda p: p[0]))
def test_graph_label_round_trip(items):
    assert parse_graph_label(graph_label(items)) == dict(items)


@given(st.integers(0, 3), st.integers(0, 3))
def test_cardinality_formulas(n, m):
    C, D = FinSet.range(n), FinSet.range(m)
    assert len(rhom(C, D)) == m**n
    assert len(act(C, D)) == n * m
    assert UNIT.elements == ("*",)
