from __future__ import annotations

import random

from meskit.corpus import monoid, random_walk, semilattice
from meskit.eml import check, elaborate_derived, is_primitive
from meskit.finset import UNIT_POINT, FinSet
from meskit.rewrite import match, replace_at, rewrite_steps, search, subterm_at
from meskit.syntax import App, Var, app

P = semilattice()
a, b, c = Var("a"), Var("b"), Var("c")
ABC = FinSet.of("a", "b", "c")


def test_match():
    x, y = Var("x"), Var("y")
    pat = app("meet", x, y)
    assert match(pat, app("meet", a, app("meet", b, c))) == {"x": a, "y": app("meet", b, c)}
    assert match(app("meet", x, x), app("meet", a, b)) is None
    assert match(app("meet", x, x), app("meet", a, a)) == {"x": a}
    assert match(pat, a) is None


def test_paths():
    t = app("meet", a, app("meet", b, c))
    assert subterm_at(t, (1, 0)) == b
    assert replace_at(t, (1, 0), c) == app("meet", a, app("meet", c, c))
    assert replace_at(t, (), a) == a


def test_every_step_is_a_checked_proof():
    t = app("meet", app("meet", a, b), app("meet", b, b))
    steps = list(rewrite_steps(P, t, ABC))
    assert steps
    for new, proof in steps:
        j = check(P, proof)
        assert j.lhs(UNIT_POINT) == t and j.rhs(UNIT_POINT) == new


def test_coproduct_steps_check_and_elaborate():
    t = app("meet", a, app("meet", b, b))
    for new, proof in rewrite_steps(P, t, ABC, coprod=True):
        j = check(P, proof)
        assert j.rhs(UNIT_POINT) == new
        flat = elaborate_derived(proof, P)
        assert is_primitive(flat) and check(P, flat) == j


def test_search_finds_proofs():
    lhs = app("meet", app("meet", a, b), a)
    rhs = app("meet", a, b)
    proof = search(P, lhs, rhs, ABC)
    j = check(P, proof)
    assert (j.lhs(UNIT_POINT), j.rhs(UNIT_POINT)) == (lhs, rhs)
    assert check(P, search(P, a, a, ABC)).lhs(UNIT_POINT) == a


def test_search_gives_up_without_claiming_anything():
    assert search(P, a, b, ABC, max_steps=2) is None
    m = monoid()
    assert search(m, app("mul", a, b), app("mul", b, a), ABC, max_steps=2) is None


def test_random_walks_check():
    rng = random.Random(7)
    for _ in range(10):
        start = app("meet", a, app("meet", b, c))
        end, proof = random_walk(P, start, ABC, 3, rng)
        j = check(P, proof)
        assert (j.lhs(UNIT_POINT), j.rhs(UNIT_POINT)) == (start, end)
