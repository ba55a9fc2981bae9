from __future__ import annotations

from pathlib import Path

import pytest

from meskit.corpus import generate_corpus, monoid, semilattice
from meskit.eml import (
    Axiom,
    Comp,
    CompCoprod,
    Ext,
    Local,
    Local1,
    ProofError,
    Ref,
    Sym,
    Trans,
    check,
    elaborate_derived,
    is_primitive,
    jointly_surjective,
    soundness_audit,
)
from meskit.finset import UNIT, UNIT_POINT, FinFun, FinSet
from meskit.laws import eml_suite
from meskit.parse import parse_proof
from meskit.syntax import KleisliMap, Var, app

DATA = Path(__file__).resolve().parent.parent / "data"
P = semilattice()
a, b = Var("a"), Var("b")
AB = FinSet.of("a", "b")


def test_ref():
    w = KleisliMap.single(app("meet", a, b), AB)
    j = check(P, Ref(w))
    assert j.lhs == j.rhs == w


def test_comm_instance():
    sub = KleisliMap.from_mapping(FinSet.of("x", "y"), AB, {"x": b, "y": a})
    j = check(P, Comp(Axiom("comm"), Ref(sub)))
    assert j.lhs == KleisliMap.single(app("meet", b, a), AB)
    assert j.rhs == KleisliMap.single(app("meet", a, b), AB)
    parsed = parse_proof((DATA / "comm-instance.proof").read_text(), P)
    assert check(P, parsed) == j


def test_sym_and_trans():
    j = check(P, Trans(Axiom("comm"), Sym(Axiom("comm"))))
    assert j.lhs == j.rhs == P.axiom("comm").lhs


def test_ext_keeps_the_equation_under_parameters():
    j = check(P, Ext(FinSet.of("0", "1"), Axiom("idem")))
    assert len(j.coarity) == 2 and len(j.arity) == 2


def test_local_pair():
    C = FinSet.of("p", "q")
    l, r = P.axiom("comm").lhs(UNIT_POINT), P.axiom("comm").rhs(UNIT_POINT)
    arity = P.axiom("comm").arity
    u = KleisliMap.from_mapping(C, arity, {"p": l, "q": r})
    v = KleisliMap.from_mapping(C, arity, {"p": r, "q": l})
    e_p = FinFun.from_mapping(UNIT, C, {UNIT_POINT: "p"})
    e_q = FinFun.from_mapping(UNIT, C, {UNIT_POINT: "q"})
    j = check(P, Local(u, v, (e_p, e_q), (Axiom("comm"), Sym(Axiom("comm")))))
    assert (j.lhs, j.rhs) == (u, v)
    with pytest.raises(ProofError, match="jointly surjective"):
        check(P, Local(u, v, (e_p,), (Axiom("comm"),)))
    with pytest.raises(ProofError, match="restriction"):
        check(P, Local(u, v, (e_p, e_q), (Axiom("comm"), Axiom("comm"))))


def test_jointly_surjective():
    C = FinSet.of("p", "q")
    to_p = FinFun.from_mapping(UNIT, C, {UNIT_POINT: "p"})
    to_q = FinFun.from_mapping(UNIT, C, {UNIT_POINT: "q"})
    assert jointly_surjective((to_p, to_q), C)
    assert not jointly_surjective((to_p,), C)
    assert jointly_surjective((), FinSet())
    with pytest.raises(ValueError):
        jointly_surjective((to_p,), FinSet.of("p"))


def test_error_paths_name_the_failing_node():
    with pytest.raises(ProofError) as err:
        check(P, Trans(Axiom("comm"), Axiom("idem")))
    assert err.value.path == () and err.value.kind == "trans"
    with pytest.raises(ProofError) as err:
        check(P, Sym(Axiom("nope")))
    assert err.value.path == (0,) and "unknown axiom" in str(err.value)
    with pytest.raises(ProofError, match="arity"):
        check(P, Comp(Axiom("comm"), Axiom("idem")))


def test_bad_proof_file_is_rejected():
    proof = parse_proof((DATA / "bad.proof").read_text(), P)
    with pytest.raises(ProofError, match="middle terms differ"):
        check(P, proof)


@pytest.mark.parametrize("name", ["walk", "walk-coprod", "local1", "comm-instance"])
def test_data_proofs_check_and_elaborate(name):
    proof = parse_proof((DATA / f"{name}.proof").read_text(), P)
    j = check(P, proof)
    flat = elaborate_derived(proof, P)
    assert is_primitive(flat)
    assert check(P, flat) == j


def test_local1_identity_elaborates_to_its_premise():
    eq = P.axiom("idem")
    node = Local1(eq.lhs, eq.rhs, FinFun.identity(UNIT), Axiom("idem"))
    assert elaborate_derived(node) == Axiom("idem")


def test_local1_needs_a_surjection():
    eq = P.axiom("idem")
    e = FinFun.from_mapping(FinSet(), UNIT, {})
    with pytest.raises(ProofError, match="surjective"):
        check(P, Local1(eq.lhs, eq.rhs, e, Axiom("idem")))


def test_compcoprod_needs_presentation_to_elaborate():
    proof = parse_proof((DATA / "walk-coprod.proof").read_text(), P)
    assert not is_primitive(proof)
    with pytest.raises(ValueError):
        elaborate_derived(proof)


def test_compcoprod_single_branch_is_comp():
    sub = KleisliMap.from_mapping(FinSet.of("x", "y"), AB, {"x": b, "y": a})
    j1 = check(P, CompCoprod(Axiom("comm"), (Ref(sub),)))
    assert j1 == check(P, Comp(Axiom("comm"), Ref(sub)))


def test_audit_finds_no_counterexample_for_valid_proofs():
    rep = soundness_audit(P, Axiom("assoc"), 3)
    assert rep.sound and rep.models_checked == 12


@pytest.mark.parametrize("p", [semilattice(), monoid()], ids=["semilattice", "monoid"])
def test_generated_corpus(p):
    corpus = generate_corpus(p, 24, seed=0)
    assert len(corpus) >= 24
    kinds = {type(q).__name__ for _, q in corpus}
    assert {"Axiom", "Sym", "Ext", "Ref", "Local", "Local1", "Trans"} <= kinds
    for r in eml_suite(p, k=2, n=24):
        assert r.passed, r.line()
