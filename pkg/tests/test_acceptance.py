"""The acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line with its timing; the
lines are repeated together in the terminal summary.
"""

from __future__ import annotations

import random
import time
from typing import Callable, Iterable, Optional

import pytest

from acceptance_log import LINES
from meskit import laws
from meskit.algebra import FiniteAlgebra, enumerate_algebras
from meskit.corpus import semilattice
from meskit.finset import FinFun, FinSet, act
from meskit.syntax import Signature

P = semilattice()
MEET = Signature([("meet", 2)])


def criterion(n: int, title: str, limit: Optional[float], run: Callable[[], Iterable[laws.LawResult]]) -> None:
    start = time.perf_counter()
    results = list(run())
    elapsed = time.perf_counter() - start
    failed = [r for r in results if not r.passed]
    slow = limit is not None and elapsed >= limit
    ok = not failed and not slow
    cases = sum(r.checked for r in results)
    budget = f" < {limit:g}s" if limit is not None else ""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {title} ({cases} cases, {elapsed:.1f}s{budget})"
    if failed:
        line += f"; first failure: {failed[0].line()}"
    elif slow:
        line += "; over the time limit"
    print(line)
    LINES.append(line)
    assert not failed, failed[0].line()
    assert not slow, f"{elapsed:.1f}s exceeds {limit}s"


def test_criterion_01_action_and_strength_coherence():
    criterion(
        1,
        "action unit/associativity and strength diagrams, sizes ≤ 2, depth ≤ 2",
        10,
        lambda: laws.action_coherence(2) + laws.strength_coherence(2, 2),
    )


def test_criterion_02_monad_laws():
    criterion(
        2,
        "Kleisli unit and associativity laws, arities ≤ 3, depth ≤ 3",
        30,
        lambda: laws.monad_laws(3, 3),
    )


def test_criterion_03_clone_equals_double_dualization():
    X = FinSet.range(2)
    criterion(
        3,
        "clone and double-dualization units and multiplications agree, |X| = 2, |A| ∈ {1,2}",
        60,
        lambda: [
            laws.unit_coincidence(2),
            laws.mult_coincidence(X, FinSet.of("a")),
            laws.mult_coincidence(X, FinSet.of("a", "b")),
        ],
    )


def test_criterion_04_semantics_bijection():
    criterion(4, "α(ω(s)) = s for all 16 tables and ω(α(τ)) = τ, |X| = 2", 60, lambda: laws.bijection_laws(2, 2))


def test_criterion_05_proof_soundness():
    def run():
        out = laws.eml_suite(P, k=3, n=24)
        corpus = out[0]
        assert corpus.checked >= 20
        # the elaboration result belongs to criterion 6
        return [out[0], out[2]]

    criterion(5, "≥ 20 generated proofs check; audit over models of size ≤ 3 is clean", 60, run)


def test_criterion_06_derived_rules():
    criterion(6, "elaborating derived rules preserves every corpus conclusion", None, lambda: laws.eml_suite(P, 3, 24)[1:2])


def test_criterion_07_free_semilattice_sizes():
    criterion(
        7,
        "free semilattice on n = 1, 2, 3 generators has 2^n - 1 classes",
        60,
        lambda: [laws.free_cardinalities(P, [1, 2, 3], lambda n: 2**n - 1)],
    )


def test_criterion_08_quotient_factoring():
    criterion(8, "eval = hom_extension ∘ quotient_map, models ≤ 3, depth ≤ 3", None, lambda: [laws.factoring_law(P, 3, 3)])


def test_criterion_09_completeness():
    criterion(
        9,
        "decide matches satisfaction in all models ≤ 4, ≤ 2 variables, depth ≤ 2",
        300,
        lambda: laws.completeness_cross_check(P, 2, 2, 4),
    )


def test_criterion_10_quotient_strength():
    criterion(10, "quotient map commutes with strengths, |V|, |X| ≤ 2", None, lambda: [laws.strength_check_law(P, 2, 2)])


def test_criterion_11_unique_extension():
    rng = random.Random(laws.seed())
    algs = [a for a in enumerate_algebras(MEET, 2) if len(a.carrier) == 2]
    alg: FiniteAlgebra = rng.choice(algs)
    V, X = FinSet.of("v0", "v1"), FinSet.of("x0", "x1")
    f = FinFun.from_callable(act(V, X).carrier, alg.carrier, lambda _: rng.choice(alg.carrier.elements))
    criterion(
        11,
        f"f# is the unique graph on the depth-2 truncation (seed {laws.seed()})",
        None,
        lambda: [laws.unique_extension_law(alg, f, V, X, 2)],
    )


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
