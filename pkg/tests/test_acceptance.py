"""The acceptance gate: one test per criterion, one pass/fail line each.

Profiles (one commutator-pairing build per corpus member, plus the direct
tensor route) are computed once per session; every criterion check reads
from that store at its stated tolerance.  Run with `-s` to see the lines.
"""

import pytest

from ntl.coset import EnumerationBudget
from ntl.verification import (build_profiles, check_abelian_reduction,
                              check_bound_arithmetic, check_decomposition,
                              check_exact_sequences, check_negative_control,
                              check_pushout, check_performance,
                              check_route_equivalence, check_schur_oracle,
                              check_stable_pi2, check_tensor_counts,
                              check_theoremC, check_wedge_prufer_analog,
                              run_catalog_suite)


@pytest.fixture(scope="session")
def store():
    return build_profiles()


def _gate(result):
    print()
    print(result.line())
    assert result.passed, result.detail
    return result


def test_criterion_01_decomposition_identity(store):
    r = _gate(check_decomposition(store))
    assert r.elapsed_ms <= 60_000


def test_criterion_02_route_equivalence(store):
    r = _gate(check_route_equivalence(store))
    assert r.elapsed_ms <= 60_000


def test_criterion_03_abelian_reduction(store):
    r = _gate(check_abelian_reduction(None, store))
    assert r.elapsed_ms <= 30_000


def test_criterion_04_tensor_counts(store):
    _gate(check_tensor_counts(store))


def test_criterion_05_exact_sequences(store):
    _gate(check_exact_sequences(store))


def test_criterion_06_schur_multipliers(store):
    _gate(check_schur_oracle(store))


def test_criterion_07_stable_pi2(store):
    _gate(check_stable_pi2(store))


def test_criterion_08_theoremC_unanimity(store):
    _gate(check_theoremC(store, None))


def test_criterion_09_pushout_values():
    _gate(check_pushout(None))


def test_criterion_10_wedge_prufer_analog():
    _gate(check_wedge_prufer_analog())


def test_criterion_11_bound_arithmetic():
    r = _gate(check_bound_arithmetic())
    from ntl.homotopy import bound_theorem_A, bound_theorem_B, \
        bound_pushout_pi3
    assert bound_theorem_A(2, 3, 4, 5).bound == 120
    assert bound_theorem_B(2, 2).bound == 4
    assert bound_pushout_pi3(2, 3, 4).bound == 24


def test_criterion_12_performance(store):
    r = _gate(check_performance(store))
    assert all(p.build_ms <= 10_000 for p in store.nus.values())


def test_criterion_13_negative_control(store):
    # The fault flag must break the criterion-1 check: the whole suite run
    # under fault reports a failure and would exit nonzero.
    r = _gate(check_negative_control(None))
    faulted = run_catalog_suite(budget=EnumerationBudget(max_cosets=20_000),
                                fault=True)
    print(faulted[0].line())
    assert not all(c.passed for c in faulted)
    assert "criterion 1" in faulted[0].name
