import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icrevenue.api.cascade import PartialRealization, Realization, observe
from icrevenue.api.network import Instance
from icrevenue.api.oracle import (check_adaptive_submodularity,
                                  check_min_truncation,
                                  check_realization_submodularity,
                                  check_submodularity,
                                  enumerate_realizations, exact_f_exp,
                                  exact_g_exp, exact_l, exact_marginal,
                                  min_truncation_holds, optimal_adaptive,
                                  optimal_nonadaptive, outcomes,
                                  reachable_partials)
from icrevenue.api.suites import random_instance
from icrevenue.errors import (CapExceededError, EstimationError,
                              PreconditionError)


def test_enumerate_one_edge(two_nodes):
    distribution = enumerate_realizations(two_nodes)
    assert len(distribution) == 2
    assert [p for _, p in distribution.entries] == [0.5, 0.5]


def test_enumerate_two_edges(path):
    distribution = enumerate_realizations(path)
    assert len(distribution) == 4
    assert set(map(tuple, distribution.labels.tolist())) == \
        {(False, False), (False, True), (True, False), (True, True)}
    assert all(p == 0.25 for _, p in distribution.entries)


def test_enumerate_deterministic(star):
    entries = enumerate_realizations(star).entries
    assert len(entries) == 1
    realization, probability = entries[0]
    assert probability == 1.0
    assert realization.labels.all()


def test_enumerate_cap(path):
    with pytest.raises(CapExceededError):
        enumerate_realizations(path, cap=2)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1))
def test_probabilities_sum_to_one(seed):
    instance = random_instance(np.random.default_rng(seed), 6, 10)
    assert abs(enumerate_realizations(instance).weights.sum() - 1) <= 1e-12


def test_exact_objectives(t1):
    assert exact_f_exp(t1, []) == 0.0
    assert exact_f_exp(t1, ['a']) == 2.5
    assert exact_f_exp(t1, ['a', 'b', 'c']) == 1.0
    assert exact_g_exp(t1, ['b']) == 1.5
    assert exact_l(t1, ['a'], 2) == 2.0
    with pytest.raises(EstimationError):
        exact_l(t1, ['a'], 4.5)


def test_exact_marginal(t1):
    empty = PartialRealization.empty(t1)
    assert exact_marginal(t1, empty, 'a', 0) == 2.5
    blocked = observe(t1, ['a'], Realization(t1, [True, False]))
    assert exact_marginal(t1, blocked, 'b', 0) == 0.0
    assert exact_marginal(t1, blocked, 'c', 0) == 1.0
    assert exact_marginal(t1, blocked, 'c', 4) == 0.0
    with pytest.raises(EstimationError):
        exact_marginal(t1, blocked, 'a', 0)


def test_exact_marginal_needs_possible_observation(t1):
    impossible = PartialRealization(t1, ['a'], {0: False})
    assert impossible.is_valid()
    with pytest.raises(PreconditionError):
        exact_marginal(t1, impossible, 'c', 0)


def test_outcomes(t1):
    distribution = enumerate_realizations(t1)
    after = outcomes(distribution, PartialRealization.empty(t1), 'a')
    assert sorted(p for p, _ in after) == [0.5, 0.5]
    assert {len(child.observed) for _, child in after} == {2}
    after = outcomes(distribution, PartialRealization.empty(t1), 'c')
    assert len(after) == 1
    assert after[0][0] == 1.0


def test_reachable_partials(t1):
    found = reachable_partials(t1)
    assert PartialRealization.empty(t1).key in found
    assert all(partial.is_valid() for partial in found.values())


def test_optimal_nonadaptive(t1, star):
    assert optimal_nonadaptive(t1) == (frozenset(['a']), 2.5)
    assert optimal_nonadaptive(star) == (frozenset(['s']), 3.0)
    expensive = Instance('ab', [('a', 'b', 0.5)], {'a': 5, 'b': 6}, 4)
    assert optimal_nonadaptive(expensive) == (frozenset(), 0.0)


def test_optimal_nonadaptive_cap(t1):
    with pytest.raises(CapExceededError):
        optimal_nonadaptive(t1, max_nodes=2)


def test_optimal_adaptive(t1, single):
    assert optimal_adaptive(t1) == 2.5
    assert optimal_adaptive(single) == 1.0
    assert optimal_adaptive(Instance(['v'], [], {'v': 2}, 2)) == 0.0


def test_optimal_adaptive_without_randomness():
    instance = Instance('abc', [('a', 'b', 0.0), ('b', 'c', 0.0)],
                        {'a': 1, 'b': 1, 'c': 2}, 5)
    assert optimal_adaptive(instance) == optimal_nonadaptive(instance)[1]


def test_optimal_adaptive_cap():
    instance = Instance('abcde', [], dict.fromkeys('abcde', 1), 5)
    with pytest.raises(CapExceededError):
        optimal_adaptive(instance)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1))
def test_adaptivity_never_hurts(seed):
    instance = random_instance(np.random.default_rng(seed), 4, 4)
    optimum = optimal_adaptive(instance)
    assert optimum >= optimal_nonadaptive(instance)[1] - 1e-9
    assert optimum >= optimal_adaptive(instance, allow_stop=False) - 1e-9


def test_submodularity_negative_control():
    violations = check_submodularity([1, 2, 3], lambda s: len(s) ** 2)
    assert violations
    assert all(v.kind == 'submodular' for v in violations)
    assert all(v.lower <= v.upper and v.node not in v.upper
               for v in violations)


def test_submodularity_cap():
    with pytest.raises(CapExceededError):
        check_submodularity(range(6), len)


def test_monotonicity_violation():
    violations = check_submodularity('ab', lambda s: -len(s))
    assert any(v.kind == 'monotone' for v in violations)
    assert not check_submodularity('ab', lambda s: -len(s), monotone=False)


@pytest.mark.parametrize('z', [0.0, 2.0, 4.0])
def test_truncated_objective_is_submodular(t1, z):
    assert check_submodularity(t1, lambda s: exact_l(t1, s, z)) == []


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1))
def test_engagements_are_submodular(seed):
    instance = random_instance(np.random.default_rng(seed), 5, 8)
    assert check_realization_submodularity(instance) == []
    assert check_submodularity(instance,
                               lambda s: exact_g_exp(instance, s)) == []


@pytest.mark.parametrize('z', [0.0, 2.0, 4.0])
def test_adaptive_submodularity_t1(t1, z):
    assert check_adaptive_submodularity(t1, z) == []


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1))
def test_adaptive_submodularity_random(seed):
    instance = random_instance(np.random.default_rng(seed), 4, 4)
    assert check_adaptive_submodularity(instance, 0.0) == []
    assert check_adaptive_submodularity(instance, instance.budget / 2) == []


def test_min_truncation():
    assert check_min_truncation(5, 1, 3, 2, 4)
    assert check_min_truncation(2, 2, 2, 2, 7)
    assert check_min_truncation(5, 1, 3, 2, 0)
    with pytest.raises(PreconditionError):
        check_min_truncation(1, 5, 3, 2, 4)


@settings(max_examples=200)
@given(st.lists(st.integers(0, 640), min_size=5, max_size=5))
def test_min_truncation_on_dyadic_values(values):
    d2, d4, d3, d1, x = (np.float64(v) / 64 for v in values)
    c2 = d2
    c4 = c2 + d4
    c3 = c4 + d3
    c1 = c2 + (c3 - c4) + d1
    assert min_truncation_holds(c1, c2, c3, c4, x, tolerance=0.0)
