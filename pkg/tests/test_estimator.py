import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icrevenue.api.cascade import PartialRealization, Realization, observe
from icrevenue.api.estimator import (SampledMarginals, build_pool,
                                     conditional_marginal, derived_rng,
                                     estimate_f_exp, estimate_g_exp,
                                     estimate_l)
from icrevenue.api.network import Instance
from icrevenue.api.oracle import check_submodularity, enumerate_realizations
from icrevenue.api.suites import random_instance
from icrevenue.errors import EstimationError, PreconditionError


@pytest.fixture
def blocked(t1):
    """T1 after selecting a under the realization with b->c Blocked."""
    return observe(t1, ['a'], Realization(t1, [True, False]))


def test_pool_is_deterministic(t1):
    first = build_pool(t1, 500, 9)
    second = build_pool(t1, 500, 9)
    assert np.array_equal(first.labels, second.labels)
    assert first.size == 500
    assert first.seed == 9
    assert not np.array_equal(first.labels, build_pool(t1, 500, 10).labels)


def test_pool_of_certain_edges(path):
    assert build_pool(path.with_probabilities([1, 1]), 20, 0).labels.all()
    assert not build_pool(path.with_probabilities([0, 0]), 20, 0).labels.any()


def test_pool_needs_samples(t1):
    with pytest.raises(EstimationError):
        build_pool(t1, 0, 0)


def test_estimate_l(t1):
    exact = enumerate_realizations(t1)
    assert estimate_l(exact, [], 0) == 0.0
    assert estimate_l(exact, ['a'], 0) == 2.5
    assert estimate_l(exact, ['a'], 2) == 2.0
    with pytest.raises(EstimationError):
        estimate_l(exact, ['a'], 5)
    with pytest.raises(EstimationError):
        estimate_l(exact, ['a'], -1)


def test_estimate_f_exp(t1, two_nodes):
    exact = enumerate_realizations(t1)
    assert estimate_f_exp(exact, []) == 0.0
    assert estimate_f_exp(exact, ['a']) == 2.5
    assert estimate_f_exp(exact, ['a', 'b', 'c']) == 1.0
    assert estimate_f_exp(enumerate_realizations(two_nodes), ['u']) == 1.5


def test_estimate_f_exp_over_budget(t1):
    expensive = Instance(t1.nodes, t1.edges, {'a': 3, 'b': 3, 'c': 1},
                         t1.budget)
    assert estimate_f_exp(enumerate_realizations(expensive), ['a', 'b']) == \
        -2.0


def test_estimate_g_exp(t1, path):
    assert estimate_g_exp(enumerate_realizations(t1), []) == 0.0
    assert estimate_g_exp(enumerate_realizations(t1), ['a']) == 2.5
    certain = path.with_probabilities([1, 1])
    assert estimate_g_exp(build_pool(certain, 10, 0), ['a']) == 3.0


@pytest.mark.parametrize('M', [1, 3, 7, 10, 49, 1000])
def test_pool_means_are_exact(path, M):
    certain = path.with_probabilities([1, 1])
    pool = build_pool(certain, M, 5)
    assert pool.uniform
    assert estimate_g_exp(pool, ['a']) == 3.0
    assert estimate_l(pool, ['b'], 1) == 2.0
    assert estimate_f_exp(pool, ['a']) == 3.0
    empty = PartialRealization.empty(certain)
    assert conditional_marginal(certain, empty, 'a', 0, M,
                                np.random.default_rng(0)) == 3.0


@pytest.mark.parametrize('z', [0, 2, 4])
def test_pool_l_is_submodular(t1, z):
    pool = build_pool(t1, 200, 1)
    assert check_submodularity(t1, lambda s: estimate_l(pool, s, z)) == []


def test_pool_estimates_converge(t1):
    pool = build_pool(t1, 20000, 4)
    band = 3 * t1.budget / np.sqrt(20000)
    assert abs(estimate_f_exp(pool, ['a']) - 2.5) <= band
    assert abs(estimate_l(pool, ['b'], 0) - 1.5) <= band


def test_estimates_are_bit_identical(t1):
    values = [estimate_f_exp(build_pool(t1, 3000, 21), ['b', 'c'])
              for _ in range(2)]
    assert values[0] == values[1]


def test_conditional_marginal_after_observation(t1, blocked):
    rng = np.random.default_rng(0)
    assert conditional_marginal(t1, blocked, 'b', 0, 50, rng) == 0.0
    assert conditional_marginal(t1, blocked, 'c', 0, 50, rng) == 1.0


def test_conditional_marginal_without_observation(t1):
    empty = PartialRealization.empty(t1)
    value = conditional_marginal(t1, empty, 'a', 0, 20000,
                                 np.random.default_rng(1))
    assert abs(value - 2.5) <= 0.05


def test_conditional_marginal_errors(t1, blocked):
    rng = np.random.default_rng(0)
    with pytest.raises(EstimationError):
        conditional_marginal(t1, blocked, 'a', 0, 10, rng)
    with pytest.raises(EstimationError):
        conditional_marginal(t1, blocked, 'c', 4.5, 10, rng)
    with pytest.raises(EstimationError):
        conditional_marginal(t1, blocked, 'c', 0, 0, rng)
    with pytest.raises(PreconditionError):
        conditional_marginal(t1, PartialRealization(t1, ['a']), 'c', 0, 10,
                             rng)


def test_sampled_marginals_are_reproducible(t1):
    empty = PartialRealization.empty(t1)
    first = SampledMarginals(t1, 200, 17).marginal(empty, 'b', 0, 0)
    second = SampledMarginals(t1, 200, 17).marginal(empty, 'b', 0, 0)
    assert first == second


def test_derived_streams_differ():
    assert derived_rng(1, 2, 3).random() == derived_rng(1, 2, 3).random()
    assert derived_rng(1, 2, 3).random() != derived_rng(1, 2, 4).random()


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1), data=st.data())
def test_f_exp_never_exceeds_l_at_zero(seed, data):
    rng = np.random.default_rng(seed)
    instance = random_instance(rng, 6, 10)
    pool = build_pool(instance, 200, seed)
    seeds = data.draw(st.sets(st.sampled_from(instance.nodes)))
    assert estimate_f_exp(pool, seeds) <= estimate_l(pool, seeds, 0)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1), fraction=st.floats(0, 1))
def test_pool_l_is_submodular_on_random_instances(seed, fraction):
    instance = random_instance(np.random.default_rng(seed), 5, 8)
    pool = build_pool(instance, 100, seed)
    z = fraction * instance.budget
    assert check_submodularity(
        instance, lambda s: estimate_l(pool, s, z)) == []
