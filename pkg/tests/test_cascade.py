import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icrevenue.api.cascade import (BLOCKED, LIVE, PartialRealization,
                                   Realization, RealizationSet,
                                   conditional_sample, engagements,
                                   is_consistent, observe, propagate,
                                   reachability_closure, sample_realization)
from icrevenue.api.network import Instance, generate_random_instance
from icrevenue.api.suites import random_instance
from icrevenue.errors import PreconditionError, UnknownNodeError


def test_sample_certain_edges():
    instance = Instance('abc', [('a', 'b', 1.0), ('b', 'c', 0.0)],
                        {'a': 1, 'b': 1, 'c': 1}, 4)
    rng = np.random.default_rng(0)
    for _ in range(100):
        realization = sample_realization(instance, rng)
        assert realization.label('a', 'b') == LIVE
        assert realization.label('b', 'c') == BLOCKED


def test_sample_frequency(two_nodes):
    rng = np.random.default_rng(1)
    live = sum(sample_realization(two_nodes, rng).labels[0]
               for _ in range(10000))
    assert 0.47 <= live / 10000 <= 0.53


def test_sample_is_deterministic(path):
    first = sample_realization(path, np.random.default_rng(5))
    second = sample_realization(path, np.random.default_rng(5))
    assert first == second
    assert hash(first) == hash(second)


def test_realization_needs_every_label(path):
    with pytest.raises(PreconditionError):
        Realization(path, [True])


def test_engagements(path):
    live = Realization(path, [True, True])
    cut = Realization(path, [True, False])
    assert engagements(path, [], live) == 0
    assert engagements(path, ['a'], live) == 3
    assert engagements(path, ['a'], cut) == 2
    assert engagements(path, ['a', 'c'], cut) == 3
    with pytest.raises(UnknownNodeError):
        engagements(path, ['z'], live)


def test_observe(path):
    assert observe(path, [], Realization(path, [True, True])) == \
        PartialRealization.empty(path)
    partial = observe(path, ['a'], Realization(path, [True, False]))
    assert partial.dom == {'a'}
    assert partial.labels() == {('a', 'b'): LIVE, ('b', 'c'): BLOCKED}
    partial = observe(path, ['a'], Realization(path, [False, True]))
    assert partial.labels() == {('a', 'b'): BLOCKED}
    assert list(partial.engaged()) == [0]


def test_is_consistent(path):
    realization = Realization(path, [False, True])
    assert is_consistent(realization, observe(path, ['a'], realization))
    assert is_consistent(realization, PartialRealization.empty(path))
    contradicted = PartialRealization(path, ['a'], {0: True, 1: True})
    assert not is_consistent(realization, contradicted)


def test_partial_realization_validity(path):
    assert PartialRealization(path, ['a'], {0: False}).is_valid()
    assert PartialRealization(path, ['a'], {0: True, 1: False}).is_valid()
    assert not PartialRealization(path, ['a'], {}).is_valid()
    assert not PartialRealization(path, ['a'], {0: False, 1: True}).is_valid()


def test_subrealization(path):
    small = PartialRealization(path, ['a'], {0: True, 1: False})
    large = small.extend('c', {})
    assert small.is_subrealization_of(large)
    assert not large.is_subrealization_of(small)
    other = PartialRealization(path, ['a', 'c'], {0: True, 1: True})
    assert not small.is_subrealization_of(other)


def test_conditional_sample_fully_observed(path):
    hidden = Realization(path, [True, False])
    partial = observe(path, ['a'], hidden)
    rng = np.random.default_rng(2)
    for _ in range(20):
        assert conditional_sample(path, partial, rng) == hidden


def test_conditional_sample_frequency():
    instance = Instance('abcd', [('a', 'b', 0.5), ('c', 'd', 0.4)],
                        dict.fromkeys('abcd', 1), 4)
    partial = PartialRealization(instance, ['a'], {0: True})
    rng = np.random.default_rng(3)
    draws = np.array([conditional_sample(instance, partial, rng).labels
                      for _ in range(10000)])
    assert draws[:, 0].all()
    assert abs(draws[:, 1].mean() - 0.4) <= 3 * np.sqrt(0.24 / 10000)


def test_conditional_sample_rejects_invalid(path):
    with pytest.raises(PreconditionError):
        conditional_sample(path, PartialRealization(path, ['a']),
                           np.random.default_rng(0))


def test_closure_and_propagation_agree():
    instance = generate_random_instance(8, 14, (0, 1), (1, 5), 5, 11)
    labels = np.random.default_rng(12).random((50, instance.m)) < \
        instance.probabilities
    dense = RealizationSet(instance, labels, np.full(50, 0.02))
    sparse = RealizationSet(instance, labels, np.full(50, 0.02),
                            closure_cells=0)
    assert dense.closure is not None
    assert sparse.closure is None
    rows = np.array([3, 7, 7, 40])
    for seeds in ([0], [1, 2], list(range(instance.n))):
        assert np.array_equal(dense.engaged(seeds), sparse.engaged(seeds))
        assert np.array_equal(dense.engaged(seeds, rows),
                              sparse.engaged(seeds, rows))
    closure = reachability_closure(instance, labels)
    assert np.array_equal(closure[:, 0, :], propagate(instance, labels, [0]))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1), data=st.data())
def test_observation_is_consistent(seed, data):
    rng = np.random.default_rng(seed)
    instance = random_instance(rng, 6, 10)
    seeds = data.draw(st.sets(st.sampled_from(instance.nodes)))
    hidden = sample_realization(instance, rng)
    partial = observe(instance, seeds, hidden)
    assert partial.is_valid()
    assert is_consistent(hidden, partial)
    assert engagements(instance, seeds, hidden) == partial.engaged().size
    for _ in range(5):
        assert is_consistent(conditional_sample(instance, partial, rng),
                             partial)
