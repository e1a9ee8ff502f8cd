#!/usr/bin/env python
# -*- coding: utf-8 -*-

#-----------------------------------------------------------------------------
# Copyright (c) 2021, ICRevenue Development Team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING, distributed with this software.
#-----------------------------------------------------------------------------

"""
Monte-Carlo estimation of the revenue objectives.

Every non-adaptive run draws one `SamplePool` and evaluates all candidate
sets on it (common random numbers), so greedy selections are deterministic
and the empirical objectives are exactly monotone and submodular. The
estimators accept any `RealizationSet`; passing the exact enumeration from
`icrevenue.api.oracle` turns every estimate into an exact expectation.

The objectives, for a seed set S, realization φ and truncation level z, are

* g(S, φ), the number of engaged users;
* l(S, z) = E[min{g(S, Φ), B - z}];
* f_exp(S) = E[min{g(S, Φ), B - c(S)}], negative when c(S) > B.
"""
import logging

import numpy as np

from ..errors import EstimationError, PreconditionError
from .cascade import RealizationSet, label_rows

logger = logging.getLogger(__name__)

HIDDEN_STREAM = 0
COIN_STREAM = 1
MARGINAL_STREAM = 2


def derived_rng(*entropy):
    """Return a Generator seeded from a tuple of non-negative integers.

    Streams derived from distinct tuples are independent, which lets an
    episode seed fan out into per-step, per-node streams.
    """
    return np.random.default_rng(np.random.SeedSequence(
        [int(x) for x in entropy]))


class SamplePool(RealizationSet):
    """M realizations drawn with a fixed seed, each with weight 1/M.

    Attributes
    ----------
    seed : int
        The seed the realizations were drawn from.
    size : int
        The number of realizations M.
    """

    def __init__(self, instance, labels, seed, closure_cells=50000000):
        labels = label_rows(labels, instance.m)
        size = labels.shape[0]
        if size < 1:
            raise EstimationError("A sample pool needs at least one "
                                  "realization")
        super(SamplePool, self).__init__(instance, labels,
                                         np.full(size, 1.0 / size),
                                         closure_cells=closure_cells,
                                         uniform=True)
        self.seed = seed
        self.size = size

    def __repr__(self):
        return 'SamplePool(M=%d, seed=%r)' % (self.size, self.seed)


def build_pool(instance, M, seed, closure_cells=50000000):
    """Draw M independent realizations, deterministically from `seed`.

    Raises
    ------
    EstimationError
        If M < 1.
    """
    M = int(M)
    if M < 1:
        raise EstimationError("The number of samples must be at least 1, "
                              "got %d" % M)
    rng = np.random.default_rng(seed)
    labels = rng.random((M, instance.m)) < instance.probabilities
    logger.debug("Sample pool drawn: M=%d, seed=%r" % (M, seed))
    return SamplePool(instance, labels, seed, closure_cells=closure_cells)


def _check_level(instance, z):
    z = float(z)
    if not 0.0 <= z <= instance.budget:
        raise EstimationError("Truncation level %r is outside [0, %r]"
                              % (z, instance.budget))
    return z


def mean(realizations, values):
    """Weighted mean of per-realization values, reduced in a fixed order.

    Uniformly weighted sets return the exact sample mean sum(values) / R.
    """
    if realizations.uniform:
        return float(np.sum(values) / len(realizations))
    return float(np.dot(realizations.weights, values))


def estimate_l(pool, seeds, z):
    """Return l(S, z) = E[min{g(S, Φ), B - z}] on the pool.

    Raises
    ------
    EstimationError
        If z lies outside [0, B].
    """
    instance = pool.instance
    z = _check_level(instance, z)
    g = pool.engagements(instance.positions(seeds))
    return mean(pool, np.minimum(g, instance.budget - z))


def estimate_f_exp(pool, seeds):
    """Return f_exp(S) = E[min{g(S, Φ), B - c(S)}] on the pool."""
    instance = pool.instance
    g = pool.engagements(instance.positions(seeds))
    return mean(pool, np.minimum(g, instance.budget - instance.cost(seeds)))


def estimate_g_exp(pool, seeds):
    """Return the expected number of engagements g_exp(S) on the pool."""
    return mean(pool, pool.engagements(pool.instance.positions(seeds)))


def truncated_gains(realizations, base, node, cap, rows=None):
    """Return min{g(S ∪ {e}), cap} - min{g(S), cap} for each realization.

    Parameters
    ----------
    realizations : RealizationSet
    base : ndarray of int
        Positions of S.
    node : int
        Position of e.
    cap : float
        The truncation value B - z.
    rows : ndarray of int, optional
        Restrict the computation to these realizations.
    """
    engaged = realizations.engaged(base, rows)
    extended = engaged | realizations.engaged([node], rows)
    return (np.minimum(extended.sum(axis=1), cap) -
            np.minimum(engaged.sum(axis=1), cap))


def conditional_marginal(instance, partial, e, z, M, rng):
    """Estimate Δ_{h(·,·,z)}(e | ψ) from M conditional samples.

    Parameters
    ----------
    instance : Instance
    partial : PartialRealization
        The observation ψ so far.
    e : str
        Candidate seed, not in dom(ψ).
    z : float
        Truncation level in [0, B].
    M : int
        Number of conditional samples.
    rng : numpy.random.Generator

    Raises
    ------
    EstimationError
        If e is already selected, z is out of range or M < 1.
    PreconditionError
        If ψ is not a valid partial realization.
    """
    e = str(e)
    if e in partial.dom:
        raise EstimationError("Node '%s' is already in dom(ψ)" % e)
    node = instance.positions([e])[0]
    z = _check_level(instance, z)
    M = int(M)
    if M < 1:
        raise EstimationError("The number of samples must be at least 1, "
                              "got %d" % M)
    samples = conditional_samples(instance, partial, M, rng)
    return mean(samples, truncated_gains(samples, partial.positions, node,
                                         instance.budget - z))


def conditional_samples(instance, partial, M, rng):
    """Return M draws from p(φ | Φ ~ ψ) as a uniformly weighted set.

    The draws are those of M successive `conditional_sample` calls.
    """
    if not partial.is_valid():
        raise PreconditionError("%r is not a valid partial realization"
                                % partial)
    labels = rng.random((M, instance.m)) < instance.probabilities
    labels[:, partial.mask] = partial.live[partial.mask]
    return RealizationSet(instance, labels, np.full(M, 1.0 / M),
                          closure_cells=0, uniform=True)


class SampledMarginals(object):
    """Δ estimates for one adaptive episode.

    Each (step, node) query draws fresh conditional samples from a stream
    derived from (episode seed, step, node position).
    """

    def __init__(self, instance, samples, episode_seed):
        self.instance = instance
        self.samples = int(samples)
        self.episode_seed = episode_seed

    def marginal(self, partial, e, z, step):
        node = self.instance.index[str(e)]
        rng = derived_rng(self.episode_seed, MARGINAL_STREAM, step, node)
        return conditional_marginal(self.instance, partial, e, z,
                                    self.samples, rng)
