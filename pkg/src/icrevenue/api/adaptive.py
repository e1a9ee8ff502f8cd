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
Adaptive seed-selection policies and their episode executor.

An episode hides one realization φ. The policy selects seeds one at a time;
after each pick the executor reveals the labels of every out-edge of every
newly engaged user, and the policy conditions its next choice on what it
has seen.

* ``pi1`` is the adaptive benefit-cost greedy: it picks the node with the
  largest ratio of conditional expected gain Δ_{h(·,·,0)}(e | ψ) to cost,
  and stops before the cumulative cost would exceed the cap C.
* ``pi2`` selects the single node with the best expected revenue.
* ``pis`` flips a fair coin per episode and runs one of the two.

Every random stream of an episode is derived from its episode seed: the
hidden realization, the coin of ``pis`` and each Δ estimate of ``pi1``.
"""
import logging
import math

import numpy as np

from ..errors import PreconditionError, UnknownPolicyError
from .cascade import PartialRealization, observe, sample_realization
from .estimator import (COIN_STREAM, HIDDEN_STREAM, SampledMarginals,
                        build_pool, derived_rng, estimate_f_exp)
from .oracle import ExactMarginals, distribution_of

logger = logging.getLogger(__name__)

POLICIES = ('pi1', 'pi2', 'pis')


class AdaptiveParams(object):
    """The constants of the adaptive guarantee for one instance.

    Attributes
    ----------
    C : float
        The cost cap max{c(ē), B/2}, ē being the most expensive user.
    alpha : float
        min{1/2, 1 - C/B}, clamped at 0.
    marginal_samples : int
        Conditional samples per Δ estimate (and the size of ``pi2``'s
        sample pool).
    vacuous : bool
        True when C >= B, so that the guarantee says nothing.
    """

    def __init__(self, C, alpha, marginal_samples, vacuous, budget):
        self.C = C
        self.alpha = alpha
        self.marginal_samples = marginal_samples
        self.vacuous = vacuous
        self.budget = budget

    def __repr__(self):
        return ('AdaptiveParams(C=%r, alpha=%r, marginal_samples=%d, '
                'vacuous=%r)' % (self.C, self.alpha, self.marginal_samples,
                                 self.vacuous))

    @property
    def bound(self):
        """The guaranteed fraction α(1 - exp(-C/B))/2 of the optimum."""
        return self.alpha * (1.0 - math.exp(-self.C / self.budget)) / 2.0


def compute_params(instance, M):
    B = instance.budget
    C = max(float(np.max(instance.costs)), B / 2)
    alpha = max(0.0, min(0.5, 1.0 - C / B))
    params = AdaptiveParams(C, alpha, int(M), C >= B, B)
    if params.vacuous:
        logger.warning("The most expensive user costs %r >= B = %r: the "
                       "adaptive guarantee is vacuous" % (C, B))
    return params


class PolicyStep(object):
    """One pick of an episode and the edge labels it revealed."""

    def __init__(self, node, revealed):
        self.node = node
        self.revealed = revealed

    def __repr__(self):
        return 'PolicyStep(%s, revealed=%d)' % (self.node, len(self.revealed))


class PolicyTrace(object):
    """The record of one adaptive episode.

    Attributes
    ----------
    steps : list of PolicyStep
        Picks in order; their revealed labels are disjoint and together form
        `observation`.
    final_seeds : frozenset of str
    observation : PartialRealization
        Everything revealed by the end of the episode.
    engagements : int
        g(final_seeds, φ).
    realized_revenue : float
        min{g(final_seeds, φ), B - c(final_seeds)}.
    episode_seed : int or None
    policy : str
        The policy that produced the trace.
    branch : str
        The sub-policy actually run: differs from `policy` only for ``pis``.
    """

    def __init__(self, instance, steps, observation, episode_seed, policy,
                 branch=None):
        self.instance = instance
        self.steps = list(steps)
        self.observation = observation
        self.final_seeds = observation.dom
        self.engagements = int(observation.engaged().size)
        self.realized_revenue = min(float(self.engagements),
                                    instance.budget -
                                    instance.cost(self.final_seeds))
        self.episode_seed = episode_seed
        self.policy = policy
        self.branch = branch or policy

    def __repr__(self):
        return ('PolicyTrace(%s, seeds=%s, revenue=%r)'
                % (self.branch, sorted(self.final_seeds),
                   self.realized_revenue))


def h_value(trace, z):
    """Return h(final seeds, φ, z) = min{g(final seeds, φ), B - z}."""
    return min(float(trace.engagements), trace.instance.budget - z)


def _reveal(instance, partial, node, hidden):
    observation = observe(instance, partial.dom | {node}, hidden)
    revealed = dict(((instance.edges[i][0], instance.edges[i][1]),
                     'Live' if x else 'Blocked')
                    for i, x in observation.observed.items()
                    if i not in partial.observed)
    return observation, PolicyStep(node, revealed)


def run_pi1(instance, hidden, params, episode_seed, marginals=None):
    """Run the adaptive benefit-cost greedy against a hidden realization.

    Parameters
    ----------
    instance : Instance
    hidden : Realization
    params : AdaptiveParams
    episode_seed : int
        Seeds the Δ estimates when `marginals` is not given.
    marginals : optional
        An object with a ``marginal(partial, e, z, step)`` method, e.g.
        `ExactMarginals` for exact evaluation.
    """
    if marginals is None:
        marginals = SampledMarginals(instance, params.marginal_samples,
                                     episode_seed)
    cap = min(params.C, instance.budget)
    partial = PartialRealization.empty(instance)
    steps, spent = [], 0.0
    while True:
        best, best_ratio = None, None
        for e in instance.nodes:
            if e in partial.dom:
                continue
            delta = marginals.marginal(partial, e, 0.0, len(steps))
            if delta <= 0:
                continue
            cost = instance.node_cost(e)
            ratio = np.inf if cost == 0.0 else delta / cost
            if best is None or ratio > best_ratio:
                best, best_ratio = e, ratio
        if best is None or spent + instance.node_cost(best) > cap:
            break
        partial, step = _reveal(instance, partial, best, hidden)
        steps.append(step)
        spent += instance.node_cost(best)
        logger.debug("pi1 step %d picks %s (ratio %r)"
                     % (len(steps), best, best_ratio))
    return PolicyTrace(instance, steps, partial, episode_seed, 'pi1')


def pi2_choice(pool):
    """Return the affordable node with the best f_exp on the pool, or None."""
    instance = pool.instance
    best, best_value = None, None
    for e, cost in zip(instance.nodes, instance.costs):
        if cost > instance.budget:
            continue
        value = estimate_f_exp(pool, [e])
        if best is None or value > best_value:
            best, best_value = e, value
    return best


def run_pi2(instance, pool, hidden, choice=None, episode_seed=None):
    """Select the single best node and observe its cascade.

    `choice` may carry a precomputed `pi2_choice(pool)`.
    """
    if choice is None:
        choice = pi2_choice(pool)
    partial, steps = PartialRealization.empty(instance), []
    if choice is not None:
        partial, step = _reveal(instance, partial, choice, hidden)
        steps.append(step)
    return PolicyTrace(instance, steps, partial, episode_seed, 'pi2')


def coin(episode_seed):
    """True when the mixed policy runs pi1 in this episode."""
    return bool(derived_rng(episode_seed, COIN_STREAM).random() < 0.5)


def run_pis(instance, pool, hidden, params, episode_seed, marginals=None,
            choice=None):
    """Run pi1 or pi2, chosen by a fair coin derived from the episode seed."""
    if coin(episode_seed):
        trace = run_pi1(instance, hidden, params, episode_seed, marginals)
    else:
        trace = run_pi2(instance, pool, hidden, choice, episode_seed)
    trace.branch, trace.policy = trace.policy, 'pis'
    return trace


def _check_policy(policy):
    if policy not in POLICIES:
        raise UnknownPolicyError("Unknown policy '%s'; expected one of %s"
                                 % (policy, ', '.join(POLICIES)))


def episode_seeds(base_seed, episodes):
    """Return the per-episode seeds derived from a base seed."""
    return [int(s) for s in
            np.random.SeedSequence(base_seed).generate_state(episodes)]


def evaluate_policy(instance, policy, episodes, base_seed, params,
                    exact=False, pool=None, z=None, distribution=None):
    """Estimate f_avg(π), the mean realized revenue over episodes.

    Parameters
    ----------
    policy : {'pi1', 'pi2', 'pis'}
    episodes : int
        Number of hidden realizations to draw.
    base_seed : int
        Seeds every episode.
    params : AdaptiveParams
    exact : bool, optional
        Enumerate the hidden realizations and use exact marginals instead.
    pool : SamplePool, optional
        The pool ``pi2`` chooses its node on; drawn from `base_seed` with
        ``params.marginal_samples`` realizations if not given.
    z : float, optional
        Average h(·, ·, z) instead of the realized revenue.

    Raises
    ------
    UnknownPolicyError
        If the policy name is not recognized.
    """
    _check_policy(policy)
    if exact:
        return exact_policy_value(instance, policy, params, z, distribution)
    if int(episodes) < 1:
        raise PreconditionError("At least one episode is required")
    if policy != 'pi1' and pool is None:
        pool = build_pool(instance, params.marginal_samples, base_seed)
    choice = pi2_choice(pool) if pool is not None else None
    total = 0.0
    for seed in episode_seeds(base_seed, int(episodes)):
        hidden = sample_realization(instance,
                                    derived_rng(seed, HIDDEN_STREAM))
        if policy == 'pi1':
            trace = run_pi1(instance, hidden, params, seed)
        elif policy == 'pi2':
            trace = run_pi2(instance, pool, hidden, choice, seed)
        else:
            trace = run_pis(instance, pool, hidden, params, seed,
                            choice=choice)
        total += trace.realized_revenue if z is None else h_value(trace, z)
    value = total / int(episodes)
    logger.info("%s over %d episodes (seed %r): %r"
                % (policy, int(episodes), base_seed, value))
    return value


def exact_policy_value(instance, policy, params, z=None, distribution=None):
    """Return f_avg(π) (or h_avg(π, z)) exactly.

    Every hidden realization of the exact distribution is played with exact
    conditional marginals; ``pis`` is the mean of the two sub-policies.
    """
    _check_policy(policy)
    if policy == 'pis':
        return (exact_policy_value(instance, 'pi1', params, z, distribution) +
                exact_policy_value(instance, 'pi2', params, z,
                                   distribution)) / 2
    distribution = distribution_of(instance, distribution)
    marginals = ExactMarginals(instance, distribution)
    choice = pi2_choice(distribution)
    values = np.zeros(len(distribution))
    for r, hidden in enumerate(distribution):
        if policy == 'pi1':
            trace = run_pi1(instance, hidden, params, None, marginals)
        else:
            trace = run_pi2(instance, distribution, hidden, choice)
        values[r] = trace.realized_revenue if z is None else h_value(trace, z)
    return float(np.dot(distribution.weights, values))
