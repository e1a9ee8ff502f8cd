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
Non-adaptive seed selection.

All selectors take a `RealizationSet`: a `SamplePool` for Monte-Carlo
selection, or an `ExactDistribution` for exact selection on small
instances. Candidates are compared by f_exp on that set, and the empty set
is always a candidate, so a returned objective is never negative.

Ties in every argmax break by the instance's node order.
"""
import logging

import numpy as np

from ..errors import PreconditionError
from .cascade import RealizationSet
from .estimator import estimate_f_exp, mean
from .network import users_within_cost

logger = logging.getLogger(__name__)

EMPTY_SET = 'empty-set'


class SelectionResult(object):
    """The winning candidate of a selector.

    Attributes
    ----------
    seeds : frozenset of str
    objective_estimate : float
        f_exp of the seeds on the realization set used for selection.
    total_cost : float
    provenance : str
        Which candidate won, e.g. 'phase1-greedy' or 'phase2-singleton(u)'.
    phase1, phase2 : SelectionResult or None
        The winners of each phase of `select`.
    """

    def __init__(self, seeds, objective_estimate, total_cost, provenance,
                 phase1=None, phase2=None):
        self.seeds = frozenset(seeds)
        self.objective_estimate = objective_estimate
        self.total_cost = total_cost
        self.provenance = provenance
        self.phase1 = phase1
        self.phase2 = phase2

    def __repr__(self):
        return ('SelectionResult(seeds=%s, objective_estimate=%r, '
                'total_cost=%r, provenance=%r)'
                % (sorted(self.seeds), self.objective_estimate,
                   self.total_cost, self.provenance))


def _ratio(gain, cost):
    if cost == 0.0:
        return np.inf if gain > 0 else 0.0
    return gain / cost


def _check_level(instance, y):
    if not 0.0 <= y <= instance.budget:
        raise PreconditionError("Truncation level %r is outside [0, %r]"
                                % (y, instance.budget))


def _ground_set(instance, x):
    return [instance.index[v] for v in sorted(users_within_cost(instance, x))]


def _greedy(realizations, x, y):
    """Benefit-cost greedy on 𝒱(x) with utility l(·, y).

    Returns the selected positions and the pick that stopped the run by
    exceeding x, or None if the run ended for lack of a positive gain.
    """
    instance = realizations.instance
    _check_level(instance, y)
    cap = instance.budget - y
    remaining = _ground_set(instance, x)
    engaged = realizations.engaged([])
    value, spent, selected = 0.0, 0.0, []
    while remaining:
        best, best_ratio = None, None
        for e in remaining:
            extended = engaged | realizations.engaged([e])
            gain = mean(realizations, np.minimum(extended.sum(axis=1),
                                                 cap)) - value
            if gain <= 0:
                continue
            ratio = _ratio(gain, instance.costs[e])
            if best is None or ratio > best_ratio:
                best, best_ratio, best_value = e, ratio, gain + value
                best_engaged = extended
        if best is None:
            return selected, None
        if spent + instance.costs[best] > x:
            return selected, best
        selected.append(best)
        remaining.remove(best)
        spent += instance.costs[best]
        engaged, value = best_engaged, best_value
        logger.debug("Greedy(%r, %r) picks %s, l=%r"
                     % (x, y, instance.nodes[best], value))
    return selected, None


def greedy(pool, x, y):
    """Return Greedy(x, y), a benefit-cost greedy set of cost at most x.

    Starting from ∅, the node of 𝒱(x) with the largest ratio of marginal
    l(·, y) gain to cost is added until the next pick would make the cost
    exceed x. Nodes without a positive gain are never added.
    """
    selected, _ = _greedy(pool, x, y)
    return pool.instance.node_set(selected)


def greedy_plus(pool, x, y):
    """Return Greedy(x, y) plus the pick that would have exceeded x.

    This one-step-further set may cost more than x. It satisfies
    l(Greedy⁺) <= l(Greedy) + l({v(x, y)}).
    """
    selected, overflow = _greedy(pool, x, y)
    if overflow is not None:
        selected = selected + [overflow]
    return pool.instance.node_set(selected)


def best_singleton(pool, x, y):
    """Return v(x, y), the node of 𝒱(x) maximizing l({e}, y), or None."""
    instance = pool.instance
    _check_level(instance, y)
    best, best_value = None, None
    for e in _ground_set(instance, x):
        value = mean(pool, np.minimum(pool.engagements([e]),
                                      instance.budget - y))
        if best is None or value > best_value:
            best, best_value = e, value
    return None if best is None else instance.nodes[best]


def _best_candidate(realizations, candidates):
    """Return the f_exp-maximizing candidate, the empty set first."""
    instance = realizations.instance
    winner = SelectionResult(frozenset(), 0.0, 0.0, EMPTY_SET)
    for provenance, seeds in candidates:
        if seeds is None:
            continue
        value = estimate_f_exp(realizations, seeds)
        if value > winner.objective_estimate:
            winner = SelectionResult(seeds, value, instance.cost(seeds),
                                     provenance)
    return winner


def _singleton(node):
    return None if node is None else frozenset([node])


def select_known_cost(pool, c_star):
    """Select seeds when the cost c(S*) of an optimal set is known.

    The candidates are Greedy(c*, c*), the best singleton v(c*, c*) and ∅.
    """
    instance = pool.instance
    if not 0.0 <= c_star <= instance.budget:
        raise PreconditionError("Known cost %r is outside [0, %r]"
                                % (c_star, instance.budget))
    result = _best_candidate(pool, [
        ('known-cost-greedy', greedy(pool, c_star, c_star)),
        ('known-cost-singleton',
         _singleton(best_singleton(pool, c_star, c_star)))])
    logger.info("Known-cost selection (c*=%r): %r" % (c_star, result))
    return result


def select(pool):
    """Two-phase seed selection for an unknown optimal cost.

    Phase 1 covers optimal sets whose seeds all cost at most B/2 with
    Greedy(B/2, 0) and v(B/2, 0). Phase 2 guesses the most expensive seed e,
    for every e with B/2 < c(e) <= B, with Greedy(c(e), c(e)) and
    v(c(e), c(e)). The best candidate by f_exp wins.
    """
    instance = pool.instance
    half = instance.budget / 2
    phase1 = _best_candidate(pool, [
        ('phase1-greedy', greedy(pool, half, 0.0)),
        ('phase1-singleton', _singleton(best_singleton(pool, half, 0.0)))])
    candidates = []
    for e, cost in zip(instance.nodes, instance.costs):
        if not half < cost <= instance.budget:
            continue
        candidates.append(('phase2-greedy(%s)' % e, greedy(pool, cost, cost)))
        candidates.append(('phase2-singleton(%s)' % e,
                           _singleton(best_singleton(pool, cost, cost))))
    phase2 = _best_candidate(pool, candidates)
    winner = phase1 if (phase1.objective_estimate >=
                        phase2.objective_estimate) else phase2
    result = SelectionResult(winner.seeds, winner.objective_estimate,
                             winner.total_cost, winner.provenance,
                             phase1=phase1, phase2=phase2)
    logger.info("Selection: %r" % result)
    return result


def _single_realization(instance):
    if not instance.is_deterministic:
        raise PreconditionError("The instance has edge probabilities "
                                "strictly between 0 and 1")
    return RealizationSet(instance, instance.probabilities == 1.0, [1.0])


def _engagement_greedy(realization, ground, picks, budget=None):
    """Benefit-cost greedy on g: up to `picks` nested picks from `ground`.

    Without a budget every pick is made, zero gains included. With a budget
    nodes without a positive gain are skipped and the run stops before the
    first pick that would exceed it.
    """
    instance = realization.instance
    remaining = list(ground)
    engaged = realization.engaged([])
    spent, selected, nested = 0.0, [], []
    while remaining and len(selected) < picks:
        count = engaged.sum()
        best, best_ratio = None, None
        for e in remaining:
            gain = float((engaged | realization.engaged([e])).sum() - count)
            if budget is not None and gain <= 0:
                continue
            ratio = _ratio(gain, instance.costs[e])
            if best is None or ratio > best_ratio:
                best, best_ratio = e, ratio
        if best is None:
            break
        if budget is not None and spent + instance.costs[best] > budget:
            break
        selected.append(best)
        remaining.remove(best)
        spent += instance.costs[best]
        engaged = engaged | realization.engaged([best])
        nested.append(instance.node_set(selected))
    return nested


def _best_f_singleton(realization, ground):
    best, best_value = None, None
    for e in ground:
        value = estimate_f_exp(realization, [realization.instance.nodes[e]])
        if best is None or value > best_value:
            best, best_value = e, value
    return None if best is None else realization.instance.nodes[best]


def deterministic_candidates(instance):
    """Return [(i, [S_{i,1}, ..., S_{i,i}])] for every prefix length i.

    𝒱ᵢ holds the i cheapest users (ties by node order), and S_{i,k} is the
    set of the first k picks of the g benefit-cost greedy on 𝒱ᵢ.
    """
    realization = _single_realization(instance)
    order = sorted(range(instance.n),
                   key=lambda v: (instance.costs[v], instance.nodes[v]))
    return [(i, _engagement_greedy(realization, sorted(order[:i]), i))
            for i in range(1, instance.n + 1)]


def select_deterministic(instance):
    """Seed selection for an instance with a single realization.

    Users are numbered by non-decreasing cost (ties by node order). For
    every prefix 𝒱ᵢ of that numbering the g benefit-cost greedy builds nested
    sets S_{i,1} ⊆ … ⊆ S_{i,i}. The f_exp-best of all S_{i,k}, of the best
    singleton o and of ∅ is returned; infeasible sets have negative f_exp
    and lose to ∅.

    Raises
    ------
    PreconditionError
        If some edge probability is neither 0 nor 1.
    """
    realization = _single_realization(instance)
    candidates = []
    for i, nested in deterministic_candidates(instance):
        for k, seeds in enumerate(nested, 1):
            candidates.append(('deterministic-S(%d,%d)' % (i, k), seeds))
    candidates.append(('singleton-o', _singleton(
        _best_f_singleton(realization, range(instance.n)))))
    result = _best_candidate(realization, candidates)
    logger.info("Deterministic selection: %r" % result)
    return result


def select_deterministic_known_cost(instance, c_star):
    """Known-cost selection for an instance with a single realization.

    The candidates are the budgeted g benefit-cost greedy on 𝒱(c*) with
    budget c*, the f_exp-best singleton of 𝒱(c*), and ∅.
    """
    realization = _single_realization(instance)
    if not 0.0 <= c_star <= instance.budget:
        raise PreconditionError("Known cost %r is outside [0, %r]"
                                % (c_star, instance.budget))
    ground = _ground_set(instance, c_star)
    nested = _engagement_greedy(realization, ground, len(ground), c_star)
    result = _best_candidate(realization, [
        ('known-cost-greedy', nested[-1] if nested else frozenset()),
        ('known-cost-singleton',
         _singleton(_best_f_singleton(realization, ground)))])
    logger.info("Deterministic known-cost selection (c*=%r): %r"
                % (c_star, result))
    return result
