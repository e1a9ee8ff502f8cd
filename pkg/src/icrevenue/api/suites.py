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
The verification battery.

Each suite draws its own random small instances from a generator derived
from the battery seed, checks one family of guarantees against the exact
oracle, and reports every failure with a serialized counterexample
instance. The ratio suites multiply their guaranteed constant by
`ratio_scale`; a scale far above 1 must make them fail.
"""
import logging
import math
import time
from collections import OrderedDict

import numpy as np

from ..errors import PreconditionError
from .adaptive import compute_params, exact_policy_value
from .estimator import build_pool, derived_rng, estimate_f_exp
from .network import generate_random_instance, serialize_instance
from .nonadaptive import (deterministic_candidates, greedy, greedy_plus,
                          best_singleton, select, select_deterministic,
                          select_deterministic_known_cost, select_known_cost)
from .oracle import (TOLERANCE, check_adaptive_submodularity,
                     check_min_truncation, check_realization_submodularity,
                     engagement_table, enumerate_realizations, exact_f_exp,
                     exact_l, min_truncation_holds, optimal_adaptive,
                     optimal_nonadaptive, set_function_violations,
                     subset_positions)

logger = logging.getLogger(__name__)

GENERAL_RATIO = (1.0 - math.exp(-0.5)) / 4.0
PHASE2_RATIO = (1.0 - math.exp(-0.5)) / 2.0
DETERMINISTIC_RATIO = (1.0 - 1.0 / math.e) / 2.0

MAX_REPORTED = 5


class SuiteResult(object):
    """Outcome of one suite.

    Attributes
    ----------
    name : str
    trials : int
        Number of random trials run.
    checks : int
        Number of individual comparisons made.
    failures : list of dict
        Counterexamples, at most `MAX_REPORTED` of them.
    failed : int
        Total number of failed comparisons.
    allowed : int
        Failures tolerated before the suite fails.
    elapsed : float
        Wall time in seconds.
    """

    def __init__(self, name, trials):
        self.name = name
        self.trials = trials
        self.checks = 0
        self.failed = 0
        self.allowed = 0
        self.failures = []
        self.elapsed = 0.0

    def __repr__(self):
        return 'SuiteResult(%s, %s, checks=%d, failed=%d)' % (
            self.name, 'pass' if self.passed else 'FAIL', self.checks,
            self.failed)

    @property
    def passed(self):
        return self.failed <= self.allowed

    def check(self, condition, **counterexample):
        self.checks += 1
        if not condition:
            self.failed += 1
            if len(self.failures) < MAX_REPORTED:
                self.failures.append(counterexample)
        return condition

    def as_dict(self):
        return OrderedDict([('suite', self.name), ('passed', self.passed),
                            ('trials', self.trials), ('checks', self.checks),
                            ('failed', self.failed),
                            ('elapsed', round(self.elapsed, 3)),
                            ('failures', self.failures)])


def random_instance(rng, max_nodes, max_edges, deterministic=False):
    """Draw a small instance: B in {3, ..., 10}, costs uniform in [1, B].

    Edge probabilities are uniform in [0, 1], or 0 and 1 with equal chance
    for a deterministic instance.
    """
    n = int(rng.integers(1, max_nodes + 1))
    m = int(rng.integers(0, min(max_edges, n * (n - 1)) + 1))
    budget = float(rng.integers(3, 11))
    instance = generate_random_instance(n, m, (0.0, 1.0), (1.0, budget),
                                        budget, int(rng.integers(2 ** 31)))
    if deterministic:
        instance = instance.with_probabilities(
            (rng.random(m) < 0.5).astype(float))
    return instance


def _nodes(seeds):
    return sorted(seeds)


def submodularity(result, rng, trials, ratio_scale):
    """g(·, φ) on every realization and g_exp are monotone and submodular."""
    for _ in range(trials):
        instance = random_instance(rng, 5, 8)
        distribution = enumerate_realizations(instance)
        for realization, violation in check_realization_submodularity(
                instance, distribution):
            result.check(False, instance=serialize_instance(instance),
                         function='g', realization=repr(realization),
                         violation=_violation(violation))
        result.checks += len(distribution)
        g_exp = np.dot(distribution.weights, engagement_table(distribution))
        for violation in set_function_violations(g_exp, instance.n):
            result.check(False, instance=serialize_instance(instance),
                         function='g_exp', violation=violation[1])
        result.checks += 1


def truncation(result, rng, trials, ratio_scale):
    """l(·, z) is monotone and submodular; f_exp(S) <= l(S, 0)."""
    for _ in range(trials):
        instance = random_instance(rng, 5, 8)
        distribution = enumerate_realizations(instance)
        table = engagement_table(distribution)
        B, n = instance.budget, instance.n
        for z in (0.0, B / 4, B / 2, B):
            values = np.dot(distribution.weights, np.minimum(table, B - z))
            found = set_function_violations(values, n)
            result.check(not found, instance=serialize_instance(instance),
                         function='l', z=z,
                         violation=[v[1] for v in found[:1]])
        costs = np.array([instance.costs[subset_positions(mask, n)].sum()
                          for mask in range(2 ** n)])
        f_exp = np.dot(distribution.weights, np.minimum(table, B - costs))
        l_zero = np.dot(distribution.weights, np.minimum(table, B))
        result.check(bool(np.all(f_exp <= l_zero + TOLERANCE)),
                     instance=serialize_instance(instance),
                     function='f_exp <= l(., 0)')


def nonadaptive_ratio(result, rng, trials, ratio_scale):
    """The two-phase selector, its phases and the one-step-further greedy."""
    for _ in range(trials):
        instance = random_instance(rng, 8, 11)
        distribution = enumerate_realizations(instance)
        chosen = select(distribution)
        optimum_set, optimum = optimal_nonadaptive(instance, distribution)
        text = serialize_instance(instance)
        result.check(chosen.total_cost <= instance.budget and
                     chosen.objective_estimate >= 0.0, instance=text,
                     seeds=_nodes(chosen.seeds), check='feasible')
        bound = GENERAL_RATIO * ratio_scale * optimum
        result.check(chosen.objective_estimate >= bound - TOLERANCE,
                     instance=text, seeds=_nodes(chosen.seeds),
                     value=chosen.objective_estimate, optimum=optimum,
                     optimal_seeds=_nodes(optimum_set), bound=bound)
        if optimum_set:
            if max(instance.node_cost(v) for v in optimum_set) <= \
                    instance.budget / 2:
                phase, ratio = chosen.phase1, GENERAL_RATIO
            else:
                phase, ratio = chosen.phase2, PHASE2_RATIO
            bound = ratio * ratio_scale * optimum
            result.check(phase.objective_estimate >= bound - TOLERANCE,
                         instance=text, phase=phase.provenance,
                         value=phase.objective_estimate, optimum=optimum,
                         bound=bound)
        x = instance.budget / 2
        base = greedy(distribution, x, 0.0)
        plus = greedy_plus(distribution, x, 0.0)
        singleton = best_singleton(distribution, x, 0.0)
        extra = exact_l(instance, [singleton], 0.0, distribution) \
            if singleton is not None else 0.0
        result.check(instance.cost(base) <= x and
                     exact_l(instance, plus, 0.0, distribution) <=
                     exact_l(instance, base, 0.0, distribution) + extra +
                     TOLERANCE, instance=text, check='greedy-plus')


def deterministic_ratio(result, rng, trials, ratio_scale):
    """The deterministic selector and the nesting of its candidates."""
    for _ in range(trials):
        instance = random_instance(rng, 10, 20, deterministic=True)
        chosen = select_deterministic(instance)
        optimum_set, optimum = optimal_nonadaptive(instance)
        text = serialize_instance(instance)
        bound = DETERMINISTIC_RATIO * ratio_scale * optimum
        result.check(chosen.objective_estimate >= bound - TOLERANCE,
                     instance=text, seeds=_nodes(chosen.seeds),
                     value=chosen.objective_estimate, optimum=optimum,
                     optimal_seeds=_nodes(optimum_set), bound=bound)
        nested = all(a <= b for _, sets in deterministic_candidates(instance)
                     for a, b in zip(sets, sets[1:]))
        result.check(nested, instance=text, check='nesting')


def known_cost(result, rng, trials, ratio_scale):
    """Known-cost selection with c(S*) from the oracle, on deterministic and
    stochastic instances."""
    for trial in range(trials):
        deterministic = trial % 2 == 0
        if deterministic:
            instance = random_instance(rng, 10, 20, deterministic=True)
        else:
            instance = random_instance(rng, 8, 11)
        distribution = enumerate_realizations(instance)
        optimum_set, optimum = optimal_nonadaptive(instance, distribution)
        c_star = instance.cost(optimum_set)
        bound = DETERMINISTIC_RATIO * ratio_scale * optimum
        text = serialize_instance(instance)
        chosen = select_known_cost(distribution, c_star)
        result.check(chosen.objective_estimate >= bound - TOLERANCE,
                     instance=text, selector='known-cost', c_star=c_star,
                     value=chosen.objective_estimate, optimum=optimum,
                     bound=bound)
        if deterministic:
            known = select_deterministic_known_cost(instance, c_star)
            result.check(known.objective_estimate >= bound - TOLERANCE,
                         instance=text, selector='deterministic-known-cost',
                         c_star=c_star, value=known.objective_estimate,
                         optimum=optimum, bound=bound)
            general = select_deterministic(instance)
            result.check(general.objective_estimate >=
                         known.objective_estimate - TOLERANCE,
                         instance=text, check='deterministic dominates')


def adaptive_submodularity(result, rng, trials, ratio_scale):
    """h(·, ·, z) is adaptive monotone and adaptive submodular."""
    for _ in range(trials):
        instance = random_instance(rng, 4, 4)
        distribution = enumerate_realizations(instance)
        for z in (0.0, instance.budget / 2):
            found = check_adaptive_submodularity(instance, z, distribution)
            result.check(not found, instance=serialize_instance(instance),
                         z=z, violation=[_violation(v) for v in found[:1]])


def adaptive_ratio(result, rng, trials, ratio_scale):
    """The mixed policy against the optimal adaptive policy, and
    h_avg(π, 0) >= f_avg(π) for every policy."""
    for _ in range(trials):
        instance = random_instance(rng, 4, 4)
        distribution = enumerate_realizations(instance)
        params = compute_params(instance, 1)
        text = serialize_instance(instance)
        values = {}
        for policy in ('pi1', 'pi2'):
            values[policy] = exact_policy_value(instance, policy, params,
                                                distribution=distribution)
            h_avg = exact_policy_value(instance, policy, params, 0.0,
                                       distribution)
            result.check(h_avg >= values[policy] - TOLERANCE, instance=text,
                         policy=policy, h_avg=h_avg, f_avg=values[policy])
        mixed = (values['pi1'] + values['pi2']) / 2
        optimum = optimal_adaptive(instance, distribution=distribution)
        bound = params.bound * ratio_scale * optimum
        result.check(mixed >= bound - TOLERANCE, instance=text,
                     value=mixed, optimum=optimum, C=params.C,
                     alpha=params.alpha, bound=bound)
        if float(np.max(instance.costs)) <= instance.budget / 2:
            result.check(abs(params.bound - GENERAL_RATIO) <= 1e-12,
                         instance=text, constant=params.bound)
        must_continue = optimal_adaptive(instance, allow_stop=False,
                                         distribution=distribution)
        _, fixed = optimal_nonadaptive(instance, distribution)
        result.check(optimum >= fixed - TOLERANCE and
                     optimum >= must_continue - TOLERANCE, instance=text,
                     optimum=optimum, nonadaptive=fixed,
                     must_continue=must_continue)


def _dyadic(rng, size, scale=10.0):
    return np.round(rng.uniform(0.0, scale, size) * 64.0) / 64.0


def lemma_min(result, rng, trials, ratio_scale, chunk=100000):
    """min{c1,x} - min{c2,x} >= min{c3,x} - min{c4,x} under the
    preconditions, on random quintuples with exactly representable values."""
    for start in range(0, trials, chunk):
        size = min(chunk, trials - start)
        c2 = _dyadic(rng, size)
        c4 = c2 + _dyadic(rng, size)
        c3 = c4 + _dyadic(rng, size)
        c1 = c2 + (c3 - c4) + _dyadic(rng, size)
        x = _dyadic(rng, size, 40.0)
        holds = min_truncation_holds(c1, c2, c3, c4, x, tolerance=0.0)
        for k in np.flatnonzero(~holds)[:MAX_REPORTED]:
            result.failures.append(dict(c=[c1[k], c2[k], c3[k], c4[k]],
                                        x=x[k]))
        result.failed += int(np.count_nonzero(~holds))
        result.checks += size
        if start == 0:
            for k in range(min(size, 100)):
                try:
                    result.check(check_min_truncation(c1[k], c2[k], c3[k],
                                                      c4[k], x[k]),
                                 c=[c1[k], c2[k], c3[k], c4[k]], x=x[k])
                except PreconditionError as error:
                    result.check(False, error=str(error))


def convergence(result, rng, trials, ratio_scale, samples=20000):
    """Pool estimates agree with exact values within 3B/√M in at least 99%
    of trials, and equal seeds give bit-identical estimates and picks."""
    result.allowed = trials // 100
    for trial in range(trials):
        instance = random_instance(rng, 6, 10)
        seeds = [v for v in instance.nodes if rng.random() < 0.5]
        seed = int(rng.integers(2 ** 31))
        pool = build_pool(instance, samples, seed)
        estimate = estimate_f_exp(pool, seeds)
        exact = exact_f_exp(instance, seeds,
                            enumerate_realizations(instance))
        band = 3.0 * instance.budget / math.sqrt(samples)
        result.check(abs(estimate - exact) <= band,
                     instance=serialize_instance(instance), seeds=seeds,
                     estimate=estimate, exact=exact, band=band)
        if trial % 10 == 0:
            again = build_pool(instance, samples, seed)
            repeat = estimate_f_exp(again, seeds) == estimate and \
                select(again).seeds == select(pool).seeds
            if not repeat:
                result.allowed = 0
            result.check(repeat, instance=serialize_instance(instance),
                         seed=seed, check='determinism')


def _violation(violation):
    def show(part):
        if isinstance(part, frozenset):
            return sorted(part)
        return repr(part)
    return dict(kind=violation.kind, lower=show(violation.lower),
                upper=show(violation.upper), node=violation.node,
                lower_gain=violation.lower_gain,
                upper_gain=violation.upper_gain)


SUITES = OrderedDict([
    ('submodularity', (submodularity, 50)),
    ('truncation', (truncation, 50)),
    ('nonadaptive-ratio', (nonadaptive_ratio, 200)),
    ('deterministic-ratio', (deterministic_ratio, 200)),
    ('known-cost', (known_cost, 200)),
    ('adaptive-submodularity', (adaptive_submodularity, 50)),
    ('adaptive-ratio', (adaptive_ratio, 100)),
    ('lemma-min', (lemma_min, 1000000)),
    ('convergence', (convergence, 100)),
])


def run_suite(name, seed=0, trials=None, ratio_scale=1.0):
    """Run one suite and return its `SuiteResult`.

    Raises
    ------
    KeyError
        If the suite name is unknown.
    """
    function, default = SUITES[name]
    trials = default if trials is None else int(trials)
    index = list(SUITES).index(name)
    result = SuiteResult(name, trials)
    tic = time.time()
    function(result, derived_rng(seed, index), trials, ratio_scale)
    result.elapsed = time.time() - tic
    if result.passed:
        logger.info("%r in %.2f s" % (result, result.elapsed))
    else:
        logger.warning("%r in %.2f s" % (result, result.elapsed))
    return result


def run_suites(names=None, seed=0, trials=None, ratio_scale=1.0):
    """Run the named suites (all by default) in battery order."""
    if names is None:
        names = list(SUITES)
    return [run_suite(name, seed, trials, ratio_scale) for name in names]
