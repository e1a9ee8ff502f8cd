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
Exact brute-force computations for small instances.

The oracle enumerates every realization with its probability and evaluates
the objectives as exact expectations. It finds the optimal seed set by
subset enumeration and the optimal adaptive policy by recursion over
partial realizations, and it provides the property checks that the
verification suites run: submodularity of set functions, adaptive
monotonicity and submodularity of the truncated engagement value, and the
min-truncation inequality.

Every tolerance is 1e-9 absolute.
"""
import itertools
import logging
from collections import namedtuple
from functools import lru_cache

import numpy as np

from ..errors import CapExceededError, EstimationError, PreconditionError
from .cascade import PartialRealization, RealizationSet
from .estimator import mean, truncated_gains
from .network import Instance

logger = logging.getLogger(__name__)

TOLERANCE = 1e-9

Violation = namedtuple('Violation', ['kind', 'lower', 'upper', 'node',
                                     'lower_gain', 'upper_gain'])


class ExactDistribution(RealizationSet):
    """Every realization of an instance with its prior probability.

    Edges with probability 0 or 1 are fixed, so only the remaining edges are
    enumerated; the entries still cover every labeling of nonzero
    probability.
    """

    def __repr__(self):
        return 'ExactDistribution(entries=%d)' % len(self)

    @property
    def entries(self):
        """The (Realization, probability) pairs."""
        return [(self[i], float(p)) for i, p in enumerate(self.weights)]


def enumerate_realizations(instance, cap=4096, closure_cells=50000000):
    """Return the exact distribution over the realizations of an instance.

    Raises
    ------
    CapExceededError
        If more than `cap` realizations have nonzero probability.
    """
    probabilities = instance.probabilities
    free = np.flatnonzero((probabilities > 0.0) & (probabilities < 1.0))
    if 2 ** free.size > cap:
        raise CapExceededError("%d uncertain edges give %d realizations, "
                               "above the cap of %d"
                               % (free.size, 2 ** free.size, cap))
    count = 2 ** free.size
    bits = (np.arange(count)[:, None] >> np.arange(free.size)) & 1
    bits = bits.astype(bool)
    labels = np.zeros((count, instance.m), dtype=bool)
    labels[:, probabilities == 1.0] = True
    labels[:, free] = bits
    p = probabilities[free]
    weights = np.prod(np.where(bits, p, 1.0 - p), axis=1)
    return ExactDistribution(instance, labels, weights,
                             closure_cells=closure_cells)


@lru_cache(maxsize=32)
def _cached_distribution(instance, cap):
    return enumerate_realizations(instance, cap)


def distribution_of(instance, distribution=None, cap=4096):
    """Return `distribution`, or the (cached) enumeration of `instance`."""
    if distribution is not None:
        return distribution
    return _cached_distribution(instance, cap)


def exact_f_exp(instance, seeds, distribution=None):
    """Return Σ p(φ)·min{g(S, φ), B - c(S)}."""
    distribution = distribution_of(instance, distribution)
    g = distribution.engagements(instance.positions(seeds))
    return mean(distribution, np.minimum(g, instance.budget -
                                         instance.cost(seeds)))


def exact_g_exp(instance, seeds, distribution=None):
    distribution = distribution_of(instance, distribution)
    return mean(distribution,
                distribution.engagements(instance.positions(seeds)))


def exact_l(instance, seeds, z, distribution=None):
    """Return Σ p(φ)·min{g(S, φ), B - z}."""
    if not 0.0 <= z <= instance.budget:
        raise EstimationError("Truncation level %r is outside [0, %r]"
                              % (z, instance.budget))
    distribution = distribution_of(instance, distribution)
    g = distribution.engagements(instance.positions(seeds))
    return mean(distribution, np.minimum(g, instance.budget - z))


def _conditional_rows(distribution, partial):
    rows = np.flatnonzero(distribution.consistent_with(partial))
    total = distribution.weights[rows].sum()
    if rows.size == 0 or total <= 0.0:
        raise PreconditionError("%r has probability zero" % partial)
    return rows, distribution.weights[rows] / total


def exact_marginal(instance, partial, e, z, distribution=None):
    """Return Δ_{h(·,·,z)}(e | ψ), the exact conditional expected gain.

    Raises
    ------
    EstimationError
        If e is in dom(ψ) or z lies outside [0, B].
    PreconditionError
        If ψ has probability zero.
    """
    e = str(e)
    if e in partial.dom:
        raise EstimationError("Node '%s' is already in dom(ψ)" % e)
    if not 0.0 <= z <= instance.budget:
        raise EstimationError("Truncation level %r is outside [0, %r]"
                              % (z, instance.budget))
    distribution = distribution_of(instance, distribution)
    rows, weights = _conditional_rows(distribution, partial)
    gains = truncated_gains(distribution, partial.positions,
                            instance.index[e], instance.budget - z, rows)
    return float(np.dot(weights, gains))


class ExactMarginals(object):
    """Exact Δ values, cached on (ψ, e, z) and shared across episodes."""

    def __init__(self, instance, distribution=None):
        self.instance = instance
        self.distribution = distribution_of(instance, distribution)
        self._cache = {}

    def marginal(self, partial, e, z, step=None):
        key = (partial.key, str(e), float(z))
        if key not in self._cache:
            self._cache[key] = exact_marginal(self.instance, partial, e, z,
                                              self.distribution)
        return self._cache[key]


def outcomes(distribution, partial, e):
    """Return the possible observations after also selecting `e`.

    Returns
    -------
    list of (float, PartialRealization)
        Conditional probabilities given ψ and the resulting ψ′, in a fixed
        order.
    """
    instance = distribution.instance
    rows, weights = _conditional_rows(distribution, partial)
    seeds = partial.dom | {str(e)}
    mask, live = distribution.observations(instance.positions(seeds), rows)
    packed = np.packbits(np.hstack((mask, live)), axis=1)
    groups = {}
    for k, key in enumerate(row.tobytes() for row in packed):
        if key in groups:
            groups[key][0] += weights[k]
        else:
            groups[key] = [weights[k], k]
    result = []
    for probability, k in groups.values():
        observed = dict((int(i), bool(live[k, i]))
                        for i in np.flatnonzero(mask[k]))
        result.append((float(probability),
                       PartialRealization(instance, seeds, observed)))
    return result


def _check_caps(instance, max_nodes, max_edges=None):
    if instance.n > max_nodes:
        raise CapExceededError("%d nodes exceed the cap of %d"
                               % (instance.n, max_nodes))
    if max_edges is not None and instance.m > max_edges:
        raise CapExceededError("%d edges exceed the cap of %d"
                               % (instance.m, max_edges))


def optimal_nonadaptive(instance, distribution=None, max_nodes=20):
    """Return (S*, f_exp(S*)) by exhaustive search over affordable sets.

    Ties prefer the smaller set, then the lexicographically first.
    """
    _check_caps(instance, max_nodes)
    distribution = distribution_of(instance, distribution)
    best, value = frozenset(), 0.0
    for size in range(1, instance.n + 1):
        for seeds in itertools.combinations(instance.nodes, size):
            if instance.cost(seeds) > instance.budget:
                continue
            candidate = exact_f_exp(instance, seeds, distribution)
            if candidate > value + 1e-12:
                best, value = frozenset(seeds), candidate
    logger.debug("Optimal set %s, f_exp=%r" % (sorted(best), value))
    return best, value


def optimal_adaptive(instance, allow_stop=True, distribution=None,
                     max_nodes=4, max_edges=4):
    """Return the value of the optimal budget-feasible adaptive policy.

    The recursion runs over partial realizations ψ, memoized on their
    canonical key. Stopping yields min{g(dom(ψ)), B - c(dom(ψ))}, which is
    fixed given ψ. Selecting e is allowed when c(dom(ψ)) + c(e) <= B and
    yields the expected value over the observations it may reveal.

    Parameters
    ----------
    allow_stop : bool, optional
        If False, the policy must keep selecting while some pick is
        affordable.
    """
    _check_caps(instance, max_nodes, max_edges)
    distribution = distribution_of(instance, distribution)
    memo = {}

    def value(partial):
        if partial.key in memo:
            return memo[partial.key]
        spent = instance.cost(partial.dom)
        stop = min(float(partial.engaged().size), instance.budget - spent)
        choices = []
        for e in instance.nodes:
            if e in partial.dom:
                continue
            if spent + instance.node_cost(e) > instance.budget:
                continue
            choices.append(sum(p * value(child) for p, child
                               in outcomes(distribution, partial, e)))
        if allow_stop or not choices:
            choices.append(stop)
        memo[partial.key] = max(choices)
        return memo[partial.key]

    result = value(PartialRealization.empty(instance))
    logger.debug("Optimal adaptive value %r over %d partial realizations"
                 % (result, len(memo)))
    return result


@lru_cache(maxsize=None)
def _triples(n):
    """Bitmask arrays (A, B, v) for every A ⊆ B ⊆ [n] and v ∉ B."""
    lower, upper, node = [], [], []
    for b in range(2 ** n):
        a = b
        while True:
            for v in range(n):
                if not b >> v & 1:
                    lower.append(a)
                    upper.append(b)
                    node.append(v)
            if a == 0:
                break
            a = (a - 1) & b
    return (np.array(lower, dtype=np.intp), np.array(upper, dtype=np.intp),
            np.array(node, dtype=np.intp))


def subset_positions(mask, n):
    return np.array([v for v in range(n) if mask >> v & 1], dtype=np.intp)


def set_function_violations(table, n, monotone=True, tolerance=TOLERANCE):
    """Find submodularity (and monotonicity) violations in value tables.

    Parameters
    ----------
    table : ndarray, shape (..., 2**n)
        Set-function values indexed by subset bitmask (bit v for element v).
    n : int
        Size of the ground set.

    Returns
    -------
    list of (index, kind, A, B, v, gain on A, gain on B)
        `index` locates the offending table among the leading dimensions;
        A, B and v are bitmasks and element positions. Monotonicity
        violations have A = B.
    """
    table = np.asarray(table, dtype=np.float64)
    flat = table.reshape(-1, 2 ** n)
    lower, upper, node = _triples(n)
    bit = np.left_shift(1, node)
    lower_gain = flat[:, lower | bit] - flat[:, lower]
    upper_gain = flat[:, upper | bit] - flat[:, upper]
    found = []
    for r, t in zip(*np.nonzero(lower_gain < upper_gain - tolerance)):
        found.append((r, 'submodular', lower[t], upper[t], node[t],
                      lower_gain[r, t], upper_gain[r, t]))
    if monotone:
        decreasing = upper_gain < -tolerance
        for r, t in zip(*np.nonzero(decreasing & (lower == upper))):
            found.append((r, 'monotone', upper[t], upper[t], node[t],
                          upper_gain[r, t], upper_gain[r, t]))
    return found


def check_submodularity(ground, evaluator, max_nodes=5, monotone=True,
                        tolerance=TOLERANCE):
    """Exhaustively check a set function for submodularity.

    Parameters
    ----------
    ground : Instance or iterable
        The ground set; for an instance, its nodes.
    evaluator : callable
        Maps a frozenset of elements to a real value.
    monotone : bool, optional
        Also report (B, v) with value(B ∪ {v}) < value(B).

    Returns
    -------
    list of Violation
        Every (A, B, v) with A ⊆ B, v ∉ B and
        value(A ∪ {v}) - value(A) < value(B ∪ {v}) - value(B) - tolerance.
        An empty list means the function passed.

    Raises
    ------
    CapExceededError
        If the ground set has more than `max_nodes` elements.
    """
    if isinstance(ground, Instance):
        elements = list(ground.nodes)
    else:
        elements = sorted(ground)
    n = len(elements)
    if n > max_nodes:
        raise CapExceededError("%d elements exceed the cap of %d"
                               % (n, max_nodes))

    def members(mask):
        return frozenset(elements[v] for v in range(n) if mask >> v & 1)

    table = np.array([evaluator(members(mask)) for mask in range(2 ** n)],
                     dtype=np.float64)
    return [Violation(kind, members(a), members(b), elements[v],
                      float(ga), float(gb))
            for _, kind, a, b, v, ga, gb
            in set_function_violations(table, n, monotone, tolerance)]


def engagement_table(distribution):
    """Return g(S, φ) for every realization and every subset bitmask."""
    n = distribution.instance.n
    table = np.zeros((len(distribution), 2 ** n), dtype=np.float64)
    for mask in range(1, 2 ** n):
        table[:, mask] = distribution.engagements(subset_positions(mask, n))
    return table


def check_realization_submodularity(instance, distribution=None,
                                    max_nodes=5, tolerance=TOLERANCE):
    """Check g(·, φ) for monotonicity and submodularity on every φ.

    Returns
    -------
    list of (Realization, Violation)
    """
    _check_caps(instance, max_nodes)
    distribution = distribution_of(instance, distribution)
    table = engagement_table(distribution)
    n = instance.n
    return [(distribution[r],
             Violation(kind, instance.node_set(subset_positions(a, n)),
                       instance.node_set(subset_positions(b, n)),
                       instance.nodes[v], float(ga), float(gb)))
            for r, kind, a, b, v, ga, gb
            in set_function_violations(table, n, True, tolerance)]


def reachable_partials(instance, distribution=None):
    """Return every partial realization some selection order can produce,
    keyed by its canonical key."""
    distribution = distribution_of(instance, distribution)
    start = PartialRealization.empty(instance)
    found = {start.key: start}
    pending = [start]
    while pending:
        partial = pending.pop()
        for e in instance.nodes:
            if e in partial.dom:
                continue
            for _, child in outcomes(distribution, partial, e):
                if child.key not in found:
                    found[child.key] = child
                    pending.append(child)
    return found


def check_adaptive_submodularity(instance, z, distribution=None,
                                 max_nodes=4, max_edges=4,
                                 tolerance=TOLERANCE):
    """Check adaptive monotonicity and submodularity of h(·, ·, z).

    Every pair ψ ⊆ ψ′ of reachable partial realizations and every
    e ∉ dom(ψ′) is compared with exact conditional marginals.

    Returns
    -------
    list of Violation
        Negative Δ(e | ψ) is reported with kind 'monotone' (ψ as both
        bounds); Δ(e | ψ) < Δ(e | ψ′) - tolerance with kind 'submodular'.
    """
    _check_caps(instance, max_nodes, max_edges)
    distribution = distribution_of(instance, distribution)
    marginals = ExactMarginals(instance, distribution)
    found = reachable_partials(instance, distribution)
    partials = [found[k] for k in sorted(found)]
    violations = []
    for partial in partials:
        for e in instance.nodes:
            if e in partial.dom:
                continue
            delta = marginals.marginal(partial, e, z)
            if delta < -tolerance:
                violations.append(Violation('monotone', partial, partial, e,
                                            delta, delta))
    for lower in partials:
        for upper in partials:
            if lower is upper or not lower.is_subrealization_of(upper):
                continue
            for e in instance.nodes:
                if e in upper.dom:
                    continue
                lower_gain = marginals.marginal(lower, e, z)
                upper_gain = marginals.marginal(upper, e, z)
                if lower_gain < upper_gain - tolerance:
                    violations.append(Violation('submodular', lower, upper,
                                                e, lower_gain, upper_gain))
    logger.debug("Adaptive submodularity at z=%r: %d partial realizations, "
                 "%d violations" % (z, len(partials), len(violations)))
    return violations


def _min_truncation_preconditions(c1, c2, c3, c4):
    return (c1 >= c2) & (c3 >= c4) & (c1 - c2 >= c3 - c4) & (c2 <= c4)


def min_truncation_holds(c1, c2, c3, c4, x, tolerance=TOLERANCE):
    """Vectorized test of min{c1,x} - min{c2,x} >= min{c3,x} - min{c4,x}."""
    lhs = np.minimum(c1, x) - np.minimum(c2, x)
    rhs = np.minimum(c3, x) - np.minimum(c4, x)
    return lhs >= rhs - tolerance


def check_min_truncation(c1, c2, c3, c4, x):
    """Return whether min{c1,x} - min{c2,x} >= min{c3,x} - min{c4,x}.

    Raises
    ------
    PreconditionError
        Unless c1 >= c2, c3 >= c4, c1 - c2 >= c3 - c4 and c2 <= c4.
    """
    if not _min_truncation_preconditions(c1, c2, c3, c4):
        raise PreconditionError("Constants (%r, %r, %r, %r) violate the "
                                "preconditions" % (c1, c2, c3, c4))
    return bool(min_truncation_holds(c1, c2, c3, c4, x))
