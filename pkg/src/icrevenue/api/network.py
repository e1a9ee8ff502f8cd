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
Problem instances: a directed social graph with influence probabilities, seed
incentives, the campaign budget and the cost per engagement.

Instances are read from and written to a line-oriented text format::

    # comment
    ic <n> <m> <B> <cpe>
    node <id> <cost>
    ...
    edge <src> <dst> <rho>
    ...

Node identifiers are strings, ordered lexicographically; this order is used
for every tie-break in the package. Edges are kept sorted by (source, target)
so that a realization can be stored as a boolean vector over a fixed edge
order.
"""
import logging

import networkx as nx
import numpy as np

from ..errors import (InstanceError, UnknownNodeError, ProbabilityRangeError,
                      InfeasibleEdgeCountError)

logger = logging.getLogger(__name__)


def _frozen(array):
    array.setflags(write=False)
    return array


class Instance(object):
    """A budgeted revenue-maximization instance over an IC network.

    Parameters
    ----------
    nodes : iterable of str
        Node identifiers. They are stored in lexicographic order.
    edges : iterable of (str, str, float)
        Directed edges (source, target, probability).
    costs : dict
        Incentive c(v) >= 0 of every node.
    budget : float
        The campaign budget B > 0.
    cpe : float, optional
        Cost per engagement, used only to rescale reported revenue.

    Attributes
    ----------
    nodes : tuple of str
        Node identifiers in their stable order.
    costs : ndarray
        Node costs, indexed by node position.
    sources, targets : ndarray
        Node positions of the edge endpoints, in edge order.
    probabilities : ndarray
        Edge probabilities, in edge order.
    """

    def __init__(self, nodes, edges, costs, budget, cpe=1.0):
        nodes = [str(v) for v in nodes]
        if not nodes:
            raise InstanceError("At least one node is required", field='node')
        for v in nodes:
            if v.split() != [v] or '#' in v:
                raise InstanceError("Invalid node identifier %r: it must be "
                                    "non-empty, without whitespace or '#'"
                                    % v, field='node')
        if len(set(nodes)) != len(nodes):
            raise InstanceError("Duplicate node identifier", field='node')
        self.nodes = tuple(sorted(nodes))
        self.index = dict((v, i) for i, v in enumerate(self.nodes))

        budget = float(budget)
        if not budget > 0:
            raise InstanceError("Budget must be positive, got %r" % budget,
                                field='budget')
        self.budget = budget
        cpe = float(cpe)
        if not cpe >= 0:
            raise InstanceError("Cost per engagement must be non-negative",
                                field='cpe')
        self.cpe = cpe

        cost_array = np.zeros(len(self.nodes), dtype=np.float64)
        for v, c in dict(costs).items():
            if str(v) not in self.index:
                raise UnknownNodeError("Cost given for unknown node '%s'" % v,
                                       field='cost')
            c = float(c)
            if not c >= 0:
                raise InstanceError("Cost of node '%s' is negative" % v,
                                    field='cost')
            cost_array[self.index[str(v)]] = c
        missing = set(self.nodes) - set(str(v) for v in dict(costs))
        if missing:
            raise InstanceError("No cost given for node(s) %s"
                                % ', '.join(sorted(missing)), field='cost')
        self.costs = _frozen(cost_array)

        checked = {}
        for source, target, rho in edges:
            source, target, rho = str(source), str(target), float(rho)
            for v in (source, target):
                if v not in self.index:
                    raise UnknownNodeError(
                        "Edge %s->%s references unknown node '%s'"
                        % (source, target, v), field='edge')
            if source == target:
                raise InstanceError("Self-loop on node '%s'" % source,
                                    field='edge')
            if (source, target) in checked:
                raise InstanceError("Duplicate edge %s->%s" % (source, target),
                                    field='edge')
            if not 0.0 <= rho <= 1.0:
                raise ProbabilityRangeError(
                    "Probability %r of edge %s->%s is outside [0, 1]"
                    % (rho, source, target), field='rho')
            checked[(source, target)] = rho
        ordered = sorted(checked)
        self.edges = tuple((s, t, checked[(s, t)]) for s, t in ordered)
        self.sources = _frozen(np.array([self.index[s] for s, _ in ordered],
                                        dtype=np.intp))
        self.targets = _frozen(np.array([self.index[t] for _, t in ordered],
                                        dtype=np.intp))
        self.probabilities = _frozen(np.array([checked[e] for e in ordered],
                                              dtype=np.float64))
        self.edge_index = dict((e, i) for i, e in enumerate(ordered))

    def __repr__(self):
        return 'Instance(n=%d, m=%d, B=%r, cpe=%r)' % (self.n, self.m,
                                                     self.budget, self.cpe)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.nodes == other.nodes and self.edges == other.edges and
                np.array_equal(self.costs, other.costs) and
                self.budget == other.budget and self.cpe == other.cpe)

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash((self.nodes, self.edges, tuple(self.costs), self.budget,
                     self.cpe))

    @property
    def n(self):
        """Number of nodes."""
        return len(self.nodes)

    @property
    def m(self):
        """Number of edges."""
        return len(self.edges)

    @property
    def is_deterministic(self):
        """True if every edge probability is 0 or 1."""
        return bool(np.all((self.probabilities == 0.0) |
                           (self.probabilities == 1.0)))

    def positions(self, seeds):
        """Return the sorted node positions of a node set.

        Repeated nodes count once.

        Raises
        ------
        UnknownNodeError
            If a node is not declared in the instance.
        """
        try:
            return np.array(sorted(set(self.index[str(v)] for v in seeds)),
                            dtype=np.intp)
        except KeyError as error:
            raise UnknownNodeError("Unknown node %s" % error, field='seeds')

    def node_set(self, positions):
        """Return the frozenset of node identifiers at the given positions."""
        return frozenset(self.nodes[i] for i in positions)

    def cost(self, seeds):
        """Return c(S), the total incentive of a node set."""
        positions = self.positions(seeds)
        if positions.size == 0:
            return 0.0
        return float(np.sum(self.costs[positions]))

    def node_cost(self, node):
        return float(self.costs[self.positions([node])[0]])

    def users_within_cost(self, x):
        return users_within_cost(self, x)

    def revenue(self, value):
        """Rescale a normalized revenue value by the cost per engagement."""
        return value * self.cpe

    def with_probabilities(self, probabilities):
        """Return a copy of the instance with replaced edge probabilities.

        Parameters
        ----------
        probabilities : sequence of float
            New probabilities, in edge order.
        """
        probabilities = list(probabilities)
        if len(probabilities) != self.m:
            raise InstanceError("Expected %d probabilities, got %d"
                                % (self.m, len(probabilities)), field='rho')
        edges = [(s, t, p) for (s, t, _), p in zip(self.edges, probabilities)]
        return Instance(self.nodes, edges, self.cost_map(), self.budget,
                        self.cpe)

    def cost_map(self):
        return dict(zip(self.nodes, (float(c) for c in self.costs)))

    def to_networkx(self):
        """Return the instance as a `networkx.DiGraph`.

        Nodes carry a `cost` attribute and edges a `rho` attribute.
        """
        graph = nx.DiGraph(budget=self.budget, cpe=self.cpe)
        for v, c in zip(self.nodes, self.costs):
            graph.add_node(v, cost=float(c))
        for s, t, rho in self.edges:
            graph.add_edge(s, t, rho=rho)
        return graph


def users_within_cost(instance, x):
    """Return 𝒱(x), the set of users whose cost is no larger than `x`."""
    return frozenset(v for v, c in zip(instance.nodes, instance.costs)
                     if c <= x)


def _parse_number(token, line, field, kind=float):
    try:
        return kind(token)
    except ValueError:
        raise InstanceError("Invalid number '%s'" % token, line=line,
                            field=field)


def load_instance(source):
    """Parse an instance document.

    Parameters
    ----------
    source : str
        The text of an instance file.

    Returns
    -------
    Instance
        The validated instance.

    Raises
    ------
    InstanceError
        On a parse failure or an invariant violation, with the line number
        of the offending line where one exists.
    """
    header = None
    nodes, costs, edges = [], {}, []
    for number, text in enumerate(source.splitlines(), 1):
        text = text.split('#', 1)[0].strip()
        if not text:
            continue
        tokens = text.split()
        keyword = tokens[0]
        if header is None:
            if keyword != 'ic' or len(tokens) != 5:
                raise InstanceError("Expected header 'ic <n> <m> <B> <cpe>'",
                                    line=number, field='header')
            header = (_parse_number(tokens[1], number, 'n', int),
                      _parse_number(tokens[2], number, 'm', int),
                      _parse_number(tokens[3], number, 'budget'),
                      _parse_number(tokens[4], number, 'cpe'),
                      number)
            if not header[0] >= 1:
                raise InstanceError("At least one node is required",
                                    line=number, field='n')
            if not header[2] > 0:
                raise InstanceError("Budget must be positive", line=number,
                                    field='budget')
            if not header[3] >= 0:
                raise InstanceError("Cost per engagement must be "
                                    "non-negative", line=number, field='cpe')
        elif keyword == 'node':
            if len(tokens) != 3:
                raise InstanceError("Expected 'node <id> <cost>'",
                                    line=number, field='node')
            node = tokens[1]
            if node in costs:
                raise InstanceError("Duplicate node '%s'" % node, line=number,
                                    field='node')
            nodes.append(node)
            costs[node] = _parse_number(tokens[2], number, 'cost')
            if not costs[node] >= 0:
                raise InstanceError("Cost of node '%s' is negative" % node,
                                    line=number, field='cost')
        elif keyword == 'edge':
            if len(tokens) != 4:
                raise InstanceError("Expected 'edge <src> <dst> <rho>'",
                                    line=number, field='edge')
            source, target = tokens[1], tokens[2]
            rho = _parse_number(tokens[3], number, 'rho')
            if not 0.0 <= rho <= 1.0:
                raise ProbabilityRangeError(
                    "Probability %s of edge %s->%s is outside [0, 1]"
                    % (tokens[3], source, target), line=number, field='rho')
            edges.append((source, target, rho, number))
        else:
            raise InstanceError("Unknown record '%s'" % keyword, line=number)
    if header is None:
        raise InstanceError("Missing header 'ic <n> <m> <B> <cpe>'",
                            field='header')
    n, m, budget, cpe, header_line = header
    if len(nodes) != n:
        raise InstanceError("Header declares %d nodes, found %d"
                            % (n, len(nodes)), line=header_line, field='n')
    if len(edges) != m:
        raise InstanceError("Header declares %d edges, found %d"
                            % (m, len(edges)), line=header_line, field='m')
    seen = set()
    for source, target, rho, number in edges:
        for v in (source, target):
            if v not in costs:
                raise UnknownNodeError("Edge %s->%s references unknown node "
                                       "'%s'" % (source, target, v),
                                       line=number, field='edge')
        if source == target:
            raise InstanceError("Self-loop on node '%s'" % source,
                                line=number, field='edge')
        if (source, target) in seen:
            raise InstanceError("Duplicate edge %s->%s" % (source, target),
                                line=number, field='edge')
        seen.add((source, target))
    return Instance(nodes, [e[:3] for e in edges], costs, budget, cpe)


def read_instance(filename):
    """Read an instance file from disk."""
    with open(filename) as f:
        instance = load_instance(f.read())
    logger.info("Instance '%s' loaded: n=%d, m=%d, B=%r"
                % (filename, instance.n, instance.m, instance.budget))
    return instance


def serialize_instance(instance):
    """Return the instance file text; `load_instance` inverts it exactly."""
    lines = ['ic %d %d %r %r' % (instance.n, instance.m, instance.budget,
                                 instance.cpe)]
    for v, c in zip(instance.nodes, instance.costs):
        lines.append('node %s %r' % (v, float(c)))
    for s, t, rho in instance.edges:
        lines.append('edge %s %s %r' % (s, t, rho))
    return '\n'.join(lines) + '\n'


def write_instance(instance, filename):
    with open(filename, 'w') as f:
        f.write(serialize_instance(instance))


def _check_range(interval, name, lower=None, upper=None):
    lo, hi = (float(x) for x in interval)
    if lo > hi:
        raise InstanceError("Empty %s range [%r, %r]" % (name, lo, hi),
                            field=name)
    if (lower is not None and lo < lower) or (upper is not None and
                                              hi > upper):
        raise InstanceError("%s range [%r, %r] outside [%r, %r]"
                            % (name, lo, hi, lower, upper), field=name)
    return lo, hi


def generate_random_instance(n, m, prob_range, cost_range, budget, rng_seed,
                             cpe=1.0):
    """Generate a random instance, deterministically from `rng_seed`.

    The `m` directed edges are drawn uniformly among the n(n-1) non-loop
    pairs; probabilities and costs are drawn uniformly from their ranges.

    Parameters
    ----------
    n, m : int
        Numbers of nodes and edges.
    prob_range, cost_range : (float, float)
        Closed intervals for the edge probabilities and node costs.
    budget : float
        The budget B.
    rng_seed : int
        Seed of every random draw.

    Raises
    ------
    InfeasibleEdgeCountError
        If m > n(n-1).
    InstanceError
        If a range is empty or outside its domain.
    """
    n, m = int(n), int(m)
    if n < 1:
        raise InstanceError("At least one node is required", field='n')
    if m < 0 or m > n * (n - 1):
        raise InfeasibleEdgeCountError(
            "%d nodes admit at most %d directed edges, %d requested"
            % (n, n * (n - 1), m), field='m')
    p_lo, p_hi = _check_range(prob_range, 'prob', 0.0, 1.0)
    c_lo, c_hi = _check_range(cost_range, 'cost', 0.0)

    graph = nx.gnm_random_graph(n, m, seed=rng_seed, directed=True)
    width = len(str(max(n - 1, 0)))
    names = ['v' + str(i).zfill(width) for i in range(n)]
    pairs = sorted((names[u], names[v]) for u, v in graph.edges())

    rng = np.random.default_rng(rng_seed)
    probabilities = rng.uniform(p_lo, p_hi, size=m)
    costs = rng.uniform(c_lo, c_hi, size=n)
    edges = [(s, t, float(p)) for (s, t), p in zip(pairs, probabilities)]
    return Instance(names, edges, dict(zip(names, (float(c) for c in costs))),
                    budget, cpe)
