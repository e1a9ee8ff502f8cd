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
Live-edge realizations of the Independent Cascade model.

A realization labels every edge of an instance Live or Blocked and is stored
as a boolean vector over the instance's edge order. Selecting seeds reveals
the labels of every out-edge of every engaged user; that observation is a
`PartialRealization`. Unrevealed edges are simply absent from it.

`RealizationSet` holds many realizations at once, with weights, and answers
engagement and consistency queries for all of them in a single numpy
operation. Monte-Carlo sample pools and exact enumerations are both built on
it.
"""
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from ..errors import PreconditionError

LIVE = 'Live'
BLOCKED = 'Blocked'


class Realization(object):
    """A full Live/Blocked labeling of the edges of an instance.

    Attributes
    ----------
    instance : Instance
        The instance whose edges are labeled.
    labels : ndarray of bool
        True for Live, in the instance's edge order.
    """

    def __init__(self, instance, labels):
        labels = np.array(labels, dtype=bool)
        if labels.shape != (instance.m,):
            raise PreconditionError("A realization needs one label per edge "
                                    "(%d), got %d" % (instance.m, labels.size))
        labels.setflags(write=False)
        self.instance = instance
        self.labels = labels

    def __eq__(self, other):
        if not isinstance(other, Realization):
            return NotImplemented
        return (self.instance is other.instance or
                self.instance == other.instance) and \
            np.array_equal(self.labels, other.labels)

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash((self.labels.size, np.packbits(self.labels).tobytes()))

    def __repr__(self):
        return 'Realization(%s)' % ''.join('1' if x else '0'
                                           for x in self.labels)

    def label(self, source, target):
        """Return 'Live' or 'Blocked' for the edge source->target."""
        i = self.instance.edge_index[(str(source), str(target))]
        return LIVE if self.labels[i] else BLOCKED


class PartialRealization(object):
    """Selected seeds together with the edge labels their cascades reveal.

    Parameters
    ----------
    instance : Instance
    dom : iterable of str
        The selected seeds, dom(ψ).
    observed : dict
        Revealed labels, mapping an edge index to True (Live) or False
        (Blocked). Edges not in the mapping are in the `?` state.
    """

    def __init__(self, instance, dom=(), observed=None):
        self.instance = instance
        self.dom = frozenset(str(v) for v in dom)
        self.positions = instance.positions(self.dom)
        observed = dict(observed or {})
        self.observed = dict((int(i), bool(x))
                             for i, x in sorted(observed.items()))
        mask = np.zeros(instance.m, dtype=bool)
        live = np.zeros(instance.m, dtype=bool)
        for i, x in self.observed.items():
            mask[i] = True
            live[i] = x
        mask.setflags(write=False)
        live.setflags(write=False)
        self.mask = mask
        self.live = live
        self.key = (tuple(sorted(self.dom)),
                    np.packbits(mask).tobytes(), np.packbits(live).tobytes())

    @classmethod
    def empty(cls, instance):
        return cls(instance)

    def __eq__(self, other):
        if not isinstance(other, PartialRealization):
            return NotImplemented
        return self.key == other.key

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash(self.key)

    def __len__(self):
        return len(self.dom)

    def __repr__(self):
        return 'PartialRealization(dom=%s, observed=%d edges)' % (
            sorted(self.dom), len(self.observed))

    def labels(self):
        """Return the revealed labels keyed by (source, target)."""
        edges = self.instance.edges
        return dict(((edges[i][0], edges[i][1]), LIVE if x else BLOCKED)
                    for i, x in self.observed.items())

    def engaged(self):
        """Return the positions of the users engaged under this observation.

        These are the seeds plus every node reached from them through the
        observed Live edges.
        """
        return _reachable(self.instance, self.live, self.positions)

    def is_valid(self):
        """Check the closure property: the observed edges are exactly the
        out-edges of the engaged users."""
        reached = np.zeros(self.instance.n, dtype=bool)
        reached[self.engaged()] = True
        return bool(np.array_equal(reached[self.instance.sources], self.mask))

    def is_subrealization_of(self, other):
        """Return True if ψ ⊆ ψ′: dom(ψ) ⊆ dom(ψ′) and the two agree on
        every label ψ reveals."""
        if not self.dom <= other.dom:
            return False
        if np.any(self.mask & ~other.mask):
            return False
        return bool(np.array_equal(self.live[self.mask],
                                   other.live[self.mask]))

    def extend(self, node, revealed):
        """Return ψ ∪ {(node, revealed labels)}."""
        observed = dict(self.observed)
        observed.update(revealed)
        return PartialRealization(self.instance, self.dom | {str(node)},
                                  observed)


def _reachable(instance, live, positions):
    """Return the sorted positions reachable from `positions` through the
    edges flagged in `live`, the seeds included.

    The seeds are joined to an extra source vertex so that a single
    breadth-first traversal covers the whole seed set.
    """
    positions = np.asarray(positions, dtype=np.intp)
    if positions.size == 0:
        return np.zeros(0, dtype=np.intp)
    n = instance.n
    rows = np.concatenate((instance.sources[live],
                           np.full(positions.size, n, dtype=np.intp)))
    cols = np.concatenate((instance.targets[live], positions))
    graph = csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)),
                       shape=(n + 1, n + 1))
    order = breadth_first_order(graph, n, directed=True,
                                return_predecessors=False)
    return np.sort(order[order != n])


def sample_realization(instance, rng):
    """Draw a realization: each edge is Live independently with probability ρ.

    Parameters
    ----------
    instance : Instance
    rng : numpy.random.Generator
    """
    return Realization(instance, rng.random(instance.m) <
                       instance.probabilities)


def engagements(instance, seeds, realization):
    """Return g(S, φ), the number of users reachable from S via Live edges,
    S included."""
    positions = instance.positions(seeds)
    return int(_reachable(instance, realization.labels, positions).size)


def observe(instance, seeds, realization):
    """Return the partial realization revealed by selecting `seeds`."""
    positions = instance.positions(seeds)
    reached = np.zeros(instance.n, dtype=bool)
    reached[_reachable(instance, realization.labels, positions)] = True
    revealed = np.flatnonzero(reached[instance.sources])
    return PartialRealization(instance, seeds,
                              dict((int(i), bool(realization.labels[i]))
                                   for i in revealed))


def is_consistent(realization, partial):
    """Return True if φ ~ ψ, that is, selecting dom(ψ) under φ reveals
    exactly the labels ψ records."""
    return observe(realization.instance, partial.dom, realization) == partial


def conditional_sample(instance, partial, rng):
    """Draw a realization from p(φ | Φ ~ ψ).

    Observed edges keep their labels; every other edge is Live independently
    with its probability. The full vector of uniforms is always drawn, so the
    stream advances by exactly m values per call.

    Raises
    ------
    PreconditionError
        If ψ violates the closure property.
    """
    if not partial.is_valid():
        raise PreconditionError("%r is not a valid partial realization"
                                % partial)
    labels = rng.random(instance.m) < instance.probabilities
    labels[partial.mask] = partial.live[partial.mask]
    return Realization(instance, labels)


def label_rows(labels, m):
    """Return labels as an (R, m) boolean array; a 1-d input is one row."""
    labels = np.array(labels, dtype=bool)
    if labels.ndim < 2:
        return labels.reshape(1, m)
    return labels.reshape(labels.shape[0], m)


def propagate(instance, labels, positions):
    """Return reached[r, v]: whether v is reachable from the seed positions
    in realization r, for every row of `labels` at once.

    The frontier is advanced one hop per iteration through a sparse
    edge-to-target incidence matrix until no row changes.
    """
    labels = label_rows(labels, instance.m)
    reached = np.zeros((labels.shape[0], instance.n), dtype=bool)
    reached[:, positions] = True
    if instance.m == 0 or labels.shape[0] == 0:
        return reached
    incidence = csr_matrix((np.ones(instance.m, dtype=np.float32),
                            (instance.targets, np.arange(instance.m))),
                           shape=(instance.n, instance.m))
    while True:
        active = (reached[:, instance.sources] & labels).astype(np.float32)
        hit = np.asarray(incidence.dot(active.T)).T > 0
        grown = reached | hit
        if np.array_equal(grown, reached):
            return reached
        reached = grown


def reachability_closure(instance, labels, chunk_cells=4000000):
    """Return reach[r, u, v]: whether v is reachable from u in realization r.

    The transitive closure is computed for all realizations at once by
    repeated squaring of the live adjacency matrices (identity included).

    Parameters
    ----------
    instance : Instance
    labels : ndarray of bool, shape (R, m)
    chunk_cells : int
        Approximate number of matrix cells processed per batch.
    """
    labels = np.asarray(labels, dtype=bool)
    rows, n = labels.shape[0], instance.n
    closure = np.zeros((rows, n, n), dtype=bool)
    step = max(1, chunk_cells // max(1, n * n))
    diagonal = np.arange(n)
    for start in range(0, rows, step):
        block = labels[start:start + step]
        dense = np.zeros((block.shape[0], n, n), dtype=np.float32)
        dense[:, diagonal, diagonal] = 1.0
        dense[:, instance.sources, instance.targets] = block
        hops = 1
        while hops < n - 1:
            dense = (np.matmul(dense, dense) > 0).astype(np.float32)
            hops *= 2
        closure[start:start + step] = dense > 0
    return closure


class RealizationSet(object):
    """A weighted collection of realizations of one instance.

    Parameters
    ----------
    instance : Instance
    labels : ndarray of bool, shape (R, m)
        One realization per row.
    weights : ndarray of float, shape (R,)
        Nonnegative weights summing to one.
    closure_cells : int, optional
        Largest R·n·n for which the dense reachability table is built.
        Larger sets propagate the seed frontier through all rows at once.
    uniform : bool, optional
        True when every weight is 1/R; means are then plain sums over R.
    """

    def __init__(self, instance, labels, weights, closure_cells=50000000,
                 uniform=False):
        labels = label_rows(labels, instance.m)
        weights = np.array(weights, dtype=np.float64)
        labels.setflags(write=False)
        weights.setflags(write=False)
        self.instance = instance
        self.labels = labels
        self.weights = weights
        self.closure_cells = closure_cells
        self.uniform = uniform
        self._closure = None

    def __len__(self):
        return self.labels.shape[0]

    def __iter__(self):
        for row in self.labels:
            yield Realization(self.instance, row)

    def __getitem__(self, i):
        return Realization(self.instance, self.labels[i])

    @property
    def closure(self):
        """The dense reachability table, or None if it would be too large."""
        n = self.instance.n
        if self._closure is None and len(self) * n * n <= self.closure_cells:
            self._closure = reachability_closure(self.instance, self.labels)
            self._closure.setflags(write=False)
        return self._closure

    def engaged(self, positions, rows=None):
        """Return a (R, n) boolean array of the users engaged by a seed set.

        Parameters
        ----------
        positions : ndarray of int
            Node positions of the seed set.
        rows : ndarray of int, optional
            Restrict the computation to these realizations.
        """
        positions = np.asarray(positions, dtype=np.intp)
        count = len(self) if rows is None else len(rows)
        if positions.size == 0:
            return np.zeros((count, self.instance.n), dtype=bool)
        closure = self.closure
        if closure is not None:
            if rows is None and positions.size == 1:
                return closure[:, positions[0], :]
            if rows is None:
                return closure[:, positions, :].any(axis=1)
            return closure[np.ix_(rows, positions)].any(axis=1)
        labels = self.labels if rows is None else self.labels[rows]
        return propagate(self.instance, labels, positions)

    def engagements(self, positions, rows=None):
        """Return g(S, φ) for every realization, as an int array."""
        return self.engaged(positions, rows).sum(axis=1)

    def observations(self, positions, rows=None):
        """Return (mask, live) arrays of shape (R, m): which edges selecting
        the seed set reveals, and which of those are Live."""
        if rows is None:
            rows = np.arange(len(self))
        mask = self.engaged(positions, rows)[:, self.instance.sources]
        return mask, self.labels[rows] & mask

    def consistent_with(self, partial):
        """Return a boolean array: which realizations are consistent with ψ."""
        if len(partial.dom) == 0:
            return np.ones(len(self), dtype=bool)
        mask, live = self.observations(partial.positions)
        same_mask = np.all(mask == partial.mask, axis=1)
        same_live = np.all(live == partial.live, axis=1)
        return same_mask & same_live
