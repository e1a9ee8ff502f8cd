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
Exceptions raised by the ICRevenue package.

Every error derives from `ICRevenueError`, so callers (and the command-line
interface) can catch the whole family at once.
"""


class ICRevenueError(Exception):
    """Base class of all ICRevenue errors."""
    pass


class InstanceError(ICRevenueError, ValueError):
    """An instance document or object violates the instance invariants.

    Parameters
    ----------
    message : str
        Description of the problem.
    line : int, optional
        1-based line number of the offending line in an instance file.
    field : str, optional
        Name of the offending field.
    """

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        context = []
        if line is not None:
            context.append('line %d' % line)
        if field is not None:
            context.append("field '%s'" % field)
        if context:
            message = '%s: %s' % (', '.join(context), message)
        super(InstanceError, self).__init__(message)


class UnknownNodeError(InstanceError):
    """A node identifier is not declared in the instance."""
    pass


class ProbabilityRangeError(InstanceError):
    """An edge probability lies outside [0, 1]."""
    pass


class InfeasibleEdgeCountError(InstanceError):
    """More edges were requested than the node count admits."""
    pass


class EstimationError(ICRevenueError, ValueError):
    """Invalid arguments to an estimator (sample count, truncation level,
    or a candidate already in the partial realization)."""
    pass


class PreconditionError(ICRevenueError, ValueError):
    """An operation was called outside its documented precondition."""
    pass


class CapExceededError(ICRevenueError):
    """An exact computation would exceed the configured enumeration cap."""
    pass


class UnknownPolicyError(ICRevenueError, ValueError):
    """The requested adaptive policy does not exist."""
    pass
