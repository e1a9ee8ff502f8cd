#!/usr/bin/env python
# -*- coding: utf-8 -*-

#-----------------------------------------------------------------------------
# Copyright (c) 2021, ICRevenue Development Team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING, distributed with this software.
#-----------------------------------------------------------------------------

__package_name__ = u'ICRevenue'
__version__ = u'0.1.0'

__documentation_author__ = u'ICRevenue Development Team'
__documentation_copyright__ = u'2021, ICRevenue Development Team'

__license__ = u'BSD'
__author_name__ = u'ICRevenue Development Team'
__author_email__ = u'icrevenue-dev@users.noreply.github.com'
__author__ = __author_name__ + u' <' + __author_email__ + u'>'

__url__          = u'https://github.com/icrevenue/icrevenue/'
__download_url__ = u'https://github.com/icrevenue/icrevenue/'

__description__ = (u'ICRevenue: budgeted revenue-maximizing seed selection '
                   u'under Independent Cascade')
__long_description__ = \
u"""
ICRevenue selects seed users for an incentivized social advertising campaign.
The platform pays each seed an incentive out of the advertiser's budget and
collects a fee for every engagement the cascade produces, so the revenue of a
seed set S is min{g(S), B - c(S)}: non-monotone and possibly negative.

The package provides non-adaptive selectors (a two-phase benefit-cost greedy
and an enhanced selector for deterministic propagation), adaptive greedy
policies that observe each cascade before picking the next seed, Monte-Carlo
estimators with common random numbers, and exact brute-force oracles that
verify the approximation guarantees on small instances.
"""
