# -*- coding: utf-8 -*-

'''package requirements are checked at runtime and installation time'''

#-----------------------------------------------------------------------------
# Copyright (c) 2021, ICRevenue Development Team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING, distributed with this software.
#-----------------------------------------------------------------------------

pkg_requirements = [
    'numpy>=1.17.0',
    'scipy',
    'networkx>=2.4',
]
extra_requirements = {
    'test': ['pytest', 'hypothesis'],
    'doc': ['sphinx'],
}
