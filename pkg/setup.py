#!/usr/bin/env python
#-----------------------------------------------------------------------------
# Copyright (c) 2021, ICRevenue Development Team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING, distributed with this software.
#-----------------------------------------------------------------------------

from setuptools import setup, find_packages

import os, sys

# pull in some definitions from the package's __init__.py file
sys.path.insert(0, os.path.join('src', ))
import icrevenue
import icrevenue.requires

setup (name =  icrevenue.__package_name__,        # ICRevenue
       version=icrevenue.__version__,
       license = icrevenue.__license__,
       description = icrevenue.__description__,
       long_description = icrevenue.__long_description__,
       author=icrevenue.__author_name__,
       author_email=icrevenue.__author_email__,
       url=icrevenue.__url__,
       download_url=icrevenue.__download_url__,
       platforms='any',
       python_requires='>=3.6',
       install_requires = icrevenue.requires.pkg_requirements,
       extras_require = icrevenue.requires.extra_requirements,
       package_dir = {'': 'src'},
       packages = find_packages('src'),
       include_package_data = True,
       package_data = {
                       'icrevenue': [
                           'examples/*.*',
                           'examples/*/*.*',
                       ],
                   },
       entry_points={
            # create & install scripts in <python>/bin
            'console_scripts': ['icrevenue = icrevenue.cli:main',],
       },
       classifiers= ['Development Status :: 3 - Alpha',
                     'Intended Audience :: Science/Research',
                     'License :: OSI Approved :: BSD License',
                     'Programming Language :: Python',
                     'Programming Language :: Python :: 3',
                     'Programming Language :: Python :: 3.6',
                     'Programming Language :: Python :: 3.7',
                     'Programming Language :: Python :: 3.8',
                     'Topic :: Scientific/Engineering',
                     'Topic :: Scientific/Engineering :: Mathematics'],
      )
