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
Settings, logging and small helpers shared by the API and the command line.
"""
import logging
import logging.handlers
import os
import re
import sys
import tempfile

from configparser import ConfigParser
from datetime import datetime

import numpy as np

_icrevenue_dir = None
_handlers = []

default_settings = {
    'samples': '10000',
    'episodes': '10000',
    'exact_cap': '4096',
    'closure_cells': '50000000',
    'adaptive_nodes': '4',
    'adaptive_edges': '4',
    'subset_nodes': '20',
}

_levels = {'CRITICAL': logging.CRITICAL, 'ERROR': logging.ERROR,
           'WARNING': logging.WARNING, 'INFO': logging.INFO,
           'DEBUG': logging.DEBUG}


class ICConfigParser(ConfigParser, object):
    """A ConfigParser subclass that preserves the case of option names.

    The `defaults` section is always present and is filled with the package
    defaults for any option missing from the file.
    """

    def __init__(self, settings_file=None):
        super(ICConfigParser, self).__init__(allow_no_value=True)
        self.file = settings_file
        self._optcre = re.compile( #makes '=' the only valid key/value delimiter
            r"(?P<option>.*?)\s*(?:(?P<vi>=)\s*(?P<value>.*))?$", re.VERBOSE)
        if self.file is not None:
            super(ICConfigParser, self).read(self.file)
        if 'defaults' not in self.sections():
            self.add_section('defaults')
        for option, value in default_settings.items():
            if not self.has_option('defaults', option):
                self.set('defaults', option, value)

    def optionxform(self, optionstr):
        return optionstr

    def save(self):
        if self.file is None:
            return
        with open(self.file, 'w') as f:
            self.write(f)

    def default(self, option):
        """Return a numeric default, as an int when it is integral."""
        value = self.getfloat('defaults', option)
        if value.is_integer():
            return int(value)
        return value


def init_dir():
    """Return the ICRevenue home directory, creating it if necessary.

    The location is `~/.icrevenue` unless `ICREVENUE_DIR` is set. If the
    parent directory is not writable, a temporary directory is used.
    """
    global _icrevenue_dir
    if _icrevenue_dir is not None:
        return _icrevenue_dir
    icrevenue_dir = os.getenv('ICREVENUE_DIR')
    if icrevenue_dir is None:
        home_dir = os.path.abspath(os.path.expanduser('~'))
        icrevenue_dir = os.path.join(home_dir, '.icrevenue')
    if not os.path.exists(icrevenue_dir):
        parent = os.path.dirname(os.path.abspath(icrevenue_dir))
        if not os.access(parent, os.W_OK):
            icrevenue_dir = tempfile.mkdtemp()
        else:
            os.makedirs(icrevenue_dir)
    _icrevenue_dir = icrevenue_dir
    return icrevenue_dir


def init_settings():
    """Initialize access to the ICRevenue settings file."""
    settings_file = os.path.join(init_dir(), 'settings.ini')
    settings = ICConfigParser(settings_file)
    if not os.path.exists(settings_file):
        try:
            settings.save()
        except OSError:
            pass
    return settings


def init_log(echo=True):
    """Initialize the ICRevenue logger.

    Log records go to a rotating `icrevenue.log` in the home directory. The
    level is read from the `ICREVENUE_LOG` environment variable. If `echo`
    is True, warnings and errors are also written to stderr.
    """
    log_file = os.path.join(init_dir(), 'icrevenue.log')
    fmt = '%(asctime)s - %(levelname)s - %(message)s'
    formatter = logging.Formatter(fmt, None)
    while _handlers:
        handler = _handlers.pop()
        logging.root.removeHandler(handler)
        handler.close()
    try:
        handler = logging.handlers.RotatingFileHandler(log_file,
                                                       maxBytes=50000,
                                                       backupCount=5)
        handler.setFormatter(formatter)
        _handlers.append(handler)
    except OSError:
        pass
    if echo:
        console = logging.StreamHandler(sys.stderr)
        console.setLevel(logging.WARNING)
        console.setFormatter(logging.Formatter('%(message)s'))
        _handlers.append(console)
    for handler in _handlers:
        logging.root.addHandler(handler)
    level = os.getenv('ICREVENUE_LOG')
    if level is None or level.upper() not in _levels:
        level = 'INFO'
    else:
        level = level.upper()
    logging.root.setLevel(_levels[level])

    import networkx
    import scipy
    from . import __version__ as icrevenue_version
    logging.info('Log level is ' + level)
    logging.info('Python ' + sys.version.split()[0] + ': ' + sys.executable)
    logging.info('numpy v' + np.__version__)
    logging.info('scipy v' + scipy.__version__)
    logging.info('networkx v' + networkx.__version__)
    logging.info('ICRevenue v' + icrevenue_version)


def timestamp():
    """Return a timestamp in ISO format, to the second."""
    return datetime.now().replace(microsecond=0).isoformat()


def format_float(value):
    """Modified form of the 'g' format specifier."""
    return re.sub(r"e(-?)0*(\d+)", r"e\1\2",
                  ("%.12g" % value).replace("e+", "e"))
