import os

import pytest

import icrevenue
import icrevenue.utils
from icrevenue.api.network import Instance, read_instance

INSTANCES = os.path.join(os.path.dirname(icrevenue.__file__), 'examples',
                         'instances')


@pytest.fixture(autouse=True)
def icrevenue_home(tmp_path, monkeypatch):
    """Keep settings and log files out of the user's home directory."""
    monkeypatch.setattr(icrevenue.utils, '_icrevenue_dir', str(tmp_path))
    return tmp_path


@pytest.fixture
def t1_path():
    return os.path.join(INSTANCES, 't1.txt')


@pytest.fixture
def star_path():
    return os.path.join(INSTANCES, 'star.txt')


@pytest.fixture
def t1(t1_path):
    """a->b (rho 1), b->c (rho 0.5), unit costs, B = 4."""
    return read_instance(t1_path)


@pytest.fixture
def star(star_path):
    """s->v1, v2, v3 (rho 1), c(s) = 2, c(v) = 1, B = 5."""
    return read_instance(star_path)


@pytest.fixture
def path():
    """a->b->c, both edges uncertain."""
    return Instance('abc', [('a', 'b', 0.5), ('b', 'c', 0.5)],
                    {'a': 1, 'b': 1, 'c': 1}, 4)


@pytest.fixture
def two_nodes():
    """u->v (rho 0.5), c(u) = c(v) = 1, B = 3."""
    return Instance(['u', 'v'], [('u', 'v', 0.5)], {'u': 1, 'v': 1}, 3)


@pytest.fixture
def single():
    """A lone user v with c(v) = 1 and B = 2."""
    return Instance(['v'], [], {'v': 1}, 2)
