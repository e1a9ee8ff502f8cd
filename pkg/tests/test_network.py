import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icrevenue.api.network import (Instance, generate_random_instance,
                                   load_instance, read_instance,
                                   serialize_instance, users_within_cost,
                                   write_instance)
from icrevenue.api.suites import random_instance
from icrevenue.errors import (InfeasibleEdgeCountError, InstanceError,
                              ProbabilityRangeError, UnknownNodeError)

TWO_NODES = """\
# two users
ic 2 1 3 1
node u 1
node v 1
edge u v 0.5
"""


def test_load_instance():
    instance = load_instance(TWO_NODES)
    assert instance.n == 2
    assert instance.m == 1
    assert instance.budget == 3.0
    assert instance.edges == (('u', 'v', 0.5),)
    assert instance.node_cost('u') == 1.0


def test_probability_out_of_range():
    with pytest.raises(ProbabilityRangeError) as error:
        load_instance(TWO_NODES.replace('0.5', '1.2'))
    assert error.value.line == 5
    assert error.value.field == 'rho'


def test_undeclared_node():
    with pytest.raises(UnknownNodeError) as error:
        load_instance(TWO_NODES.replace('edge u v', 'edge u w'))
    assert error.value.line == 5


@pytest.mark.parametrize('text, line', [
    ('ic 2 1 3\nnode u 1\nnode v 1\nedge u v 0.5\n', 1),
    ('ic 2 2 3 1\nnode u 1\nnode v 1\nedge u v 0.5\n', 1),
    ('ic 2 1 3 1\nnode u 1\nnode u 1\nedge u v 0.5\n', 3),
    ('ic 2 1 3 1\nnode u 1\nnode v -1\nedge u v 0.5\n', 3),
    ('ic 2 1 3 1\nnode u 1\nnode v 1\nedge u u 0.5\n', 4),
    ('ic 2 1 0 1\nnode u 1\nnode v 1\nedge u v 0.5\n', 1),
    ('ic 2 1 3 1\nnode u 1\nnode v one\nedge u v 0.5\n', 3),
    ('ic 2 1 3 1\nnode u 1\nnode v 1\nlink u v 0.5\n', 4),
])
def test_invalid_documents(text, line):
    with pytest.raises(InstanceError) as error:
        load_instance(text)
    assert error.value.line == line
    assert 'line %d' % line in str(error.value)


def test_duplicate_edge():
    with pytest.raises(InstanceError):
        Instance('uv', [('u', 'v', 0.5), ('u', 'v', 0.2)], {'u': 1, 'v': 1},
                 3)


def test_missing_header():
    with pytest.raises(InstanceError):
        load_instance('# nothing here\n')


@pytest.mark.parametrize('node', ['a b', 'x#y', '', 'tab\tbed'])
def test_invalid_node_identifier(node):
    with pytest.raises(InstanceError) as error:
        Instance([node, 'w'], [(node, 'w', 0.5)], {node: 1, 'w': 1}, 3)
    assert error.value.field == 'node'


def test_instance_needs_a_node():
    with pytest.raises(InstanceError) as error:
        Instance([], [], {}, 3)
    assert error.value.field == 'node'
    with pytest.raises(InstanceError) as error:
        load_instance('ic 0 0 3 1\n')
    assert error.value.line == 1
    assert error.value.field == 'n'


def test_node_order_is_lexicographic():
    instance = Instance(['c', 'a', 'b'], [('c', 'a', 1.0), ('a', 'b', 0.5)],
                        {'a': 1, 'b': 2, 'c': 3}, 4)
    assert instance.nodes == ('a', 'b', 'c')
    assert instance.edges == (('a', 'b', 0.5), ('c', 'a', 1.0))
    assert list(instance.costs) == [1.0, 2.0, 3.0]


def test_generate_is_deterministic():
    first = generate_random_instance(3, 2, (0, 1), (1, 2), 4, 7)
    second = generate_random_instance(3, 2, (0, 1), (1, 2), 4, 7)
    assert first == second
    assert serialize_instance(first) == serialize_instance(second)


def test_generate_infeasible_edge_count():
    with pytest.raises(InfeasibleEdgeCountError):
        generate_random_instance(2, 3, (0, 1), (1, 2), 4, 7)


def test_generate_ranges():
    instance = generate_random_instance(5, 6, (0, 1), (1, 3), 10, 1)
    assert instance.n == 5
    assert instance.m == 6
    assert np.all((instance.costs >= 1) & (instance.costs <= 3))
    assert np.all((instance.probabilities >= 0) &
                  (instance.probabilities <= 1))
    assert instance.budget == 10.0


def test_generate_empty_range():
    with pytest.raises(InstanceError):
        generate_random_instance(3, 2, (0.8, 0.2), (1, 2), 4, 7)
    with pytest.raises(InstanceError):
        generate_random_instance(3, 2, (0, 1.5), (1, 2), 4, 7)


def test_users_within_cost():
    instance = Instance('abc', [], {'a': 1, 'b': 2, 'c': 3}, 5)
    assert users_within_cost(instance, 2) == {'a', 'b'}
    assert users_within_cost(instance, 3) == {'a', 'b', 'c'}
    assert users_within_cost(instance, 0) == frozenset()
    assert instance.users_within_cost(1) == {'a'}


def test_cost_and_revenue(t1):
    assert t1.cost([]) == 0.0
    assert t1.cost(['a', 'c']) == 2.0
    assert t1.cost(['a', 'a']) == 1.0
    assert list(t1.positions(['c', 'a', 'c'])) == [0, 2]
    with pytest.raises(UnknownNodeError):
        t1.cost(['z'])
    scaled = Instance(t1.nodes, t1.edges, t1.cost_map(), t1.budget, cpe=2.5)
    assert scaled.revenue(2.0) == 5.0


def test_with_probabilities(t1):
    fixed = t1.with_probabilities([1.0, 0.0])
    assert fixed.is_deterministic
    assert not t1.is_deterministic
    assert fixed.nodes == t1.nodes
    with pytest.raises(InstanceError):
        t1.with_probabilities([1.0])


def test_to_networkx(star):
    graph = star.to_networkx()
    assert isinstance(graph, nx.DiGraph)
    assert graph.nodes['s']['cost'] == 2.0
    assert graph.edges['s', 'v1']['rho'] == 1.0
    assert graph.graph['budget'] == 5.0


def test_read_and_write(tmp_path, star):
    filename = str(tmp_path / 'star.txt')
    write_instance(star, filename)
    assert read_instance(filename) == star


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1))
def test_serialize_inverts_load(seed):
    instance = random_instance(np.random.default_rng(seed), 6, 12)
    assert load_instance(serialize_instance(instance)) == instance


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1),
       x=st.floats(0, 12), dx=st.floats(0, 12))
def test_users_within_cost_is_monotone(seed, x, dx):
    instance = random_instance(np.random.default_rng(seed), 6, 6)
    assert users_within_cost(instance, x) <= users_within_cost(instance,
                                                               x + dx)
