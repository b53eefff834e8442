import random
from itertools import combinations

import pytest

from groupbuy.exceptions import MalformedNetwork
from groupbuy.schemas import FlowEdge, FlowNetwork
from groupbuy.services import flow


def _random_network(seed: int) -> FlowNetwork:
    rng = random.Random(seed)
    n = rng.randint(2, 12)
    edges = []
    for i in range(rng.randint(1, 3 * n)):
        tail, head = rng.sample(range(n), 2)
        edges.append(FlowEdge(tail, head, rng.randint(0, 10), rng.randint(0, 5), i))
    return FlowNetwork(node_count=n, source=0, sink=n - 1, edges=tuple(edges))


def _min_cut_capacity(net: FlowNetwork) -> int:
    inner = [node for node in range(net.node_count) if node not in (net.source, net.sink)]
    best = None
    for size in range(len(inner) + 1):
        for chosen in combinations(inner, size):
            side = {net.source, *chosen}
            capacity = sum(edge.capacity for edge in net.edges if edge.tail in side and edge.head not in side)
            best = capacity if best is None else min(best, capacity)
    return best


def _cost(net: FlowNetwork, edge_flows: tuple[int, ...]) -> int:
    return sum(edge.cost * amount for edge, amount in zip(net.edges, edge_flows))


def _conserves(net: FlowNetwork, edge_flows: tuple[int, ...]) -> bool:
    balance = [0] * net.node_count
    for edge, amount in zip(net.edges, edge_flows):
        if not 0 <= amount <= edge.capacity:
            return False
        balance[edge.tail] -= amount
        balance[edge.head] += amount
    return all(balance[node] == 0 for node in range(net.node_count) if node not in (net.source, net.sink))


def test_max_flow_small():
    net = FlowNetwork(
        node_count=4,
        source=0,
        sink=3,
        edges=(
            FlowEdge(0, 1, 3),
            FlowEdge(0, 2, 2),
            FlowEdge(1, 2, 1),
            FlowEdge(1, 3, 2),
            FlowEdge(2, 3, 3),
        ),
    )
    result = flow.max_flow(net)
    assert result.value == 5
    assert _conserves(net, result.edge_flows)


def test_min_cost_prefers_cheap_path():
    net = FlowNetwork(
        node_count=4,
        source=0,
        sink=3,
        edges=(
            FlowEdge(0, 1, 1, 0),
            FlowEdge(0, 2, 1, 0),
            FlowEdge(1, 3, 1, 5),
            FlowEdge(2, 3, 1, 1),
            FlowEdge(1, 2, 1, 0),
        ),
    )
    result = flow.min_cost_max_flow(net)
    assert result.value == 2
    assert result.cost == 6


def test_min_cost_with_negative_costs():
    # Two buyers, two slots; the cheapest assignment crosses over for a total cost of -13
    net = FlowNetwork(
        node_count=6,
        source=0,
        sink=5,
        edges=(
            FlowEdge(0, 1, 1),
            FlowEdge(0, 2, 1),
            FlowEdge(1, 3, 1, -7),
            FlowEdge(1, 4, 1, -5),
            FlowEdge(2, 3, 1, -8),
            FlowEdge(2, 4, 1, -5),
            FlowEdge(3, 5, 1),
            FlowEdge(4, 5, 1),
        ),
    )
    result = flow.min_cost_max_flow(net)
    assert result.value == 2
    assert result.cost == -13


def test_empty_network():
    net = FlowNetwork(node_count=2, source=0, sink=1, edges=())
    assert flow.max_flow(net).value == 0
    assert flow.min_cost_max_flow(net).edge_flows == ()


@pytest.mark.parametrize(
    "net",
    [
        FlowNetwork(node_count=2, source=0, sink=0, edges=()),
        FlowNetwork(node_count=2, source=0, sink=1, edges=(FlowEdge(0, 2, 1),)),
        FlowNetwork(node_count=2, source=0, sink=1, edges=(FlowEdge(1, 1, 1),)),
        FlowNetwork(node_count=2, source=0, sink=1, edges=(FlowEdge(0, 1, -1),)),
    ],
)
def test_malformed_network(net):
    with pytest.raises(MalformedNetwork):
        flow.max_flow(net)


def test_negative_cycle_is_rejected():
    net = FlowNetwork(
        node_count=4,
        source=0,
        sink=3,
        edges=(FlowEdge(0, 1, 1), FlowEdge(1, 2, 1, -2), FlowEdge(2, 1, 1, -2), FlowEdge(2, 3, 1)),
    )
    with pytest.raises(MalformedNetwork):
        flow.min_cost_max_flow(net)


@pytest.mark.parametrize("seed", range(50))
def test_max_flow_equals_min_cut(seed):
    net = _random_network(seed)
    result = flow.max_flow(net)
    assert _conserves(net, result.edge_flows)
    assert result.value == _min_cut_capacity(net)

    side = flow.min_cut(net, result)
    assert net.sink not in side
    assert sum(edge.capacity for edge in net.edges if edge.tail in side and edge.head not in side) == result.value


@pytest.mark.parametrize("seed", range(50))
def test_min_cost_beats_sampled_max_flows(seed):
    net = _random_network(seed)
    cheapest = flow.min_cost_max_flow(net)
    assert _conserves(net, cheapest.edge_flows)
    assert cheapest.value == flow.max_flow(net).value
    assert cheapest.cost == _cost(net, cheapest.edge_flows)

    # Other maximum flows: run the augmenting path search on shuffled edge orders
    rng = random.Random(seed)
    for _ in range(5):
        shuffled = list(net.edges)
        rng.shuffle(shuffled)
        other = FlowNetwork(node_count=net.node_count, source=net.source, sink=net.sink, edges=tuple(shuffled))
        sample = flow.max_flow(other)
        by_tag = dict(zip((edge.tag for edge in shuffled), sample.edge_flows))
        assert sample.value == cheapest.value
        assert cheapest.cost <= _cost(net, tuple(by_tag[edge.tag] for edge in net.edges))


def test_dump_network():
    net = FlowNetwork(node_count=3, source=0, sink=2, edges=(FlowEdge(0, 1, 2, 0, "a"), FlowEdge(1, 2, 1, -3, "b")))
    assert flow.dump_network(net) == "0 1 2 0 a\n1 2 1 -3 b"


def test_min_cost_with_costs_beyond_10_to_the_18():
    scale = 10**18
    net = FlowNetwork(
        node_count=6,
        source=0,
        sink=5,
        edges=(
            FlowEdge(0, 1, 1),
            FlowEdge(0, 2, 1),
            FlowEdge(1, 3, 1, -7 * scale),
            FlowEdge(1, 4, 1, -5 * scale),
            FlowEdge(2, 3, 1, -8 * scale),
            FlowEdge(2, 4, 1, -5 * scale),
            FlowEdge(3, 5, 1),
            FlowEdge(4, 5, 1),
        ),
    )
    result = flow.min_cost_max_flow(net)
    assert result.value == 2
    assert result.cost == -13 * scale


def test_parallel_edges_take_the_cheaper_one():
    net = FlowNetwork(
        node_count=3,
        source=0,
        sink=2,
        edges=(FlowEdge(0, 1, 1), FlowEdge(1, 2, 1, -5), FlowEdge(1, 2, 1, -3)),
    )
    result = flow.min_cost_max_flow(net)
    assert (result.value, result.cost) == (1, -5)
    assert result.edge_flows == (1, 1, 0)
