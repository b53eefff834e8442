import heapq
import logging
from collections import deque
from dataclasses import dataclass

from groupbuy import schemas
from groupbuy.exceptions import MalformedNetwork
from groupbuy.schemas import Flow, FlowNetwork

@dataclass
class _Residual:
    """
    Arc 2i is edge i of the network, arc 2i + 1 its reverse
    """

    head: list[int]
    capacity: list[int]
    cost: list[int]
    adjacency: list[list[int]]

    def tail(self, arc: int) -> int:
        return self.head[arc ^ 1]

    def push(self, arc: int, amount: int) -> None:
        self.capacity[arc] -= amount
        self.capacity[arc ^ 1] += amount


def _check(net: FlowNetwork) -> None:
    n = net.node_count
    if not (0 <= net.source < n and 0 <= net.sink < n) or net.source == net.sink:
        raise MalformedNetwork(f"bad terminals source={net.source} sink={net.sink} for {n} nodes")
    for index, edge in enumerate(net.edges):
        if not (0 <= edge.tail < n and 0 <= edge.head < n):
            raise MalformedNetwork(f"edge {index} ({edge.tail} -> {edge.head}) has a dangling node id")
        if edge.tail == edge.head:
            raise MalformedNetwork(f"edge {index} is a self-loop on node {edge.tail}")
        if edge.capacity < 0:
            raise MalformedNetwork(f"edge {index} has negative capacity {edge.capacity}")


def _residual(net: FlowNetwork) -> _Residual:
    _check(net)
    residual = _Residual(head=[], capacity=[], cost=[], adjacency=[[] for _ in range(net.node_count)])
    for edge in net.edges:
        residual.adjacency[edge.tail].append(len(residual.head))
        residual.head.append(edge.head)
        residual.capacity.append(edge.capacity)
        residual.cost.append(edge.cost)

        residual.adjacency[edge.head].append(len(residual.head))
        residual.head.append(edge.tail)
        residual.capacity.append(0)
        residual.cost.append(-edge.cost)
    return residual


def _path(residual: _Residual, parent: list[int], source: int, sink: int) -> list[int]:
    path = []
    node = sink
    while node != source:
        arc = parent[node]
        path.append(arc)
        node = residual.tail(arc)
    return path


def _augmenting_path(residual: _Residual, source: int, sink: int) -> list[int] | None:
    # BFS over arcs in index order: shortest path, ties broken by lowest edge index
    parent = [-1] * len(residual.adjacency)
    seen = [False] * len(residual.adjacency)
    seen[source] = True
    queue = deque([source])
    while queue:
        node = queue.popleft()
        for arc in residual.adjacency[node]:
            head = residual.head[arc]
            if residual.capacity[arc] > 0 and not seen[head]:
                seen[head] = True
                parent[head] = arc
                if head == sink:
                    return _path(residual, parent, source, sink)
                queue.append(head)
    return None


def _result(net: FlowNetwork, residual: _Residual, value: int, cost: int = 0) -> Flow:
    return Flow(
        edge_flows=tuple(edge.capacity - residual.capacity[2 * i] for i, edge in enumerate(net.edges)),
        value=value,
        cost=cost,
    )


def max_flow(net: FlowNetwork) -> Flow:
    """
    Function to compute a maximum integral flow with shortest augmenting paths
    :param net: The network
    :return: The flow, deterministic for a given edge order
    """
    residual = _residual(net)
    value = 0
    while path := _augmenting_path(residual, net.source, net.sink):
        bottleneck = min(residual.capacity[arc] for arc in path)
        for arc in path:
            residual.push(arc, bottleneck)
        value += bottleneck
    return _result(net, residual, value)


def _initial_potentials(residual: _Residual, source: int) -> list[int | None]:
    # Label-correcting pass; None marks nodes the source cannot reach
    distance: list[int | None] = [None] * len(residual.adjacency)
    distance[source] = 0
    arcs = [arc for arc in range(len(residual.head)) if residual.capacity[arc] > 0]
    for _ in range(len(residual.adjacency)):
        changed = False
        for arc in arcs:
            if (reached := distance[residual.tail(arc)]) is None:
                continue
            head, candidate = residual.head[arc], reached + residual.cost[arc]
            if (known := distance[head]) is None or candidate < known:
                distance[head] = candidate
                changed = True
        if not changed:
            return distance
    raise MalformedNetwork("negative-cost cycle reachable from the source")


def _cheapest_path(
    residual: _Residual, source: int, sink: int, potential: list[int | None]
) -> tuple[list[int], list[int | None]] | None:
    distance: list[int | None] = [None] * len(residual.adjacency)
    parent = [-1] * len(residual.adjacency)
    distance[source] = 0
    heap = [(0, source)]
    while heap:
        dist, node = heapq.heappop(heap)
        if dist != distance[node]:
            continue
        # Every node pushed on the heap was reachable when the potentials were set
        node_potential = potential[node] or 0
        for arc in residual.adjacency[node]:
            head = residual.head[arc]
            if residual.capacity[arc] <= 0 or (head_potential := potential[head]) is None:
                continue
            candidate = dist + residual.cost[arc] + node_potential - head_potential
            if (known := distance[head]) is None or candidate < known:
                distance[head] = candidate
                parent[head] = arc
                heapq.heappush(heap, (candidate, head))
    if distance[sink] is None:
        return None
    return _path(residual, parent, source, sink), distance


def min_cost_max_flow(net: FlowNetwork) -> Flow:
    """
    Function to compute a maximum flow of minimum cost by successive shortest paths
    :param net: The network; edge costs may be negative as long as no negative cycle is reachable
    :return: The flow, with its value and total cost
    """
    residual = _residual(net)
    potential = _initial_potentials(residual, net.source)
    value = cost = 0
    while found := _cheapest_path(residual, net.source, net.sink, potential):
        path, distance = found
        for node, dist in enumerate(distance):
            if dist is not None and (current := potential[node]) is not None:
                potential[node] = current + dist
        bottleneck = min(residual.capacity[arc] for arc in path)
        for arc in path:
            residual.push(arc, bottleneck)
        value += bottleneck
        cost += bottleneck * sum(residual.cost[arc] for arc in path)
    logging.debug(f"min-cost flow on {net.node_count} nodes: value {value}, cost {cost}")
    return _result(net, residual, value, cost)


def min_cut(net: FlowNetwork, flow: Flow) -> frozenset[int]:
    """
    Function to find the source side of the cut left by a flow
    :param net: The network
    :param flow: A flow on it
    :return: The nodes reachable from the source in the residual network; a maximum flow leaves the sink outside
    """
    residual = _residual(net)
    for index, amount in enumerate(flow.edge_flows):
        residual.push(2 * index, amount)
    reachable = {net.source}
    queue = deque([net.source])
    while queue:
        node = queue.popleft()
        for arc in residual.adjacency[node]:
            if residual.capacity[arc] > 0 and (head := residual.head[arc]) not in reachable:
                reachable.add(head)
                queue.append(head)
    return frozenset(reachable)


def dump_network(net: schemas.FlowNetwork) -> str:
    """
    Debug dump with one `from to cap cost tag` line per edge
    """
    return "\n".join(f"{edge.tail} {edge.head} {edge.capacity} {edge.cost} {edge.tag}" for edge in net.edges)
