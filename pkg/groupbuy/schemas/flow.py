from dataclasses import dataclass
from typing import Hashable

# Plain dataclasses rather than pydantic models: the SWM search builds one network per partition


@dataclass(frozen=True)
class FlowEdge:
    tail: int
    head: int
    capacity: int
    cost: int = 0
    tag: Hashable = None


@dataclass(frozen=True)
class FlowNetwork:
    node_count: int
    source: int
    sink: int
    edges: tuple[FlowEdge, ...]

    def edge_index(self, tag: Hashable) -> int:
        for index, edge in enumerate(self.edges):
            if edge.tag == tag:
                return index
        raise KeyError(f"no edge tagged {tag!r}")


@dataclass(frozen=True)
class Flow:
    edge_flows: tuple[int, ...]
    value: int
    cost: int = 0

    def on(self, network: FlowNetwork, tag: Hashable) -> int:
        return self.edge_flows[network.edge_index(tag)]
