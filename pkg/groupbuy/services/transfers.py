import logging
from collections import defaultdict, deque
from fractions import Fraction
from typing import Iterable, Mapping

from groupbuy import schemas
from groupbuy.exceptions import NonZeroSum, SolverError, SumMismatch, Unstabilizable
from groupbuy.schemas import (
    Allocation,
    CrossTransferGraph,
    Flow,
    FlowEdge,
    FlowNetwork,
    GroupPartition,
    GroupTransfers,
    Market,
    Money,
    TransferMatrix,
    VendorSet,
)
from groupbuy.services import flow, model

Amounts = Iterable[tuple[str, Fraction | int]]


def group_transfer_network(gp: GroupPartition) -> FlowNetwork:
    """
    Function to build the network whose feasible flows are exactly the rational group transfers
    :param gp: The buyer groups of an allocation
    :return: The network; edge v_x -> u_s is tagged (s, x) and carries the transfer from P+(s) to N-(x)
    """
    sets = sorted(gp.negative_groups)
    vendors = sorted(set(gp.positive_groups) | {vendor for vendors in sets for vendor in vendors})
    set_node = {vendors: i for i, vendors in enumerate(sets, start=1)}
    vendor_node = {vendor: i for i, vendor in enumerate(vendors, start=len(sets) + 1)}
    sink = len(sets) + len(vendors) + 1

    edges = [FlowEdge(0, set_node[vendors], gp.needed(vendors), 0, vendors) for vendors in sets]
    edges.extend(
        FlowEdge(set_node[vendors], vendor_node[vendor], gp.needed(vendors), 0, (vendor, vendors))
        for vendors in sets
        for vendor in vendors
    )
    edges.extend(FlowEdge(vendor_node[vendor], sink, gp.available(vendor), 0, vendor) for vendor in vendors)
    return FlowNetwork(node_count=sink + 1, source=0, sink=sink, edges=tuple(edges))


def _is_transfer_edge(net: FlowNetwork, edge: FlowEdge) -> bool:
    return edge.tail != net.source and edge.head != net.sink


def transfers_from_flow(net: FlowNetwork, result: Flow) -> GroupTransfers:
    """
    Read group transfers off a flow on the group-transfer network
    """
    return GroupTransfers(
        entries={
            edge.tag: amount for edge, amount in zip(net.edges, result.edge_flows) if _is_transfer_edge(net, edge)
        }
    )


def flow_from_transfers(net: FlowNetwork, gt: GroupTransfers) -> Flow:
    """
    Write rational group transfers back onto the group-transfer network
    :param net: The network built by group_transfer_network
    :param gt: The group transfers
    :return: The corresponding feasible flow
    """
    known = {edge.tag for edge in net.edges if _is_transfer_edge(net, edge)}
    if stray := [key for key, amount in gt.entries.items() if amount > 0 and key not in known]:
        raise ValueError(f"group transfers {stray} have no edge in the network")

    received, paid = gt.received(), gt.paid()
    edge_flows = []
    for edge in net.edges:
        if edge.tail == net.source:
            amount = received.get(edge.tag, 0)
        elif edge.head == net.sink:
            amount = paid.get(edge.tag, 0)
        else:
            amount = gt.entries.get(edge.tag, 0)
        if amount > edge.capacity:
            raise ValueError(f"{amount} exceeds the capacity {edge.capacity} of edge {edge.tag!r}")
        edge_flows.append(amount)
    value = sum(amount for edge, amount in zip(net.edges, edge_flows) if edge.tail == net.source)
    return Flow(edge_flows=tuple(edge_flows), value=value)


def solve_group_transfers(market: Market, alloc: Allocation, gp: GroupPartition | None = None) -> GroupTransfers:
    """
    Function to compute rational group transfers that cover every negative-surplus group
    :param market: The market
    :param alloc: The allocation, expected to maximize social welfare
    :param gp: The allocation's buyer groups, if already computed
    :return: The group transfers read off a maximum flow
    """
    if gp is None:
        gp = model.group_partition(market, alloc)
    net = group_transfer_network(gp)
    result = flow.max_flow(net)

    deficits = [
        (edge.tag, edge.capacity - amount)
        for edge, amount in zip(net.edges, result.edge_flows)
        if edge.tail == net.source and amount < edge.capacity
    ]
    if deficits:
        for vendors, deficit in deficits:
            logging.warning(f"Group {{{', '.join(vendors)}}} is short {deficit} after the maximum flow")
        raise Unstabilizable(*deficits[0])
    return transfers_from_flow(net, result)


def greedy_match(offers: Amounts, requests: Amounts) -> dict[tuple[str, str], Fraction]:
    """
    Function to route offered amounts to requested amounts, each offer spent in order before the next
    :param offers: (payer, amount) pairs
    :param requests: (payee, amount) pairs
    :return: (payer, payee) -> amount, with at most len(offers) + len(requests) - 1 entries
    """
    offers = [(payer, Fraction(amount)) for payer, amount in offers]
    requests = [(payee, Fraction(amount)) for payee, amount in requests]
    if any(amount < 0 for _, amount in offers + requests):
        raise ValueError("offered and requested amounts must be nonnegative")
    offered, requested = sum(amount for _, amount in offers), sum(amount for _, amount in requests)
    if offered != requested:
        raise SumMismatch(Fraction(offered), Fraction(requested))

    pending = [[payer, amount] for payer, amount in offers if amount > 0]
    matched: dict[tuple[str, str], Fraction] = defaultdict(Fraction)
    i = 0
    for payee, need in requests:
        while need > 0:
            payer, available = pending[i]
            paid = min(available, need)
            matched[(payer, payee)] += paid
            pending[i][1] -= paid
            need -= paid
            if pending[i][1] == 0:
                i += 1
    return dict(matched)


def fair_buyer_transfers(gp: GroupPartition, gt: GroupTransfers) -> TransferMatrix:
    """
    Function to split group transfers into buyer-to-buyer transfers, each payer paying in proportion to its surplus
    :param gp: The buyer groups
    :param gt: Rational group transfers covering every negative group
    :return: The transfer matrix
    """
    payments = gt.positive()
    if stray := [(vendor, vendors) for vendor, vendors in payments if vendor not in gp.positive_groups]:
        raise SumMismatch(Fraction(0), Fraction(sum(payments[key] for key in stray)))

    entries: dict[tuple[str, str], Fraction] = defaultdict(Fraction)
    for vendor, group in gp.positive_groups.items():
        residual = {buyer: Fraction(gp.surplus[buyer]) for buyer in group}
        for (payer, vendors), amount in payments.items():
            if payer != vendor:
                continue
            available, needed = sum(residual.values()), gp.needed(vendors)
            if available < amount or needed == 0:
                raise SumMismatch(available, Fraction(needed))
            alpha, beta = Fraction(amount) / available, Fraction(amount, needed)
            matched = greedy_match(
                [(buyer, alpha * residual[buyer]) for buyer in group],
                [(buyer, -beta * gp.surplus[buyer]) for buyer in gp.negative_groups[vendors]],
            )
            for key, paid in matched.items():
                entries[key] += paid
            residual = {buyer: (1 - alpha) * left for buyer, left in residual.items()}
    return TransferMatrix(entries=dict(sorted(entries.items())))


def price_deltas(t: TransferMatrix) -> dict[str, Fraction]:
    return t.net_outflow()


def prices_from_transfers(market: Market, alloc: Allocation, t: TransferMatrix) -> schemas.PriceVector:
    """
    Function to compute final prices from market prices and buyer transfers
    :param market: The market
    :param alloc: The allocation
    :param t: The transfers
    :return: Per buyer: market price, net transfer paid, and final price
    """
    prices = model.market_prices(market, alloc)
    deltas = price_deltas(t)
    if unknown := sorted(set(deltas) - set(prices)):
        raise ValueError(f"transfers name buyers outside the allocation: {unknown}")

    vector = schemas.PriceVector(
        prices={
            buyer: schemas.BuyerPrice(
                market_price=price, delta=deltas.get(buyer, 0), final=price + deltas.get(buyer, Fraction(0))
            )
            for buyer, price in sorted(prices.items())
        }
    )
    if (total := vector.total_delta()) != 0:
        raise SolverError(f"price differences sum to {total}")
    return vector


def transfers_from_price_deltas(deltas: Mapping[str, Fraction | int]) -> TransferMatrix:
    """
    Function to build transfers whose net outflows are the given price differences
    :param deltas: Buyer -> price difference; must sum to zero
    :return: Transfers from positive-delta buyers to negative-delta buyers
    """
    if (total := sum((Fraction(delta) for delta in deltas.values()), Fraction(0))) != 0:
        raise NonZeroSum(total)

    payers = [[buyer, Fraction(delta)] for buyer, delta in sorted(deltas.items()) if delta > 0]
    payees = [(buyer, -Fraction(delta)) for buyer, delta in sorted(deltas.items()) if delta < 0]
    entries = {}
    # The last payee is covered from the tail of the payer list, splitting at most one payer
    while payees:
        payee, need = payees.pop()
        while need > 0:
            payer = payers[-1]
            paid = min(payer[1], need)
            entries[(payer[0], payee)] = paid
            payer[1] -= paid
            need -= paid
            if payer[1] == 0:
                payers.pop()
    return TransferMatrix(entries=entries)


def cross_transfer_graph(gt: GroupTransfers, vendors: Iterable[str] = ()) -> CrossTransferGraph:
    """
    Function to build the graph with an edge s -> s' whenever P+(s) pays a group buying from s' but not from s
    :param gt: The group transfers
    :param vendors: Extra nodes to include
    :return: The graph; it has no edge exactly when the transfers are rational
    """
    nodes = set(vendors)
    edges = set()
    for (vendor, vendor_set), amount in gt.entries.items():
        nodes.add(vendor)
        nodes.update(vendor_set)
        if amount > 0 and vendor not in vendor_set:
            edges.update((vendor, other) for other in vendor_set)
    return CrossTransferGraph(nodes=tuple(sorted(nodes)), edges=edges)


def cross_transfer_total(gt: GroupTransfers) -> Money:
    return sum(amount for (vendor, vendor_set), amount in gt.entries.items() if vendor not in vendor_set)


def _shortest_cycle(graph: CrossTransferGraph) -> list[str] | None:
    best: list[str] | None = None
    for start in graph.nodes:
        parent: dict[str, str | None] = {start: None}
        queue = deque([start])
        closing = None
        while queue and closing is None:
            node = queue.popleft()
            for successor in graph.successors(node):
                if successor == start:
                    closing = node
                    break
                if successor not in parent:
                    parent[successor] = node
                    queue.append(successor)
        if closing is None:
            continue

        cycle: list[str] = []
        step: str | None = closing
        while step is not None:
            cycle.append(step)
            step = parent[step]
        cycle.reverse()
        pivot = cycle.index(min(cycle))
        cycle = cycle[pivot:] + cycle[:pivot]
        if best is None or (len(cycle), cycle) < (len(best), best):
            best = cycle
    return best


def _cross_paid(entries: Mapping[tuple[str, VendorSet], Money], payer: str, target: str) -> list[VendorSet]:
    # Groups buying from target but not from payer, that payer currently pays
    return sorted(
        vendors
        for (vendor, vendors), amount in entries.items()
        if vendor == payer and amount > 0 and payer not in vendors and target in vendors
    )


def _shorten(entries: dict[tuple[str, VendorSet], Money], cycle: list[str]) -> None:
    size = len(cycle)
    paid = [
        sum(entries[(cycle[k], vendors)] for vendors in _cross_paid(entries, cycle[k], cycle[(k + 1) % size]))
        for k in range(size)
    ]
    pivot = paid.index(min(paid))
    cycle = cycle[pivot:] + cycle[:pivot]
    first, second, last = cycle[0], cycle[1], cycle[-1]

    # P+(first) stops paying groups of `second`; P+(last) pays them instead
    moved = 0
    for vendors in _cross_paid(entries, first, second):
        amount = entries[(first, vendors)]
        entries[(last, vendors)] = entries.get((last, vendors), 0) + amount
        entries[(first, vendors)] = 0
        moved += amount

    # In exchange P+(first) takes over the same amount of what P+(last) pays groups of `first`
    remaining = moved
    for vendors in _cross_paid(entries, last, first):
        shifted = min(remaining, entries[(last, vendors)])
        entries[(last, vendors)] -= shifted
        entries[(first, vendors)] = entries.get((first, vendors), 0) + shifted
        remaining -= shifted
        if remaining == 0:
            break
    if remaining:
        raise SolverError(f"cycle {cycle} could not absorb {remaining} of cross-transfer")


def eliminate_cycles(gt: GroupTransfers) -> GroupTransfers:
    """
    Function to rewrite group transfers into equivalent ones whose cross-transfer graph is acyclic
    :param gt: The group transfers
    :return: Transfers where every P+(s) pays the same total and every N-(x) receives the same total
    """
    entries = dict(gt.entries)
    while cycle := _shortest_cycle(cross_transfer_graph(GroupTransfers(entries=entries))):
        before = cross_transfer_total(GroupTransfers(entries=entries))
        _shorten(entries, cycle)
        logging.debug(
            f"Shortened cycle {cycle}: cross-transfer {before} -> "
            f"{cross_transfer_total(GroupTransfers(entries=entries))}"
        )
    return GroupTransfers(entries=dict(sorted(entries.items())))
