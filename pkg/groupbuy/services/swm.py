import logging
import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from itertools import islice, product
from typing import Callable, Iterable, Iterator

from groupbuy import schemas
from groupbuy.constants import Solver
from groupbuy.core.config import settings
from groupbuy.exceptions import BudgetExceeded, SolverError
from groupbuy.schemas import Allocation, FlowEdge, FlowNetwork, Market, Money, Partition, VendorTuple
from groupbuy.services import flow, model

Progress = Callable[[int, int], None]

# Partitions handed to the worker pool at a time, per worker
PARALLEL_BATCH = 4096


def cells(market: Market) -> list[VendorTuple]:
    """
    All (M+1)^c vendor tuples, null vendor included, in lexicographic order
    """
    return list(product(market.vendor_ids, repeat=market.c))


def partition_count(n: int, cells: int) -> int:
    """
    Number of ways to distribute n indistinguishable buyers among the cells
    """
    return math.comb(n + cells - 1, cells - 1)


def enumerate_partitions(n: int, cells: int) -> Iterator[tuple[int, ...]]:
    """
    Enumerates every composition of n into `cells` nonnegative parts, largest first part first
    :param n: The number of buyers
    :param cells: The number of parts
    :return: An iterator over the compositions
    """
    if n < 0 or cells < 1:
        raise ValueError(f"cannot split {n} buyers into {cells} cells")
    if cells == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in enumerate_partitions(n - first, cells - 1):
            yield (first,) + rest


def _check_partition(market: Market, partition: Partition) -> None:
    if partition.buyers != len(market.buyers):
        raise ValueError(f"partition places {partition.buyers} buyers, market has {len(market.buyers)}")


def assignment_network(market: Market, partition: Partition) -> FlowNetwork:
    """
    Function to build the buyer -> vendor tuple assignment network conditional on a partition
    :param market: The market
    :param partition: How many buyers each vendor tuple must receive
    :return: The network; assignment edges cost minus the buyer's valuation and are tagged (buyer, tuple)
    """
    _check_partition(market, partition)
    buyers = market.buyer_ids
    first_cell = len(buyers) + 1
    sink = first_cell + len(partition.cells)

    edges = [FlowEdge(0, i, 1, 0, buyer) for i, buyer in enumerate(buyers, start=1)]
    for i, buyer in enumerate(buyers, start=1):
        valuation = market.buyer(buyer)
        edges.extend(
            FlowEdge(i, first_cell + j, 1, -valuation.value(cell), (buyer, cell))
            for j, cell in enumerate(partition.cells)
        )
    edges.extend(
        FlowEdge(first_cell + j, sink, size, 0, cell)
        for j, (cell, size) in enumerate(zip(partition.cells, partition.sizes))
    )
    return FlowNetwork(node_count=sink + 1, source=0, sink=sink, edges=tuple(edges))


def total_price(market: Market, partition: Partition) -> Money:
    """
    Function to compute what all buyers pay under any allocation matching a partition
    :param market: The market
    :param partition: The partition
    :return: The total market price; it does not depend on which buyer sits in which cell
    """
    demand = {vendor: [0] * market.c for vendor in market.vendor_ids}
    for cell, size in zip(partition.cells, partition.sizes):
        for k, vendor in enumerate(cell):
            demand[vendor][k] += size
    tiers = model.tiers_of(market, demand)
    return sum(
        size * model.price_of(market, tiers, cell) for cell, size in zip(partition.cells, partition.sizes) if size
    )


def _assign(market: Market, partition: Partition) -> tuple[dict[str, VendorTuple], Money]:
    network = assignment_network(market, partition)
    result = flow.min_cost_max_flow(network)
    if result.value != len(market.buyers):
        raise SolverError(f"assignment flow routed {result.value} of {len(market.buyers)} buyers")

    choice = {}
    for edge, amount in zip(network.edges, result.edge_flows):
        if amount and edge.tail != network.source and edge.head != network.sink:
            buyer, cell = edge.tag
            choice[buyer] = cell
    return choice, -result.cost - total_price(market, partition)


def best_allocation_for_partition(market: Market, partition: Partition) -> tuple[Allocation, Money]:
    choice, welfare = _assign(market, partition)
    return Allocation(choice=choice), welfare


def _evaluate(market: Market, all_cells: tuple[VendorTuple, ...], sizes: tuple[int, ...]) -> tuple[dict, Money]:
    return _assign(market, Partition(cells=all_cells, sizes=sizes))


def _evaluations(market: Market, all_cells: tuple[VendorTuple, ...], jobs: int) -> Iterable[tuple[dict, Money]]:
    partitions = enumerate_partitions(len(market.buyers), len(all_cells))
    evaluate = partial(_evaluate, market, all_cells)
    if jobs <= 1:
        yield from map(evaluate, partitions)
        return
    # map() returns results in submission order, which keeps the argmax reproducible
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        while batch := list(islice(partitions, PARALLEL_BATCH * jobs)):
            yield from executor.map(evaluate, batch, chunksize=256)


def _log_progress(evaluated: int, total: int) -> None:
    logging.info(f"Evaluated {evaluated}/{total} partitions")


def solve_swm(
    market: Market, max_partitions: int | None = None, jobs: int | None = None, progress: Progress | None = None
) -> schemas.SwmResult:
    """
    Function to find a social-welfare-maximizing allocation by solving one min-cost flow per partition
    :param market: The market
    :param max_partitions: Refuse to start when the partition count exceeds this
    :param jobs: Number of worker processes
    :param progress: Called with (evaluated, total) every settings.PROGRESS_EVERY partitions
    :return: The best allocation; ties go to the partition enumerated first
    """
    limit = settings.MAX_PARTITIONS if max_partitions is None else max_partitions
    all_cells = tuple(cells(market))
    total = partition_count(len(market.buyers), len(all_cells))
    if total > limit:
        raise BudgetExceeded("partitions", total, limit)

    logging.info(f"Searching {total} partitions of {len(market.buyers)} buyers over {len(all_cells)} cells")
    progress = progress or _log_progress
    best: tuple[dict, Money] | None = None
    evaluated = 0
    for choice, welfare in _evaluations(market, all_cells, settings.JOBS if jobs is None else jobs):
        evaluated += 1
        if best is None or welfare > best[1]:
            best = (choice, welfare)
        if evaluated % settings.PROGRESS_EVERY == 0:
            progress(evaluated, total)

    if best is None:
        raise SolverError("no partition was evaluated")
    return schemas.SwmResult(
        allocation=Allocation(choice=best[0]),
        welfare=best[1],
        solver=Solver.PARTITION_FLOW,
        search_space=total,
        evaluated=evaluated,
    )


def brute_force_swm(market: Market, max_allocations: int | None = None) -> schemas.SwmResult:
    """
    Function to find a social-welfare-maximizing allocation by trying every allocation
    :param market: The market
    :param max_allocations: Refuse to start when the number of allocations exceeds this
    :return: The best allocation; ties go to the allocation enumerated first
    """
    limit = settings.MAX_ORACLE_ALLOCATIONS if max_allocations is None else max_allocations
    all_cells = cells(market)
    buyers = market.buyer_ids
    space = len(all_cells) ** len(buyers)
    if space > limit:
        raise BudgetExceeded("allocations", space, limit)

    logging.info(f"Enumerating {space} allocations")
    values = [[market.buyer(buyer).value(cell) for cell in all_cells] for buyer in buyers]
    # What buyers pay depends only on which cells are used how often
    paid: dict[tuple[int, ...], Money] = {}
    best: tuple[tuple[int, ...], Money] | None = None
    for chosen in product(range(len(all_cells)), repeat=len(buyers)):
        if (used := tuple(sorted(chosen))) not in paid:
            paid[used] = model.total_paid(market, (all_cells[j] for j in used))
        welfare = sum(row[j] for row, j in zip(values, chosen)) - paid[used]
        if best is None or welfare > best[1]:
            best = (chosen, welfare)

    if best is None:
        raise SolverError("no allocation was evaluated")
    return schemas.SwmResult(
        allocation=Allocation(choice={buyer: all_cells[j] for buyer, j in zip(buyers, best[0])}),
        welfare=best[1],
        solver=Solver.BRUTE_FORCE,
        search_space=space,
        evaluated=space,
    )
