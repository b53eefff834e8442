import logging
import time
from contextlib import contextmanager
from typing import Iterator

from groupbuy import schemas
from groupbuy.constants import Solver
from groupbuy.schemas import CertificateReport, Market, SolutionDocument
from groupbuy.services import documents, model, swm, transfers, verify


@contextmanager
def _timed(timings: dict[str, float], stage: str) -> Iterator[None]:
    start = time.perf_counter()
    yield
    timings[stage] = round(time.perf_counter() - start, 6)


def solve(
    market: Market,
    solver: Solver = Solver.PARTITION_FLOW,
    max_partitions: int | None = None,
    max_allocations: int | None = None,
    jobs: int | None = None,
    certify: bool = True,
    seed: int | None = None,
    timings: bool = False,
) -> SolutionDocument:
    """
    Function to run the whole pipeline: welfare-maximizing allocation, group transfers, fair prices, certificate
    :param market: A validated market
    :param solver: Partition flow search, or brute force as an oracle
    :param max_partitions: Partition budget for the flow search
    :param max_allocations: Allocation budget for brute force
    :param jobs: Worker processes for the flow search
    :param certify: Whether to attach a certificate
    :param seed: Seed of the instance, echoed into the metadata
    :param timings: Whether to record seconds per stage
    :return: The solution document
    """
    stages: dict[str, float] = {}
    with _timed(stages, "swm"):
        if solver == Solver.BRUTE_FORCE:
            result = swm.brute_force_swm(market, max_allocations=max_allocations)
        else:
            result = swm.solve_swm(market, max_partitions=max_partitions, jobs=jobs)
    logging.info(f"Social welfare {result.welfare} after evaluating {result.evaluated} of {result.search_space}")

    alloc = result.allocation
    with _timed(stages, "group_transfers"):
        gp = model.group_partition(market, alloc)
        gt = transfers.solve_group_transfers(market, alloc, gp)
    with _timed(stages, "buyer_transfers"):
        t = transfers.fair_buyer_transfers(gp, gt)
        prices = transfers.prices_from_transfers(market, alloc, t)

    certificate = None
    if certify:
        with _timed(stages, "certify"):
            certificate = verify.certify(market, alloc, prices, t, gt)

    return documents.solution_document(
        market, result, prices, gt, t, certificate=certificate, seed=seed, timings=stages if timings else None
    )


def verify_solution(market: Market, document: SolutionDocument) -> CertificateReport:
    """
    Function to re-run the certificate of a stored solution against its instance
    :param market: The market
    :param document: The stored solution, for any allocation
    :return: The report
    """
    alloc = documents.allocation_from_solution(market, document)
    if (welfare := model.social_welfare(market, alloc)) != document.social_welfare:
        logging.warning(f"Stored social welfare {document.social_welfare} differs from the recomputed {welfare}")

    report: schemas.CertificateReport = verify.certify(
        market,
        alloc,
        documents.prices_from_solution(document),
        documents.transfers_from_solution(document),
        documents.group_transfers_from_solution(document),
    )
    return report
