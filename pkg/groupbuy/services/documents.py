from fractions import Fraction

from groupbuy import schemas, utils
from groupbuy.constants import NULL_VENDOR
from groupbuy.exceptions import InvalidInstance
from groupbuy.schemas import (
    Allocation,
    GroupTransfers,
    InstanceDocument,
    Market,
    PriceVector,
    SolutionDocument,
    TransferMatrix,
)
from groupbuy.services import model


def dump(document: InstanceDocument | SolutionDocument) -> str:
    return document.json(by_alias=True, exclude_none=True, indent=2) + "\n"


def market_from_document(document: InstanceDocument) -> Market:
    """
    Function to build a market from an instance document
    :param document: The parsed document
    :return: The market, null vendor added
    :raise InvalidInstance: if a vendor uses the reserved id or the market breaks a constraint
    """
    if any(vendor.id == NULL_VENDOR for vendor in document.vendors):
        raise InvalidInstance([f"vendor id `{NULL_VENDOR}` is reserved for buying nothing"])

    market = Market(
        c=document.item_types,
        vendors=tuple(
            schemas.Vendor(
                id=vendor.id,
                base_prices=tuple(vendor.base_prices),
                tiers=tuple(
                    schemas.DiscountTier(thresholds=tuple(tier.thresholds), bundle_price=tier.bundle_price)
                    for tier in vendor.discounts
                ),
            )
            for vendor in document.vendors
        ),
        buyers=tuple(_buyer(buyer) for buyer in document.buyers),
    )
    if not (report := model.validate_market(market)).ok:
        raise InvalidInstance(report.violations)
    return market


def _buyer(document: schemas.BuyerDocument) -> schemas.Buyer:
    valuations: dict[tuple[str, ...], int] = {}
    for valuation in document.valuations:
        if (choice := tuple(valuation.choice)) in valuations:
            raise InvalidInstance([f"buyer `{document.id}` values {list(choice)} twice"])
        valuations[choice] = valuation.value
    return schemas.Buyer(id=document.id, valuations=valuations)


def document_from_market(market: Market, seed: int | None = None) -> InstanceDocument:
    return InstanceDocument(
        item_types=market.c,
        seed=seed,
        vendors=[
            schemas.VendorDocument(
                id=vendor.id,
                base_prices=list(vendor.base_prices),
                discounts=[
                    schemas.TierDocument(thresholds=list(tier.thresholds), bundle_price=tier.bundle_price)
                    for tier in vendor.tiers
                ],
            )
            for vendor in market.vendors
            if vendor.id != NULL_VENDOR
        ],
        buyers=[
            schemas.BuyerDocument(
                id=buyer.id,
                valuations=[
                    schemas.ValuationDocument(choice=list(choice), value=value)
                    for choice, value in buyer.valuations.items()
                ],
            )
            for buyer in market.buyers
        ],
    )


def solution_document(
    market: Market,
    result: schemas.SwmResult,
    prices: PriceVector,
    gt: GroupTransfers,
    t: TransferMatrix,
    certificate: schemas.CertificateReport | None = None,
    seed: int | None = None,
    timings: dict[str, float] | None = None,
) -> SolutionDocument:
    """
    Function to assemble the solution document of a solved market
    :param market: The market
    :param result: The allocation and how it was found
    :param prices: The final prices
    :param gt: The group transfers
    :param t: The buyer transfers
    :param certificate: The certificate, if one was computed
    :param seed: The seed of the instance, if it was generated
    :param timings: Seconds spent per stage, if requested
    :return: The document
    """
    alloc = result.allocation
    sigma = model.surpluses(market, alloc)
    buyers = {}
    for buyer in market.buyer_ids:
        price = prices.prices[buyer]
        buyers[buyer] = schemas.BuyerOutcome(
            market_price=price.market_price,
            delta=utils.format_rational(price.delta),
            final_price=utils.format_rational(price.final),
            utility=utils.format_rational(market.buyer(buyer).value(alloc[buyer]) - price.final),
            surplus=sigma[buyer],
        )

    return SolutionDocument(
        allocation={buyer: list(alloc[buyer]) for buyer in market.buyer_ids},
        social_welfare=result.welfare,
        buyers=buyers,
        group_transfers=[
            schemas.GroupTransferDocument(vendor=vendor, vendors=list(vendors), amount=amount)
            for (vendor, vendors), amount in gt.positive().items()
        ],
        transfers=[
            schemas.TransferDocument(payer=payer, payee=payee, amount=utils.format_rational(amount))
            for (payer, payee), amount in sorted(t.entries.items())
        ],
        certificate=certificate,
        metadata=schemas.SolverMetadata(
            solver=result.solver,
            search_space=result.search_space,
            evaluated=result.evaluated,
            seed=seed,
            timings=timings,
        ),
    )


def allocation_from_solution(market: Market, document: SolutionDocument) -> Allocation:
    """
    Function to read the allocation of a stored solution back against its market
    :param market: The market the solution claims to solve
    :param document: The solution
    :return: The allocation
    :raise InvalidInstance: if buyers, tuple arity or vendors do not match the market
    """
    violations = []
    if (stored := set(document.allocation)) != (expected := set(market.buyer_ids)):
        violations.append(
            f"solution buyers differ from the instance: missing {sorted(expected - stored)}, "
            f"extra {sorted(stored - expected)}"
        )
    if set(document.buyers) != expected:
        violations.append("per-buyer outcomes do not cover exactly the instance's buyers")
    for buyer, choice in sorted(document.allocation.items()):
        if len(choice) != market.c:
            violations.append(f"buyer `{buyer}`: tuple {choice} has arity {len(choice)}, expected {market.c}")
        if unknown := [vendor for vendor in choice if vendor not in market.vendor_ids]:
            violations.append(f"buyer `{buyer}`: tuple {choice} names unknown vendors {unknown}")
    if violations:
        raise InvalidInstance(violations)
    return Allocation(choice={buyer: tuple(choice) for buyer, choice in sorted(document.allocation.items())})


def prices_from_solution(document: SolutionDocument) -> PriceVector:
    # Final prices are taken as written; verify recomputes market prices and checks them against these
    return PriceVector(
        prices={
            buyer: schemas.BuyerPrice(
                market_price=outcome.market_price,
                delta=_rational(outcome.delta),
                final=_rational(outcome.final_price),
            )
            for buyer, outcome in sorted(document.buyers.items())
        }
    )


def transfers_from_solution(document: SolutionDocument) -> TransferMatrix:
    entries: dict[tuple[str, str], Fraction] = {}
    for transfer in document.transfers:
        key = (transfer.payer, transfer.payee)
        entries[key] = entries.get(key, Fraction(0)) + _rational(transfer.amount)
    return TransferMatrix(entries=entries)


def group_transfers_from_solution(document: SolutionDocument) -> GroupTransfers:
    entries: dict[tuple[str, tuple[str, ...]], int] = {}
    for transfer in document.group_transfers:
        key = (transfer.vendor, utils.vendor_set(transfer.vendors))
        entries[key] = entries.get(key, 0) + transfer.amount
    return GroupTransfers(entries=entries)


def _rational(text: str) -> Fraction:
    try:
        return utils.parse_rational(text)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidInstance([f"`{text}` is not a rational"]) from e
