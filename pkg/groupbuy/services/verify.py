import logging
from collections import defaultdict
from fractions import Fraction

from groupbuy import schemas
from groupbuy.constants import CheckName
from groupbuy.schemas import (
    Allocation,
    CertificateReport,
    CheckResult,
    GroupPartition,
    GroupTransfers,
    Market,
    PriceVector,
    TransferMatrix,
    Witness,
)
from groupbuy.services import model
from groupbuy.utils import format_rational


def _witness(subject: str, relation: str, lhs: Fraction | int, rhs: Fraction | int) -> Witness:
    return Witness(subject=subject, relation=relation, lhs=format_rational(lhs), rhs=format_rational(rhs))


def _verdict(name: CheckName, witnesses: list[Witness], note: str | None = None) -> CheckResult:
    if witnesses:
        logging.warning(f"Check `{name.value}` failed with {len(witnesses)} witness(es), first: {witnesses[0]}")
    return CheckResult(name=name, passed=not witnesses, witnesses=witnesses, note=note)


def _missing(alloc: Allocation, prices: PriceVector) -> list[Witness]:
    return [
        Witness(subject=buyer, relation="has a price", lhs="missing", rhs="present")
        for buyer in sorted(set(alloc.choice) - set(prices.prices))
    ]


def check_stable(market: Market, alloc: Allocation, prices: PriceVector) -> CheckResult:
    """
    Function to check that no buyer gains by deviating alone and paying base prices
    :param market: The market
    :param alloc: The allocation
    :param prices: The prices to certify; market prices are recomputed, only the deltas are taken as given
    :return: The verdict, one witness per buyer whose utility falls below its best deviation
    """
    witnesses = _missing(alloc, prices)
    current = model.market_prices(market, alloc)
    for buyer in sorted(set(alloc.choice) & set(prices.prices)):
        quoted = prices.prices[buyer]
        if quoted.market_price != current[buyer]:
            witnesses.append(
                _witness(buyer, "quoted market price == market price", quoted.market_price, current[buyer])
            )
        if quoted.final != quoted.market_price + quoted.delta:
            witnesses.append(
                _witness(buyer, "final price == market price + delta", quoted.final, quoted.market_price + quoted.delta)
            )
        utility = market.buyer(buyer).value(alloc[buyer]) - current[buyer] - quoted.delta
        if utility < (deviation := model.best_alternative(market, buyer)[1]):
            witnesses.append(_witness(buyer, "utility >= best deviation at base prices", utility, deviation))
    return _verdict(
        CheckName.STABLE,
        witnesses,
        note="withdrawing a payment forfeits the discount, so a buyer is stable iff its delta <= its surplus",
    )


def check_rational_prices(market: Market, alloc: Allocation, prices: PriceVector) -> CheckResult:
    """
    Function to check that only discounted full-bundle buyers with positive surplus pay a premium,
    and only when their vendor also sells to a negative-surplus buyer
    """
    sigma = model.surpluses(market, alloc)
    discounting = model.discounting_vendors(market, alloc)
    supported = {vendor for buyer, choice in alloc.choice.items() if sigma[buyer] < 0 for vendor in choice}

    witnesses = []
    for buyer, price in sorted(prices.prices.items()):
        if price.delta <= 0:
            continue
        choice = alloc[buyer]
        if sigma[buyer] <= 0:
            witnesses.append(_witness(buyer, "surplus of a paying buyer > 0", sigma[buyer], 0))
        if len(set(choice)) != 1:
            witnesses.append(
                Witness(subject=buyer, relation="buys the full bundle from one vendor", lhs=str(list(choice)), rhs="")
            )
        elif (vendor := choice[0]) not in discounting:
            witnesses.append(Witness(subject=buyer, relation="vendor offers a discount", lhs=vendor, rhs="no tier"))
        elif vendor not in supported:
            witnesses.append(
                Witness(subject=buyer, relation="some negative-surplus buyer uses the vendor", lhs=vendor, rhs="none")
            )
    return _verdict(CheckName.RATIONAL_PRICES, witnesses)


def check_rational_transfers(market: Market, alloc: Allocation, t: TransferMatrix) -> CheckResult:
    """
    Function to check that every buyer transfer runs from a positive-surplus buyer of a discounted full bundle
    to a negative-surplus buyer purchasing from that same vendor
    :param market: The market
    :param alloc: The allocation
    :param t: The buyer transfers
    :return: The verdict, with witnesses subject "payer->payee"
    """
    sigma = model.surpluses(market, alloc)
    discounting = model.discounting_vendors(market, alloc)

    witnesses = []
    for payer, payee in sorted(t.entries):
        subject = f"{payer}->{payee}"
        if unknown := [buyer for buyer in (payer, payee) if buyer not in alloc.choice]:
            witnesses.append(Witness(subject=subject, relation="buyers are allocated", lhs=",".join(unknown), rhs=""))
            continue
        if sigma[payer] <= 0:
            witnesses.append(_witness(subject, "surplus of the payer > 0", sigma[payer], 0))
        if sigma[payee] >= 0:
            witnesses.append(_witness(subject, "surplus of the payee < 0", sigma[payee], 0))

        choice = alloc[payer]
        if len(set(choice)) != 1 or (vendor := choice[0]) not in discounting:
            witnesses.append(
                Witness(subject=subject, relation="payer buys a discounted full bundle", lhs=str(list(choice)), rhs="")
            )
        elif vendor not in alloc[payee]:
            witnesses.append(
                Witness(subject=subject, relation="payee buys from the payer's vendor", lhs=vendor, rhs="no")
            )
    return _verdict(CheckName.RATIONAL_TRANSFERS, witnesses)


def check_fair(market: Market, alloc: Allocation, prices: PriceVector) -> CheckResult:
    """
    Function to check that buyers making the same choice with positive surplus pay in proportion to their surplus
    :param market: The market
    :param alloc: The allocation
    :param prices: The prices
    :return: The verdict; proportionality is compared by cross-multiplying, so zero payments need no special case
    """
    sigma = model.surpluses(market, alloc)
    groups: dict[tuple[str, ...], list[str]] = defaultdict(list)
    for buyer in sorted(alloc.choice):
        if sigma[buyer] > 0 and buyer in prices.prices:
            groups[alloc[buyer]].append(buyer)

    witnesses = []
    for first, *rest in groups.values():
        for other in rest:
            lhs, rhs = prices.delta(first) * sigma[other], prices.delta(other) * sigma[first]
            if lhs != rhs:
                witnesses.append(
                    _witness(f"{first},{other}", "delta(b) * surplus(b') == delta(b') * surplus(b)", lhs, rhs)
                )
    return _verdict(CheckName.FAIR, witnesses)


def check_group_condition(gp: GroupPartition, gt: GroupTransfers) -> CheckResult:
    """
    Function to check group transfers against the three conditions for rational stabilization
    :param gp: The buyer groups
    :param gt: The group transfers
    :return: The verdict; witnesses name the vendor or vendor set and the violated condition
    """
    witnesses = []
    for vendor, paid in sorted(gt.paid().items()):
        if paid > gp.available(vendor):
            witnesses.append(_witness(vendor, "paid <= positive surplus", paid, gp.available(vendor)))

    received = gt.received()
    for vendors in sorted(set(received) | set(gp.negative_groups)):
        if (amount := received.get(vendors, 0)) != gp.needed(vendors):
            witnesses.append(_witness(f"{{{','.join(vendors)}}}", "received == needed", amount, gp.needed(vendors)))

    for (vendor, vendors), amount in gt.positive().items():
        if vendor not in vendors:
            witnesses.append(_witness(f"{vendor}->{{{','.join(vendors)}}}", "cross-transfer == 0", amount, 0))
    return _verdict(CheckName.GROUP_CONDITION, witnesses)


def check_p_consistent(prices: PriceVector, t: TransferMatrix) -> CheckResult:
    net = t.net_outflow()
    witnesses = []
    for buyer in sorted(set(prices.prices) | set(net)):
        delta = prices.delta(buyer) if buyer in prices.prices else Fraction(0)
        if delta != (paid := net.get(buyer, Fraction(0))):
            witnesses.append(_witness(buyer, "delta == net transfer paid", delta, paid))
    return _verdict(CheckName.P_CONSISTENT, witnesses)


def check_budget_balance(prices: PriceVector) -> CheckResult:
    witnesses = []
    if (total := prices.total_delta()) != 0:
        witnesses.append(_witness("market", "sum of deltas == 0", total, 0))
    return _verdict(CheckName.BUDGET_BALANCE, witnesses)


def check_equivalent(gt: GroupTransfers, other: GroupTransfers) -> CheckResult:
    """
    Function to check that two group transfers have the same per-vendor outgoing and per-set incoming totals
    """
    witnesses = []
    for mine, theirs, label in ((gt.paid(), other.paid(), "paid"), (gt.received(), other.received(), "received")):
        for key in sorted(set(mine) | set(theirs)):
            if (lhs := mine.get(key, 0)) != (rhs := theirs.get(key, 0)):
                subject = key if isinstance(key, str) else f"{{{','.join(key)}}}"
                witnesses.append(_witness(subject, f"{label} totals equal", lhs, rhs))
    return _verdict(CheckName.EQUIVALENCE, witnesses)


def certify(
    market: Market, alloc: Allocation, prices: PriceVector, t: TransferMatrix, gt: GroupTransfers
) -> CertificateReport:
    """
    Function to run every check against an allocation and its prices, recomputing everything else from the market
    :param market: The market
    :param alloc: Any allocation, welfare-maximizing or not
    :param prices: The prices to certify
    :param t: The buyer transfers behind the prices
    :param gt: The group transfers behind the buyer transfers
    :return: The report with per-check verdicts and the market-wide subsidy balance
    """
    balance: schemas.SubsidyBalance = model.subsidy_balance(market, alloc)
    checks = [
        check_stable(market, alloc, prices),
        check_rational_prices(market, alloc, prices),
        check_fair(market, alloc, prices),
        check_p_consistent(prices, t),
        check_rational_transfers(market, alloc, t),
        check_group_condition(model.group_partition(market, alloc), gt),
        check_budget_balance(prices),
    ]
    logging.info(f"Certificate: {sum(check.passed for check in checks)}/{len(checks)} checks passed")
    return CertificateReport(checks=checks, subsidy_available=balance.available, subsidy_needed=balance.needed)
