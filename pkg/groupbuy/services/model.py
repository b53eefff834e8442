from collections import defaultdict
from itertools import product
from typing import Iterable, Mapping

from groupbuy import schemas, utils
from groupbuy.constants import MONEY_MAX, NULL_VENDOR
from groupbuy.exceptions import UnknownVendor
from groupbuy.schemas import Allocation, Market, Money, VendorTuple


def validate_market(market: Market) -> schemas.ValidationReport:
    """
    Check a market against the constraints on price schedules and valuations
    :param market: The market
    :return: A report listing every violated constraint; empty when the market is valid
    """
    violations = []
    c = market.c
    if c < 1:
        violations.append(f"item type count must be at least 1, got {c}")

    seen: set[str] = set()
    for vendor in market.vendors:
        if vendor.id in seen:
            violations.append(f"duplicate vendor id `{vendor.id}`")
        seen.add(vendor.id)
        violations.extend(_vendor_violations(vendor, c))

    seen = set()
    for buyer in market.buyers:
        if buyer.id in seen:
            violations.append(f"duplicate buyer id `{buyer.id}`")
        seen.add(buyer.id)
        for choice, value in buyer.valuations.items():
            if len(choice) != c:
                violations.append(f"buyer `{buyer.id}`: tuple {list(choice)} has arity {len(choice)}, expected {c}")
            if unknown := [vendor for vendor in choice if vendor not in market.vendor_ids]:
                violations.append(f"buyer `{buyer.id}`: tuple {list(choice)} names unknown vendors {unknown}")
            if value < 0:
                violations.append(f"buyer `{buyer.id}`: negative valuation {value} for {list(choice)}")
            if value > MONEY_MAX:
                violations.append(f"buyer `{buyer.id}`: valuation {value} for {list(choice)} exceeds {MONEY_MAX}")
            if value != 0 and all(vendor == NULL_VENDOR for vendor in choice):
                violations.append(f"buyer `{buyer.id}`: buying nothing must be worth 0, got {value}")
    return schemas.ValidationReport(violations=violations)


def _vendor_violations(vendor: schemas.Vendor, c: int) -> list[str]:
    violations = []
    label = f"vendor `{vendor.id}`"
    if len(vendor.base_prices) != c:
        violations.append(f"{label}: {len(vendor.base_prices)} base prices for {c} item types")
    if any(price < 0 for price in vendor.base_prices):
        violations.append(f"{label}: negative base price in {list(vendor.base_prices)}")
    if any(price > MONEY_MAX for price in vendor.base_prices):
        violations.append(f"{label}: base price in {list(vendor.base_prices)} exceeds {MONEY_MAX}")
    if vendor.id == NULL_VENDOR and (vendor.base_sum != 0 or vendor.tiers):
        violations.append(f"{label}: the null vendor must have zero prices and no discounts")

    previous_thresholds, previous_price = (0,) * c, vendor.base_sum
    for i, tier in enumerate(vendor.tiers, start=1):
        if len(tier.thresholds) != c:
            violations.append(f"{label}: tier {i} has {len(tier.thresholds)} thresholds for {c} item types")
            continue
        if any(threshold < 0 for threshold in tier.thresholds):
            violations.append(f"{label}: tier {i} has negative thresholds {list(tier.thresholds)}")
        if any(now < before for now, before in zip(tier.thresholds, previous_thresholds)):
            violations.append(f"{label}: tier {i} thresholds {list(tier.thresholds)} decrease componentwise")
        if sum(tier.thresholds) <= sum(previous_thresholds):
            violations.append(f"{label}: tier {i} threshold sum {sum(tier.thresholds)} does not strictly increase")
        if tier.bundle_price < 0:
            violations.append(f"{label}: tier {i} has negative bundle price {tier.bundle_price}")
        if tier.bundle_price > MONEY_MAX:
            violations.append(f"{label}: tier {i} bundle price {tier.bundle_price} exceeds {MONEY_MAX}")
        if tier.bundle_price >= vendor.base_sum:
            violations.append(
                f"{label}: tier {i} bundle price {tier.bundle_price} is not below the base sum {vendor.base_sum}"
            )
        elif tier.bundle_price >= previous_price:
            violations.append(
                f"{label}: bundle prices not strictly decreasing (tier {i}: {tier.bundle_price} >= {previous_price})"
            )
        previous_thresholds, previous_price = tier.thresholds, tier.bundle_price
    return violations


def demand_of(market: Market, choices: Iterable[VendorTuple]) -> dict[str, list[int]]:
    demand = {vendor: [0] * market.c for vendor in market.vendor_ids}
    for choice in choices:
        for k, vendor in enumerate(choice):
            if vendor not in demand:
                raise UnknownVendor(vendor)
            demand[vendor][k] += 1
    return demand


def tier_of(vendor: schemas.Vendor, demand: Iterable[int]) -> int:
    demand = tuple(demand)
    met = 0
    for i, tier in enumerate(vendor.tiers, start=1):
        if all(n >= threshold for n, threshold in zip(demand, tier.thresholds)):
            met = i
    return met


def tiers_of(market: Market, demand: Mapping[str, Iterable[int]]) -> dict[str, int]:
    return {vendor: tier_of(market.vendor(vendor), counts) for vendor, counts in demand.items()}


def base_price(market: Market, choice: VendorTuple) -> Money:
    return sum(market.vendor(vendor).base_prices[k] for k, vendor in enumerate(choice))


def price_of(market: Market, tiers: Mapping[str, int], choice: VendorTuple) -> Money:
    """
    Market price of a vendor tuple given the triggered tier of every vendor
    """
    first = choice[0]
    if (tier := tiers.get(first, 0)) > 0 and all(vendor == first for vendor in choice):
        return market.vendor(first).tiers[tier - 1].bundle_price
    return base_price(market, choice)


def total_paid(market: Market, choices: Iterable[VendorTuple]) -> Money:
    """
    Total market price of a collection of chosen tuples, without building an Allocation
    """
    choices = list(choices)
    tiers = tiers_of(market, demand_of(market, choices))
    return sum(price_of(market, tiers, chosen) for chosen in choices)


def demand_vectors(market: Market, alloc: Allocation) -> dict[str, tuple[int, ...]]:
    return {vendor: tuple(counts) for vendor, counts in demand_of(market, alloc.choice.values()).items()}


def triggered(market: Market, alloc: Allocation) -> dict[str, int]:
    """
    Function to determine the discount tier each vendor offers under an allocation
    :param market: The market
    :param alloc: The allocation
    :return: Vendor id -> index of the largest threshold met componentwise, 0 when none is met
    """
    return tiers_of(market, demand_of(market, alloc.choice.values()))


def discounting_vendors(market: Market, alloc: Allocation) -> set[str]:
    return {vendor for vendor, tier in triggered(market, alloc).items() if tier > 0}


def market_prices(market: Market, alloc: Allocation) -> dict[str, Money]:
    tiers = triggered(market, alloc)
    return {buyer: price_of(market, tiers, choice) for buyer, choice in alloc.choice.items()}


def buyer_market_price(market: Market, alloc: Allocation, buyer: str) -> Money:
    """
    Function to compute the price a buyer pays before any redistribution
    :param market: The market
    :param alloc: The allocation
    :param buyer: The buyer's id
    :return: The discounted bundle price if the buyer takes every item from one discounting vendor,
        the sum of base prices otherwise
    """
    return price_of(market, triggered(market, alloc), alloc[buyer])


def vendor_price(market: Market, alloc: Allocation, vendor: str, items: Iterable[int]) -> Money:
    """
    Function to compute the price at which a vendor offers a set of item types
    :param market: The market
    :param alloc: The allocation
    :param vendor: The vendor's id
    :param items: Item type indices
    :return: The discounted bundle price for the full item set of a discounting vendor, else the sum of base prices
    """
    return _vendor_price(market, triggered(market, alloc), vendor, set(items))


def _vendor_price(market: Market, tiers: Mapping[str, int], vendor: str, items: set[int]) -> Money:
    if len(items) == market.c and (tier := tiers[vendor]) > 0:
        return market.vendor(vendor).tiers[tier - 1].bundle_price
    return sum(market.vendor(vendor).base_prices[k] for k in items)


def vendor_revenue(market: Market, alloc: Allocation) -> dict[str, Money]:
    tiers = triggered(market, alloc)
    revenue: dict[str, Money] = {vendor: 0 for vendor in market.vendor_ids}
    for choice in alloc.choice.values():
        for vendor in set(choice):
            revenue[vendor] += _vendor_price(market, tiers, vendor, {k for k, s in enumerate(choice) if s == vendor})
    return revenue


def utilities(market: Market, alloc: Allocation) -> dict[str, Money]:
    prices = market_prices(market, alloc)
    return {buyer: market.buyer(buyer).value(choice) - prices[buyer] for buyer, choice in alloc.choice.items()}


def utility(market: Market, alloc: Allocation, buyer: str) -> Money:
    return market.buyer(buyer).value(alloc[buyer]) - buyer_market_price(market, alloc, buyer)


def social_welfare(market: Market, alloc: Allocation) -> Money:
    return sum(utilities(market, alloc).values())


def best_alternative(market: Market, buyer: str) -> tuple[VendorTuple, Money]:
    """
    Function to find the best choice a buyer has when deviating, paying base prices
    :param market: The market
    :param buyer: The buyer's id
    :return: The lexicographically smallest maximizing tuple, and the utility it yields
    """
    valuations = market.buyer(buyer)

    def gain(choice: VendorTuple) -> Money:
        return valuations.value(choice) - base_price(market, choice)

    # max keeps the first maximizer, and product yields tuples in lexicographic order
    best = max(product(market.vendor_ids, repeat=market.c), key=gain)
    return best, gain(best)


def surpluses(market: Market, alloc: Allocation) -> dict[str, Money]:
    current = utilities(market, alloc)
    return {buyer: current[buyer] - best_alternative(market, buyer)[1] for buyer in alloc.choice}


def surplus(market: Market, alloc: Allocation, buyer: str) -> Money:
    return utility(market, alloc, buyer) - best_alternative(market, buyer)[1]


def subsidy_balance(market: Market, alloc: Allocation) -> schemas.SubsidyBalance:
    sigma = surpluses(market, alloc).values()
    return schemas.SubsidyBalance(
        available=sum(value for value in sigma if value > 0),
        needed=-sum(value for value in sigma if value < 0),
    )


def group_partition(market: Market, alloc: Allocation) -> schemas.GroupPartition:
    """
    Function to split buyers into the groups that pay and receive subsidies
    :param market: The market
    :param alloc: The allocation
    :return: The positive groups P+(s), the negative groups N-(x) and their totals
    """
    tiers = triggered(market, alloc)
    sigma = surpluses(market, alloc)
    positive: dict[str, list[str]] = defaultdict(list)
    negative: dict[tuple[str, ...], list[str]] = defaultdict(list)

    for buyer in sorted(alloc.choice):
        choice = alloc[buyer]
        if sigma[buyer] > 0 and len(set(choice)) == 1 and tiers[choice[0]] > 0:
            positive[choice[0]].append(buyer)
        elif sigma[buyer] < 0:
            negative[utils.vendor_set(choice)].append(buyer)

    return schemas.GroupPartition(
        positive_groups={vendor: tuple(group) for vendor, group in sorted(positive.items())},
        positive_totals={vendor: sum(sigma[b] for b in group) for vendor, group in sorted(positive.items())},
        negative_groups={vendors: tuple(group) for vendors, group in sorted(negative.items())},
        negative_totals={vendors: -sum(sigma[b] for b in group) for vendors, group in sorted(negative.items())},
        surplus=sigma,
    )
