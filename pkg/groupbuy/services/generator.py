import logging
import random

from groupbuy import schemas
from groupbuy.constants import NULL_VENDOR
from groupbuy.exceptions import InvalidInstance
from groupbuy.schemas import DiscountTier, Market, Money
from groupbuy.services import model

# Chance that a buyer values a given vendor's full bundle, and that it also values one mixed tuple
BUNDLE_INTEREST = 0.7
MIXED_INTEREST = 0.3


def _ids(prefix: str, count: int) -> list[str]:
    width = len(str(count))
    return [f"{prefix}{i:0{width}d}" for i in range(1, count + 1)]


def _tiers(rng: random.Random, base_sum: Money, c: int, cap: int) -> tuple[DiscountTier, ...]:
    thresholds = [rng.randint(1, cap) for _ in range(c)]
    price = rng.randint(base_sum // 2, base_sum - 1)
    tiers = [DiscountTier(thresholds=tuple(thresholds), bundle_price=price)]

    if rng.random() < 0.5 and price > 0:
        raised = [min(cap, threshold + rng.randint(0, 1)) for threshold in thresholds]
        if sum(raised) > sum(thresholds):
            tiers.append(DiscountTier(thresholds=tuple(raised), bundle_price=rng.randint(price // 2, price - 1)))
    return tuple(tiers)


def generate_market(buyers: int, vendors: int, items: int, seed: int, max_value: int = 20) -> Market:
    """
    Function to generate a random valid market, deterministic for a given seed
    :param buyers: Number of buyers, may be 0
    :param vendors: Number of vendors besides the null vendor
    :param items: Number of item types
    :param seed: The seed
    :param max_value: Upper bound on base prices; valuations go up to items * max_value
    :return: The market
    """
    if buyers < 0 or vendors < 1 or items < 1 or max_value < 1:
        raise ValueError(f"cannot generate {buyers} buyers, {vendors} vendors, {items} items, values <= {max_value}")

    rng = random.Random(seed)
    vendor_ids = _ids("s", vendors)
    generated = []
    for vendor in vendor_ids:
        base = tuple(rng.randint(1, max_value) for _ in range(items))
        tiers = _tiers(rng, sum(base), items, max(buyers, 1))
        generated.append(schemas.Vendor(id=vendor, base_prices=base, tiers=tiers))

    choices = vendor_ids + [NULL_VENDOR]
    top = items * max_value
    generated_buyers = []
    for buyer in _ids("b", buyers):
        valuations = {(vendor,) * items: rng.randint(1, top) for vendor in vendor_ids if rng.random() < BUNDLE_INTEREST}
        if rng.random() < MIXED_INTEREST:
            mixed = tuple(rng.choice(choices) for _ in range(items))
            if any(vendor != NULL_VENDOR for vendor in mixed):
                valuations[mixed] = rng.randint(1, top)
        generated_buyers.append(schemas.Buyer(id=buyer, valuations=valuations))

    market = Market(c=items, vendors=tuple(generated), buyers=tuple(generated_buyers))
    if not (report := model.validate_market(market)).ok:
        raise InvalidInstance(report.violations)
    logging.info(f"Generated market with {buyers} buyers, {vendors} vendors, {items} item types from seed {seed}")
    return market
