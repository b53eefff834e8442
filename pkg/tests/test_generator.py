import pytest

from groupbuy.constants import NULL_VENDOR
from groupbuy.services import generator, model


def test_same_seed_same_market():
    assert generator.generate_market(4, 2, 2, seed=7) == generator.generate_market(4, 2, 2, seed=7)
    assert generator.generate_market(4, 2, 2, seed=7) != generator.generate_market(4, 2, 2, seed=8)


@pytest.mark.parametrize("seed", range(40))
def test_generated_markets_are_valid(seed):
    market = generator.generate_market(buyers=seed % 6, vendors=1 + seed % 3, items=1 + seed % 3, seed=seed)
    assert model.validate_market(market).ok
    assert len(market.buyers) == seed % 6
    assert len(market.vendor_ids) == 2 + seed % 3

    for vendor in market.vendors:
        assert all(1 <= price <= 20 for price in vendor.base_prices) or vendor.id == NULL_VENDOR
        assert 1 <= len(vendor.tiers) <= 2 or vendor.id == NULL_VENDOR
        assert all(max(tier.thresholds) <= max(len(market.buyers), 1) for tier in vendor.tiers)


def test_no_buyers():
    market = generator.generate_market(0, 2, 2, seed=1)
    assert market.buyers == ()
    assert model.validate_market(market).ok


def test_ids_sort_naturally():
    market = generator.generate_market(12, 1, 1, seed=3)
    assert market.buyer_ids[:3] == ("b01", "b02", "b03")


def test_rejects_bad_sizes():
    with pytest.raises(ValueError):
        generator.generate_market(2, 0, 2, seed=1)
