import pytest

from groupbuy.constants import NULL_VENDOR
from groupbuy.exceptions import UnknownVendor
from groupbuy.schemas import Allocation, Buyer, DiscountTier, Market, Vendor
from groupbuy.services import model
from tests.conftest import CORPUS, corpus_market, corpus_solution


def _market_with_tiers(*tiers: DiscountTier) -> Market:
    return Market(c=2, vendors=(Vendor(id="s1", base_prices=(4, 4), tiers=tiers),), buyers=())


def test_fixture_markets_are_valid(fix_e1, fix_e2):
    assert model.validate_market(fix_e1).ok
    assert model.validate_market(fix_e2).ok


def test_null_vendor_is_added(fix_e1):
    assert fix_e1.vendor_ids == (NULL_VENDOR, "s1", "s2")
    assert fix_e1.vendor(NULL_VENDOR).base_prices == (0, 0)


def test_unknown_vendor_lookup(fix_e1):
    with pytest.raises(UnknownVendor):
        fix_e1.vendor("s9")


def test_bundle_prices_must_decrease():
    market = _market_with_tiers(
        DiscountTier(thresholds=(2, 2), bundle_price=5), DiscountTier(thresholds=(3, 3), bundle_price=6)
    )
    report = model.validate_market(market)
    assert not report.ok
    assert any("not strictly decreasing" in violation for violation in report.violations)


def test_bundle_price_must_undercut_base_sum():
    report = model.validate_market(_market_with_tiers(DiscountTier(thresholds=(1, 1), bundle_price=9)))
    assert any("not below the base sum" in violation for violation in report.violations)


def test_thresholds_must_grow():
    market = _market_with_tiers(
        DiscountTier(thresholds=(2, 2), bundle_price=6), DiscountTier(thresholds=(3, 1), bundle_price=5)
    )
    report = model.validate_market(market)
    assert any("decrease componentwise" in violation for violation in report.violations)
    assert any("does not strictly increase" in violation for violation in report.violations)


def test_bad_valuations_and_duplicates():
    market = Market(
        c=2,
        vendors=(Vendor(id="s1", base_prices=(1, 1)), Vendor(id="s1", base_prices=(1, 1))),
        buyers=(
            Buyer(id="b1", valuations={("s1",): 3, ("s1", "s7"): 2, ("null", "null"): 1}),
            Buyer(id="b2", valuations={("s1", "s1"): -1}),
        ),
    )
    violations = model.validate_market(market).violations
    assert any("duplicate vendor id" in violation for violation in violations)
    assert any("has arity 1" in violation for violation in violations)
    assert any("unknown vendors ['s7']" in violation for violation in violations)
    assert any("buying nothing must be worth 0" in violation for violation in violations)
    assert any("negative valuation" in violation for violation in violations)


def test_demand_vectors(fix_e1, fix_e2, alloc_e1, alloc_e2):
    assert model.demand_vectors(fix_e1, alloc_e1)["s1"] == (2, 2)
    assert model.demand_vectors(fix_e1, alloc_e1)["s2"] == (0, 0)

    demand = model.demand_vectors(fix_e2, alloc_e2)
    assert demand["s1"] == (3, 2)
    assert demand["s2"] == (0, 1)
    assert model.demand_vectors(fix_e1, Allocation(choice={})) == {vendor: (0, 0) for vendor in fix_e1.vendor_ids}


def test_demand_vectors_unknown_vendor(fix_e1):
    with pytest.raises(UnknownVendor):
        model.demand_vectors(fix_e1, Allocation(choice={"b1": ("s1", "s9"), "b2": ("s1", "s1")}))


def test_triggered(fix_e1, fix_e2, alloc_e1, alloc_e2):
    assert model.triggered(fix_e1, alloc_e1) == {NULL_VENDOR: 0, "s1": 1, "s2": 0}
    assert model.triggered(fix_e2, alloc_e2)["s1"] == 1

    # demand (2, 1) misses threshold (2, 2) on the second item type
    partial = Allocation(choice={"b1": ("s1", "s1"), "b2": ("s1", NULL_VENDOR)})
    assert model.triggered(fix_e1, partial)["s1"] == 0
    assert model.discounting_vendors(fix_e1, partial) == set()


def test_buyer_market_price(fix_e1, fix_e2, alloc_e1, alloc_e2):
    assert model.buyer_market_price(fix_e1, alloc_e1, "b1") == 5
    assert model.buyer_market_price(fix_e2, alloc_e2, "b3") == 7

    nothing = Allocation(choice={"b1": (NULL_VENDOR, NULL_VENDOR), "b2": ("s1", "s1")})
    assert model.buyer_market_price(fix_e1, nothing, "b1") == 0


def test_market_price_decomposes_by_vendor(fix_e2, alloc_e2):
    assert model.vendor_price(fix_e2, alloc_e2, "s1", [0]) == 4
    assert model.vendor_price(fix_e2, alloc_e2, "s2", [1]) == 3
    assert model.vendor_price(fix_e2, alloc_e2, "s1", [0, 1]) == 4
    for buyer, choice in alloc_e2.choice.items():
        by_vendor = sum(
            model.vendor_price(fix_e2, alloc_e2, vendor, [k for k, s in enumerate(choice) if s == vendor])
            for vendor in set(choice)
        )
        assert by_vendor == model.buyer_market_price(fix_e2, alloc_e2, buyer)


def test_vendor_revenue(fix_e2, alloc_e2):
    assert model.vendor_revenue(fix_e2, alloc_e2) == {NULL_VENDOR: 0, "s1": 12, "s2": 3}


def test_utility_and_welfare(fix_e1, fix_e2, alloc_e1, alloc_e2):
    assert model.utility(fix_e1, alloc_e1, "b1") == 5
    assert model.utility(fix_e1, alloc_e1, "b2") == 1
    assert model.social_welfare(fix_e1, alloc_e1) == 6
    assert model.social_welfare(fix_e2, alloc_e2) == 9

    nothing = Allocation(choice={buyer: (NULL_VENDOR, NULL_VENDOR) for buyer in fix_e1.buyer_ids})
    assert model.social_welfare(fix_e1, nothing) == 0


def test_best_alternative(fix_e1):
    assert model.best_alternative(fix_e1, "b1") == (("s1", "s1"), 2)
    assert model.best_alternative(fix_e1, "b2") == (("s2", "s2"), 2)

    frugal = Market(c=2, vendors=fix_e1.vendors, buyers=(Buyer(id="b1", valuations={("s1", "s1"): 3}),))
    assert model.best_alternative(frugal, "b1") == ((NULL_VENDOR, NULL_VENDOR), 0)


def test_surplus(fix_e1, fix_e2, alloc_e1, alloc_e2):
    assert model.surpluses(fix_e1, alloc_e1) == {"b1": 3, "b2": -1}
    assert [model.surplus(fix_e2, alloc_e2, buyer) for buyer in ("b1", "b2", "b3")] == [4, 4, -2]

    # b1 buys its best alternative without a discount
    alone = Allocation(choice={"b1": ("s1", "s1"), "b2": ("s2", "s2")})
    assert model.surplus(fix_e1, alone, "b1") == 0


def test_subsidy_balance(fix_e1, alloc_e1):
    balance = model.subsidy_balance(fix_e1, alloc_e1)
    assert (balance.available, balance.needed) == (3, 1)


def test_group_partition(fix_e1, fix_e2, alloc_e1, alloc_e2):
    gp = model.group_partition(fix_e1, alloc_e1)
    assert gp.positive_groups == {"s1": ("b1",)}
    assert gp.positive_totals == {"s1": 3}
    assert gp.negative_groups == {("s1",): ("b2",)}
    assert gp.negative_totals == {("s1",): 1}

    gp = model.group_partition(fix_e2, alloc_e2)
    assert gp.positive_groups == {"s1": ("b1", "b2")}
    assert gp.available("s1") == 8
    assert gp.negative_groups == {("s1", "s2"): ("b3",)}
    assert gp.needed(("s1", "s2")) == 2


@pytest.mark.parametrize("seed", CORPUS)
def test_welfare_maximizing_allocations_have_enough_subsidy(seed):
    market, alloc = corpus_market(seed), corpus_solution(seed).allocation
    balance = model.subsidy_balance(market, alloc)
    assert balance.available >= balance.needed

    tiers = model.triggered(market, alloc)
    for buyer, sigma in model.surpluses(market, alloc).items():
        choice = alloc[buyer]
        if len(set(choice)) != 1 or tiers[choice[0]] == 0:
            assert sigma <= 0


def test_money_must_fit_64_bits():
    huge = 2**63
    market = Market(
        c=1,
        vendors=(Vendor(id="s1", base_prices=(huge,), tiers=(DiscountTier(thresholds=(1,), bundle_price=huge - 1),)),),
        buyers=(Buyer(id="b1", valuations={("s1",): huge}),),
    )
    violations = model.validate_market(market).violations
    assert any("base price" in violation and "exceeds" in violation for violation in violations)
    assert any("bundle price" in violation and "exceeds" in violation for violation in violations)
    assert any("valuation" in violation and "exceeds" in violation for violation in violations)

    assert model.validate_market(Market(c=1, vendors=(Vendor(id="s1", base_prices=(huge - 1,)),))).ok
