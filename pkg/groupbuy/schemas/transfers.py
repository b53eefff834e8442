from collections import defaultdict
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, validator

from groupbuy.schemas.groups import VendorSet
from groupbuy.schemas.market import Money


class GroupTransfers(BaseModel):
    # (s, x) -> total paid by P+(s) to N-(x)
    entries: dict[tuple[str, VendorSet], Money] = {}

    class Config:
        allow_mutation = False

    @validator("entries")
    def nonnegative(cls, entries: dict[tuple[str, VendorSet], Money]) -> dict[tuple[str, VendorSet], Money]:
        if negative := [key for key, amount in entries.items() if amount < 0]:
            raise ValueError(f"group transfers must be nonnegative, got {negative}")
        return entries

    def get(self, vendor: str, vendors: VendorSet) -> Money:
        return self.entries.get((vendor, vendors), 0)

    def paid(self) -> dict[str, Money]:
        totals: dict[str, Money] = defaultdict(int)
        for (vendor, _), amount in self.entries.items():
            totals[vendor] += amount
        return dict(totals)

    def received(self) -> dict[VendorSet, Money]:
        totals: dict[VendorSet, Money] = defaultdict(int)
        for (_, vendors), amount in self.entries.items():
            totals[vendors] += amount
        return dict(totals)

    def positive(self) -> dict[tuple[str, VendorSet], Money]:
        return {key: amount for key, amount in sorted(self.entries.items()) if amount > 0}


class TransferMatrix(BaseModel):
    # (payer, payee) -> amount moved from payer to payee
    entries: dict[tuple[str, str], Fraction] = {}

    class Config:
        allow_mutation = False
        arbitrary_types_allowed = True

    @validator("entries", pre=True)
    def as_fractions(cls, entries: dict[tuple[str, str], Any]) -> dict[tuple[str, str], Fraction]:
        return {key: Fraction(amount) for key, amount in entries.items()}

    @validator("entries")
    def positive_irreflexive_one_way(cls, entries: dict[tuple[str, str], Fraction]) -> dict[tuple[str, str], Fraction]:
        for (payer, payee), amount in entries.items():
            if payer == payee:
                raise ValueError(f"`{payer}` cannot pay itself")
            if amount <= 0:
                raise ValueError(f"transfer {payer} -> {payee} must be positive, got {amount}")
            if (payee, payer) in entries:
                raise ValueError(f"`{payer}` and `{payee}` pay each other; keep only the net direction")
        return entries

    def net_outflow(self) -> dict[str, Fraction]:
        net: dict[str, Fraction] = defaultdict(Fraction)
        for (payer, payee), amount in self.entries.items():
            net[payer] += amount
            net[payee] -= amount
        return dict(net)


class BuyerPrice(BaseModel):
    market_price: Money
    delta: Fraction
    final: Fraction

    class Config:
        allow_mutation = False
        arbitrary_types_allowed = True

    @validator("delta", "final", pre=True)
    def as_fraction(cls, value: Any) -> Fraction:
        return Fraction(value)


class PriceVector(BaseModel):
    prices: dict[str, BuyerPrice] = {}

    class Config:
        allow_mutation = False

    def delta(self, buyer: str) -> Fraction:
        return self.prices[buyer].delta

    def total_delta(self) -> Fraction:
        return sum((price.delta for price in self.prices.values()), Fraction(0))


class CrossTransferGraph(BaseModel):
    nodes: tuple[str, ...] = ()
    edges: set[tuple[str, str]] = set()

    def successors(self, node: str) -> list[str]:
        return sorted(head for tail, head in self.edges if tail == node)
