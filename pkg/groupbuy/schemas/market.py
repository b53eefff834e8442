from typing import Any

from pydantic import BaseModel, PrivateAttr, validator

from groupbuy.constants import NULL_VENDOR
from groupbuy.exceptions import UnknownVendor

Money = int

# One vendor id per item type, in item-type order
VendorTuple = tuple[str, ...]


class DiscountTier(BaseModel):
    thresholds: tuple[int, ...]
    bundle_price: Money

    class Config:
        allow_mutation = False


class Vendor(BaseModel):
    id: str
    base_prices: tuple[Money, ...]
    tiers: tuple[DiscountTier, ...] = ()

    class Config:
        allow_mutation = False

    @property
    def base_sum(self) -> Money:
        return sum(self.base_prices)


class Buyer(BaseModel):
    id: str
    valuations: dict[VendorTuple, Money] = {}

    class Config:
        allow_mutation = False

    def value(self, choice: VendorTuple) -> Money:
        return self.valuations.get(choice, 0)


class Market(BaseModel):
    c: int
    vendors: tuple[Vendor, ...] = ()
    buyers: tuple[Buyer, ...] = ()

    _vendor_index: dict[str, Vendor] = PrivateAttr(default_factory=dict)
    _buyer_index: dict[str, Buyer] = PrivateAttr(default_factory=dict)

    class Config:
        allow_mutation = False

    def __init__(self, **data: Any) -> None:
        super().__init__(**data)
        self._vendor_index = {vendor.id: vendor for vendor in self.vendors}
        self._buyer_index = {buyer.id: buyer for buyer in self.buyers}

    @validator("vendors", always=True)
    def add_null_vendor(cls, vendors: tuple[Vendor, ...], values: dict[str, Any]) -> tuple[Vendor, ...]:
        if any(vendor.id == NULL_VENDOR for vendor in vendors) or "c" not in values:
            return vendors
        return vendors + (Vendor(id=NULL_VENDOR, base_prices=(0,) * values["c"]),)

    @property
    def vendor_ids(self) -> tuple[str, ...]:
        """
        Canonical vendor order, null vendor included
        """
        return tuple(sorted(self._vendor_index))

    @property
    def buyer_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._buyer_index))

    def vendor(self, id: str) -> Vendor:
        if vendor := self._vendor_index.get(id):
            return vendor
        raise UnknownVendor(id)

    def buyer(self, id: str) -> Buyer:
        if buyer := self._buyer_index.get(id):
            return buyer
        raise KeyError(f"`{id}` is not a buyer of this market")


class Allocation(BaseModel):
    choice: dict[str, VendorTuple]

    class Config:
        allow_mutation = False

    def __getitem__(self, buyer: str) -> VendorTuple:
        return self.choice[buyer]


class ValidationReport(BaseModel):
    violations: list[str] = []

    @property
    def ok(self) -> bool:
        return not self.violations


class SubsidyBalance(BaseModel):
    # Total positive surplus, and total subsidy needed by negative-surplus buyers
    available: Money
    needed: Money
