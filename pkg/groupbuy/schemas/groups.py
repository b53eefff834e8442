from pydantic import BaseModel

from groupbuy.schemas.market import Money

VendorSet = tuple[str, ...]


class GroupPartition(BaseModel):
    # P+(s): full-bundle buyers of a discounting vendor with positive surplus
    positive_groups: dict[str, tuple[str, ...]] = {}
    positive_totals: dict[str, Money] = {}

    # N-(x): negative-surplus buyers purchasing from exactly the vendors in x
    negative_groups: dict[VendorSet, tuple[str, ...]] = {}
    negative_totals: dict[VendorSet, Money] = {}

    surplus: dict[str, Money] = {}

    class Config:
        allow_mutation = False

    def available(self, vendor: str) -> Money:
        return self.positive_totals.get(vendor, 0)

    def needed(self, vendors: VendorSet) -> Money:
        return self.negative_totals.get(vendors, 0)
