from pydantic import BaseModel, Extra, Field, validator

from groupbuy.constants import INSTANCE_SCHEMA, SOLUTION_SCHEMA, Solver
from groupbuy.schemas.certificate import CertificateReport


class Document(BaseModel):
    class Config:
        extra = Extra.forbid
        allow_population_by_field_name = True


class TierDocument(Document):
    thresholds: list[int]
    bundle_price: int


class VendorDocument(Document):
    id: str
    base_prices: list[int]
    discounts: list[TierDocument] = []


class ValuationDocument(Document):
    choice: list[str]
    value: int


class BuyerDocument(Document):
    id: str
    valuations: list[ValuationDocument] = []


class InstanceDocument(Document):
    schema_tag: str = Field(INSTANCE_SCHEMA, alias="schema")
    item_types: int
    seed: int | None
    vendors: list[VendorDocument]
    buyers: list[BuyerDocument]

    @validator("schema_tag")
    def known_schema(cls, tag: str) -> str:
        if tag != INSTANCE_SCHEMA:
            raise ValueError(f"unsupported schema `{tag}`, expected `{INSTANCE_SCHEMA}`")
        return tag


class BuyerOutcome(Document):
    market_price: int
    delta: str
    final_price: str
    # Utility after redistribution, a rational like the prices
    utility: str
    surplus: int


class GroupTransferDocument(Document):
    vendor: str
    vendors: list[str]
    amount: int


class TransferDocument(Document):
    payer: str
    payee: str
    amount: str


class SolverMetadata(Document):
    solver: Solver
    search_space: int
    evaluated: int
    seed: int | None
    timings: dict[str, float] | None


class SolutionDocument(Document):
    schema_tag: str = Field(SOLUTION_SCHEMA, alias="schema")
    allocation: dict[str, list[str]]
    social_welfare: int
    buyers: dict[str, BuyerOutcome]
    group_transfers: list[GroupTransferDocument] = []
    transfers: list[TransferDocument] = []
    certificate: CertificateReport | None
    metadata: SolverMetadata

    @validator("schema_tag")
    def known_schema(cls, tag: str) -> str:
        if tag != SOLUTION_SCHEMA:
            raise ValueError(f"unsupported schema `{tag}`, expected `{SOLUTION_SCHEMA}`")
        return tag
