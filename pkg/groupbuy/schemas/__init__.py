from .certificate import CertificateReport, CheckResult, Witness
from .documents import (
    BuyerDocument,
    BuyerOutcome,
    GroupTransferDocument,
    InstanceDocument,
    SolutionDocument,
    SolverMetadata,
    TierDocument,
    TransferDocument,
    ValuationDocument,
    VendorDocument,
)
from .flow import Flow, FlowEdge, FlowNetwork
from .groups import GroupPartition, VendorSet
from .market import (
    Allocation,
    Buyer,
    DiscountTier,
    Market,
    Money,
    SubsidyBalance,
    ValidationReport,
    Vendor,
    VendorTuple,
)
from .swm import Partition, SwmResult
from .transfers import BuyerPrice, CrossTransferGraph, GroupTransfers, PriceVector, TransferMatrix
