from enum import Enum, IntEnum

INSTANCE_SCHEMA = "gbb-market/1"

SOLUTION_SCHEMA = "gbb-solution/1"

# Reserved id of the vendor standing for "do not buy this item type"
NULL_VENDOR = "null"

# Prices and valuations must fit a signed 64-bit integer
MONEY_MAX = 2**63 - 1


class ExitCode(IntEnum):
    OK = 0
    CHECK_FAILED = 1
    PARSE_ERROR = 2
    BUDGET_EXCEEDED = 3
    UNSTABILIZABLE = 4


class CheckName(str, Enum):
    STABLE = "stable"
    RATIONAL_PRICES = "rational_prices"
    RATIONAL_TRANSFERS = "rational_transfers"
    FAIR = "fair"
    P_CONSISTENT = "p_consistent"
    GROUP_CONDITION = "group_condition"
    BUDGET_BALANCE = "budget_balance"
    EQUIVALENCE = "equivalence"


class Solver(str, Enum):
    PARTITION_FLOW = "partition-flow"
    BRUTE_FORCE = "brute-force"
