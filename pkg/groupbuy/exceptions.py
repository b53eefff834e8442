import logging
from fractions import Fraction


class GroupBuyError(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        logging.info(f"{type(self).__name__}: {message}")


class InvalidInstance(GroupBuyError):
    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


class UnknownVendor(GroupBuyError):
    def __init__(self, vendor: str, buyer: str | None = None):
        self.vendor = vendor
        self.buyer = buyer
        super().__init__(f"`{vendor}` is not a vendor of this market" + (f" (buyer `{buyer}`)" if buyer else ""))


class BudgetExceeded(GroupBuyError):
    def __init__(self, what: str, count: int, limit: int):
        self.what = what
        self.count = count
        self.limit = limit
        super().__init__(f"{count} {what} exceed the configured limit of {limit}")


class Unstabilizable(GroupBuyError):
    def __init__(self, vendor_set: tuple[str, ...], deficit: int):
        self.vendor_set = vendor_set
        self.deficit = deficit
        super().__init__(f"buyers purchasing from {{{', '.join(vendor_set)}}} are short {deficit} of subsidy")


class SumMismatch(GroupBuyError):
    def __init__(self, offered: Fraction, requested: Fraction):
        self.offered = offered
        self.requested = requested
        super().__init__(f"offers total {offered} but requests total {requested}")


class NonZeroSum(GroupBuyError):
    def __init__(self, total: Fraction):
        self.total = total
        super().__init__(f"price differences sum to {total}, not 0")


class MalformedNetwork(GroupBuyError):
    pass


class SolverError(GroupBuyError):
    pass
