from dataclasses import dataclass

from pydantic import BaseModel

from groupbuy.constants import Solver
from groupbuy.schemas.market import Allocation, Money, VendorTuple


@dataclass(frozen=True)
class Partition:
    """
    How many buyers choose each vendor tuple; counts are aligned with cells
    """

    cells: tuple[VendorTuple, ...]
    sizes: tuple[int, ...]

    @property
    def counts(self) -> dict[VendorTuple, int]:
        return dict(zip(self.cells, self.sizes))

    @property
    def buyers(self) -> int:
        return sum(self.sizes)


class SwmResult(BaseModel):
    allocation: Allocation
    welfare: Money
    solver: Solver
    # Partitions (or raw allocations, for brute force) in the search space, and how many were evaluated
    search_space: int
    evaluated: int
