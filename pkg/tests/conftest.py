import random
from functools import lru_cache
from pathlib import Path

import pytest

from groupbuy.schemas import Allocation, InstanceDocument, Market, SwmResult
from groupbuy.services import documents, generator, swm

FIXTURES = Path(__file__).parent.parent / "fixtures"

# Seeds of the random corpus: up to 4 buyers, 2 vendors, 2 item types, valuations up to 20
CORPUS = range(200)


def load_market(name: str) -> Market:
    return documents.market_from_document(InstanceDocument.parse_file(FIXTURES / name))


@lru_cache(maxsize=None)
def corpus_market(seed: int) -> Market:
    rng = random.Random(seed)
    return generator.generate_market(
        buyers=rng.randint(1, 4), vendors=rng.randint(1, 2), items=rng.randint(1, 2), seed=seed, max_value=10
    )


@lru_cache(maxsize=None)
def corpus_solution(seed: int) -> SwmResult:
    return swm.solve_swm(corpus_market(seed))


@pytest.fixture
def fix_e1() -> Market:
    return load_market("fix_e1.json")


@pytest.fixture
def fix_e2() -> Market:
    return load_market("fix_e2.json")


@pytest.fixture
def alloc_e1() -> Allocation:
    return Allocation(choice={"b1": ("s1", "s1"), "b2": ("s1", "s1")})


@pytest.fixture
def alloc_e2() -> Allocation:
    return Allocation(choice={"b1": ("s1", "s1"), "b2": ("s1", "s1"), "b3": ("s1", "s2")})
