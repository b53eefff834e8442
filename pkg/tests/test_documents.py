import json

import pytest
from pydantic import ValidationError

from groupbuy.exceptions import InvalidInstance
from groupbuy.schemas import InstanceDocument, SolutionDocument
from groupbuy.services import documents, pipeline
from groupbuy.utils import format_rational, parse_rational
from tests.conftest import FIXTURES


def _instance(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text())


def test_rationals():
    assert format_rational(parse_rational("14/4")) == "7/2"
    assert format_rational(parse_rational("-6/3")) == "-2"
    assert parse_rational(5) == 5
    with pytest.raises(ValueError):
        parse_rational("1/2/3")


def test_instance_round_trip():
    document = InstanceDocument.parse_obj(_instance("fix_e2.json"))
    assert documents.document_from_market(documents.market_from_document(document)) == document


def test_unknown_fields_are_rejected():
    raw = _instance("fix_e1.json")
    raw["vendors"][0]["colour"] = "red"
    with pytest.raises(ValidationError):
        InstanceDocument.parse_obj(raw)


def test_schema_tag_is_checked():
    raw = _instance("fix_e1.json")
    raw["schema"] = "gbb-market/2"
    with pytest.raises(ValidationError):
        InstanceDocument.parse_obj(raw)


def test_reserved_vendor_id():
    raw = _instance("fix_e1.json")
    raw["vendors"][1]["id"] = "null"
    with pytest.raises(InvalidInstance):
        documents.market_from_document(InstanceDocument.parse_obj(raw))


def test_invalid_market_lists_violations():
    raw = _instance("fix_e1.json")
    raw["vendors"][0]["discounts"][0]["bundle_price"] = 9
    with pytest.raises(InvalidInstance) as e:
        documents.market_from_document(InstanceDocument.parse_obj(raw))
    assert any("not below the base sum" in violation for violation in e.value.violations)


def test_solution_document(fix_e1):
    solution = pipeline.solve(fix_e1)
    assert solution.social_welfare == 6
    assert solution.allocation == {"b1": ["s1", "s1"], "b2": ["s1", "s1"]}
    assert {buyer: outcome.final_price for buyer, outcome in solution.buyers.items()} == {"b1": "6", "b2": "4"}
    assert solution.buyers["b2"].utility == "2"
    assert [(g.vendor, g.vendors, g.amount) for g in solution.group_transfers] == [("s1", ["s1"], 1)]
    assert [(t.payer, t.payee, t.amount) for t in solution.transfers] == [("b1", "b2", "1")]
    assert solution.certificate.passed
    assert solution.metadata.timings is None

    text = documents.dump(solution)
    assert '"schema": "gbb-solution/1"' in text
    assert "timings" not in text
    assert SolutionDocument.parse_raw(text) == solution


def test_timings_are_opt_in(fix_e1):
    solution = pipeline.solve(fix_e1, timings=True, certify=False)
    assert set(solution.metadata.timings) == {"swm", "group_transfers", "buyer_transfers"}
    assert solution.certificate is None


def test_stored_solution_is_read_back(fix_e2):
    solution = pipeline.solve(fix_e2)
    assert pipeline.verify_solution(fix_e2, solution).passed

    other = solution.copy(update={"allocation": {"b1": ["s1", "s1"]}})
    with pytest.raises(InvalidInstance):
        pipeline.verify_solution(fix_e2, other)
