from pathlib import Path

import pytest

from warpspace.errors import SchemaError
from warpspace.spaces.descriptors import EuclideanProduct, Line
from warpspace.spaces.resolve import definition_order, expand_refs, load_space, space_from_document

SPECS = Path(__file__).resolve().parents[2] / "data" / "specs"


def test_definitions_expand_leaf_first():
    defs = {
        "P": {"kind": "product", "factors": [{"kind": "ref", "name": "R"}, {"kind": "ref", "name": "C"}]},
        "R": {"kind": "line"},
        "C": {"kind": "circle", "circumference": 1.0},
    }
    assert definition_order(defs) == ["C", "R", "P"]
    out = expand_refs({"kind": "ref", "name": "P"}, defs)
    assert out["factors"][0] == {"kind": "line"}


def test_reference_cycle_is_rejected():
    defs = {"A": {"kind": "scaled", "factor": 2.0, "inner": {"kind": "ref", "name": "B"}},
            "B": {"kind": "scaled", "factor": 2.0, "inner": {"kind": "ref", "name": "A"}}}
    with pytest.raises(SchemaError, match="cycle"):
        space_from_document({"definitions": defs, "space": {"kind": "ref", "name": "A"}})


def test_unknown_reference_is_rejected():
    with pytest.raises(SchemaError):
        space_from_document({"definitions": {}, "space": {"kind": "ref", "name": "missing"}})


def test_load_space_file():
    assert load_space(SPECS / "flat_plane.json") == EuclideanProduct((Line(), Line()))
    assert load_space(SPECS / "interval_circle.json").kind == "quotient"


def test_missing_file_is_a_schema_error(tmp_path):
    with pytest.raises(SchemaError):
        load_space(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError):
        load_space(bad)
