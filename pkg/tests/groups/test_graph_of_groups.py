import pytest

from warpspace.errors import SchemaError
from warpspace.groups.graph_of_groups import GraphOfGroupsSpec, GroupEdge, is_graph_of_groups

BS12 = {"vertices": ["v"],
        "edges": [{"id": "e", "bar": "E", "origin": "v", "k": 1}, {"id": "E", "bar": "e", "origin": "v", "k": 2}]}


def test_default_orientation_takes_first_of_each_pair():
    spec = GraphOfGroupsSpec.from_json(BS12)
    assert spec.orientation == ("e",)
    assert spec.generator("v") == "a"
    assert spec.stable_letter("e") == "t"


def test_zero_degree_is_rejected():
    with pytest.raises(SchemaError, match="k = 0"):
        GroupEdge("e", "E", "v", 0)
    with pytest.raises(SchemaError):
        GroupEdge("e", "E", "v", 1.5)


def test_tree_must_span():
    doc = {"vertices": ["u", "w"],
           "edges": [{"id": "e", "bar": "E", "origin": "u", "k": 2}, {"id": "E", "bar": "e", "origin": "w", "k": 3}],
           "tree": []}
    with pytest.raises(SchemaError, match="spanning tree"):
        GraphOfGroupsSpec.from_json(doc)


def test_loop_is_not_a_tree_edge():
    with pytest.raises(SchemaError, match="spanning tree"):
        GraphOfGroupsSpec.from_json(dict(BS12, tree=["e"]))


def test_inconsistent_bar():
    doc = {"vertices": ["v"], "edges": [{"id": "e", "bar": "E", "origin": "v", "k": 1},
                                        {"id": "E", "bar": "E", "origin": "v", "k": 2}]}
    with pytest.raises(SchemaError):
        GraphOfGroupsSpec.from_json(doc)


def test_generator_overrides_and_json():
    doc = {"vertices": [{"id": "u", "generator": "x"}, "w"],
           "edges": [{"id": "e", "bar": "E", "origin": "u", "k": 2, "letter": "s"},
                     {"id": "E", "bar": "e", "origin": "w", "k": 3}],
           "tree": ["E"]}
    spec = GraphOfGroupsSpec.from_json(doc)
    assert spec.generator("u") == "x" and spec.generator("w") == "a_w"
    assert spec.tree_pairs == ("e",) and spec.in_tree("E")
    assert GraphOfGroupsSpec.from_json(spec.to_json()) == spec


def test_document_sniffing():
    assert is_graph_of_groups(BS12)
    assert not is_graph_of_groups({"space": {"kind": "line"}})
    assert not is_graph_of_groups({"vertices": [{"id": "v", "space": {"kind": "circle"}}], "edges": []})
