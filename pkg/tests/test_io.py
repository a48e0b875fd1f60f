import json
from fractions import Fraction as F

import pytest

from dendrodyn import MetricTree, PLTreeMap, StructureError, build_fixture
from dendrodyn.fixtures import FIXTURE_KINDS
from dendrodyn.io import (
    dump_instance,
    fraction_from_str,
    fraction_to_str,
    load_instance,
    point_from_json,
    point_to_json,
    save_instance_file,
    load_instance_file,
    subtree_to_json,
    tree_from_json,
    tree_to_json,
)


def interval():
    return MetricTree(["v0", "v1"], [("e", ("v0", "v1"), 1)])


def tent_on(t):
    p0, p1 = t.vertex_point("v0"), t.vertex_point("v1")
    return PLTreeMap(t, {"e": [(0, p0), (F(1, 2), p1), (1, p0)]})


def test_fraction_strings_lowest_terms():
    assert fraction_to_str(F(2, 4)) == "1/2"
    assert fraction_to_str(F(3)) == "3/1"
    assert fraction_to_str(0) == "0/1"
    assert fraction_from_str("7/21") == F(1, 3)
    assert fraction_from_str("5") == F(5)


def test_fraction_rejects_garbage():
    with pytest.raises(StructureError):
        fraction_from_str("a/b")
    with pytest.raises(StructureError):
        fraction_from_str("1/0")
    with pytest.raises(StructureError):
        fraction_from_str([1, 2])


def test_point_round_trip():
    t = interval()
    for p in t.grid_points(3):
        obj = point_to_json(p)
        assert point_from_json(obj, t) == p
    assert point_to_json(t.vertex_point("v0")) == {"vertex": "v0"}
    assert point_to_json(t.edge_point("e", F(1, 3))) == {"edge": "e", "t": "1/3"}


def test_point_parse_errors():
    t = interval()
    with pytest.raises(StructureError):
        point_from_json({"vertex": "nope"}, t)
    with pytest.raises(StructureError):
        point_from_json({"edge": "nope", "t": "1/2"}, t)
    with pytest.raises(StructureError):
        point_from_json({"something": 1}, t)
    with pytest.raises(StructureError):
        point_from_json("v0", t)


def test_tree_json_shape():
    t = interval()
    obj = tree_to_json(t)
    assert obj == {
        "vertices": ["v0", "v1"],
        "edges": [{"id": "e", "ends": ["v0", "v1"], "length": "1/1"}],
    }
    assert tree_from_json(obj) == t


def test_tree_json_rejects_bad_input():
    with pytest.raises(StructureError):
        tree_from_json([1, 2])
    with pytest.raises(StructureError):
        tree_from_json({"vertices": ["a"]})
    with pytest.raises(StructureError):
        tree_from_json({"vertices": ["a"], "edges": [{"id": "e"}]})
    with pytest.raises(StructureError):
        tree_from_json(
            {"vertices": ["a", "b"], "edges": [{"id": "e", "ends": ["a"], "length": "1/1"}]}
        )


def test_non_string_ids_rejected_on_dump():
    t = MetricTree([0, 1], [("e", (0, 1), 1)])
    with pytest.raises(StructureError):
        tree_to_json(t)


def test_map_round_trip_is_bit_exact():
    t = interval()
    f = tent_on(t)
    text = dump_instance(t, f)
    t2, f2 = load_instance(text)
    assert t2 == t
    assert f2.equals(f)
    assert dump_instance(t2, f2) == text


def test_every_fixture_round_trips_bit_exactly():
    for kind in FIXTURE_KINDS:
        params = {"seed": "11"} if kind.startswith("random") else None
        tree, f = build_fixture(kind, params)
        text = dump_instance(tree, f)
        tree2, f2 = load_instance(text)
        assert tree2 == tree, kind
        assert f2.equals(f), kind
        assert dump_instance(tree2, f2) == text, kind


def test_tree_only_instance_loads_with_no_map():
    t = interval()
    text = dump_instance(t)
    t2, f2 = load_instance(text)
    assert t2 == t
    assert f2 is None
    assert dump_instance(t2) == text


def test_load_rejects_mismatched_vertex_images():
    t = interval()
    f = tent_on(t)
    obj = json.loads(dump_instance(t, f))
    obj["vertex_images"]["v0"] = {"vertex": "v1"}
    with pytest.raises(StructureError):
        load_instance(json.dumps(obj))


def test_load_rejects_missing_pieces_and_images():
    t = interval()
    f = tent_on(t)
    base = json.loads(dump_instance(t, f))

    broken = dict(base)
    broken["edge_pieces"] = {}
    with pytest.raises(StructureError):
        load_instance(json.dumps(broken))

    broken = dict(base)
    broken["vertex_images"] = {"v0": {"vertex": "v0"}}
    with pytest.raises(StructureError):
        load_instance(json.dumps(broken))

    broken = json.loads(dump_instance(t, f))
    broken["edge_pieces"]["e"][0] = {"t": "0/1"}
    with pytest.raises(StructureError):
        load_instance(json.dumps(broken))


def test_load_rejects_syntax_errors_with_position():
    with pytest.raises(StructureError, match="line"):
        load_instance('{"vertices": [')


def test_single_vertex_instance_round_trips():
    t = MetricTree(["only"], [])
    f = PLTreeMap(t, {"only": t.vertex_point("only")})
    text = dump_instance(t, f)
    t2, f2 = load_instance(text)
    assert t2 == t
    assert f2.equals(f)
    assert dump_instance(t2, f2) == text


def test_file_round_trip(tmp_path):
    tree, f = build_fixture("rotation", {"arms": "4"})
    path = tmp_path / "rot.json"
    save_instance_file(path, tree, f)
    tree2, f2 = load_instance_file(path)
    assert tree2 == tree
    assert f2.equals(f)


def test_subtree_json_is_sorted_and_exact():
    tree, f = build_fixture("tent")
    sub = f.fixed_point_set()
    obj = subtree_to_json(sub)
    assert obj == {"vertices": ["v0"], "segments": {"e": [["2/3", "2/3"]]}}
