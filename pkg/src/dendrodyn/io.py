"""Exact JSON serialization for trees, points, and maps.

One instance is one JSON object.  A bare tree carries "vertices" and
"edges"; adding a map contributes "vertex_images" and "edge_pieces".
Every rational is a "p/q" string in lowest terms, so values survive a
round trip bit for bit; nothing is ever written as a float.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import StructureError
from .plmap import PLTreeMap
from .tree import MetricTree, Subtree, TreePoint


def fraction_to_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def fraction_from_str(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise StructureError(f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise StructureError(f"not a rational: {s!r}") from None


def point_to_json(p: TreePoint) -> dict:
    if p.is_vertex:
        return {"vertex": p.vertex}
    return {"edge": p.edge, "t": fraction_to_str(p.t)}


def point_from_json(obj, tree: MetricTree) -> TreePoint:
    if not isinstance(obj, dict):
        raise StructureError(f"a point must be an object, got {obj!r}")
    if "vertex" in obj:
        if not tree.has_vertex(obj["vertex"]):
            raise StructureError(f"unknown vertex {obj['vertex']!r}")
        return tree.vertex_point(obj["vertex"])
    if "edge" in obj:
        eid = obj["edge"]
        if eid not in tree.edge_ids:
            raise StructureError(f"unknown edge {eid!r}")
        return tree.edge_point(eid, fraction_from_str(obj.get("t", "0/1")))
    raise StructureError(f"a point needs 'vertex' or 'edge', got {sorted(obj)}")


def tree_to_json(tree: MetricTree) -> dict:
    bad = [x for x in (*tree.vertex_ids, *tree.edge_ids) if not isinstance(x, str)]
    if bad:
        raise StructureError(f"the file format uses string ids, got {bad[0]!r}")
    return {
        "vertices": list(tree.vertex_ids),
        "edges": [
            {
                "id": eid,
                "ends": list(tree.edge_ends(eid)),
                "length": fraction_to_str(tree.edge_length(eid)),
            }
            for eid in tree.edge_ids
        ],
    }


def tree_from_json(obj) -> MetricTree:
    if not isinstance(obj, dict):
        raise StructureError("an instance must be a JSON object")
    for key in ("vertices", "edges"):
        if key not in obj:
            raise StructureError(f"instance is missing {key!r}")
    edges = []
    for i, e in enumerate(obj["edges"]):
        try:
            eid, ends, length = e["id"], e["ends"], e["length"]
        except (TypeError, KeyError) as exc:
            raise StructureError(f"edge #{i} is missing {exc}") from None
        if len(ends) != 2:
            raise StructureError(f"edge {eid!r} needs exactly two ends")
        edges.append((eid, (ends[0], ends[1]), fraction_from_str(length)))
    return MetricTree(obj["vertices"], edges)


def subtree_to_json(sub: Subtree) -> dict:
    return {
        "vertices": sorted(sub.vertices, key=str),
        "segments": {
            str(eid): [[fraction_to_str(lo), fraction_to_str(hi)] for lo, hi in ivs]
            for eid, ivs in sorted(sub.segments.items(), key=lambda kv: str(kv[0]))
        },
    }


def map_to_json(f: PLTreeMap) -> dict:
    out = tree_to_json(f.domain)
    out["vertex_images"] = {
        v: point_to_json(f.vertex_image(v)) for v in f.domain.vertex_ids
    }
    out["edge_pieces"] = {
        eid: [
            {"t": fraction_to_str(t), "image": point_to_json(p)}
            for t, p in f.breakpoints(eid)
        ]
        for eid in f.domain.edge_ids
    }
    return out


def map_from_json(obj) -> tuple:
    tree = tree_from_json(obj)
    if "edge_pieces" not in obj and "vertex_images" not in obj:
        return tree, None
    vimg_raw = obj.get("vertex_images", {})
    vimg = {v: point_from_json(p, tree) for v, p in vimg_raw.items()}
    for v in tree.vertex_ids:
        if v not in vimg:
            raise StructureError(f"vertex {v!r} has no image")

    if len(tree.edge_ids) == 0:
        only = tree.vertex_ids[0]
        return tree, PLTreeMap(tree, {only: vimg[only]})

    pieces_raw = obj.get("edge_pieces", {})
    table = {}
    for eid in tree.edge_ids:
        if eid not in pieces_raw:
            raise StructureError(f"edge {eid!r} has no breakpoint list")
        bps = []
        for bp in pieces_raw[eid]:
            if not isinstance(bp, dict) or "t" not in bp or "image" not in bp:
                raise StructureError(f"bad breakpoint on edge {eid!r}: {bp!r}")
            bps.append((fraction_from_str(bp["t"]), point_from_json(bp["image"], tree)))
        table[eid] = bps
    f = PLTreeMap(tree, table)
    for v in tree.vertex_ids:
        if f.vertex_image(v) != vimg[v]:
            raise StructureError(
                f"vertex_images disagrees with edge_pieces at vertex {v!r}"
            )
    return tree, f


def dump_instance(tree: MetricTree, f: PLTreeMap | None = None) -> str:
    obj = tree_to_json(tree) if f is None else map_to_json(f)
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_instance(text: str) -> tuple:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"not valid JSON: {exc}") from None
    return map_from_json(obj)


def save_instance_file(path, tree: MetricTree, f: PLTreeMap | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_instance(tree, f))


def load_instance_file(path) -> tuple:
    with open(path, encoding="utf-8") as fh:
        return load_instance(fh.read())
