"""Finite metric trees with exact rational edge lengths.

A tree is a finite connected acyclic graph whose edges carry positive
rational lengths.  Points live either at a vertex or strictly inside an
edge, addressed by a rational parameter in (0, 1); the parameter values
0 and 1 normalize to the incident vertex, so point equality is plain
structural equality.  Every pair of points is joined by a unique arc,
and all derived notions (distance, separation, hulls, retractions,
complement components) are computed exactly with `fractions.Fraction`.
No floating point enters any computation in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ConsistencyError, PreconditionError, StructureError

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    """Coerce ints, strings like '3/4', and Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise StructureError(f"not a rational: {value!r}") from exc
    raise StructureError(f"not a rational: {value!r}")


@dataclass(frozen=True, slots=True)
class TreePoint:
    """A point of a metric tree: a vertex, or an interior edge position.

    Exactly one representation is populated.  Interior points satisfy
    0 < t < 1 strictly; constructing boundary parameters goes through
    `MetricTree.edge_point`, which snaps them to the vertex form.
    """

    vertex: object = None
    edge: object = None
    t: Fraction | None = None

    def __post_init__(self):
        if (self.vertex is None) == (self.edge is None):
            raise StructureError("point must be a vertex or an edge position")
        if self.edge is not None:
            if not isinstance(self.t, Fraction) or not (ZERO < self.t < ONE):
                raise StructureError("edge position needs a Fraction t in (0,1)")

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def __repr__(self):
        if self.is_vertex:
            return f"TreePoint(vertex={self.vertex!r})"
        return f"TreePoint(edge={self.edge!r}, t={str(self.t)})"


def point_key(p: TreePoint):
    """Deterministic sort key for points; vertices order before edge points."""
    if p.is_vertex:
        return (0, str(p.vertex), ZERO)
    return (1, str(p.edge), p.t)


@dataclass(frozen=True, slots=True)
class _Edge:
    u: object
    w: object
    length: Fraction


class MetricTree:
    """Immutable finite metric tree.

    `edges` is an iterable of ``(edge_id, (u, w), length)`` triples; the
    orientation u -> w fixes which end the edge parameter 0 refers to.
    Vertex and edge ids may be any hashable values with distinct `str`
    forms (serialization uses strings throughout).
    """

    __slots__ = ("_vertices", "_edges", "_adj", "_dist", "_up", "_vkeys", "_ekeys")

    def __init__(self, vertices: Iterable, edges: Iterable):
        vs = list(vertices)
        if len(set(vs)) != len(vs):
            raise StructureError("duplicate vertex ids")
        if not vs:
            raise StructureError("a tree needs at least one vertex")
        vset = set(vs)
        edict: dict[object, _Edge] = {}
        adj: dict[object, list] = {v: [] for v in vs}
        for item in edges:
            try:
                eid, (u, w), length = item
            except (TypeError, ValueError) as exc:
                raise StructureError(f"bad edge record: {item!r}") from exc
            if eid in edict:
                raise StructureError(f"duplicate edge id: {eid!r}")
            if u not in vset or w not in vset:
                raise StructureError(f"edge {eid!r} references unknown vertex")
            if u == w:
                raise StructureError(f"edge {eid!r} is a self-loop")
            length = as_fraction(length)
            if length <= 0:
                raise StructureError(f"edge {eid!r} needs positive length")
            edict[eid] = _Edge(u, w, length)
            adj[u].append((eid, w))
            adj[w].append((eid, u))
        if len(edict) != len(vs) - 1:
            raise StructureError("edge count must be vertex count minus one")

        self._vertices = frozenset(vs)
        self._edges = edict
        self._adj = {v: tuple(sorted(nbrs, key=lambda it: str(it[0]))) for v, nbrs in adj.items()}
        self._vkeys = tuple(sorted(vs, key=str))
        self._ekeys = tuple(sorted(edict, key=str))

        # All-pairs vertex distances and parent pointers, one search per root.
        # Trees stay small here, so the quadratic table is cheap and makes
        # every later arc and distance query a table walk.
        dist: dict[object, dict] = {}
        up: dict[object, dict] = {}
        for root in self._vkeys:
            d = {root: ZERO}
            parent = {root: None}
            stack = [root]
            while stack:
                x = stack.pop()
                for eid, y in self._adj[x]:
                    if y not in d:
                        d[y] = d[x] + edict[eid].length
                        parent[y] = (x, eid)
                        stack.append(y)
            if len(d) != len(vs):
                raise StructureError("tree is not connected")
            dist[root] = d
            up[root] = parent
        self._dist = dist
        self._up = up

    # -- basic accessors -------------------------------------------------

    @property
    def vertex_ids(self) -> tuple:
        return self._vkeys

    @property
    def edge_ids(self) -> tuple:
        return self._ekeys

    def edge_ends(self, eid) -> tuple:
        e = self._edge(eid)
        return (e.u, e.w)

    def edge_length(self, eid) -> Fraction:
        return self._edge(eid).length

    def degree(self, v) -> int:
        if v not in self._vertices:
            raise StructureError(f"unknown vertex: {v!r}")
        return len(self._adj[v])

    def has_vertex(self, v) -> bool:
        return v in self._vertices

    def _edge(self, eid) -> _Edge:
        try:
            return self._edges[eid]
        except KeyError:
            raise StructureError(f"unknown edge: {eid!r}") from None

    def __eq__(self, other):
        if not isinstance(other, MetricTree):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    __hash__ = None

    def __repr__(self):
        return f"MetricTree({len(self._vertices)} vertices, {len(self._edges)} edges)"

    # -- points ----------------------------------------------------------

    def vertex_point(self, v) -> TreePoint:
        if v not in self._vertices:
            raise StructureError(f"unknown vertex: {v!r}")
        return TreePoint(vertex=v)

    def edge_point(self, eid, t) -> TreePoint:
        """Point at parameter t on an edge; t=0 and t=1 give the vertex form."""
        e = self._edge(eid)
        t = as_fraction(t)
        if t == ZERO:
            return TreePoint(vertex=e.u)
        if t == ONE:
            return TreePoint(vertex=e.w)
        if not (ZERO < t < ONE):
            raise StructureError(f"parameter {t} outside [0,1] on edge {eid!r}")
        return TreePoint(edge=eid, t=t)

    def validate_point(self, p: TreePoint) -> TreePoint:
        if not isinstance(p, TreePoint):
            raise StructureError(f"not a TreePoint: {p!r}")
        if p.is_vertex:
            if p.vertex not in self._vertices:
                raise StructureError(f"point references unknown vertex: {p.vertex!r}")
        else:
            self._edge(p.edge)
        return p

    # -- metric ----------------------------------------------------------

    def _vertex_dist(self, u, w) -> Fraction:
        return self._dist[u][w]

    def _point_exits(self, p: TreePoint):
        """Vertices a path may leave p through, with the offsets to reach them."""
        if p.is_vertex:
            return ((p.vertex, ZERO),)
        e = self._edge(p.edge)
        return ((e.u, p.t * e.length), (e.w, (ONE - p.t) * e.length))

    def distance(self, a: TreePoint, b: TreePoint) -> Fraction:
        self.validate_point(a)
        self.validate_point(b)
        if a == b:
            return ZERO
        if not a.is_vertex and not b.is_vertex and a.edge == b.edge:
            return abs(a.t - b.t) * self._edge(a.edge).length
        return min(
            oa + self._dist[va][vb] + ob
            for va, oa in self._point_exits(a)
            for vb, ob in self._point_exits(b)
        )

    def _vertex_path(self, u, w):
        """Edges from u to w as (edge_id, from_vertex, to_vertex) triples."""
        parent = self._up[u]
        steps = []
        x = w
        while x != u:
            px, eid = parent[x]
            steps.append((eid, px, x))
            x = px
        steps.reverse()
        return steps

    # -- arcs ------------------------------------------------------------

    def arc(self, a: TreePoint, b: TreePoint) -> "Arc":
        """The unique arc from a to b, as an ordered edge-segment traversal."""
        self.validate_point(a)
        self.validate_point(b)
        if a == b:
            return Arc(self, a, b, ())
        segs: list[tuple] = []
        start = a
        if not a.is_vertex:
            e = self._edge(a.edge)
            if not b.is_vertex and b.edge == a.edge:
                return Arc(self, a, b, ((a.edge, a.t, b.t),))
            # leave a's edge through the endpoint that lies toward b
            du = a.t * e.length + self.distance(self.vertex_point(e.u), b)
            dw = (ONE - a.t) * e.length + self.distance(self.vertex_point(e.w), b)
            if du < dw:
                segs.append((a.edge, a.t, ZERO))
                start = self.vertex_point(e.u)
            elif dw < du:
                segs.append((a.edge, a.t, ONE))
                start = self.vertex_point(e.w)
            else:
                raise ConsistencyError("ambiguous exit from an edge")
        # start is now a vertex
        tail: tuple | None = None
        target = b
        if not b.is_vertex:
            e = self._edge(b.edge)
            su = self._dist[start.vertex][e.u] + b.t * e.length
            sw = self._dist[start.vertex][e.w] + (ONE - b.t) * e.length
            if su < sw:
                tail = (b.edge, ZERO, b.t)
                target = self.vertex_point(e.u)
            elif sw < su:
                tail = (b.edge, ONE, b.t)
                target = self.vertex_point(e.w)
            else:
                raise ConsistencyError("ambiguous entry into an edge")
        for eid, fr, to in self._vertex_path(start.vertex, target.vertex):
            e = self._edges[eid]
            if fr == e.u:
                segs.append((eid, ZERO, ONE))
            else:
                segs.append((eid, ONE, ZERO))
        if tail is not None:
            segs.append(tail)
        return Arc(self, a, b, tuple(segs))

    def on_arc(self, x: TreePoint, a: TreePoint, b: TreePoint) -> bool:
        """Whether x lies on the closed arc [a, b]."""
        return self.distance(a, x) + self.distance(x, b) == self.distance(a, b)

    def separates(self, x: TreePoint, a: TreePoint, b: TreePoint) -> bool:
        """Whether x lies strictly inside the arc (a, b)."""
        self.validate_point(x)
        if x == a or x == b:
            raise PreconditionError("separation point must differ from the arc ends")
        if a == b:
            return False
        return self.on_arc(x, a, b)

    # -- local structure ---------------------------------------------------

    def order_of(self, x: TreePoint) -> tuple[int, str]:
        """Number of components the point's removal leaves, with its class."""
        self.validate_point(x)
        if not x.is_vertex:
            return (2, "cutpoint")
        deg = len(self._adj[x.vertex])
        if deg == 0:
            return (0, "isolated")
        if deg == 1:
            return (1, "endpoint")
        if deg == 2:
            return (2, "cutpoint")
        return (deg, "branchpoint")

    def full_subtree(self) -> "Subtree":
        return Subtree.build(
            self, [(e, ZERO, ONE) for e in self._ekeys], self._vkeys
        )

    def point_subtree(self, p: TreePoint) -> "Subtree":
        self.validate_point(p)
        if p.is_vertex:
            return Subtree.build(self, [], [p.vertex])
        return Subtree.build(self, [(p.edge, p.t, p.t)], [])

    def grid_points(self, per_edge: int = 3) -> tuple[TreePoint, ...]:
        """Vertices plus an evenly spaced rational sample inside each edge."""
        pts = [self.vertex_point(v) for v in self._vkeys]
        for eid in self._ekeys:
            for i in range(1, per_edge + 1):
                pts.append(self.edge_point(eid, Fraction(i, per_edge + 1)))
        return tuple(pts)

    # -- complements -------------------------------------------------------

    def components_minus_point(self, x: TreePoint) -> tuple["Component", ...]:
        """Path components of the tree with one point removed."""
        return self.components_minus(self.point_subtree(x))

    def components_minus(self, removed: "Subtree") -> tuple["Component", ...]:
        """Path components of the complement of a closed subset.

        Each component is returned through its closure together with the
        boundary points where that closure meets the removed set.
        """
        if removed.tree is not self and removed.tree != self:
            raise PreconditionError("subtree belongs to a different tree")
        parent: dict = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        units: list = []
        contacts: dict = {}

        free = [v for v in self._vkeys if v not in removed.vertices]
        for v in free:
            key = ("vx", v)
            parent[key] = key
            units.append(key)
            contacts[key] = []

        for eid in self._ekeys:
            e = self._edges[eid]
            ivs = removed.segments.get(eid, ())
            gaps = []
            prev = ZERO
            for lo, hi in ivs:
                if prev < lo:
                    gaps.append((prev, lo))
                prev = hi
            if prev < ONE:
                gaps.append((prev, ONE))
            for glo, ghi in gaps:
                key = ("seg", eid, glo, ghi)
                parent[key] = key
                units.append(key)
                cts = []
                if glo == ZERO:
                    if e.u in removed.vertices:
                        cts.append(self.vertex_point(e.u))
                    else:
                        union(key, ("vx", e.u))
                else:
                    cts.append(TreePoint(edge=eid, t=glo))
                if ghi == ONE:
                    if e.w in removed.vertices:
                        cts.append(self.vertex_point(e.w))
                    else:
                        union(key, ("vx", e.w))
                else:
                    cts.append(TreePoint(edge=eid, t=ghi))
                contacts[key] = cts

        groups: dict = {}
        for key in units:
            groups.setdefault(find(key), []).append(key)

        comps = []
        for members in groups.values():
            segs = []
            verts = []
            cts: list[TreePoint] = []
            rep = None
            for key in sorted(members, key=lambda k: (k[0], str(k[1]))):
                if key[0] == "vx":
                    verts.append(key[1])
                else:
                    _, eid, glo, ghi = key
                    segs.append((eid, glo, ghi))
                    if rep is None:
                        rep = self.edge_point(eid, (glo + ghi) / 2)
                cts.extend(contacts[key])
            closure = Subtree.build(self, segs, verts)
            boundary = tuple(sorted(set(cts), key=point_key))
            if rep is None:
                # a bare vertex with every incident edge removed cannot occur:
                # closed removal covering an edge carries both endpoints
                raise ConsistencyError("component without an interior segment")
            comps.append(Component(closure=closure, boundary=boundary, repr_point=rep))
        comps.sort(key=lambda c: c.closure.canonical_key)
        return tuple(comps)

    # -- hulls and retractions ----------------------------------------------

    def connected_hull(self, points: Sequence[TreePoint]) -> "Subtree":
        """Smallest closed connected set containing the given points."""
        pts = [self.validate_point(p) for p in points]
        if not pts:
            raise PreconditionError("hull needs at least one point")
        out = self.point_subtree(pts[0])
        for p in pts[1:]:
            out = out.union(self.arc(pts[0], p).as_subtree())
        return out

    def retract(self, target: "Subtree", z: TreePoint) -> TreePoint:
        """Nearest-point retraction onto a closed connected nonempty subset.

        Returns the unique w in the target with the half-open arc (w, z]
        disjoint from it; the identity on points already inside.
        """
        if target.is_empty():
            raise PreconditionError("cannot retract onto an empty set")
        if not target.is_connected():
            raise PreconditionError("retraction target must be connected")
        self.validate_point(z)
        if target.contains(z):
            return z
        anchor = target.corner_points()[0]
        path = self.arc(z, anchor)
        hits = target.intersect_arc(path)
        if not hits:
            raise ConsistencyError("retraction found no boundary hit")
        return path.point_at(hits[0][0])


class Arc:
    """An ordered traversal of the unique arc between two points.

    Segments are ``(edge_id, t_from, t_to)`` with exact rational
    parameters; a degenerate arc has no segments.  Arcs are created by
    `MetricTree.arc` and are immutable.
    """

    __slots__ = ("tree", "a", "b", "segments", "length", "_cums")

    def __init__(self, tree: MetricTree, a: TreePoint, b: TreePoint, segments: tuple):
        self.tree = tree
        self.a = a
        self.b = b
        self.segments = segments
        cums = [ZERO]
        total = ZERO
        for eid, t0, t1 in segments:
            total += abs(t1 - t0) * tree.edge_length(eid)
            cums.append(total)
        self.length = total
        self._cums = tuple(cums)

    def is_degenerate(self) -> bool:
        return not self.segments

    @property
    def segment_offsets(self) -> tuple:
        """Cumulative arclengths at segment boundaries, from 0 to length."""
        return self._cums

    def point_at(self, s: Fraction) -> TreePoint:
        """The point at arclength s from the start, 0 <= s <= length."""
        s = as_fraction(s)
        if s < ZERO or s > self.length:
            raise PreconditionError(f"arclength {s} outside [0, {self.length}]")
        if not self.segments:
            return self.a
        for i, (eid, t0, t1) in enumerate(self.segments):
            lo, hi = self._cums[i], self._cums[i + 1]
            if s <= hi:
                length = self.tree.edge_length(eid)
                if t1 >= t0:
                    t = t0 + (s - lo) / length
                else:
                    t = t0 - (s - lo) / length
                return self.tree.edge_point(eid, t)
        raise ConsistencyError("arclength walk fell off the arc")

    def contains(self, x: TreePoint) -> bool:
        d = self.tree.distance
        return d(self.a, x) + d(x, self.b) == self.length

    def arclength_of(self, x: TreePoint) -> Fraction:
        """Arclength position of a point known to lie on the arc."""
        if not self.contains(x):
            raise PreconditionError("point does not lie on the arc")
        return self.tree.distance(self.a, x)

    def reversed(self) -> "Arc":
        segs = tuple((eid, t1, t0) for eid, t0, t1 in reversed(self.segments))
        return Arc(self.tree, self.b, self.a, segs)

    def as_subtree(self) -> "Subtree":
        segs = []
        verts = []
        for p in (self.a, self.b):
            if p.is_vertex:
                verts.append(p.vertex)
        for eid, t0, t1 in self.segments:
            lo, hi = (t0, t1) if t0 <= t1 else (t1, t0)
            segs.append((eid, lo, hi))
        if not segs and not self.a.is_vertex:
            segs.append((self.a.edge, self.a.t, self.a.t))
        return Subtree.build(self.tree, segs, verts)

    def __repr__(self):
        return f"Arc({self.a!r} -> {self.b!r}, length={str(self.length)})"


class Subtree:
    """A closed subset of a tree in canonical interval form.

    Per edge the set is a disjoint union of closed rational intervals
    (merged and sorted; a full edge is [0, 1]); vertices are carried in
    a separate set, and any interval endpoint lying at an edge end has
    its vertex included, so the represented set is genuinely closed.
    The class itself tolerates disconnected values -- fixed-point sets
    of badly behaved maps are honest unions -- and `is_connected`
    reports which case holds.
    """

    __slots__ = ("tree", "segments", "vertices", "_key")

    def __init__(self, tree: MetricTree, segments: Mapping, vertices: frozenset, _key):
        self.tree = tree
        self.segments = segments
        self.vertices = vertices
        self._key = _key

    @classmethod
    def build(cls, tree: MetricTree, segments: Iterable, vertices: Iterable) -> "Subtree":
        """Canonicalize raw interval and vertex data into a Subtree."""
        by_edge: dict[object, list] = {}
        for eid, lo, hi in segments:
            tree._edge(eid)
            lo = as_fraction(lo)
            hi = as_fraction(hi)
            if not (ZERO <= lo <= hi <= ONE):
                raise StructureError(f"bad interval [{lo}, {hi}] on edge {eid!r}")
            by_edge.setdefault(eid, []).append((lo, hi))
        verts = set()
        for v in vertices:
            if not tree.has_vertex(v):
                raise StructureError(f"unknown vertex: {v!r}")
            verts.add(v)
        canon: dict[object, tuple] = {}
        for eid, ivs in by_edge.items():
            ivs.sort()
            merged: list[list] = []
            for lo, hi in ivs:
                if merged and lo <= merged[-1][1]:
                    merged[-1][1] = max(merged[-1][1], hi)
                else:
                    merged.append([lo, hi])
            u, w = tree.edge_ends(eid)
            out = []
            for lo, hi in merged:
                if lo == ZERO:
                    verts.add(u)
                if hi == ONE:
                    verts.add(w)
                if lo == hi and (lo == ZERO or hi == ONE):
                    continue  # endpoint degenerates live in the vertex set
                out.append((lo, hi))
            if out:
                canon[eid] = tuple(out)
        key = (
            tuple(sorted(((str(e), ivs) for e, ivs in canon.items()))),
            tuple(sorted(verts, key=str)),
        )
        return cls(tree, canon, frozenset(verts), key)

    @classmethod
    def empty(cls, tree: MetricTree) -> "Subtree":
        return cls.build(tree, [], [])

    @property
    def canonical_key(self):
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Subtree):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        nseg = sum(len(v) for v in self.segments.values())
        return f"Subtree({len(self.vertices)} vertices, {nseg} segments)"

    def is_empty(self) -> bool:
        return not self.vertices and not self.segments

    def contains(self, p: TreePoint) -> bool:
        if p.is_vertex:
            return p.vertex in self.vertices
        for lo, hi in self.segments.get(p.edge, ()):
            if lo <= p.t <= hi:
                return True
        return False

    def contains_subtree(self, other: "Subtree") -> bool:
        if not other.vertices <= self.vertices:
            return False
        for eid, ivs in other.segments.items():
            mine = self.segments.get(eid, ())
            for lo, hi in ivs:
                if not any(a <= lo and hi <= b for a, b in mine):
                    return False
        return True

    def union(self, other: "Subtree") -> "Subtree":
        segs = [(e, lo, hi) for e, ivs in self.segments.items() for lo, hi in ivs]
        segs += [(e, lo, hi) for e, ivs in other.segments.items() for lo, hi in ivs]
        return Subtree.build(self.tree, segs, self.vertices | other.vertices)

    def intersect(self, other: "Subtree") -> "Subtree":
        segs = []
        for eid, ivs in self.segments.items():
            theirs = other.segments.get(eid, ())
            for lo, hi in ivs:
                for a, b in theirs:
                    lo2, hi2 = max(lo, a), min(hi, b)
                    if lo2 <= hi2:
                        segs.append((eid, lo2, hi2))
        return Subtree.build(self.tree, segs, self.vertices & other.vertices)

    def measure(self) -> Fraction:
        total = ZERO
        for eid, ivs in self.segments.items():
            length = self.tree.edge_length(eid)
            for lo, hi in ivs:
                total += (hi - lo) * length
        return total

    def is_connected(self) -> bool:
        """Union-find over segments and vertices; empty counts as connected."""
        parent: dict = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for v in self.vertices:
            parent[("vx", v)] = ("vx", v)
        for eid, ivs in self.segments.items():
            u, w = self.tree.edge_ends(eid)
            for lo, hi in ivs:
                key = ("seg", eid, lo, hi)
                parent[key] = key
                if lo == ZERO:
                    union(key, ("vx", u))
                if hi == ONE:
                    union(key, ("vx", w))
        roots = {find(k) for k in parent}
        return len(roots) <= 1

    def corner_points(self) -> tuple[TreePoint, ...]:
        """Vertices and interval endpoints, as points, in deterministic order."""
        pts = {self.tree.vertex_point(v) for v in self.vertices}
        for eid, ivs in self.segments.items():
            for lo, hi in ivs:
                pts.add(self.tree.edge_point(eid, lo))
                pts.add(self.tree.edge_point(eid, hi))
        return tuple(sorted(pts, key=point_key))

    def intersect_arc(self, arc: Arc) -> tuple:
        """Intersection with an arc, as closed arclength intervals from arc.a.

        The result is sorted and merged; for a connected subtree it has at
        most one entry, which is how closedness on arcs gets checked.
        """
        hits: list[tuple] = []
        if arc.is_degenerate():
            return ((ZERO, ZERO),) if self.contains(arc.a) else ()
        c = ZERO
        for eid, t0, t1 in arc.segments:
            length = self.tree.edge_length(eid)
            seglen = abs(t1 - t0) * length
            lo_t, hi_t = (t0, t1) if t0 <= t1 else (t1, t0)
            for lo, hi in self.segments.get(eid, ()):
                a, b = max(lo, lo_t), min(hi, hi_t)
                if a > b:
                    continue
                if t0 <= t1:
                    hits.append((c + (a - t0) * length, c + (b - t0) * length))
                else:
                    hits.append((c + (t0 - b) * length, c + (t0 - a) * length))
            for tt, pos in ((t0, c), (t1, c + seglen)):
                if tt == ZERO or tt == ONE:
                    u, w = self.tree.edge_ends(eid)
                    v = u if tt == ZERO else w
                    if v in self.vertices:
                        hits.append((pos, pos))
            c += seglen
        hits.sort()
        merged: list[list] = []
        for lo, hi in hits:
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return tuple((lo, hi) for lo, hi in merged)

    def to_chart(self) -> "SubtreeChart":
        return SubtreeChart(self)


@dataclass(frozen=True, slots=True)
class Component:
    """A path component of a complement, carried by its closure.

    The open component itself is ``closure`` minus the ``boundary``
    points where it touches the removed set.
    """

    closure: Subtree
    boundary: tuple
    repr_point: TreePoint

    def contains(self, p: TreePoint) -> bool:
        return self.closure.contains(p) and p not in self.boundary

    @property
    def attachment(self) -> TreePoint:
        if len(self.boundary) != 1:
            raise ConsistencyError(
                f"component touches the removed set at {len(self.boundary)} points"
            )
        return self.boundary[0]


class SubtreeChart:
    """A connected subtree materialized as a metric tree of its own.

    Chart vertices are the subtree's corner points; chart edges are the
    interval pieces, isometrically parameterized.  `to_hull` and
    `to_ambient` convert points both ways exactly.
    """

    __slots__ = ("subtree", "tree", "_amb_of_vertex", "_host_of_edge", "_vertex_of_point")

    def __init__(self, subtree: Subtree):
        if subtree.is_empty():
            raise PreconditionError("cannot chart an empty subtree")
        if not subtree.is_connected():
            raise PreconditionError("cannot chart a disconnected subtree")
        host = subtree.tree
        amb_of_vertex: dict = {}
        vertex_of_point: dict = {}

        def node_for(eid, t) -> str:
            if t == ZERO or t == ONE:
                u, w = host.edge_ends(eid)
                v = u if t == ZERO else w
                name = f"v:{v}"
                pt = host.vertex_point(v)
            else:
                name = f"p:{eid}:{t}"
                pt = TreePoint(edge=eid, t=t)
            amb_of_vertex[name] = pt
            vertex_of_point[pt] = name
            return name

        for v in sorted(subtree.vertices, key=str):
            node_for_name = f"v:{v}"
            amb_of_vertex[node_for_name] = host.vertex_point(v)
            vertex_of_point[host.vertex_point(v)] = node_for_name

        edges = []
        host_of_edge: dict = {}
        for eid in sorted(subtree.segments, key=str):
            for lo, hi in subtree.segments[eid]:
                if lo == hi:
                    node_for(eid, lo)
                    continue
                a = node_for(eid, lo)
                b = node_for(eid, hi)
                name = f"s:{eid}:{lo}"
                edges.append((name, (a, b), (hi - lo) * host.edge_length(eid)))
                host_of_edge[name] = (eid, lo, hi)

        self.subtree = subtree
        self.tree = MetricTree(sorted(amb_of_vertex, key=str), edges)
        self._amb_of_vertex = amb_of_vertex
        self._host_of_edge = host_of_edge
        self._vertex_of_point = vertex_of_point

    def to_ambient(self, p: TreePoint) -> TreePoint:
        self.tree.validate_point(p)
        if p.is_vertex:
            return self._amb_of_vertex[p.vertex]
        eid, lo, hi = self._host_of_edge[p.edge]
        return self.subtree.tree.edge_point(eid, lo + p.t * (hi - lo))

    def to_hull(self, p: TreePoint) -> TreePoint:
        """Convert an ambient point of the subtree into chart coordinates."""
        if p in self._vertex_of_point:
            return self.tree.vertex_point(self._vertex_of_point[p])
        if p.is_vertex or not self.subtree.contains(p):
            raise PreconditionError(f"point {p!r} is not in the subtree")
        for lo, hi in self.subtree.segments.get(p.edge, ()):
            if lo <= p.t <= hi:
                name = f"s:{p.edge}:{lo}"
                return self.tree.edge_point(name, (p.t - lo) / (hi - lo))
        raise PreconditionError(f"point {p!r} is not in the subtree")
