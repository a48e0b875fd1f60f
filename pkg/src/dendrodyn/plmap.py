"""Piecewise-linear maps between finite metric trees.

A map is described per domain edge by breakpoints 0 = t_0 < ... < t_k = 1
with a target point at each; between consecutive breakpoints the edge
piece traverses the unique arc joining the two images at constant speed.
Composition, iteration, injectivity, and fixed-point sets are computed
exactly, so every answer here is a decision, not an approximation.

Maps whose domain and codomain differ appear when a map is restricted to
a subtree materialized as a chart (`Subtree.to_chart`); the public
entry points `extend_through_hull`, `project_onto`, `iterated_extension`
and `find_periodic_in_hull` combine those restrictions with nearest-point
projections to follow a map through a growing chain of hulls.
"""

from __future__ import annotations

import logging
from fractions import Fraction

from .errors import (
    ConsistencyError,
    PreconditionError,
    ResourceLimitError,
    StructureError,
)
from .tree import (
    ONE,
    ZERO,
    Arc,
    MetricTree,
    Subtree,
    SubtreeChart,
    TreePoint,
    as_fraction,
    point_key,
)

logger = logging.getLogger(__name__)

DEFAULT_PIECE_CAP = 100_000


class _Piece:
    """One linear piece: a domain parameter window and its image arc."""

    __slots__ = ("edge", "t0", "t1", "p0", "p1", "arc")

    def __init__(self, edge, t0, t1, p0, p1, arc):
        self.edge = edge
        self.t0 = t0
        self.t1 = t1
        self.p0 = p0
        self.p1 = p1
        self.arc = arc

    @property
    def is_constant(self) -> bool:
        return self.p0 == self.p1

    def param_at_arclength(self, s: Fraction) -> Fraction:
        return self.t0 + (self.t1 - self.t0) * s / self.arc.length

    def arclength_at_param(self, t: Fraction) -> Fraction:
        return self.arc.length * (t - self.t0) / (self.t1 - self.t0)


class PLTreeMap:
    """An exact piecewise-linear map from one metric tree to another.

    `table` maps each domain edge id to its breakpoint list; breakpoints
    are ``(t, point)`` pairs with the point living in the codomain.  The
    two trees coincide for self-maps, which is the common case.
    """

    __slots__ = ("domain", "codomain", "_table", "_vimg", "_pieces", "_image")

    def __init__(self, domain: MetricTree, table, codomain: MetricTree | None = None):
        codomain = domain if codomain is None else codomain
        clean: dict = {}
        vimg: dict = {}
        for eid in domain.edge_ids:
            if eid not in table:
                raise StructureError(f"no breakpoints for edge {eid!r}")
            raw = list(table[eid])
            if len(raw) < 2:
                raise StructureError(f"edge {eid!r} needs at least two breakpoints")
            bps = []
            for t, p in raw:
                t = as_fraction(t)
                codomain.validate_point(p)
                bps.append((t, p))
            if bps[0][0] != ZERO or bps[-1][0] != ONE:
                raise StructureError(f"edge {eid!r} breakpoints must span [0, 1]")
            for (ta, _), (tb, _) in zip(bps, bps[1:]):
                if not ta < tb:
                    raise StructureError(f"edge {eid!r} breakpoints must increase")
            clean[eid] = tuple(bps)
            u, w = domain.edge_ends(eid)
            for v, img in ((u, bps[0][1]), (w, bps[-1][1])):
                if vimg.setdefault(v, img) != img:
                    raise StructureError(f"edges disagree on the image of vertex {v!r}")
        if len(domain.edge_ids) == 0:
            # a single-vertex domain is a bare point assignment
            only = domain.vertex_ids[0]
            img = table.get(only) if isinstance(table, dict) else None
            if img is None:
                raise StructureError("single-vertex domain needs its vertex image")
            codomain.validate_point(img)
            vimg[only] = img
        else:
            extra = set(table) - set(domain.edge_ids)
            if extra:
                raise StructureError(
                    f"breakpoints for unknown edges: {sorted(map(str, extra))}"
                )

        pieces = []
        for eid in domain.edge_ids:
            bps = clean[eid]
            for (t0, p0), (t1, p1) in zip(bps, bps[1:]):
                pieces.append(_Piece(eid, t0, t1, p0, p1, codomain.arc(p0, p1)))

        self.domain = domain
        self.codomain = codomain
        self._table = clean
        self._vimg = vimg
        self._pieces = tuple(pieces)
        self._image = None

    # -- inspection --------------------------------------------------------

    @property
    def piece_count(self) -> int:
        return len(self._pieces)

    def breakpoints(self, eid) -> tuple:
        self.domain._edge(eid)
        return self._table[eid]

    @property
    def is_self_map(self) -> bool:
        return self.domain == self.codomain

    def __repr__(self):
        kind = "self-map" if self.is_self_map else "map"
        return f"PLTreeMap({kind}, {self.piece_count} pieces)"

    # -- evaluation ---------------------------------------------------------

    def vertex_image(self, v) -> TreePoint:
        if v not in self._vimg:
            raise StructureError(f"unknown vertex: {v!r}")
        return self._vimg[v]

    def evaluate(self, p: TreePoint) -> TreePoint:
        self.domain.validate_point(p)
        if p.is_vertex:
            return self._vimg[p.vertex]
        for (t0, p0), (t1, p1) in zip(self._table[p.edge], self._table[p.edge][1:]):
            if t0 <= p.t <= t1:
                if p0 == p1:
                    return p0
                arc = self.codomain.arc(p0, p1)
                return arc.point_at(arc.length * (p.t - t0) / (t1 - t0))
        raise ConsistencyError("parameter escaped the breakpoint grid")

    def orbit(self, p: TreePoint, length: int) -> list:
        """p, f(p), ..., f^length(p); requires a self-map."""
        self._require_self_map()
        out = [p]
        for _ in range(length):
            out.append(self.evaluate(out[-1]))
        return out

    def image(self) -> Subtree:
        """The exact image of the whole domain, as a subtree of the codomain."""
        if self._image is None:
            segs = []
            verts = []
            for piece in self._pieces:
                sub = piece.arc.as_subtree()
                segs += [(e, lo, hi) for e, ivs in sub.segments.items() for lo, hi in ivs]
                verts += list(sub.vertices)
            for img in self._vimg.values():
                if img.is_vertex:
                    verts.append(img.vertex)
                else:
                    segs.append((img.edge, img.t, img.t))
            self._image = Subtree.build(self.codomain, segs, verts)
        return self._image

    def image_of_arc(self, arc: Arc) -> Subtree:
        """Exact image of an arc of the domain."""
        if arc.is_degenerate():
            return self.codomain.point_subtree(self.evaluate(arc.a))
        out = Subtree.empty(self.codomain)
        for eid, t0, t1 in arc.segments:
            lo, hi = (t0, t1) if t0 <= t1 else (t1, t0)
            for piece in self._pieces:
                if piece.edge != eid:
                    continue
                a, b = max(lo, piece.t0), min(hi, piece.t1)
                if a > b or (a == b and not (a == lo == hi)):
                    continue
                pa = self._eval_in_piece(piece, a)
                pb = self._eval_in_piece(piece, b)
                out = out.union(self.codomain.arc(pa, pb).as_subtree())
                out = out.union(self.codomain.point_subtree(pa))
        return out

    def image_of_subtree(self, sub: Subtree) -> Subtree:
        """Exact image of a closed subtree of the domain."""
        out = Subtree.empty(self.codomain)
        for v in sub.vertices:
            img = self.evaluate(self.domain.vertex_point(v))
            out = out.union(self.codomain.point_subtree(img))
        for eid, intervals in sub.segments.items():
            for lo, hi in intervals:
                a = self.domain.edge_point(eid, lo)
                b = self.domain.edge_point(eid, hi)
                if a == b:
                    out = out.union(self.codomain.point_subtree(self.evaluate(a)))
                else:
                    out = out.union(self.image_of_arc(self.domain.arc(a, b)))
        return out

    def _eval_in_piece(self, piece: _Piece, t: Fraction) -> TreePoint:
        if piece.is_constant:
            return piece.p0
        return piece.arc.point_at(piece.arclength_at_param(t))

    def _require_self_map(self):
        if not self.is_self_map:
            raise PreconditionError("operation needs a self-map")

    # -- normal form and equality --------------------------------------------

    def normalize(self) -> "PLTreeMap":
        """Remove breakpoints where adjacent pieces continue the same traversal.

        A breakpoint B between pieces A->B and B->C is redundant when B
        lies on the arc [A, C] and both pieces run at the same speed;
        the merged piece then traverses [A, C] at constant speed.
        """
        d = self.codomain.distance
        table: dict = {}
        changed = False
        for eid, bps in self._table.items():
            out = [bps[0]]
            for t, p in bps[1:]:
                while len(out) >= 2:
                    t0, a = out[-2]
                    t1, b = out[-1]
                    dab, dbc = d(a, b), d(b, p)
                    if dab + dbc != d(a, p):
                        break
                    if dab * (t - t1) != dbc * (t1 - t0):
                        break
                    out.pop()
                    changed = True
                out.append((t, p))
            table[eid] = tuple(out)
        if not changed:
            return self
        return PLTreeMap(self.domain, table, self.codomain)

    def equals(self, other: "PLTreeMap") -> bool:
        """Pointwise equality, decided through normal forms."""
        if not isinstance(other, PLTreeMap):
            raise PreconditionError("can only compare PL maps")
        if self.domain != other.domain or self.codomain != other.codomain:
            return False
        a = self.normalize()
        b = other.normalize()
        return a._table == b._table and a._vimg == b._vimg

    def is_identity(self) -> bool:
        return self.is_self_map and self.equals(identity_map(self.domain))

    # -- injectivity -----------------------------------------------------------

    def is_injective(self) -> tuple:
        """Exact decision, with a witness pair of distinct points on failure.

        A constant piece is immediately non-injective.  Otherwise every
        pair of pieces whose image arcs meet is examined at one canonical
        shared image point; comparing the exact preimages there finds a
        collision whenever any exists.
        """
        for piece in self._pieces:
            if piece.is_constant:
                x1 = self.domain.edge_point(piece.edge, piece.t0)
                x2 = self.domain.edge_point(piece.edge, piece.t1)
                return (False, (x1, x2))
        subs = [p.arc.as_subtree() for p in self._pieces]
        n = len(self._pieces)
        for i in range(n):
            for j in range(i + 1, n):
                meet = subs[i].intersect(subs[j])
                if meet.is_empty():
                    continue
                q = _canonical_point(self.codomain, meet)
                xi = self._preimage_in_piece(self._pieces[i], q)
                xj = self._preimage_in_piece(self._pieces[j], q)
                if xi != xj:
                    if self.evaluate(xi) != self.evaluate(xj):
                        raise ConsistencyError("witness images disagree")
                    return (False, (xi, xj))
        return (True, None)

    def _preimage_in_piece(self, piece: _Piece, q: TreePoint) -> TreePoint:
        s = piece.arc.arclength_of(q)
        return self.domain.edge_point(piece.edge, piece.param_at_arclength(s))

    # -- fixed points ------------------------------------------------------------

    def fixed_point_set(self) -> Subtree:
        """All points with f(x) = x, exactly; may be empty or disconnected."""
        self._require_self_map()
        tree = self.domain
        segs = []
        verts = []
        for v, img in self._vimg.items():
            if img == tree.vertex_point(v):
                verts.append(v)
        for piece in self._pieces:
            eid = piece.edge
            if piece.is_constant:
                u = _param_on_edge(tree, piece.p0, eid)
                if u is not None and piece.t0 <= u <= piece.t1:
                    segs.append((eid, u, u))
                continue
            length = tree.edge_length(eid)
            rate = piece.arc.length / (piece.t1 - piece.t0)
            offsets = piece.arc.segment_offsets
            for k, (aeid, u0, u1) in enumerate(piece.arc.segments):
                if aeid != eid:
                    continue
                c = offsets[k]
                lam = offsets[k + 1] - c
                sign = 1 if u1 > u0 else -1
                # u(t) = u0 + sign*(rate*(t - t0) - c)/length on the window
                alpha = Fraction(sign) * rate / length
                beta = u0 - Fraction(sign) * (rate * piece.t0 + c) / length
                x_lo = piece.t0 + c / rate
                x_hi = piece.t0 + (c + lam) / rate
                if alpha == 1:
                    if beta == 0:
                        segs.append((eid, x_lo, x_hi))
                else:
                    x = beta / (1 - alpha)
                    if x_lo <= x <= x_hi:
                        segs.append((eid, x, x))
        return Subtree.build(tree, segs, verts)

    # -- iteration ----------------------------------------------------------------

    def iterate(self, n: int, piece_cap: int = DEFAULT_PIECE_CAP) -> "PLTreeMap":
        """The n-th compositional power, by squaring, with a piece budget."""
        self._require_self_map()
        if n < 0:
            raise PreconditionError("iteration count must be nonnegative")
        if n == 0:
            return identity_map(self.domain)

        def guarded(a, b):
            out = compose(a, b)
            if out.piece_count > piece_cap:
                raise ResourceLimitError(
                    f"iterate exceeded the piece budget ({out.piece_count} > {piece_cap})"
                )
            return out

        result = None
        base = self
        k = n
        while k:
            if k & 1:
                result = base if result is None else guarded(result, base)
            k >>= 1
            if k:
                base = guarded(base, base)
        return result


def _param_on_edge(tree: MetricTree, p: TreePoint, eid) -> Fraction | None:
    """Parameter of p on the given edge, or None if it does not lie there."""
    u, w = tree.edge_ends(eid)
    if p.is_vertex:
        if p.vertex == u:
            return ZERO
        if p.vertex == w:
            return ONE
        return None
    return p.t if p.edge == eid else None


def _canonical_point(tree: MetricTree, sub: Subtree) -> TreePoint:
    """A deterministic representative: first interval midpoint, else a corner."""
    for eid in sorted(sub.segments, key=str):
        lo, hi = sub.segments[eid][0]
        if lo < hi:
            return tree.edge_point(eid, (lo + hi) / 2)
    return sub.corner_points()[0]


def identity_map(tree: MetricTree) -> PLTreeMap:
    table = {}
    for eid in tree.edge_ids:
        u, w = tree.edge_ends(eid)
        table[eid] = [(ZERO, tree.vertex_point(u)), (ONE, tree.vertex_point(w))]
    if not tree.edge_ids:
        only = tree.vertex_ids[0]
        table[only] = tree.vertex_point(only)
    return PLTreeMap(tree, table)


def map_from_vertex_images(tree: MetricTree, images, codomain: MetricTree | None = None) -> PLTreeMap:
    """The map sending each edge linearly onto the arc between vertex images."""
    codomain = tree if codomain is None else codomain
    table = {}
    for eid in tree.edge_ids:
        u, w = tree.edge_ends(eid)
        for v in (u, w):
            if v not in images:
                raise StructureError(f"no image for vertex {v!r}")
        table[eid] = [(ZERO, images[u]), (ONE, images[w])]
    if not tree.edge_ids:
        only = tree.vertex_ids[0]
        table[only] = images[only]
    return PLTreeMap(tree, table, codomain)


def compose(outer: PLTreeMap, inner: PLTreeMap) -> PLTreeMap:
    """The exact composition outer(inner(.)), refined and normalized.

    Each inner piece is cut wherever its image arc crosses a codomain
    vertex or an outer breakpoint; between cuts the composite is again a
    constant-speed arc traversal, so the result is a valid PL map.
    """
    if inner.codomain != outer.domain:
        raise PreconditionError("inner codomain must match outer domain")
    mid = outer.domain
    table: dict = {}
    for eid in inner.domain.edge_ids:
        bps: list = []
        for (t0, p0), (t1, p1) in zip(inner._table[eid], inner._table[eid][1:]):
            piece_bps = _compose_piece(outer, mid, t0, p0, t1, p1)
            if bps:
                piece_bps = piece_bps[1:]  # shared breakpoint already present
            bps.extend(piece_bps)
        table[eid] = bps
    if not inner.domain.edge_ids:
        only = inner.domain.vertex_ids[0]
        table[only] = outer.evaluate(inner.vertex_image(only))
    return PLTreeMap(inner.domain, table, outer.codomain).normalize()


def _compose_piece(outer: PLTreeMap, mid: MetricTree, t0, p0, t1, p1) -> list:
    if p0 == p1:
        q = outer.evaluate(p0)
        return [(t0, q), (t1, q)]
    arc = mid.arc(p0, p1)
    cuts = set()
    offsets = arc.segment_offsets
    for s in offsets[1:-1]:
        cuts.add(s)
    for k, (aeid, u0, u1) in enumerate(arc.segments):
        lo, hi = (u0, u1) if u0 <= u1 else (u1, u0)
        for tb, _ in outer._table[aeid][1:-1]:
            if lo < tb < hi:
                cuts.add(offsets[k] + abs(tb - u0) * mid.edge_length(aeid))
    bps = [(t0, outer.evaluate(p0))]
    for s in sorted(cuts):
        t = t0 + (t1 - t0) * s / arc.length
        bps.append((t, outer.evaluate(arc.point_at(s))))
    bps.append((t1, outer.evaluate(p1)))
    return bps


# -- hull restriction and projection ---------------------------------------


def restrict_to_chart(f: PLTreeMap, chart: SubtreeChart) -> PLTreeMap:
    """The map's restriction to a charted subtree of its domain.

    The result runs from the chart tree into f's codomain; it is only
    meaningful when the subtree is contained in f's domain tree, which
    the chart guarantees by construction.
    """
    if chart.subtree.tree != f.domain:
        raise PreconditionError("chart does not live in the map's domain")
    host = f.domain
    table: dict = {}
    for ceid in chart.tree.edge_ids:
        eid, lo, hi = chart._host_of_edge[ceid]
        bps = [(ZERO, f.evaluate(host.edge_point(eid, lo)))]
        for tb, img in f._table[eid]:
            if lo < tb < hi:
                bps.append(((tb - lo) / (hi - lo), img))
        bps.append((ONE, f.evaluate(host.edge_point(eid, hi))))
        table[ceid] = bps
    if not chart.tree.edge_ids:
        only = chart.tree.vertex_ids[0]
        table[only] = f.evaluate(chart.to_ambient(chart.tree.vertex_point(only)))
    return PLTreeMap(chart.tree, table, f.codomain)


def project_onto(f: PLTreeMap, target: Subtree) -> PLTreeMap:
    """Compose f with the nearest-point retraction onto a connected subtree.

    Every piece's image arc meets the target in at most one arclength
    window; before the window the projection is pinned at the entry
    point, inside it the traversal passes through unchanged, after it
    the projection is pinned at the exit point.
    """
    if target.tree != f.codomain:
        raise PreconditionError("projection target must live in the codomain")
    if target.is_empty() or not target.is_connected():
        raise PreconditionError("projection target must be nonempty and connected")
    cod = f.codomain
    table: dict = {}
    for eid in f.domain.edge_ids:
        bps: list = []
        for (t0, p0), (t1, p1) in zip(f._table[eid], f._table[eid][1:]):
            part = _project_piece(cod, target, t0, p0, t1, p1)
            if bps:
                part = part[1:]
            bps.extend(part)
        table[eid] = bps
    if not f.domain.edge_ids:
        only = f.domain.vertex_ids[0]
        table[only] = cod.retract(target, f.vertex_image(only))
    return PLTreeMap(f.domain, table, cod).normalize()


def _project_piece(cod: MetricTree, target: Subtree, t0, p0, t1, p1) -> list:
    if p0 == p1:
        q = cod.retract(target, p0)
        return [(t0, q), (t1, q)]
    arc = cod.arc(p0, p1)
    hits = target.intersect_arc(arc)
    if not hits:
        q = cod.retract(target, p0)
        return [(t0, q), (t1, q)]
    if len(hits) > 1:
        raise ConsistencyError("connected target met an arc in several windows")
    s1, s2 = hits[0]
    a1, a2 = arc.point_at(s1), arc.point_at(s2)
    span = t1 - t0
    bps = [(t0, a1)]
    ta = t0 + span * s1 / arc.length
    tb = t0 + span * s2 / arc.length
    if ta > t0:
        bps.append((ta, a1))
    if tb > ta:
        bps.append((tb, a2))
    if t1 > tb:
        bps.append((t1, a2))
    if bps[-1][0] != t1:
        bps.append((t1, a2))
    return bps


def pull_codomain_into_chart(f: PLTreeMap, chart: SubtreeChart) -> PLTreeMap:
    """Rewrite a map whose image lies in a charted subtree in chart coordinates."""
    if chart.subtree.tree != f.codomain:
        raise PreconditionError("chart does not live in the map's codomain")
    table: dict = {}
    for eid in f.domain.edge_ids:
        table[eid] = [(t, chart.to_hull(p)) for t, p in f._table[eid]]
    if not f.domain.edge_ids:
        only = f.domain.vertex_ids[0]
        table[only] = chart.to_hull(f.vertex_image(only))
    return PLTreeMap(f.domain, table, chart.tree)


def extend_between_subtrees(f: PLTreeMap, source: Subtree, target: Subtree):
    """Restrict f to a source subtree and project into a target subtree.

    Returns ``(g, source_chart, target_chart)`` where g maps the source
    chart tree into the target chart tree and agrees with the projected
    restriction of f under the chart identifications.
    """
    f._require_self_map()
    src_chart = source.to_chart()
    tgt_chart = target.to_chart()
    g = restrict_to_chart(f, src_chart)
    g = project_onto(g, target)
    return (pull_codomain_into_chart(g, tgt_chart), src_chart, tgt_chart)


def extend_through_hull(f: PLTreeMap, points):
    """Restriction of f to the hull of the points, projected into the
    hull of their one-step images.

    Where f already lands inside the image hull the result agrees with
    f; pieces that overshoot are pinned at the nearest point of the
    image hull, so the result is constant on each overshooting stretch.
    Returns ``(g, source_chart, target_chart)``.
    """
    f._require_self_map()
    pts = [f.domain.validate_point(p) for p in points]
    if not pts:
        raise PreconditionError("need at least one point")
    source = f.domain.connected_hull(pts)
    target = f.domain.connected_hull([f.evaluate(p) for p in pts])
    return extend_between_subtrees(f, source, target)


def iterated_extension(f: PLTreeMap, points, n: int, piece_cap: int = DEFAULT_PIECE_CAP):
    """Follow f for n steps through the hulls of the iterated point images.

    Step k produces a map from the chart of the points' hull into the
    ambient tree whose image lies in the hull of the k-times-advanced
    points.  Returns ``(maps, source_chart, hulls)`` with ``maps[k-1]``
    the k-step map and ``hulls[k-1]`` its containing hull.
    """
    f._require_self_map()
    if n < 1:
        raise PreconditionError("need at least one step")
    pts = [f.domain.validate_point(p) for p in points]
    if not pts:
        raise PreconditionError("need at least one point")
    source = f.domain.connected_hull(pts)
    chart = source.to_chart()
    current = restrict_to_chart(identity_map(f.domain), chart)
    maps = []
    hulls = []
    advanced = pts
    for _ in range(n):
        advanced = [f.evaluate(p) for p in advanced]
        hull = f.domain.connected_hull(advanced)
        current = project_onto(compose(f, current), hull)
        if current.piece_count > piece_cap:
            raise ResourceLimitError(
                f"extension exceeded the piece budget ({current.piece_count} > {piece_cap})"
            )
        maps.append(current)
        hulls.append(hull)
    return (maps, chart, hulls)


def find_periodic_in_hull(
    f: PLTreeMap,
    points,
    n: int,
    fallback_cap: int = 3,
    piece_cap: int = DEFAULT_PIECE_CAP,
) -> TreePoint:
    """A point x in the hull of the given points with f^n(x) = x.

    Requires the n-times-advanced hull to contain the original one; the
    n-step extension then maps the hull over itself, so a fixed point of
    the projected return map exists, and candidate fixed points are
    checked against f^n directly.  If projection artifacts hide every
    true fixed point, higher powers of the return map are searched, and
    as a last resort the exact fixed-point set of f^n is intersected
    with the hull.
    """
    f._require_self_map()
    maps, chart, hulls = iterated_extension(f, points, n, piece_cap)
    source = chart.subtree
    if not hulls[-1].contains_subtree(source):
        raise PreconditionError("advanced hull does not cover the original hull")
    back = project_onto(maps[-1], source)
    g = pull_codomain_into_chart(back, chart)

    def check(candidates) -> TreePoint | None:
        for c in candidates:
            x = chart.to_ambient(c)
            y = x
            for _ in range(n):
                y = f.evaluate(y)
            if y == x:
                return x
        return None

    found = check(_fixed_candidates(g))
    if found is not None:
        return found
    power = g
    for m in range(2, fallback_cap + 1):
        power = compose(g, power)
        found = check(_fixed_candidates(power))
        if found is not None:
            logger.warning("hull search needed the %d-th power of the return map", m)
            return found
    direct = f.iterate(n, piece_cap).fixed_point_set().intersect(source)
    if not direct.is_empty():
        logger.warning("hull search fell back to the exact fixed-point set")
        return _canonical_point(f.domain, direct)
    raise ConsistencyError("no fixed point of the n-th iterate in the hull")


def _fixed_candidates(g: PLTreeMap):
    """Deterministic candidate points from a return map's fixed-point set."""
    fixed = g.fixed_point_set()
    candidates = list(fixed.corner_points())
    tree = g.domain
    for eid in sorted(fixed.segments, key=str):
        for lo, hi in fixed.segments[eid]:
            if lo < hi:
                candidates.append(tree.edge_point(eid, (lo + hi) / 2))
    candidates.sort(key=point_key)
    return candidates
