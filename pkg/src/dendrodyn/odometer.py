"""Adding machines over trees: addresses, the add-one map, and cycle towers.

An adding machine of type (m_0, ..., m_k) is the space of digit tuples
(j_0, ..., j_k) with j_i < m_i and j_{i+1} = j_i mod m_i, acted on by
coordinatewise add-one.  Tree maps imitate this structure through nested
cycles of sets: at each depth the complement of the periodic points
breaks into components the map permutes cyclically, and the index chain
of a point through those components is its address.

Everything is finite-depth: a finite tree only ever shows a truncation
of the tower, so fullness is certified per depth, never asserted in the
limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .dynamics import CheckResult, Witness, fixed_set
from .errors import ConsistencyError, PreconditionError, StructureError
from .plmap import DEFAULT_PIECE_CAP, PLTreeMap
from .tree import Component, Subtree, TreePoint


@dataclass(frozen=True, slots=True)
class OdometerType:
    """A strictly increasing divisibility chain of periods."""

    periods: tuple

    def __post_init__(self):
        ms = tuple(int(m) for m in self.periods)
        object.__setattr__(self, "periods", ms)
        if not ms:
            raise StructureError("an odometer type needs at least one period")
        if any(m < 1 for m in ms):
            raise StructureError("periods must be positive")
        for a, b in zip(ms, ms[1:]):
            if not a < b:
                raise StructureError("periods must strictly increase")
            if b % a:
                raise StructureError(f"period {b} is not a multiple of {a}")

    @property
    def depth(self) -> int:
        return len(self.periods)


@dataclass(frozen=True, slots=True)
class OdometerAddress:
    """A digit tuple of a given type; validity is checked separately."""

    type: OdometerType
    digits: tuple

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(j) for j in self.digits))


def validate_address(a: OdometerAddress) -> bool:
    """Digit ranges plus the compatibility chain, with no exceptions."""
    ms = a.type.periods
    js = a.digits
    if len(js) != len(ms):
        return False
    if any(not 0 <= j < m for j, m in zip(js, ms)):
        return False
    return all(jn % m == j for j, jn, m in zip(js, js[1:], ms))


def valid_addresses(otype: OdometerType) -> tuple:
    """Every valid address of the type, in lexicographic digit order."""
    out = []
    for js in product(*(range(m) for m in otype.periods)):
        a = OdometerAddress(otype, js)
        if validate_address(a):
            out.append(a)
    return tuple(out)


def tau(a: OdometerAddress) -> OdometerAddress:
    """Add one to every digit modulo its own period."""
    if not validate_address(a):
        raise PreconditionError("address digits violate range or compatibility")
    digits = tuple((j + 1) % m for j, m in zip(a.digits, a.type.periods))
    return OdometerAddress(a.type, digits)


# -- cycles of sets --------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CycleOfSets:
    """Components cyclically permuted by the map at one depth.

    `sets[i]` maps into `sets[(i + 1) % period]`; `attachments[i]` is the
    single point where `sets[i]` touches the removed periodic set.
    `level` records the power bound that produced the removed set.
    """

    level: int
    period: int
    sets: tuple
    attachments: tuple


def _follow_cycle(f: PLTreeMap, removed: Subtree, comps, start: Component):
    """Order the components reachable from `start` by repeated application
    of the map, verifying exact containment at every step."""
    cycle = [start]
    cur = start
    while True:
        img = f.evaluate(cur.repr_point)
        if removed.contains(img):
            raise ConsistencyError(
                "a component of the complement maps into the periodic set"
            )
        nxt = next((c for c in comps if c.contains(img)), None)
        if nxt is None:
            raise ConsistencyError("image point escaped every component")
        if f.evaluate(cur.attachment) != nxt.attachment:
            raise ConsistencyError(
                "attachment points are not carried onto each other"
            )
        if not nxt.closure.contains_subtree(f.image_of_subtree(cur.closure)):
            raise ConsistencyError(
                "a component leaks outside its successor under the map"
            )
        if nxt.closure.canonical_key == start.closure.canonical_key:
            return tuple(cycle)
        if len(cycle) == len(comps):
            raise ConsistencyError("component orbit never returns to its start")
        cycle.append(nxt)
        cur = nxt


def detect_cycles_of_sets(
    f: PLTreeMap,
    depth: int,
    root_at: TreePoint | None = None,
    piece_cap: int = DEFAULT_PIECE_CAP,
) -> tuple:
    """Nested cycles of components of the complement of the periodic set.

    For each n up to `depth` the points of period at most n are removed
    and the component containing the root is followed around its cycle.
    Levels that do not refine the previous period are dropped, so the
    returned periods strictly increase.  The root defaults to the
    component with the smallest canonical key at the deepest level that
    still has one; pass `root_at` to follow a specific point instead.
    """
    if depth < 1:
        raise PreconditionError("depth must be at least 1")
    f._require_self_map()
    injective, pair = f.is_injective()
    if not injective:
        raise PreconditionError(
            f"cycle detection needs an injective map; {pair[0]} and {pair[1]} collide"
        )
    tree = f.domain

    levels = []  # (n, removed, components)
    removed = Subtree.empty(tree)
    for n in range(1, depth + 1):
        removed = removed.union(fixed_set(f, n, piece_cap))
        if removed == tree.full_subtree():
            break
        levels.append((n, removed, tree.components_minus(removed)))
    if not levels:
        return ()

    if root_at is not None:
        tree.validate_point(root_at)
        root_comp = None
        for n, removed, comps in reversed(levels):
            if removed.contains(root_at):
                raise PreconditionError(
                    f"the root point is periodic within power {n}"
                )
            root_comp = next(c for c in comps if c.contains(root_at))
            break
    else:
        _, _, deepest = levels[-1]
        root_comp = min(deepest, key=lambda c: c.closure.canonical_key)

    anchor = root_comp.repr_point
    out = []
    last_period = 0
    for n, removed, comps in levels:
        start = next((c for c in comps if c.contains(anchor)), None)
        if start is None:
            raise ConsistencyError("the root chain broke between depths")
        cycle = _follow_cycle(f, removed, comps, start)
        if len(cycle) <= last_period:
            continue
        last_period = len(cycle)
        out.append(
            CycleOfSets(
                level=n,
                period=len(cycle),
                sets=cycle,
                attachments=tuple(c.attachment for c in cycle),
            )
        )
    return tuple(out)


def address_of(cycles, x: TreePoint) -> OdometerAddress:
    """The index chain of a point through the nested cycles."""
    if not cycles:
        raise PreconditionError("no cycle levels to address against")
    digits = []
    for cyc in cycles:
        hit = next((i for i, c in enumerate(cyc.sets) if c.contains(x)), None)
        if hit is None:
            raise PreconditionError(
                f"the point is outside every set at level {cyc.level}"
            )
        digits.append(hit)
    otype = OdometerType(tuple(c.period for c in cycles))
    return OdometerAddress(otype, tuple(digits))


def verify_semiconjugacy(f: PLTreeMap, cycles, samples=None) -> CheckResult:
    """Does applying the map advance every address by one?

    Defaults to one sample per deepest set.  Each failure is reported
    with the point and the two addresses that should have matched.
    """
    if not cycles:
        raise PreconditionError("no cycle levels to verify against")
    pts = (
        tuple(samples)
        if samples is not None
        else tuple(c.repr_point for c in cycles[-1].sets)
    )
    failures = []
    for x in pts:
        try:
            before = address_of(cycles, x)
            after = address_of(cycles, f.evaluate(x))
        except PreconditionError as exc:
            failures.append((x, f"address undefined: {exc}"))
            continue
        expected = tau(before)
        if after != expected:
            failures.append(
                (x, f"got {after.digits}, expected {expected.digits}")
            )
    if failures:
        x, why = failures[0]
        return CheckResult(
            status="fail",
            witness=Witness(kind="semiconjugacy-mismatch", points=(x,), detail=why),
            detail=f"{len(failures)} of {len(pts)} samples failed",
        )
    return CheckResult(status="pass", detail=f"{len(pts)} samples advanced correctly")


@dataclass(frozen=True, slots=True)
class AddingMachineReport:
    label: str  # "weak" | "topological weak" | "topological (full)"
    openness_ok: bool
    chains_ok: bool
    disjoint_ok: bool
    full_ok: bool
    detected_periods: tuple


def classify_adding_machine(cycles, expected_type: OdometerType | None = None) -> AddingMachineReport:
    """Grade the tower evidence at its available depth.

    Openness re-derives each set as a full component of the complement
    of its own attachment point; the chain check demands every deepest
    set be non-empty; disjointness lets closures meet only at
    attachments.  All three together justify "topological"; "full" needs
    the deepest period to exhaust the address space of the detected type
    (and to match `expected_type` when one is given).
    """
    if not cycles:
        raise PreconditionError("no cycle levels to classify")
    tree = cycles[0].sets[0].closure.tree

    openness_ok = True
    for cyc in cycles:
        for comp in cyc.sets:
            if comp.closure.is_empty():
                openness_ok = False
                continue
            others = tree.components_minus_point(comp.attachment)
            rederived = next(
                (c for c in others if c.contains(comp.repr_point)), None
            )
            if rederived is None or rederived.closure != comp.closure:
                openness_ok = False

    deepest = cycles[-1]
    chains_ok = all(not c.closure.is_empty() for c in deepest.sets)

    disjoint_ok = True
    for i in range(len(deepest.sets)):
        for j in range(i + 1, len(deepest.sets)):
            si, sj = deepest.sets[i], deepest.sets[j]
            inter = si.closure.intersect(sj.closure)
            if inter.is_empty():
                continue
            if inter.measure() != 0:
                disjoint_ok = False
                continue
            allowed = set(si.boundary) | set(sj.boundary)
            if any(p not in allowed for p in inter.corner_points()):
                disjoint_ok = False

    periods = tuple(c.period for c in cycles)
    keys = {c.closure.canonical_key for c in deepest.sets}
    full_ok = chains_ok and disjoint_ok and len(keys) == deepest.period
    if expected_type is not None:
        full_ok = full_ok and periods == expected_type.periods

    if not (openness_ok and chains_ok and disjoint_ok):
        label = "weak"
    elif full_ok:
        label = "topological (full)"
    else:
        label = "topological weak"
    return AddingMachineReport(
        label=label,
        openness_ok=openness_ok,
        chains_ok=chains_ok,
        disjoint_ok=disjoint_ok,
        full_ok=full_ok,
        detected_periods=periods,
    )
