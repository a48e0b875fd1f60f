from fractions import Fraction as F
from itertools import product

import pytest

from dendrodyn import MetricTree, PreconditionError, StructureError
from dendrodyn.fixtures import interval_flip, odometer_tower, rotation_star, shift_and_tent
from dendrodyn.odometer import (
    CycleOfSets,
    OdometerAddress,
    OdometerType,
    address_of,
    classify_adding_machine,
    detect_cycles_of_sets,
    tau,
    valid_addresses,
    validate_address,
    verify_semiconjugacy,
)
from dendrodyn.plmap import identity_map
from dendrodyn.tree import Component, Subtree


def compatible(digits, periods):
    """Independent compatibility oracle, straight from the definition."""
    if len(digits) != len(periods):
        return False
    if any(not 0 <= j < m for j, m in zip(digits, periods)):
        return False
    return all(
        digits[i + 1] % periods[i] == digits[i] for i in range(len(digits) - 1)
    )


# -- address arithmetic ---------------------------------------------------------


def test_type_validation():
    OdometerType((2, 4, 8))
    OdometerType((3,))
    with pytest.raises(StructureError):
        OdometerType(())
    with pytest.raises(StructureError):
        OdometerType((4, 2))
    with pytest.raises(StructureError):
        OdometerType((2, 2))
    with pytest.raises(StructureError):
        OdometerType((2, 3))


def test_validate_address_frozen_cases():
    t24 = OdometerType((2, 4))
    assert validate_address(OdometerAddress(t24, (1, 3)))
    assert not validate_address(OdometerAddress(t24, (1, 2)))
    assert validate_address(OdometerAddress(OdometerType((2, 4, 8)), (0, 2, 6)))
    assert not validate_address(OdometerAddress(t24, (1,)))
    assert not validate_address(OdometerAddress(t24, (1, 4)))


def test_validate_address_exhaustive_against_oracle():
    for periods in ((2, 4), (2, 4, 8), (3, 6, 12)):
        otype = OdometerType(periods)
        for digits in product(*(range(m) for m in periods)):
            a = OdometerAddress(otype, digits)
            assert validate_address(a) == compatible(digits, periods)


def test_valid_address_count_is_last_period():
    for periods in ((2, 4), (2, 4, 8), (3, 6, 12), (5,)):
        assert len(valid_addresses(OdometerType(periods))) == periods[-1]


def test_tau_frozen_values():
    t248 = OdometerType((2, 4, 8))
    assert tau(OdometerAddress(t248, (0, 0, 0))).digits == (1, 1, 1)
    assert tau(OdometerAddress(t248, (1, 3, 7))).digits == (0, 0, 0)
    assert tau(OdometerAddress(OdometerType((2, 4)), (0, 2))).digits == (1, 3)


def test_tau_rejects_invalid_addresses():
    with pytest.raises(PreconditionError):
        tau(OdometerAddress(OdometerType((2, 4)), (1, 2)))


def test_tau_is_a_bijection_preserving_validity():
    for periods in ((2, 4, 8), (3, 6, 12)):
        addrs = valid_addresses(OdometerType(periods))
        images = [tau(a) for a in addrs]
        assert all(validate_address(b) for b in images)
        assert len(set(images)) == len(addrs)
        assert set(images) == set(addrs)


def test_tau_orbit_of_zero_visits_everything_once():
    for periods in ((2, 4, 8), (3, 6, 12)):
        otype = OdometerType(periods)
        zero = OdometerAddress(otype, (0,) * len(periods))
        orbit = [zero]
        cur = zero
        for _ in range(periods[-1] - 1):
            cur = tau(cur)
            assert cur not in orbit
            orbit.append(cur)
        assert tau(cur) == zero
        assert set(orbit) == set(valid_addresses(otype))


def test_tau_has_no_fixed_address():
    for periods in ((2, 4), (2, 4, 8), (3, 6, 12)):
        for a in valid_addresses(OdometerType(periods)):
            assert tau(a) != a


# -- cycle detection -------------------------------------------------------------


def test_detect_rotation_single_level():
    tree, rot = rotation_star(3)
    cycles = detect_cycles_of_sets(rot, 3)
    assert len(cycles) == 1
    assert cycles[0].period == 3
    assert cycles[0].level == 1
    assert all(p == tree.vertex_point("c") for p in cycles[0].attachments)


def test_detect_flip_stops_after_one_level():
    _, flip = interval_flip()
    cycles = detect_cycles_of_sets(flip, 5)
    assert [c.period for c in cycles] == [2]


def test_detect_identity_has_no_cycles():
    tree, _ = rotation_star(3)
    assert detect_cycles_of_sets(identity_map(tree), 3) == ()


def test_detect_rejects_non_injective_maps():
    _, tent = shift_and_tent()["tent"]
    with pytest.raises(PreconditionError):
        detect_cycles_of_sets(tent, 2)


def test_detect_root_at_selects_the_component():
    tree, rot = rotation_star(3)
    p = tree.edge_point("a2", F(1, 3))
    cycles = detect_cycles_of_sets(rot, 2, root_at=p)
    assert cycles[0].sets[0].contains(p)
    assert address_of(cycles, p).digits == (0,)


def test_detect_root_at_rejects_periodic_points():
    tree, rot = rotation_star(3)
    with pytest.raises(PreconditionError):
        detect_cycles_of_sets(rot, 2, root_at=tree.vertex_point("c"))


def test_cycle_sets_map_into_successors():
    tree, f = odometer_tower(2, (2, 4))
    for cyc in detect_cycles_of_sets(f, 4):
        for i, comp in enumerate(cyc.sets):
            nxt = cyc.sets[(i + 1) % cyc.period]
            img = f.image_of_subtree(comp.closure)
            assert nxt.closure.contains_subtree(img)


# -- addresses -------------------------------------------------------------------


def test_address_digits_follow_the_cycle_order():
    tree, rot = rotation_star(3)
    cycles = detect_cycles_of_sets(rot, 1)
    pts = {i: cycles[0].sets[i].repr_point for i in range(3)}
    for i, p in pts.items():
        assert address_of(cycles, p).digits == (i,)


def test_address_constant_on_each_deepest_set():
    tree, f = odometer_tower(2, (2, 4))
    cycles = detect_cycles_of_sets(f, 4)
    for i, comp in enumerate(cycles[-1].sets):
        a = address_of(cycles, comp.repr_point)
        eid = next(iter(comp.closure.segments))
        other = tree.edge_point(eid, F(1, 7))
        if comp.contains(other):
            assert address_of(cycles, other) == a


def test_address_errors_outside_the_sets():
    tree, rot = rotation_star(3)
    cycles = detect_cycles_of_sets(rot, 1)
    with pytest.raises(PreconditionError):
        address_of(cycles, tree.vertex_point("c"))
    with pytest.raises(PreconditionError):
        address_of((), tree.vertex_point("c"))


def test_nested_sets_respect_compatibility():
    tree, f = odometer_tower(2, (2, 4))
    cycles = detect_cycles_of_sets(f, 4)
    level1, level2 = cycles
    for j, deep in enumerate(level2.sets):
        for i, shallow in enumerate(level1.sets):
            nested = shallow.closure.contains_subtree(deep.closure)
            assert nested == (j % level1.period == i)


def test_tower_addresses_match_construction_indices():
    tree, f = odometer_tower(2, (2, 4))
    cycles = detect_cycles_of_sets(f, 4)
    for j in range(4):
        leaf = tree.vertex_point(f"n2_{j}")
        assert address_of(cycles, leaf).digits == (j % 2, j)


# -- semiconjugacy and classification ----------------------------------------------


def test_semiconjugacy_passes_on_honest_cycles():
    for build in (lambda: rotation_star(3), lambda: odometer_tower(2, (2, 4))):
        tree, f = build()
        cycles = detect_cycles_of_sets(f, 4)
        assert verify_semiconjugacy(f, cycles).status == "pass"


def test_semiconjugacy_flags_a_mis_ordered_cycle():
    tree, rot = rotation_star(3)
    good = detect_cycles_of_sets(rot, 1)[0]
    bad = CycleOfSets(
        level=good.level,
        period=good.period,
        sets=good.sets[::-1],
        attachments=good.attachments[::-1],
    )
    report = verify_semiconjugacy(rot, (bad,))
    assert report.status == "fail"
    assert report.witness.kind == "semiconjugacy-mismatch"


def test_classify_rotation_is_full_at_depth_one():
    tree, rot = rotation_star(3)
    report = classify_adding_machine(detect_cycles_of_sets(rot, 2))
    assert report.label == "topological (full)"
    assert report.detected_periods == (3,)


def test_classify_tower_is_full():
    _, f = odometer_tower(2, (2, 4))
    cycles = detect_cycles_of_sets(f, 4)
    report = classify_adding_machine(cycles, expected_type=OdometerType((2, 4)))
    assert report.label == "topological (full)"
    assert report.openness_ok and report.chains_ok and report.disjoint_ok


def test_classify_emptied_chain_is_weak():
    tree, rot = rotation_star(3)
    good = detect_cycles_of_sets(rot, 1)[0]
    hollow = Component(
        closure=Subtree.empty(tree),
        boundary=(tree.vertex_point("c"),),
        repr_point=tree.edge_point("a1", F(1, 2)),
    )
    maimed = CycleOfSets(
        level=1,
        period=3,
        sets=(good.sets[0], hollow, good.sets[2]),
        attachments=good.attachments,
    )
    report = classify_adding_machine((maimed,))
    assert report.label == "weak"
    assert not report.chains_ok


def test_classify_short_tower_against_deeper_expectation():
    tree, rot = rotation_star(3)
    cycles = detect_cycles_of_sets(rot, 1)
    report = classify_adding_machine(cycles, expected_type=OdometerType((3, 6)))
    assert report.label == "topological weak"
    assert not report.full_ok


def test_classify_requires_cycles():
    with pytest.raises(PreconditionError):
        classify_adding_machine(())
