"""Exact dynamics of piecewise-linear self-maps of finite metric trees."""

from .dynamics import (
    CheckResult,
    OmegaEstimate,
    PeriodicStructure,
    RecurrenceVerdict,
    Witness,
    check_escape,
    check_full_invariance,
    check_no_preperiodic,
    check_no_radial_stretch,
    decide_pointwise_recurrent,
    fixed_set,
    forward_component,
    omega_limit_estimate,
    periodic_structure,
    periodic_union,
    returns_to_components,
    vertex_period,
)
from .errors import (
    ConsistencyError,
    PreconditionError,
    ResourceLimitError,
    StructureError,
    UndecidedError,
)
from .fixtures import (
    FIXTURE_KINDS,
    build_fixture,
    interval_flip,
    odometer_tower,
    random_finite_order_map,
    random_folding_map,
    rotation_star,
    shift_and_tent,
    star_dendrite,
    stem_collapse_map,
    stem_sweep_map,
    stem_sweep_spread,
)
from .io import (
    dump_instance,
    load_instance,
    load_instance_file,
    map_from_json,
    map_to_json,
    point_from_json,
    point_to_json,
    save_instance_file,
    subtree_to_json,
    tree_from_json,
    tree_to_json,
)
from .odometer import (
    AddingMachineReport,
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
from .plmap import (
    PLTreeMap,
    compose,
    extend_through_hull,
    find_periodic_in_hull,
    identity_map,
    iterated_extension,
    map_from_vertex_images,
    project_onto,
    restrict_to_chart,
)
from .tree import Arc, Component, MetricTree, Subtree, SubtreeChart, TreePoint
from .verify import CheckRecord, run_checks

__all__ = [
    "AddingMachineReport",
    "Arc",
    "CheckRecord",
    "CheckResult",
    "Component",
    "ConsistencyError",
    "CycleOfSets",
    "FIXTURE_KINDS",
    "MetricTree",
    "OdometerAddress",
    "OdometerType",
    "OmegaEstimate",
    "PLTreeMap",
    "PeriodicStructure",
    "PreconditionError",
    "RecurrenceVerdict",
    "ResourceLimitError",
    "StructureError",
    "Subtree",
    "SubtreeChart",
    "TreePoint",
    "UndecidedError",
    "Witness",
    "address_of",
    "build_fixture",
    "check_escape",
    "check_full_invariance",
    "check_no_preperiodic",
    "check_no_radial_stretch",
    "classify_adding_machine",
    "compose",
    "decide_pointwise_recurrent",
    "detect_cycles_of_sets",
    "dump_instance",
    "extend_through_hull",
    "find_periodic_in_hull",
    "fixed_set",
    "forward_component",
    "identity_map",
    "interval_flip",
    "iterated_extension",
    "load_instance",
    "load_instance_file",
    "map_from_json",
    "map_from_vertex_images",
    "map_to_json",
    "odometer_tower",
    "omega_limit_estimate",
    "periodic_structure",
    "periodic_union",
    "point_from_json",
    "point_to_json",
    "project_onto",
    "random_finite_order_map",
    "random_folding_map",
    "restrict_to_chart",
    "returns_to_components",
    "rotation_star",
    "run_checks",
    "save_instance_file",
    "shift_and_tent",
    "star_dendrite",
    "stem_collapse_map",
    "stem_sweep_map",
    "stem_sweep_spread",
    "subtree_to_json",
    "tau",
    "tree_from_json",
    "tree_to_json",
    "valid_addresses",
    "validate_address",
    "verify_semiconjugacy",
    "vertex_period",
]
