"""Stable sets, path partitions and diperfection checks for small digraphs."""
from .alis import (
    AlisDecomposition,
    LayerStructure,
    decompose,
    find_decomposition,
    hamiltonian_path_semicomplete,
    is_alis,
    is_alos,
    layer_structure,
    verify_structure_facts,
)
from .builder import BuildTrace, build
from .detectors import (
    ForbiddenWitness,
    WitnessKind,
    alpha_and_max_stable_sets,
    find_anti_directed_odd_cycle,
    find_blocking_odd_cycle,
    find_clique_cut,
    find_non_oriented_odd_cycle,
    in_class_B,
    in_class_D,
    is_diperfect,
    stability_number,
)
from .digraph import Digraph, induced_subdigraph, inverse, underlying_graph
from .errors import DiperfectError, InvariantBreach, PreconditionError, SizeBoundError
from .formats import decode_digraph6, encode_digraph6, parse_edge_list
from .matching import (
    BipartiteView,
    Matching,
    constrained_matching,
    deficiency_core,
    hall_violator,
    matching_against_stable,
    maximum_matching,
)
from .partitions import Mode, find_partition, is_diperfect_property, satisfies_property, validate
from .sweep import SweepConfig, sweep
