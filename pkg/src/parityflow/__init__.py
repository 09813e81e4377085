"""Parity-encoded quantum computing as YZ-plane measurement-based computing.

Modules cover graph machinery, signed Pauli stabilizer groups, parity
layouts and their encoding circuits, a dense statevector simulator, the two
computation engines (parity and measurement-based), and an executable gflow
theory with an exhaustive desk-scale search.
"""

from parityflow.gflow import (
    GFlow,
    canonical_yz_gflow,
    search_gflow_yz,
    verify_gflow,
    witness_structure,
    yz_bipartite_sweep,
)
from parityflow.graph import (
    Graph,
    bipartition_check,
    effective_graph,
    enumerate_connected_graphs,
    neighbors,
    odd_neighborhood,
)
from parityflow.layout import (
    ParityLayout,
    build_all_pairs_layout,
    encoding_circuit,
    induced_graph,
    validate_constraints,
)
from parityflow.mbqc_engine import prepare_graph_state, run_mbqc_yz, run_repeated_mbqc
from parityflow.parity_engine import (
    LayerParams,
    encode_input,
    mb_decode,
    run_computation,
    run_layer,
    unitary_decode,
)
from parityflow.pauli import (
    PauliString,
    StabilizerGroup,
    graph_generators,
    groups_equal,
    hadamard_conjugate,
    parity_generators,
)
from parityflow.simulator import (
    Statevector,
    apply_circuit,
    discard_qubit,
    distance_up_to_phase,
    project,
)

__all__ = [
    "GFlow",
    "Graph",
    "LayerParams",
    "ParityLayout",
    "PauliString",
    "StabilizerGroup",
    "Statevector",
    "apply_circuit",
    "bipartition_check",
    "build_all_pairs_layout",
    "canonical_yz_gflow",
    "discard_qubit",
    "distance_up_to_phase",
    "effective_graph",
    "encode_input",
    "encoding_circuit",
    "enumerate_connected_graphs",
    "graph_generators",
    "groups_equal",
    "hadamard_conjugate",
    "induced_graph",
    "mb_decode",
    "neighbors",
    "odd_neighborhood",
    "parity_generators",
    "prepare_graph_state",
    "project",
    "run_computation",
    "run_layer",
    "run_mbqc_yz",
    "run_repeated_mbqc",
    "search_gflow_yz",
    "unitary_decode",
    "validate_constraints",
    "verify_gflow",
    "witness_structure",
    "yz_bipartite_sweep",
]
