"""Measurement-based computation with YZ-plane measurements on graph states.

The graph state with input carries the input state on the input vertices,
fresh |+> qubits elsewhere, and CZ gates across every edge not lying inside
the input set. Measuring a vertex along the axis (0, sin t, cos t) drives
the computation; a -1 outcome is repaired by completing the stabilizer of
the vertex's correction set: X on the other members, Z on the odd
neighborhood. A valid flow guarantees those targets are still unmeasured,
which is exactly what makes every outcome branch land on the same state.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence

from parityflow.gflow import GFlow, precedes, verify_gflow, yz_planes
from parityflow.graph import Graph, effective_graph, odd_neighborhood
from parityflow.layout import cz, rx, rz
from parityflow.parity_engine import LayerParams
from parityflow.simulator import (
    MeasurementEntry,
    MeasurementRecord,
    Statevector,
    append_qubit,
    apply_circuit,
    apply_pauli_x,
    apply_pauli_z,
    discard_qubit,
    outcome_probability,
    project,
    resolve_outcomes,
)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def yz_axis(theta: float) -> tuple[float, float, float]:
    """Bloch axis (0, sin t, cos t); its +1 projector is the rotated <0|."""
    return (0.0, math.sin(theta), math.cos(theta))


def prepare_graph_state(g: Graph, psi: Statevector) -> Statevector:
    """Input state on the input vertices, |+> elsewhere, CZ across the
    effective edge set (edges inside the input set contribute nothing)."""
    if frozenset(psi.labels) != g.inputs:
        raise ValueError(f"input labels {psi.labels} do not match graph inputs {sorted(g.inputs)}")
    state = psi
    for v in g.vertices:
        if v not in g.inputs:
            state = append_qubit(state, v, (_INV_SQRT2, _INV_SQRT2))
    index = {v: i for i, v in enumerate(g.vertices)}
    entangle = [cz(u, v) for u, v in sorted(effective_graph(g).edges, key=lambda e: (index[e[0]], index[e[1]]))]
    return apply_circuit(state, entangle)


def _default_order(g: Graph, flow: GFlow) -> list[str]:
    """Lexicographic within flow layers, measured vertices only."""
    measured = set(g.vertices) - g.outputs
    order = []
    for layer in flow.layers:
        order.extend(sorted(layer & measured))
    return order


def _check_order(g: Graph, flow: GFlow, order: Sequence[str]) -> None:
    measured = set(g.vertices) - g.outputs
    if set(order) != measured or len(order) != len(measured):
        raise ValueError("measurement order must enumerate the measured vertices exactly once")
    position = {v: i for i, v in enumerate(order)}
    for v in order:
        for u in order:
            if precedes(flow, v, u) and position[v] > position[u]:
                raise ValueError(f"order violates the flow: {v!r} must precede {u!r}")


def run_mbqc_yz(
    g: Graph,
    psi: Statevector,
    angles: Mapping[str, float],
    flow: GFlow,
    outcomes,
    order: Sequence[str] | None = None,
) -> tuple[Statevector, MeasurementRecord]:
    """Measure every non-output vertex in the YZ plane, correcting via the flow.

    The flow is verified before any simulation. Measurements follow a linear
    extension of the flow's order (lexicographic within layers unless an
    explicit extension is supplied); on a -1 outcome at v, X lands on
    g(v) minus v and Z on Odd(g(v)) minus v, all still-present qubits.
    """
    result = verify_gflow(g, yz_planes(g), flow)
    if not result:
        raise ValueError(f"invalid flow: {result.violations[0]}")
    measured = set(g.vertices) - g.outputs
    if set(angles) != measured:
        raise ValueError("angle keys must be exactly the measured vertices")
    sequence = _default_order(g, flow) if order is None else list(order)
    _check_order(g, flow, sequence)
    source = resolve_outcomes(outcomes)
    state = prepare_graph_state(g, psi)
    record: list[MeasurementEntry] = []
    for v in sequence:
        axis = yz_axis(angles[v])
        outcome = source.next_outcome(outcome_probability(state, v, axis, 1))
        probability, state = project(state, v, axis, outcome)
        if outcome == -1:
            for u in sorted(flow.g[v] - {v}):
                state = apply_pauli_x(state, u)
            for u in sorted(odd_neighborhood(g, flow.g[v]) - {v}):
                state = apply_pauli_z(state, u)
        state = discard_qubit(state, v)
        record.append(MeasurementEntry(v, axis, outcome, probability))
    return state, tuple(record)


def run_repeated_mbqc(
    g: Graph,
    psi: Statevector,
    layers: Sequence[LayerParams],
    flow: GFlow,
    outcomes,
) -> tuple[Statevector, list[MeasurementRecord]]:
    """Re-prepare the graph on the current data register each layer, measure
    it out, then apply the local data rotations to the outputs."""
    if not layers:
        raise ValueError("at least one layer required")
    measured = set(g.vertices) - g.outputs
    source = resolve_outcomes(outcomes)
    state = psi
    records: list[MeasurementRecord] = []
    for params in layers:
        if not set(params.theta) <= measured:
            raise ValueError("theta keys must be measured vertices")
        angles = {v: params.theta.get(v, 0.0) for v in measured}
        state, record = run_mbqc_yz(g, state, angles, flow, source)
        records.append(record)
        rotations = []
        for q in state.labels:
            if params.phi.get(q):
                rotations.append(rz(q, params.phi[q]))
            if params.alpha.get(q):
                rotations.append(rx(q, params.alpha[q]))
        state = apply_circuit(state, rotations)
    return state, records
