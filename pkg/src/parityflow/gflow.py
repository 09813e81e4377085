"""Executable gflow theory for measurement-based computing on open graphs.

A gflow witness is a correction-set map g together with a strict partial
order on the vertices. The order is carried as a precedence digraph (its
transitive closure is the order) plus a topological layering used for
scheduling. Five conditions tie g, the order, and the measurement planes
together; `verify_gflow` checks all of them, `search_gflow_yz` finds a
witness for all-YZ plane assignments by exhaustive search, and
`yz_bipartite_sweep` confronts that search with a bipartiteness test over
every small connected graph.
"""

from __future__ import annotations

import os
from collections.abc import Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from parityflow.graph import (
    Graph,
    bipartition_check,
    effective_graph,
    enumerate_connected_graphs,
    odd_neighborhood,
    with_io,
)

DEFAULT_SEARCH_CAP = 8

PLANES = ("XY", "XZ", "YZ")

VertexSet = frozenset[str]
PlaneAssignment = Mapping[str, str]


class MalformedFlowError(ValueError):
    """Witness is structurally broken (distinct from a well-formed invalid one)."""


@dataclass(frozen=True)
class GFlow:
    """Correction-set map plus partial order.

    ``precedence`` holds the generating digraph edges (v, u) meaning v is
    measured strictly before u; the partial order is its transitive closure.
    ``layers`` is a topological layering of that digraph, earliest first,
    with unmeasured (output) vertices in the final layers.
    """

    g: Mapping[str, VertexSet]
    precedence: frozenset[tuple[str, str]]
    layers: tuple[VertexSet, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "g", {v: frozenset(s) for v, s in self.g.items()})
        object.__setattr__(self, "precedence", frozenset(self.precedence))
        object.__setattr__(self, "layers", tuple(frozenset(layer) for layer in self.layers))
        level: dict[str, int] = {}
        for depth, layer in enumerate(self.layers):
            for v in layer:
                if v in level:
                    raise MalformedFlowError(f"vertex {v!r} appears in two layers")
                level[v] = depth
        known = set(level)
        for v, s in self.g.items():
            if v not in known or not s <= known:
                raise MalformedFlowError("correction sets mention vertices outside the layering")
        for v, u in self.precedence:
            if v not in known or u not in known:
                raise MalformedFlowError(f"precedence pair ({v!r}, {u!r}) outside the layering")
            if level[v] >= level[u]:
                raise MalformedFlowError(f"layering violates precedence {v!r} < {u!r}")

    def layer_of(self, v: str) -> int:
        for depth, layer in enumerate(self.layers):
            if v in layer:
                return depth
        raise KeyError(v)


def _closure(flow: GFlow) -> dict[str, set[str]]:
    """Strict successors of each vertex under the transitive closure of precedence."""
    succ: dict[str, set[str]] = {}
    for v, u in flow.precedence:
        succ.setdefault(v, set()).add(u)
    reach: dict[str, set[str]] = {}

    def visit(v: str) -> set[str]:
        if v in reach:
            return reach[v]
        acc: set[str] = set()
        reach[v] = acc  # layering guarantees acyclicity, so no re-entry on a cycle
        for u in succ.get(v, ()):
            acc.add(u)
            acc |= visit(u)
        return acc

    for v in succ:
        visit(v)
    return reach


def precedes(flow: GFlow, v: str, u: str) -> bool:
    """v < u in the partial order (transitive closure of the precedence digraph)."""
    return u in _closure(flow).get(v, ())


@dataclass(frozen=True)
class Violation:
    vertex: str
    condition: int
    message: str


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    violations: tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def verify_gflow(graph: Graph, planes: PlaneAssignment, flow: GFlow) -> VerifyResult:
    """Check the five gflow conditions for every measured vertex.

    Conditions, for v measured (v not an output):
      1. every u in g(v), u != v, satisfies v < u
      2. every u in Odd(g(v)), u != v, satisfies v < u
      3. plane XY: v not in g(v) and v in Odd(g(v))
      4. plane XZ: v in g(v) and v in Odd(g(v))
      5. plane YZ: v in g(v) and v not in Odd(g(v))

    Structural problems (wrong domains, layering not covering the graph)
    raise MalformedFlowError; a well-formed witness that fails a condition
    yields ok=False with the violations in deterministic order.
    """
    vertices = set(graph.vertices)
    measured = vertices - graph.outputs
    if set(flow.g) != measured:
        raise MalformedFlowError("correction map domain must be exactly the measured vertices")
    if set(planes) != measured:
        raise MalformedFlowError("plane assignment domain must be exactly the measured vertices")
    bad_planes = {p for p in planes.values() if p not in PLANES}
    if bad_planes:
        raise MalformedFlowError(f"unknown planes {sorted(bad_planes)}")
    layered = set().union(*flow.layers) if flow.layers else set()
    if layered != vertices:
        raise MalformedFlowError("layering must partition the vertex set")
    allowed = vertices - graph.inputs
    order_index = {v: i for i, v in enumerate(graph.vertices)}
    closure = _closure(flow)
    violations: list[Violation] = []
    for v in sorted(measured, key=order_index.get):
        corr = flow.g[v]
        if not corr <= allowed:
            raise MalformedFlowError(f"g({v!r}) is not a subset of the non-input vertices")
        odd = odd_neighborhood(graph, corr)
        after = closure.get(v, set())
        for u in sorted(corr - {v}, key=order_index.get):
            if u not in after:
                violations.append(Violation(v, 1, f"{u!r} in g({v!r}) but not after {v!r}"))
                break
        for u in sorted(odd - {v}, key=order_index.get):
            if u not in after:
                violations.append(Violation(v, 2, f"{u!r} in Odd(g({v!r})) but not after {v!r}"))
                break
        plane = planes[v]
        if plane == "XY" and not (v not in corr and v in odd):
            violations.append(Violation(v, 3, f"XY at {v!r} needs v outside g(v) and inside Odd(g(v))"))
        elif plane == "XZ" and not (v in corr and v in odd):
            violations.append(Violation(v, 4, f"XZ at {v!r} needs v inside g(v) and inside Odd(g(v))"))
        elif plane == "YZ" and not (v in corr and v not in odd):
            violations.append(Violation(v, 5, f"YZ at {v!r} needs v inside g(v) and outside Odd(g(v))"))
    return VerifyResult(not violations, tuple(violations))


def yz_planes(graph: Graph) -> dict[str, str]:
    """All-YZ plane assignment over the measured vertices."""
    return {v: "YZ" for v in graph.vertices if v not in graph.outputs}


def canonical_yz_gflow(graph: Graph) -> GFlow:
    """The single-layer witness available on any bipartite graph with I one side.

    Maps every measured vertex to itself and orders all measured vertices
    before all outputs, leaving the measured vertices mutually incomparable.
    Requires O = I.
    """
    if graph.inputs != graph.outputs or not bipartition_check(graph, graph.inputs):
        raise ValueError("graph not bipartite with the input set as one partition")
    measured = [v for v in graph.vertices if v not in graph.inputs]
    outputs = [v for v in graph.vertices if v in graph.inputs]
    g = {v: frozenset({v}) for v in measured}
    precedence = frozenset((v, o) for v in measured for o in outputs)
    layers = tuple(frozenset(layer) for layer in (measured, outputs) if layer)
    return GFlow(g=g, precedence=precedence, layers=layers)


# ---------------------------------------------------------------------------
# Exhaustive YZ-gflow search
# ---------------------------------------------------------------------------

def _bit_indices(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def search_gflow_yz(graph: Graph, cap: int = DEFAULT_SEARCH_CAP) -> GFlow | None:
    """Find a YZ-plane gflow by exhaustive search, or prove none exists.

    Enumerates, per measured vertex v, every candidate correction set
    S with v in S, S inside the non-input vertices and v outside Odd(S);
    a combination of candidates is a gflow exactly when the precedence
    digraph induced by the ordering conditions is acyclic. Acyclic
    combinations are in bijection with peel orders: some vertex can be
    measured last (its candidate reaches only itself and outputs), then
    some vertex second-to-last over the remainder, and so on. Whether a
    vertex is peelable depends only on the set of not-yet-peeled vertices,
    so the search memoizes over those subsets; a None result is therefore
    a proof that no candidate combination is acyclic. Deliberately
    independent of any bipartiteness reasoning.
    """
    n = len(graph.vertices)
    if n > cap:
        raise ValueError(f"search cap exceeded: {n} vertices > cap={cap}")
    if len(graph.inputs) != len(graph.outputs):
        raise ValueError("search requires |I| = |O|")
    index = {v: i for i, v in enumerate(graph.vertices)}
    nbr = [0] * n
    for u, v in graph.edges:
        nbr[index[u]] |= 1 << index[v]
        nbr[index[v]] |= 1 << index[u]
    all_mask = (1 << n) - 1
    output_mask = sum(1 << index[v] for v in graph.outputs)
    input_mask = sum(1 << index[v] for v in graph.inputs)
    measured_mask = all_mask & ~output_mask
    support = all_mask & ~input_mask

    measured = _bit_indices(measured_mask)
    candidates: dict[int, list[tuple[int, int]]] = {}
    for v in measured:
        vbit = 1 << v
        if not support & vbit:
            return None  # v must lie in its own correction set but is an input
        options: list[tuple[int, int]] = []
        free = support & ~vbit
        sub = free
        while True:
            s = sub | vbit
            odd = 0
            rest = s
            while rest:
                low = rest & -rest
                odd ^= nbr[low.bit_length() - 1]
                rest ^= low
            if not odd & vbit:
                options.append((s, (s | odd) & measured_mask & ~vbit))
            if sub == 0:
                break
            sub = (sub - 1) & free
        if not options:
            return None
        # singletons first so witnesses on friendly graphs surface immediately
        options.sort(key=lambda cand: (bin(cand[0]).count("1"), cand[0]))
        candidates[v] = options

    chosen: dict[int, int] = {}
    dead: set[int] = set()

    def peel(remaining: int) -> bool:
        """True iff the vertices in `remaining` admit a valid measurement suffix."""
        if remaining == 0:
            return True
        if remaining in dead:
            return False
        rest = remaining
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            before = remaining & ~low
            for s, measured_targets in candidates[v]:
                # v measured first among `remaining`: every constrained vertex
                # must already be outside, i.e. peeled later than v or an output
                if measured_targets & before:
                    continue
                if peel(before):
                    chosen[v] = s
                    return True
                break  # any other candidate fails on the same subset
        dead.add(remaining)
        return False

    if not peel(measured_mask):
        return None

    labels = graph.vertices
    g_map = {labels[v]: frozenset(labels[u] for u in _bit_indices(chosen[v])) for v in measured}
    precedence = set()
    succ_measured: dict[int, list[int]] = {v: [] for v in measured}
    pred_count = {v: 0 for v in measured}
    for v in measured:
        s = chosen[v]
        odd = 0
        rest = s
        while rest:
            low = rest & -rest
            odd ^= nbr[low.bit_length() - 1]
            rest ^= low
        for u in _bit_indices((s | odd) & ~(1 << v)):
            precedence.add((labels[v], labels[u]))
            if (1 << u) & measured_mask:
                succ_measured[v].append(u)
                pred_count[u] += 1
    # longest-path layering of the measured DAG; outputs close the schedule
    depth = {v: 0 for v in measured}
    ready = [v for v in measured if pred_count[v] == 0]
    topo: list[int] = []
    while ready:
        v = ready.pop()
        topo.append(v)
        for u in succ_measured[v]:
            depth[u] = max(depth[u], depth[v] + 1)
            pred_count[u] -= 1
            if pred_count[u] == 0:
                ready.append(u)
    layers: list[set[str]] = [set() for _ in range(max(depth.values(), default=-1) + 1)]
    for v in measured:
        layers[depth[v]].add(labels[v])
    if output_mask:
        layers.append({labels[o] for o in _bit_indices(output_mask)})
    flow = GFlow(g=g_map, precedence=frozenset(precedence), layers=tuple(frozenset(s) for s in layers))
    result = verify_gflow(graph, yz_planes(graph), flow)
    if not result:
        raise AssertionError(f"search produced an invalid witness: {result.violations}")
    return flow


# ---------------------------------------------------------------------------
# Witness structure checks (maximal correction sets, no internal edges)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessStructure:
    maximal_self_corrections: bool
    no_edges_in_correction_union: bool
    maximal_vertices: tuple[str, ...]
    correction_union: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.maximal_self_corrections and self.no_edges_in_correction_union


def witness_structure(flow: GFlow, graph: Graph) -> WitnessStructure:
    """Structural facts that hold for every valid YZ witness with O = I.

    (a) every measured vertex maximal in the order restricted to measured
        vertices has g(v) = {v};
    (b) the union of all correction sets spans no edge of the graph.
    """
    measured = set(flow.g)
    closure = _closure(flow)
    maximal = sorted(v for v in measured if not closure.get(v, set()) & measured)
    a_ok = all(flow.g[v] == frozenset({v}) for v in maximal)
    union: set[str] = set().union(*flow.g.values()) if flow.g else set()
    b_ok = all(not (u in union and v in union) for u, v in graph.edges)
    return WitnessStructure(a_ok, b_ok, tuple(maximal), tuple(sorted(union)))


# ---------------------------------------------------------------------------
# The sweep: search agrees with bipartiteness on every small connected graph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Discrepancy:
    n: int
    graph_index: int
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    flow_found: bool
    bipartite_with_inputs: bool


@dataclass
class SweepReport:
    max_n: int
    per_n: dict[int, dict[str, int]] = field(default_factory=dict)
    discrepancies: list[Discrepancy] = field(default_factory=list)
    io_mismatch_cases: int = 0
    io_mismatch_flows_found: int = 0
    witness_failures: list[Discrepancy] = field(default_factory=list)
    witnesses: list[tuple[Graph, GFlow]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies and not self.witness_failures and self.io_mismatch_flows_found == 0

    def to_json(self) -> dict:
        return {
            "max_n": self.max_n,
            "per_n": {
                str(n): dict(sorted(counts.items())) for n, counts in sorted(self.per_n.items())
            },
            "discrepancies": [
                {
                    "n": d.n,
                    "graph_index": d.graph_index,
                    "inputs": list(d.inputs),
                    "outputs": list(d.outputs),
                    "flow_found": d.flow_found,
                    "bipartite_with_inputs": d.bipartite_with_inputs,
                }
                for d in self.discrepancies + self.witness_failures
            ],
            "io_mismatch_cases": self.io_mismatch_cases,
            "io_mismatch_flows_found": self.io_mismatch_flows_found,
            "ok": self.ok,
        }


def _sweep_one_graph(args: tuple[int, int, int]) -> tuple[int, int, dict, list, list, list]:
    """Worker: all input-set choices with O = I for one enumerated graph.

    The bipartiteness side is evaluated on the effective graph (edges inside
    the input set dropped): those edges enter neither the prepared state nor
    any correction set, so the flow search is provably blind to them.
    """
    n, graph_index, cap = args
    base = list(enumerate_connected_graphs(n, cap=cap))[graph_index]
    counts = {"instances": 0, "flows_found": 0, "bipartite_instances": 0}
    discrepancies = []
    witness_failures = []
    witnesses = []
    vertices = base.vertices
    for mask in range(1 << n):
        inputs = frozenset(vertices[i] for i in range(n) if mask >> i & 1)
        g = with_io(base, inputs, inputs)
        flow = search_gflow_yz(g, cap=cap)
        expected = bipartition_check(effective_graph(g), inputs)
        counts["instances"] += 1
        counts["flows_found"] += flow is not None
        counts["bipartite_instances"] += expected
        record = Discrepancy(
            n, graph_index, tuple(sorted(inputs)), tuple(sorted(inputs)), flow is not None, expected
        )
        if (flow is not None) != expected:
            discrepancies.append(record)
        if flow is not None:
            witnesses.append((g, flow))
            if not witness_structure(flow, g):
                witness_failures.append(record)
    return n, graph_index, counts, discrepancies, witness_failures, witnesses


def default_workers() -> int:
    env = os.environ.get("PARITYFLOW_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def yz_bipartite_sweep(
    max_n: int,
    cap: int = DEFAULT_SEARCH_CAP,
    io_samples: int = 200,
    seed: int = 0,
    workers: int | None = None,
    keep_witnesses: bool = True,
) -> SweepReport:
    """Exhaustively confront YZ-gflow existence with bipartiteness.

    For every connected graph up to max_n vertices and every input choice
    with O = I, assert search_gflow_yz succeeds exactly when the graph is
    bipartite with I one partition; additionally sample io_samples instances
    with I != O (equal sizes), where no flow may exist.
    """
    if max_n > cap:
        raise ValueError(f"max_n={max_n} above enumeration cap {cap}")
    report = SweepReport(max_n=max_n)
    tasks = []
    for n in range(1, max_n + 1):
        count = len(list(enumerate_connected_graphs(n, cap=cap)))
        report.per_n[n] = {
            "graphs": count,
            "instances": 0,
            "flows_found": 0,
            "bipartite_instances": 0,
        }
        tasks.extend((n, i, cap) for i in range(count))

    workers = default_workers() if workers is None else max(1, workers)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_one_graph, tasks, chunksize=8))
    else:
        results = [_sweep_one_graph(t) for t in tasks]

    for n, _, counts, discrepancies, witness_failures, witnesses in results:
        for key, value in counts.items():
            report.per_n[n][key] += value
        report.discrepancies.extend(discrepancies)
        report.witness_failures.extend(witness_failures)
        if keep_witnesses:
            report.witnesses.extend(witnesses)

    # I != O instances: equal sizes, still no flow may exist
    rng = np.random.default_rng(seed)
    pools = {n: list(enumerate_connected_graphs(n, cap=cap)) for n in range(2, max_n + 1)}
    drawn = 0
    while drawn < io_samples:
        n = int(rng.integers(2, max_n + 1))
        base = pools[n][int(rng.integers(len(pools[n])))]
        size = int(rng.integers(1, n))
        verts = list(base.vertices)
        inputs = frozenset(str(v) for v in rng.choice(verts, size=size, replace=False))
        outputs = frozenset(str(v) for v in rng.choice(verts, size=size, replace=False))
        if inputs == outputs:
            continue
        flow = search_gflow_yz(with_io(base, inputs, outputs), cap=cap)
        report.io_mismatch_cases += 1
        report.io_mismatch_flows_found += flow is not None
        drawn += 1
    return report


# ---------------------------------------------------------------------------
# Witness serialization
# ---------------------------------------------------------------------------

def flow_to_json(flow: GFlow, planes: PlaneAssignment | None = None) -> dict:
    data = {
        "g": {v: sorted(s) for v, s in sorted(flow.g.items())},
        "layers": [sorted(layer) for layer in flow.layers],
    }
    if planes is not None:
        data["planes"] = dict(sorted(planes.items()))
    return data


def flow_from_json(data: dict) -> tuple[GFlow, dict[str, str] | None]:
    """Read a witness; the order is taken to be the layer order."""
    try:
        g = {v: frozenset(s) for v, s in data["g"].items()}
        layers = [frozenset(layer) for layer in data["layers"]]
    except KeyError as exc:
        raise ValueError(f"flow JSON missing field {exc.args[0]!r}") from exc
    precedence = {
        (v, u)
        for i, layer in enumerate(layers)
        for v in layer
        for j in range(i + 1, len(layers))
        for u in layers[j]
    }
    planes = data.get("planes")
    return GFlow(g=g, precedence=frozenset(precedence), layers=tuple(layers)), planes
