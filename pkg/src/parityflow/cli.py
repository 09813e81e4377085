"""Command-line front end: layouts, stabilizer checks, simulations, sweeps.

Machine-readable JSON goes to stdout with sorted keys and 17-significant-
digit floats so identical invocations are byte-identical; human summaries
go to stderr. Exit codes: 0 success or agreement, 1 verified disagreement,
2 usage or input errors.
"""

from __future__ import annotations

import functools
import json
import sys

import click
import numpy as np

from parityflow import gflow as gflow_mod
from parityflow import graph as graph_mod
from parityflow import layout as layout_mod
from parityflow import mbqc_engine, parity_engine, pauli, simulator


def _dump(value) -> None:
    sys.stdout.write(_canonical_json(value))
    sys.stdout.write("\n")


def _canonical_json(value) -> str:
    if isinstance(value, dict):
        items = sorted(value.items(), key=lambda kv: kv[0])
        return "{" + ", ".join(f"{json.dumps(k)}: {_canonical_json(v)}" for k, v in items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_canonical_json(v) for v in value) + "]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, (int, str)):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {type(value)!r}")


class InputError(click.ClickException):
    """Unusable input file or field; exits 2 like a usage error."""

    exit_code = 2


def _load_json(path: str) -> dict:
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _guard(fn):
    """Input and usage failures exit 2 with a diagnostic on stderr."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except (ValueError, KeyError, TypeError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


@click.group()
def main() -> None:
    """Parity computing, YZ-plane measurement-based computing, gflow tooling."""


@main.group()
def lhz() -> None:
    """Parity layout construction and inspection."""


@lhz.command("build")
@click.option("--n", type=int, required=True, help="Number of data qubits.")
@_guard
def lhz_build(n: int) -> None:
    layout = layout_mod.build_all_pairs_layout(n)
    _dump(layout_mod.layout_to_json(layout))
    click.echo(f"layout with {len(layout.qubits)} qubits ({len(layout.parity_qubits)} parity)", err=True)


@lhz.command("graph")
@click.option("--layout", "layout_path", required=True, type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="json")
@_guard
def lhz_graph(layout_path: str, fmt: str) -> None:
    layout = layout_mod.layout_from_json(_load_json(layout_path))
    g = layout_mod.induced_graph(layout)
    if fmt == "dot":
        sys.stdout.write(graph_mod.graph_to_dot(g))
    else:
        _dump(graph_mod.graph_to_json(g))
    click.echo(f"graph with {len(g.vertices)} vertices, {len(g.edges)} edges", err=True)


@main.group()
def stab() -> None:
    """Stabilizer-group computations."""


@stab.command("check-equivalence")
@click.option("--layout", "layout_path", required=True, type=click.Path())
@_guard
def stab_check(layout_path: str) -> None:
    """Parity generators against Hadamard-conjugated graph-code generators."""
    layout = layout_mod.layout_from_json(_load_json(layout_path))
    parity_group = pauli.parity_generators(layout)
    graph_group = pauli.graph_generators(layout_mod.induced_graph(layout))
    conjugated = pauli.hadamard_conjugate(graph_group, layout.parity_qubits)
    equal = pauli.groups_equal(parity_group, conjugated)
    _dump(
        {
            "equal": equal,
            "parity_generators": pauli.group_to_json(parity_group)["generators"],
            "conjugated_graph_generators": pauli.group_to_json(conjugated)["generators"],
        }
    )
    click.echo("stabilizer groups equal" if equal else "stabilizer groups DIFFER", err=True)
    if not equal:
        sys.exit(1)


def _load_program(path: str):
    data = _load_json(path)
    try:
        layout = layout_mod.layout_from_json(data["layout"])
        layers = parity_engine.layers_from_json(data["layers"])
    except KeyError as exc:
        raise InputError(f"program JSON missing field {exc.args[0]!r}") from exc
    if "input" in data:
        amps = np.array([complex(re, im) for re, im in data["input"]])
        psi = simulator.Statevector(tuple(layout.data_qubits), amps / np.linalg.norm(amps))
    else:
        psi = simulator.basis_state(layout.data_qubits, "0" * layout.n)
    return layout, layers, psi


def _measurement_count(layout, layers) -> int:
    total = 0
    for index, layer in enumerate(layers):
        if index == len(layers) - 1 or layer.decode is None:
            total += len(layout.parity_qubits)
        else:
            total += len(layer.decode)
    return total


def _branch_outputs(run, count: int, branches: str, samples: int, seed: int):
    if branches == "all":
        outcome_lists = list(parity_engine.all_outcome_branches(count))
    else:
        rng = np.random.default_rng(seed)
        outcome_lists = [
            [1 if rng.random() < 0.5 else -1 for _ in range(count)] for _ in range(samples)
        ]
    outputs = []
    for outcomes in outcome_lists:
        try:
            outputs.append(run(list(outcomes)))
        except simulator.ZeroProbabilityError:
            continue  # branch unreachable for this input state
    return outputs


def _sim_command(engine: str, program: str, branches: str, samples: int, seed: int, tol: float) -> None:
    layout, layers, psi = _load_program(program)
    if engine == "mbqc":
        for layer in layers:
            if layer.decode is not None:
                raise InputError("field 'decode': measurement-based runs decode fully each layer")
        # an explicit graph may override the layout-induced one, as long as
        # its inputs carry the same labels as the data register
        data = _load_json(program)
        if "graph" in data:
            graph = graph_mod.graph_from_json(data["graph"])
            if graph.inputs != frozenset(psi.labels):
                raise InputError("field 'graph': inputs must match the program's data qubits")
        else:
            graph = layout_mod.induced_graph(layout)
        flow = gflow_mod.canonical_yz_gflow(graph)
        count = (len(graph.vertices) - len(graph.inputs)) * len(layers)

        def run(outcomes):
            state, records = mbqc_engine.run_repeated_mbqc(graph, psi, layers, flow, outcomes)
            return state, records
    else:
        count = _measurement_count(layout, layers)

        def run(outcomes):
            state, records = parity_engine.run_computation(layout, psi, layers, outcomes)
            return state, records

    outputs = _branch_outputs(run, count, branches, samples, seed)
    if not outputs:
        raise InputError("no reachable outcome branch")
    reference, records = outputs[0]
    max_distance = max(
        simulator.distance_up_to_phase(reference, state) for state, _ in outputs
    )
    _dump(
        {
            "engine": engine,
            "qubits": list(reference.labels),
            "amplitudes": simulator.amplitudes_to_json(reference),
            "record": [simulator.record_to_json(r) for r in records],
            "branches_run": len(outputs),
            "max_branch_distance": max_distance,
        }
    )
    click.echo(
        f"{engine}: {len(outputs)} branch(es), max distance {max_distance:.3e}", err=True
    )
    if max_distance > tol:
        sys.exit(1)


@main.group()
def sim() -> None:
    """Run programs on one engine and check branch independence."""


@sim.command("parity")
@click.option("--program", required=True, type=click.Path())
@click.option("--branches", type=click.Choice(["all", "sample"]), default="sample")
@click.option("--samples", type=int, default=8, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=1e-12, show_default=True)
@_guard
def sim_parity(program: str, branches: str, samples: int, seed: int, tol: float) -> None:
    _sim_command("parity", program, branches, samples, seed, tol)


@sim.command("mbqc")
@click.option("--program", required=True, type=click.Path())
@click.option("--branches", type=click.Choice(["all", "sample"]), default="sample")
@click.option("--samples", type=int, default=8, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=1e-12, show_default=True)
@_guard
def sim_mbqc(program: str, branches: str, samples: int, seed: int, tol: float) -> None:
    _sim_command("mbqc", program, branches, samples, seed, tol)


@main.command("compare")
@click.option("--program", required=True, type=click.Path())
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_guard
def compare(program: str, tol: float, seed: int) -> None:
    """Run both engines on one program and report the output distance."""
    layout, layers, psi = _load_program(program)
    for layer in layers:
        if layer.decode is not None:
            raise InputError("field 'decode': cross-engine programs decode fully each layer")
    graph = layout_mod.induced_graph(layout)
    flow = gflow_mod.canonical_yz_gflow(graph)
    parity_out, _ = parity_engine.run_computation(
        layout, psi, layers, np.random.default_rng(seed)
    )
    mbqc_out, _ = mbqc_engine.run_repeated_mbqc(
        graph, psi, layers, flow, np.random.default_rng(seed + 1)
    )
    distance = simulator.distance_up_to_phase(parity_out, mbqc_out)
    agree = distance < tol
    _dump({"distance": distance, "tolerance": tol, "agree": agree})
    click.echo(f"engines {'agree' if agree else 'DISAGREE'}: distance {distance:.3e}", err=True)
    if not agree:
        sys.exit(1)


@main.group("gflow")
def gflow_group() -> None:
    """Verify and search flows on open graphs."""


@gflow_group.command("verify")
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--flow", "flow_path", required=True, type=click.Path())
@_guard
def gflow_verify(graph_path: str, flow_path: str) -> None:
    g = graph_mod.graph_from_json(_load_json(graph_path))
    flow, planes = gflow_mod.flow_from_json(_load_json(flow_path))
    if planes is None:
        planes = gflow_mod.yz_planes(g)
    result = gflow_mod.verify_gflow(g, planes, flow)
    _dump(
        {
            "valid": result.ok,
            "violations": [
                {"vertex": v.vertex, "condition": v.condition, "message": v.message}
                for v in result.violations
            ],
        }
    )
    click.echo("flow valid" if result.ok else "flow INVALID", err=True)
    if not result.ok:
        sys.exit(1)


@gflow_group.command("search")
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--cap", type=int, default=gflow_mod.DEFAULT_SEARCH_CAP, show_default=True)
@_guard
def gflow_search(graph_path: str, cap: int) -> None:
    g = graph_mod.graph_from_json(_load_json(graph_path))
    flow = gflow_mod.search_gflow_yz(g, cap=cap)
    if flow is None:
        _dump({"found": False})
        click.echo("no YZ flow exists", err=True)
    else:
        _dump({"found": True, **gflow_mod.flow_to_json(flow, gflow_mod.yz_planes(g))})
        click.echo(f"flow found with {len(flow.layers)} layers", err=True)


@main.command("sweep")
@click.option("--max-n", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--io-samples", type=int, default=200, show_default=True)
@click.option("--workers", type=int, default=None, help="Defaults to PARITYFLOW_WORKERS or CPU count.")
@_guard
def sweep(max_n: int, seed: int, io_samples: int, workers: int | None) -> None:
    """Exhaustive flow-existence versus bipartiteness over small graphs."""
    report = gflow_mod.yz_bipartite_sweep(
        max_n, io_samples=io_samples, seed=seed, workers=workers, keep_witnesses=False
    )
    _dump(report.to_json())
    click.echo(
        f"swept {sum(c['graphs'] for c in report.per_n.values())} graphs, "
        f"{sum(c['instances'] for c in report.per_n.values())} instances, "
        f"{'no discrepancies' if report.ok else 'DISCREPANCIES FOUND'}",
        err=True,
    )
    if not report.ok:
        sys.exit(1)
