"""Parity layouts: data + parity qubits, constraint CNOTs, induced graphs.

A layout declares which subset of data qubits each parity qubit tracks and
an ordered CNOT list realizing those parities on fresh ancillas. The
all-pairs builder produces the standard n(n+1)/2-qubit arrangement; user
layouts may route parities through other parity qubits, which is why the
constraint list is ordered and separately validated.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from parityflow.graph import Graph, make_graph


@dataclass(frozen=True)
class Gate:
    """One gate application; angle is set only for RZ/RX."""

    name: str
    qubits: tuple[str, ...]
    angle: float | None = None

    _ARITY = {"CNOT": 2, "CZ": 2, "H": 1, "RZ": 1, "RX": 1}

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if self.name not in self._ARITY:
            raise ValueError(f"unknown gate {self.name!r}")
        if len(self.qubits) != self._ARITY[self.name]:
            raise ValueError(f"{self.name} takes {self._ARITY[self.name]} qubit(s)")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.name} qubits must be distinct")
        if (self.angle is None) == (self.name in ("RZ", "RX")):
            raise ValueError(f"angle required exactly for rotations, got {self!r}")


def cnot(control: str, target: str) -> Gate:
    return Gate("CNOT", (control, target))


def cz(u: str, v: str) -> Gate:
    return Gate("CZ", (u, v))


def hadamard(q: str) -> Gate:
    return Gate("H", (q,))


def rz(q: str, angle: float) -> Gate:
    return Gate("RZ", (q,), float(angle))


def rx(q: str, angle: float) -> Gate:
    return Gate("RX", (q,), float(angle))


CircuitDescription = tuple[Gate, ...]


def render_circuit(circuit: Iterable[Gate]) -> str:
    """Newline-separated gate list, stable for diffing."""
    lines = []
    for g in circuit:
        parts = [g.name, *g.qubits]
        if g.angle is not None:
            parts.append(format(g.angle, ".17g"))
        lines.append(" ".join(parts))
    return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class ParityLayout:
    """n data qubits, labeled parity qubits with their tracked sets, CNOT list."""

    n: int
    data_qubits: tuple[str, ...]
    parity_qubits: tuple[str, ...]
    parity_sets: Mapping[str, frozenset[str]]
    constraints: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parity_sets", {p: frozenset(s) for p, s in self.parity_sets.items()})
        object.__setattr__(self, "constraints", tuple((c, t) for c, t in self.constraints))
        if self.n != len(self.data_qubits):
            raise ValueError("n must equal the number of data qubits")
        all_qubits = set(self.data_qubits) | set(self.parity_qubits)
        if len(all_qubits) != len(self.data_qubits) + len(self.parity_qubits):
            raise ValueError("duplicate qubit labels")
        if set(self.parity_sets) != set(self.parity_qubits):
            raise ValueError("parity_sets keys must be exactly the parity qubits")
        seen = set()
        for p in self.parity_qubits:
            s = self.parity_sets[p]
            if not s:
                raise ValueError(f"parity set of {p!r} is empty")
            if not s <= set(self.data_qubits):
                raise ValueError(f"parity set of {p!r} contains non-data qubits")
            if s in seen:
                raise ValueError(f"parity set of {p!r} duplicates another parity qubit")
            seen.add(s)
        for c, t in self.constraints:
            if c not in all_qubits or t not in all_qubits:
                raise ValueError(f"constraint ({c!r}, {t!r}) references unknown qubits")
            if t not in self.parity_sets:
                raise ValueError(f"constraint targets non-parity qubit {t!r}")

    @property
    def qubits(self) -> tuple[str, ...]:
        return self.data_qubits + self.parity_qubits


def build_all_pairs_layout(n: int) -> ParityLayout:
    """Data qubits "1".."n" plus one parity qubit "(ij)" per pair i < j.

    Constraints pair each data qubit with the fresh parity ancilla, in
    data-index-lexicographic order, so the total register has n(n+1)/2
    qubits of which n(n-1)/2 hold pair parities.
    """
    if n < 1:
        raise ValueError("n must be positive")
    data = tuple(str(i) for i in range(1, n + 1))
    parity = []
    sets = {}
    constraints = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            label = f"({i}{j})"
            parity.append(label)
            sets[label] = frozenset({str(i), str(j)})
            constraints.append((str(i), label))
            constraints.append((str(j), label))
    return ParityLayout(n, data, tuple(parity), sets, tuple(constraints))


def encoding_circuit(layout: ParityLayout) -> CircuitDescription:
    """The constraint CNOTs, in stored order."""
    return tuple(cnot(c, t) for c, t in layout.constraints)


def induced_graph(layout: ParityLayout) -> Graph:
    """Vertices are all qubits; each parity qubit joins the data qubits it tracks.

    Data qubits form the input and output sets. With parity sets inside the
    data register, every edge crosses the data/parity divide, so the result
    is bipartite with the data side as one partition.
    """
    edges = [
        (i, p)
        for p in layout.parity_qubits
        for i in sorted(layout.parity_sets[p], key=layout.data_qubits.index)
    ]
    return make_graph(layout.qubits, edges, inputs=layout.data_qubits, outputs=layout.data_qubits)


@dataclass(frozen=True)
class ConstraintReport:
    ok: bool
    counterexample: str | None = None
    parity_qubit: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_constraints(layout: ParityLayout) -> ConstraintReport:
    """Check the CNOT list realizes every declared parity set.

    Runs the constraints classically over every data basis state (CNOTs act
    on basis states as bit updates) and compares each parity qubit against
    the XOR of its tracked bits. Parity-qubit controls are allowed, so chain
    layouts that build one parity from another validate too.
    """
    order = layout.qubits
    position = {q: i for i, q in enumerate(order)}
    for x in range(1 << layout.n):
        bits = [0] * len(order)
        for i in range(layout.n):
            bits[i] = x >> (layout.n - 1 - i) & 1
        for c, t in layout.constraints:
            bits[position[t]] ^= bits[position[c]]
        for p in layout.parity_qubits:
            want = 0
            for q in layout.parity_sets[p]:
                want ^= bits[position[q]]
            if bits[position[p]] != want:
                basis = "".join(str(b) for b in bits[: layout.n])
                return ConstraintReport(False, counterexample=basis, parity_qubit=p)
    return ConstraintReport(True)


def layout_to_json(layout: ParityLayout) -> dict:
    return {
        "n": layout.n,
        "parity": [
            {"label": p, "set": sorted(layout.parity_sets[p], key=layout.data_qubits.index)}
            for p in layout.parity_qubits
        ],
        "constraints": [list(c) for c in layout.constraints],
    }


def layout_from_json(data: dict) -> ParityLayout:
    try:
        n = int(data["n"])
        parity_entries = data["parity"]
        constraints = tuple((c, t) for c, t in data["constraints"])
    except KeyError as exc:
        raise ValueError(f"layout JSON missing field {exc.args[0]!r}") from exc
    data_qubits = tuple(str(i) for i in range(1, n + 1))
    parity_qubits = tuple(entry["label"] for entry in parity_entries)
    sets = {entry["label"]: frozenset(entry["set"]) for entry in parity_entries}
    return ParityLayout(n, data_qubits, parity_qubits, sets, constraints)
