"""Signed Pauli strings and stabilizer groups over GF(2).

A Pauli string is stored as X and Z bit vectors over an ordered qubit-label
list plus a sign in {+1, -1}. Products of commuting real-signed Paulis stay
real-signed, which is the only regime needed here; imaginary phases are
rejected outright. Group-level questions (equality, independence) reduce to
GF(2) row arithmetic with exact sign tracking.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from parityflow.graph import Graph, neighbors
from parityflow.layout import ParityLayout


class PhaseError(ValueError):
    """A product produced an imaginary phase, outside the supported sign set."""


@dataclass(frozen=True, eq=False)
class PauliString:
    """Tensor product of single-qubit Paulis with an overall sign.

    x[i] and z[i] refer to labels[i]; both set means Y (= iXZ) on that qubit.
    """

    labels: tuple[str, ...]
    x: np.ndarray
    z: np.ndarray
    sign: int = 1

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=np.uint8) % 2
        z = np.asarray(self.z, dtype=np.uint8) % 2
        if x.shape != (len(self.labels),) or z.shape != (len(self.labels),):
            raise ValueError("bit vectors must match the label list")
        if self.sign not in (1, -1):
            raise PhaseError(f"sign must be +1 or -1, got {self.sign!r}")
        x.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.sign == other.sign
            and bool(np.array_equal(self.x, other.x))
            and bool(np.array_equal(self.z, other.z))
        )

    def __repr__(self) -> str:
        return f"PauliString({pauli_to_text(self)!r})"

    @property
    def is_identity(self) -> bool:
        return not self.x.any() and not self.z.any()


def pauli_from_ops(labels: Sequence[str], ops: Mapping[str, str], sign: int = 1) -> PauliString:
    """Build a Pauli string from {label: "X"|"Y"|"Z"} with identity elsewhere."""
    index = {q: i for i, q in enumerate(labels)}
    x = np.zeros(len(labels), dtype=np.uint8)
    z = np.zeros(len(labels), dtype=np.uint8)
    for q, op in ops.items():
        if q not in index:
            raise ValueError(f"unknown qubit {q!r}")
        if op not in ("X", "Y", "Z"):
            raise ValueError(f"unknown Pauli {op!r}")
        if op in ("X", "Y"):
            x[index[q]] = 1
        if op in ("Z", "Y"):
            z[index[q]] = 1
    return PauliString(tuple(labels), x, z, sign)


def pauli_to_text(p: PauliString) -> str:
    """Subscripted rendering, e.g. "+Z_(12) Z_1 Z_2" or "-Y_3"."""
    parts = []
    for i, q in enumerate(p.labels):
        op = {(0, 0): None, (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}[(int(p.x[i]), int(p.z[i]))]
        if op:
            parts.append(f"{op}_{q}")
    body = " ".join(parts) if parts else "I"
    return ("+" if p.sign == 1 else "-") + body


def pauli_from_text(labels: Sequence[str], text: str) -> PauliString:
    text = text.strip()
    sign = 1
    if text[:1] in "+-":
        sign = 1 if text[0] == "+" else -1
        text = text[1:].strip()
    ops: dict[str, str] = {}
    if text != "I":
        for token in text.split():
            op, _, q = token.partition("_")
            if q in ops:
                raise ValueError(f"qubit {q!r} repeated")
            ops[q] = op
    return pauli_from_ops(labels, ops, sign)


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Product a*b; raises PhaseError if the result has an imaginary phase.

    With each qubit stored as i^(x·z) X^x Z^z (so both bits set is Y), the
    i-exponent of a single-qubit product is x1·z1 + x2·z2 - x3·z3 + 2·z1·x2
    with (x3, z3) the XOR of the bit pairs. Commuting real-signed factors
    always land back on a real sign.
    """
    if a.labels != b.labels:
        raise ValueError("label sets differ")
    ax, az, bx, bz = (v.astype(np.int64) for v in (a.x, a.z, b.x, b.z))
    x3 = ax ^ bx
    z3 = az ^ bz
    exponent = int(np.sum(ax * az + bx * bz - x3 * z3 + 2 * az * bx)) % 4
    if exponent % 2:
        raise PhaseError("product has imaginary phase")
    sign = a.sign * b.sign * (1 if exponent == 0 else -1)
    return PauliString(a.labels, x3.astype(np.uint8), z3.astype(np.uint8), sign)


def commutes(a: PauliString, b: PauliString) -> bool:
    """Symplectic inner product vanishes exactly for commuting strings."""
    if a.labels != b.labels:
        raise ValueError("label sets differ")
    overlap = int(np.sum(a.x.astype(np.int64) * b.z) + np.sum(a.z.astype(np.int64) * b.x))
    return overlap % 2 == 0


@dataclass(frozen=True, eq=False)
class StabilizerGroup:
    """Mutually commuting, independent signed Pauli generators."""

    labels: tuple[str, ...]
    generators: tuple[PauliString, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.labels != self.labels:
                raise ValueError("generator labels differ from group labels")
        for i, g in enumerate(self.generators):
            for h in self.generators[i + 1 :]:
                if not commutes(g, h):
                    raise ValueError(f"generators do not commute: {pauli_to_text(g)}, {pauli_to_text(h)}")
        if self.generators:
            mat = np.array([np.concatenate([g.x, g.z]) for g in self.generators], dtype=np.uint8)
            if _gf2_rank(mat) != len(self.generators):
                raise ValueError("generators are not independent over GF(2)")


def _gf2_rank(mat: np.ndarray) -> int:
    m = mat.copy() % 2
    rank = 0
    rows, cols = m.shape
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def _rref_with_signs(group: StabilizerGroup) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form of the generator matrix, rows as group elements.

    Row operations are genuine Pauli multiplications, so the signs of the
    canonical rows are the signs those elements carry in the group. The RREF
    basis of a GF(2) row space is unique, making (matrix, signs) a complete
    invariant of the signed group.
    """
    paulis = list(group.generators)
    if not paulis:
        return np.zeros((0, 2 * len(group.labels)), dtype=np.uint8), ()
    rows = [np.concatenate([p.x, p.z]) for p in paulis]
    rank = 0
    cols = 2 * len(group.labels)
    for col in range(cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        paulis[rank], paulis[pivot] = paulis[pivot], paulis[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                paulis[r] = multiply(paulis[r], paulis[rank])
                rows[r] = np.concatenate([paulis[r].x, paulis[r].z])
        rank += 1
    matrix = np.array([np.concatenate([p.x, p.z]) for p in paulis], dtype=np.uint8)
    return matrix, tuple(p.sign for p in paulis)


def groups_equal(a: StabilizerGroup, b: StabilizerGroup) -> bool:
    """True iff the generated signed groups coincide (not just generator lists)."""
    if a.labels != b.labels:
        raise ValueError("incompatible qubit label sets")
    if len(a.generators) != len(b.generators):
        return False
    mat_a, signs_a = _rref_with_signs(a)
    mat_b, signs_b = _rref_with_signs(b)
    return bool(np.array_equal(mat_a, mat_b)) and signs_a == signs_b


def hadamard_conjugate(group: StabilizerGroup, subset: Iterable[str]) -> StabilizerGroup:
    """Conjugate every generator by H on each qubit in subset.

    X and Z swap on conjugated qubits; a Y there flips the sign (HYH = -Y).
    An involution and a group homomorphism.
    """
    members = frozenset(subset)
    unknown = members - set(group.labels)
    if unknown:
        raise ValueError(f"qubits {sorted(unknown)} not in the group's label list")
    mask = np.array([q in members for q in group.labels], dtype=bool)
    out = []
    for g in group.generators:
        x = g.x.copy()
        z = g.z.copy()
        x[mask], z[mask] = z[mask], x[mask]
        flips = int(np.sum(g.x[mask] & g.z[mask]))
        out.append(PauliString(group.labels, x, z, g.sign * (-1) ** flips))
    return StabilizerGroup(group.labels, tuple(out))


def parity_generators(layout: ParityLayout) -> StabilizerGroup:
    """One generator per parity qubit: Z there and Z on each tracked data qubit."""
    labels = tuple(layout.data_qubits) + tuple(layout.parity_qubits)
    gens = [
        pauli_from_ops(labels, {p: "Z", **{i: "Z" for i in layout.parity_sets[p]}})
        for p in layout.parity_qubits
    ]
    return StabilizerGroup(labels, tuple(gens))


def graph_generators(g: Graph) -> StabilizerGroup:
    """One generator per non-input vertex v: X at v, Z across its neighborhood."""
    labels = tuple(g.vertices)
    gens = [
        pauli_from_ops(labels, {v: "X", **{u: "Z" for u in neighbors(g, v)}})
        for v in g.vertices
        if v not in g.inputs
    ]
    return StabilizerGroup(labels, tuple(gens))


def group_to_json(group: StabilizerGroup) -> dict:
    return {
        "qubits": list(group.labels),
        "generators": [pauli_to_text(g) for g in group.generators],
    }


def group_from_json(data: dict) -> StabilizerGroup:
    try:
        labels = tuple(data["qubits"])
        gens = tuple(pauli_from_text(labels, text) for text in data["generators"])
    except KeyError as exc:
        raise ValueError(f"stabilizer JSON missing field {exc.args[0]!r}") from exc
    return StabilizerGroup(labels, gens)
