"""Simple undirected graphs with distinguished input/output vertex sets.

Vertices are opaque strings; data qubits use labels like "1", "2" and
parity qubits composite labels like "(12)". All operations are pure
functions of immutable values.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

# enumerate_connected_graphs refuses n above this unless the caller raises it
DEFAULT_ENUMERATION_CAP = 8

VertexSet = frozenset[str]


@dataclass(frozen=True)
class Graph:
    """Simple graph: no self-loops, no duplicate edges, I and O subsets of V."""

    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    inputs: VertexSet = frozenset()
    outputs: VertexSet = frozenset()

    def __post_init__(self) -> None:
        index = {v: i for i, v in enumerate(self.vertices)}
        if len(index) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        normalized = set()
        for edge in self.edges:
            u, v = edge
            if u == v:
                raise ValueError(f"self-loop at vertex {u!r}")
            if u not in index or v not in index:
                raise ValueError(f"edge {edge!r} has endpoint not in vertex set")
            normalized.add((u, v) if index[u] < index[v] else (v, u))
        object.__setattr__(self, "edges", frozenset(normalized))
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        object.__setattr__(self, "outputs", frozenset(self.outputs))
        for name, subset in (("inputs", self.inputs), ("outputs", self.outputs)):
            if not subset <= set(self.vertices):
                raise ValueError(f"{name} not a subset of the vertex set")


def make_graph(
    vertices: Iterable[str],
    edges: Iterable[tuple[str, str]],
    inputs: Iterable[str] = (),
    outputs: Iterable[str] = (),
) -> Graph:
    return Graph(tuple(vertices), frozenset(tuple(e) for e in edges), frozenset(inputs), frozenset(outputs))


def with_io(g: Graph, inputs: Iterable[str], outputs: Iterable[str]) -> Graph:
    """Same graph with the input/output designation replaced."""
    return replace(g, inputs=frozenset(inputs), outputs=frozenset(outputs))


def _adjacency(g: Graph) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = {v: set() for v in g.vertices}
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def neighbors(g: Graph, v: str) -> VertexSet:
    """Neighborhood of v: all vertices sharing an edge with v."""
    if v not in g.vertices:
        raise ValueError(f"vertex {v!r} not in graph")
    return frozenset(u for edge in g.edges if v in edge for u in edge if u != v)


def odd_neighborhood(g: Graph, k: Iterable[str]) -> VertexSet:
    """Vertices with an odd number of neighbors inside k.

    Linear over symmetric difference: Odd(K1 xor K2) = Odd(K1) xor Odd(K2),
    since each member of k contributes its neighborhood mod 2.
    """
    members = frozenset(k)
    unknown = members - set(g.vertices)
    if unknown:
        raise ValueError(f"vertices {sorted(unknown)} not in graph")
    acc: set[str] = set()
    for v in members:
        acc ^= set(neighbors(g, v))
    return frozenset(acc)


def bipartition_check(g: Graph, part: Iterable[str]) -> bool:
    """True iff `part` is exactly one side of a bipartition of g.

    Equivalent test: no edge lies entirely inside `part` and no edge lies
    entirely inside its complement, so every edge crosses the cut.
    """
    members = frozenset(part)
    unknown = members - set(g.vertices)
    if unknown:
        raise ValueError(f"vertices {sorted(unknown)} not in graph")
    for u, v in g.edges:
        if (u in members) == (v in members):
            return False
    return True


def effective_graph(g: Graph) -> Graph:
    """The graph actually entangled: edges entirely inside the input set dropped.

    Input vertices carry the prepared input state, so edges between two
    inputs contribute no entangling gate and no stabilizer; correction-set
    arithmetic is likewise blind to them.
    """
    kept = frozenset(e for e in g.edges if not (e[0] in g.inputs and e[1] in g.inputs))
    return replace(g, edges=kept)


def is_connected(g: Graph) -> bool:
    if not g.vertices:
        return True
    adj = _adjacency(g)
    seen = {g.vertices[0]}
    stack = [g.vertices[0]]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(g.vertices)


# ---------------------------------------------------------------------------
# Canonical forms and enumeration of connected graphs up to isomorphism
# ---------------------------------------------------------------------------

def _pair_index(n: int, i: int, j: int) -> int:
    """Position of pair (i, j), i < j, in the lexicographic pair list."""
    return i * n - i * (i + 1) // 2 + (j - i - 1)


@lru_cache(maxsize=None)
def _perm_gather_table(n: int) -> np.ndarray:
    """table[p, k]: which original pair-bit lands at position k under permutation p."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    pairs = np.array([(i, j) for i in range(n) for j in range(i + 1, n)], dtype=np.int64)
    a = perms[:, pairs[:, 0]]
    b = perms[:, pairs[:, 1]]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    return lo * n - lo * (lo + 1) // 2 + (hi - lo - 1)


@lru_cache(maxsize=None)
def _pair_weights(n: int) -> np.ndarray:
    m = n * (n - 1) // 2
    return (1 << np.arange(m - 1, -1, -1)).astype(np.int64) if m else np.zeros(0, dtype=np.int64)


def _canonical_bits(n: int, bits: np.ndarray) -> int:
    """Minimum adjacency bit-string over all vertex permutations, as an integer."""
    if n == 1:
        return 0
    table = _perm_gather_table(n)
    values = bits[table] @ _pair_weights(n)
    return int(values.min())


def canonical_form(g: Graph) -> int:
    """Isomorphism-invariant canonical form (input/output sets ignored)."""
    n = len(g.vertices)
    index = {v: i for i, v in enumerate(g.vertices)}
    bits = np.zeros(n * (n - 1) // 2, dtype=np.int64)
    for u, v in g.edges:
        i, j = sorted((index[u], index[v]))
        bits[_pair_index(n, i, j)] = 1
    return _canonical_bits(n, bits)


def _graph_from_mask(n: int, mask: int) -> Graph:
    """Graph on vertices "1".."n" whose pair bits are given by mask (big-endian pair order)."""
    m = n * (n - 1) // 2
    vertices = tuple(str(i + 1) for i in range(n))
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if mask >> (m - 1 - _pair_index(n, i, j)) & 1:
                edges.append((vertices[i], vertices[j]))
    return make_graph(vertices, edges)


@lru_cache(maxsize=None)
def _connected_reps(n: int) -> tuple[int, ...]:
    """Canonical pair-bit masks of all connected graphs on n vertices.

    Built by augmentation: every connected graph on n vertices arises from a
    connected graph on n-1 vertices (delete a leaf of a spanning tree) by
    re-attaching the removed vertex to a nonempty neighbor subset.
    """
    if n == 1:
        return (0,)
    found: set[int] = set()
    m_old = (n - 1) * (n - 2) // 2
    m_new = n * (n - 1) // 2
    for parent in _connected_reps(n - 1):
        base = np.zeros(m_new, dtype=np.int64)
        for i in range(n - 1):
            for j in range(i + 1, n - 1):
                base[_pair_index(n, i, j)] = parent >> (m_old - 1 - _pair_index(n - 1, i, j)) & 1
        for subset in range(1, 1 << (n - 1)):
            bits = base.copy()
            for i in range(n - 1):
                if subset >> i & 1:
                    bits[_pair_index(n, i, n - 1)] = 1
            found.add(_canonical_bits(n, bits))
    return tuple(sorted(found))


def enumerate_connected_graphs(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Graph]:
    """One representative per isomorphism class of connected graphs on n vertices.

    Deterministic order (ascending canonical form). Counts for n = 1..8:
    1, 1, 2, 6, 21, 112, 853, 11117.
    """
    if n < 1:
        raise ValueError("vertex count must be positive")
    if n > cap:
        raise ValueError(f"enumeration cap exceeded: n={n} > cap={cap}")
    for mask in _connected_reps(n):
        yield _graph_from_mask(n, mask)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def graph_to_json(g: Graph) -> dict:
    index = {v: i for i, v in enumerate(g.vertices)}
    return {
        "vertices": list(g.vertices),
        "edges": sorted([list(e) for e in g.edges], key=lambda e: (index[e[0]], index[e[1]])),
        "inputs": sorted(g.inputs, key=index.get),
        "outputs": sorted(g.outputs, key=index.get),
    }


def graph_from_json(data: dict) -> Graph:
    try:
        return make_graph(
            data["vertices"],
            [tuple(e) for e in data["edges"]],
            data.get("inputs", ()),
            data.get("outputs", ()),
        )
    except KeyError as exc:
        raise ValueError(f"graph JSON missing field {exc.args[0]!r}") from exc


def graph_to_dot(g: Graph) -> str:
    """DOT rendering; input vertices are drawn as boxes, the rest as circles."""
    lines = ["graph {"]
    for v in g.vertices:
        shape = "box" if v in g.inputs else "circle"
        lines.append(f'  "{v}" [shape={shape}];')
    index = {v: i for i, v in enumerate(g.vertices)}
    for u, v in sorted(g.edges, key=lambda e: (index[e[0]], index[e[1]])):
        lines.append(f'  "{u}" -- "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
