"""Decoupling group representations, Cayley graphs, and Eulerian walks.

The two-generator group {I, X, Y, Z} acts by collective Pauli operators
(n-fold tensor powers).  Averaging an error operator over the group kills
every coupling that anticommutes with at least one collective element, which
is the decoupling condition the pulse sequences exploit.  The Cayley graph
of the group under generators (X, Y) supports an Eulerian cycle (idle
decoupling); attaching an identity-block self-loop to each non-identity
vertex plus one gate-block edge from the identity to a fresh vertex turns it
into an Eulerian-path problem whose walk is the corrected-gate layout.

Walk construction is deterministic: Hierholzer's algorithm consuming
out-edges in a fixed priority order (generator order, then identity blocks,
then the gate block) with sub-tours spliced at the first visited vertex that
still has unused edges.  Compiled sequences are therefore bit-reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import PAULIS, kron_all, mod_bath, spectral_norm

M_I_LABEL = "M_I"
M_U_LABEL = "M_U"


@dataclass(frozen=True)
class DDGroupRep:
    """Projective representation of a decoupling group on the system space."""

    labels: tuple[str, ...]
    unitaries: dict[str, np.ndarray]
    generators: tuple[str, ...]
    table: dict[tuple[str, str], str]
    n_system: int

    @property
    def identity(self) -> str:
        return self.labels[0]

    def multiply(self, a: str, b: str) -> str:
        return self.table[(a, b)]


def _closure_table(labels, unitaries) -> dict[tuple[str, str], str]:
    """Multiplication table up to scalar phase, with closure verified."""
    dim = next(iter(unitaries.values())).shape[0]
    table = {}
    for a in labels:
        for b in labels:
            prod = unitaries[a] @ unitaries[b]
            for c in labels:
                phase = np.trace(unitaries[c].conj().T @ prod) / dim
                if abs(abs(phase) - 1.0) < 1e-10:
                    if spectral_norm(prod - phase * unitaries[c]) < 1e-10:
                        table[(a, b)] = c
                        break
            else:
                raise ValueError(f"representation not closed at {a}*{b}")
    return table


def dd_group_z2z2(n_system: int) -> DDGroupRep:
    """Collective-Pauli representation of the two-generator abelian group.

    Elements I, X, Y, Z act as n-fold tensor powers of the corresponding
    single-qubit Pauli; generators are (X, Y) in that order.
    """
    if n_system < 1:
        raise ValueError("need at least one system qubit")
    labels = ("I", "X", "Y", "Z")
    unitaries = {
        lab: kron_all([PAULIS[lab.lower()]] * n_system) for lab in labels
    }
    table = _closure_table(labels, unitaries)
    return DDGroupRep(labels, unitaries, ("X", "Y"), table, n_system)


def decoupling_residual(rep: DDGroupRep, error_op: np.ndarray) -> float:
    """Norm of the group-averaged error operator, modulo pure-bath terms.

    ``error_op`` lives on the joint system-bath space with the system factor
    leftmost.  Returns ``|| sum_g (U_g (x) I)^dag E (U_g (x) I) ||`` after
    removing the pure-bath component; zero exactly when E is a combination
    of couplings the group decouples.
    """
    d_s = 2 ** rep.n_system
    if error_op.shape[0] % d_s != 0:
        raise ValueError("operator dimension incompatible with system size")
    d_b = error_op.shape[0] // d_s
    eye_b = np.eye(d_b, dtype=complex)
    total = np.zeros_like(error_op, dtype=complex)
    for lab in rep.labels:
        u = np.kron(rep.unitaries[lab], eye_b)
        total += u.conj().T @ error_op @ u
    return spectral_norm(mod_bath(total, rep.n_system))


@dataclass(frozen=True)
class Edge:
    tail: str
    head: str
    label: str
    key: int = 0


@dataclass(frozen=True)
class CayleyGraph:
    """Directed labeled multigraph; edge tuple order fixes walk priority."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def out_edges(self, vertex: str) -> list[Edge]:
        return [e for e in self.edges if e.tail == vertex]

    def in_degree(self, vertex: str) -> int:
        return sum(1 for e in self.edges if e.head == vertex)

    def out_degree(self, vertex: str) -> int:
        return sum(1 for e in self.edges if e.tail == vertex)


def cayley_graph(rep: DDGroupRep) -> CayleyGraph:
    """Cayley graph: edge (g, g*h, h) for every element g and generator h.

    Out-edges of each vertex appear in generator order, which is the
    deterministic priority the Eulerian walks consume them in.
    """
    edges = []
    for g in rep.labels:
        for h in rep.generators:
            edges.append(Edge(g, rep.multiply(g, h), h))
    return CayleyGraph(tuple(rep.labels), tuple(edges))


def modify_graph_for_gate(graph: CayleyGraph, target_label: str = "U",
                          identity: str = "I") -> CayleyGraph:
    """Attach identity-block self-loops and the final gate-block edge.

    Every non-identity group vertex gets one M_I self-loop; one M_U edge
    runs identity -> target.  The result satisfies the Eulerian-path degree
    condition: identity has out = in + 1, target has in = out + 1, all other
    vertices stay balanced.
    """
    if any(e.label in (M_I_LABEL, M_U_LABEL) for e in graph.edges):
        raise ValueError("graph already modified")
    if target_label in graph.vertices:
        raise ValueError(f"target label {target_label!r} collides with a vertex")
    edges = list(graph.edges)
    for v in graph.vertices:
        if v != identity:
            edges.append(Edge(v, v, M_I_LABEL))
    edges.append(Edge(identity, target_label, M_U_LABEL))
    return CayleyGraph(graph.vertices + (target_label,), tuple(edges))


@dataclass(frozen=True)
class EulerWalk:
    edges: tuple[Edge, ...]

    @property
    def start(self) -> str:
        return self.edges[0].tail

    @property
    def end(self) -> str:
        return self.edges[-1].head

    def __post_init__(self):
        for a, b in zip(self.edges, self.edges[1:]):
            if a.head != b.tail:
                raise ValueError(f"walk breaks between {a} and {b}")


def _hierholzer(graph: CayleyGraph, start: str) -> list[Edge]:
    order = {v: graph.out_edges(v) for v in graph.vertices}
    used: set[int] = set()

    def trail_from(v: str) -> list[Edge]:
        trail = []
        while True:
            nxt = next((e for e in order[v] if id(e) not in used), None)
            if nxt is None:
                return trail
            used.add(id(nxt))
            trail.append(nxt)
            v = nxt.head
        return trail

    walk = trail_from(start)
    i = 0
    while i <= len(walk):
        v = start if i == 0 else walk[i - 1].head
        sub = trail_from(v)
        if sub:
            walk[i:i] = sub
        else:
            i += 1
    return walk


def eulerian_cycle(graph: CayleyGraph, start: str = "I") -> EulerWalk:
    """Closed walk covering every edge once, with fixed tie-breaking."""
    for v in graph.vertices:
        if graph.in_degree(v) != graph.out_degree(v):
            raise ValueError(f"vertex {v} unbalanced; no Eulerian cycle")
    walk = _hierholzer(graph, start)
    if len(walk) != len(graph.edges):
        raise ValueError("graph not connected; no Eulerian cycle")
    if walk[-1].head != start:
        raise ValueError("walk failed to close")
    return EulerWalk(tuple(walk))


def eulerian_path(graph: CayleyGraph, start: str = "I") -> EulerWalk:
    """Open walk covering every edge once, identity to the target vertex.

    The gate-block edge has lowest priority at the identity, so it is taken
    only once the generator edges there are exhausted, making it the final
    edge of the walk.
    """
    surplus = [v for v in graph.vertices
               if graph.out_degree(v) == graph.in_degree(v) + 1]
    deficit = [v for v in graph.vertices
               if graph.in_degree(v) == graph.out_degree(v) + 1]
    balanced_rest = all(
        graph.in_degree(v) == graph.out_degree(v)
        for v in graph.vertices if v not in surplus + deficit)
    if surplus != [start] or len(deficit) != 1 or not balanced_rest:
        raise ValueError("graph does not satisfy the Eulerian-path condition")
    walk = _hierholzer(graph, start)
    if len(walk) != len(graph.edges):
        raise ValueError("graph not connected; no Eulerian path")
    if walk[-1].head != deficit[0]:
        raise ValueError("walk does not end at the target vertex")
    return EulerWalk(tuple(walk))


def walk_frames(rep: DDGroupRep, walk: EulerWalk) -> list[str]:
    """Group frame in force when each edge is traversed.

    The frame before edge j is the ordered product of the previous generator
    edges (identity blocks and the gate block leave the frame unchanged,
    since gate blocks are only traversed last).
    """
    frames = []
    current = rep.identity
    for e in walk.edges:
        frames.append(current)
        if e.label in rep.generators:
            current = rep.multiply(e.label, current)
    return frames
