"""The decoupling group, its Cayley graph, and the Eulerian walks.

Run with: python3 demos/decoupling_walks.py
"""
import numpy as np

from dcgforge import (cayley_graph, dd_group_z2z2, decoupling_residual,
                      eulerian_cycle, eulerian_path, modify_graph_for_gate,
                      walk_frames)
from dcgforge.operators import pauli_string_matrix

print("=== the collective-Pauli group on 2 qubits ===")
rep = dd_group_z2z2(2)
print(f"elements: {rep.labels}, generators: {rep.generators}")
print("multiplication table:")
for a in rep.labels:
    row = " ".join(rep.multiply(a, b) for b in rep.labels)
    print(f"  {a}: {row}")
print()

print("=== what the group averages away ===")
rng = np.random.default_rng(7)
b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
b = 0.5 * (b + b.conj().T)
b /= np.linalg.norm(b, 2)
for string in ("xi", "iy", "zx", "xx", "zz"):
    err = np.kron(pauli_string_matrix(string), b)
    r = decoupling_residual(rep, err)
    verdict = "decoupled" if r < 1e-12 else "survives"
    print(f"  system factor {string}: residual {r:.2e}  ({verdict})")
print()

print("=== Eulerian cycle: the idle sequence ===")
graph = cayley_graph(dd_group_z2z2(1))
print(f"Cayley graph: {len(graph.vertices)} vertices, "
      f"{len(graph.edges)} edges")
cycle = eulerian_cycle(graph, "I")
trace = " ".join(f"{e.tail}-{e.label}->{e.head}" for e in cycle.edges)
print(f"walk: {trace}")
print()

print("=== Eulerian path: one corrected gate ===")
modified = modify_graph_for_gate(graph)
print(f"modified graph: {len(modified.vertices)} vertices, "
      f"{len(modified.edges)} edges "
      f"(3 identity self-loops + 1 gate edge)")
path = eulerian_path(modified, "I")
frames = walk_frames(rep, path)
print("step  edge           frame entering")
for k, (edge, frame) in enumerate(zip(path.edges, frames)):
    marker = "  <- block" if edge.label.startswith("M") else ""
    print(f"  {k:2d}  {edge.tail:>2s} -{edge.label:>3s}-> "
          f"{edge.head:<2s}  {frame}{marker}")
block_frames = [f for f, e in zip(frames, path.edges)
                if e.label.startswith("M")]
print(f"frames hosting a block: {block_frames} "
      f"(all four group elements, so the shared block error averages away)")
