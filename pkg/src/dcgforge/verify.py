"""Fast self-checks behind the ``verify`` CLI subcommand.

Each check raises AssertionError on violation; the runner prints one line
per check and returns the failure count.  The full property suite lives in
the test directory; this subset covers the structural and physical
invariants that should hold on any install, in a few seconds.
"""
from __future__ import annotations

import sys
import time

import numpy as np

from .bench import BenchConfig, cat_state, fidelity_loss, run_point
from .compiler import (Gate, circuit_unitary, compile_circuit, compile_dcg,
                       compile_noop, decompose_gate)
from .dynamics import error_phase, first_order_phase, random_error_model
from .graphs import (cayley_graph, dd_group_z2z2, decoupling_residual,
                     eulerian_cycle, eulerian_path, modify_graph_for_gate,
                     walk_frames)
from .operators import embed_pauli, mod_bath, spectral_norm
from .pulses import (RECTANGULAR, TRIANGULAR, intended_unitary,
                     matched_gate_sequence, matched_identity_sequence,
                     validate, x_on, zz_on)


def _phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Spectral distance between unitaries up to a global phase."""
    tr = np.trace(v.conj().T @ u)
    phase = tr / abs(tr) if abs(tr) > 1e-12 else 1.0
    return spectral_norm(u - phase * v)


def check_group_decoupling():
    rep = dd_group_z2z2(2)
    assert rep.labels == ("I", "X", "Y", "Z")
    for qubit in range(2):
        for axis in "xyz":
            err = np.kron(embed_pauli(axis, qubit, 2), np.eye(2))
            r = decoupling_residual(rep, err)
            assert r <= 1e-12, f"single-qubit residual {r:.2e}"
    homog = np.kron(embed_pauli("x", 0, 2) @ embed_pauli("x", 1, 2),
                    np.eye(2))
    r = decoupling_residual(rep, homog)
    assert r >= 1.0, f"homogeneous residual {r:.2e} not order 1"


def check_walk_structure():
    rep = dd_group_z2z2(1)
    graph = cayley_graph(rep)
    assert (len(graph.vertices), len(graph.edges)) == (4, 8)
    cycle = eulerian_cycle(graph, rep.identity)
    assert len(cycle.edges) == 8
    modified = modify_graph_for_gate(graph)
    assert (len(modified.vertices), len(modified.edges)) == (5, 12)
    path = eulerian_path(modified, rep.identity)
    assert len(path.edges) == 12
    m_frames = sorted(frame for frame, edge in
                      zip(walk_frames(rep, path), path.edges)
                      if edge.label.startswith("M"))
    assert m_frames == sorted(rep.labels), f"M-block frames {m_frames}"


def check_matched_pair():
    rng = np.random.default_rng(11)
    for shape in (RECTANGULAR, TRIANGULAR):
        for _ in range(3):
            em = random_error_model(1, 1, rng)
            theta = rng.uniform(0.2, 1.2)
            gen = matched_gate_sequence(theta, 1.0, x_on(0), 1, shape)
            idle = matched_identity_sequence(theta, 1.0, x_on(0), 1, shape)
            gap = spectral_norm(first_order_phase(gen, em)
                                - first_order_phase(idle, em))
            assert gap <= 1e-10, f"{shape.name}: pair gap {gap:.2e}"


def check_slot_counts():
    noop = compile_noop(2, 1.0)
    assert noop.slot_count == 8, noop.slot_count
    dcg = compile_dcg(Gate("zz", (0, 1), 0.4), 2, 1.0)
    assert dcg.slot_count == 16, dcg.slot_count
    circuit = [Gate("hadamard", (0,)), Gate("cnot", (0, 1)),
               Gate("cnot", (0, 2))]
    n_prims = sum(len(decompose_gate(g)) for g in circuit)
    assert n_prims == 14, n_prims
    prim_seq = compile_circuit(circuit, "primitive", 3, 1.0)
    dcg_seq = compile_circuit(circuit, "dcg", 3, 1.0)
    assert prim_seq.slot_count == 14, prim_seq.slot_count
    assert dcg_seq.slot_count == 224, dcg_seq.slot_count
    for seq in (noop, dcg, prim_seq, dcg_seq):
        problems = validate(seq, tau_min=1.0, h_max=np.pi)
        assert not problems, problems[0]


def check_compiled_targets():
    circuit = [Gate("hadamard", (0,)), Gate("cnot", (0, 1)),
               Gate("cnot", (0, 2))]
    target = circuit_unitary(circuit, 3)
    for mode in ("primitive", "dcg"):
        seq = compile_circuit(circuit, mode, 3, 1.0)
        d = _phase_distance(intended_unitary(seq), target)
        assert d <= 1e-10, f"{mode}: target distance {d:.2e}"


def check_first_order_cancellation():
    rng = np.random.default_rng(5)
    em = random_error_model(2, 1, rng)
    for seq in (compile_noop(2, 1.0),
                compile_dcg(Gate("zz", (0, 1), 0.7), 2, 1.0)):
        r = spectral_norm(mod_bath(first_order_phase(seq, em), 2))
        assert r <= 1e-10, f"residual {r:.2e}"


def check_phase_reconstruction():
    rng = np.random.default_rng(3)
    em = random_error_model(2, 1, rng, coupling=0.05, bath=0.05)
    seq = matched_gate_sequence(0.3, 1.0, zz_on(0, 1), 2)
    report = error_phase(seq, em)
    gap = spectral_norm(report.phi_exact - report.phi_first_order)
    assert gap <= 0.1, f"phase gap {gap:.2e}"
    assert report.epg_exact > 0


def check_benchmark_sanity():
    loss = fidelity_loss(np.eye(8, dtype=complex) / 8)
    assert abs(loss - (1 - 1 / np.sqrt(8))) <= 1e-12, loss
    psi = cat_state(3)
    assert fidelity_loss(np.outer(psi, psi.conj())) <= 1e-12
    cfg = BenchConfig(n_bath=2, a_values=(1e-3,))
    prim = run_point(cfg, 1e-3, 0.0, "primitive")
    dcg = run_point(cfg, 1e-3, 0.0, "dcg")
    assert 0 <= dcg.fidelity_loss < prim.fidelity_loss <= 1, \
        (prim.fidelity_loss, dcg.fidelity_loss)


CHECKS = (
    ("decoupling group sums", check_group_decoupling),
    ("walk structure", check_walk_structure),
    ("matched error pair", check_matched_pair),
    ("slot counts and bounds", check_slot_counts),
    ("compiled gate targets", check_compiled_targets),
    ("first-order cancellation", check_first_order_cancellation),
    ("error phase reconstruction", check_phase_reconstruction),
    ("benchmark loss sanity", check_benchmark_sanity),
)


def run_checks(stream=None) -> int:
    """Run every check; print one status line each; return failure count."""
    out = stream if stream is not None else sys.stdout
    failures = 0
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            fn()
            status = "pass"
        except AssertionError as exc:
            failures += 1
            status = f"FAIL: {exc}"
        dt = time.perf_counter() - t0
        out.write(f"{name:28s} {status}  ({dt:.2f}s)\n")
    verdict = "all checks passed" if failures == 0 else \
        f"{failures} of {len(CHECKS)} checks failed"
    out.write(verdict + "\n")
    return failures
