"""Gate decompositions and the corrected-sequence compiler."""
import numpy as np
import pytest
import scipy.linalg

from dcgforge.compiler import (CNOT_MATRIX, Gate, HADAMARD_MATRIX,
                               PrimitiveSpec, circuit_unitary, compile_circuit,
                               compile_dcg, compile_dcg_spec, compile_noop,
                               decompose_gate, embed_gate, gate_unitary,
                               parse_gate, spec_unitary)
from dcgforge.operators import embed_pauli, spectral_norm
from dcgforge.pulses import (intended_unitary, TRIANGULAR, validate, x_on,
                             y_on, zz_on)


def phase_distance(u, v):
    tr = np.trace(v.conj().T @ u)
    phase = tr / abs(tr) if abs(tr) > 1e-12 else 1.0
    return spectral_norm(u - phase * v)


def embed_oracle(u, qubits, n):
    """Basis-state loop embedding, independent of the tensor reshape path."""
    dim = 2 ** n
    k = len(qubits)
    full = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        sub_col = 0
        for q in qubits:
            sub_col = 2 * sub_col + bits[q]
        for sub_row in range(2 ** k):
            new_bits = list(bits)
            for idx, q in enumerate(qubits):
                new_bits[q] = (sub_row >> (k - 1 - idx)) & 1
            row = 0
            for b in new_bits:
                row = 2 * row + b
            full[row, col] += u[sub_row, sub_col]
    return full


def test_embed_gate_matches_basis_loop():
    rng = np.random.default_rng(30)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    u, _ = np.linalg.qr(m)
    for qubits in ((0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)):
        expected = embed_oracle(u, qubits, 3)
        assert spectral_norm(embed_gate(u, qubits, 3) - expected) <= 1e-12
    v = scipy.linalg.expm(-1j * 0.3 * embed_pauli("y", 0, 1))
    for q in (0, 1, 2):
        assert spectral_norm(embed_gate(v, (q,), 3)
                             - embed_oracle(v, (q,), 3)) <= 1e-12


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("x", (0, 1))
    with pytest.raises(ValueError):
        Gate("cnot", (0,))
    with pytest.raises(ValueError):
        Gate("spam", (0,))
    with pytest.raises(ValueError):
        PrimitiveSpec(((x_on(0), 0.3), (y_on(0), 0.2)))


def test_gate_unitary_matches_constants():
    assert np.allclose(gate_unitary(Gate("hadamard", (0,)), 1),
                       HADAMARD_MATRIX)
    assert np.allclose(gate_unitary(Gate("cnot", (0, 1)), 2), CNOT_MATRIX)
    u = gate_unitary(Gate("x", (0,), 0.25), 1)
    assert np.allclose(u, scipy.linalg.expm(-1j * 0.25 * embed_pauli("x", 0, 1)))


def test_decomposition_counts():
    assert len(decompose_gate(Gate("hadamard", (0,)))) == 2
    assert len(decompose_gate(Gate("cnot", (0, 1)))) == 6
    assert len(decompose_gate(Gate("noop", ()))) == 1
    assert len(decompose_gate(Gate("zz", (0, 1), 0.4))) == 1


def test_spec_unitary_matches_scipy():
    spec = PrimitiveSpec(((y_on(1), 0.3), (x_on(0), -0.2)))
    h = 0.3 * embed_pauli("y", 1, 2) - 0.2 * embed_pauli("x", 0, 2)
    assert spectral_norm(spec_unitary(spec, 2)
                         - scipy.linalg.expm(-1j * h)) <= 1e-12


def _decomposition_product(gate, n):
    u = np.eye(2 ** n, dtype=complex)
    for spec in decompose_gate(gate):
        h = sum((area * gen.matrix(n) for gen, area in spec.actions),
                np.zeros((2 ** n, 2 ** n), dtype=complex))
        u = scipy.linalg.expm(-1j * h) @ u
    return u


def test_hadamard_decomposition_reaches_target():
    for q, n in ((0, 1), (1, 2), (2, 3)):
        gate = Gate("hadamard", (q,))
        d = phase_distance(_decomposition_product(gate, n),
                           gate_unitary(gate, n))
        assert d <= 1e-12


def test_cnot_decomposition_reaches_target():
    for qubits, n in (((0, 1), 2), ((1, 0), 2), ((0, 2), 3), ((2, 0), 3),
                      ((1, 2), 3)):
        gate = Gate("cnot", qubits)
        d = phase_distance(_decomposition_product(gate, n),
                           gate_unitary(gate, n))
        assert d <= 1e-12, (qubits, d)


def test_cnot_decomposition_structure():
    specs = decompose_gate(Gate("cnot", (0, 1)))
    zz_slots = [s for s in specs if any(g.kind == "zz" for g, _ in s.actions)]
    assert len(zz_slots) == 1
    # one slot drives both qubits at once; all areas have magnitude pi/4
    assert max(len(s.actions) for s in specs) == 2
    for s in specs:
        for _, area in s.actions:
            assert abs(area) == pytest.approx(np.pi / 4)


def test_compile_noop_structure():
    seq = compile_noop(2, 1.0)
    assert seq.slot_count == 8
    assert seq.total_duration == pytest.approx(8.0)
    wins = seq.windows()
    assert len(wins) == 8
    for _, _, segs in wins:
        assert len(segs) == 2
        for seg in segs:
            assert seg.area == pytest.approx(np.pi / 2)
    assert phase_distance(intended_unitary(seq), np.eye(4)) <= 1e-10
    assert validate(seq, tau_min=1.0, h_max=2.0) == []


def test_compile_dcg_slot_count_and_target():
    for gate, n in ((Gate("x", (0,), 0.9), 1), (Gate("y", (1,), 1.7), 2),
                    (Gate("zz", (0, 1), 0.4), 2)):
        seq = compile_dcg(gate, n, 1.0)
        assert seq.slot_count == 16
        assert seq.total_duration == pytest.approx(16.0)
        assert phase_distance(intended_unitary(seq),
                              gate_unitary(gate, n)) <= 1e-10
        assert validate(seq, tau_min=1.0, h_max=3.0) == []


def test_compile_dcg_noop_falls_back_to_cycle():
    seq = compile_dcg(Gate("noop", ()), 2, 1.0)
    assert seq.slot_count == 8


def test_compile_dcg_rejects_composite_gates():
    with pytest.raises(ValueError):
        compile_dcg(Gate("hadamard", (0,)), 1, 1.0)
    with pytest.raises(ValueError):
        compile_dcg(Gate("cnot", (0, 1)), 2, 1.0)


def test_compile_dcg_spec_multi_action():
    spec = PrimitiveSpec(((y_on(1), np.pi / 4), (x_on(0), -np.pi / 4)))
    seq = compile_dcg_spec(spec, 2, 1.0)
    assert seq.slot_count == 16
    assert phase_distance(intended_unitary(seq), spec_unitary(spec, 2)) <= 1e-10
    assert validate(seq, tau_min=1.0, h_max=3.0) == []


def test_compile_circuit_counts_and_targets():
    circuit = [Gate("hadamard", (0,)), Gate("cnot", (0, 1)),
               Gate("cnot", (0, 2))]
    target = circuit_unitary(circuit, 3)
    prim = compile_circuit(circuit, "primitive", 3, 1.0)
    assert prim.slot_count == 14
    assert prim.total_duration == pytest.approx(14.0)
    assert phase_distance(intended_unitary(prim), target) <= 1e-10
    dcg = compile_circuit(circuit, "dcg", 3, 1.0)
    assert dcg.slot_count == 224
    assert dcg.total_duration == pytest.approx(224.0)
    assert phase_distance(intended_unitary(dcg), target) <= 1e-10
    for seq in (prim, dcg):
        assert validate(seq, tau_min=1.0, h_max=3.0) == []


def test_compile_circuit_other_shapes_and_epsilon():
    circuit = [Gate("zz", (0, 1), 0.4)]
    seq = compile_circuit(circuit, "dcg", 2, 1.0, TRIANGULAR, 1e-3)
    assert seq.slot_count == 16
    assert all(s.shape is TRIANGULAR for s in seq.segments)
    assert all(s.epsilon == 1e-3 for s in seq.segments)
    assert phase_distance(intended_unitary(seq),
                          circuit_unitary(circuit, 2)) <= 1e-10


def test_compile_circuit_rejects_unknown_mode():
    with pytest.raises(ValueError):
        compile_circuit([Gate("noop", ())], "fancy", 1, 1.0)


def test_parse_gate():
    g = parse_gate("cnot:0,1")
    assert (g.kind, g.qubits) == ("cnot", (0, 1))
    g = parse_gate("x:2:0.785")
    assert (g.kind, g.qubits, g.angle) == ("x", (2,), 0.785)
    g = parse_gate("noop")
    assert (g.kind, g.qubits) == ("noop", ())
    with pytest.raises(ValueError):
        parse_gate("zz:0,1")
    with pytest.raises(ValueError):
        parse_gate("")
    with pytest.raises(ValueError):
        parse_gate("warp:0")
