"""Tour of the pulse layer: shapes, segments, gates, serialization.

Run with: python3 demos/pulse_shapes_and_gates.py
"""
import numpy as np

from dcgforge import (Gate, RECTANGULAR, TRIANGULAR, compile_circuit,
                      format_sequence, intended_unitary, matched_gate_sequence,
                      matched_identity_sequence, parse_sequence,
                      primitive_gate, validate, x_on, zz_on)
from dcgforge.compiler import gate_unitary
from dcgforge.operators import spectral_norm

np.set_printoptions(precision=4, suppress=True, linewidth=100)

print("=== pulse shapes ===")
for shape in (RECTANGULAR, TRIANGULAR):
    samples = ", ".join(f"{shape.value(s):.2f}" for s in (0.0, 0.25, 0.5, 1.0))
    print(f"{shape.name:12s} integral={shape.integral:<4} peak={shape.peak}"
          f"  profile at s=0,.25,.5,1: {samples}")
print()

print("=== a primitive pi/2 rotation slot ===")
seg = primitive_gate(x_on(0), np.pi / 2, 1.0, 1, TRIANGULAR)
print(f"generator {seg.generator.kind} on qubit {seg.generator.qubits}")
print(f"amplitude {seg.amplitude:.4f} so that area = amplitude * duration *"
      f" {TRIANGULAR.integral} = {seg.area:.4f}")
print()

print("=== the matched pair: same first-order error, different gates ===")
theta, tau = 0.6, 1.0
gate_seq = matched_gate_sequence(theta, tau, x_on(0), 1)
idle_seq = matched_identity_sequence(theta, tau, x_on(0), 1)
print(f"stretched gate: one segment, amplitude {theta} for {2 * tau} time "
      f"units, area {gate_seq.segments[0].area:.3f}")
lobes = [(s.amplitude, s.time_reversed) for s in idle_seq.segments]
print(f"identity echo: lobes {lobes} (areas cancel -> net identity)")
print("intended unitaries:")
print(intended_unitary(gate_seq).round(4))
print(intended_unitary(idle_seq).round(4))
print()

print("=== compiling a circuit slot by slot ===")
circuit = [Gate("hadamard", (0,)), Gate("cnot", (0, 1))]
for mode in ("primitive", "dcg"):
    seq = compile_circuit(circuit, mode, 2, 1.0)
    target = gate_unitary(circuit[1], 2) @ gate_unitary(circuit[0], 2)
    tr = np.trace(target.conj().T @ intended_unitary(seq))
    dist = spectral_norm(intended_unitary(seq) - tr / abs(tr) * target)
    print(f"{mode:10s} {seq.slot_count:3d} slots over {seq.total_duration:5.1f}"
          f" time units; distance to target {dist:.2e}")
    problems = validate(seq, tau_min=1.0, h_max=np.pi)
    print(f"{'':10s} constraint report: "
          f"{problems if problems else 'clean'}")
print()

print("=== serialization round trip ===")
seq = compile_circuit([Gate("zz", (0, 1), 0.4)], "dcg", 2, 1.0)
text = format_sequence(seq)
print("first lines of the wire format:")
for line in text.splitlines()[:6]:
    print("  " + line)
back = parse_sequence(text)
print(f"parse(format(seq)) == seq: {back == seq}")
