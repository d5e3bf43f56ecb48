"""Three-qubit cat-state preparation under a spin bath, both compilations.

Runs a reduced version of the benchmark sweep (5 coupling values instead of
13) so the demo finishes in well under a minute.

Run with: python3 demos/cat_benchmark.py
"""
import numpy as np

from dcgforge.bench import BenchConfig, run_point

cfg = BenchConfig(a_values=tuple(10.0 ** k for k in range(-1, -6, -1)))

print("=== preparing GHZ on 3 qubits coupled to 5 bath spins ===")
print("circuit: hadamard on qubit 0, then CNOTs fanning out; 14 primitive")
print("slots, or 224 once every slot is replaced by a corrected walk")
print()
print("  A (coupling)   bare loss       corrected loss   ratio")
for a in cfg.a_values:
    prim = run_point(cfg, a, 0.0, "primitive")
    dcg = run_point(cfg, a, 0.0, "dcg")
    ratio = prim.fidelity_loss / dcg.fidelity_loss
    print(f"  {a:.0e}        {prim.fidelity_loss:.6e}    "
          f"{dcg.fidelity_loss:.6e}     {ratio:9.1f}")
print()
print("the corrected circuit runs 16x longer yet loses less fidelity once")
print("the bath coupling drops below the crossover; its loss falls as A^4")
print("against A^2 for the bare circuit, so the ratio grows 100x per decade")
print()

print("=== a miscalibrated amplitude sets the floor ===")
a_small = cfg.a_values[-1]
for eps in (1e-2, 1e-3, 0.0):
    rec = run_point(cfg, a_small, eps, "dcg")
    print(f"  epsilon={eps:.0e}: corrected loss {rec.fidelity_loss:.3e}")
print("with a systematic pulse-amplitude error the corrected loss stops")
print("tracking A and plateaus at the epsilon^2 level instead")
