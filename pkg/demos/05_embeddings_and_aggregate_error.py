"""
Placing circuits on device qubits
=================================

A device hosts many copies of each target connectivity.  Every injective,
edge-preserving placement is an embedding; running the same circuit on every
embedding turns one device into dozens of experiments.  The aggregate error
of a placement multiplies the calibrated success rates of each placed gate
and measurement, giving a single number to correlate fairness against.
"""

from fairsampler.experiments import ExperimentConfig, fit_trend, run_experiments
from fairsampler.gmqaoa import ARCHITECTURES, build_full_circuit
from fairsampler.topology import aggregate_error, bundled_backend, enumerate_embeddings

for name in ("linear5", "tee5"):
    backend = bundled_backend(name)
    counts = {a: len(enumerate_embeddings(backend, ARCHITECTURES[a])) for a in ("2L", "3L", "4L", "4T", "5T")}
    print(f"{name}: subsets per architecture {counts}")

backend = bundled_backend("tee5")
compiled = build_full_circuit("e", "2L")
print("\naggregate error of problem e on every 2L subset of tee5:")
for emb in enumerate_embeddings(backend, ARCHITECTURES["2L"]):
    print(f"  qubits {emb.label()}: {aggregate_error(compiled.circuit, emb, backend):.4f}")

# A full sweep: every embedding of problem e on both bundled devices.
config = ExperimentConfig.from_json(
    '{"problems": ["e"], "architectures": {"e": ["2L"]},'
    ' "noise": {"kind": "backend"}, "backends": ["linear5", "tee5"],'
    ' "shots": 40960, "seeds": [0, 1]}'
)
rows, failures = run_experiments(config)
print(f"\nswept {len(rows)} embedding cells ({failures} failures)")
fit = fit_trend(rows, "aggregate_error", degree=1)
print("log10(shots-to-reject) vs aggregate error: slope sign", fit.slope_sign,
      "coefficients", tuple(round(c, 3) for c in fit.coefficients))
