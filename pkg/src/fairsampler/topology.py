"""Backend coupling graphs, architecture embeddings, and aggregate error.

A backend is a named coupling graph with per-gate and per-qubit calibration
numbers.  Embeddings are injective, edge-preserving placements of one of the
five target architectures onto backend qubits; the counting convention keeps
every distinct map except that a bare edge (2L) is not double-counted for its
reversal, matching how qubit subsets are tallied per device.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .circuit import Circuit
from .gmqaoa import Architecture


class CalibrationDataError(KeyError):
    """Missing calibration entry for a gate or qubit."""


@dataclass(frozen=True)
class BackendTopology:
    name: str
    qubit_count: int
    edges: frozenset[tuple[int, int]]
    gate_errors: dict[tuple[str, tuple[int, ...]], float] = field(default_factory=dict)
    readout_errors: dict[int, tuple[float, float]] = field(default_factory=dict)
    quantum_volume: int | None = None
    snapshot_date: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset((min(a, b), max(a, b)) for a, b in self.edges))
        for a, b in self.edges:
            if not (0 <= a < self.qubit_count and 0 <= b < self.qubit_count):
                raise ValueError(f"edge ({a},{b}) references a missing qubit")
        for p in self.gate_errors.values():
            if not 0.0 <= p <= 1.0:
                raise ValueError("gate error probabilities must lie in [0, 1]")
        for p01, p10 in self.readout_errors.values():
            if not (0.0 <= p01 <= 1.0 and 0.0 <= p10 <= 1.0):
                raise ValueError("readout probabilities must lie in [0, 1]")

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "qubits": self.qubit_count,
                "edges": sorted(list(e) for e in self.edges),
                "gate_errors": [
                    {"gate": g, "qubits": list(q), "e": e}
                    for (g, q), e in sorted(self.gate_errors.items())
                ],
                "readout": [
                    {"q": q, "p01": p01, "p10": p10}
                    for q, (p01, p10) in sorted(self.readout_errors.items())
                ],
                "qv": self.quantum_volume,
                "date": self.snapshot_date,
            },
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "BackendTopology":
        raw = json.loads(text)
        return BackendTopology(
            name=raw["name"],
            qubit_count=raw["qubits"],
            edges=frozenset(tuple(e) for e in raw["edges"]),
            gate_errors={(g["gate"], tuple(g["qubits"])): g["e"] for g in raw.get("gate_errors", ())},
            readout_errors={r["q"]: (r["p01"], r["p10"]) for r in raw.get("readout", ())},
            quantum_volume=raw.get("qv"),
            snapshot_date=raw.get("date"),
        )


def load_backend(path) -> BackendTopology:
    with open(path) as fh:
        return BackendTopology.from_json(fh.read())


def bundled_backend(name: str) -> BackendTopology:
    """One of the backends shipped with the package (``linear5``, ``tee5``)."""
    ref = resources.files("fairsampler").joinpath(f"data/backends/{name}.json")
    return BackendTopology.from_json(ref.read_text())


@dataclass(frozen=True)
class Embedding:
    """Injective map architecture wire -> backend qubit preserving edges."""

    architecture: Architecture
    mapping: tuple[int, ...]

    def label(self) -> str:
        return "-".join(str(q) for q in self.mapping)


def _all_injective_maps(arch: Architecture, qubit_count: int, adjacent) -> list[tuple[int, ...]]:
    """Backtracking over architecture wires in index order."""
    edges = [tuple(e) for e in sorted(arch.edges)]
    out: list[tuple[int, ...]] = []

    def extend(partial: list[int]):
        w = len(partial)
        if w == arch.n:
            out.append(tuple(partial))
            return
        for q in range(qubit_count):
            if q in partial:
                continue
            ok = True
            for a, b in edges:
                if a == w and b < w and not adjacent(q, partial[b]):
                    ok = False
                    break
                if b == w and a < w and not adjacent(q, partial[a]):
                    ok = False
                    break
            if ok:
                extend(partial + [q])

    extend([])
    return out


def _automorphisms(arch: Architecture) -> list[tuple[int, ...]]:
    return _all_injective_maps(arch, arch.n, arch.adjacent)


def enumerate_embeddings(backend: BackendTopology, architecture: Architecture, convention: str = "default") -> list[Embedding]:
    """All placements of the architecture on the backend.

    Conventions: ``all`` keeps every injective edge-preserving map;
    ``canonical`` keeps one representative per automorphism orbit;
    ``default`` deduplicates only the 2-qubit line (reversals of a bare edge
    are the same qubit subset) and keeps every map otherwise, which is how
    per-device qubit-subset tallies are usually quoted.
    """
    maps = _all_injective_maps(architecture, backend.qubit_count, backend.adjacent)
    if convention == "all":
        keep = maps
    elif convention == "canonical" or (convention == "default" and architecture.name == "2L"):
        auts = _automorphisms(architecture)
        chosen = set()
        keep = []
        for m in maps:
            # orbit representative under wire relabeling by each automorphism
            rep = min(tuple(m[a[w]] for w in range(architecture.n)) for a in auts)
            if rep not in chosen:
                chosen.add(rep)
                keep.append(m)
    elif convention == "default":
        keep = maps
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return [Embedding(architecture=architecture, mapping=m) for m in sorted(keep)]


# ---------------------------------------------------------------------------
# Aggregate error
# ---------------------------------------------------------------------------

_SINGLE_QUBIT_KINDS = {"h", "x", "t", "tdg", "phase"}


def gate_error_for(backend: BackendTopology, gate, embedding: Embedding) -> float:
    """Calibrated error rate of one placed gate."""
    phys = tuple(embedding.mapping[w] for w in gate.qubits)
    if gate.kind in _SINGLE_QUBIT_KINDS:
        key = ("single", phys)
        if key not in backend.gate_errors:
            raise CalibrationDataError(f"{backend.name}: no single-qubit error for qubit {phys[0]}")
        return backend.gate_errors[key]
    if gate.kind in ("cnot", "cphase", "swap"):
        for key in (("cx", phys), ("cx", (phys[1], phys[0]))):
            if key in backend.gate_errors:
                return backend.gate_errors[key]
        raise CalibrationDataError(f"{backend.name}: no cx error for pair {phys}")
    raise CalibrationDataError(f"{backend.name}: no calibration for gate kind {gate.kind!r}")


def aggregate_error(circuit: Circuit, embedding: Embedding, backend: BackendTopology) -> float:
    """One minus the product of per-gate and per-measurement success rates.

    The measurement term uses the mean of each measured qubit's two
    asymmetric flip probabilities; leftover swap gates contribute their
    3-CNOT expansion.
    """
    success = 1.0
    for g in circuit.gates:
        e = gate_error_for(backend, g, embedding)
        success *= (1.0 - e) ** (3 if g.kind == "swap" else 1)
    for w in tuple(circuit.measured_wires) + tuple(sorted(circuit.ancilla_wires)):
        q = embedding.mapping[w]
        if q not in backend.readout_errors:
            raise CalibrationDataError(f"{backend.name}: no readout calibration for qubit {q}")
        p01, p10 = backend.readout_errors[q]
        success *= 1.0 - 0.5 * (p01 + p10)
    return 1.0 - success
