import itertools

import numpy as np
import pytest

from fairsampler.circuit import Circuit, cnot, h, swap
from fairsampler.gmqaoa import ARCHITECTURES
from fairsampler.topology import (
    BackendTopology,
    CalibrationDataError,
    Embedding,
    aggregate_error,
    bundled_backend,
    enumerate_embeddings,
)

ARCH_ORDER = ("2L", "3L", "4L", "4T", "5T")


def brute_force_count(backend, arch, convention="default"):
    """Independent oracle: filter all qubit permutations directly."""
    maps = []
    for perm in itertools.permutations(range(backend.qubit_count), arch.n):
        if all(backend.adjacent(perm[a], perm[b]) for a, b in arch.edges):
            maps.append(perm)
    if convention == "default" and arch.name == "2L":
        maps = [m for m in maps if m[0] < m[1]]
    return len(maps)


@pytest.mark.parametrize(
    "name,expected",
    [("linear5", (4, 6, 4, 0, 0)), ("tee5", (4, 8, 4, 6, 2))],
)
def test_bundled_backend_subset_counts(name, expected):
    backend = bundled_backend(name)
    got = tuple(len(enumerate_embeddings(backend, ARCHITECTURES[a])) for a in ARCH_ORDER)
    assert got == expected


def test_counts_match_brute_force_oracle_on_random_graphs():
    rng = np.random.default_rng(17)
    for trial in range(8):
        n = int(rng.integers(4, 8))
        edges = {tuple(sorted(e)) for e in itertools.combinations(range(n), 2) if rng.random() < 0.4}
        backend = BackendTopology(name=f"rand{trial}", qubit_count=n, edges=frozenset(edges))
        for arch_name in ARCH_ORDER:
            arch = ARCHITECTURES[arch_name]
            assert len(enumerate_embeddings(backend, arch)) == brute_force_count(backend, arch)


def test_two_qubit_backend_single_edge():
    backend = BackendTopology(name="pair", qubit_count=2, edges=frozenset({(0, 1)}))
    embs = enumerate_embeddings(backend, ARCHITECTURES["2L"])
    assert len(embs) == 1
    assert enumerate_embeddings(backend, ARCHITECTURES["2L"], convention="all")[0].mapping == (0, 1)
    assert len(enumerate_embeddings(backend, ARCHITECTURES["2L"], convention="all")) == 2


def test_disconnected_qubit_never_changes_counts():
    base = bundled_backend("tee5")
    padded = BackendTopology(name="padded", qubit_count=6, edges=base.edges)
    for arch_name in ARCH_ORDER:
        arch = ARCHITECTURES[arch_name]
        assert len(enumerate_embeddings(padded, arch)) == len(enumerate_embeddings(base, arch))


def test_embeddings_preserve_edges():
    backend = bundled_backend("tee5")
    for arch_name in ARCH_ORDER:
        arch = ARCHITECTURES[arch_name]
        for emb in enumerate_embeddings(backend, arch):
            assert len(set(emb.mapping)) == arch.n
            for a, b in arch.edges:
                assert backend.adjacent(emb.mapping[a], emb.mapping[b])


def _toy_backend(e_cx=0.01, m=0.02):
    return BackendTopology(
        name="toy",
        qubit_count=2,
        edges=frozenset({(0, 1)}),
        gate_errors={("cx", (0, 1)): e_cx, ("single", (0,)): 0.0, ("single", (1,)): 0.0},
        readout_errors={0: (m, m), 1: (m, m)},
    )


def test_aggregate_error_examples():
    emb = Embedding(architecture=ARCHITECTURES["2L"], mapping=(0, 1))
    circuit = Circuit(n=2, gates=(cnot(0, 1),))
    assert aggregate_error(circuit, emb, _toy_backend(0.0, 0.0)) == 0.0
    assert aggregate_error(circuit, emb, _toy_backend(0.01, 0.02)) == pytest.approx(1 - 0.99 * 0.98 * 0.98, abs=1e-12)
    assert aggregate_error(circuit, emb, _toy_backend(1.0, 0.02)) == 1.0


def test_aggregate_error_asymmetric_readout_uses_mean():
    backend = BackendTopology(
        name="asym",
        qubit_count=1,
        edges=frozenset(),
        readout_errors={0: (0.0, 0.1)},
    )
    emb = Embedding(architecture=ARCHITECTURES["2L"], mapping=(0,))
    circuit = Circuit(n=1)
    assert aggregate_error(circuit, emb, backend) == pytest.approx(0.05)


def test_aggregate_error_monotone_and_bounded():
    rng = np.random.default_rng(23)
    emb = Embedding(architecture=ARCHITECTURES["2L"], mapping=(0, 1))
    circuit = Circuit(n=2, gates=(h(0), cnot(0, 1)))
    for _ in range(200):
        e, m = rng.uniform(0, 1, 2)
        backend = BackendTopology(
            name="t",
            qubit_count=2,
            edges=frozenset({(0, 1)}),
            gate_errors={("cx", (0, 1)): e, ("single", (0,)): 0.001},
            readout_errors={0: (m, m), 1: (m, m)},
        )
        val = aggregate_error(circuit, emb, backend)
        assert 0.0 <= val <= 1.0
        bumped = BackendTopology(
            name="t2",
            qubit_count=2,
            edges=frozenset({(0, 1)}),
            gate_errors={("cx", (0, 1)): min(1.0, e + 0.05), ("single", (0,)): 0.001},
            readout_errors={0: (m, m), 1: (m, m)},
        )
        assert aggregate_error(circuit, emb, bumped) >= val


def test_aggregate_error_counts_swap_as_three():
    emb = Embedding(architecture=ARCHITECTURES["2L"], mapping=(0, 1))
    one = aggregate_error(Circuit(n=2, gates=(cnot(0, 1),) * 3), emb, _toy_backend())
    via_swap = aggregate_error(Circuit(n=2, gates=(swap(0, 1),)), emb, _toy_backend())
    assert via_swap == pytest.approx(one)


def test_missing_calibration_is_named():
    emb = Embedding(architecture=ARCHITECTURES["2L"], mapping=(0, 1))
    backend = BackendTopology(name="bare", qubit_count=2, edges=frozenset({(0, 1)}))
    with pytest.raises(CalibrationDataError, match="cx"):
        aggregate_error(Circuit(n=2, gates=(cnot(0, 1),)), emb, backend)
    with pytest.raises(CalibrationDataError, match="readout"):
        aggregate_error(Circuit(n=2), emb, _no_readout())


def _no_readout():
    return BackendTopology(name="nr", qubit_count=2, edges=frozenset({(0, 1)}))


def test_backend_json_roundtrip():
    backend = bundled_backend("linear5")
    again = BackendTopology.from_json(backend.to_json())
    assert again == backend
    assert again.quantum_volume == 32
    assert again.snapshot_date == "2020-10-15"


def test_backend_validation():
    with pytest.raises(ValueError):
        BackendTopology(name="bad", qubit_count=2, edges=frozenset({(0, 5)}))
    with pytest.raises(ValueError):
        BackendTopology(name="bad", qubit_count=2, edges=frozenset({(0, 1)}), readout_errors={0: (1.5, 0.0)})
