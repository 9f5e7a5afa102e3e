"""Statevector simulation with Monte-Carlo noise trajectories.

The noiseless path evolves one complex amplitude vector.  Noisy sampling
evolves a *batch* of per-shot trajectories (rows of a 2-D array) so that
random Pauli insertions stay exact per shot while the arithmetic remains
vectorized.  Structured errors (coherent over-rotation, residual ZZ phase
after CNOTs) are folded deterministically into the gate unitaries;
unstructured errors (depolarizing) are stochastic Pauli insertions;
measurement errors are asymmetric per-wire bit flips applied to sampled
outcomes.

Wire order convention matches the configuration strings of :mod:`.ising`:
wire 0 is the most significant bit of a basis index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, Gate, x as gate_x
from .ising import IsingModel, energy_table

MAX_WIRES = 24
_CHUNK = 8192

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class SimulationError(ValueError):
    """Bad simulation request (size, dimension mismatch, empty register)."""


class MitigationError(ValueError):
    """Calibration matrix unusable for inversion."""


@dataclass(frozen=True)
class Statevector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.n,):
            raise SimulationError(f"amplitude vector has wrong length for n={self.n}")

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


# ---------------------------------------------------------------------------
# Batched gate kernels: psi has shape (batch, 2**n)
# ---------------------------------------------------------------------------


def _view1(psi: np.ndarray, q: int, n: int) -> np.ndarray:
    return psi.reshape(psi.shape[0], 1 << q, 2, -1)


def _view2(psi: np.ndarray, qa: int, qb: int, n: int) -> np.ndarray:
    i, j = (qa, qb) if qa < qb else (qb, qa)
    return psi.reshape(psi.shape[0], 1 << i, 2, 1 << (j - i - 1), 2, -1)


def _sub2(v: np.ndarray, qa: int, qb: int, ba: int, bb: int) -> np.ndarray:
    # index the (bit of qa, bit of qb) block regardless of wire order
    if qa < qb:
        return v[:, :, ba, :, bb, :]
    return v[:, :, bb, :, ba, :]


def _apply_1q(psi, u, q, n):
    v = _view1(psi, q, n)
    a = v[:, :, 0, :].copy()
    b = v[:, :, 1, :]
    new0 = u[0, 0] * a + u[0, 1] * b
    v[:, :, 1, :] = u[1, 0] * a + u[1, 1] * b
    v[:, :, 0, :] = new0


def _apply_diag1(psi, d1, q, n):
    v = _view1(psi, q, n)
    v[:, :, 1, :] *= d1


def _apply_cx(psi, c, t, n):
    v = _view2(psi, c, t, n)
    a = _sub2(v, c, t, 1, 0)
    b = _sub2(v, c, t, 1, 1)
    tmp = a.copy()
    a[...] = b
    b[...] = tmp


def _apply_swap_gate(psi, a, b, n):
    v = _view2(psi, a, b, n)
    p = _sub2(v, a, b, 0, 1)
    q = _sub2(v, a, b, 1, 0)
    tmp = p.copy()
    p[...] = q
    q[...] = tmp


def _apply_diag2(psi, phases, qa, qb, n):
    """phases indexed by (bit of qa, bit of qb)."""
    v = _view2(psi, qa, qb, n)
    for ba in (0, 1):
        for bb in (0, 1):
            ph = phases[2 * ba + bb]
            if ph != 1.0:
                _sub2(v, qa, qb, ba, bb)[...] *= ph


_H2 = np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=complex)


def _ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _apply_pauli(psi, pauli: str, q: int, n: int):
    v = _view1(psi, q, n)
    if pauli == "x":
        a = v[:, :, 0, :].copy()
        v[:, :, 0, :] = v[:, :, 1, :]
        v[:, :, 1, :] = a
    elif pauli == "y":
        a = v[:, :, 0, :].copy()
        v[:, :, 0, :] = -1j * v[:, :, 1, :]
        v[:, :, 1, :] = 1j * a
    elif pauli == "z":
        v[:, :, 1, :] *= -1.0
    else:  # pragma: no cover - internal
        raise SimulationError(f"unknown pauli {pauli!r}")


def _overrotated(angle: float, delta: float) -> float:
    # overshoot in the direction the gate already rotates; identity stays exact
    if delta == 0.0 or angle == 0.0:
        return angle
    return angle + math.copysign(delta, angle)


def _apply_gate(psi, gate: Gate, n: int, delta: float = 0.0, zeta: float = 0.0):
    kind = gate.kind
    if kind == "h":
        _apply_1q(psi, _H2, gate.qubits[0], n)
        if delta:
            _apply_1q(psi, _ry(delta), gate.qubits[0], n)
    elif kind == "x":
        _apply_pauli(psi, "x", gate.qubits[0], n)
    elif kind == "t":
        _apply_diag1(psi, np.exp(1j * _overrotated(math.pi / 4.0, delta)), gate.qubits[0], n)
    elif kind == "tdg":
        _apply_diag1(psi, np.exp(1j * _overrotated(-math.pi / 4.0, delta)), gate.qubits[0], n)
    elif kind == "phase":
        _apply_diag1(psi, np.exp(1j * _overrotated(math.pi * gate.exponent, delta)), gate.qubits[0], n)
    elif kind == "cphase":
        ph = np.exp(1j * _overrotated(math.pi * gate.exponent, delta))
        _apply_diag2(psi, (1.0, 1.0, 1.0, ph), gate.qubits[0], gate.qubits[1], n)
    elif kind == "cnot":
        _apply_cx(psi, gate.qubits[0], gate.qubits[1], n)
        if zeta:
            zz = (np.exp(-1j * zeta), np.exp(1j * zeta), np.exp(1j * zeta), np.exp(-1j * zeta))
            _apply_diag2(psi, zz, gate.qubits[0], gate.qubits[1], n)
    elif kind == "swap":
        _apply_swap_gate(psi, gate.qubits[0], gate.qubits[1], n)
    else:  # pragma: no cover - Gate validates kinds
        raise SimulationError(f"unknown gate kind {kind!r}")


def simulate(circuit: Circuit, *, coherent_overrotation: float = 0.0, zz_after_cnot: float = 0.0) -> Statevector:
    """Exact statevector of the circuit applied to the all-zeros input."""
    n = circuit.n
    if n > MAX_WIRES:
        raise SimulationError(f"{n} wires exceeds the {MAX_WIRES}-wire capacity")
    psi = np.zeros((1, 1 << n), dtype=complex)
    psi[0, 0] = 1.0
    for g in circuit.gates:
        _apply_gate(psi, g, n, coherent_overrotation, zz_after_cnot)
    return Statevector(n=n, amplitudes=psi[0])


def circuit_unitary(gates, n: int) -> np.ndarray:
    """Full unitary of a gate sequence (column k = action on basis state k)."""
    if isinstance(gates, Circuit):
        n = gates.n
        gates = gates.gates
    dim = 1 << n
    psi = np.eye(dim, dtype=complex)  # rows are basis-state trajectories
    for g in gates:
        _apply_gate(psi, g, n)
    return psi.T.copy()


# ---------------------------------------------------------------------------
# Measurement bookkeeping
# ---------------------------------------------------------------------------


def _wire_bits(indices: np.ndarray, wire: int, n: int) -> np.ndarray:
    return (indices >> (n - 1 - wire)) & 1


def _measured_index_map(circuit: Circuit, logical_order: bool) -> np.ndarray:
    """Map a full wire-basis index to the measured-register index.

    ``logical_order`` applies the readout permutation; otherwise bits appear
    in plain wire order (the order histograms use).
    """
    n = circuit.n
    m = len(circuit.measured_wires)
    idx = np.arange(1 << n)
    out = np.zeros(1 << n, dtype=np.int64)
    for k, w in enumerate(circuit.measured_wires):
        pos = circuit.readout_perm[w] if logical_order else k
        out += _wire_bits(idx, w, n) << (m - 1 - pos)
    return out


def _postselect_mask(circuit: Circuit) -> np.ndarray:
    n = circuit.n
    idx = np.arange(1 << n)
    keep = np.ones(1 << n, dtype=bool)
    for w in circuit.ancilla_wires:
        keep &= _wire_bits(idx, w, n) == 0
    return keep


def measured_distribution(circuit: Circuit, state: Statevector) -> np.ndarray:
    """Post-selected probability distribution over the logical register."""
    p = state.probabilities()
    keep = _postselect_mask(circuit)
    kept = p[keep]
    total = kept.sum()
    if total <= 0.0:
        raise SimulationError("post-selection removed all probability mass")
    dist = np.bincount(
        _measured_index_map(circuit, logical_order=True)[keep],
        weights=kept,
        minlength=1 << len(circuit.measured_wires),
    )
    return dist / total


def expectation(state: Statevector, model: IsingModel) -> float:
    """Energy expectation of the model in the given state."""
    if state.n != model.n:
        raise SimulationError(f"state on {state.n} wires vs model on {model.n} qubits")
    return float(state.probabilities() @ energy_table(model))


# ---------------------------------------------------------------------------
# Noise model and sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NoiseModel:
    """Synthetic error channels applied around an otherwise exact simulation.

    gate_depolarizing
        Probability, per gate *kind*, of a uniformly random non-identity
        Pauli on the gate's wires right after the gate.
    per_gate
        Optional per-instance depolarizing rates (one entry per circuit
        gate), e.g. derived from backend calibration; overrides the kind map.
    coherent_overrotation
        Radians added (in the rotation's own direction) to every phase-type
        angle, plus a trailing Y-rotation of the same size after each H.
        Structured, reproducible error.
    zz_after_cnot
        Residual ZZ phase (radians) after every CNOT.  Structured error.
    readout
        Per-wire asymmetric flip probabilities ``(p01, p10)`` where p01 is
        the chance a true 0 reads as 1.
    global_depolarizing
        Probability that a shot's outcome is replaced by a uniform draw,
        realizing a convex mixture of the ideal and uniform distributions.
    """

    gate_depolarizing: dict[str, float] = field(default_factory=dict)
    coherent_overrotation: float = 0.0
    zz_after_cnot: float = 0.0
    readout: dict[int, tuple[float, float]] = field(default_factory=dict)
    global_depolarizing: float = 0.0
    seed: int = 0
    per_gate: tuple[float, ...] | None = None

    def __post_init__(self):
        probs = list(self.gate_depolarizing.values()) + [self.global_depolarizing]
        for p01, p10 in self.readout.values():
            probs += [p01, p10]
        if self.per_gate is not None:
            probs += list(self.per_gate)
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise SimulationError("noise probabilities must lie in [0, 1]")

    def gate_rate(self, gate: Gate, index: int) -> float:
        if self.per_gate is not None:
            return self.per_gate[index]
        return self.gate_depolarizing.get(gate.kind, 0.0)

    def has_gate_noise(self) -> bool:
        if self.per_gate is not None:
            return any(p > 0.0 for p in self.per_gate)
        return any(p > 0.0 for p in self.gate_depolarizing.values())


@dataclass(frozen=True)
class CountsHistogram:
    """Measured bitstring counts (wire order) after post-selection."""

    counts: dict[str, float]
    shots: int
    discarded: int = 0

    def total(self) -> float:
        return float(sum(self.counts.values()))

    def to_json(self) -> str:
        import json

        return json.dumps({"shots": self.shots, "discarded": self.discarded, "counts": self.counts})

    @staticmethod
    def from_json(text: str) -> "CountsHistogram":
        import json

        raw = json.loads(text)
        return CountsHistogram(counts=dict(raw["counts"]), shots=raw["shots"], discarded=raw.get("discarded", 0))


_PAULI1 = ("x", "y", "z")


def _apply_random_paulis(psi, rows, wires, codes, n):
    """Apply per-row Pauli errors; ``codes`` picks a non-identity label."""
    for value in np.unique(codes):
        sel = rows[codes == value]
        sub = psi[sel]
        if len(wires) == 1:
            _apply_pauli(sub, _PAULI1[value], wires[0], n)
        else:
            a, b = divmod(value + 1, 4)  # value in 0..14 -> non-identity pair
            if a:
                _apply_pauli(sub, _PAULI1[a - 1], wires[0], n)
            if b:
                _apply_pauli(sub, _PAULI1[b - 1], wires[1], n)
        psi[sel] = sub


def _sample_rows(probs: np.ndarray, rng) -> np.ndarray:
    """One basis-state draw per row of a (batch, dim) probability array."""
    cum = np.cumsum(probs, axis=1)
    cum /= cum[:, -1:]
    u = rng.random(probs.shape[0])
    return (cum < u[:, None]).sum(axis=1)


def _trajectory_outcomes(circuit: Circuit, noise: NoiseModel, shots: int, seed_seq) -> np.ndarray:
    n = circuit.n
    delta, zeta = noise.coherent_overrotation, noise.zz_after_cnot
    out = np.empty(shots, dtype=np.int64)
    starts = range(0, shots, _CHUNK)
    seeds = seed_seq.spawn(len(starts))
    for k, start in enumerate(starts):
        b = min(_CHUNK, shots - start)
        rng = np.random.default_rng(seeds[k])
        psi = np.zeros((b, 1 << n), dtype=complex)
        psi[:, 0] = 1.0
        for gi, g in enumerate(circuit.gates):
            _apply_gate(psi, g, n, delta, zeta)
            rate = noise.gate_rate(g, gi)
            if rate > 0.0:
                hit = np.flatnonzero(rng.random(b) < rate)
                if hit.size:
                    n_codes = 3 if len(g.qubits) == 1 else 15
                    codes = rng.integers(0, n_codes, size=hit.size)
                    _apply_random_paulis(psi, hit, g.qubits, codes, n)
        out[start : start + b] = _sample_rows(np.abs(psi) ** 2, rng)
    return out


def sample(circuit: Circuit, noise: NoiseModel | None, shots: int, seed: int | None = None) -> CountsHistogram:
    """Draw measurement outcomes, honoring the noise model and post-selection.

    Identical ``(circuit, noise, shots, seed)`` always reproduces the same
    histogram.  Shots lost to ancilla post-selection are excluded from the
    counts and reported in ``discarded``.
    """
    if shots < 1:
        raise SimulationError("shots must be >= 1")
    n = circuit.n
    if seed is None:
        seed = noise.seed if noise is not None else 0
    root = np.random.SeedSequence(seed)
    traj_seq, post_seed = root.spawn(2)
    rng = np.random.default_rng(post_seed)

    if noise is not None and noise.has_gate_noise():
        outcomes = _trajectory_outcomes(circuit, noise, shots, traj_seq)
    else:
        delta = noise.coherent_overrotation if noise else 0.0
        zeta = noise.zz_after_cnot if noise else 0.0
        probs = simulate(circuit, coherent_overrotation=delta, zz_after_cnot=zeta).probabilities()
        cum = np.cumsum(probs)
        cum /= cum[-1]
        outcomes = np.searchsorted(cum, np.random.default_rng(traj_seq).random(shots), side="right")

    if noise is not None and noise.global_depolarizing > 0.0:
        mixed = rng.random(shots) < noise.global_depolarizing
        outcomes = np.where(mixed, rng.integers(0, 1 << n, size=shots), outcomes)

    if noise is not None and noise.readout:
        bits = (outcomes[:, None] >> (n - 1 - np.arange(n))) & 1
        r = rng.random((shots, n))
        for w, (p01, p10) in noise.readout.items():
            col = bits[:, w]
            flip = np.where(col == 0, r[:, w] < p01, r[:, w] < p10)
            bits[:, w] = col ^ flip
        outcomes = bits @ (1 << (n - 1 - np.arange(n)))

    keep = _postselect_mask(circuit)[outcomes]
    retained = outcomes[keep]
    discarded = int(shots - retained.size)
    if retained.size == 0:
        return CountsHistogram(counts={}, shots=0, discarded=discarded)

    m = len(circuit.measured_wires)
    meas = _measured_index_map(circuit, logical_order=False)[retained]
    binned = np.bincount(meas, minlength=1 << m)
    counts = {format(i, f"0{m}b"): int(c) for i, c in enumerate(binned) if c}
    return CountsHistogram(counts=counts, shots=int(retained.size), discarded=discarded)


# ---------------------------------------------------------------------------
# Measurement-error calibration and mitigation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CalibrationMatrix:
    """Column-stochastic matrix M[i, j] = P(measure i | prepared j)."""

    n: int
    matrix: np.ndarray

    def __post_init__(self):
        dim = 1 << self.n
        if self.matrix.shape != (dim, dim):
            raise SimulationError(f"calibration matrix must be {dim}x{dim}")
        if np.abs(self.matrix.sum(axis=0) - 1.0).max() > 1e-9:
            raise SimulationError("calibration matrix columns must sum to 1")

    def to_csv(self) -> str:
        labels = [format(i, f"0{self.n}b") for i in range(1 << self.n)]
        lines = ["measured/prepared," + ",".join(labels)]
        for i, row in enumerate(self.matrix):
            lines.append(labels[i] + "," + ",".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_csv(text: str) -> "CalibrationMatrix":
        rows = [line.split(",") for line in text.strip().splitlines()]
        dim = len(rows) - 1
        n = dim.bit_length() - 1
        matrix = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
        return CalibrationMatrix(n=n, matrix=matrix)


def build_calibration_matrix(n: int, noise: NoiseModel | None, shots_per_state: int, seed: int = 0) -> CalibrationMatrix:
    """Estimate the readout calibration matrix by preparing every basis state.

    Each column comes from sampling an X-gate preparation circuit under the
    given noise model, so gate noise on the preparation X gates leaks into
    the estimate exactly as it would on hardware.
    """
    if n > 6:
        raise SimulationError("calibration limited to 6 wires")
    dim = 1 << n
    seeds = np.random.SeedSequence(seed).spawn(dim)
    matrix = np.zeros((dim, dim))
    for j in range(dim):
        gates = tuple(gate_x(w) for w in range(n) if (j >> (n - 1 - w)) & 1)
        prep = Circuit(n=n, gates=gates)
        hist = sample(prep, noise, shots_per_state, seed=int(seeds[j].generate_state(1)[0]))
        for bits, c in hist.counts.items():
            matrix[int(bits, 2), j] = c
        matrix[:, j] /= matrix[:, j].sum()
    return CalibrationMatrix(n=n, matrix=matrix)


def mitigate(counts: CountsHistogram, cal: CalibrationMatrix, condition_bound: float = 1e8) -> CountsHistogram:
    """Invert the calibration matrix on a histogram.

    Solves ``M x = c`` exactly, clips negative entries, and rescales back to
    the observed shot total.  Mitigated counts are real-valued.
    """
    dim = 1 << cal.n
    for bits in counts.counts:
        if len(bits) != cal.n:
            raise MitigationError(f"counts use {len(bits)}-bit strings but calibration is {cal.n}-bit")
    cond = float(np.linalg.cond(cal.matrix))
    if not math.isfinite(cond) or cond > condition_bound:
        raise MitigationError(f"calibration matrix condition number {cond:.3g} exceeds {condition_bound:.3g}")
    c = np.zeros(dim)
    for bits, v in counts.counts.items():
        c[int(bits, 2)] = v
    total = c.sum()
    xvec = np.linalg.solve(cal.matrix, c)
    xvec = np.clip(xvec, 0.0, None)
    s = xvec.sum()
    if s <= 0.0:
        raise MitigationError("mitigated distribution vanished after clipping")
    xvec *= total / s
    mitigated = {format(i, f"0{cal.n}b"): float(v) for i, v in enumerate(xvec) if v > 0.0}
    return CountsHistogram(counts=mitigated, shots=counts.shots, discarded=counts.discarded)


def noise_from_backend(circuit: Circuit, embedding, backend, seed: int = 0) -> NoiseModel:
    """Per-instance noise model from backend calibration data.

    Depolarizing rates follow the calibrated error of each gate as placed by
    the embedding; readout flip pairs come from the mapped qubits.
    """
    from .topology import gate_error_for

    rates = tuple(gate_error_for(backend, g, embedding) for g in circuit.gates)
    readout = {}
    for w in tuple(circuit.measured_wires) + tuple(circuit.ancilla_wires):
        q = embedding.mapping[w]
        try:
            readout[w] = backend.readout_errors[q]
        except KeyError:
            raise SimulationError(f"backend {backend.name} has no readout calibration for qubit {q}") from None
    return NoiseModel(per_gate=rates, readout=readout, seed=seed)
