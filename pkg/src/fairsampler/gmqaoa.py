"""Grover-mixer QAOA circuit construction and topology-aware compilation.

A single round applies a phase separator ``exp(-i*gamma*H)`` followed by the
Grover mixer ``Id - (1 - exp(-i*beta)) |F><F|`` where ``|F>`` is the uniform
superposition prepared by a Hadamard layer.  Both pieces are compiled by hand
to the five restricted connectivities (2L/3L/4L/4T/5T) with three cost
tricks:

* a swap merged into an adjacent CNOT on the same wire pair costs one extra
  CNOT instead of three;
* swaps that reach the circuit boundary are absorbed into the initial
  placement or the readout permutation instead of being executed;
* multi-controlled phase gates are decomposed through relative-phase
  Toffolis whose spurious phases cancel between the compute and uncompute
  halves.

The mixer is fully symmetric in its wires, so the phase separator is free to
end in any qubit placement; routing is a small exact shortest-path search
over (placement, remaining-terms) states.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from . import circuit as circ
from .circuit import Circuit, Gate, cnot, h, phase, tdg
from .circuit import t as tgate
from .ising import IsingModel, builtin_problem, energy_table, fix_q0_up, ground_states


class CompilationError(ValueError):
    """The requested (problem, architecture) combination cannot be built."""


@dataclass(frozen=True)
class AngleParams:
    """Per-round mixer/separator angles in radians."""

    betas: tuple[float, ...]
    gammas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        if len(self.betas) != len(self.gammas):
            raise CompilationError("betas and gammas must have equal length")
        if not self.betas:
            raise CompilationError("at least one round is required")

    @property
    def rounds(self) -> int:
        return len(self.betas)


@dataclass(frozen=True)
class Architecture:
    """Connectivity target: a line (L) or T-shaped (T) coupling graph."""

    name: str
    n: int
    edges: frozenset[tuple[int, int]]

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges


def _arch(name: str, n: int, edges) -> Architecture:
    return Architecture(name=name, n=n, edges=frozenset((min(a, b), max(a, b)) for a, b in edges))


ARCHITECTURES = {
    "2L": _arch("2L", 2, [(0, 1)]),
    "3L": _arch("3L", 3, [(0, 1), (1, 2)]),
    "4L": _arch("4L", 4, [(0, 1), (1, 2), (2, 3)]),
    "4T": _arch("4T", 4, [(0, 1), (1, 2), (1, 3)]),
    "5T": _arch("5T", 5, [(0, 1), (1, 2), (1, 3), (3, 4)]),
}

#: architectures each problem has a hand compilation for
SUPPORTED_PAIRS = {
    "a": ("4L", "4T", "5T"),
    "b": ("4L", "4T", "5T"),
    "c": ("5T",),
    "d": ("3L",),
    "e": ("2L",),
    "f": ("2L",),
}

#: grid-optimal single-round angles (units of pi) found at pi/60 resolution
REFERENCE_ANGLES = {
    "a": (-1 / 2, -11 / 12),
    "b": (-11 / 15, -17 / 60),
    "c": (-23 / 60, 1 / 15),
    "d": (-5 / 12, 1 / 10),
    "e": (-23 / 60, 3 / 5),
}


def reference_angles(problem: str) -> AngleParams:
    try:
        b, g = REFERENCE_ANGLES[problem]
    except KeyError:
        raise CompilationError(f"no reference angles for problem {problem!r}") from None
    return AngleParams(betas=(b * math.pi,), gammas=(g * math.pi,))


@dataclass(frozen=True)
class CompiledCircuit:
    circuit: Circuit
    architecture: str
    problem: str
    angles: AngleParams | None
    uses_ancilla: bool

    def sidecar_json(self) -> str:
        return json.dumps(
            {
                "problem": self.problem,
                "architecture": self.architecture,
                "beta": list(self.angles.betas) if self.angles else None,
                "gamma": list(self.angles.gammas) if self.angles else None,
                "uses_ancilla": self.uses_ancilla,
                "readout_perm": list(self.circuit.readout_perm),
            }
        )


# ---------------------------------------------------------------------------
# Dense reference (uncompiled semantics)
# ---------------------------------------------------------------------------


def gm_qaoa_state(model: IsingModel, angles: AngleParams) -> np.ndarray:
    """Exact ansatz state from the defining operators, no circuit involved."""
    energies = energy_table(model)
    dim = energies.size
    psi = np.full(dim, 1.0 / math.sqrt(dim), dtype=complex)
    for beta, gamma in zip(angles.betas, angles.gammas):
        psi = psi * np.exp(-1j * gamma * energies)
        psi = psi - (1.0 - np.exp(-1j * beta)) * psi.mean()
    return psi


def mixer_matrix(m: int, beta: float) -> np.ndarray:
    """Dense ``Id - (1 - e^{-i beta}) |F><F|`` on ``m`` wires."""
    dim = 1 << m
    proj = np.full((dim, dim), 1.0 / dim, dtype=complex)
    return np.eye(dim, dtype=complex) - (1.0 - np.exp(-1j * beta)) * proj


def phase_separator_matrix(model: IsingModel, gamma: float) -> np.ndarray:
    return np.diag(np.exp(-1j * gamma * energy_table(model)))


# ---------------------------------------------------------------------------
# Gate-emission primitives
#
# Phase bookkeeping convention: phase(w, e) multiplies the wire-1 branch by
# exp(i*pi*e).  Diagonal constructions below are exact including global
# phase; relative-phase Toffolis are exact only as compute/uncompute pairs.
# ---------------------------------------------------------------------------


def dagger(gates) -> list[Gate]:
    out = []
    for g in reversed(tuple(gates)):
        if g.kind == "t":
            out.append(tdg(g.qubits[0]))
        elif g.kind == "tdg":
            out.append(tgate(g.qubits[0]))
        elif g.kind in ("phase", "cphase"):
            out.append(Gate(g.kind, g.qubits, -g.exponent))
        else:  # h, x, cnot, swap are self-inverse
            out.append(g)
    return out


def _term(u: int, v: int, e: float) -> list[Gate]:
    # exp(i*pi*e/2 * Z_u Z_v) up to global phase: parity phase on u xor v
    return [cnot(u, v), phase(v, e), cnot(u, v)]


def _term_swap(u: int, v: int, e: float) -> list[Gate]:
    # same diagonal, composed with SWAP(u, v); one CNOT more than _term
    return [cnot(u, v), phase(v, e), cnot(v, u), cnot(u, v)]


def _cp(u: int, v: int, e: float) -> list[Gate]:
    # controlled phase exp(i*pi*e) on |11>, 2 CNOTs
    return [phase(u, e / 2), cnot(u, v), phase(v, -e / 2), cnot(u, v), phase(v, e / 2)]


def _cpswap(u: int, v: int, e: float) -> list[Gate]:
    # controlled phase composed with SWAP(u, v), 3 CNOTs
    return [phase(u, e / 2), cnot(u, v), phase(v, -e / 2), cnot(v, u), cnot(u, v), phase(u, e / 2)]


def _swap3(u: int, v: int) -> list[Gate]:
    return [cnot(u, v), cnot(v, u), cnot(u, v)]


def _ccp_path(a: int, b: int, c: int, e: float) -> list[Gate]:
    """Doubly-controlled phase exp(i*pi*e) on |111>, on the path a-b-c.

    7 CNOTs; composes with SWAP(b, c), which callers track in the
    permutation.  Only the edges (a, b) and (b, c) are used.
    """
    q = e / 4
    return [
        phase(b, q),
        cnot(a, b),
        phase(b, -q),
        cnot(c, b),
        phase(b, q),
        cnot(a, b),
        phase(b, -q),
        cnot(b, c),
        cnot(c, b),
        cnot(a, b),
        phase(b, -q),
        cnot(a, b),
        phase(b, q),
        phase(a, q),
    ]


def _rccx(c1: int, c2: int, t: int) -> list[Gate]:
    """Relative-phase Toffoli, 3 CNOTs, self-inverse.

    Equals CCX up to a diagonal that depends on both controls and the
    target, so it may only sandwich blocks that are diagonal on ``t`` (or
    controlled from ``t``).
    """
    return [h(t), tgate(t), cnot(c1, t), tdg(t), cnot(c2, t), tgate(t), cnot(c1, t), tdg(t), h(t)]


def _parity_rccx(c1: int, c2: int, t: int) -> list[Gate]:
    """Relative-phase Toffoli, 4 CNOTs, spurious phase on the controls only.

    Safe in sandwiches whose middle flips the target (the Toffoli ladder
    below does); pair with its dagger.
    """
    return [
        h(t),
        tgate(t),
        cnot(c1, t),
        tdg(t),
        cnot(c2, t),
        tgate(t),
        cnot(c1, t),
        tdg(t),
        cnot(c2, t),
        h(t),
    ]


def _parity_rc3x(a: int, b: int, c: int, t: int) -> list[Gate]:
    """Triply-controlled X up to a phase on the controls only, 8 CNOTs.

    Gray-code walk over the target parities with pi/8 phase steps; every
    control must be adjacent to ``t``.
    """
    q = 1 / 8
    seq: list[Gate] = [h(t), phase(t, q)]
    for ctrl, sign in ((a, -q), (b, q), (a, -q), (c, q), (a, -q), (b, q), (a, -q)):
        seq += [cnot(ctrl, t), phase(t, sign)]
    seq += [cnot(c, t), h(t)]
    return seq


def _bridge_cx(src: int, mid: int, dst: int) -> list[Gate]:
    # long-range CNOT across one intermediate wire, 4 CNOTs, mid untouched
    return [cnot(src, mid), cnot(mid, dst), cnot(src, mid), cnot(mid, dst)]


# ---------------------------------------------------------------------------
# Phase-separator routing
# ---------------------------------------------------------------------------


def build_state_prep(wires) -> list[Gate]:
    """Hadamard on every problem wire (uniform superposition prep).

    Accepts a wire count or an iterable of wire indices.
    """
    if isinstance(wires, int):
        wires = range(wires)
    return [h(w) for w in wires]


def _router(terms, local_edges, start_perms):
    """Exact min-CNOT routing of two-qubit phase terms.

    State: (placement, frozenset of remaining term indices) where placement
    maps local wire -> logical qubit.  Actions: emit an adjacent term
    (2 CNOTs), emit it merged with a swap of its wires (3), or swap any edge
    (3).  Returns (cost, start placement, action list); actions are
    ('term', idx, u, v, swapped) or ('swap', u, v) in local wire indices.
    """
    target = frozenset()
    full = frozenset(range(len(terms)))
    heap = []
    best = {}
    for k, p in enumerate(start_perms):
        state = (tuple(p), full)
        best[state] = (0, None, None)
        heapq.heappush(heap, (0, k, state))
    tie = len(start_perms)
    while heap:
        cost, _, state = heapq.heappop(heap)
        if best[state][0] < cost:
            continue
        perm, remaining = state
        if remaining == target:
            reverse_actions = []
            cur = state
            while True:
                _, prev, act = best[cur]
                if prev is None:
                    start = cur[0] if not reverse_actions else _rewind_start(state, reverse_actions)
                    return cost, start, list(reversed(reverse_actions))
                reverse_actions.append(act)
                cur = prev
        pos = {q: w for w, q in enumerate(perm)}
        moves = []
        for idx in sorted(remaining):
            i, j, _ = terms[idx]
            u, v = pos[i], pos[j]
            if (min(u, v), max(u, v)) in local_edges:
                moves.append((2, ("term", idx, u, v, False), perm, remaining - {idx}))
                swapped = list(perm)
                swapped[u], swapped[v] = swapped[v], swapped[u]
                moves.append((3, ("term", idx, u, v, True), tuple(swapped), remaining - {idx}))
        for u, v in sorted(local_edges):
            swapped = list(perm)
            swapped[u], swapped[v] = swapped[v], swapped[u]
            moves.append((3, ("swap", u, v), tuple(swapped), remaining))
        for step, act, nperm, nrem in moves:
            nstate = (nperm, nrem)
            ncost = cost + step
            if nstate not in best or ncost < best[nstate][0]:
                best[nstate] = (ncost, state, act)
                tie += 1
                heapq.heappush(heap, (ncost, tie, nstate))
    raise CompilationError("phase separator not routable on this architecture")


def _rewind_start(goal_state, actions):
    # walk the recorded actions backwards from the goal placement
    perm = list(goal_state[0])
    for act in actions:
        if act[0] == "term" and not act[4]:
            continue
        u, v = (act[2], act[3]) if act[0] == "term" else (act[1], act[2])
        perm[u], perm[v] = perm[v], perm[u]
    return tuple(perm)


def build_phase_separator(
    model: IsingModel,
    gamma: float,
    architecture: Architecture,
    current_perm: tuple[int, ...] | None = None,
    wires: tuple[int, ...] | None = None,
) -> tuple[list[Gate], tuple[int, ...]]:
    """Compile ``exp(-i*gamma*H)`` onto the architecture.

    ``wires`` restricts the usable wires (ancilla exclusion); ``current_perm``
    pins the starting placement (wire -> logical, parallel to ``wires``), and
    when omitted the cheapest placement is chosen.  Returns the gate list and
    the final placement.
    """
    if wires is None:
        wires = tuple(range(architecture.n))
    if model.n > len(wires):
        raise CompilationError(f"model needs {model.n} wires but only {len(wires)} are usable")
    if model.n < len(wires):
        raise CompilationError("partial-width placement not supported; pad the model")
    local_edges = {
        (min(a, b), max(a, b))
        for a, b in itertools.combinations(range(len(wires)), 2)
        if architecture.adjacent(wires[a], wires[b])
    }
    terms = sorted(model.quadratic, key=lambda term: (term[0], term[1]))
    if current_perm is not None:
        starts = [tuple(current_perm)]
    else:
        starts = sorted(itertools.permutations(range(model.n)))
    _, start, actions = _router(terms, local_edges, starts)

    gates: list[Gate] = []
    perm = list(start)
    pos0 = {q: wires[w] for w, q in enumerate(start)}
    for i, coeff in model.linear:
        gates.append(phase(pos0[i], -2.0 * gamma * coeff / math.pi))
    for act in actions:
        if act[0] == "term":
            _, idx, u, v, swapped = act
            coeff = terms[idx][2]
            exp = -2.0 * gamma * coeff / math.pi
            gu, gv = wires[u], wires[v]
            gates += _term_swap(gu, gv, exp) if swapped else _term(gu, gv, exp)
            if swapped:
                perm[u], perm[v] = perm[v], perm[u]
        else:
            _, u, v = act
            gates += _swap3(wires[u], wires[v])
            perm[u], perm[v] = perm[v], perm[u]
    return gates, tuple(perm)


# ---------------------------------------------------------------------------
# Grover mixer compilation
# ---------------------------------------------------------------------------


def _hx_layer(wires) -> list[Gate]:
    return [h(w) for w in wires] + [circ.x(w) for w in wires]


def _xh_layer(wires) -> list[Gate]:
    return [circ.x(w) for w in wires] + [h(w) for w in wires]


def _mixer_core_2l(e: float) -> tuple[list[Gate], list[tuple[int, int]]]:
    return _cp(0, 1, e), []


def _mixer_core_3l(e: float) -> tuple[list[Gate], list[tuple[int, int]]]:
    return _ccp_path(0, 1, 2, e), [(1, 2)]


def _mixer_core_4t(e: float) -> tuple[list[Gate], list[tuple[int, int]]]:
    # roles by position: a@0, c@1(center), b@2, d@3
    gates: list[Gate] = []
    gates += _rccx(0, 2, 1)          # c <- c xor (a and b), relative phase
    gates += _cp(1, 3, -e / 2)       # sandwiched CP(c, d)
    gates += _rccx(0, 2, 1)          # uncompute
    gates += _cpswap(1, 3, e / 2)    # outer CP(c, d), merged swap
    gates += _ccp_path(0, 1, 2, e / 2)  # CCP(a, d, b) on the remaining triple
    return gates, [(1, 3), (1, 2)]


def _mixer_core_4l(e: float) -> tuple[list[Gate], list[tuple[int, int]]]:
    # roles by position: a@0, c@1, d@2, b@3
    gates: list[Gate] = []
    swaps: list[tuple[int, int]] = []
    gates += _cp(1, 2, e / 2)        # outer CP(c, d)
    gates += _swap3(2, 3)            # bring b next to c
    swaps.append((2, 3))
    gates += _rccx(0, 2, 1)
    gates += _swap3(2, 3)
    swaps.append((2, 3))
    gates += _cp(1, 2, -e / 2)       # sandwiched CP(c, d)
    gates += _swap3(2, 3)
    swaps.append((2, 3))
    # uncompute with the final CNOT merged into a swap of wires 0/1
    gates += [h(1), tgate(1), cnot(0, 1), tdg(1), cnot(2, 1), tgate(1), cnot(1, 0), cnot(0, 1), tdg(0), h(0)]
    swaps.append((0, 1))
    gates += _ccp_path(1, 2, 3, e / 2)  # CCP(a, b, d)
    swaps.append((2, 3))
    return gates, swaps


def _mixer_core_5t_ancilla(e: float, anc: int) -> tuple[list[Gate], list[tuple[int, int]]]:
    # anc must sit on a short leaf (wire 0 or 2); the other leaf and the
    # center feed the AND, the 3-4 tail carries the remaining controls.
    if anc not in (0, 2):
        raise CompilationError("ancilla must start on wire 0 or 2 of 5T")
    other = 2 if anc == 0 else 0
    gates: list[Gate] = []
    gates += [cnot(1, anc), cnot(anc, 1)]   # 2-CNOT swap with a known-|0> wire
    gates += _rccx(anc, other, 1)           # AND of two problem qubits into the ancilla
    gates += _ccp_path(1, 3, 4, e)          # CCP(ancilla, tail, tail-end)
    gates += _rccx(anc, other, 1)           # uncompute AND
    return gates, [(anc, 1), (3, 4)]


def _mixer_core_5t_full(e: float) -> tuple[list[Gate], list[tuple[int, int]]]:
    # Lambda_5 via the carrier recursion: x@1, S = {0, 2, 3}, y@4.
    gates: list[Gate] = []
    swaps: list[tuple[int, int]] = []
    rc3x = _parity_rc3x(0, 2, 3, 1)
    gates += [phase(1, e / 4)]
    gates += rc3x
    gates += [phase(1, -e / 4)]
    gates += _bridge_cx(4, 3, 1)
    gates += [phase(1, e / 4)]
    gates += dagger(rc3x)
    gates += [phase(1, -e / 4)]
    # second bridged CNOT from y, its last CNOT merged with SWAP(1, 3)
    gates += [cnot(4, 3), cnot(3, 1), cnot(4, 3), cnot(1, 3), cnot(3, 1)]
    swaps.append((1, 3))
    gates += _swap3(3, 4)
    swaps.append((3, 4))
    # Lambda_4(e/2) on {0, 1, 2, 3}: roles A@0, C@1, B@2, Y@3
    gates += _rccx(0, 2, 1)
    gates += _cp(1, 3, -e / 4)
    gates += _rccx(0, 2, 1)
    gates += _cpswap(1, 3, e / 4)
    swaps.append((1, 3))
    gates += _ccp_path(0, 1, 2, e / 4)
    swaps.append((1, 2))
    return gates, swaps


def build_grover_mixer(
    n: int,
    beta: float,
    architecture: Architecture,
    current_perm: tuple[int, ...],
    allow_ancilla: bool = False,
) -> tuple[list[Gate], tuple[int, ...]]:
    """Compile the Grover mixer for ``n`` problem qubits.

    ``current_perm`` maps every architecture wire to a logical label, with
    label ``n`` marking the ancilla when one is in use.  The mixer is
    symmetric in the problem qubits, so any incoming placement is accepted;
    swaps performed inside the decomposition are returned via the updated
    permutation.
    """
    e = -beta / math.pi
    perm = list(current_perm)
    problem_wires = tuple(w for w in range(architecture.n) if perm[w] < n)
    if len(problem_wires) != n:
        raise CompilationError(f"placement {current_perm} does not hold {n} problem qubits")

    if n == 1:
        w = problem_wires[0]
        return [h(w), circ.x(w), phase(w, e), circ.x(w), h(w)], tuple(perm)

    key = (architecture.name, n, allow_ancilla)
    if key == ("2L", 2, False):
        core, swaps = _mixer_core_2l(e)
    elif key == ("3L", 3, False):
        core, swaps = _mixer_core_3l(e)
    elif key == ("4T", 4, False):
        core, swaps = _mixer_core_4t(e)
    elif key == ("4L", 4, False):
        core, swaps = _mixer_core_4l(e)
    elif key == ("5T", 4, True):
        anc = next(w for w in range(architecture.n) if perm[w] == n)
        core, swaps = _mixer_core_5t_ancilla(e, anc)
    elif key == ("5T", 5, False):
        core, swaps = _mixer_core_5t_full(e)
    else:
        raise CompilationError(f"no mixer compilation for {n} qubits on {architecture.name} (ancilla={allow_ancilla})")

    gates = _hx_layer(problem_wires) + core
    for u, v in swaps:
        perm[u], perm[v] = perm[v], perm[u]
    out_wires = tuple(w for w in range(architecture.n) if perm[w] < n)
    gates += _xh_layer(out_wires)
    return gates, tuple(perm)


# ---------------------------------------------------------------------------
# Full circuits
# ---------------------------------------------------------------------------


def build_full_circuit(problem: str, architecture: str, angles: AngleParams | None = None) -> CompiledCircuit:
    """Compiled fair-sampling circuit for one benchmark problem.

    Problem ``f`` bypasses the ansatz entirely (its two ground states are
    prepared exactly by H, X, CNOT).  All other problems are reduced by the
    q0-up symmetry fixing and compiled round by round; the 5-wire T shape
    hosts the four-qubit problems with one post-selected ancilla.
    """
    if architecture not in ARCHITECTURES:
        raise CompilationError(f"unknown architecture {architecture!r}")
    if problem not in SUPPORTED_PAIRS or architecture not in SUPPORTED_PAIRS[problem]:
        raise CompilationError(f"problem {problem!r} is not compiled for {architecture}")
    arch = ARCHITECTURES[architecture]

    if problem == "f":
        circuit = Circuit(n=2, gates=(h(0), circ.x(1), cnot(0, 1)))
        return CompiledCircuit(circuit=circuit, architecture=architecture, problem="f", angles=None, uses_ancilla=False)

    if angles is None:
        angles = reference_angles(problem)
    reduced = fix_q0_up(builtin_problem(problem))
    m = reduced.n
    uses_ancilla = arch.name == "5T" and m == arch.n - 1
    if not uses_ancilla and m != arch.n:
        raise CompilationError(f"problem {problem} needs {m} wires but {arch.name} has {arch.n}")

    anc_wire = 0 if uses_ancilla else None
    wires = tuple(w for w in range(arch.n) if w != anc_wire)

    gates: list[Gate] = list(build_state_prep(wires))
    ps_perm = None
    for k in range(angles.rounds):
        if anc_wire is not None and anc_wire not in (0, 2):
            # the previous mixer parked the ancilla on the hub; send the
            # clean |0> back to a short leaf so the separator can route
            leaf = 0
            gates += [cnot(leaf, anc_wire), cnot(anc_wire, leaf)]
            holder = {w: ps_perm[i] for i, w in enumerate(wires)}
            holder[anc_wire] = holder.pop(leaf)
            anc_wire = leaf
            wires = tuple(w for w in range(arch.n) if w != anc_wire)
            ps_perm = tuple(holder[w] for w in wires)
        ps_gates, ps_perm = build_phase_separator(reduced, angles.gammas[k], arch, current_perm=ps_perm, wires=wires)
        gates += ps_gates
        full_perm = [None] * arch.n
        for local, w in enumerate(wires):
            full_perm[w] = ps_perm[local]
        if anc_wire is not None:
            full_perm[anc_wire] = m
        mixer_gates, full_perm = build_grover_mixer(m, angles.betas[k], arch, tuple(full_perm), allow_ancilla=uses_ancilla)
        gates += mixer_gates
        # subsequent rounds continue from wherever the mixer left things
        anc_wire = full_perm.index(m) if uses_ancilla else None
        wires = tuple(w for w in range(arch.n) if w != anc_wire)
        ps_perm = tuple(full_perm[w] for w in wires)

    readout = [None] * arch.n
    for local, w in enumerate(wires):
        readout[w] = ps_perm[local]
    if anc_wire is not None:
        readout[anc_wire] = m
    circuit = Circuit(
        n=arch.n,
        gates=tuple(gates),
        readout_perm=tuple(readout),
        ancilla_wires=frozenset() if anc_wire is None else frozenset({anc_wire}),
        measured_wires=wires,
    )
    return CompiledCircuit(circuit=circuit, architecture=architecture, problem=problem, angles=angles, uses_ancilla=uses_ancilla)


def validate_connectivity(circuit: Circuit, architecture: Architecture) -> None:
    """Raise unless every two-qubit gate sits on an architecture edge."""
    for g in circuit.gates:
        if len(g.qubits) == 2 and not architecture.adjacent(*g.qubits):
            raise CompilationError(f"gate {g} is not on an edge of {architecture.name}")
        if g.kind == "swap":
            raise CompilationError("compiled circuits must not contain swap gates")


# ---------------------------------------------------------------------------
# Angle optimization
# ---------------------------------------------------------------------------


def grid_search_angles(problem: str, resolution: float = math.pi / 60) -> tuple[AngleParams, float]:
    """Single-round angle search over beta in [-pi, 0), gamma in [-pi, pi).

    Evaluates the exact ansatz expectation at every grid point.  Ties are
    broken toward higher ground-state probability, then lexicographically
    smaller (beta, gamma), so the result is deterministic.
    """
    steps = math.pi / resolution
    if abs(steps - round(steps)) > 1e-9:
        raise CompilationError("resolution must divide pi")
    nb = int(round(steps))
    reduced = fix_q0_up(builtin_problem(problem))
    energies = energy_table(reduced)
    dim = energies.size
    gs = ground_states(reduced)
    ground_mask = np.zeros(dim, dtype=bool)
    for s in gs.states:
        ground_mask[int(s, 2)] = True

    betas = -math.pi + resolution * np.arange(nb)
    gammas = -math.pi + resolution * np.arange(2 * nb)
    # separator output for every gamma at once: (n_gamma, dim)
    psi_g = np.exp(-1j * np.outer(gammas, energies)) / math.sqrt(dim)
    means = psi_g.mean(axis=1)

    best = None
    for beta in betas:
        coef = 1.0 - np.exp(-1j * beta)
        psi = psi_g - coef * means[:, None]
        probs = np.abs(psi) ** 2
        expectations = probs @ energies
        gsps = probs[:, ground_mask].sum(axis=1)
        for k in range(gammas.size):
            cand = (expectations[k], -gsps[k], beta, gammas[k])
            if best is None or _angle_better(cand, best):
                best = cand
    expectation, neg_gsp, beta, gamma = best
    return AngleParams(betas=(float(beta),), gammas=(float(gamma),)), float(expectation)


def _angle_better(cand, best, tol: float = 1e-12) -> bool:
    if cand[0] < best[0] - tol:
        return True
    if cand[0] > best[0] + tol:
        return False
    if cand[1] < best[1] - tol:
        return True
    if cand[1] > best[1] + tol:
        return False
    return (cand[2], cand[3]) < (best[2], best[3])
