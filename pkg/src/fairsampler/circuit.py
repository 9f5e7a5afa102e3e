"""Gate-level circuit representation with readout bookkeeping.

Circuits are immutable gate sequences over ``n`` wires plus the metadata
needed to interpret a measurement: which wires are read out, the permutation
mapping each wire back to the logical qubit it ends up holding, and which
wires are ancillas that must be post-selected on 0.

Phase-type gates are stored by *exponent*: ``phase(e)`` is
``diag(1, exp(i*pi*e))``, so an exponent is the gate's Z power.  This keeps
compiled phase patterns (e.g. ``-2*gamma/pi``) literal field values instead
of radians.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

#: kind -> arity; phase kinds additionally carry an exponent
GATE_ARITY = {
    "h": 1,
    "x": 1,
    "t": 1,
    "tdg": 1,
    "phase": 1,
    "cphase": 2,
    "cnot": 2,
    "swap": 2,
}

_PHASE_KINDS = {"phase", "cphase"}


class CircuitError(ValueError):
    """Malformed gate or circuit."""


class QasmParseError(ValueError):
    """Unparseable OpenQASM input; message carries the line number."""


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    exponent: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != GATE_ARITY[self.kind]:
            raise CircuitError(f"{self.kind} expects {GATE_ARITY[self.kind]} qubits, got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"{self.kind} acts on repeated qubit {self.qubits}")
        if (self.exponent is None) == (self.kind in _PHASE_KINDS):
            raise CircuitError(f"{self.kind} exponent mismatch")
        if self.exponent is not None:
            object.__setattr__(self, "exponent", float(self.exponent))


# Short constructors; control comes first for cnot/cphase.
def h(q: int) -> Gate:
    return Gate("h", (q,))


def x(q: int) -> Gate:
    return Gate("x", (q,))


def t(q: int) -> Gate:
    return Gate("t", (q,))


def tdg(q: int) -> Gate:
    return Gate("tdg", (q,))


def phase(q: int, exponent: float) -> Gate:
    return Gate("phase", (q,), exponent)


def cphase(control: int, target: int, exponent: float) -> Gate:
    return Gate("cphase", (control, target), exponent)


def cnot(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


def swap(a: int, b: int) -> Gate:
    return Gate("swap", (a, b))


@dataclass(frozen=True)
class Circuit:
    """Immutable gate list over ``n`` wires.

    ``readout_perm[w]`` is the logical qubit label held by wire ``w`` after
    the final gate; it is a permutation of ``range(n)``.  ``measured_wires``
    lists the wires whose bits form the output string (in that order) and
    never intersects ``ancilla_wires``.
    """

    n: int
    gates: tuple[Gate, ...] = ()
    readout_perm: tuple[int, ...] = ()
    ancilla_wires: frozenset[int] = frozenset()
    measured_wires: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise CircuitError("circuit needs at least one wire")
        object.__setattr__(self, "gates", tuple(self.gates))
        if not self.readout_perm:
            object.__setattr__(self, "readout_perm", tuple(range(self.n)))
        if not self.measured_wires and not self.ancilla_wires:
            object.__setattr__(self, "measured_wires", tuple(range(self.n)))
        object.__setattr__(self, "ancilla_wires", frozenset(self.ancilla_wires))
        if sorted(self.readout_perm) != list(range(self.n)):
            raise CircuitError(f"readout_perm {self.readout_perm} is not a permutation of range({self.n})")
        if set(self.measured_wires) & self.ancilla_wires:
            raise CircuitError("measured_wires and ancilla_wires overlap")
        for g in self.gates:
            if any(q >= self.n for q in g.qubits):
                raise CircuitError(f"gate {g} out of range for {self.n} wires")

    @property
    def measured_readout(self) -> tuple[int, ...]:
        """Logical label of each measured wire, in measurement order."""
        return tuple(self.readout_perm[w] for w in self.measured_wires)


def append(circuit: Circuit, gate: Gate) -> Circuit:
    """Return a new circuit with ``gate`` appended."""
    if any(q >= circuit.n for q in gate.qubits):
        raise CircuitError(f"gate {gate} out of range for {circuit.n} wires")
    return Circuit(
        n=circuit.n,
        gates=circuit.gates + (gate,),
        readout_perm=circuit.readout_perm,
        ancilla_wires=circuit.ancilla_wires,
        measured_wires=circuit.measured_wires,
    )


@dataclass(frozen=True)
class GateCounts:
    rotations: int
    cnots: int


def count_gates(gates) -> GateCounts:
    """Single-qubit and CNOT totals for a circuit or gate sequence.

    A leftover swap counts as its 3-CNOT expansion and a controlled phase as
    its standard 2-CNOT + 3-rotation expansion; compiled circuits contain
    neither.
    """
    if isinstance(gates, Circuit):
        gates = gates.gates
    rot = 0
    cx = 0
    for g in gates:
        if g.kind == "cnot":
            cx += 1
        elif g.kind == "swap":
            cx += 3
        elif g.kind == "cphase":
            cx += 2
            rot += 3
        else:
            rot += 1
    return GateCounts(rotations=rot, cnots=cx)


# ---------------------------------------------------------------------------
# OpenQASM 2.0 subset
# ---------------------------------------------------------------------------

_QASM_1Q = {"h": "h", "x": "x", "t": "t", "tdg": "tdg"}


def _format_angle(exponent: float) -> str:
    return f"{exponent!r}*pi"


def to_qasm(circuit: Circuit) -> str:
    """Serialize to OpenQASM 2.0.

    ``phase(e)`` maps to ``u1(e*pi)`` and ``cphase`` to ``cu1``; the creg
    index of each measure records the logical label of the measured wire, and
    ancilla post-selection is written as a trailing comment.
    """
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"qreg q[{circuit.n}];",
        f"creg c[{len(circuit.measured_wires)}];",
    ]
    for g in circuit.gates:
        if g.kind in _QASM_1Q:
            lines.append(f"{_QASM_1Q[g.kind]} q[{g.qubits[0]}];")
        elif g.kind == "phase":
            lines.append(f"u1({_format_angle(g.exponent)}) q[{g.qubits[0]}];")
        elif g.kind == "cphase":
            lines.append(f"cu1({_format_angle(g.exponent)}) q[{g.qubits[0]}],q[{g.qubits[1]}];")
        elif g.kind == "cnot":
            lines.append(f"cx q[{g.qubits[0]}],q[{g.qubits[1]}];")
        elif g.kind == "swap":
            lines.append(f"swap q[{g.qubits[0]}],q[{g.qubits[1]}];")
    for w in circuit.measured_wires:
        lines.append(f"measure q[{w}] -> c[{circuit.readout_perm[w]}];")
    for w in sorted(circuit.ancilla_wires):
        lines.append(f"// postselect q[{w}]=0")
    return "\n".join(lines) + "\n"


_ANGLE_RE = re.compile(
    r"^\s*(?:(?P<coef>[+-]?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s*\*\s*pi"
    r"|(?P<sign>[+-]?)pi(?:\s*/\s*(?P<den>\d+))?"
    r"|(?P<plain>[+-]?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?))\s*$"
)


def _parse_angle(text: str, lineno: int) -> float:
    """Angle expression -> phase exponent (angle / pi)."""
    m = _ANGLE_RE.match(text)
    if not m:
        raise QasmParseError(f"line {lineno}: cannot parse angle {text!r}")
    if m.group("coef") is not None:
        return float(m.group("coef"))
    if m.group("plain") is not None:
        return float(m.group("plain")) / math.pi
    val = 1.0 if m.group("sign") != "-" else -1.0
    if m.group("den"):
        val /= int(m.group("den"))
    return val


_LINE_RE = re.compile(r"^(?P<name>[a-z][a-z0-9]*)\s*(?:\((?P<arg>[^)]*)\))?\s+(?P<operands>.*);$")
_QREF_RE = re.compile(r"^q\[(\d+)\]$")
_POSTSELECT_RE = re.compile(r"^//\s*postselect\s+q\[(\d+)\]=0\s*$")


def from_qasm(text: str) -> Circuit:
    """Parse the OpenQASM 2.0 subset emitted by :func:`to_qasm`.

    Supported statements: header/include/qreg/creg, the gates h, x, t, tdg,
    u1, cu1, cx, swap, plus measure and the post-selection comment.
    """
    n = None
    gates: list[Gate] = []
    measures: list[tuple[int, int]] = []  # (wire, logical)
    ancillas: set[int] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        ps = _POSTSELECT_RE.match(line)
        if ps:
            ancillas.add(int(ps.group(1)))
            continue
        if line.startswith("//"):
            continue
        if line.startswith("OPENQASM") or line.startswith("include"):
            continue
        m = re.match(r"^qreg\s+q\[(\d+)\];$", line)
        if m:
            n = int(m.group(1))
            continue
        if re.match(r"^creg\s+\w+\[\d+\];$", line):
            continue
        m = re.match(r"^measure\s+q\[(\d+)\]\s*->\s*c\[(\d+)\];$", line)
        if m:
            measures.append((int(m.group(1)), int(m.group(2))))
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise QasmParseError(f"line {lineno}: cannot parse {line!r}")
        name = m.group("name")
        operands = []
        for ref in m.group("operands").split(","):
            q = _QREF_RE.match(ref.strip())
            if not q:
                raise QasmParseError(f"line {lineno}: bad operand {ref.strip()!r}")
            operands.append(int(q.group(1)))
        if name in _QASM_1Q and m.group("arg") is None and len(operands) == 1:
            gates.append(Gate(name, tuple(operands)))
        elif name == "u1" and len(operands) == 1:
            gates.append(phase(operands[0], _parse_angle(m.group("arg") or "", lineno)))
        elif name == "cu1" and len(operands) == 2:
            gates.append(cphase(operands[0], operands[1], _parse_angle(m.group("arg") or "", lineno)))
        elif name == "cx" and len(operands) == 2:
            gates.append(cnot(*operands))
        elif name == "swap" and len(operands) == 2:
            gates.append(swap(*operands))
        else:
            raise QasmParseError(f"line {lineno}: unsupported gate {name!r}")

    if n is None:
        raise QasmParseError("missing qreg declaration")
    if measures:
        measured = tuple(w for w, _ in measures)
        perm = [None] * n
        for w, label in measures:
            perm[w] = label
        spare = iter(sorted(set(range(n)) - {lab for _, lab in measures}))
        perm = tuple(next(spare) if p is None else p for p in perm)
    else:
        measured = tuple(w for w in range(n) if w not in ancillas)
        perm = tuple(range(n))
    return Circuit(n=n, gates=tuple(gates), readout_perm=perm, ancilla_wires=frozenset(ancillas), measured_wires=measured)


def equivalent(c1: Circuit, c2: Circuit, tol: float = 1e-10) -> bool:
    """True when both circuits produce the same measured distribution from
    the all-zeros input, after readout permutation and post-selection."""
    import numpy as np

    from .simulator import measured_distribution, simulate

    d1 = measured_distribution(c1, simulate(c1))
    d2 = measured_distribution(c2, simulate(c2))
    if d1.shape != d2.shape:
        raise CircuitError(f"measured register sizes differ: {d1.shape} vs {d2.shape}")
    return bool(np.max(np.abs(d1 - d2)) <= tol)
