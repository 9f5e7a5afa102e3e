"""Ising Hamiltonians with degenerate ground states.

Sign convention: ``H = -sum_{ij} J_ij Z_i Z_j - sum_i h_i Z_i`` where spin up
(bit ``0``) carries Z eigenvalue +1 and bit position 0 is the leftmost
character of a configuration string.  The built-in problems ``a`` .. ``f``
are small frustrated models whose degenerate ground states make them useful
fair-sampling benchmarks; all of them are symmetric under a simultaneous
up/down flip, so fixing the first spin up halves the qubit count.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

DEGENERACY_TOL = 1e-9
ENUMERATION_LIMIT = 24


class IsingError(ValueError):
    """Malformed model or spin configuration."""


class EnumerationLimitError(IsingError):
    """Exhaustive enumeration was requested beyond the supported size."""


@dataclass(frozen=True)
class IsingModel:
    """Quadratic-plus-linear spin Hamiltonian on ``n`` qubits."""

    n: int
    quadratic: tuple[tuple[int, int, float], ...] = ()
    linear: tuple[tuple[int, float], ...] = ()
    label: str | None = None

    def __post_init__(self):
        if self.n < 1:
            raise IsingError(f"qubit count must be >= 1, got {self.n}")
        object.__setattr__(self, "quadratic", tuple((int(i), int(j), float(c)) for i, j, c in self.quadratic))
        object.__setattr__(self, "linear", tuple((int(i), float(c)) for i, c in self.linear))
        seen = set()
        for i, j, _ in self.quadratic:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise IsingError(f"coupling ({i},{j}) out of range for n={self.n}")
            if i == j:
                raise IsingError(f"self-coupling on qubit {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise IsingError(f"duplicate coupling on pair {key}")
            seen.add(key)
        fields = set()
        for i, _ in self.linear:
            if not 0 <= i < self.n:
                raise IsingError(f"field index {i} out of range for n={self.n}")
            if i in fields:
                raise IsingError(f"duplicate field on qubit {i}")
            fields.add(i)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "quadratic": [[i, j, c] for i, j, c in self.quadratic],
                "linear": [[i, c] for i, c in self.linear],
                "label": self.label,
            }
        )

    @staticmethod
    def from_json(text: str) -> "IsingModel":
        raw = json.loads(text)
        return IsingModel(
            n=raw["n"],
            quadratic=tuple((i, j, c) for i, j, c in raw.get("quadratic", ())),
            linear=tuple((i, c) for i, c in raw.get("linear", ())),
            label=raw.get("label"),
        )


@dataclass(frozen=True)
class GroundStateSet:
    """Minimum energy together with every configuration attaining it."""

    energy: float
    states: tuple[str, ...]
    degeneracy: int


def _check_config(model: IsingModel, bits: str) -> None:
    if len(bits) != model.n or any(c not in "01" for c in bits):
        raise IsingError(f"configuration {bits!r} is not a length-{model.n} bitstring")


def flip(bits: str) -> str:
    """Simultaneous up/down flip of every spin."""
    return "".join("1" if c == "0" else "0" for c in bits)


def energy(model: IsingModel, bits: str) -> float:
    """Evaluate the Hamiltonian on one spin configuration."""
    _check_config(model, bits)
    z = [1.0 - 2.0 * int(c) for c in bits]
    quad = sum(c * z[i] * z[j] for i, j, c in model.quadratic)
    lin = sum(c * z[i] for i, c in model.linear)
    return -quad - lin


def energy_table(model: IsingModel) -> np.ndarray:
    """Energies of all ``2**n`` configurations, indexed with bit 0 as the
    most significant position (configuration string read as a binary int)."""
    n = model.n
    if n > ENUMERATION_LIMIT:
        raise EnumerationLimitError(f"n={n} exceeds the enumeration bound {ENUMERATION_LIMIT}")
    idx = np.arange(1 << n)
    z = 1.0 - 2.0 * ((idx[:, None] >> (n - 1 - np.arange(n))) & 1)
    e = np.zeros(1 << n)
    for i, j, c in model.quadratic:
        e -= c * z[:, i] * z[:, j]
    for i, c in model.linear:
        e -= c * z[:, i]
    return e


def ground_states(model: IsingModel) -> GroundStateSet:
    """Exhaustively enumerate all configurations and collect the minima.

    Configurations within ``DEGENERACY_TOL`` of the minimum count as
    degenerate; the result is sorted lexicographically.
    """
    e = energy_table(model)
    lo = float(e.min())
    members = np.flatnonzero(e <= lo + DEGENERACY_TOL)
    states = tuple(format(int(i), f"0{model.n}b") for i in members)
    return GroundStateSet(energy=lo, states=states, degeneracy=len(states))


def fix_q0_up(model: IsingModel) -> IsingModel:
    """Pin the first spin up, turning its couplings into fields.

    Requires a flip-symmetric model (no linear terms): each J_{0j} becomes
    the field h_{j-1} on the reduced model and the remaining couplings are
    reindexed down by one.  Energies of the original q0-up configurations
    are preserved exactly.
    """
    if model.linear:
        raise IsingError("reduction requires a flip-symmetric model with no linear terms")
    if model.n < 2:
        raise IsingError("cannot reduce a single-qubit model")
    lin = []
    quad = []
    for i, j, c in model.quadratic:
        a, b = min(i, j), max(i, j)
        if a == 0:
            lin.append((b - 1, c))
        else:
            quad.append((a - 1, b - 1, c))
    label = f"{model.label}/q0-fixed" if model.label else None
    return IsingModel(n=model.n - 1, quadratic=tuple(quad), linear=tuple(sorted(lin)), label=label)


# ---------------------------------------------------------------------------
# Built-in benchmark problems
# ---------------------------------------------------------------------------
# Couplings use the convention above, i.e. J > 0 is ferromagnetic.  Problems
# a-d are frustrated models known to be sampled unfairly by annealers; e and
# f are minimal degenerate baselines (a frustrated triangle and a single
# antiferromagnetic bond).

_BUILTIN = {
    "a": (5, [(0, 1, 1), (0, 2, 1), (0, 3, -1), (1, 2, 1), (1, 4, -1), (2, 3, 1), (2, 4, 1), (3, 4, 1)]),
    "b": (5, [(0, 1, 2), (0, 2, 1), (0, 3, 2), (0, 4, 1), (1, 2, -2), (1, 3, -1), (1, 4, 1), (2, 3, 1), (2, 4, 2), (3, 4, -2)]),
    "c": (6, [(0, 2, 1), (1, 3, 1), (2, 3, -1), (2, 4, 1), (2, 5, -1), (3, 4, 1), (3, 5, -1), (4, 5, 1)]),
    "d": (4, [(0, 1, 1), (1, 2, -1), (1, 3, -1), (2, 3, -1)]),
    "e": (3, [(0, 1, -1), (0, 2, -1), (1, 2, -1)]),
    "f": (2, [(0, 1, -1)]),
}

PROBLEM_NAMES = tuple(sorted(_BUILTIN))


def builtin_problem(name: str) -> IsingModel:
    """One of the six benchmark models, by letter ``a`` .. ``f``."""
    try:
        n, quad = _BUILTIN[name]
    except KeyError:
        raise IsingError(f"unknown problem {name!r}; expected one of {', '.join(PROBLEM_NAMES)}") from None
    return IsingModel(n=n, quadratic=tuple(quad), label=name)


def brute_force_ground_states(model: IsingModel) -> GroundStateSet:
    """Independent oracle: sort all energies via plain python iteration."""
    pairs = sorted(
        (energy(model, "".join(bits)), "".join(bits))
        for bits in itertools.product("01", repeat=model.n)
    )
    lo = pairs[0][0]
    states = tuple(s for e, s in pairs if e <= lo + DEGENERACY_TOL)
    return GroundStateSet(energy=lo, states=tuple(sorted(states)), degeneracy=len(states))
