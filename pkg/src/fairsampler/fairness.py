"""Fairness statistics for degenerate ground-state sampling.

The headline metric is the number of shots needed to reject the fair-sampling
null hypothesis at 95% significance: synthetic samples of growing size are
drawn from the observed ground-state frequencies, their Pearson chi-square
level is compared against the critical value for d-1 degrees of freedom, and
the crossing point is located by doubling plus binary search.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc


class FairnessError(ValueError):
    """Metric undefined for the given observations."""


class _Capped:
    """Sentinel: the search exceeded its cap (distribution too close to fair)."""

    def __repr__(self):
        return "CAPPED"

    def __bool__(self):  # pragma: no cover - guards accidental truthiness use
        raise TypeError("compare against CAPPED with 'is'")


CAPPED = _Capped()


# ---------------------------------------------------------------------------
# Observation bookkeeping
# ---------------------------------------------------------------------------


def apply_readout(bits: str, readout: tuple[int, ...] | None, fixed_q0: bool = False) -> str:
    """Measured wire-order bits -> logical configuration string.

    ``readout[k]`` is the logical label of the k-th measured wire; a pinned
    first spin is re-prepended as ``0``.
    """
    if readout is None:
        logical = bits
    else:
        if len(readout) != len(bits):
            raise FairnessError(f"readout {readout} does not match {len(bits)}-bit outcome")
        out = [None] * len(bits)
        for k, label in enumerate(readout):
            out[label] = bits[k]
        logical = "".join(out)
    return "0" + logical if fixed_q0 else logical


def ground_state_counts(
    counts: dict[str, float],
    ground_states,
    readout: tuple[int, ...] | None = None,
    fixed_q0: bool = False,
) -> np.ndarray:
    """Observed count of each ground state, ordered like ``ground_states``."""
    states = list(ground_states)
    index = {s: i for i, s in enumerate(states)}
    o = np.zeros(len(states))
    for bits, c in counts.items():
        s = apply_readout(bits, readout, fixed_q0)
        if s in index:
            o[index[s]] += c
    return o


def gsp(
    counts: dict[str, float],
    ground_states,
    readout: tuple[int, ...] | None = None,
    fixed_q0: bool = False,
) -> float:
    """Fraction of retained shots that landed on a ground state."""
    total = float(sum(counts.values()))
    if total <= 0:
        raise FairnessError("no retained shots")
    return float(ground_state_counts(counts, ground_states, readout, fixed_q0).sum() / total)


# ---------------------------------------------------------------------------
# Pearson chi-square
# ---------------------------------------------------------------------------


def chi2_stat(o) -> tuple[float, int]:
    """Pearson statistic against the equal-frequency null.

    Expected count is the same for every cell, ``sum(o)/d``; returns the
    statistic together with the degrees of freedom ``d - 1``.
    """
    o = np.asarray(o, dtype=float)
    d = o.size
    if d < 2:
        raise FairnessError("chi-square needs at least two ground states")
    total = o.sum()
    if total <= 0:
        raise FairnessError("chi-square needs at least one observation")
    expected = total / d
    return float(((o - expected) ** 2 / expected).sum()), d - 1


def chi2_critical(k: int, significance: float = 0.95) -> float:
    """Upper-tail critical value of the chi-square distribution.

    Bisection on the regularized upper incomplete gamma ``Q(k/2, x/2)`` until
    the bracket shrinks below a 1e-8 relative width.
    """
    if k < 1:
        raise FairnessError("degrees of freedom must be >= 1")
    if not 0.0 < significance < 1.0:
        raise FairnessError("significance must lie in (0, 1)")
    alpha = 1.0 - significance

    def upper_tail(xv: float) -> float:
        return float(gammaincc(k / 2.0, xv / 2.0))

    lo, hi = 0.0, 1.0
    while upper_tail(hi) > alpha:
        hi *= 2.0
        if hi > 1e12:  # pragma: no cover - alpha in (0,1) always brackets
            raise FairnessError("failed to bracket the critical value")
    while hi - lo > 1e-8 * max(hi, 1.0):
        mid = 0.5 * (lo + hi)
        if upper_tail(mid) > alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Number of shots to reject fair sampling
# ---------------------------------------------------------------------------


def _synthetic_level(n_shots: int, weights: np.ndarray, n_inner: int, rng, statistic: str) -> float:
    d = weights.size
    draws = rng.multinomial(n_shots, weights, size=n_inner)
    expected = n_shots / d
    chi2 = ((draws - expected) ** 2 / expected).sum(axis=1)
    if statistic == "median":
        # lower-middle element for even sample sizes, keeping the level an
        # achievable chi-square value
        return float(np.sort(chi2)[(n_inner - 1) // 2])
    return float(chi2.mean())


def nsrfs(
    counts: dict[str, float],
    ground_states,
    readout: tuple[int, ...] | None = None,
    fixed_q0: bool = False,
    n_inner: int = 1000,
    seed: int = 0,
    cap: int = 2**30,
    significance: float = 0.95,
    statistic: str = "mean",
):
    """Number of shots to reject fair sampling, or ``CAPPED``.

    Synthetic samples of size N are drawn from the observed ground-state
    frequencies; the level of their chi-square statistics (mean over
    ``n_inner`` draws by default) is compared against the critical value, N
    doubling from 2 until the level crosses and a binary search narrowing the
    bracket to width 2.  A 60/40 two-state distribution needs about 74 shots.
    Exactly fair observations never cross, hence the cap.
    """
    o = ground_state_counts(counts, ground_states, readout, fixed_q0)
    d = o.size
    if d < 2:
        raise FairnessError("need at least two degenerate ground states")
    total = o.sum()
    if total <= 0:
        raise FairnessError("no ground state was ever observed")
    weights = o / total
    crit = chi2_critical(d - 1, significance)
    rng = np.random.default_rng(seed)

    n = 2
    while _synthetic_level(n, weights, n_inner, rng, statistic) < crit:
        n *= 2
        if n > cap:
            return CAPPED
    upper, lower = n, n // 2
    while upper - lower > 2:
        n = (upper + lower) // 2
        if _synthetic_level(n, weights, n_inner, rng, statistic) < crit:
            lower = n
        else:
            upper = n
    return n


# ---------------------------------------------------------------------------
# Per-experiment report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FairnessReport:
    gsp: float
    chi2: float
    dof: int
    nsrfs: int | None
    capped: bool
    aggregate_error: float | None
    ground_state_counts: tuple[float, ...]
    weights: tuple[float, ...]

    def to_json(self) -> str:
        import json

        return json.dumps(
            {
                "gsp": self.gsp,
                "chi2": self.chi2,
                "dof": self.dof,
                "nsrfs": self.nsrfs,
                "capped": self.capped,
                "aggregate_error": self.aggregate_error,
                "ground_state_counts": list(self.ground_state_counts),
                "weights": list(self.weights),
            }
        )


def fairness_report(
    counts: dict[str, float],
    ground_states,
    readout: tuple[int, ...] | None = None,
    fixed_q0: bool = False,
    aggregate_error: float | None = None,
    seed: int = 0,
    cap: int = 2**30,
) -> FairnessReport:
    """GSP, chi-square, and shots-to-reject for one experiment's histogram."""
    o = ground_state_counts(counts, ground_states, readout, fixed_q0)
    chi2, dof = chi2_stat(o)
    total = o.sum()
    weights = o / total if total > 0 else np.zeros_like(o)
    if total > 0:
        result = nsrfs(counts, ground_states, readout, fixed_q0, seed=seed, cap=cap)
    else:
        result = CAPPED
    return FairnessReport(
        gsp=gsp(counts, ground_states, readout, fixed_q0),
        chi2=chi2,
        dof=dof,
        nsrfs=None if result is CAPPED else int(result),
        capped=result is CAPPED,
        aggregate_error=aggregate_error,
        ground_state_counts=tuple(float(v) for v in o),
        weights=tuple(float(w) for w in weights),
    )
