"""Experiment orchestration: circuit x noise x seed sweeps to CSV rows.

One row is one experiment: a compiled circuit, a noise setting (a synthetic
sweep point or a backend embedding), one seed, and the fairness statistics of
its histogram.  Runs are deterministic given the config: the CSV body is
byte-identical across repeats, with the timestamp isolated in a leading
comment line.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .fairness import fairness_report
from .gmqaoa import SUPPORTED_PAIRS, build_full_circuit, grid_search_angles
from .ising import builtin_problem, fix_q0_up, ground_states
from .simulator import NoiseModel, noise_from_backend, sample
from .topology import aggregate_error, bundled_backend, enumerate_embeddings, load_backend

CSV_COLUMNS = (
    "problem",
    "architecture",
    "backend",
    "embedding",
    "shots",
    "discarded",
    "gsp",
    "chi2",
    "dof",
    "nsrfs",
    "capped",
    "aggregate_error",
    "beta",
    "gamma",
    "seed",
    "error",
)

NOISE_KINDS = (
    "none",
    "global_depolarizing",
    "gate_depolarizing",
    "coherent_overrotation",
    "readout",
    "backend",
)

#: gate kinds that receive the swept depolarizing probability
_DEPOLARIZED_KINDS = ("h", "x", "t", "tdg", "phase", "cnot")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    problems: tuple[str, ...]
    architectures: dict[str, tuple[str, ...]]
    noise_kind: str = "none"
    noise_values: tuple = ()
    backends: tuple[str, ...] = ()
    shots: int = 40960
    seeds: tuple[int, ...] = (0,)
    angle_source: str = "table"

    def __post_init__(self):
        if self.shots < 1:
            raise ConfigError("shots must be >= 1")
        if self.noise_kind not in NOISE_KINDS:
            raise ConfigError(f"unknown noise kind {self.noise_kind!r}")
        if self.angle_source not in ("table", "grid-search"):
            raise ConfigError(f"angle source must be 'table' or 'grid-search', got {self.angle_source!r}")
        for p in self.problems:
            archs = self.architectures.get(p, ())
            if not archs:
                raise ConfigError(f"no architectures listed for problem {p!r}")
            for a in archs:
                if p not in SUPPORTED_PAIRS or a not in SUPPORTED_PAIRS[p]:
                    raise ConfigError(f"({p}, {a}) is not a supported problem/architecture pair")
        if self.noise_kind == "backend" and not self.backends:
            raise ConfigError("backend noise sweeps need at least one backend file")

    @staticmethod
    def from_json(text: str) -> "ExperimentConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        problems = tuple(raw.get("problems", ()))
        archs_raw = raw.get("architectures", {})
        if isinstance(archs_raw, (list, tuple)):
            architectures = {p: tuple(archs_raw) for p in problems}
        else:
            architectures = {p: tuple(v) for p, v in archs_raw.items()}
        for p in problems:
            architectures.setdefault(p, SUPPORTED_PAIRS.get(p, ()))
        noise = raw.get("noise", {}) or {}
        return ExperimentConfig(
            problems=problems,
            architectures=architectures,
            noise_kind=noise.get("kind", "none"),
            noise_values=tuple(tuple(v) if isinstance(v, (list, tuple)) else v for v in noise.get("values", ())),
            backends=tuple(raw.get("backends", ())),
            shots=int(raw.get("shots", 40960)),
            seeds=tuple(int(s) for s in raw.get("seeds", (0,))),
            angle_source=raw.get("angles", "table"),
        )


def _resolve_backend(spec: str):
    if os.path.exists(spec):
        return load_backend(spec)
    try:
        return bundled_backend(spec)
    except FileNotFoundError:
        raise ConfigError(f"backend {spec!r} is neither a file nor a bundled backend") from None


def _noise_for(kind: str, value, circuit) -> NoiseModel | None:
    if kind == "none":
        return None
    if kind == "global_depolarizing":
        return NoiseModel(global_depolarizing=float(value))
    if kind == "gate_depolarizing":
        return NoiseModel(gate_depolarizing={k: float(value) for k in _DEPOLARIZED_KINDS})
    if kind == "coherent_overrotation":
        return NoiseModel(coherent_overrotation=float(value))
    if kind == "readout":
        p01, p10 = value
        return NoiseModel(readout={w: (float(p01), float(p10)) for w in range(circuit.n)})
    raise ConfigError(f"unknown noise kind {kind!r}")


def _cells(config: ExperimentConfig):
    """Deterministic enumeration order: problem, architecture, point, seed."""
    for p in config.problems:
        for a in config.architectures[p]:
            if config.noise_kind == "backend":
                for spec in config.backends:
                    backend = _resolve_backend(spec)
                    from .gmqaoa import ARCHITECTURES

                    for emb in enumerate_embeddings(backend, ARCHITECTURES[a]):
                        for seed in config.seeds:
                            yield (p, a, spec, tuple(emb.mapping), None, seed)
            elif config.noise_kind == "none":
                for seed in config.seeds:
                    yield (p, a, None, None, None, seed)
            else:
                for value in config.noise_values:
                    for seed in config.seeds:
                        yield (p, a, None, None, value, seed)


def _run_cell(args):
    config, cell = args
    problem, arch, backend_spec, mapping, value, seed = cell
    row = {c: "" for c in CSV_COLUMNS}
    row.update(problem=problem, architecture=arch, seed=seed)
    if backend_spec is not None:
        row["backend"] = backend_spec
        row["embedding"] = "-".join(str(q) for q in mapping)
    try:
        if config.angle_source == "grid-search" and problem != "f":
            angles, _ = grid_search_angles(problem)
        else:
            angles = None  # build_full_circuit falls back to the reference table
        compiled = build_full_circuit(problem, arch, angles)
        circuit = compiled.circuit
        if compiled.angles is not None:
            row["beta"] = repr(compiled.angles.betas[0])
            row["gamma"] = repr(compiled.angles.gammas[0])

        agg = None
        if backend_spec is not None:
            backend = _resolve_backend(backend_spec)
            from .gmqaoa import ARCHITECTURES
            from .topology import Embedding

            emb = Embedding(architecture=ARCHITECTURES[arch], mapping=mapping)
            noise = noise_from_backend(circuit, emb, backend, seed=seed)
            agg = aggregate_error(circuit, emb, backend)
        else:
            noise = _noise_for(config.noise_kind, value, circuit)

        hist = sample(circuit, noise, config.shots, seed=seed)
        if problem == "f":
            gset = ground_states(builtin_problem("f")).states
            fixed_q0 = False
        else:
            gset = ground_states(fix_q0_up(builtin_problem(problem))).states
            fixed_q0 = False
        report = fairness_report(
            hist.counts,
            gset,
            readout=circuit.measured_readout,
            fixed_q0=fixed_q0,
            aggregate_error=agg,
            seed=seed,
        )
        row.update(
            shots=hist.shots,
            discarded=hist.discarded,
            gsp=repr(report.gsp),
            chi2=repr(report.chi2),
            dof=report.dof,
            nsrfs="" if report.nsrfs is None else report.nsrfs,
            capped=str(report.capped).lower(),
            aggregate_error="" if agg is None else repr(agg),
        )
    except Exception as exc:  # noqa: BLE001 - per-row failure is recorded, run continues
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def run_experiments(config: ExperimentConfig, out_dir: str | None = None, jobs: int = 1):
    """Run every cell of the config matrix; returns (rows, failure count).

    Cells are independent; ``jobs > 1`` fans them out to worker processes.
    Row order always follows the config enumeration, not completion order.
    """
    cells = list(_cells(config))
    work = [(config, c) for c in cells]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_cell, work))
    else:
        rows = [_run_cell(w) for w in work]
    failures = sum(1 for r in rows if r["error"])
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "results.csv"), "w") as fh:
            fh.write(render_csv(rows))
    return rows, failures


def render_csv(rows) -> str:
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    lines = [f"# fairsampler results, generated {stamp}", ",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(str(row[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def csv_body(text: str) -> str:
    """Everything except leading comment lines (the determinism contract)."""
    return "".join(line + "\n" for line in text.splitlines() if not line.startswith("#"))


def parse_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, ln.split(","))) for ln in lines[1:]]


# ---------------------------------------------------------------------------
# Trend fitting and plot emission
# ---------------------------------------------------------------------------


class InsufficientDataError(ValueError):
    """Too few finite rows for the requested fit."""


@dataclass(frozen=True)
class TrendFit:
    predictor: str
    degree: int
    coefficients: tuple[float, ...]  # constant term first
    slope_sign: int

    def __post_init__(self):
        if len(self.coefficients) != self.degree + 1:
            raise InsufficientDataError("degree does not match coefficient count")

    def evaluate(self, xs):
        xs = np.asarray(xs, dtype=float)
        out = np.zeros_like(xs)
        for k, c in enumerate(self.coefficients):
            out += c * xs**k
        return out


_log = logging.getLogger(__name__)


def _finite_points(rows, predictor: str):
    xs, ys = [], []
    skipped = 0
    for row in rows:
        capped = str(row.get("capped", "false")).lower() == "true"
        nsrfs = row.get("nsrfs", "")
        if capped or nsrfs in ("", None) or row.get("error"):
            skipped += 1
            continue
        xs.append(float(row[predictor]))
        ys.append(math.log10(float(nsrfs)))
    if skipped:
        _log.info("excluded %d capped/failed rows from the %s fit", skipped, predictor)
    return np.array(xs), np.array(ys)


def fit_trend(rows, predictor: str, degree: int = 1) -> TrendFit:
    """Least squares of log10(shots-to-reject) against gsp or aggregate error.

    Capped rows never enter the fit.
    """
    if predictor not in ("gsp", "aggregate_error"):
        raise InsufficientDataError(f"predictor must be gsp or aggregate_error, got {predictor!r}")
    if degree not in (1, 2):
        raise InsufficientDataError("degree must be 1 or 2")
    xs, ys = _finite_points(rows, predictor)
    if xs.size < degree + 2:
        raise InsufficientDataError(f"need at least {degree + 2} finite rows, have {xs.size}")
    coeffs = np.polyfit(xs, ys, degree)  # highest power first
    ordered = tuple(float(c) for c in coeffs[::-1])
    slope = ordered[1]
    return TrendFit(predictor=predictor, degree=degree, coefficients=ordered, slope_sign=int(np.sign(slope)))


def emit_plot(rows, predictor: str = "gsp", degree: int = 1) -> tuple[str, str]:
    """Deterministic SVG scatter of the fairness metric plus its trend fit.

    Returns ``(svg, csv)`` where the CSV holds the exact plotted values.
    """
    xs, ys = _finite_points(rows, predictor)
    if xs.size == 0:
        raise InsufficientDataError("no finite rows to plot")
    try:
        fit = fit_trend(rows, predictor, degree)
    except InsufficientDataError:
        fit = None

    width, height, margin = 640, 440, 60
    x_lo, x_hi = float(xs.min()), float(xs.max())
    if x_hi - x_lo < 1e-12:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if y_hi - y_lo < 1e-12:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5

    def sx(v):
        return margin + (v - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def sy(v):
        return height - margin - (v - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width // 2}" y="{height - margin // 3}" text-anchor="middle" font-size="14">{predictor}</text>',
        f'<text x="{margin // 3}" y="{height // 2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 {margin // 3} {height // 2})">log10(shots to reject fair sampling)</text>',
    ]
    for xv, yv in zip(xs, ys):
        parts.append(f'<circle cx="{sx(xv):.2f}" cy="{sy(yv):.2f}" r="3" fill="steelblue" fill-opacity="0.7"/>')
    if fit is not None:
        grid = np.linspace(x_lo, x_hi, 100)
        pts = " ".join(f"{sx(xv):.2f},{sy(yv):.2f}" for xv, yv in zip(grid, fit.evaluate(grid)))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>')
    parts.append("</svg>")
    svg = "\n".join(parts) + "\n"

    lines = [f"{predictor},log10_nsrfs"]
    for xv, yv in zip(xs, ys):
        lines.append(f"{xv!r},{yv!r}")
    return svg, "\n".join(lines) + "\n"
