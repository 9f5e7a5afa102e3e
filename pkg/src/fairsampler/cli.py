"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 run finished with recorded
per-row failures.
"""

from __future__ import annotations

import math
import os

import click

from .circuit import count_gates, to_qasm
from .experiments import (
    ConfigError,
    ExperimentConfig,
    emit_plot,
    fit_trend,
    parse_csv,
    render_csv,
    run_experiments,
)
from .fairness import fairness_report
from .gmqaoa import ARCHITECTURES, SUPPORTED_PAIRS, AngleParams, build_full_circuit, grid_search_angles
from .ising import PROBLEM_NAMES, builtin_problem, fix_q0_up, ground_states
from .simulator import CalibrationMatrix, CountsHistogram, mitigate
from .topology import bundled_backend, enumerate_embeddings, load_backend


@click.group()
def main():
    """Grover-mixer fair-sampling toolkit."""


@main.command()
def problems():
    """List the built-in benchmark problems."""
    for name in PROBLEM_NAMES:
        model = builtin_problem(name)
        gs = ground_states(model)
        reduced_d = gs.degeneracy if name == "f" else ground_states(fix_q0_up(model)).degeneracy
        click.echo(
            f"{name}: n={model.n} E0={gs.energy:g} degeneracy={gs.degeneracy} "
            f"(circuit register: {reduced_d}) states: {' '.join(gs.states)}"
        )


@main.command()
@click.option("--problem", "-p", required=True, type=click.Choice(PROBLEM_NAMES))
@click.option("--architecture", "-a", required=True, type=click.Choice(sorted(ARCHITECTURES)))
@click.option("--beta", type=float, default=None, help="Mixer angle in radians (default: reference table).")
@click.option("--gamma", type=float, default=None, help="Separator angle in radians.")
@click.option("--out", type=click.Path(), default=None, help="Directory for the .qasm and sidecar .json.")
def compile(problem, architecture, beta, gamma, out):
    """Compile one fair-sampling circuit and report its gate counts."""
    angles = None
    if beta is not None or gamma is not None:
        if beta is None or gamma is None:
            raise SystemExit(2)
        angles = AngleParams(betas=(beta,), gammas=(gamma,))
    try:
        compiled = build_full_circuit(problem, architecture, angles)
    except Exception as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(2)
    counts = count_gates(compiled.circuit)
    click.echo(f"{problem} on {architecture}: rotations={counts.rotations} cnots={counts.cnots} ancilla={compiled.uses_ancilla}")
    if out:
        os.makedirs(out, exist_ok=True)
        base = os.path.join(out, f"{problem}_{architecture}")
        with open(base + ".qasm", "w") as fh:
            fh.write(to_qasm(compiled.circuit))
        with open(base + ".json", "w") as fh:
            fh.write(compiled.sidecar_json())
        click.echo(f"wrote {base}.qasm")


@main.command("optimize-angles")
@click.option("--problem", "-p", required=True, type=click.Choice(tuple("abcde")))
@click.option("--divisor", type=int, default=60, show_default=True, help="Grid resolution pi/<divisor>.")
def optimize_angles(problem, divisor):
    """Grid-search the single-round angles for one problem."""
    angles, expectation = grid_search_angles(problem, resolution=math.pi / divisor)
    click.echo(
        f"{problem}: beta={angles.betas[0] / math.pi:+.6f}*pi gamma={angles.gammas[0] / math.pi:+.6f}*pi "
        f"expectation={expectation:.6f}"
    )


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None, help="Output directory for results.csv.")
@click.option("--seed", type=int, default=None, help="Override the config's seed list with one seed.")
@click.option("--shots", type=int, default=None, help="Override the config's shot count.")
@click.option("--jobs", type=int, default=1, show_default=True)
def run(config_path, out, seed, shots, jobs):
    """Run the experiment matrix described by a JSON config."""
    try:
        with open(config_path) as fh:
            config = ExperimentConfig.from_json(fh.read())
        if seed is not None or shots is not None:
            config = ExperimentConfig(
                problems=config.problems,
                architectures=config.architectures,
                noise_kind=config.noise_kind,
                noise_values=config.noise_values,
                backends=config.backends,
                shots=shots if shots is not None else config.shots,
                seeds=(seed,) if seed is not None else config.seeds,
                angle_source=config.angle_source,
            )
    except (ConfigError, OSError) as exc:
        click.echo(f"config error: {exc}", err=True)
        raise SystemExit(2)
    try:
        rows, failures = run_experiments(config, out_dir=out, jobs=jobs)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        raise SystemExit(2)
    if out is None:
        click.echo(render_csv(rows), nl=False)
    click.echo(f"{len(rows)} rows, {failures} failures", err=True)
    if failures:
        raise SystemExit(3)


@main.command()
@click.option("--counts", "counts_path", required=True, type=click.Path(exists=True), help="Histogram JSON.")
@click.option("--problem", "-p", required=True, type=click.Choice(PROBLEM_NAMES))
@click.option("--readout", default=None, help="Comma-separated logical label per measured wire.")
@click.option("--fixed-q0", is_flag=True, help="Prepend the pinned first spin before matching.")
@click.option("--seed", type=int, default=0, show_default=True)
def fairness(counts_path, problem, readout, fixed_q0, seed):
    """Fairness report (GSP, chi-square, shots-to-reject) for a histogram."""
    with open(counts_path) as fh:
        hist = CountsHistogram.from_json(fh.read())
    model = builtin_problem(problem)
    if fixed_q0:
        gset = ground_states(model).states
    elif problem == "f":
        gset = ground_states(model).states
    else:
        gset = ground_states(fix_q0_up(model)).states
    perm = tuple(int(v) for v in readout.split(",")) if readout else None
    report = fairness_report(hist.counts, gset, readout=perm, fixed_q0=fixed_q0, seed=seed)
    click.echo(report.to_json())


@main.command()
@click.option("--backend", "-b", required=True, help="Backend JSON path or bundled name (linear5, tee5).")
@click.option("--architecture", "-a", required=True, type=click.Choice(sorted(ARCHITECTURES)))
@click.option("--list", "list_them", is_flag=True, help="Print every embedding, not just the count.")
def embeddings(backend, architecture, list_them):
    """Count qubit subsets matching an architecture on a backend."""
    bt = load_backend(backend) if os.path.exists(backend) else bundled_backend(backend)
    embs = enumerate_embeddings(bt, ARCHITECTURES[architecture])
    click.echo(f"{bt.name} {architecture}: {len(embs)}")
    if list_them:
        for e in embs:
            click.echo("  " + e.label())


@main.command("mitigate")
@click.option("--counts", "counts_path", required=True, type=click.Path(exists=True))
@click.option("--calibration", required=True, type=click.Path(exists=True), help="Calibration matrix CSV.")
@click.option("--out", type=click.Path(), default=None)
def mitigate_cmd(counts_path, calibration, out):
    """Apply readout-error mitigation to a histogram."""
    with open(counts_path) as fh:
        hist = CountsHistogram.from_json(fh.read())
    with open(calibration) as fh:
        cal = CalibrationMatrix.from_csv(fh.read())
    corrected = mitigate(hist, cal)
    text = corrected.to_json()
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@main.command()
@click.option("--results", required=True, type=click.Path(exists=True), help="results.csv from a run.")
@click.option("--x", "predictor", type=click.Choice(("gsp", "aggregate_error")), default="gsp", show_default=True)
@click.option("--degree", type=click.Choice(("1", "2")), default="1", show_default=True)
@click.option("--out", required=True, type=click.Path(), help="SVG path; a .csv companion lands beside it.")
def plot(results, predictor, degree, out):
    """Scatter of shots-to-reject against GSP or aggregate error, with fit."""
    with open(results) as fh:
        rows = parse_csv(fh.read())
    svg, data = emit_plot(rows, predictor=predictor, degree=int(degree))
    with open(out, "w") as fh:
        fh.write(svg)
    with open(os.path.splitext(out)[0] + ".csv", "w") as fh:
        fh.write(data)
    try:
        fit = fit_trend(rows, predictor, int(degree))
        click.echo(f"fit coefficients (constant first): {fit.coefficients}")
    except Exception:
        click.echo("no fit (too few finite rows)")


if __name__ == "__main__":
    main()
