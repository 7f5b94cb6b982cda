"""``microjumper`` command line: evaluate, simulate, sweep, optimize.

Exit codes: 0 success (a stall is a valid outcome), 2 bad input or an invalid
design, 3 optimization found no feasible design.
"""

import csv
import io
import sys
from dataclasses import replace
from pathlib import Path

import click
import numpy as np

from microjumper import actuator as act
from microjumper import config as cfg
from microjumper import plots
from microjumper.dynamics import DEFAULT_STEP, ideal_jump_height, simulate_cycle
from microjumper.model import (
    BASELINE,
    BASELINE_DRIVE,
    numeric_paths,
    set_path,
    spring_stiffness,
    total_mass,
    validate_design,
)
from microjumper.optimize import OptimizationProblem, Scale, evaluate_design, optimize
from microjumper.ratchet import cycles_to_release
from microjumper.spring import max_strain, release_deflection, stiffness_from_geometry, stored_energy

EXIT_USAGE = 2
EXIT_INFEASIBLE = 3

WIND_COLUMNS = ("cycle", "time_s", "deflection_m", "tension_N")
FLIGHT_COLUMNS = ("time_s", "height_m", "velocity_mps")
SWEEP_COLUMNS = (
    "value", "apex_m", "jump_rate_per_min", "released", "torque_margin_Nm",
    "strain", "feasible",
)


def fail(message, code=EXIT_USAGE):
    click.echo(message, err=True)
    sys.exit(code)


def load_config(path):
    """Read and validate a config; any problem exits before output is written."""
    if path is None:
        config = cfg.RunConfig(BASELINE, BASELINE_DRIVE)
    else:
        try:
            config = cfg.load(path)
        except OSError as exc:
            fail(f"cannot read config: {exc}")
        except cfg.ConfigError as exc:
            fail(f"{path}: {exc}")
    violations = validate_design(config.design)
    if violations:
        fail("invalid design:\n" + "\n".join(f"  {v}" for v in violations))
    if not config.drive.frequency > 0 or config.drive.amplitude < 0:
        fail("invalid drive: need frequency > 0 and amplitude >= 0")
    return config


def write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="\n")


def _cell(value):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return repr(value)
    return value


def _si(value, unit, scale):
    return f"{value / scale:.4g} {unit}"


def evaluation_report(design, drive):
    """Derivation chain from spring to jump height, one quantity per line."""
    k = spring_stiffness(design.spring)
    dl = release_deflection(k, design.release)
    energy = stored_energy(k, dl)
    budget = act.required_torque(design, dl, act.drive_current(design, drive))
    i_est = act.required_current(design.actuator, budget.total_required)
    i_start = act.required_current(design.actuator, act.starting_torque(design))
    i_drive = act.drive_current(design, drive)
    coil = design.actuator.coil
    elec = act.electrical_budget(replace(coil, resistance=act.coil_resistance(coil)), i_drive)
    mass = total_mass(design.body)
    strain = max_strain(design.spring, dl)
    lines = [
        ("k", "spring stiffness", _si(k, "N/m", 1)),
        ("k_beam", "beam-theory stiffness (reconstructed geometry)",
         _si(stiffness_from_geometry(design.spring), "N/m", 1)),
        ("F_release", "magnet release force", _si(design.release.release_force, "mN", 1e-3)),
        ("dl", "deflection at release", _si(dl, "mm", 1e-3)),
        ("E_release", "stored energy at release", _si(energy, "uJ", 1e-6)),
        ("strain", f"peak beam strain (yield {design.spring.material.yield_strain:.4g})",
         f"{strain:.4g}"),
        ("tau_friction", "ring friction torque", _si(budget.friction_torque, "uNm", 1e-6)),
        ("tau_spring", "spring counter-torque", _si(budget.spring_torque, "uNm", 1e-6)),
        ("tau_total", "estimated starting torque", _si(budget.total_required, "uNm", 1e-6)),
        ("tau_start", "starting torque used for sizing", _si(act.starting_torque(design), "uNm", 1e-6)),
        ("F_coil", "coil force for that torque",
         _si(act.starting_torque(design) / design.actuator.moment_arm_length, "mN", 1e-3)),
        ("I_est", "current for estimated torque", _si(i_est, "mA", 1e-3)),
        ("I_coil", "current for sizing torque", _si(i_start, "mA", 1e-3)),
        ("V_stall", "minimum drive amplitude", _si(act.stall_amplitude(design), "V", 1)),
        ("I_drive", f"drive current at {drive.amplitude:.4g} V", _si(elec.current, "mA", 1e-3)),
        ("V_coil", "coil voltage", _si(elec.voltage, "V", 1)),
        ("P_coil", "coil Joule heating", _si(elec.power, "mW", 1e-3)),
        ("tau_avail", "available torque", _si(budget.available, "uNm", 1e-6)),
        ("tau_margin", "torque margin at release", _si(budget.margin, "uNm", 1e-6)),
        ("m", "total mass", _si(mass, "mg", 1e-6)),
        ("h_ideal", "drag-free jump height",
         _si(ideal_jump_height(energy, mass, design.body.gravity), "mm", 1e-3)),
        ("cycles", "drive cycles per jump", str(cycles_to_release(design))),
    ]
    width = max(len(label) for label, _, _ in lines)
    out = [f"{label:<{width}}  {value:>12}  {desc}" for label, desc, value in lines]
    out.append(f"{'feasible':<{width}}  {str(budget.feasible):>12}  drive torque covers release")
    return "\n".join(out) + "\n"


@click.group()
def main():
    """Design, simulate and optimize spring-loaded jumping microrobots."""


config_option = click.option(
    "--config", "config_path", type=click.Path(dir_okay=False),
    help="Design TOML (default: the built-in reference robot).",
)
out_option = click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
step_option = click.option("--step", type=float, default=DEFAULT_STEP, show_default=True,
                           help="Flight integration step [s].")
plots_option = click.option("--plots/--no-plots", "plots_", default=True, help="Render PNG figures.")


@main.command()
@config_option
@out_option
def evaluate(config_path, out_dir):
    """Print the static energy/torque/electrical budget."""
    config = load_config(config_path)
    text = evaluation_report(config.design, config.drive)
    click.echo(text, nl=False)
    if out_dir:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        Path(out_dir, "evaluate.txt").write_text(text, encoding="utf-8")


@main.command()
@config_option
@out_option
@step_option
@plots_option
def simulate(config_path, out_dir, step, plots_):
    """Run one wind-release-flight cycle and write its trace."""
    config = load_config(config_path)
    trace = simulate_cycle(config.design, config.drive, step)
    out = Path(out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "wind.csv", WIND_COLUMNS,
              [(e.cycle, e.time, e.deflection, e.tension) for e in trace.wind_events])
    write_csv(out / "flight.csv", FLIGHT_COLUMNS,
              [(s.time, s.height, s.velocity) for s in trace.flight])
    if plots_:
        plots.plot_cycle(trace, out / "cycle.png")
    if trace.released:
        click.echo(
            f"released: apex {trace.apex_height * 1e3:.3f} mm, "
            f"jump period {trace.jump_period:.3f} s, {len(trace.wind_events)} cycles"
        )
    else:
        click.echo(f"stall: deflection {trace.stall_event.deflection * 1e3:.3f} mm, no release")


def _design_paths(config):
    paths = numeric_paths(config.design)
    return paths + ["drive.amplitude", "drive.frequency"]


def _apply(config, path, value):
    if path.startswith("drive."):
        return config.design, set_path(config.drive, path[len("drive."):], value)
    return set_path(config.design, path, value), config.drive


def sweep_rows(config, variable, points, step=DEFAULT_STEP):
    if variable.scale is Scale.LOGARITHMIC:
        values = np.geomspace(variable.lower, variable.upper, points)
    else:
        values = np.linspace(variable.lower, variable.upper, points)
    rows = []
    for value in values.tolist():
        design, drive = _apply(config, variable.name, value)
        report = evaluate_design(design, drive, step)
        feasible = report.valid and report.released and report.strain_margin >= 0
        rows.append({
            "value": value,
            "apex_m": report.apex_height,
            "jump_rate_per_min": report.jump_rate,
            "released": report.released,
            "torque_margin_Nm": report.torque_margin,
            "strain": report.strain,
            "feasible": feasible,
        })
    return rows


@main.command()
@config_option
@out_option
@step_option
@plots_option
@click.option("--var", "var_spec", required=True, help="field:lower:upper[:scale]")
@click.option("--points", type=click.IntRange(min=1), default=11, show_default=True)
def sweep(config_path, out_dir, step, plots_, var_spec, points):
    """Evaluate the design across one field's range."""
    config = load_config(config_path)
    try:
        variable = cfg.parse_variable(var_spec, _design_paths(config))
    except cfg.ConfigError as exc:
        fail(str(exc))
    if variable.lower > variable.upper:
        fail(f"--var {var_spec!r}: lower bound exceeds upper bound")
    rows = sweep_rows(config, variable, points, step)
    out = Path(out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "sweep.csv", SWEEP_COLUMNS, [[r[c] for c in SWEEP_COLUMNS] for r in rows])
    if plots_:
        plots.plot_sweep(rows, variable.name, out / "sweep.png")
    n_ok = sum(r["feasible"] for r in rows)
    click.echo(f"swept {variable.name} over {points} points: {n_ok} feasible")


@main.command(name="optimize")
@config_option
@out_option
@step_option
@plots_option
@click.option("--var", "var_specs", multiple=True, help="field:lower:upper[:scale]; repeatable")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--objective", type=click.Choice(["apex_height", "jump_rate"]), default=None)
def optimize_cmd(config_path, out_dir, step, plots_, var_specs, seed, objective):
    """Search the design space; write the best design and the history."""
    config = load_config(config_path)
    problem = config.problem
    try:
        variables = tuple(cfg.parse_variable(s, numeric_paths(config.design)) for s in var_specs)
    except cfg.ConfigError as exc:
        fail(str(exc))
    if problem is None:
        if not variables:
            fail("optimize needs at least one --var (or a [problem] section with variables)")
        try:
            problem = OptimizationProblem(variables, config.design, config.drive, step=step)
        except (KeyError, ValueError) as exc:
            fail(f"invalid problem: {exc}")
    else:
        changes = {"step": step}
        if variables:
            changes["variables"] = variables
        try:
            problem = replace(problem, **changes)
        except (KeyError, ValueError) as exc:
            fail(f"invalid problem: {exc}")
    if objective:
        problem = replace(problem, objective=cfg.Objective(objective))

    result = optimize(problem, seed=seed)
    out = Path(out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    header = result.names + ("objective", "feasible", "violation")
    write_csv(out / "history.csv", header,
              [e.point + (e.objective, e.feasible, e.violation) for e in result.history])
    best = cfg.RunConfig(result.best_design, config.drive)
    cfg.dump(best, out / "best_design.toml")
    if plots_:
        plots.plot_history(result, out / "history.png")
    point = ", ".join(f"{n}={v:.6g}" for n, v in zip(result.names, result.best_point))
    if not result.feasible:
        fail(f"no feasible design in {result.evaluations} evaluations; "
             f"least-violating point: {point}", EXIT_INFEASIBLE)
    click.echo(f"best {problem.objective.value} = {result.best_objective:.6g} at {point} "
               f"({result.evaluations} evaluations)")


if __name__ == "__main__":
    main()
