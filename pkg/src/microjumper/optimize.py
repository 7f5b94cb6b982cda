"""Constrained design search: coarse grid scan, then compass pattern search.

The cycle simulation is full of discrete events (ratchet steps, stall, snap),
so the search never looks at gradients. Candidates are ranked
feasibility-first: any feasible point beats any infeasible one, feasible
points compare by objective, infeasible ones by total constraint violation.
"""

import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum

from microjumper import actuator as act
from microjumper.dynamics import DEFAULT_STEP, simulate_cycle
from microjumper.model import (
    MassItem,
    numeric_paths,
    set_path,
    spring_stiffness,
    total_mass,
    validate_design,
)
from microjumper.ratchet import cycles_to_release
from microjumper.spring import max_strain


class Objective(str, Enum):
    APEX_HEIGHT = "apex_height"
    JUMP_RATE = "jump_rate"


class Scale(str, Enum):
    LINEAR = "linear"
    LOGARITHMIC = "logarithmic"


@dataclass(frozen=True)
class DesignVariable:
    name: str
    lower: float
    upper: float
    scale: Scale = Scale.LINEAR

    def to_value(self, u):
        """Map a unit-interval coordinate onto the variable's bounds."""
        if self.lower == self.upper:
            return self.lower
        if self.scale is Scale.LOGARITHMIC:
            lo, hi = math.log(self.lower), math.log(self.upper)
            return math.exp(lo + u * (hi - lo))
        return self.lower + u * (self.upper - self.lower)


@dataclass(frozen=True)
class DesignReport:
    """Everything the search (and the CLI) needs to judge one design."""

    released: bool
    apex_height: float
    jump_rate: float
    stall_deflection: float | None
    torque_margin: float
    strain: float
    strain_margin: float
    mass: float
    required_voltage: float
    violations: tuple[str, ...] = ()

    @property
    def valid(self):
        return not self.violations


def evaluate_design(design, drive, step=DEFAULT_STEP):
    """Simulate one cycle and collect objectives and constraint slacks.

    Torque margin is measured at the release deflection, so a negative margin
    means the drive gives out before the magnets snap.
    """
    violations = tuple(str(v) for v in validate_design(design))
    if violations:
        nan = math.nan
        return DesignReport(False, 0.0, 0.0, None, nan, nan, nan, nan, nan, violations)

    k = spring_stiffness(design.spring)
    deflection = design.release.release_force / k
    current = act.drive_current(design, drive)
    budget = act.required_torque(design, deflection, current)
    strain = max_strain(design.spring, deflection)
    trace = simulate_cycle(design, drive, step)
    if trace.released:
        rate = 60.0 * drive.frequency / cycles_to_release(design)
    else:
        rate = 0.0
    return DesignReport(
        released=trace.released,
        apex_height=trace.apex_height,
        jump_rate=rate,
        stall_deflection=None if trace.released else trace.stall_event.deflection,
        torque_margin=budget.margin,
        strain=strain,
        strain_margin=design.spring.material.yield_strain - strain,
        mass=total_mass(design.body),
        required_voltage=act.stall_amplitude(design, deflection),
    )


@dataclass(frozen=True)
class OptimizationProblem:
    variables: tuple[DesignVariable, ...]
    baseline: object
    drive: object
    objective: Objective = Objective.APEX_HEIGHT
    voltage_budget: float | None = None  # defaults to the drive amplitude
    mass_budget: float = 75e-6
    arm_mass_per_length: float = 0.0
    grid_points: int = 7
    max_evaluations: int = 2000
    min_step: float = 1e-4
    step: float = DEFAULT_STEP

    def __post_init__(self):
        if not self.variables:
            raise ValueError("an optimization problem needs at least one variable")
        known = set(numeric_paths(self.baseline))
        for var in self.variables:
            if var.name not in known:
                raise KeyError(f"unknown design field {var.name!r}")
            if var.lower > var.upper:
                raise ValueError(f"{var.name}: lower bound exceeds upper bound")
            if var.scale is Scale.LOGARITHMIC and var.lower <= 0:
                raise ValueError(f"{var.name}: logarithmic scale needs positive bounds")

    def design_at(self, values):
        design = self.baseline
        for var, value in zip(self.variables, values):
            design = set_path(design, var.name, value)
        if self.arm_mass_per_length:
            extra = self.arm_mass_per_length * (
                design.actuator.moment_arm_length - self.baseline.actuator.moment_arm_length
            )
            items = design.body.mass_items + (MassItem("arm length change", extra),)
            design = set_path(design, "body", replace(design.body, mass_items=items))
        return design


@dataclass(frozen=True)
class HistoryEntry:
    point: tuple[float, ...]
    objective: float
    feasible: bool
    violation: float
    tiebreak: float


@dataclass
class OptimizationResult:
    best_design: object
    best_point: tuple[float, ...]
    best_objective: float
    feasible: bool
    evaluations: int
    history: list[HistoryEntry] = field(default_factory=list)
    names: tuple[str, ...] = ()


def constraint_violation(report, problem):
    """Sum of relative constraint shortfalls; zero means feasible."""
    if not report.valid:
        return 10.0 * len(report.violations)
    budget = problem.drive.amplitude if problem.voltage_budget is None else problem.voltage_budget
    total = 0.0
    if not report.released:
        shortfall = report.required_voltage - problem.drive.amplitude
        total += 1.0 + max(0.0, shortfall) / report.required_voltage
    total += max(0.0, report.required_voltage - budget) / budget if budget > 0 else 0.0
    yield_strain = report.strain + report.strain_margin
    total += max(0.0, -report.strain_margin) / yield_strain
    total += max(0.0, report.mass - problem.mass_budget) / problem.mass_budget
    return total


def _score(problem, values):
    design = problem.design_at(values)
    report = evaluate_design(design, problem.drive, problem.step)
    violation = constraint_violation(report, problem)
    if problem.objective is Objective.APEX_HEIGHT:
        objective = report.apex_height
    else:
        objective = report.jump_rate
    tiebreak = report.torque_margin if report.valid else -math.inf
    return HistoryEntry(tuple(values), objective, violation == 0.0, violation, tiebreak)


def rank_key(entry):
    """Larger is better. Equal objectives prefer more torque headroom, then
    the lexicographically larger point, so the order never depends on
    evaluation order."""
    if entry.feasible:
        return (1, entry.objective, entry.tiebreak, entry.point)
    return (0, -entry.violation, entry.tiebreak, entry.point)


class _Evaluator:
    def __init__(self, problem, workers):
        self.problem = problem
        self.workers = workers
        self.cache = {}
        self.history = []

    @property
    def remaining(self):
        return self.problem.max_evaluations - len(self.cache)

    def values(self, u):
        return tuple(var.to_value(x) for var, x in zip(self.problem.variables, u))

    def __call__(self, coords):
        """Evaluate unit-cube points, reusing earlier results; drops points
        once the budget is exhausted."""
        todo = []
        for u in coords:
            key = tuple(u)
            if key not in self.cache and key not in todo:
                todo.append(key)
        todo = todo[: max(self.remaining, 0)]
        points = [self.values(u) for u in todo]
        if self.workers and self.workers > 1 and len(points) > 1:
            with ProcessPoolExecutor(self.workers) as pool:
                entries = list(pool.map(_score, itertools.repeat(self.problem), points))
        else:
            entries = [_score(self.problem, p) for p in points]
        for key, entry in zip(todo, entries):
            self.cache[key] = entry
            self.history.append(entry)
        return [(tuple(u), self.cache[tuple(u)]) for u in coords if tuple(u) in self.cache]


def optimize(problem, seed=0, workers=None):
    """Grid scan then compass search, both in the unit cube of the variables.

    ``seed`` drives the polling order of the compass stage. Every poll is
    evaluated in full before moving, so the result is the same for any seed.
    """
    rng = random.Random(seed)
    evaluate = _Evaluator(problem, workers)

    axes = [
        [0.0] if var.lower == var.upper else
        [i / (problem.grid_points - 1) for i in range(problem.grid_points)]
        for var in problem.variables
    ]
    grid = list(itertools.product(*axes))
    scored = evaluate(grid)
    best_u, best = max(scored, key=lambda item: rank_key(item[1]))

    step = 1.0 / (problem.grid_points - 1) if problem.grid_points > 1 else 0.5
    free = [i for i, var in enumerate(problem.variables) if var.lower != var.upper]
    while step >= problem.min_step and free and evaluate.remaining > 0:
        order = list(free)
        rng.shuffle(order)
        polls = []
        for i in order:
            for sign in (1.0, -1.0):
                u = list(best_u)
                u[i] = min(1.0, max(0.0, u[i] + sign * step))
                if tuple(u) != best_u:
                    polls.append(tuple(u))
        scored = evaluate(polls)
        if not scored:
            break
        cand_u, cand = max(scored, key=lambda item: rank_key(item[1]))
        if rank_key(cand) > rank_key(best):
            best_u, best = cand_u, cand
        else:
            step *= 0.5

    best_values = evaluate.values(best_u)
    return OptimizationResult(
        best_design=problem.design_at(best_values),
        best_point=best_values,
        best_objective=best.objective,
        feasible=best.feasible,
        evaluations=len(evaluate.cache),
        history=evaluate.history,
        names=tuple(var.name for var in problem.variables),
    )


def brute_force(problem, points=50):
    """Dense grid over the same bounds; the reference the search is checked against."""
    axes = [
        [var.lower] if var.lower == var.upper else
        [var.to_value(i / (points - 1)) for i in range(points)]
        for var in problem.variables
    ]
    entries = [_score(problem, p) for p in itertools.product(*axes)]
    return max(entries, key=rank_key)
