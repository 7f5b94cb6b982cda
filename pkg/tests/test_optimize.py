import pytest

from microjumper.model import BASELINE, BASELINE_DRIVE, DriveSource, set_path
from microjumper.optimize import (
    DesignVariable,
    Objective,
    OptimizationProblem,
    Scale,
    brute_force,
    evaluate_design,
    optimize,
)

ARM = "actuator.moment_arm_length"
SHAFT = "ratchet.shaft_radius"
FORCE = "release.release_force"


def benchmark(**kw):
    variables = (DesignVariable(ARM, 4e-3, 16e-3), DesignVariable(SHAFT, 0.5e-3, 1.5e-3))
    return OptimizationProblem(variables, BASELINE, BASELINE_DRIVE, **kw)


def test_evaluate_baseline_at_08v():
    r = evaluate_design(BASELINE, BASELINE_DRIVE)
    assert r.released
    assert r.torque_margin == pytest.approx(2e-6, abs=0.3e-6)
    assert r.strain_margin > 0
    assert r.mass == pytest.approx(75e-6)


def test_evaluate_baseline_at_07v():
    r = evaluate_design(BASELINE, DriveSource(amplitude=0.7))
    assert not r.released
    assert r.torque_margin < 0
    assert r.stall_deflection > 2.7e-3


def test_longer_arm_has_more_margin():
    long_arm = evaluate_design(set_path(BASELINE, ARM, 16e-3), BASELINE_DRIVE)
    assert long_arm.released
    assert long_arm.torque_margin > evaluate_design(BASELINE, BASELINE_DRIVE).torque_margin


def test_invalid_design_is_reported_not_raised():
    r = evaluate_design(set_path(BASELINE, "spring.stiffness", 0.5), BASELINE_DRIVE)
    assert not r.valid and not r.released


def test_degenerate_bounds_return_the_point():
    p = OptimizationProblem((DesignVariable(ARM, 10e-3, 10e-3),), BASELINE, BASELINE_DRIVE)
    result = optimize(p)
    assert result.best_point == (10e-3,)
    assert result.feasible
    assert result.evaluations == 1


def test_benchmark_beats_baseline_and_matches_brute_force():
    p = benchmark()
    result = optimize(p)
    base = evaluate_design(BASELINE, BASELINE_DRIVE).apex_height
    assert result.feasible
    assert result.best_objective >= base
    oracle = brute_force(p, points=50)
    assert result.best_objective == pytest.approx(oracle.objective, rel=0.02)
    cell = [(v.upper - v.lower) / 49 for v in p.variables]
    for got, want, width in zip(result.best_point, oracle.point, cell):
        assert abs(got - want) <= width
    # more leverage: longest arm, narrowest shaft
    assert result.best_point == pytest.approx((16e-3, 0.5e-3))


def test_force_arm_tradeoff_against_brute_force():
    """Stronger magnets store more energy but need more torque to reach."""
    p = OptimizationProblem(
        (DesignVariable(ARM, 4e-3, 16e-3), DesignVariable(FORCE, 4e-3, 20e-3)),
        BASELINE, BASELINE_DRIVE, step=1e-4,
    )
    result = optimize(p)
    oracle = brute_force(p, points=25)
    assert result.feasible
    assert result.best_objective >= oracle.objective * 0.98
    # 12.5 mN is where release deflection hits the 5 mm rating
    assert result.best_point[1] == pytest.approx(12.5e-3, rel=0.01)
    assert result.best_point[0] >= 11.8e-3


def test_arm_only_picks_upper_bound():
    p = OptimizationProblem((DesignVariable(ARM, 4e-3, 16e-3),), BASELINE, BASELINE_DRIVE)
    assert optimize(p).best_point == pytest.approx((16e-3,))


def test_arm_sweep_apex_non_decreasing():
    apexes = []
    for arm in [4e-3 + i * 1e-3 for i in range(13)]:
        apexes.append(evaluate_design(set_path(BASELINE, ARM, arm), BASELINE_DRIVE).apex_height)
    assert all(a <= b for a, b in zip(apexes, apexes[1:]))


def test_deterministic_and_seed_independent():
    p = benchmark()
    a, b, c = optimize(p, seed=1), optimize(p, seed=1), optimize(p, seed=99)
    assert a.history == b.history
    assert a.best_point == b.best_point == c.best_point
    assert a.best_objective == c.best_objective


def test_parallel_matches_serial():
    p = benchmark(grid_points=4, max_evaluations=40)
    assert optimize(p, workers=2).history == optimize(p).history


def test_budget_respected():
    p = benchmark(max_evaluations=30)
    result = optimize(p)
    assert result.evaluations <= 30
    assert len(result.history) <= 30


def test_best_dominates_feasible_history():
    result = optimize(benchmark())
    best = max(e.objective for e in result.history if e.feasible)
    assert result.best_objective >= best


def test_infeasible_everywhere_flagged():
    p = OptimizationProblem(
        (DesignVariable(ARM, 1e-3, 2e-3),), BASELINE, DriveSource(amplitude=0.3)
    )
    result = optimize(p)
    assert not result.feasible
    assert result.best_point == pytest.approx((2e-3,))


def test_jump_rate_objective_prefers_wide_shaft():
    p = OptimizationProblem(
        (DesignVariable(SHAFT, 0.5e-3, 1.5e-3),),
        set_path(BASELINE, ARM, 16e-3), BASELINE_DRIVE, objective=Objective.JUMP_RATE,
    )
    result = optimize(p)
    assert result.best_point[0] == pytest.approx(1.5e-3, rel=0.02)


def test_arm_mass_penalty_adds_mass():
    p = benchmark(arm_mass_per_length=1e-3)  # 1 mg per mm
    d = p.design_at((16e-3, 1e-3))
    assert sum(i.mass for i in d.body.mass_items) == pytest.approx(83e-6)


def test_log_scale_variable():
    v = DesignVariable(SHAFT, 1e-4, 1e-2, Scale.LOGARITHMIC)
    assert v.to_value(0.5) == pytest.approx(1e-3)


@pytest.mark.parametrize(
    "variables, error",
    [((), ValueError), ((DesignVariable("nope", 0, 1),), KeyError),
     ((DesignVariable(ARM, 2e-3, 1e-3),), ValueError)],
)
def test_problem_validation(variables, error):
    with pytest.raises(error):
        OptimizationProblem(variables, BASELINE, BASELINE_DRIVE)
