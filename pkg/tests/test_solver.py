import json

import numpy as np
import pytest

from shallowboson.interferometer import (
    build_reck_slices, reck_input, schwinger_expectation,
)
from shallowboson.problems import QuboProblem, benchmark_qubo6
from shallowboson.solver import (
    FunctionObjective, ParityObjective, SolverConfig, finite_difference_gradient,
    gradient_step, objective_energy, parameter_shift_gradient, run_variational,
)


def test_objective_energy_point_mass():
    assert objective_energy({(1, 0): 1.0}, lambda b: 7.25) == 7.25


def test_objective_energy_uniform_average():
    dist = {(0, 0): 0.25, (0, 1): 0.25, (1, 0): 0.25, (1, 1): 0.25}
    table = {(0, 0): 0.0, (0, 1): 1.0, (1, 0): 2.0, (1, 1): 3.0}
    assert objective_energy(dist, table.__getitem__) == pytest.approx(1.5)


def test_objective_energy_requires_unit_mass():
    with pytest.raises(ValueError):
        objective_energy({(0,): 0.5}, lambda b: 1.0)


def _toy_problem(m=4, seed=0):
    rng = np.random.default_rng(seed)
    q = rng.normal(size=(m, m))
    return QuboProblem((q + q.T) / 2)


def test_exact_value_ignores_stream_seed():
    obj = ParityObjective(_toy_problem(), 4, 0, 1, samples=None)
    angles = np.linspace(0.3, 1.9, obj.num_parameters)
    assert obj.value(angles, 1) == obj.value(angles, 999)


def test_all_zero_angles_observe_all_ones():
    problem = _toy_problem()
    obj = ParityObjective(problem, 4, 0, 1, samples=None)
    energy, best_e, best_b = obj.value(np.zeros(obj.num_parameters))
    assert best_b == (1, 1, 1, 1)
    expected = problem.energies(np.array([[1, 1, 1, 1]]))[0]
    assert energy == pytest.approx(expected, abs=1e-12)
    assert best_e == pytest.approx(expected, abs=1e-12)


def test_sampled_all_zero_angles_single_bitstring():
    problem = _toy_problem()
    obj = ParityObjective(problem, 4, 0, 1, samples=64)
    energy, best_e, best_b = obj.value(np.zeros(obj.num_parameters), 5)
    assert best_b == (1, 1, 1, 1)
    expected = problem.energies(np.array([[1, 1, 1, 1]]))[0]
    assert energy == pytest.approx(expected, abs=1e-12)


def test_sampled_converges_to_exact():
    problem = _toy_problem(5, seed=3)
    angles = np.linspace(0.4, 2.2, 4)
    exact = ParityObjective(problem, 5, 0, 1, samples=None).value(angles)[0]
    deviations = []
    for n_s in (100, 1000, 10000):
        obj = ParityObjective(problem, 5, 0, 1, samples=n_s)
        sampled = obj.value(angles, 12345)[0]
        deviations.append(abs(sampled - exact))
    assert deviations[2] < deviations[0]
    assert deviations[2] < 0.05


class _QuadraticStub:
    """Deterministic stand-in objective with a known analytic gradient."""

    samples = None

    def __init__(self, slope):
        self.slope = np.asarray(slope, dtype=float)
        self.num_parameters = len(self.slope)

    def value(self, angles, stream_seed=None):
        value = float(self.slope @ np.asarray(angles, dtype=float))
        return value, value, (0,)


def test_finite_difference_on_linear_function():
    stub = _QuadraticStub([2.0, -0.5])
    grad = finite_difference_gradient(stub, np.array([0.3, 0.4]), 0,
                                      epsilon=1e-5)
    assert grad == pytest.approx(2.0, rel=1e-6)
    central = finite_difference_gradient(stub, np.array([0.3, 0.4]), 1,
                                         epsilon=1e-5, scheme="central")
    assert central == pytest.approx(-0.5, rel=1e-6)


def test_finite_difference_constant_objective():
    stub = _QuadraticStub([0.0, 0.0])
    assert finite_difference_gradient(stub, np.zeros(2), 0) == 0.0


def test_finite_difference_epsilon_sweep_converges():
    problem = _toy_problem()
    obj = ParityObjective(problem, 4, 0, 1, samples=None)
    angles = np.linspace(0.5, 1.5, obj.num_parameters)
    reference = finite_difference_gradient(obj, angles, 1, epsilon=1e-7,
                                           scheme="central")
    errors = [abs(finite_difference_gradient(obj, angles, 1, epsilon=eps)
                  - reference)
              for eps in (1e-3, 1e-5)]
    assert errors[1] < errors[0]


def test_shift_rule_matches_analytic_for_bilinear():
    rng = np.random.default_rng(4)
    for m in (3, 4, 5):
        for depth in range(1, m):
            circ = build_reck_slices(m, depth, reck_input(m, m))
            thetas = rng.uniform(0.2, np.pi - 0.2, len(circ.gates))
            raw = rng.normal(size=(m, m))
            herm = (raw + raw.T) / 2
            for idx in range(len(thetas)):
                plus = thetas.copy(); plus[idx] += np.pi / 2
                minus = thetas.copy(); minus[idx] -= np.pi / 2
                shift = (schwinger_expectation(circ, plus, herm)
                         - schwinger_expectation(circ, minus, herm)) / 2
                # dense-grid fit of the single-harmonic form a+b cos+c sin
                grid = np.linspace(0, 2 * np.pi, 12, endpoint=False)
                values = []
                for g in grid:
                    probe = thetas.copy(); probe[idx] = g
                    values.append(schwinger_expectation(circ, probe, herm))
                design = np.column_stack(
                    [np.ones_like(grid), np.cos(grid), np.sin(grid)])
                coeff, residual, *_ = np.linalg.lstsq(
                    design, np.asarray(values), rcond=None)
                if residual.size:
                    assert residual[0] < 1e-16  # confirms the trig form
                analytic = (-coeff[1] * np.sin(thetas[idx])
                            + coeff[2] * np.cos(thetas[idx]))
                assert shift == pytest.approx(analytic, abs=1e-8)


def test_shift_rule_zero_for_decoupled_parameter():
    # a gate behind the measured support of a disjoint pair cannot move it
    problem = FunctionObjective(3, lambda b: float(b[0]))
    obj = ParityObjective(problem, 3, 0, 2, samples=None)
    angles = np.zeros(obj.num_parameters)
    # parameter 0 couples modes (1, 2); bit 0 stays that of mode 0
    grad = parameter_shift_gradient(obj, angles, 0)
    assert grad == pytest.approx(0.0, abs=1e-12)


def test_gradient_step_behaviour():
    assert np.allclose(gradient_step([1.0, 2.0], [0.0, 0.0], 0.5),
                       [1.0, 2.0])
    stepped = gradient_step([1.0, 2.0], [1.0, 0.0], 1.0)
    assert stepped[0] == pytest.approx(0.0) and stepped[1] == pytest.approx(2.0)
    wrapped = gradient_step([0.1], [1.0], 1.0)
    assert 0.0 <= wrapped[0] < 2 * np.pi
    with pytest.raises(ValueError):
        gradient_step([0.1], [1.0], -1.0)


def test_exact_descent_decreases_objective():
    # run trace with the true (central-difference) gradient and small eta
    problem = QuboProblem(benchmark_qubo6())
    obj = ParityObjective(problem, 6, 0, 1, samples=None)
    rng = np.random.default_rng(8)
    angles = rng.uniform(0.3, 1.2, obj.num_parameters)
    energies = [obj.value(angles)[0]]
    for _ in range(10):
        grad = np.array([
            finite_difference_gradient(obj, angles, k, epsilon=1e-6,
                                       scheme="central")
            for k in range(obj.num_parameters)
        ])
        angles = gradient_step(angles, grad, 0.02)
        energies.append(obj.value(angles)[0])
    assert all(b <= a + 1e-9 for a, b in zip(energies, energies[1:]))
    assert energies[-1] < energies[0]


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(samples=0)
    with pytest.raises(ValueError):
        SolverConfig(eta=0.0)
    with pytest.raises(ValueError):
        SolverConfig(max_iterations=0)


def test_run_variational_bookkeeping():
    problem = _toy_problem(4, seed=9)
    n_s = 32
    iters = 4
    config = SolverConfig(depth=1, samples=n_s, eta=0.1, max_iterations=iters,
                          plateau_tolerance=0.0, master_seed=5)
    result = run_variational(problem, config)
    n_params = 3  # depth-1 mesh on 4 modes
    assert result.evaluation_count == 8 * n_params * iters * n_s
    assert set(result.learning_curves) == {
        "n=4,j=0", "n=4,j=1", "n=3,j=0", "n=3,j=1"}
    assert all(len(curve) == iters for curve in
               result.learning_curves.values())


def test_best_energy_dominates_curves():
    problem = _toy_problem(4, seed=10)
    config = SolverConfig(depth=1, samples=64, eta=0.1, max_iterations=6,
                          plateau_tolerance=0.0, master_seed=3)
    result = run_variational(problem, config)
    for curve in result.learning_curves.values():
        assert result.e_min <= curve[-1][1] + 1e-12
    brute = min(problem.energies(
        ((np.arange(16)[:, None] >> np.arange(3, -1, -1)) & 1)))
    assert result.e_min >= brute - 1e-12


def test_plateau_stops_descent():
    problem = _toy_problem(4, seed=11)
    config = SolverConfig(depth=1, samples=None, eta=1e-9,
                          max_iterations=200, plateau_tolerance=1e-6,
                          plateau_window=5, master_seed=0)
    result = run_variational(problem, config)
    assert all(len(c) <= 7 for c in result.learning_curves.values())


def test_replay_determinism():
    problem = _toy_problem(4, seed=12)
    config = SolverConfig(depth=2, samples=48, eta=0.2, max_iterations=5,
                          plateau_tolerance=0.0, master_seed=99)
    first = run_variational(problem, config)
    again = run_variational(problem, SolverConfig(**json.loads(
        json.dumps(first.config))))
    assert first.to_json() == again.to_json()


def test_optimize_phases_expands_parameters():
    problem = _toy_problem(4, seed=13)
    obj = ParityObjective(problem, 4, 0, 2, optimize_phases=True)
    assert obj.num_parameters == 2 * len(obj.circuit.gates)
    config = SolverConfig(depth=1, samples=16, eta=0.1, max_iterations=2,
                          plateau_tolerance=0.0, master_seed=1,
                          optimize_phases=True)
    result = run_variational(problem, config)
    assert all(len(v) == 6 for v in result.final_angles.values())


def test_curves_csv_schema(tmp_path):
    problem = _toy_problem(4, seed=14)
    config = SolverConfig(depth=1, samples=16, eta=0.1, max_iterations=3,
                          plateau_tolerance=0.0, master_seed=2)
    result = run_variational(problem, config)
    path = tmp_path / "curves.csv"
    result.write_curves_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "config_tag,iteration,energy,best_energy"
    assert len(lines) == 1 + 4 * 3
