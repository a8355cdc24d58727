"""Variational minimization of the 6x6 benchmark quadratic program.

Exhaustive search gives the three lowest energies; the variational run
at depth 1 already observes a good approximate solution, and depth 2
finds the global minimum.  Learning curves land in qubo_curves_*.csv.
"""

from shallowboson import (
    QuboProblem, SolverConfig, benchmark_qubo6, brute_force_min,
    run_variational,
)

problem = QuboProblem(benchmark_qubo6())
e_min, argmin, lowest = brute_force_min(problem, k_lowest=3)
print("exhaustive three lowest energies:")
for energy, bits in lowest:
    print(f"  {energy:+.4f}  {''.join(map(str, bits))}")

for depth in (1, 2):
    config = SolverConfig(depth=depth, samples=None, eta=0.15,
                          max_iterations=40, plateau_tolerance=1e-5,
                          master_seed=0)
    result = run_variational(problem, config)
    result.write_curves_csv(f"qubo_curves_depth{depth}.csv")
    print(f"\ndepth {depth}: best observed energy {result.e_min:+.4f} at "
          f"{''.join(map(str, result.b_min))}")
    print(f"  converged objectives per configuration: "
          f"{ {k: round(v, 3) for k, v in result.converged.items()} }")
    print(f"  curves written to qubo_curves_depth{depth}.csv")
