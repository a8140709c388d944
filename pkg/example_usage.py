#!/usr/bin/env python3
"""Example usage of the py-dtsp solvers and experiment harness."""

import sys
from pathlib import Path

# Add the project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from py_dtsp.config import AcoParams, DescentConfig, HybridParams, build_experiment_config
from py_dtsp.data import City, DynamicEvent, EventSchedule, generate_random_instance, nearest_neighbor_tour
from py_dtsp.solvers import minimize, run_aco, run_hybrid
from py_dtsp.solvers.graddesc import rosenbrock_field
from py_dtsp.bench import compare_solvers


def example_descent():
    """Example: Minimize the Rosenbrock valley with restarts."""
    print("Example: Gradient Descent")
    print("=" * 40)

    try:
        cfg = DescentConfig(step_mode="fixed", t=0.0005, epsilon=1e-6, max_iters=20000, restarts=3,
                            init_box=[(-2.0, 2.0)])
        result = minimize(rosenbrock_field(), cfg, seed=0)

        print(f"✓ Best point: {result.best_x.round(4).tolist()}, f = {result.best_f:.3g}")
        print(f"Iterations: {result.iterations_used} (converged: {result.converged})")
        return True

    except Exception as e:
        print(f"✗ Error running descent: {e}")
        return False


def example_static_solvers():
    """Example: Ant System and the hybrid colony on one static instance."""
    print("\nExample: Static Instance")
    print("=" * 40)

    try:
        inst = generate_random_instance(30, (100.0, 100.0), seed=42)
        aco_params = AcoParams(max_iters=50)

        nn = nearest_neighbor_tour(inst, start=0)
        baseline = run_aco(inst, None, aco_params, seed=1)
        hybrid = run_hybrid(inst, None, HybridParams(aco=aco_params, t=0.4), seed=1)

        print(f"Nearest neighbour: {nn.length:.2f}")
        print(f"✓ Ant System: {baseline.final_length:.2f} (best found at iteration {baseline.iterations_to_best})")
        print(f"✓ Hybrid:     {hybrid.final_length:.2f} (best found at iteration {hybrid.iterations_to_best})")
        return True

    except Exception as e:
        print(f"✗ Error solving static instance: {e}")
        return False


def example_dynamic_run():
    """Example: A hybrid run while cities appear and disappear."""
    print("\nExample: Dynamic Instance")
    print("=" * 40)

    try:
        inst = generate_random_instance(20, seed=7)
        schedule = EventSchedule.of([
            DynamicEvent.insert(30, City(20, 55.0, 45.0)),
            DynamicEvent.remove(45, 3),
        ])
        result = run_hybrid(inst, schedule, HybridParams(aco=AcoParams(max_iters=60)), seed=0)

        print(f"Events applied at iterations: {result.event_iterations}")
        print(f"Stagnation restarts at: {result.reinit_iterations}")
        print(f"✓ Final tour visits {len(result.best_tour.order)} cities, length {result.final_length:.2f}")
        return True

    except Exception as e:
        print(f"✗ Error running dynamic instance: {e}")
        return False


def example_comparison():
    """Example: Compare the two shipped table configurations over a few seeds."""
    print("\nExample: Solver Comparison")
    print("=" * 40)

    try:
        overrides = {"runs": 3, "params.aco.max_iters": 30}
        experiments_dir = str(project_root / "experiments")
        cfg_a = build_experiment_config("table2_aco", overrides, experiments_dir)
        cfg_b = build_experiment_config("table2_hybrid", overrides, experiments_dir)

        table = compare_solvers(cfg_a, cfg_b, output_dir="output/example_comparison")

        print(f"{table.label_a}: average {table.stats_a.average:.2f}")
        print(f"{table.label_b}: average {table.stats_b.average:.2f}")
        print(f"✓ Wins: {table.wins_a} / {table.wins_b}, ties: {table.ties}")
        return True

    except Exception as e:
        print(f"✗ Error comparing solvers: {e}")
        return False


def main():
    """Run all examples."""
    print("py-dtsp - Usage Examples")
    print("=" * 50)

    Path("output").mkdir(exist_ok=True)

    examples = [
        example_descent,
        example_static_solvers,
        example_dynamic_run,
        example_comparison,
    ]

    passed = 0
    total = len(examples)

    for example in examples:
        if example():
            passed += 1
        print()

    print("=" * 50)
    print(f"Example Results: {passed}/{total} examples completed successfully")

    if passed == total:
        print("✓ All examples completed successfully!")
        print("\nNext steps:")
        print("1. Install dependencies: pip install -r requirements.txt")
        print("2. List experiments: py-dtsp list-experiments")
        print("3. Run a batch: py-dtsp batch --config table2_hybrid")
        return 0
    else:
        print("✗ Some examples failed. Please check the errors above.")
        return 1


if __name__ == "__main__":
    sys.exit(main())
