#!/usr/bin/env python3
"""
Compare the sequential and thread-pool exact solvers on random graphs.

Results will vary based on hardware; the optimum values must always agree.
"""

import statistics
import sys
import time

from maxcut_game import max_cut_exact
from maxcut_game.concurrent import max_cut_parallel
from maxcut_game.core.graph import RandomGraphSpec, generate_er

# Number of runs for each benchmark to get more stable results
BENCHMARK_RUNS = 3


def measure_time(func):
    """Measure the execution time of a function."""
    start_time = time.time()
    result = func()
    end_time = time.time()
    return result, end_time - start_time


def benchmark_solvers(n, k, workers, seed=0):
    """Time both solvers on one graph and check they agree."""
    g = generate_er(RandomGraphSpec(n, min(5.0, n - 1), seed))
    sequential_times = []
    parallel_times = []
    for _ in range(BENCHMARK_RUNS):
        sequential, elapsed = measure_time(lambda: max_cut_exact(g, k))
        sequential_times.append(elapsed)
        parallel, elapsed = measure_time(lambda: max_cut_parallel(g, k, workers=workers))
        parallel_times.append(elapsed)
        if sequential.best_value != parallel.best_value:
            raise RuntimeError(f"Solvers disagree on seed {seed}: {sequential.best_value} != {parallel.best_value}")

    avg_sequential = statistics.mean(sequential_times)
    avg_parallel = statistics.mean(parallel_times)
    speedup = avg_sequential / avg_parallel if avg_parallel > 0 else float("inf")
    print(f"n={n:3d} m={g.m:3d} S*={sequential.best_value:3d} nodes={sequential.nodes_expanded:9,d}")
    print(f"  Sequential: {avg_sequential:.4f} seconds (avg of {BENCHMARK_RUNS} runs)")
    print(f"  Threads:    {avg_parallel:.4f} seconds (avg of {BENCHMARK_RUNS} runs)")
    print(f"  Speedup:    {speedup:.2f}x")


def main():
    n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 16
    for n in range(8, n_max + 1, 4):
        benchmark_solvers(n, 3, workers=4)


if __name__ == "__main__":
    main()
