import os
import time

import psutil

from maxcut_game import find_strong_deviation, max_cut_exact
from maxcut_game.concurrent import find_strong_deviation_parallel, max_cut_parallel
from maxcut_game.core.graph import RandomGraphSpec, generate_er
from maxcut_game.core.solver import local_search
from maxcut_game.core.game import Coloring


def get_memory_usage():
    """Get current memory usage of the process."""
    process = psutil.Process(os.getpid())
    return process.memory_info().rss / 1024 / 1024  # Convert to MB


def generate_graphs(n: int, avg_degree: float, count: int, seed: int = 0) -> list:
    """Generate seeded G(n, p) graphs for timing."""
    return [generate_er(RandomGraphSpec(n, avg_degree, seed + i)) for i in range(count)]


def benchmark_exact(graphs, k: int):
    """Time the sequential branch and bound, with and without the warm start."""
    start_time = time.time()
    nodes = 0
    for g in graphs:
        nodes += max_cut_exact(g, k).nodes_expanded
    warm_time = time.time() - start_time

    start_time = time.time()
    for g in graphs:
        max_cut_exact(g, k, warm_start=False)
    cold_time = time.time() - start_time

    return warm_time, cold_time, nodes


def benchmark_parallel_exact(graphs, k: int, workers: int):
    """Time the thread-pool branch and bound."""
    start_time = time.time()
    for g in graphs:
        max_cut_parallel(g, k, workers=workers)
    return time.time() - start_time


def benchmark_deviation_search(graphs, k: int, q: int, workers: int):
    """Time the strong-deviation search from a local optimum at every pruning level."""
    starts = [local_search(g, k, Coloring.monochromatic(g.n, k)) for g in graphs]
    timings = {}
    for level in range(4):
        start_time = time.time()
        for g, sigma in zip(graphs, starts):
            find_strong_deviation(g, sigma, q, level)
        timings[level] = time.time() - start_time

    start_time = time.time()
    for g, sigma in zip(graphs, starts):
        find_strong_deviation_parallel(g, sigma, q, 0, workers=workers)
    timings["parallel"] = time.time() - start_time
    return timings


def main():
    """Run all benchmarks over a few graph sizes."""
    sizes = [10, 14, 18]
    count = 5
    k = 3
    q = 4
    workers = 4

    print("Starting benchmarks...")
    print("-" * 80)

    for n in sizes:
        print(f"\nGraph size: n={n}, {count} graphs, average degree 5")
        print("-" * 40)
        graphs = generate_graphs(n, 5.0, count)

        print("Running exact solver benchmark...")
        warm_time, cold_time, nodes = benchmark_exact(graphs, k)

        print("Running parallel solver benchmark...")
        parallel_time = benchmark_parallel_exact(graphs, k, workers)

        print("Running deviation search benchmark...")
        timings = benchmark_deviation_search(graphs, k, q, workers)

        memory_usage = get_memory_usage()

        print("\nResults:")
        print(f"Exact (warm start): {warm_time:.4f}s, {nodes:,} nodes")
        print(f"Exact (cold start): {cold_time:.4f}s")
        print(f"Exact ({workers} threads): {parallel_time:.4f}s")
        for level in range(4):
            print(f"Deviation search, pruning {level}: {timings[level]:.4f}s")
        print(f"Deviation search ({workers} threads): {timings['parallel']:.4f}s")
        print(f"Memory Usage: {memory_usage:.2f} MB")


if __name__ == "__main__":
    main()
