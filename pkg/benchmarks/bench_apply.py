"""Compare the compiled and numpy kernels on full sweeps.

    python3 benchmarks/bench_apply.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from qsbai import build_complete_bipartite, build_complete_with_loops, run_sweep, two_state_environment
from qsbai._backend import available_backends


def cases():
    q30 = np.full(30, 0.01)
    q30[0] = 0.9
    q40 = np.full(40, 0.01)
    q40[0] = 0.9
    rng = np.random.default_rng(0)
    yield "complete n=30, T=30", build_complete_with_loops(30), two_state_environment(q30), 30
    yield "bipartite 30x10, T=30", build_complete_bipartite(30, 10), two_state_environment(q40), 30
    yield "complete n=200, T=100", build_complete_with_loops(200), two_state_environment(rng.uniform(0.01, 0.99, 200)), 100


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = available_backends()
    print(f"{'case':<26}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, g, env, horizon in cases():
        times = []
        for b in backends:
            run_sweep(g, env, horizon, backend=b)
            times.append(min(timeit.repeat(lambda: run_sweep(g, env, horizon, backend=b), number=1, repeat=args.repeat)))
        row = f"{name:<26}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[1] / times[0]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
