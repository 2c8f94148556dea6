"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--n 9] [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from ghzgame import kernels
from ghzgame.game import promise_masks


def cases(n):
    q = promise_masks(n)
    strategies = np.random.default_rng(0).choice(4**n, size=min(4**n, 20_000), replace=False)
    return {
        "strategy_win_counts": lambda b: kernels.strategy_win_counts(n, q, b),
        "input_win_counts": lambda b: kernels.input_win_counts(n, q, strategies, b),
        "set_size_table": lambda b: kernels.set_size_table(n, q, b),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=9)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    backends = kernels.backends()
    print(f"n={args.n}, backends: {', '.join(sorted(backends))}")
    print(f"{'kernel':<22}" + "".join(f"{name:>12}" for name in sorted(backends)) + f"{'speedup':>10}")
    for label, fn in cases(args.n).items():
        times = {
            name: min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
            for name, mod in backends.items()
        }
        row = f"{label:<22}" + "".join(f"{times[name]:>11.4f}s" for name in sorted(times))
        if "cython" in times:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
