"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel and input size with the best-of-N time for each
backend and the speed-up.  Also times a full engine run for context, since
the engine loop is plain Python and does not go through the kernels.
"""

import argparse
import timeit

import numpy as np

from conflab import _pykernels, kernels
from conflab.engine import run_scenario
from conflab.presets import load_preset


def cases(rng, n):
    pos = rng.integers(0, 50, size=n).astype(np.float64)
    neg = rng.integers(0, 50, size=n).astype(np.float64)
    markers = np.sort(rng.integers(0, 50, size=2 * n) / 50.0)[::-1].copy()
    labels = (rng.random(2 * n) < 0.5).astype(np.int8)
    e1 = np.concatenate([[0.0], np.sort(rng.random(n)), [1.0]])
    e2 = np.concatenate([[0.0], np.sort(rng.random(n)), [1.0]])
    p1, p2 = rng.random(n + 1), rng.random(n + 1)
    return {
        "auc_pair_twice": (pos, neg),
        "roc_counts": (markers, labels),
        "step_overlap": (e1, p1, e2, p2),
    }


def best(fn, args, repeat):
    timer = timeit.Timer(lambda: fn(*args))
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat, loops)) / loops


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 100, 1000, 10000])
    args = ap.parse_args(argv)

    compiled = kernels.compiled_backend
    print(f"active backend: {kernels.BACKEND}")
    if compiled is None:
        print("compiled extension not built; only the fallback is timed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'n':>8}{'numpy (us)':>14}{'cython (us)':>14}{'speed-up':>10}")
    for n in args.sizes:
        for name, inputs in cases(rng, n).items():
            t_py = best(getattr(_pykernels, name), inputs, args.repeat) * 1e6
            if compiled is None:
                print(f"{name:<16}{n:>8}{t_py:>14.2f}{'-':>14}{'-':>10}")
                continue
            t_cy = best(getattr(compiled, name), inputs, args.repeat) * 1e6
            print(f"{name:<16}{n:>8}{t_py:>14.2f}{t_cy:>14.2f}{t_py / t_cy:>9.1f}x")

    cfg = load_preset("mediated_centre")
    t_run = best(run_scenario, (cfg,), 3)
    print(f"engine run (mediated_centre, {cfg.ticks * cfg.tasks_per_tick} tasks): "
          f"{t_run * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
