"""Compiled vs numpy kernels on the shapes the search and sampler produce.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from fermat_kit import kernels


def _rand(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def cases(rng):
    # (frequency index x degree) grids: one ansatz power step, then a deep power
    yield "conv2d 9x2 * 9x2", "conv2d", (_rand(rng, 9, 2), _rand(rng, 9, 2))
    yield "conv2d 33x5 * 9x2", "conv2d", (_rand(rng, 33, 5), _rand(rng, 9, 2))
    yield "conv2d 65x9 * 33x5", "conv2d", (_rand(rng, 65, 9), _rand(rng, 33, 5))
    # packed evaluation on a sampling disc
    for terms, degree, points in ((4, 2, 32), (12, 4, 1000), (40, 8, 4000)):
        z = 2.0 * _rand(rng, points) / np.sqrt(2)
        args = (_rand(rng, terms, degree + 1), 0.5 * _rand(rng, terms), z)
        yield f"eval_packed {terms}t deg{degree} {points}pts", "eval_packed", args


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = kernels.IMPLEMENTATIONS
    if "cython" not in impls:
        print("compiled kernels not built; timing the numpy fallback only")
    names = sorted(impls)
    print(f"{'case':<34}" + "".join(f"{n + ' (us)':>16}" for n in names) + f"{'speedup':>10}")
    for label, fn, data in cases(np.random.default_rng(0)):
        best = {}
        for name in names:
            f = getattr(impls[name], fn)
            timer = timeit.Timer(lambda: f(*data))
            loops, _ = timer.autorange()
            best[name] = min(timer.repeat(args.repeat, loops)) / loops * 1e6
        if len(names) == 2:
            assert np.allclose(getattr(impls["python"], fn)(*data),
                               getattr(impls["cython"], fn)(*data), rtol=1e-11, atol=1e-11)
        speed = f"{best['python'] / best['cython']:.1f}x" if "cython" in best else "-"
        print(f"{label:<34}" + "".join(f"{best[n]:>16.1f}" for n in names) + f"{speed:>10}")


if __name__ == "__main__":
    main()
