"""Time the numba kernels against their numpy twins and check they agree.

    python benchmarks/bench_kernels.py [--repeat 5] [--size 20000]

Compilation happens in a warm-up call that is excluded from the timings.
"""
import argparse
import timeit

import numpy as np

from sumlab import arith, special


def cases(size, rng):
    s = rng.uniform(-3, 3, size) + 1j * rng.uniform(-60, 60, size)
    s = s[np.abs(s - 1) > 1e-3]
    z = rng.uniform(0.05, 40, size) * np.exp(1j * rng.uniform(-1.2, 1.2, size))
    x = rng.uniform(0.05, 60, size)
    f = np.zeros(size + 1, dtype=complex)
    f[1:] = rng.standard_normal(size)
    mu = arith.mobius_table(size).astype(complex)
    return [
        ("loggamma", special._loggamma_jit, special._loggamma_numpy, (s,)),
        ("zeta", special._zeta_jit, special._zeta_numpy, (s,)),
        ("K0", special._k0_jit, special._k0_numpy, (z,)),
        ("Y0", special._y0_jit, special._y0_numpy, (x,)),
        ("sieve", lambda n: arith._linear_sieve_jit(n)[1], lambda n: arith._sieve_numpy(n)[1], (50 * size,)),
        ("dirichlet", arith._convolve_jit, arith._convolve_numpy, (f, mu, size)),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--size", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<10} {'numba [ms]':>11} {'numpy [ms]':>11} {'speedup':>8} {'max |diff|':>11}")
    for name, fast, slow, inputs in cases(args.size, rng):
        a = fast(*inputs)  # warm-up / compile
        b = slow(*inputs)
        scale = max(1.0, float(np.max(np.abs(b))))
        diff = float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) / scale
        t_fast = min(timeit.repeat(lambda: fast(*inputs), number=1, repeat=args.repeat)) * 1e3
        t_slow = min(timeit.repeat(lambda: slow(*inputs), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<10} {t_fast:>11.2f} {t_slow:>11.2f} {t_slow / t_fast:>8.1f} {diff:>11.1e}")


if __name__ == "__main__":
    main()
