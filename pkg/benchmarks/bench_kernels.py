"""Timing comparison of the jitted kernels against the numpy fallbacks.

Run as: python benchmarks/bench_kernels.py [--repeats N]

The spectral convolution is included for context; it always goes through
scipy regardless of backend, the O(M^2) direct kernel exists as an
independent cross-check of it, not as a competitor.
"""

import argparse
import time

import numpy as np

from convlab import Grid, accel, convolve, gaussian_field


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--points", type=int, default=200_000)
    parser.add_argument("--conv-size", type=int, default=4096)
    args = parser.parse_args()

    accel.warmup()
    rng = np.random.default_rng(0)

    rows = []

    coeffs = rng.uniform(-2, 2, 7)
    z = rng.uniform(-0.5, 0.5, args.points) + 1j * rng.uniform(-0.5, 0.5, args.points)
    pairs = [
        ("polyval deg-6 x %d" % args.points,
         lambda: accel.polyval_many_numpy(coeffs, z),
         lambda: accel.polyval_many(coeffs, z)),
        ("lipschitz pairs x %d" % args.points,
         lambda: accel.count_lipschitz_violations_numpy(coeffs, z, z + 0.1, 0.5, 1e-14),
         lambda: accel.count_lipschitz_violations(coeffs, z, z + 0.1, 0.5, 1e-14)),
    ]
    f = rng.standard_normal(args.conv_size)
    g = rng.standard_normal(args.conv_size)
    pairs.append(
        ("direct conv M=%d" % args.conv_size,
         lambda: accel.direct_circular_conv1d_numpy(f, g),
         lambda: accel.direct_circular_conv1d(f, g))
    )

    for name, ref, fast in pairs:
        t_numpy = best_of(ref, args.repeats)
        t_active = best_of(fast, args.repeats)
        rows.append((name, t_numpy, t_active))

    grid = Grid(dim=1, extent=8.0, points_per_axis=4096)
    gf = gaussian_field(grid, sigma=0.5)
    t_fft = best_of(lambda: convolve(gf, gf), args.repeats)

    backend = accel.backend()
    width = max(len(r[0]) for r in rows)
    print(f"active backend: {backend}")
    print(f"{'kernel':<{width}}  {'numpy':>10}  {backend:>10}  {'speedup':>8}")
    for name, t_numpy, t_active in rows:
        ratio = t_numpy / t_active if t_active > 0 else float("inf")
        print(f"{name:<{width}}  {t_numpy:>9.2e}s  {t_active:>9.2e}s  {ratio:>7.1f}x")
    print(f"{'fft convolve M=4096 (scipy, both backends)':<{width}}  {t_fft:>9.2e}s")


if __name__ == "__main__":
    main()
