"""Compiled vs pure-Python kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Times the scaled Bessel kernel over a root-finding-like workload and P1
assembly on a polar mesh, once per available backend.
"""
import argparse
import time

import numpy as np

from robinspec import kernels
from robinspec.fem2d import build_mesh
from robinspec.geometry import DomainSpec


def bessel_workload():
    orders = np.repeat(np.arange(0.0, 40.0, 0.5), 50)
    xs = np.tile(np.geomspace(1e-3, 2e3, 50), 80)
    for nu, x in zip(orders, xs):
        kernels.bessel_ik(nu, x)
    return len(orders)


def assembly_workload(mesh):
    kernels.assemble_p1(mesh.vertices, mesh.triangles)
    return len(mesh.triangles)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        n = fn()
        times.append(time.perf_counter() - t0)
    return min(times), n


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    mesh = build_mesh(DomainSpec.star2d([1.0, 0.0, 0.2]), 256, 32, 0.8, 16)
    rows = []
    previous = kernels.backend_name()
    try:
        for name in sorted(kernels.BACKENDS):
            kernels.use_backend(name)
            tb, nb = best_of(bessel_workload, args.repeat)
            ta, na = best_of(lambda: assembly_workload(mesh), args.repeat)
            rows.append((name, tb, nb, ta, na))
    finally:
        kernels.use_backend(previous)
    print(f"{'backend':<10}{'bessel (s)':>12}{'us/call':>10}{'assembly (s)':>14}{'us/tri':>10}")
    for name, tb, nb, ta, na in rows:
        print(f"{name:<10}{tb:>12.4f}{1e6 * tb / nb:>10.2f}{ta:>14.4f}{1e6 * ta / na:>10.3f}")
    if len(rows) == 2:
        (_, cb, _, ca, _), (_, pb, _, pa, _) = rows
        print(f"speedup   bessel x{pb / cb:.1f}   assembly x{pa / ca:.1f}")
    else:
        print("compiled backend not built; only the Python fallback was timed")


if __name__ == "__main__":
    main()
