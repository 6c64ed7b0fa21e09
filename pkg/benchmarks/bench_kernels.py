"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Lattice enumeration runs on dilated A2 and B2 string polytopes; the
polynomial kernel evaluates the SL3 family and its Jacobian at random points.
"""

import argparse
import time

import numpy as np

from toricdeg import kernels
from toricdeg.degen import builtin
from toricdeg.ghflow import NumericFamily
from toricdeg.polyhedra import _projection_levels
from toricdeg.rootsys import build_root_system
from toricdeg.strings import string_polytope


def _levels(label, word, lam):
    p = string_polytope(build_root_system(label), word, lam)
    _, B, verts, _, _ = p._local()
    return _projection_levels(verts, len(B)), len(B), p.count_lattice_points()


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if kernels.BACKEND != "cython":
        print("compiled kernels not built; only the Python backend is available")
        return
    print(f"{'case':40s} {'python (s)':>12s} {'cython (s)':>12s} {'speedup':>8s}")
    cases = [
        ("A2 (1,2,1) lambda=(40,40)", ("A2", (1, 2, 1), (40, 40))),
        ("B2 (1,2,1,2) lambda=(12,12)", ("B2", (1, 2, 1, 2), (12, 12))),
        ("A3 canonical lambda=(5,5,5)", ("A3", (1, 2, 1, 3, 2, 1), (5, 5, 5))),
    ]
    for name, (label, word, lam) in cases:
        levels, d, expected = _levels(label, word, lam)
        py = best_of(lambda: kernels.count_points(levels, d, backend="python"), args.repeat)
        cy = best_of(lambda: kernels.count_points(levels, d, backend="cython"), args.repeat)
        assert kernels.count_points(levels, d, backend="python") == kernels.count_points(levels, d, backend="cython") == expected
        print(f"{name + f' [{expected} pts]':40s} {py:12.4f} {cy:12.4f} {py / cy:8.1f}")

    fam = NumericFamily.from_family(builtin("sl3-string-121").family)
    rng = np.random.default_rng(0)
    xs = [rng.normal(size=7) + 1j * rng.normal(size=7) for _ in range(2000)]

    def run(backend):
        for x in xs:
            kernels.poly_eval(fam.coef, fam.exps, fam.gen, fam.n_gen, x, backend=backend)

    py = best_of(lambda: run("python"), args.repeat)
    cy = best_of(lambda: run("cython"), args.repeat)
    print(f"{'SL3 family eval+Jacobian x2000':40s} {py:12.4f} {cy:12.4f} {py / cy:8.1f}")


if __name__ == "__main__":
    main()
