"""Pure-Python implementations of the hot loops.

Semantics match ``_kernels.pyx`` exactly; this module is used when the
compiled extension is missing or when ``TORICDEG_PURE_PYTHON=1``.
"""

from __future__ import annotations

import numpy as np


def enumerate_points(A, b, starts, d: int, count_only: bool = False):
    """Enumerate integer ``y`` with ``A[r, :k] . y >= b[r]`` level by level.

    Rows ``starts[k-1]:starts[k]`` bound coordinate ``k`` (1-based) given the
    first ``k-1`` coordinates; their column ``k-1`` is nonzero.
    """
    A = [[int(x) for x in row] for row in A]
    b = [int(x) for x in b]
    starts = [int(s) for s in starts]
    y = [0] * d
    out: list[tuple[int, ...]] = []
    count = 0

    def bounds(k: int):
        lo = None
        hi = None
        for r in range(starts[k], starts[k + 1]):
            row = A[r]
            rhs = b[r]
            for j in range(k):
                rhs -= row[j] * y[j]
            a = row[k]
            if a > 0:
                v = -((-rhs) // a)
                lo = v if lo is None or v > lo else lo
            else:
                v = (-rhs) // (-a)
                hi = v if hi is None or v < hi else hi
        return lo, hi

    def rec(k: int) -> None:
        nonlocal count
        lo, hi = bounds(k)
        if lo is None or hi is None:
            raise ValueError("unbounded coordinate in lattice enumeration")
        if count_only and k + 1 == d:
            count += max(hi - lo + 1, 0)
            return
        for v in range(lo, hi + 1):
            y[k] = v
            if k + 1 == d:
                count += 1
                if not count_only:
                    out.append(tuple(y))
            else:
                rec(k + 1)

    rec(0)
    return count if count_only else out


def poly_eval(coef, exps, gen, n_gen: int, z):
    """Values and Jacobian of a sparse complex polynomial system at ``z``.

    ``coef[t] * prod(z ** exps[t])`` contributes to generator ``gen[t]``.
    """
    coef = np.asarray(coef, dtype=complex)
    exps = np.asarray(exps, dtype=np.int64)
    gen = np.asarray(gen, dtype=np.int64)
    z = np.asarray(z, dtype=complex)
    nv = z.shape[0]
    vals = np.zeros(n_gen, dtype=complex)
    jac = np.zeros((n_gen, nv), dtype=complex)
    if coef.size == 0:
        return vals, jac
    pw = z[None, :] ** exps
    mono = coef * np.prod(pw, axis=1)
    np.add.at(vals, gen, mono)
    for v in range(nv):
        e = exps[:, v]
        mask = e > 0
        if not mask.any():
            continue
        red = exps[mask].copy()
        red[:, v] -= 1
        d = coef[mask] * e[mask] * np.prod(z[None, :] ** red, axis=1)
        np.add.at(jac[:, v], gen[mask], d)
    return vals, jac
