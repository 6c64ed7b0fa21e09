"""Kernel dispatch: compiled extension when importable, pure Python otherwise.

Set ``TORICDEG_PURE_PYTHON=1`` to force the fallback.  ``BACKEND`` names the
active implementation.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

_compiled = None
if os.environ.get("TORICDEG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

# int64 headroom: coefficients times coordinates summed over a row must not overflow
_SAFE = 1 << 40


def pack_levels(levels, d: int):
    rows, rhs, starts = [], [], [0]
    for k in range(d):
        for a, b in levels[k]:
            rows.append(list(a) + [0] * (d - len(a)))
            rhs.append(b)
        starts.append(len(rows))
    return rows, rhs, starts


def _fits(rows, rhs) -> bool:
    return all(abs(x) < _SAFE for r in rows for x in r) and all(abs(x) < _SAFE for x in rhs)


def enumerate_points(levels, d: int, backend: str | None = None) -> list[tuple[int, ...]]:
    rows, rhs, starts = pack_levels(levels, d)
    impl = _pick(backend, rows, rhs)
    if impl is _kernels_py:
        return impl.enumerate_points(rows, rhs, starts, d)
    return impl.enumerate_points(
        np.array(rows, dtype=np.int64).reshape(len(rows), d), np.array(rhs, dtype=np.int64),
        np.array(starts, dtype=np.int64), d,
    )


def count_points(levels, d: int, backend: str | None = None) -> int:
    rows, rhs, starts = pack_levels(levels, d)
    impl = _pick(backend, rows, rhs)
    if impl is _kernels_py:
        return impl.enumerate_points(rows, rhs, starts, d, count_only=True)
    return int(
        impl.enumerate_points(
            np.array(rows, dtype=np.int64).reshape(len(rows), d), np.array(rhs, dtype=np.int64),
            np.array(starts, dtype=np.int64), d, True,
        )
    )


def poly_eval(coef, exps, gen, n_gen: int, z, backend: str | None = None):
    impl = _pick(backend)
    return impl.poly_eval(coef, exps, gen, n_gen, z)


def _pick(backend, rows=None, rhs=None):
    if backend == "python":
        return _kernels_py
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    if _compiled is None:
        return _kernels_py
    if rows is not None and not _fits(rows, rhs):
        return _kernels_py
    return _compiled
