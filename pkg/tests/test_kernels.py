import numpy as np
import pytest

from toricdeg import _kernels_py, kernels
from toricdeg.degen import builtin
from toricdeg.ghflow import NumericFamily
from toricdeg.polyhedra import _projection_levels
from toricdeg.rootsys import build_root_system
from toricdeg.strings import string_polytope

compiled = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")


def levels_for(label, word, lam):
    p = string_polytope(build_root_system(label), word, lam)
    _, B, verts, _, _ = p._local()
    return _projection_levels(verts, len(B)), len(B)


CASES = [("A2", (1, 2, 1), (2, 3)), ("B2", (2, 1, 2, 1), (1, 2)), ("G2", (1, 2, 1, 2, 1, 2), (1, 0))]


@compiled
@pytest.mark.parametrize("label,word,lam", CASES)
def test_enumeration_backends_agree(label, word, lam):
    levels, d = levels_for(label, word, lam)
    py = kernels.enumerate_points(levels, d, backend="python")
    cy = kernels.enumerate_points(levels, d, backend="cython")
    assert py == cy
    assert kernels.count_points(levels, d, backend="python") == kernels.count_points(levels, d, backend="cython") == len(py)


@compiled
def test_poly_eval_backends_agree():
    fam = NumericFamily.from_family(builtin("sl3-string-121").family)
    rng = np.random.default_rng(0)
    for _ in range(10):
        x = rng.normal(size=7) + 1j * rng.normal(size=7)
        v1, j1 = kernels.poly_eval(fam.coef, fam.exps, fam.gen, fam.n_gen, x, backend="python")
        v2, j2 = kernels.poly_eval(fam.coef, fam.exps, fam.gen, fam.n_gen, x, backend="cython")
        assert np.allclose(v1, v2, atol=1e-14) and np.allclose(j1, j2, atol=1e-14)


def test_poly_eval_jacobian_by_finite_differences():
    fam = NumericFamily.from_family(builtin("sl3-string-121").family)
    x = np.array([1, 2j, 0.5, -1, 1 + 1j, 0.3, 0.7])
    _, J = kernels.poly_eval(fam.coef, fam.exps, fam.gen, fam.n_gen, x, backend="python")
    h = 1e-7
    for k in range(7):
        e = np.zeros(7, dtype=complex)
        e[k] = h
        vp, _ = kernels.poly_eval(fam.coef, fam.exps, fam.gen, fam.n_gen, x + e, backend="python")
        vm, _ = kernels.poly_eval(fam.coef, fam.exps, fam.gen, fam.n_gen, x - e, backend="python")
        assert np.allclose((vp - vm) / (2 * h), J[:, k], atol=1e-6)


def test_unbounded_levels_rejected():
    with pytest.raises(ValueError):
        _kernels_py.enumerate_points([[1]], [0], [0, 1], 1)


def test_large_coefficients_fall_back_to_python():
    big = 1 << 50
    levels = [[((1,), 0), ((-1,), -big)]]
    assert kernels._pick(None, [[1], [-1]], [0, -big]) is _kernels_py
    assert kernels.count_points(levels, 1) == big + 1


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
