import numpy as np
import pytest

from toricdeg.degen import builtin
from toricdeg.ghflow import (
    FlowBlowUpError,
    FlowError,
    FlowOptions,
    FlowState,
    NumericFamily,
    SingularPointError,
    check_invariants,
    default_frame,
    fiber_tangent_basis,
    gh_vector_field,
    integrate,
    limit_point,
    omega,
    tangent_projection,
)


@pytest.fixture(scope="module")
def hyp():
    return NumericFamily.from_family(builtin("hyperbola").family)


@pytest.fixture(scope="module")
def sl3():
    return NumericFamily.from_family(builtin("sl3-string-121").family)


def sl3_start(seed):
    rng = np.random.default_rng(seed)
    z = rng.uniform(0.5, 1.5, size=5) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=5))
    z6 = (z[1] * z[4] - z[2] * z[3]) / z[0]
    return np.concatenate([z, [z6, 1.0]])


def test_tangent_space_hyperbola(hyp):
    B = tangent_projection(hyp, np.array([1, 1, 1], dtype=complex))
    assert B.shape == (3, 2)
    assert np.allclose(np.array([1, 1, -1]) @ B, 0)
    assert np.allclose(B.conj().T @ B, np.eye(2))


def test_tangent_space_linear_family():
    fam = NumericFamily.linear(2)
    assert np.allclose(tangent_projection(fam, np.zeros(3)), np.eye(3))
    v = gh_vector_field(fam, np.array([1, 2, 1], dtype=complex))
    assert np.allclose(v, [0, 0, -1])


def test_duplicated_generator_is_singular(hyp):
    dup = NumericFamily(
        hyp.n,
        np.concatenate([hyp.coef, hyp.coef]),
        np.vstack([hyp.exps, hyp.exps]),
        np.concatenate([hyp.gen, hyp.gen + 1]),
        2,
        hyp.moment_weights,
    )
    with pytest.raises(SingularPointError):
        tangent_projection(dup, np.array([1, 1, 1], dtype=complex))


def test_vector_field_value(hyp):
    v = gh_vector_field(hyp, np.array([1, 1, 1], dtype=complex))
    assert np.max(np.abs(v - np.array([-0.5, -0.5, -1.0]))) < 1e-12


def test_vector_field_matches_closed_form(hyp):
    # on z1 z2 = t the field is -(conj z2, conj z1, |z1|^2 + |z2|^2) / (|z1|^2 + |z2|^2)
    rng = np.random.default_rng(1)
    for _ in range(20):
        z1 = complex(*rng.normal(size=2))
        t = rng.uniform(0.1, 1)
        z2 = t / z1
        v = gh_vector_field(hyp, np.array([z1, z2, t]))
        s = abs(z1) ** 2 + abs(z2) ** 2
        assert np.allclose(v, -np.array([np.conj(z2), np.conj(z1), s]) / s, atol=1e-12)
        assert abs(v[-1] + 1) < 1e-12


def test_dpi_is_minus_one_sl3(sl3):
    for seed in range(5):
        v = gh_vector_field(sl3, sl3_start(seed))
        assert abs(v[-1] + 1) < 1e-12


def test_blowup_threshold(hyp):
    with pytest.raises(FlowBlowUpError):
        gh_vector_field(hyp, np.array([1e-6, 1e-6, 1e-12], dtype=complex))


def test_psi_conservation_hyperbola(hyp):
    tr = integrate(hyp, np.array([2, 0.5, 1], dtype=complex), 0.01)
    z = tr.final.z
    assert abs((abs(z[0]) ** 2 - abs(z[1]) ** 2) / 2 - 15 / 8) < 1e-8
    assert abs(z[0] * z[1] - tr.final.t) < 1e-8
    assert abs(tr.final.t - 0.01) < 1e-12


def test_symmetric_start_stays_symmetric(hyp):
    tr = integrate(hyp, np.array([1, 1, 1], dtype=complex), 0.05)
    assert max(abs(s.z[0] - s.z[1]) for s in tr.states) < 1e-10


def test_precondition(hyp):
    with pytest.raises(FlowError):
        integrate(hyp, np.array([1, 1, 1], dtype=complex), 1.5)
    with pytest.raises(FlowError):
        integrate(hyp, np.array([1, 2, 1], dtype=complex), 0.5)  # off the fiber


def test_invariants_hyperbola(hyp):
    tr = integrate(hyp, np.array([1.5j, 1 / 1.5j, 1]), 0.05)
    inv = check_invariants(tr, hyp)
    assert inv.omega_drift < 1e-4
    assert inv.pi_drift < 1e-9
    assert inv.psi_drift < 1e-6
    assert inv.residual < 1e-8


def test_zero_length_trajectory(hyp):
    from toricdeg.ghflow import Trajectory

    st = FlowState(np.array([1, 1], dtype=complex), 1.0, default_frame(hyp, FlowState(np.array([1, 1], dtype=complex), 1.0)))
    inv = check_invariants(Trajectory([st], [0.0]), hyp)
    assert (inv.pi_drift, inv.psi_drift, inv.omega_drift, inv.residual) == (0, 0, 0, 0)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_invariants_sl3(sl3, seed):
    x = sl3_start(seed)
    tr = integrate(sl3, x, 0.05)
    inv = check_invariants(tr, sl3)
    assert inv.psi_drift < 1e-6
    assert inv.omega_drift < 1e-4
    assert inv.residual < 1e-8
    assert inv.pi_drift < 1e-9


def test_frame_is_tangent_and_nondegenerate(hyp):
    x = np.array([2, 0.5, 1], dtype=complex)
    fr = default_frame(hyp, FlowState(x[:-1], 1.0))
    assert len(fr) == 2
    B = fiber_tangent_basis(hyp, x)
    for u in fr:
        assert np.allclose(B @ (B.conj().T @ u), u)
    assert abs(omega(fr[0], fr[1]) + 1) < 1e-12


def test_limit_asymmetric(hyp):
    lim = limit_point(hyp, np.array([2, 0.5, 1], dtype=complex))
    assert abs(abs(lim.z[0]) ** 2 - 15 / 4) < 1e-6
    assert abs(lim.z[1]) < 1e-6
    assert lim.residual <= lim.error


def test_limit_symmetric(hyp):
    lim = limit_point(hyp, np.array([1, 1, 1], dtype=complex))
    assert np.max(np.abs(lim.z)) < 1e-6
    assert lim.exponent == 0.5


def test_limit_linear_family():
    fam = NumericFamily.linear(2)
    lim = limit_point(fam, np.array([1 + 1j, 2, 1]))
    assert np.allclose(lim.z, [1 + 1j, 2], atol=1e-10)


def test_limit_preserves_psi_sl3(sl3):
    x = sl3_start(4)
    lim = limit_point(sl3, x)
    assert np.max(np.abs(sl3.psi(lim.z) - sl3.psi(x))) < 1e-5
    assert lim.residual < 1e-5


def test_options_validation():
    with pytest.raises(ValueError):
        FlowOptions(rtol=-1)


def test_tolerance_env_override(monkeypatch):
    monkeypatch.setenv("TORICDEG_RTOL", "1e-6")
    assert FlowOptions().rtol == 1e-6
