"""Gradient-Hamiltonian flow of ``pi = t`` on the fibers of a family in E x C.

States are complex vectors ``x = (z_1, ..., z_n, t)``.  The field is
``V = -P e_t / |P e_t|^2`` with ``P`` the orthogonal projection onto the
tangent space of the total space, i.e. the complex kernel of the Jacobian.
Along ``V`` the coordinate ``t`` decreases at unit speed, so integrating for
flow time ``tau`` moves a point from the fiber over ``t0`` to the fiber over
``t0 - tau``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .degen import FamilyIdeal


class FlowError(RuntimeError):
    pass


class SingularPointError(FlowError):
    pass


class FlowBlowUpError(FlowError):
    pass


class StepSizeUnderflowError(FlowError):
    pass


class ResidualDivergenceError(FlowError):
    pass


class NonConvergentError(FlowError):
    pass


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None:
        return default
    val = float(raw)
    if not val > 0:
        raise ValueError(f"{name} must be positive")
    return val


@dataclass(frozen=True)
class FlowOptions:
    rtol: float = field(default_factory=lambda: _env_float("TORICDEG_RTOL", 1e-10))
    atol: float = 1e-12
    newton_tol: float = field(default_factory=lambda: _env_float("TORICDEG_NEWTON_TOL", 1e-12))
    blowup: float = 1e-10
    min_step: float = 1e-14
    max_steps: int = 200_000
    project: bool = True
    zero_threshold: float = 1e-9

    def __post_init__(self):
        for name in ("rtol", "atol", "newton_tol", "blowup", "min_step", "zero_threshold"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class NumericFamily:
    """Sparse complex polynomial system in ``(z_1..z_n, t)``."""

    n: int
    coef: np.ndarray
    exps: np.ndarray
    gen: np.ndarray
    n_gen: int
    moment_weights: np.ndarray  # (n, k): psi = 1/2 sum |z_i|^2 w_i
    name: str = ""

    @classmethod
    def from_family(cls, family: FamilyIdeal) -> "NumericFamily":
        coef, exps, gen = [], [], []
        polys = family.polynomials()
        for j, poly in enumerate(polys):
            for c, ex in poly:
                coef.append(complex(c))
                exps.append(ex)
                gen.append(j)
        vd = family.valuation
        if family.raw:
            w = np.array([g.v for g in vd.generators], dtype=float)
        else:
            # the family is invariant under the torus with weights (a, c), not
            # under the full value torus
            w = np.array([tuple(g.a_weight) + tuple(g.c_weight) for g in vd.generators], dtype=float)
        n = family.n
        return cls(
            n,
            np.array(coef, dtype=complex),
            np.array(exps, dtype=np.int64).reshape(len(coef), n + 1),
            np.array(gen, dtype=np.int64),
            len(polys),
            w.reshape(n, -1),
            family.name,
        )

    @classmethod
    def linear(cls, n: int) -> "NumericFamily":
        return cls(
            n,
            np.zeros(0, dtype=complex),
            np.zeros((0, n + 1), dtype=np.int64),
            np.zeros(0, dtype=np.int64),
            0,
            np.eye(n),
            "linear",
        )

    def evaluate(self, x) -> tuple[np.ndarray, np.ndarray]:
        return kernels.poly_eval(self.coef, self.exps, self.gen, self.n_gen, x)

    def residual(self, x) -> float:
        vals, _ = self.evaluate(x)
        return float(np.max(np.abs(vals))) if vals.size else 0.0

    def psi(self, z) -> np.ndarray:
        z = np.asarray(z)[: self.n]
        return 0.5 * (np.abs(z) ** 2) @ self.moment_weights


@dataclass
class FlowState:
    z: np.ndarray
    t: float
    frame: list[np.ndarray] | None = None

    @property
    def x(self) -> np.ndarray:
        return np.concatenate([np.asarray(self.z, dtype=complex), [complex(self.t)]])


def as_state(start, n: int | None = None) -> FlowState:
    if isinstance(start, FlowState):
        return start
    arr = np.asarray(start, dtype=complex)
    if n is not None and arr.shape != (n + 1,):
        raise FlowError(f"start has {arr.size} entries, expected {n + 1} (coordinates then t)")
    return FlowState(arr[:-1].copy(), float(arr[-1].real))


@dataclass
class Trajectory:
    states: list[FlowState]
    taus: list[float]
    diagnostics: dict[str, list] = field(default_factory=dict)

    @property
    def final(self) -> FlowState:
        return self.states[-1]


# ---------------------------------------------------------------------------
# linear algebra


def tangent_projection(family: NumericFamily, state) -> np.ndarray:
    """Orthonormal columns spanning the kernel of the Jacobian at ``state``."""
    x = state.x if isinstance(state, FlowState) else np.asarray(state, dtype=complex)
    return _kernel(family, x)


def _kernel(family: NumericFamily, x: np.ndarray, extra_rows=None) -> np.ndarray:
    _, J = family.evaluate(x)
    if extra_rows is not None:
        J = np.vstack([J, extra_rows])
    r, d = J.shape
    if r == 0:
        return np.eye(d, dtype=complex)
    Q, R = np.linalg.qr(J.conj().T, mode="complete")
    diag = np.abs(np.diag(R[:r, :r]))
    scale = max(1.0, float(np.max(np.abs(J))))
    if r > d or np.min(diag) < 1e-10 * scale:
        raise SingularPointError("Jacobian is rank deficient (singular point)")
    return Q[:, r:]


def fiber_tangent_basis(family: NumericFamily, state) -> np.ndarray:
    x = state.x if isinstance(state, FlowState) else np.asarray(state, dtype=complex)
    et = np.zeros((1, family.n + 1), dtype=complex)
    et[0, -1] = 1
    return _kernel(family, x, et)


def gh_vector_field(family: NumericFamily, state, opts: FlowOptions | None = None) -> np.ndarray:
    opts = opts or FlowOptions()
    x = state.x if isinstance(state, FlowState) else np.asarray(state, dtype=complex)
    B = _kernel(family, x)
    coeffs = B[-1, :].conj()  # B^H e_t
    nrm2 = float(np.real(np.vdot(coeffs, coeffs)))
    if nrm2 < opts.blowup:
        raise FlowBlowUpError(f"|P grad Re t|^2 = {nrm2:.3e}: flow blow-up imminent")
    return -(B @ coeffs) / nrm2


def omega(u, v) -> float:
    """Standard symplectic form ``-Im <u, v>``."""
    return float(-np.imag(np.vdot(u, v)))


# ---------------------------------------------------------------------------
# integration

# Dormand-Prince 5(4)
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])


class _System:
    def __init__(self, family: NumericFamily, n_frame: int, opts: FlowOptions):
        self.fam = family
        self.d = family.n + 1
        self.k = n_frame
        self.opts = opts

    def rhs(self, y: np.ndarray) -> np.ndarray:
        d = self.d
        x = y[:d]
        v = gh_vector_field(self.fam, x, self.opts)
        out = [v]
        for j in range(self.k):
            u = y[d * (j + 1) : d * (j + 2)]
            nu = float(np.linalg.norm(u))
            if nu == 0:
                out.append(np.zeros(d, dtype=complex))
                continue
            h = 1e-6 / nu
            vp = gh_vector_field(self.fam, x + h * u, self.opts)
            vm = gh_vector_field(self.fam, x - h * u, self.opts)
            out.append((vp - vm) / (2 * h))
        return np.concatenate(out)


def _newton_project(family: NumericFamily, x: np.ndarray, opts: FlowOptions) -> np.ndarray:
    if family.n_gen == 0:
        return x
    n = family.n
    x = x.copy()
    last = np.inf
    for _ in range(30):
        vals, J = family.evaluate(x)
        res = float(np.max(np.abs(vals)))
        if res <= opts.newton_tol:
            return x
        if res > 10 * last and res > 1e-6:
            break
        last = res
        dz, *_ = np.linalg.lstsq(J[:, :n], -vals, rcond=None)
        x[:n] += dz
    vals, _ = family.evaluate(x)
    res = float(np.max(np.abs(vals)))
    if res > max(opts.newton_tol * 1e3, 1e-10):
        raise ResidualDivergenceError(f"Newton projection stalled at residual {res:.3e}")
    return x


def _project_frame(family: NumericFamily, x: np.ndarray, frame: list[np.ndarray]) -> list[np.ndarray]:
    B = fiber_tangent_basis(family, x)
    return [B @ (B.conj().T @ u) for u in frame]


def default_frame(family: NumericFamily, state: FlowState) -> list[np.ndarray]:
    """``{u, i u}`` with ``u`` the first fiber tangent basis vector."""
    B = fiber_tangent_basis(family, state)
    if B.shape[1] == 0:
        return []
    u = B[:, 0]
    return [u, 1j * u]


def integrate(
    family: NumericFamily,
    start,
    t_end: float,
    opts: FlowOptions | None = None,
    frame: list | None | bool = True,
    record_every: int = 1,
) -> Trajectory:
    """Integrate from ``start.t`` down to ``t_end``.

    ``frame=True`` transports the default 2-frame, ``False``/``None`` none,
    or pass explicit tangent vectors.
    """
    opts = opts or FlowOptions()
    st = as_state(start, family.n)
    if not (0 < t_end < st.t):
        raise FlowError(f"need 0 < t_end < start t, got t_end={t_end}, t={st.t}")
    if frame is True:
        frame = st.frame if st.frame is not None else default_frame(family, st)
    elif not frame:
        frame = []
    frame = [np.asarray(u, dtype=complex) for u in frame]
    sys_ = _System(family, len(frame), opts)
    d = sys_.d
    x0 = st.x
    if family.residual(x0) > 1e-8:
        raise FlowError(f"start point is off the fiber (residual {family.residual(x0):.3e})")
    gh_vector_field(family, x0, opts)  # raises early on singular or degenerate starts
    y = np.concatenate([x0] + frame)
    t0 = st.t
    total = t0 - t_end
    tau = 0.0
    psi0 = family.psi(x0)
    traj = Trajectory([FlowState(x0[:-1].copy(), t0, [u.copy() for u in frame])], [0.0])
    diag = {"tau": [0.0], "t": [t0], "residual": [family.residual(x0)], "psi_drift": [0.0], "pi_error": [0.0]}
    h = min(total, 1e-2)
    k1 = sys_.rhs(y)
    steps = 0
    while tau < total:
        if steps >= opts.max_steps:
            raise StepSizeUnderflowError("maximum number of steps exceeded")
        h = min(h, total - tau)
        ks = [k1]
        for i in range(1, 7):
            yi = y + h * sum(a * kk for a, kk in zip(_A[i], ks))
            ks.append(sys_.rhs(yi))
        y5 = y + h * sum(b * kk for b, kk in zip(_B5, ks) if b)
        y4 = y + h * sum(b * kk for b, kk in zip(_B4, ks) if b)
        sc = opts.atol + opts.rtol * np.maximum(np.abs(y[:d]), np.abs(y5[:d]))
        err = float(np.sqrt(np.mean(np.abs((y5[:d] - y4[:d]) / sc) ** 2)))
        if err <= 1.0:
            tau_new = tau + h if tau + h < total else total
            x = y5[:d].copy()
            x[-1] = complex(x[-1].real)
            if opts.project:
                x = _newton_project(family, x, opts)
            fr = [y5[d * (j + 1) : d * (j + 2)] for j in range(len(frame))]
            if fr and opts.project:
                fr = _project_frame(family, x, fr)
            y = np.concatenate([x] + fr)
            tau = tau_new
            steps += 1
            k1 = sys_.rhs(y) if tau < total else k1
            if steps % record_every == 0 or tau >= total:
                traj.states.append(FlowState(x[:-1].copy(), float(x[-1].real), [u.copy() for u in fr]))
                traj.taus.append(tau)
                diag["tau"].append(tau)
                diag["t"].append(float(x[-1].real))
                diag["residual"].append(family.residual(x))
                diag["psi_drift"].append(float(np.max(np.abs(family.psi(x) - psi0), initial=0.0)))
                diag["pi_error"].append(abs(float(x[-1].real) - (t0 - tau)))
        fac = 0.9 * (1.0 / err) ** 0.2 if err > 0 else 5.0
        h *= min(5.0, max(0.2, fac))
        if h < opts.min_step and tau < total:
            raise StepSizeUnderflowError(f"step size underflow at t={t0 - tau:.3e}")
    final = traj.final
    diag["zero_coordinates"] = [
        i for i, zi in enumerate(final.z) if abs(zi) < opts.zero_threshold
    ]
    traj.diagnostics = diag
    return traj


# ---------------------------------------------------------------------------
# limit and invariants


@dataclass
class LimitResult:
    z: np.ndarray
    error: float
    exponent: float
    samples: list[float]
    residual: float

    def to_json(self) -> dict:
        return {
            "z": [[float(c.real), float(c.imag)] for c in self.z],
            "error": self.error,
            "exponent": self.exponent,
            "samples": self.samples,
            "residual_t0": self.residual,
        }


def _extrapolate(ts: list[float], zs: list[np.ndarray], p: float) -> tuple[np.ndarray, float]:
    """Polynomial extrapolation to ``s = t^p = 0`` with a one-order-lower error estimate."""
    s = [t**p for t in ts]

    def neville(idx):
        pts = [(s[i], zs[i]) for i in idx]
        # Lagrange evaluation at 0
        out = np.zeros_like(zs[0])
        for i, (si, zi) in enumerate(pts):
            w = 1.0
            for j, (sj, _) in enumerate(pts):
                if i != j:
                    w *= (0 - sj) / (si - sj)
            out = out + w * zi
        return out

    full = neville(range(len(s)))
    low = neville(range(1, len(s)))
    return full, float(np.max(np.abs(full - low)))


def limit_point(
    family: NumericFamily,
    start,
    eps: float = 1e-3,
    tol: float = 1e-6,
    opts: FlowOptions | None = None,
    max_halvings: int = 4,
) -> LimitResult:
    """Extrapolate the flow to the zero fiber from samples at ``eps, eps/2, eps/4``."""
    opts = opts or FlowOptions()
    st = as_state(start, family.n)
    if not (0 < eps < st.t):
        raise FlowError(f"need 0 < eps < start t, got eps={eps}")
    samples_t: list[float] = []
    samples_z: list[np.ndarray] = []
    cur = st
    targets = [eps, eps / 2, eps / 4]
    best = None
    for attempt in range(max_halvings + 1):
        for tt in targets:
            if samples_t and tt >= samples_t[-1]:
                continue
            tr = integrate(family, cur, tt, opts, frame=False, record_every=10**9)
            cur = tr.final
            samples_t.append(cur.t)
            samples_z.append(cur.z.copy())
        ts, zs = samples_t[-3:], samples_z[-3:]
        cands = [(*_extrapolate(ts, zs, p), p) for p in (1.0, 0.5)]
        z, err, p = min(cands, key=lambda c: c[1])
        x0 = np.concatenate([z, [0j]])
        res = family.residual(x0)
        best = LimitResult(z, max(err, res), p, list(ts), res)
        if best.error <= tol:
            return best
        targets = [samples_t[-1] / 2]
    raise NonConvergentError(f"non-convergent extrapolation (error estimate {best.error:.3e})")


@dataclass
class InvariantReport:
    pi_drift: float
    psi_drift: float
    omega_drift: float
    residual: float

    def to_json(self) -> dict:
        return {
            "pi_drift": self.pi_drift,
            "psi_drift": self.psi_drift,
            "omega_drift": self.omega_drift,
            "residual": self.residual,
        }


def check_invariants(traj: Trajectory, family: NumericFamily) -> InvariantReport:
    s0 = traj.states[0]
    psi0 = family.psi(s0.z)
    fr0 = s0.frame or []
    om0 = [[omega(u, v) for v in fr0] for u in fr0]
    pi = psi = om = res = 0.0
    for st, tau in zip(traj.states[1:], traj.taus[1:]):
        pi = max(pi, abs(st.t - (s0.t - tau)))
        psi = max(psi, float(np.max(np.abs(family.psi(st.z) - psi0), initial=0.0)))
        res = max(res, family.residual(st.x))
        fr = st.frame or []
        for a in range(len(fr)):
            for b in range(len(fr)):
                om = max(om, abs(omega(fr[a], fr[b]) - om0[a][b]))
    return InvariantReport(pi, psi, om, res)


def trajectory_report(traj: Trajectory, family: NumericFamily) -> dict:
    inv = check_invariants(traj, family)
    return {
        "family": family.name,
        "start": {"z": [[float(c.real), float(c.imag)] for c in traj.states[0].z], "t": traj.states[0].t},
        "end": {"z": [[float(c.real), float(c.imag)] for c in traj.final.z], "t": traj.final.t},
        "steps": len(traj.taus) - 1,
        "invariants": inv.to_json(),
        "diagnostics": traj.diagnostics,
    }
