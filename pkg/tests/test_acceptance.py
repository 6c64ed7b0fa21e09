"""Acceptance suite: one test per criterion, each under its time budget.

Expected values come from oracles that do not go through the code under test
(GT patterns, Weyl product formulas, brute-force enumeration, hand algebra).
Each test prints a single PASS/FAIL line.
"""

import random
import time
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from oracles import gt_count

from toricdeg.degen import builtin, choose_e, fiber, image_faces, subfamily_ideal
from toricdeg.ghflow import NumericFamily, gh_vector_field, integrate, limit_point
from toricdeg.polyhedra import cone_from_inequalities, cone_from_rays, faces
from toricdeg.rootsys import build_root_system
from toricdeg.strings import Generator, good_valuation_check, string_polytope
from toricdeg.width import dh_fiber_volume, ell_lambda, orbit_polytope, orbit_volume, simplex_embedding

A1 = build_root_system("A1")
A2 = build_root_system("A2")
A2_WORDS = [(1, 2, 1), (2, 1, 2)]


@pytest.fixture
def report(capsys):
    def emit(n, ok, seconds, limit, detail):
        ok = ok and (limit is None or seconds < limit)
        budget = "" if limit is None else f" (limit {limit:g} s)"
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}; {seconds:.2f} s{budget}")
        return ok

    return emit


def weights(top):
    return [(a, b) for a in range(top + 1) for b in range(top + 1 - a)]


def weyl_dim_a2(a, b):
    return (a + 1) * (b + 1) * (a + b + 2) // 2


def orbit_volume_a2(a, b):
    # product of <lam, alpha^vee>/<rho, alpha^vee> over roots not orthogonal to lam
    out = Fraction(1)
    for p, r in ((a, 1), (b, 1), (a + b, 2)):
        if p:
            out *= Fraction(p, r)
    return out


def test_criterion_1_littelmann_counts(report):
    t0 = time.perf_counter()
    bad = []
    lams = weights(6)
    for word in A2_WORDS:
        for lam in lams:
            n = string_polytope(A2, word, lam).count_lattice_points()
            if n != gt_count(lam):
                bad.append((word, lam, n))
    spots = {(1, 1): 8, (1, 0): 3, (2, 3): 42, (0, 3): 10}
    for lam, want in spots.items():
        assert gt_count(lam) == want == weyl_dim_a2(*lam)
        for word in A2_WORDS:
            if string_polytope(A2, word, lam).count_lattice_points() != want:
                bad.append((word, lam, "spot"))
    dt = time.perf_counter() - t0
    ok = report(1, not bad and len(lams) == 28, dt, 5, f"{2 * len(lams)} polytopes match GT counts")
    assert not bad
    assert ok


def test_criterion_2_duistermaat_heckman(report):
    t0 = time.perf_counter()
    bad = []
    for lam in range(7):
        # A1: the string polytope is [0, lam]; at lam = 0 a point of unit volume
        want = lam or 1
        if dh_fiber_volume(A1, (1,), (lam,)) != want or orbit_volume(A1, (lam,)) != want:
            bad.append(("A1", lam))
    for word in A2_WORDS:
        for lam in weights(6):
            f = orbit_volume(A2, lam)
            g = dh_fiber_volume(A2, word, lam)
            if not f == g == orbit_volume_a2(*lam):
                bad.append((word, lam, f, g))
    assert orbit_volume(A2, (1, 1)) == dh_fiber_volume(A2, (1, 2, 1), (1, 1)) == 1
    assert orbit_volume(A2, (2, 3)) == dh_fiber_volume(A2, (1, 2, 1), (2, 3)) == 15
    for lam, dim in (((1, 1), 3), ((2, 3), 3), ((1, 0), 2), ((0, 2), 2)):
        base = dh_fiber_volume(A2, (1, 2, 1), lam)
        for k in range(1, 5):
            if dh_fiber_volume(A2, (1, 2, 1), (k * lam[0], k * lam[1])) != k**dim * base:
                bad.append(("scaling", lam, k))
    dt = time.perf_counter() - t0
    ok = report(2, not bad, dt, 10, "f = g on A1 and A2 weights, scaling k <= 4")
    assert not bad
    assert ok


def test_criterion_3_rees_family(report):
    t0 = time.perf_counter()
    fam = builtin("sl3-string-121").family
    vd = fam.valuation
    values = [g.v for g in vd.generators]

    e = choose_e(vd, fam.relations)
    assert tuple(e) == tuple(fam.e)
    assert all(m >= 1 for row in fam.t_exponents for m in row)

    # t = 1: the quadric p1 p23 - p2 p13 + p3 p12
    quadric = {(1, 0, 0, 0, 0, 1): 1, (0, 1, 0, 0, 1, 0): -1, (0, 0, 1, 1, 0, 0): 1}
    (one,) = fiber(fam, 1)
    assert {ex: c for c, ex in one} == quadric

    # t = 0: every surviving monomial has the same value in L
    for poly in fiber(fam, 0):
        vals = {tuple(sum(k * v[i] for k, v in zip(ex, values)) for i in range(len(values[0]))) for _, ex in poly}
        assert len(vals) == 1

    polys = fam.polynomials()
    for face in image_faces(fam):
        sub = subfamily_ideal(fam, face)
        expected = [i for i, g in enumerate(vd.generators) if not face.contains(g.c_weight)]
        assert list(sub.vanishing) == expected
        for j, poly in enumerate(polys):
            survives = any(all(ex[i] == 0 for i in expected) for _, ex in poly)
            if j in sub.kept:
                continue
            # a dropped relation must vanish identically on {z_i = 0, i in expected}
            assert not survives
    dt = time.perf_counter() - t0
    ok = report(3, True, dt, 1, f"e={list(fam.e)}, fibers and face splits exact")
    assert ok


def _starts(k=10):
    rng = np.random.default_rng(2024)
    out = []
    for _ in range(k):
        r = rng.uniform(0.5, 2.0)
        th = rng.uniform(0, 2 * np.pi)
        z = r * np.exp(1j * th)
        out.append(np.array([z, 1 / z, 1.0], dtype=complex))
    return out


def _psi(z):
    # moment weights +1, -1 on the two coordinates
    return 0.5 * (abs(z[0]) ** 2 - abs(z[1]) ** 2)


def _omega(u, v):
    return -np.vdot(u, v).imag


def test_criterion_4_flow_invariants(report):
    t0 = time.perf_counter()
    fam = NumericFamily.from_family(builtin("hyperbola").family)
    worst = dict(pi=0.0, psi=0.0, res=0.0, omega=0.0, lim_res=0.0, lim_psi=0.0)
    for x in _starts():
        assert all(0.5 <= abs(c) <= 2 for c in x[:2])
        tr = integrate(fam, x, 0.05)
        s0 = tr.states[0]
        assert abs(s0.t - tr.final.t - 0.95) < 1e-12
        om0 = np.array([[_omega(u, v) for v in s0.frame] for u in s0.frame])
        assert len(s0.frame) == 2
        for st, tau in zip(tr.states, tr.taus):
            worst["pi"] = max(worst["pi"], abs(st.t - (1.0 - tau)))
            worst["psi"] = max(worst["psi"], abs(_psi(st.z) - _psi(x)))
            worst["res"] = max(worst["res"], abs(st.z[0] * st.z[1] - st.t))
            om = np.array([[_omega(u, v) for v in st.frame] for u in st.frame])
            worst["omega"] = max(worst["omega"], float(np.max(np.abs(om - om0))))
        lim = limit_point(fam, x)
        worst["lim_res"] = max(worst["lim_res"], abs(lim.z[0] * lim.z[1]))
        worst["lim_psi"] = max(worst["lim_psi"], abs(_psi(lim.z) - _psi(x)))
    limits = dict(pi=1e-9, psi=1e-6, res=1e-8, omega=1e-4, lim_res=1e-5, lim_psi=1e-5)
    bad = {k: v for k, v in worst.items() if not v < limits[k]}
    dt = time.perf_counter() - t0
    ok = report(4, not bad, dt, 30, ", ".join(f"{k}={v:.1e}" for k, v in worst.items()))
    assert not bad
    assert ok


def test_criterion_5_vector_field_value(report):
    t0 = time.perf_counter()
    fam = NumericFamily.from_family(builtin("hyperbola").family)
    v = gh_vector_field(fam, np.array([1, 1, 1], dtype=complex))
    # grad of Re(t) projected onto ker(z2, z1, -1) at (1,1,1), normalised
    err = float(np.max(np.abs(v - np.array([-0.5, -0.5, -1.0]))))
    dt = time.perf_counter() - t0
    ok = report(5, err < 1e-12, dt, None, f"max error {err:.1e}")
    assert ok


def test_criterion_6_gromov_width(report):
    t0 = time.perf_counter()
    p03 = orbit_polytope(A2, (1, 2, 1), (0, 3))
    p23 = orbit_polytope(A2, (1, 2, 1), (2, 3))
    assert ell_lambda(A2, (0, 3)) == 3
    assert ell_lambda(A2, (2, 3)) == 2
    found03 = simplex_embedding(p03, 3)
    found23 = simplex_embedding(p23, 2)
    for poly, res, size in ((p03, found03, 3), (p23, found23, 2)):
        assert res.status == "found"
        verts = res.certificate.ambient_vertices
        assert all(poly.contains(v) for v in verts)
        edges = [tuple(a - b for a, b in zip(v, verts[0])) for v in verts[1:]]
        assert all(Fraction(x) / size == int(Fraction(x) / size) for e in edges for x in e)
    none = simplex_embedding(p03, 4)
    assert none.status == "none"
    assert any("volume obstruction" in n for n in none.notes)
    dt = time.perf_counter() - t0
    ok = report(6, True, dt, 60, "certificates at (0,3) and (2,3); size 4 at (0,3) refused")
    assert ok


def _lagrange_coefficients(xs, ys):
    """Exact coefficients (low degree first) of the interpolating polynomial."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            coeffs[k] += ys[i] * basis[k] / denom
    return coeffs


def test_criterion_7_polyhedra(report):
    t0 = time.perf_counter()
    rng = random.Random(31)
    checked_lattices = 0
    for _ in range(100):
        d = rng.randint(1, 4)
        rows = [tuple(Fraction(rng.randint(-3, 3)) for _ in range(d)) for _ in range(rng.randint(1, 6))]
        cone = cone_from_inequalities(rows, dim=d)
        # every generator satisfies the inequalities; lineality is tight on all of them
        for r in cone.rays:
            assert all(sum(a * x for a, x in zip(row, r)) >= 0 for row in rows)
        for l in cone.lineality:
            assert all(sum(a * x for a, x in zip(row, l)) == 0 for row in rows)
        gens = list(cone.rays) + list(cone.lineality) + [tuple(-x for x in l) for l in cone.lineality]
        back = cone_from_rays(gens, d)
        assert cone.same_point_set(back)
        # brute force: small integer points agree between H and V descriptions
        for p in product(range(-2, 3), repeat=d):
            assert cone.contains(p) == all(sum(a * x for a, x in zip(row, p)) >= 0 for row in rows)
        if not cone.lineality:
            lat = faces(cone)
            for i, j in lat.relations():
                assert set(lat.faces[i].cone.rays) <= set(lat.faces[j].cone.rays)
            checked_lattices += 1
    for lam in ((1, 1), (0, 1), (1, 2)):
        p = string_polytope(A2, (1, 2, 1), lam)
        ks = list(range(0, 6))
        counts = [gt_count((k * lam[0], k * lam[1])) for k in ks]
        assert [p.dilate(k).count_lattice_points() for k in ks[1:]] == counts[1:]
        coeffs = _lagrange_coefficients([Fraction(k) for k in ks], [Fraction(c) for c in counts])
        deg = max(i for i, c in enumerate(coeffs) if c != 0)
        assert deg == p.dim
        assert coeffs[deg] == p.volume() == orbit_volume_a2(*lam)
    dt = time.perf_counter() - t0
    ok = report(7, True, dt, 60, f"100 random cones ({checked_lattices} face lattices), Ehrhart exact")
    assert ok


def test_criterion_8_valuation_axioms(report):
    from dataclasses import replace

    t0 = time.perf_counter()
    for name in ("sl2", "sl3-string-121"):
        rep = good_valuation_check(builtin(name).family.valuation)
        assert rep.passed, [c.name for c in rep.entries if not c.passed]
    vd = builtin("sl3-string-121").family.valuation
    g0 = vd.generators[0]
    # a generator with zero grading but nonzero value breaks properness
    zero_c = replace(vd, generators=vd.generators + (Generator("bad", g0.v[:3] + (0, 0), g0.a_weight, (0, 0)),))
    assert not good_valuation_check(zero_c)["properness"].passed
    # a c-weight inconsistent with the value breaks c-compatibility
    wrong_c = replace(vd, generators=(Generator(g0.name, g0.v, g0.a_weight, (0, 1)),) + vd.generators[1:])
    assert not good_valuation_check(wrong_c)["v4-c-compatibility"].passed
    dt = time.perf_counter() - t0
    ok = report(8, True, dt, 1, "builtins pass, both violations detected")
    assert ok
