"""End-to-end checks behind ``toricdeg check all``.

Each check returns a :class:`CheckResult`; they are independent and may run
in worker processes.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def to_json(self) -> dict:
        return {"check": self.name, "passed": self.passed, "detail": self.detail, "seconds": round(self.seconds, 3)}


def _timed(name, fn):
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported as data
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, bool(ok), detail, time.perf_counter() - t)


def check_counts():
    from .rootsys import build_root_system, dominant_weights, reduced_words, weyl_dim
    from .strings import string_polytope

    rs = build_root_system("A2")
    bad = []
    n = 0
    for word in reduced_words(rs):
        for lam in dominant_weights(rs, 6):
            n += 1
            if string_polytope(rs, word, lam).count_lattice_points() != weyl_dim(rs, lam):
                bad.append((word, lam))
    return not bad, f"{n} polytopes" + (f"; mismatches {bad[:3]}" if bad else "")


def check_dh():
    from .rootsys import build_root_system, dominant_weights, reduced_words
    from .width import dh_fiber_volume, orbit_volume

    bad = []
    n = 0
    for label, top in (("A1", 6), ("A2", 6)):
        rs = build_root_system(label)
        for word in reduced_words(rs):
            for lam in dominant_weights(rs, top):
                n += 1
                if orbit_volume(rs, lam) != dh_fiber_volume(rs, word, lam):
                    bad.append((label, word, lam))
    rs = build_root_system("A2")
    for lam in ((1, 0), (1, 1), (0, 2)):
        base = dh_fiber_volume(rs, (1, 2, 1), lam)
        d = sum(1 for a in rs.positive_roots if sum(c * x for c, x in zip(a.coroot, lam)) > 0)
        for k in range(1, 5):
            if dh_fiber_volume(rs, (1, 2, 1), tuple(k * x for x in lam)) != k**d * base:
                bad.append(("scaling", lam, k))
    return not bad, f"{n} weights" + (f"; mismatches {bad[:3]}" if bad else "")


def check_rees():
    from .degen import builtin, fiber, image_faces, initial_ideal_summary, original_generators, restrict_to_subspace, subfamily_ideal

    fam = builtin("sl3-string-121").family
    if not all(m >= 1 for row in fam.t_exponents for m in row):
        return False, "t-exponent below 1"
    if fiber(fam, 1) != original_generators(fam):
        return False, "fiber at t=1 differs from the relations"
    initial_ideal_summary(fam)
    vd = fam.valuation
    for face in image_faces(fam):
        sub = subfamily_ideal(fam, face)
        for j, poly in enumerate(fam.polynomials()):
            if j in sub.kept:
                continue
            if restrict_to_subspace(poly, sub.vanishing):
                return False, f"relation {j} survives on a face subspace"
        expected = [i for i, g in enumerate(vd.generators) if not face.contains(g.c_weight)]
        if list(sub.vanishing) != expected:
            return False, "vanishing split mismatch"
    return True, f"e={list(fam.e)}, t-exponents {[list(r) for r in fam.t_exponents]}"


def _hyperbola_starts(k: int = 10):
    rng = np.random.default_rng(7)
    out = []
    for _ in range(k):
        r = rng.uniform(0.5, 2.0)
        th = rng.uniform(0, 2 * np.pi)
        z1 = r * np.exp(1j * th)
        out.append(np.array([z1, 1 / z1, 1.0], dtype=complex))
    return out


def check_flow():
    from .degen import builtin
    from .ghflow import NumericFamily, check_invariants, integrate, limit_point

    fam = NumericFamily.from_family(builtin("hyperbola").family)
    worst = {"pi": 0.0, "psi": 0.0, "res": 0.0, "omega": 0.0, "lim_res": 0.0, "lim_psi": 0.0}
    for x in _hyperbola_starts():
        tr = integrate(fam, x, 0.05)
        inv = check_invariants(tr, fam)
        worst["pi"] = max(worst["pi"], inv.pi_drift)
        worst["psi"] = max(worst["psi"], inv.psi_drift)
        worst["res"] = max(worst["res"], inv.residual)
        worst["omega"] = max(worst["omega"], inv.omega_drift)
        lim = limit_point(fam, x)
        worst["lim_res"] = max(worst["lim_res"], lim.residual)
        worst["lim_psi"] = max(worst["lim_psi"], float(np.max(np.abs(fam.psi(lim.z) - fam.psi(x)))))
    ok = (
        worst["pi"] < 1e-9
        and worst["psi"] < 1e-6
        and worst["res"] < 1e-8
        and worst["omega"] < 1e-4
        and worst["lim_res"] < 1e-5
        and worst["lim_psi"] < 1e-5
    )
    return ok, ", ".join(f"{k}={v:.2e}" for k, v in worst.items())


def check_field_value():
    from .degen import builtin
    from .ghflow import NumericFamily, gh_vector_field

    fam = NumericFamily.from_family(builtin("hyperbola").family)
    v = gh_vector_field(fam, np.array([1, 1, 1], dtype=complex))
    err = float(np.max(np.abs(v - np.array([-0.5, -0.5, -1.0]))))
    return err < 1e-12, f"max error {err:.2e}"


def check_width():
    from .rootsys import build_root_system
    from .width import ell_lambda, orbit_polytope, simplex_embedding

    rs = build_root_system("A2")
    p03 = orbit_polytope(rs, (1, 2, 1), (0, 3))
    p23 = orbit_polytope(rs, (1, 2, 1), (2, 3))
    l03, l23 = ell_lambda(rs, (0, 3)), ell_lambda(rs, (2, 3))
    a = simplex_embedding(p03, l03)
    b = simplex_embedding(p23, l23)
    c = simplex_embedding(p03, l03 + 1)
    ok = (
        l03 == 3
        and l23 == 2
        and a.status == "found"
        and b.status == "found"
        and c.status == "none"
        and any("volume obstruction" in n for n in c.notes)
    )
    return ok, f"ell(0,3)={l03}, ell(2,3)={l23}, size 4 at (0,3): {c.status}"


def _random_cone(rng: random.Random):
    d = rng.randint(1, 4)
    k = rng.randint(1, 6)
    rows = [tuple(Fraction(rng.randint(-3, 3)) for _ in range(d)) for _ in range(k)]
    return rows, d


def check_polyhedra():
    from .polyhedra import cone_from_inequalities, cone_from_rays, ehrhart_fit, faces
    from .rootsys import build_root_system
    from .strings import string_polytope

    rng = random.Random(11)
    for _ in range(100):
        rows, d = _random_cone(rng)
        cone = cone_from_inequalities(rows, dim=d)
        gens = list(cone.rays) + list(cone.lineality) + [tuple(-x for x in l) for l in cone.lineality]
        back = cone_from_rays(gens, d)
        if not cone.same_point_set(back):
            return False, f"round trip failed for {rows}"
        if not cone.lineality:
            lat = faces(cone)
            for i, j in lat.relations():
                if not set(lat.faces[i].cone.rays) <= set(lat.faces[j].cone.rays):
                    return False, "face order inconsistent"
    rs = build_root_system("A2")
    for lam in ((1, 1), (0, 1), (1, 2)):
        p = string_polytope(rs, (1, 2, 1), lam)
        ks = list(range(1, 6))
        counts = [p.dilate(k).count_lattice_points() for k in ks]
        coeffs = ehrhart_fit([1] + counts, [0] + ks)
        deg = max(i for i, c in enumerate(coeffs) if c != 0)
        if deg != p.dim or coeffs[deg] != p.volume():
            return False, f"Ehrhart mismatch at {lam}"
    return True, "100 random cones, Ehrhart fits exact"


def check_valuations():
    from dataclasses import replace

    from .degen import builtin
    from .strings import Generator, good_valuation_check

    ok = True
    details = []
    for name in ("sl2", "sl3-string-121"):
        vd = builtin(name).family.valuation
        rep = good_valuation_check(vd)
        ok &= rep.passed
        details.append(f"{name}: {'pass' if rep.passed else 'fail'}")
    vd = builtin("sl3-string-121").family.valuation
    g0 = vd.generators[0]
    zero_c = replace(vd, generators=vd.generators + (Generator("bad", g0.v[:3] + (0, 0), g0.a_weight, (0, 0)),))
    caught1 = good_valuation_check(zero_c)["properness"].passed is False
    wrong_c = replace(vd, generators=(Generator(g0.name, g0.v, g0.a_weight, (0, 1)),) + vd.generators[1:])
    caught2 = good_valuation_check(wrong_c)["v4-c-compatibility"].passed is False
    details.append(f"violations detected: {caught1}, {caught2}")
    return ok and caught1 and caught2, "; ".join(details)


CHECKS = {
    "1-littelmann-counts": check_counts,
    "2-duistermaat-heckman": check_dh,
    "3-rees-family": check_rees,
    "4-flow-invariants": check_flow,
    "5-vector-field-value": check_field_value,
    "6-gromov-width": check_width,
    "7-polyhedra": check_polyhedra,
    "8-valuation-axioms": check_valuations,
}


def run_one(name: str) -> CheckResult:
    return _timed(name, CHECKS[name])


def run_all(jobs: int = 1) -> list[CheckResult]:
    names = list(CHECKS)
    if jobs <= 1:
        return [run_one(n) for n in names]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(run_one, names))
