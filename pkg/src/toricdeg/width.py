"""Gromov-width lower bounds for coadjoint orbits via simplices in string polytopes.

``ell_lambda`` is the smallest positive pairing of ``lambda`` with a positive
coroot.  A lattice simplex of that size embedded by an integral-affine map
into the orbit's string polytope certifies the bound.  The orbit volume
(Weyl product) and the fiber volume of the string polytope are computed
independently and compared exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from . import exact
from .exact import dot, frac
from .polyhedra import RationalPolytope, _projection_levels
from .kernels import enumerate_points
from .rootsys import NotDominantError, RootSystem, as_weight, pairing
from .strings import string_polytope


class WidthError(ValueError):
    pass


class PointOrbitError(WidthError):
    pass


def ell_lambda(rs: RootSystem, lam) -> Fraction:
    lam = as_weight(rs, lam)
    if any(x < 0 for x in lam):
        raise NotDominantError(f"{lam} is not dominant")
    pos = [p for p in (pairing(rs, lam, a) for a in rs.positive_roots) if p > 0]
    if not pos:
        raise PointOrbitError("orbit is a point (width 0)")
    return min(pos)


def orbit_polytope(rs: RootSystem, word: Sequence[int], lam) -> RationalPolytope:
    return string_polytope(rs, word, lam)


def orbit_volume(rs: RootSystem, lam) -> Fraction:
    """Symplectic volume of the orbit, normalized so the string polytope has equal volume."""
    lam = as_weight(rs, lam)
    if any(x < 0 for x in lam):
        raise NotDominantError(f"{lam} is not dominant")
    num = Fraction(1)
    den = Fraction(1)
    for a in rs.positive_roots:
        p = pairing(rs, lam, a)
        if p > 0:
            num *= p
            den *= sum(a.coroot)
    return num / den


def dh_fiber_volume(rs: RootSystem, word: Sequence[int], lam) -> Fraction:
    return orbit_polytope(rs, word, lam).volume()


# ---------------------------------------------------------------------------
# simplex search


@dataclass(frozen=True)
class SimplexCertificate:
    size: Fraction
    matrix: tuple[tuple[int, ...], ...]  # local d x d unimodular
    translation: tuple[int, ...]  # local
    ambient_vertices: tuple[tuple[Fraction, ...], ...]

    def to_json(self) -> dict:
        return {
            "size": exact.fmt(self.size),
            "matrix": [list(r) for r in self.matrix],
            "translation": list(self.translation),
            "vertices": [[exact.fmt(x) for x in v] for v in self.ambient_vertices],
        }


@dataclass
class EmbeddingResult:
    status: str  # "found", "none", "inconclusive"
    certificate: SimplexCertificate | None = None
    notes: list[str] = field(default_factory=list)
    matrices_tried: int = 0

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "notes": list(self.notes),
            "matrices_tried": self.matrices_tried,
        }


def _elementary(d: int) -> list[np.ndarray]:
    out = []
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            for s in (1, -1):
                m = np.eye(d, dtype=np.int64)
                m[i, j] = s
                out.append(m)
    return out


def _signed_permutations(d: int) -> list[np.ndarray]:
    out = []
    for perm in itertools.permutations(range(d)):
        for signs in itertools.product((1, -1), repeat=d):
            m = np.zeros((d, d), dtype=np.int64)
            for i, (p, s) in enumerate(zip(perm, signs)):
                m[i, p] = s
            out.append(m)
    return out


def unimodular_candidates(d: int, depth: int = 3) -> list[np.ndarray]:
    """Products of at most ``depth`` elementary matrices times signed permutations.

    Canonical order: by number of elementary factors, then generation order.
    Duplicates are dropped.
    """
    elem = _elementary(d)
    layer = [np.eye(d, dtype=np.int64)]
    words = list(layer)
    for _ in range(depth):
        layer = [a @ e for a in layer for e in elem]
        words.extend(layer)
    seen = set()
    out = []
    perms = _signed_permutations(d)
    for w in words:
        for p in perms:
            m = w @ p
            key = m.tobytes()
            if key not in seen:
                seen.add(key)
                out.append(m)
    return out


def simplex_embedding(
    polytope: RationalPolytope,
    ell,
    delta=0,
    depth: int = 3,
    max_dim: int = 4,
    max_box: int = 20,
    max_matrices: int = 2_000_000,
) -> EmbeddingResult:
    """Search for ``T + U * (s * standard simplex)`` inside the polytope, ``s = ell - delta``."""
    if polytope.is_empty:
        raise WidthError("polytope is empty")
    s = frac(ell) - frac(delta)
    if s < 0:
        raise WidthError("simplex size must be nonnegative")
    origin, B, verts, ineqs, lattice_origin = polytope._local()
    d = len(B)
    res = EmbeddingResult("none")
    vol = polytope.volume()
    need = s**d / factorial(d)
    if need > vol:
        res.notes.append(f"volume obstruction: size^d/d! = {exact.fmt(need)} > volume {exact.fmt(vol)}")
    if not lattice_origin:
        res.notes.append("affine hull contains no lattice point")
        return res
    if d == 0:
        if s == 0:
            res.status = "found"
            res.certificate = SimplexCertificate(s, (), (), (tuple(origin),))
        return res
    lo = [min(v[i] for v in verts) for i in range(d)]
    hi = [max(v[i] for v in verts) for i in range(d)]
    width = max(h - l for h, l in zip(hi, lo))
    if d > max_dim or width > max_box:
        res.status = "inconclusive"
        res.notes.append(f"search space cap: dim {d}, bounding box width {exact.fmt(width)}")
        return res
    pts = enumerate_points(_projection_levels(verts, d), d)
    if not pts:
        return res
    # integer inequalities A y >= b in local coordinates
    rows = []
    for u, b in ineqs:
        den = 1
        for x in tuple(u) + (b,):
            den = den * x.denominator // np.gcd(den, x.denominator)
        rows.append(([int(x * den) for x in u], b * den))
    A = np.array([r[0] for r in rows], dtype=np.int64)
    b_exact = [r[1] for r in rows]
    X = np.array(pts, dtype=np.int64)
    AX = X @ A.T  # (N, F)
    # scale by the denominator of s so thresholds stay integral
    sden = s.denominator
    AXs = AX * sden
    bs = np.array([int(np.ceil(bb * sden)) if (bb * sden).denominator != 1 else int(bb * sden) for bb in b_exact], dtype=np.int64)
    cands = unimodular_candidates(d, depth)
    if len(cands) > max_matrices:
        res.status = "inconclusive"
        res.notes.append(f"{len(cands)} candidate matrices exceed the cap {max_matrices}")
        return res
    snum = s.numerator
    for k, U in enumerate(cands):
        AU = A @ U  # (F, d); column i is A applied to U e_i
        shift = snum * np.minimum(AU.min(axis=1), 0)
        ok = np.all(AXs + shift[None, :] >= bs[None, :], axis=1)
        idx = np.flatnonzero(ok)
        if idx.size:
            T = tuple(int(x) for x in X[idx[0]])
            cert = _certificate(origin, B, U, T, s, d)
            if not all(polytope.contains(v) for v in cert.ambient_vertices):
                raise WidthError("internal error: certificate vertex outside polytope")
            res.status = "found"
            res.certificate = cert
            res.matrices_tried = k + 1
            return res
    res.matrices_tried = len(cands)
    res.notes.append(f"exhaustive search over {len(cands)} unimodular matrices and {len(pts)} translations")
    return res


def _certificate(origin, B, U, T, s, d) -> SimplexCertificate:
    local = [tuple(Fraction(t) for t in T)]
    for i in range(d):
        local.append(tuple(Fraction(T[r]) + s * int(U[r, i]) for r in range(d)))
    amb = []
    for y in local:
        amb.append(tuple(o + sum(yi * bb[j] for yi, bb in zip(y, B)) for j, o in enumerate(origin)))
    return SimplexCertificate(
        s, tuple(tuple(int(x) for x in r) for r in U), T, tuple(amb)
    )


# ---------------------------------------------------------------------------
# report

UPPER_BOUND_NOTE = (
    "Upper bound ell_lambda is known from prior work for coadjoint orbits and is not computed here."
)


@dataclass
class WidthReport:
    lam: tuple[Fraction, ...]
    ell: Fraction
    polytope: RationalPolytope | None
    embedding: EmbeddingResult | None
    orbit_volume: Fraction
    fiber_volume: Fraction | None
    upper_bound_note: str = UPPER_BOUND_NOTE
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "lambda": [exact.fmt(x) for x in self.lam],
            "ell": exact.fmt(self.ell),
            "orbit_volume": exact.fmt(self.orbit_volume),
            "fiber_volume": None if self.fiber_volume is None else exact.fmt(self.fiber_volume),
            "volumes_agree": self.fiber_volume == self.orbit_volume,
            "polytope": None if self.polytope is None else self.polytope.to_json(),
            "embedding": None if self.embedding is None else self.embedding.to_json(),
            "upper_bound_note": self.upper_bound_note,
        }
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def width_report(rs: RootSystem, word: Sequence[int], lam, delta=0, depth: int = 3) -> WidthReport:
    lam = as_weight(rs, lam)
    poly = orbit_polytope(rs, word, lam)
    fvol = poly.volume()
    ovol = orbit_volume(rs, lam)
    try:
        ell = ell_lambda(rs, lam)
    except PointOrbitError:
        return WidthReport(lam, Fraction(0), poly, None, ovol, fvol, warnings=["orbit is a point; width 0"])
    emb = simplex_embedding(poly, ell, delta, depth=depth)
    return WidthReport(lam, ell, poly, emb, ovol, fvol)
