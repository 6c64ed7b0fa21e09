"""Exact rational polyhedral cones and polytopes.

Cones are stored by inequalities ``<u, x> >= 0``; their rays and lineality
space are computed by the double description method in input order, so the
output is reproducible.  Polytopes arise as affine slices of cones.
Everything here is exact: Fractions and Python ints only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Iterable, Sequence

from . import exact
from .exact import Vector, dot, frac, primitive


class PolyhedraError(ValueError):
    pass


class MixedLatticeError(PolyhedraError):
    pass


class UnboundedFiberError(PolyhedraError):
    pass


class NotStronglyConvexError(PolyhedraError):
    pass


@dataclass(frozen=True)
class LatticeVector:
    coords: Vector
    lattice: str = "Z"

    def __init__(self, coords: Iterable, lattice: str = "Z"):
        object.__setattr__(self, "coords", exact.vec(coords))
        object.__setattr__(self, "lattice", lattice)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


@dataclass(frozen=True)
class LinearMap:
    """Rational matrix between named lattices (rows index the codomain)."""

    matrix: tuple[Vector, ...]
    domain: str = "L"
    codomain: str = "Lambda"

    def __init__(self, matrix, domain: str = "L", codomain: str = "Lambda"):
        rows = tuple(exact.vec(r) for r in matrix)
        if rows and len({len(r) for r in rows}) != 1:
            raise PolyhedraError("ragged matrix")
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.matrix), (len(self.matrix[0]) if self.matrix else 0)

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.matrix for x in r)

    def is_surjective(self) -> bool:
        """Surjective as a map of lattices Z^n -> Z^k."""
        if not self.is_integral:
            return False
        k, n = self.shape
        if exact.rank(self.matrix) != k:
            return False
        # onto Z^k iff every unit vector has an integer preimage
        return all(
            exact.integer_solution(self.matrix, [int(i == j) for j in range(k)]) is not None
            for i in range(k)
        )

    def __call__(self, x: Sequence) -> Vector:
        x = exact.vec(x)
        return tuple(dot(r, x) for r in self.matrix)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)],
            self.domain,
            self.codomain,
        )

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self ∘ other``."""
        cols = list(zip(*other.matrix))
        return LinearMap(
            [[dot(r, c) for c in cols] for r in self.matrix], other.domain, self.codomain
        )


# ---------------------------------------------------------------------------
# double description


def _canon_lineality(basis: Sequence[Vector], dim: int) -> list[tuple[int, ...]]:
    if not basis:
        return []
    red, _ = exact.rref(basis)
    return [primitive(r) for r in red]


def _reduce_mod(v: Sequence[Fraction], lin: Sequence[Sequence[int]]) -> Vector:
    """Orthogonal projection of ``v`` onto the complement of ``span(lin)``."""
    if not lin:
        return tuple(frac(x) for x in v)
    # Gram-Schmidt over Q
    ortho: list[Vector] = []
    for l in lin:
        w = [Fraction(x) for x in l]
        for o in ortho:
            c = dot(w, o) / dot(o, o)
            w = [a - c * b for a, b in zip(w, o)]
        ortho.append(tuple(w))
    out = [frac(x) for x in v]
    for o in ortho:
        c = dot(out, o) / dot(o, o)
        out = [a - c * b for a, b in zip(out, o)]
    return tuple(out)


def double_description(
    ineqs: Sequence[Vector], dim: int
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Extreme rays and lineality basis of ``{x : <u,x> >= 0 for u in ineqs}``.

    Inequalities are inserted in the given order.  Rays come back as
    primitive integer vectors reduced modulo the lineality space, sorted
    lexicographically.
    """
    lin: list[Vector] = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    rays: list[Vector] = []
    zsets: list[frozenset[int]] = []
    for k, u in enumerate(ineqs):
        u = exact.vec(u)
        vals = [dot(u, l) for l in lin]
        piv = next((i for i, v in enumerate(vals) if v != 0), None)
        if piv is not None:
            l0 = lin[piv]
            s = vals[piv]
            if s < 0:
                l0 = tuple(-x for x in l0)
                s = -s
            new_lin = []
            for i, l in enumerate(lin):
                if i == piv:
                    continue
                c = dot(u, l) / s
                new_lin.append(tuple(a - c * b for a, b in zip(l, l0)))
            new_rays = []
            for r in rays:
                c = dot(u, r) / s
                new_rays.append(tuple(a - c * b for a, b in zip(r, l0)))
            # adjusted old rays are tight at u; the new ray is not
            zsets = [z | {k} for z in zsets]
            rays = [tuple(Fraction(x) for x in primitive(r)) for r in new_rays]
            rays.append(tuple(Fraction(x) for x in primitive(l0)))
            zsets.append(frozenset(range(k)))  # lineality was tight at all earlier rows
            lin = new_lin
            continue
        vals = [dot(u, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in pos + zer]
        new_z = [zsets[i] for i in pos] + [zsets[i] | {k} for i in zer]
        if neg and pos:
            cand = [(p, n) for p in pos for n in neg]
            for p, n in cand:
                common = zsets[p] & zsets[n]
                adjacent = True
                for r in range(len(rays)):
                    if r != p and r != n and common <= zsets[r]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                w = tuple(vals[p] * a - vals[n] * b for a, b in zip(rays[n], rays[p]))
                new_rays.append(tuple(Fraction(x) for x in primitive(w)))
                new_z.append(common | {k})
        rays, zsets = new_rays, new_z
    lin_c = _canon_lineality(lin, dim)
    out = sorted({primitive(_reduce_mod(r, lin_c)) for r in rays})
    out = [r for r in out if any(r)]
    return out, lin_c


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class RationalCone:
    """Cone ``{x in R^dim : <u, x> >= 0}`` over a named lattice."""

    inequalities: tuple[Vector, ...]
    dim: int
    lattice: str = "Z"

    def __post_init__(self):
        for u in self.inequalities:
            if len(u) != self.dim:
                raise PolyhedraError("inequality length does not match ambient rank")

    @cached_property
    def _dd(self):
        return double_description(self.inequalities, self.dim)

    @property
    def rays(self) -> list[tuple[int, ...]]:
        return self._dd[0]

    @property
    def lineality(self) -> list[tuple[int, ...]]:
        return self._dd[1]

    @property
    def cone_dim(self) -> int:
        gens = [tuple(map(Fraction, r)) for r in self.rays + self.lineality]
        return exact.rank(gens) if gens else 0

    def contains(self, x: Sequence) -> bool:
        x = exact.vec(x)
        return all(dot(u, x) >= 0 for u in self.inequalities)

    def facet_inequalities(self) -> list[tuple[int, ...]]:
        """Irredundant H-representation recomputed from the V-representation.

        Equations of the linear span appear as a pair ``u, -u``.
        """
        gens = [tuple(map(Fraction, r)) for r in self.rays]
        for l in self.lineality:
            gens.append(tuple(map(Fraction, l)))
            gens.append(tuple(-Fraction(x) for x in l))
        drays, dlin = double_description(gens, self.dim)
        out = list(drays)
        for l in dlin:
            out.append(l)
            out.append(tuple(-x for x in l))
        return out

    def is_strongly_convex(self) -> bool:
        return not self.lineality

    def intersect(self, extra: Iterable[Sequence]) -> "RationalCone":
        return RationalCone(self.inequalities + tuple(exact.vec(u) for u in extra), self.dim, self.lattice)

    def same_point_set(self, other: "RationalCone") -> bool:
        """Mutual generator/inequality satisfaction."""
        if self.dim != other.dim:
            return False
        for a, b in ((self, other), (other, self)):
            for r in a.rays:
                if not b.contains(r):
                    return False
            for l in a.lineality:
                if not (b.contains(l) and b.contains([-x for x in l])):
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "lattice": self.lattice,
            "inequalities": [[exact.fmt(x) for x in u] for u in self.inequalities],
            "rays": [[str(x) for x in r] for r in self.rays],
            "lineality": [[str(x) for x in r] for r in self.lineality],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "RationalCone":
        if isinstance(data, str):
            data = json.loads(data)
        ineqs = [exact.vec(u) for u in data["inequalities"]]
        if "dim" in data:
            dim = int(data["dim"])
        elif ineqs:
            dim = len(ineqs[0])
        elif data.get("rays"):
            dim = len(data["rays"][0])
        else:
            raise PolyhedraError("cannot infer ambient rank")
        cone = cls(tuple(ineqs), dim, data.get("lattice", "Z"))
        for r in data.get("rays", []):
            if not cone.contains(r):
                raise PolyhedraError("cached ray violates an inequality")
        return cone


def cone_from_inequalities(ineqs: Sequence, dim: int | None = None, lattice: str | None = None) -> RationalCone:
    """Build a cone from inequalities ``<u, x> >= 0``.

    ``ineqs`` may hold LatticeVectors (all in one lattice) or plain sequences.
    ``dim`` is required only when ``ineqs`` is empty.
    """
    lattices = {u.lattice for u in ineqs if isinstance(u, LatticeVector)}
    if len(lattices) > 1:
        raise MixedLatticeError(f"inequalities live in different lattices: {sorted(lattices)}")
    vecs = [exact.vec(u) for u in ineqs]
    if dim is None:
        if not vecs:
            raise PolyhedraError("dim is required for an empty inequality list")
        dim = len(vecs[0])
    if lattice is None:
        lattice = lattices.pop() if lattices else "Z"
    return RationalCone(tuple(vecs), dim, lattice)


def cone_from_rays(rays: Sequence[Sequence], dim: int | None = None, lattice: str = "Z") -> RationalCone:
    """H-representation of the cone generated by ``rays``."""
    gens = [exact.vec(r) for r in rays]
    if dim is None:
        dim = len(gens[0])
    if not gens:
        # the zero cone
        ineqs = []
        for i in range(dim):
            e = [0] * dim
            e[i] = 1
            ineqs += [tuple(map(Fraction, e)), tuple(Fraction(-x) for x in e)]
        return RationalCone(tuple(ineqs), dim, lattice)
    drays, dlin = double_description(gens, dim)
    ineqs = [tuple(map(Fraction, r)) for r in drays]
    for l in dlin:
        ineqs.append(tuple(map(Fraction, l)))
        ineqs.append(tuple(-Fraction(x) for x in l))
    return RationalCone(tuple(ineqs), dim, lattice)


def is_strongly_convex(cone: RationalCone) -> bool:
    """True iff the lineality space is zero."""
    return cone.is_strongly_convex()


def zero_is_positive_combination(vectors: Sequence[Sequence]) -> bool:
    """Whether 0 is a non-trivial nonnegative combination of ``vectors``.

    Equivalent to the generated cone having a nonzero lineality space; a zero
    vector is itself a witness.
    """
    vs = [exact.vec(v) for v in vectors]
    if not vs:
        return False
    if any(all(x == 0 for x in v) for v in vs):
        return True
    return bool(cone_from_rays(vs, len(vs[0])).lineality)


# ---------------------------------------------------------------------------
# faces


@dataclass(frozen=True)
class Face:
    cone: RationalCone
    codim: int
    ray_indices: frozenset[int]


@dataclass
class FaceLattice:
    parent: RationalCone
    faces: list[Face]

    def index(self, ray_indices: Iterable[int]) -> int:
        key = frozenset(ray_indices)
        for i, f in enumerate(self.faces):
            if f.ray_indices == key:
                return i
        raise KeyError("not a face")

    def leq(self, i: int, j: int) -> bool:
        """Closure order: face i is contained in face j."""
        return self.faces[i].ray_indices <= self.faces[j].ray_indices

    def relations(self) -> list[tuple[int, int]]:
        n = len(self.faces)
        return [(i, j) for i in range(n) for j in range(n) if i != j and self.leq(i, j)]

    def __len__(self) -> int:
        return len(self.faces)


def faces(cone: RationalCone) -> FaceLattice:
    """Complete face lattice of a strongly convex cone, ``{0}`` included.

    Faces are ordered by decreasing dimension, then by their sorted ray
    index tuples.
    """
    if cone.lineality:
        raise NotStronglyConvexError("face lattice requires a strongly convex cone")
    rays = [tuple(map(Fraction, r)) for r in cone.rays]
    ineqs = list(cone.inequalities)
    full = frozenset(range(len(rays)))
    tight = {
        i: frozenset(j for j, r in enumerate(rays) if dot(u, r) == 0) for i, u in enumerate(ineqs)
    }
    seen = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for f in frontier:
            subs = {f & t for t in tight.values()} - {f}
            for s in subs:
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    # closure under intersection of tight sets already gives every face; the
    # empty set is the apex
    seen.add(frozenset())
    d = cone.cone_dim

    def fdim(s):
        return exact.rank([rays[i] for i in s]) if s else 0

    out = []
    for s in seen:
        eqs = [u for i, u in enumerate(ineqs) if s <= tight[i]]
        extra = [tuple(-x for x in u) for u in eqs]
        fc = RationalCone(cone.inequalities + tuple(extra), cone.dim, cone.lattice)
        out.append(Face(fc, d - fdim(s), s))
    out.sort(key=lambda f: (f.codim, sorted(f.ray_indices)))
    return FaceLattice(cone, out)


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class RationalPolytope:
    """``{x : <u,x> >= b for (u,b) in inequalities, <u,x> = b for equations}``.

    Must be bounded; the empty polytope (dimension -1) is allowed.
    """

    ambient_dim: int
    inequalities: tuple[tuple[Vector, Fraction], ...]
    equations: tuple[tuple[Vector, Fraction], ...] = ()
    lattice: str = "Z"

    @cached_property
    def _homog(self) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
        n = self.ambient_dim
        rows = []
        for u, b in self.inequalities:
            rows.append(tuple(u) + (-b,))
        for u, b in self.equations:
            rows.append(tuple(u) + (-b,))
            rows.append(tuple(-x for x in u) + (b,))
        rows.append(tuple([Fraction(0)] * n + [Fraction(1)]))
        return double_description(rows, n + 1)

    @cached_property
    def vertices(self) -> list[Vector]:
        rays, lin = self._homog
        if lin or any(r[-1] == 0 for r in rays):
            raise UnboundedFiberError("polytope is unbounded")
        verts = sorted({tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in rays if r[-1] > 0})
        return verts

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @cached_property
    def _hull(self) -> tuple[Vector, list[tuple[int, ...]], int]:
        """(base point, direction-lattice basis, dim) of the affine hull."""
        v = self.vertices
        n = self.ambient_dim
        if not v:
            return (), [], -1
        diffs = [tuple(a - b for a, b in zip(w, v[0])) for w in v[1:]]
        d = exact.rank(diffs) if diffs else 0
        normals = exact.nullspace(diffs, n) if diffs else exact.nullspace([], n)
        basis = exact.integer_kernel(normals, n) if normals else exact.integer_kernel([], n)
        if d == 0:
            basis = []
        return v[0], basis, d

    @property
    def dim(self) -> int:
        return self._hull[2]

    @property
    def direction_basis(self) -> list[tuple[int, ...]]:
        return self._hull[1]

    def affine_equations(self) -> list[tuple[Vector, Fraction]]:
        base, basis, d = self._hull
        if d < 0:
            return []
        n = self.ambient_dim
        normals = exact.nullspace([tuple(map(Fraction, b)) for b in basis], n) if basis else exact.nullspace([], n)
        return [(u, dot(u, base)) for u in normals]

    def contains(self, x: Sequence) -> bool:
        x = exact.vec(x)
        return all(dot(u, x) >= b for u, b in self.inequalities) and all(
            dot(u, x) == b for u, b in self.equations
        )

    def dilate(self, k) -> "RationalPolytope":
        k = frac(k)
        return RationalPolytope(
            self.ambient_dim,
            tuple((u, b * k) for u, b in self.inequalities),
            tuple((u, b * k) for u, b in self.equations),
            self.lattice,
        )

    # -- affine-hull coordinates -------------------------------------------------

    def _local(self):
        """Polytope in coordinates of its direction lattice.

        Returns (origin, basis, local_vertices, local_inequalities) where
        ``x = origin + sum y_i basis_i``.  ``origin`` is a lattice point of the
        affine hull when one exists, else a rational vertex and the flag
        ``has_lattice_origin`` false.
        """
        base, basis, d = self._hull
        eqs = self.affine_equations()
        origin = None
        if eqs:
            sol = exact.integer_solution([u for u, _ in eqs], [b for _, b in eqs])
            if sol is not None:
                origin = exact.vec(sol)
        else:
            origin = tuple(Fraction(0) for _ in range(self.ambient_dim))
        lattice_origin = origin is not None
        if origin is None:
            origin = base
        B = [tuple(map(Fraction, b)) for b in basis]
        # left inverse through the normal equations
        if B:
            gram = [[dot(a, b) for b in B] for a in B]
            inv = _inverse(gram)

            def to_local(x):
                diff = [a - b for a, b in zip(x, origin)]
                proj = [dot(b, diff) for b in B]
                return tuple(dot(row, proj) for row in inv)
        else:

            def to_local(x):
                return ()

        verts = [to_local(v) for v in self.vertices]
        local_ineqs = []
        for u, b in self.inequalities:
            lu = tuple(dot(u, bb) for bb in B)
            lb = b - dot(u, origin)
            if any(lu):
                local_ineqs.append((lu, lb))
        return origin, B, verts, local_ineqs, lattice_origin

    def lattice_points(self) -> list[tuple[int, ...]]:
        """All points of the ambient lattice in the polytope, sorted."""
        if self.is_empty:
            return []
        origin, B, verts, local_ineqs, lattice_origin = self._local()
        if not lattice_origin:
            return []
        d = len(B)
        if d == 0:
            pt = origin
            return [tuple(int(x) for x in pt)] if all(x.denominator == 1 for x in pt) else []
        from .kernels import enumerate_points

        levels = _projection_levels(verts, d)
        local = enumerate_points(levels, d)
        pts = []
        for y in local:
            x = tuple(o + sum(yi * b[i] for yi, b in zip(y, B)) for i, o in enumerate(origin))
            pts.append(tuple(int(c) for c in x))
        pts.sort()
        return pts

    def count_lattice_points(self) -> int:
        if self.is_empty:
            return 0
        origin, B, verts, _, lattice_origin = self._local()
        if not lattice_origin:
            return 0
        if not B:
            return 1 if all(x.denominator == 1 for x in origin) else 0
        from .kernels import count_points

        return count_points(_projection_levels(verts, len(B)), len(B))

    def volume(self) -> Fraction:
        """Volume in the affine hull, fundamental cell of the direction lattice = 1."""
        if self.is_empty:
            return Fraction(0)
        _, B, verts, _, _ = self._local()
        d = len(B)
        if d == 0:
            return Fraction(1)
        total = Fraction(0)
        for simplex in _triangulate(verts, d):
            v0 = simplex[0]
            m = [[a - b for a, b in zip(v, v0)] for v in simplex[1:]]
            total += abs(exact.det(m))
        return total / factorial(d)

    def to_json(self) -> dict:
        return {
            "lattice": self.lattice,
            "ambient_dim": self.ambient_dim,
            "inequalities": [[exact.fmt(x) for x in u] + [exact.fmt(b)] for u, b in self.inequalities],
            "equations": [[exact.fmt(x) for x in u] + [exact.fmt(b)] for u, b in self.equations],
            "vertices": [[exact.fmt(x) for x in v] for v in self.vertices],
            "dim": self.dim,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "RationalPolytope":
        if isinstance(data, str):
            data = json.loads(data)
        ineqs = tuple((exact.vec(r[:-1]), frac(r[-1])) for r in data["inequalities"])
        eqs = tuple((exact.vec(r[:-1]), frac(r[-1])) for r in data.get("equations", []))
        return cls(int(data["ambient_dim"]), ineqs, eqs, data.get("lattice", "Z"))


def _inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    red, piv = exact.rref(aug)
    if piv[:n] != list(range(n)):
        raise PolyhedraError("singular matrix")
    return [r[n:] for r in red]


def _projection_levels(verts: list[Vector], d: int):
    """Integer H-representations of the projections onto the first k coordinates.

    Level k holds rows ``(a_1..a_k, b)`` meaning ``a . y >= b``; used to bound
    coordinate k given the first k-1.
    """
    levels = []
    for k in range(1, d + 1):
        pts = sorted({v[:k] for v in verts})
        gens = [(Fraction(1),) + p for p in pts]
        drays, dlin = double_description(gens, k + 1)
        rows = [r for r in drays]
        for l in dlin:
            rows.append(l)
            rows.append(tuple(-x for x in l))
        lev = []
        for r in rows:
            # r . (1, y) >= 0  ->  r[1:] . y >= -r[0]
            if r[k] == 0:
                continue
            lev.append((tuple(int(x) for x in r[1:]), -int(r[0])))
        levels.append(lev)
    return levels


def _triangulate(verts: list[Vector], d: int) -> list[list[Vector]]:
    """Pulling triangulation of a full-dimensional polytope given by vertices."""
    idx = list(range(len(verts)))
    return [[verts[i] for i in s] for s in _pull(verts, idx, d)]


def _facets_of(verts: list[Vector], idx: list[int], d: int) -> list[list[int]]:
    """Facets (as vertex index lists) of conv(verts[idx]) of dimension d."""
    if d == 1:
        # endpoints of a segment: extreme points along its direction
        p0 = verts[idx[0]]
        dirv = next(
            tuple(a - b for a, b in zip(verts[i], p0)) for i in idx if verts[i] != p0
        )
        key = {i: dot(verts[i], dirv) for i in idx}
        lo = min(key.values())
        hi = max(key.values())
        return [[i for i in idx if key[i] == lo], [i for i in idx if key[i] == hi]]
    # express in local affine coordinates then use the dual description
    p0 = verts[idx[0]]
    diffs = [tuple(a - b for a, b in zip(verts[i], p0)) for i in idx]
    red, piv = exact.rref(diffs)
    basis = red  # rows spanning the affine directions (d rows)
    coords = {}
    for i, df in zip(idx, diffs):
        coords[i] = tuple(df[p] for p in piv)
    gens = [(Fraction(1),) + coords[i] for i in idx]
    drays, dlin = double_description(gens, d + 1)
    assert not dlin
    out = []
    for r in drays:
        r = tuple(map(Fraction, r))
        f = [i for i in idx if dot(r, (Fraction(1),) + coords[i]) == 0]
        out.append(f)
    return out


def _pull(verts: list[Vector], idx: list[int], d: int) -> list[list[int]]:
    if len(idx) == d + 1:
        return [list(idx)]
    apex = idx[0]
    out = []
    for f in _facets_of(verts, idx, d):
        if apex in f:
            continue
        for s in _pull(verts, f, d - 1):
            out.append([apex] + s)
    return out


# ---------------------------------------------------------------------------
# slices


def slice_cone(cone: RationalCone, c: LinearMap, lam: Sequence) -> RationalPolytope:
    """The fiber ``c^{-1}(lam) ∩ cone`` as a polytope in the ambient lattice."""
    if not c.is_integral:
        raise PolyhedraError("slice map must be integral")
    k, n = c.shape
    if n != cone.dim:
        raise PolyhedraError("slice map domain does not match cone")
    lam = exact.vec(lam)
    if len(lam) != k:
        raise PolyhedraError("fiber value has wrong length")
    if not c.is_surjective():
        raise PolyhedraError("slice map must be surjective")
    rec = cone.intersect(list(c.matrix) + [tuple(-x for x in r) for r in c.matrix])
    if rec.rays or rec.lineality:
        raise UnboundedFiberError("fibers of the slice map are unbounded on this cone")
    return RationalPolytope(
        cone.dim,
        tuple((u, Fraction(0)) for u in cone.inequalities),
        tuple((r, b) for r, b in zip(c.matrix, lam)),
        cone.lattice,
    )


def lattice_points(p: RationalPolytope) -> list[tuple[int, ...]]:
    return p.lattice_points()


def volume(p: RationalPolytope) -> Fraction:
    return p.volume()


def box(lo: Sequence, hi: Sequence) -> RationalPolytope:
    """Axis-aligned box; handy for tests and examples."""
    n = len(lo)
    ineqs = []
    for i in range(n):
        e = [Fraction(int(i == j)) for j in range(n)]
        ineqs.append((tuple(e), frac(lo[i])))
        ineqs.append((tuple(-x for x in e), -frac(hi[i])))
    return RationalPolytope(n, tuple(ineqs))


def simplex(size, d: int) -> RationalPolytope:
    """``{x >= 0, sum x <= size}`` in R^d."""
    ineqs = []
    for i in range(d):
        ineqs.append((tuple(Fraction(int(i == j)) for j in range(d)), Fraction(0)))
    ineqs.append((tuple(Fraction(-1) for _ in range(d)), -frac(size)))
    return RationalPolytope(d, tuple(ineqs))


def ehrhart_fit(counts: Sequence[int], ks: Sequence[int]) -> list[Fraction]:
    """Coefficients (constant first) of the interpolating polynomial through (k, count)."""
    n = len(ks)
    rows = [[Fraction(k) ** j for j in range(n)] for k in ks]
    sol = exact.solve(rows, [Fraction(c) for c in counts])
    assert sol is not None
    return list(sol)


__all__ = [
    "LatticeVector",
    "LinearMap",
    "RationalCone",
    "RationalPolytope",
    "FaceLattice",
    "Face",
    "PolyhedraError",
    "MixedLatticeError",
    "UnboundedFiberError",
    "NotStronglyConvexError",
    "cone_from_inequalities",
    "cone_from_rays",
    "double_description",
    "faces",
    "is_strongly_convex",
    "slice_cone",
    "lattice_points",
    "volume",
    "box",
    "simplex",
    "zero_is_positive_combination",
    "ehrhart_fit",
]
