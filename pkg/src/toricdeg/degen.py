"""Rees-algebra families built from valuation data.

A relation ``g = gbar + p`` among the generators has a leading part ``gbar``
whose monomials all take one value ``s`` and a lower part ``p`` whose
monomials take strictly smaller values.  An integer functional ``e`` with
``e(v(f_i)) >= 0`` turns each lower monomial ``M`` into ``t^m M`` with
``m = e(s) - e(v(M)) >= 1``.  At ``t = 1`` the relation is recovered; at
``t = 0`` only ``gbar`` survives and the fiber is toric.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from . import exact
from .exact import dot, frac
from .polyhedra import LinearMap, RationalCone, double_description
from .strings import (
    Generator,
    NotAFaceError,
    OrderSpec,
    ValuationData,
    _is_face_of,
    image_cone,
)
from .rootsys import build_root_system

Term = tuple[Fraction, tuple[int, ...]]


class DegenError(ValueError):
    pass


class NotRefinableError(DegenError):
    pass


class IntegrityError(DegenError):
    pass


def _terms(raw) -> tuple[Term, ...]:
    out = []
    for coef, exps in raw:
        out.append((frac(coef), tuple(int(x) for x in exps)))
    return tuple(out)


def monomial_value(vd: ValuationData, exps: Sequence[int]) -> tuple[int, ...]:
    vals = vd.values
    if len(exps) != len(vals):
        raise DegenError(f"exponent vector of length {len(exps)} for {len(vals)} generators")
    return tuple(sum(e * v[k] for e, v in zip(exps, vals)) for k in range(vd.dim))


@dataclass(frozen=True)
class Relation:
    leading: tuple[Term, ...]
    lower: tuple[Term, ...] = ()

    def __init__(self, leading, lower=()):
        object.__setattr__(self, "leading", _terms(leading))
        object.__setattr__(self, "lower", _terms(lower))
        if not self.leading:
            raise DegenError("relation without leading terms")

    def s(self, vd: ValuationData) -> tuple[int, ...]:
        return monomial_value(vd, self.leading[0][1])

    def validate(self, vd: ValuationData) -> None:
        s = self.s(vd)
        for _, ex in self.leading:
            if monomial_value(vd, ex) != s:
                raise IntegrityError(f"leading monomial {ex} has value {monomial_value(vd, ex)} != {s}")
        cs = vd.c_map(s)
        for _, ex in self.lower:
            w = monomial_value(vd, ex)
            if vd.c_map(w) != cs:
                raise IntegrityError(f"lower monomial {ex} changes the c-grading")
            if vd.compare(w, s) >= 0:
                raise IntegrityError(f"lower monomial {ex} is not below the leading value")

    def to_json(self) -> dict:
        return {
            "leading": [[exact.fmt(c), list(e)] for c, e in self.leading],
            "lower": [[exact.fmt(c), list(e)] for c, e in self.lower],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Relation":
        return cls(data["leading"], data.get("lower", []))


@dataclass(frozen=True)
class FamilyIdeal:
    """Family polynomials over E x C (coordinates ``z_1..z_n, t``).

    ``e is None`` marks a raw family whose ``t_exponents`` are given rather
    than derived from a valuation.
    """

    valuation: ValuationData
    relations: tuple[Relation, ...]
    e: tuple[int, ...] | None
    t_exponents: tuple[tuple[int, ...], ...]
    name: str = ""

    @property
    def n(self) -> int:
        return len(self.valuation.generators)

    @property
    def raw(self) -> bool:
        return self.e is None

    def polynomials(self) -> list[list[Term]]:
        """``ghat_j`` as sparse polynomials in ``(z, t)``."""
        out = []
        for rel, ms in zip(self.relations, self.t_exponents):
            poly = [(c, ex + (0,)) for c, ex in rel.leading]
            poly += [(c, ex + (m,)) for (c, ex), m in zip(rel.lower, ms)]
            out.append(poly)
        return out

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "valuation": self.valuation.to_json(),
            "relations": [r.to_json() for r in self.relations],
            "e": None if self.e is None else list(self.e),
            "t_exponents": [list(m) for m in self.t_exponents],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "FamilyIdeal":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            vd = ValuationData.from_json(data["valuation"])
            rels = tuple(Relation.from_json(r) for r in data["relations"])
            e = data.get("e")
            ms = tuple(tuple(int(x) for x in m) for m in data["t_exponents"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DegenError(f"malformed family: {exc}") from exc
        if len(ms) != len(rels) or any(len(m) != len(r.lower) for m, r in zip(ms, rels)):
            raise DegenError("t_exponents do not match the relations")
        if e is None:
            return cls(vd, rels, None, ms, data.get("name", ""))
        fam = rees_family(vd, rels, e, name=data.get("name", ""))
        if fam.t_exponents != ms:
            raise IntegrityError("t_exponents disagree with e")
        return fam


# ---------------------------------------------------------------------------
# choosing e


def _constraints(vd: ValuationData, relations: Sequence[Relation]):
    gen_rows = [tuple(map(Fraction, v)) for v in vd.values]
    strict = []
    for rel in relations:
        s = rel.s(vd)
        for _, ex in rel.lower:
            w = monomial_value(vd, ex)
            strict.append(tuple(Fraction(a - b) for a, b in zip(s, w)))
    return gen_rows, strict


def choose_e(vd: ValuationData, relations: Sequence[Relation]) -> tuple[int, ...]:
    """Integer functional with ``e(v_i) >= 0`` and ``e(s_j) - e(v(M)) >= 1``.

    Among feasible rational ``e`` (restricted to the span of the generator
    values) pick the lexicographic minimum of
    ``(sum_i e(v_i), e(v_1), ..., e(v_n))``, found exactly by vertex
    enumeration, then clear denominators.
    """
    for rel in relations:
        rel.validate(vd)
    d = vd.dim
    gen_rows, strict = _constraints(vd, relations)
    if not strict:
        return tuple([0] * d)
    # homogenized feasible region in (e, h): rows u.e - b h >= 0, h >= 0
    rows = [r + (Fraction(0),) for r in gen_rows]
    rows += [r + (Fraction(-1),) for r in strict]
    for k in exact.nullspace(gen_rows, d) if gen_rows else exact.nullspace([], d):
        rows.append(tuple(k) + (Fraction(0),))
        rows.append(tuple(-x for x in k) + (Fraction(0),))
    rows.append(tuple([Fraction(0)] * d + [Fraction(1)]))
    rays, _ = double_description(rows, d + 1)
    verts = [tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in rays if r[-1] > 0]
    if not verts:
        raise NotRefinableError("no functional e satisfies the strict inequalities (data not refinable)")

    def key(e):
        vals = [dot(v, e) for v in gen_rows]
        return (sum(vals, Fraction(0)),) + tuple(vals) + tuple(e)

    best = min(verts, key=key)
    den = lcm(*(x.denominator for x in best))
    return tuple(int(x * den) for x in best)


def rees_family(vd: ValuationData, relations: Sequence[Relation], e: Sequence[int], name: str = "") -> FamilyIdeal:
    relations = tuple(relations)
    e = tuple(int(x) for x in e)
    if len(e) != vd.dim:
        raise DegenError(f"e has length {len(e)}, expected {vd.dim}")
    for rel in relations:
        rel.validate(vd)
    for g in vd.generators:
        if sum(a * b for a, b in zip(e, g.v)) < 0:
            raise DegenError(f"e is negative on generator {g.name}")
    ms = []
    for rel in relations:
        es = sum(a * b for a, b in zip(e, rel.s(vd)))
        row = []
        for _, ex in rel.lower:
            m = es - sum(a * b for a, b in zip(e, monomial_value(vd, ex)))
            if m < 1:
                raise DegenError(f"e gives t-exponent {m} < 1")
            row.append(m)
        ms.append(tuple(row))
    return FamilyIdeal(vd, relations, e, tuple(ms), name)


def fiber(family: FamilyIdeal, t0) -> list[list[tuple]]:
    """Family polynomials with ``t = t0``; zero terms are dropped."""
    if isinstance(t0, float):
        one = 1.0
    else:
        t0 = frac(t0)
        one = Fraction(1)
    out = []
    for poly in family.polynomials():
        terms = []
        for c, ex in poly:
            m = ex[-1]
            w = c * (t0**m if m else one)
            if w != 0:
                terms.append((w, ex[:-1]))
        out.append(terms)
    return out


def original_generators(family: FamilyIdeal) -> list[list[Term]]:
    return [list(r.leading) + list(r.lower) for r in family.relations]


@dataclass
class InitialIdealReport:
    entries: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"homogeneous": True, "generators": self.entries}


def initial_ideal_summary(family: FamilyIdeal) -> InitialIdealReport:
    """Check that every ``t = 0`` generator is homogeneous in the value lattice."""
    rep = InitialIdealReport()
    vd = family.valuation
    for j, poly in enumerate(fiber(family, 0)):
        vals = {monomial_value(vd, ex) for _, ex in poly}
        if len(vals) != 1:
            raise IntegrityError(f"t=0 generator {j} mixes valuation values {sorted(vals)}")
        kind = {1: "monomial", 2: "binomial"}.get(len(poly), "multinomial")
        rep.entries.append(
            {"index": j, "terms": len(poly), "kind": kind, "value": list(vals.pop())}
        )
    return rep


# ---------------------------------------------------------------------------
# faces


@dataclass(frozen=True)
class Subfamily:
    kept: tuple[int, ...]  # relation indices
    vanishing: tuple[int, ...]  # generator indices

    def to_json(self, family: FamilyIdeal) -> dict:
        names = [g.name for g in family.valuation.generators]
        return {"kept_relations": list(self.kept), "vanishing": [names[i] for i in self.vanishing]}


def _in_cone(cone: RationalCone, x) -> bool:
    return cone.contains(x)


def subfamily_ideal(family: FamilyIdeal, face: RationalCone) -> Subfamily:
    """Relations with ``c(s_j)`` in the face, and generators whose c-weight is not."""
    vd = family.valuation
    img = image_cone(vd.value_cone(), vd.c_map)
    if not _is_face_of(face, img):
        raise NotAFaceError("the given cone is not a face of the c-image")
    kept = tuple(j for j, r in enumerate(family.relations) if face.contains(vd.c_map(r.s(vd))))
    van = tuple(i for i, g in enumerate(vd.generators) if not face.contains(g.c_weight))
    return Subfamily(kept, van)


def restrict_to_subspace(poly: Sequence[tuple], vanishing: Sequence[int]) -> list[tuple]:
    """Terms of a polynomial surviving ``z_i = 0`` for ``i`` in ``vanishing``."""
    van = set(vanishing)
    return [(c, ex) for c, ex in poly if not any(ex[i] for i in van)]


def image_faces(family_or_vd) -> list[RationalCone]:
    from .polyhedra import faces

    vd = family_or_vd.valuation if isinstance(family_or_vd, FamilyIdeal) else family_or_vd
    img = image_cone(vd.value_cone(), vd.c_map)
    return [f.cone for f in faces(img).faces]


# ---------------------------------------------------------------------------
# moment map


@dataclass(frozen=True)
class PsiValue:
    full: np.ndarray
    a_component: np.ndarray
    c_component: np.ndarray


def moment_map_psi(vd: ValuationData, z) -> PsiValue:
    z = np.asarray(z, dtype=complex)
    if z.shape != (len(vd.generators),):
        raise DegenError(f"point has {z.size} coordinates, expected {len(vd.generators)}")
    w = 0.5 * np.abs(z) ** 2
    V = np.array([g.v for g in vd.generators], dtype=float).reshape(len(z), vd.dim)
    A = np.array([g.a_weight for g in vd.generators], dtype=float).reshape(len(z), vd.rank)
    C = np.array([g.c_weight for g in vd.generators], dtype=float).reshape(len(z), vd.rank)
    return PsiValue(w @ V, w @ A, w @ C)


# ---------------------------------------------------------------------------
# builtins


@dataclass(frozen=True)
class BuiltinExample:
    name: str
    family: FamilyIdeal
    commentary: str


def _sl2() -> FamilyIdeal:
    vd = _vd(
        "A1",
        1,
        [("p1", (0, 1)), ("p2", (1, 1))],
    )
    return FamilyIdeal(vd, (), tuple([0] * vd.dim), (), "sl2")


def _vd(type_label: str, m: int, gens: list[tuple[str, tuple[int, ...]]]) -> ValuationData:
    rs = build_root_system(type_label)
    n = rs.rank
    c = LinearMap([[int(j == m + i) for j in range(m + n)] for i in range(n)], "L", "Lambda")
    # a = a' - c with a' the word's simple roots; word is the canonical one
    from .rootsys import canonical_word

    word = canonical_word(rs)
    a_prime = [[rs.simple_roots[word[j] - 1][i] if j < m else 0 for j in range(m + n)] for i in range(n)]
    a = LinearMap(a_prime, "L", "Lambda") - c
    out = []
    for name, v in gens:
        out.append(Generator(name, v, tuple(int(x) for x in a(v)), tuple(int(x) for x in c(v))))
    return ValuationData(m, n, tuple(out), a, c, OrderSpec(), rs.cartan, rs.type_label)


def _sl3() -> FamilyIdeal:
    # Restrictions to lower unitriangular matrices [[1,0,0],[a,1,0],[b,c,1]]:
    # top row minors give 1, a, b; 2x2 minors give 1, c, ac-b.  In the chart
    # a = t1 + t3, b = t2 t3, c = t2 (so ac - b = t1 t2), the lexicographically
    # highest exponent gives the string coordinates below.
    vd = _vd(
        "A2",
        3,
        [
            ("p1", (0, 0, 0, 1, 0)),
            ("p2", (1, 0, 0, 1, 0)),
            ("p3", (0, 1, 1, 1, 0)),
            ("p12", (0, 0, 0, 0, 1)),
            ("p13", (0, 1, 0, 0, 1)),
            ("p23", (1, 1, 0, 0, 1)),
        ],
    )
    # p1 p23 - p2 p13 + p3 p12 = 0
    rel = Relation(
        [(1, (1, 0, 0, 0, 0, 1)), (-1, (0, 1, 0, 0, 1, 0))],
        [(1, (0, 0, 1, 1, 0, 0))],
    )
    e = choose_e(vd, [rel])
    return rees_family(vd, [rel], e, name="sl3-string-121")


def _hyperbola() -> FamilyIdeal:
    c = LinearMap([[0, 1]], "L", "Lambda")
    a = LinearMap([[0, 0]], "L", "Lambda")
    gens = (Generator("z1", (1, 0), (0,), (0,)), Generator("z2", (-1, 0), (0,), (0,)))
    vd = ValuationData(1, 1, gens, a, c, OrderSpec(), None, None)
    rel = Relation([(1, (1, 1))], [(-1, (0, 0))])
    return FamilyIdeal(vd, (rel,), None, ((1,),), "hyperbola")


_BUILTINS = {
    "sl2": (_sl2, "Plucker coordinates of C^2; no relations, so the family is E x C."),
    "sl3-string-121": (_sl3, "Base affine space of SL3 with the string valuation for the word (1,2,1)."),
    "hyperbola": (_hyperbola, "z1 z2 = t; a raw family for exercising the flow integrator."),
}


def builtin_names() -> list[str]:
    return sorted(_BUILTINS)


def builtin(name: str) -> BuiltinExample:
    try:
        make, note = _BUILTINS[name]
    except KeyError:
        raise DegenError(f"unknown example {name!r}; choose from {', '.join(builtin_names())}") from None
    return BuiltinExample(name, make(), note)
