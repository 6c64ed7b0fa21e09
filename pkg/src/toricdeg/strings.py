"""String cones, extended string cones, string polytopes and valuation data.

The string cone of a reduced word is shipped as a closed-form inequality
table (rank <= 2) or the block description for the canonical type-A word.
The extended cone adds the highest weight; its c-fibers are string
polytopes whose lattice points biject with a basis of V(lambda).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exact
from .exact import Vector, dot, frac
from .polyhedra import (
    LinearMap,
    RationalCone,
    RationalPolytope,
    cone_from_inequalities,
    cone_from_rays,
    double_description,
    faces,
    slice_cone,
    zero_is_positive_combination,
)
from .rootsys import (
    NotDominantError,
    RootSystem,
    RootSystemError,
    as_weight,
    build_root_system,
    canonical_word,
    validate_word,
)


class StringError(ValueError):
    pass


class InvalidWordError(StringError):
    pass


class NotAFaceError(StringError):
    pass


# Rows are inequalities <u, a> >= 0 on the string coordinates a_1..a_m.
# Each table was cross-checked against path-model crystals (tests/oracles.py).
_TABLES: dict[tuple[str, tuple[int, ...]], list[tuple[int, ...]]] = {
    ("A1", (1,)): [(1,)],
    ("A2", (1, 2, 1)): [(1, 0, 0), (0, 1, -1), (0, 0, 1)],
    ("A2", (2, 1, 2)): [(1, 0, 0), (0, 1, -1), (0, 0, 1)],
    ("B2", (1, 2, 1, 2)): [(1, 0, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1), (0, 0, 0, 1)],
    ("B2", (2, 1, 2, 1)): [(1, 0, 0, 0), (0, 2, -1, 0), (0, 0, 1, -2), (0, 0, 0, 1)],
    ("C2", (1, 2, 1, 2)): [(1, 0, 0, 0), (0, 2, -1, 0), (0, 0, 1, -2), (0, 0, 0, 1)],
    ("C2", (2, 1, 2, 1)): [(1, 0, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1), (0, 0, 0, 1)],
    ("G2", (1, 2, 1, 2, 1, 2)): [
        (1, 0, 0, 0, 0, 0),
        (0, 3, -1, 0, 0, 0),
        (0, 0, 2, -3, 0, 0),
        (0, 0, 0, 3, -2, 0),
        (0, 0, 0, 0, 1, -3),
        (0, 0, 0, 0, 0, 1),
    ],
    ("G2", (2, 1, 2, 1, 2, 1)): [
        (1, 0, 0, 0, 0, 0),
        (0, 1, -1, 0, 0, 0),
        (0, 0, 2, -1, 0, 0),
        (0, 0, 0, 1, -2, 0),
        (0, 0, 0, 0, 1, -1),
        (0, 0, 0, 0, 0, 1),
    ],
}


def _type_a_canonical_table(n: int) -> list[tuple[int, ...]]:
    # word (1; 2,1; 3,2,1; ...): coordinates decrease inside each block
    m = n * (n + 1) // 2
    rows = []
    pos = 0
    for k in range(1, n + 1):
        block = list(range(pos, pos + k))
        for a, b in zip(block, block[1:]):
            rows.append(tuple(1 if i == a else (-1 if i == b else 0) for i in range(m)))
        rows.append(tuple(int(i == block[-1]) for i in range(m)))
        pos += k
    rows.sort(key=lambda r: [-abs(x) for x in r])
    return rows


def string_table(rs: RootSystem, word: Sequence[int]) -> list[tuple[int, ...]]:
    word = tuple(word)
    if not validate_word(rs, word):
        raise InvalidWordError(f"{word} is not a reduced word for w0 in {rs.type_label}")
    key = (rs.type_label, word)
    if key in _TABLES:
        return _TABLES[key]
    if rs.type_label.startswith("A") and word == canonical_word(rs):
        return _type_a_canonical_table(rs.rank)
    raise StringError(f"no string-cone table for {rs.type_label} word {word}")


@dataclass(frozen=True)
class StringCone:
    root_system: RootSystem
    word: tuple[int, ...]
    cone: RationalCone
    extended: RationalCone

    @property
    def m(self) -> int:
        return len(self.word)


def _lambda_rows(rs: RootSystem, word: Sequence[int]) -> list[Vector]:
    """Rows of ``a_k <= <lam - sum_{j>k} a_j alpha_{i_j}, alpha_{i_k}^vee>`` on (a, lam)."""
    m = len(word)
    C = rs.cartan
    rows = []
    for k, ik in enumerate(word):
        u = [Fraction(0)] * (m + rs.rank)
        u[k] = Fraction(-1)
        for j in range(k + 1, m):
            u[j] -= C[ik - 1][word[j] - 1]
        u[m + ik - 1] += 1
        rows.append(tuple(u))
    return rows


def string_cone(rs: RootSystem, word: Sequence[int]) -> RationalCone:
    """The (unextended) string cone in R^m."""
    table = string_table(rs, word)
    return cone_from_inequalities([tuple(map(Fraction, r)) for r in table], dim=len(word), lattice="Z^m")


def extended_string_cone(rs: RootSystem, word: Sequence[int]) -> StringCone:
    word = tuple(word)
    base = string_cone(rs, word)
    m = len(word)
    ineqs = [tuple(u) + tuple(Fraction(0) for _ in range(rs.rank)) for u in base.inequalities]
    ineqs += _lambda_rows(rs, word)
    ext = RationalCone(tuple(ineqs), m + rs.rank, "Z^m x Lambda")
    return StringCone(rs, word, base, ext)


def grading_maps(rs: RootSystem, word: Sequence[int]) -> tuple[LinearMap, LinearMap]:
    """``(a, c)`` on L = Z^m x Lambda, with ``a = a' - c``."""
    word = tuple(word)
    if not validate_word(rs, word):
        raise InvalidWordError(f"{word} is not a reduced word for w0 in {rs.type_label}")
    m, n = len(word), rs.rank
    c_rows = [[int(j == m + i) for j in range(m + n)] for i in range(n)]
    a_prime = [[rs.simple_roots[word[j] - 1][i] if j < m else 0 for j in range(m + n)] for i in range(n)]
    c = LinearMap(c_rows, "L", "Lambda")
    a = LinearMap(a_prime, "L", "Lambda") - c
    return a, c


def a_prime_map(rs: RootSystem, word: Sequence[int]) -> LinearMap:
    a, c = grading_maps(rs, word)
    return LinearMap([[x + y for x, y in zip(r, s)] for r, s in zip(a.matrix, c.matrix)])


def string_polytope(rs: RootSystem, word: Sequence[int], lam) -> RationalPolytope:
    lam = as_weight(rs, lam)
    if any(x < 0 for x in lam):
        raise NotDominantError(f"{lam} is not dominant")
    sc = extended_string_cone(rs, word)
    _, c = grading_maps(rs, word)
    return slice_cone(sc.extended, c, lam)


def project_to_strings(points, m: int) -> list[tuple]:
    return sorted({tuple(p[:m]) for p in points})


# ---------------------------------------------------------------------------
# faces of the c-image


def image_cone(cone: RationalCone, c: LinearMap) -> RationalCone:
    """``c(cone)`` as a cone in the codomain."""
    k, _ = c.shape
    gens = [c(r) for r in cone.rays]
    for l in cone.lineality:
        gens.append(c(l))
        gens.append(tuple(-x for x in c(l)))
    gens = [g for g in gens if any(g)]
    return cone_from_rays(gens, k, lattice=c.codomain)


def chamber_face(rs: RootSystem, vanishing: Sequence[int]) -> RationalCone:
    """Closed face ``{lam >= 0, lam_i = 0 for i in vanishing}`` of the dominant chamber."""
    n = rs.rank
    rows = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    for i in vanishing:
        rows.append(tuple(Fraction(-int(i - 1 == j)) for j in range(n)))
    return RationalCone(tuple(rows), n, "Lambda")


def _is_face_of(candidate: RationalCone, ambient: RationalCone) -> bool:
    if ambient.lineality:
        raise NotAFaceError("image cone is not strongly convex")
    lat = faces(ambient)
    return any(f.cone.same_point_set(candidate) for f in lat.faces)


def subcone_for_face(cone: RationalCone, c: LinearMap, face: RationalCone) -> RationalCone:
    """``c^{-1}(face) ∩ cone`` for a closed face of ``c(cone)``."""
    img = image_cone(cone, c)
    if not _is_face_of(face, img):
        raise NotAFaceError("the given cone is not a face of the c-image")
    pulled = []
    cols = list(zip(*c.matrix))
    for u in face.inequalities:
        # <u, c x> = <c^T u, x>
        pulled.append(tuple(dot(u, col) for col in cols))
    return cone.intersect(pulled)


# ---------------------------------------------------------------------------
# valuation data


@dataclass(frozen=True)
class Generator:
    name: str
    v: tuple[int, ...]
    a_weight: tuple[int, ...]
    c_weight: tuple[int, ...]


@dataclass(frozen=True)
class OrderSpec:
    """Total order on L = Z^m x Lambda.

    ``"lex-refinement"`` compares the Lambda part first (by height in simple
    roots, then lexicographically in root coordinates) and breaks ties by
    lexicographic order on Z^m.  ``"lex"`` is plain lexicographic order on
    the whole vector.
    """

    kind: str = "lex-refinement"

    def key(self, x: Sequence, m: int, cartan=None) -> tuple:
        x = tuple(frac(t) for t in x)
        strings, lam = x[:m], x[m:]
        if self.kind == "lex":
            return x
        if self.kind != "lex-refinement":
            raise StringError(f"unknown order {self.kind!r}")
        if cartan is not None and lam:
            roots = _weight_to_root_coords(cartan, lam)
        else:
            roots = lam
        return (sum(roots, Fraction(0)),) + tuple(roots) + strings

    def compare(self, x, y, m: int, cartan=None) -> int:
        kx, ky = self.key(x, m, cartan), self.key(y, m, cartan)
        return (kx > ky) - (kx < ky)


def _weight_to_root_coords(cartan, lam) -> tuple[Fraction, ...]:
    n = len(cartan)
    # lam = sum q_j alpha_j, alpha_j has fundamental coordinates cartan[:, j]
    sol = exact.solve([[cartan[i][j] for j in range(n)] for i in range(n)], lam)
    assert sol is not None
    return sol


@dataclass(frozen=True)
class ValuationData:
    m: int
    rank: int
    generators: tuple[Generator, ...]
    a_map: LinearMap
    c_map: LinearMap
    order: OrderSpec = OrderSpec()
    cartan: tuple[tuple[int, ...], ...] | None = None
    type_label: str | None = None

    @property
    def dim(self) -> int:
        return self.m + self.rank

    @property
    def values(self) -> list[tuple[int, ...]]:
        return [g.v for g in self.generators]

    def value_cone(self) -> RationalCone:
        return cone_from_rays([tuple(map(Fraction, v)) for v in self.values], self.dim, "L")

    def compare(self, x, y) -> int:
        return self.order.compare(x, y, self.m, self.cartan)

    def to_json(self) -> dict:
        out = {
            "m": self.m,
            "rank": self.rank,
            "generators": [
                {"name": g.name, "v": list(g.v), "a_weight": list(g.a_weight), "c_weight": list(g.c_weight)}
                for g in self.generators
            ],
            "order": self.order.kind,
            "a_map": [[exact.fmt(x) for x in r] for r in self.a_map.matrix],
            "c_map": [[exact.fmt(x) for x in r] for r in self.c_map.matrix],
        }
        if self.type_label:
            out["type"] = self.type_label
        return out

    @classmethod
    def from_json(cls, data: dict | str) -> "ValuationData":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            m = int(data["m"])
            rank = int(data["rank"])
            gens = tuple(
                Generator(
                    str(g["name"]),
                    tuple(int(x) for x in g["v"]),
                    tuple(int(x) for x in g["a_weight"]),
                    tuple(int(x) for x in g["c_weight"]),
                )
                for g in data["generators"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise StringError(f"malformed valuation data: {exc}") from exc
        for g in gens:
            if len(g.v) != m + rank or len(g.a_weight) != rank or len(g.c_weight) != rank:
                raise StringError(f"generator {g.name} has inconsistent lengths")
        if "c_map" in data:
            c_map = LinearMap(data["c_map"])
        else:
            c_map = LinearMap([[int(j == m + i) for j in range(m + rank)] for i in range(rank)])
        if "a_map" in data:
            a_map = LinearMap(data["a_map"])
        else:
            a_map = _fit_map([g.v for g in gens], [g.a_weight for g in gens], m + rank, rank)
        type_label = data.get("type")
        cartan = build_root_system(type_label).cartan if type_label else None
        return cls(m, rank, gens, a_map, c_map, OrderSpec(data.get("order", "lex-refinement")), cartan, type_label)


def _fit_map(xs, ys, n: int, k: int) -> LinearMap:
    """A linear map sending each x to its y, or the zero map when none exists.

    A zero map makes the compatibility check fail loudly rather than hide.
    """
    rows = []
    for i in range(k):
        sol = exact.solve([list(x) for x in xs], [y[i] for y in ys]) if xs else None
        if sol is None:
            return LinearMap([[0] * n for _ in range(k)])
        rows.append(sol)
    return LinearMap(rows)


def string_valuation_data(rs: RootSystem, word: Sequence[int], names: Sequence[str] | None = None) -> ValuationData:
    """Valuation data whose generators are the strings at the fundamental weights."""
    word = tuple(word)
    a, c = grading_maps(rs, word)
    gens = []
    for i in range(rs.rank):
        lam = tuple(int(i == j) for j in range(rs.rank))
        for k, p in enumerate(string_polytope(rs, word, lam).lattice_points()):
            v = tuple(p)
            gens.append(
                Generator(
                    f"w{i + 1}_{k}",
                    v,
                    tuple(int(x) for x in a(v)),
                    tuple(int(x) for x in c(v)),
                )
            )
    if names is not None:
        gens = [Generator(nm, g.v, g.a_weight, g.c_weight) for nm, g in zip(names, gens)]
    return ValuationData(len(word), rs.rank, tuple(gens), a, c, OrderSpec(), rs.cartan, rs.type_label)


# ---------------------------------------------------------------------------
# good-valuation axioms


@dataclass
class CheckEntry:
    name: str
    passed: bool | None
    detail: str = ""

    def to_json(self) -> dict:
        status = "pass" if self.passed else ("inconclusive" if self.passed is None else "fail")
        return {"check": self.name, "status": status, "detail": self.detail}


@dataclass
class ValuationReport:
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed is not False for e in self.entries)

    def __getitem__(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [e.to_json() for e in self.entries]}


def good_valuation_check(vd: ValuationData, saturation_degree: int = 2) -> ValuationReport:
    """Testable good-valuation axioms, one report entry each."""
    rep = ValuationReport()
    vals = vd.values

    bad_c = [g.name for g in vd.generators if tuple(vd.c_map(g.v)) != tuple(map(Fraction, g.c_weight))]
    bad_a = [g.name for g in vd.generators if tuple(vd.a_map(g.v)) != tuple(map(Fraction, g.a_weight))]
    rep.entries.append(CheckEntry("v4-c-compatibility", not bad_c, ", ".join(bad_c)))
    rep.entries.append(CheckEntry("v4-a-compatibility", not bad_a, ", ".join(bad_a)))

    cone = vd.value_cone()
    rep.entries.append(
        CheckEntry("cone-S-strongly-convex", not cone.lineality, f"lineality rank {len(cone.lineality)}")
    )
    img = image_cone(cone, vd.c_map) if vals else None
    rep.entries.append(
        CheckEntry(
            "c-image-strongly-convex",
            img is not None and not img.lineality,
            "" if img is None else f"lineality rank {len(img.lineality)}",
        )
    )
    c_weights = [g.c_weight for g in vd.generators]
    improper = zero_is_positive_combination(c_weights)
    rep.entries.append(
        CheckEntry(
            "properness",
            not improper,
            "0 is a nontrivial nonnegative combination of c-weights" if improper else "",
        )
    )

    rows = list(vd.c_map.matrix)
    fiber = cone.intersect(rows + [tuple(-x for x in r) for r in rows])
    bounded = not fiber.rays and not fiber.lineality
    rep.entries.append(CheckEntry("v3-bounded-c-fibers", bounded, "" if bounded else f"recession rays {fiber.rays}"))

    m = vd.m
    zero = tuple(0 for _ in range(vd.rank))
    neg = [g.name for g in vd.generators if vd.order.compare(tuple([0] * m) + g.c_weight, tuple([0] * m) + zero, m, vd.cartan) < 0]
    rep.entries.append(
        CheckEntry("v2-minimal-c-image", not neg, "generators below 0: " + ", ".join(neg) if neg else "minimum is 0")
    )

    rep.entries.append(_order_descent(vd))
    rep.entries.append(_saturation(vd, saturation_degree))
    return rep


def _order_descent(vd: ValuationData) -> CheckEntry:
    """(v1) on generator values and their pairwise sums."""
    pts = set(map(tuple, vd.values))
    for x, y in itertools.combinations_with_replacement(vd.values, 2):
        pts.add(tuple(a + b for a, b in zip(x, y)))
    pts = sorted(pts)
    greater: set[tuple[tuple, tuple]] = set()
    for x in pts:
        for y in pts:
            cx, cy = vd.c_map(x), vd.c_map(y)
            if cx == cy:
                continue
            if vd.compare(x, y) > 0:
                if (cy, cx) in greater:
                    shown = [exact.fmt(q) for q in cx], [exact.fmt(q) for q in cy]
                    return CheckEntry("v1-order-descends", False, f"c-values {shown[0]} and {shown[1]} ordered both ways")
                greater.add((cx, cy))
    return CheckEntry("v1-order-descends", True, f"{len(pts)} values checked")


def _saturation(vd: ValuationData, degree: int) -> CheckEntry:
    """Lattice points of cone(S) at small c-degrees versus sums of generators."""
    if degree <= 0 or not vd.generators:
        return CheckEntry("saturation", None, "not checked")
    cone = vd.value_cone()
    if cone.lineality:
        return CheckEntry("saturation", None, "cone not strongly convex")
    sums: dict[tuple, set[tuple]] = {}
    for d in range(1, degree + 1):
        for combo in itertools.combinations_with_replacement(range(len(vd.generators)), d):
            v = tuple(sum(vd.generators[i].v[k] for i in combo) for k in range(vd.dim))
            sums.setdefault(tuple(vd.c_map(v)), set()).add(v)
    try:
        for lam, have in sorted(sums.items()):
            if all(x == 0 for x in lam):
                continue
            # only degrees whose every decomposition has at most `degree` factors
            poly = slice_cone(cone, vd.c_map, lam)
            pts = set(poly.lattice_points())
            if not pts <= have:
                if _max_factors(vd, lam) <= degree:
                    missing = sorted(pts - have)[:3]
                    return CheckEntry("saturation", False, f"lattice points {missing} at c={lam} not generated")
    except Exception as exc:  # unbounded fibers are reported by v3
        return CheckEntry("saturation", None, f"inconclusive: {exc}")
    return CheckEntry("saturation", None if degree < 1 else True, f"checked through degree {degree}; inconclusive beyond")


def _max_factors(vd: ValuationData, lam) -> int:
    """Upper bound on the number of generators with nonzero c-weight summing to ``lam``."""
    heights = [sum(g.c_weight) for g in vd.generators if any(g.c_weight)]
    hmin = min((h for h in heights if h > 0), default=1)
    return int(sum(lam) // hmin)
