"""Root-system combinatorics for types A_n, B2, C2 and G2.

Weights are integer (or rational) vectors in fundamental-weight
coordinates.  ``cartan[i][j] = <alpha_j, alpha_i^vee>``, so the simple root
``alpha_j`` has fundamental coordinates ``cartan[:, j]`` and the pairing of a
weight with a simple coroot is just a coordinate.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exact import frac


class RootSystemError(ValueError):
    pass


class NotDominantError(RootSystemError):
    pass


_CARTAN = {
    "B2": ((2, -1), (-2, 2)),
    "C2": ((2, -2), (-1, 2)),
    "G2": ((2, -3), (-1, 2)),
}


def _type_a(n: int):
    return tuple(
        tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)) for i in range(n)
    )


@dataclass(frozen=True)
class PositiveRoot:
    root: tuple[int, ...]  # coefficients in simple roots
    coroot: tuple[int, ...]  # coefficients in simple coroots
    weight: tuple[int, ...]  # fundamental-weight coordinates

    @property
    def height(self) -> int:
        return sum(self.root)


@dataclass(frozen=True)
class RootSystem:
    type_label: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]

    @cached_property
    def simple_roots(self) -> list[tuple[int, ...]]:
        """Simple roots in fundamental-weight coordinates."""
        return [tuple(self.cartan[i][j] for i in range(self.rank)) for j in range(self.rank)]

    @cached_property
    def simple_coroots(self) -> list[tuple[int, ...]]:
        return [tuple(int(i == j) for i in range(self.rank)) for j in range(self.rank)]

    @cached_property
    def fundamental_weights(self) -> list[tuple[int, ...]]:
        return [tuple(int(i == j) for i in range(self.rank)) for j in range(self.rank)]

    @cached_property
    def positive_roots(self) -> list[PositiveRoot]:
        """Closure of the simple roots under simple reflections, kept positive.

        Coroots are transported alongside by the same reflections.  Sorted by
        height then coefficients.
        """
        n = self.rank
        C = self.cartan
        start = []
        for k in range(n):
            e = tuple(int(i == k) for i in range(n))
            start.append((e, e))
        seen = {r: c for r, c in start}
        frontier = list(start)
        while frontier:
            nxt = []
            for root, cor in frontier:
                for i in range(n):
                    # <root, alpha_i^vee> and <alpha_i, cor>
                    p = sum(root[j] * C[i][j] for j in range(n))
                    q = sum(cor[j] * C[j][i] for j in range(n))
                    r2 = tuple(root[j] - (p if j == i else 0) for j in range(n))
                    c2 = tuple(cor[j] - (q if j == i else 0) for j in range(n))
                    if all(x >= 0 for x in r2) and any(r2) and r2 not in seen:
                        seen[r2] = c2
                        nxt.append((r2, c2))
            frontier = nxt
        out = []
        for root, cor in seen.items():
            w = tuple(sum(root[j] * C[i][j] for j in range(n)) for i in range(n))
            out.append(PositiveRoot(root, cor, w))
        out.sort(key=lambda r: (r.height, tuple(-x for x in r.root)))
        return out

    @property
    def num_positive_roots(self) -> int:
        return len(self.positive_roots)

    @property
    def rho(self) -> tuple[int, ...]:
        return tuple(1 for _ in range(self.rank))

    def root(self, coords) -> PositiveRoot:
        """Look up a positive root by its simple-root coefficients."""
        coords = tuple(coords)
        for r in self.positive_roots:
            if r.root == coords:
                return r
        raise RootSystemError(f"{coords} is not a positive root of {self.type_label}")

    # -- Weyl group -------------------------------------------------------------

    def reflect(self, i: int, lam: Sequence) -> tuple:
        """Simple reflection ``s_i`` (0-based) on a weight."""
        lam = tuple(lam)
        c = lam[i]
        a = self.simple_roots[i]
        return tuple(x - c * y for x, y in zip(lam, a))

    def apply_word(self, letters: Sequence[int], lam: Sequence) -> tuple:
        """``s_{i_1} ... s_{i_k} (lam)`` for 1-based letters."""
        for i in reversed(list(letters)):
            lam = self.reflect(i - 1, lam)
        return tuple(lam)

    def __str__(self) -> str:
        return self.type_label


def build_root_system(type_label: str, rank: int | None = None) -> RootSystem:
    """Cartan datum for ``"A<n>"``, ``"B2"``, ``"C2"`` or ``"G2"``."""
    label = type_label.strip().upper()
    m = re.fullmatch(r"([ABCG])(\d+)", label)
    if m is None:
        if rank is None:
            raise RootSystemError(f"unsupported root system {type_label!r}")
        label = f"{label}{rank}"
        m = re.fullmatch(r"([ABCG])(\d+)", label)
        if m is None:
            raise RootSystemError(f"unsupported root system {type_label!r}")
    letter, n = m.group(1), int(m.group(2))
    if rank is not None and rank != n:
        raise RootSystemError(f"rank {rank} does not match label {type_label!r}")
    if letter == "A":
        if n < 1:
            raise RootSystemError("A_n needs n >= 1")
        return RootSystem(f"A{n}", n, _type_a(n))
    if label in _CARTAN:
        return RootSystem(label, 2, _CARTAN[label])
    raise RootSystemError(f"unsupported root system {type_label!r}; use A_n, B2, C2 or G2")


def as_weight(rs: RootSystem, lam) -> tuple[Fraction, ...]:
    if isinstance(lam, (int, Fraction, str)) and rs.rank == 1:
        lam = (lam,)
    lam = tuple(frac(x) for x in lam)
    if len(lam) != rs.rank:
        raise RootSystemError(f"weight {lam} has length {len(lam)}, expected {rs.rank}")
    return lam


def is_dominant(rs: RootSystem, lam) -> bool:
    return all(x >= 0 for x in as_weight(rs, lam))


def pairing(rs: RootSystem, lam, alpha) -> Fraction:
    """``<lam, alpha^vee>``; ``alpha`` is a PositiveRoot or simple-root coefficients."""
    lam = as_weight(rs, lam)
    if not isinstance(alpha, PositiveRoot):
        alpha = rs.root(alpha)
    return sum((c * x for c, x in zip(alpha.coroot, lam)), Fraction(0))


def weyl_dim(rs: RootSystem, lam) -> int:
    """Dimension of the irreducible module with highest weight ``lam``."""
    lam = as_weight(rs, lam)
    if any(x < 0 for x in lam) or any(x.denominator != 1 for x in lam):
        raise NotDominantError(f"{lam} is not dominant integral")
    num = Fraction(1)
    den = Fraction(1)
    for a in rs.positive_roots:
        num *= pairing(rs, lam, a) + sum(a.coroot)
        den *= sum(a.coroot)
    q = num / den
    assert q.denominator == 1
    return int(q)


def longest_element_image(rs: RootSystem) -> tuple:
    """``w_0(rho)``, which determines ``w_0``."""
    return rs.apply_word(canonical_word(rs), rs.rho)


def validate_word(rs: RootSystem, letters: Sequence[int]) -> bool:
    """True iff ``letters`` is a reduced word for the longest element."""
    letters = tuple(letters)
    if len(letters) != rs.num_positive_roots:
        return False
    if any(not (1 <= i <= rs.rank) for i in letters):
        return False
    # length-m word whose product sends rho to a strictly antidominant weight
    # is w_0 and therefore reduced
    img = rs.apply_word(letters, rs.rho)
    return all(x < 0 for x in img)


def canonical_word(rs: RootSystem) -> tuple[int, ...]:
    """A fixed reduced word for ``w_0``: (1; 2,1; 3,2,1; ...) in type A, alternating in rank 2."""
    if rs.type_label.startswith("A"):
        return tuple(j for k in range(1, rs.rank + 1) for j in range(k, 0, -1))
    m = rs.num_positive_roots
    return tuple(1 + (j % 2) for j in range(m))


def reduced_words(rs: RootSystem) -> list[tuple[int, ...]]:
    """All reduced words for ``w_0`` when rank <= 2, else the canonical word."""
    if rs.rank > 2:
        return [canonical_word(rs)]
    m = rs.num_positive_roots
    out = [w for w in itertools.product(range(1, rs.rank + 1), repeat=m) if validate_word(rs, w)]
    return sorted(out)


def inversion_count(rs: RootSystem, letters: Sequence[int]) -> int:
    """Number of positive roots sent negative by the product of the letters.

    Equals the length of the Weyl element; computed on the inverse element
    via the root-coefficient action.
    """
    n = rs.rank
    C = rs.cartan
    count = 0
    for a in rs.positive_roots:
        root = a.root
        # apply w^{-1} = s_{i_k} ... s_{i_1}
        for i in letters:
            i -= 1
            p = sum(root[j] * C[i][j] for j in range(n))
            root = tuple(root[j] - (p if j == i else 0) for j in range(n))
        if all(x <= 0 for x in root):
            count += 1
    return count


def dominant_representative(rs: RootSystem, xi) -> tuple[Fraction, ...]:
    """The dominant weight in the Weyl orbit of ``xi``."""
    lam = as_weight(rs, xi)
    for _ in range(10_000):
        i = next((k for k, x in enumerate(lam) if x < 0), None)
        if i is None:
            return lam
        lam = rs.reflect(i, lam)
    raise RootSystemError("reflection sweep did not terminate")


def face_of(rs: RootSystem, lam) -> frozenset[int]:
    """1-based simple indices whose coroot pairing with ``lam`` vanishes."""
    lam = as_weight(rs, lam)
    if any(x < 0 for x in lam):
        raise NotDominantError(f"{lam} is not dominant")
    return frozenset(i + 1 for i, x in enumerate(lam) if x == 0)


def dominant_weights(rs: RootSystem, max_sum: int) -> list[tuple[int, ...]]:
    """Dominant integral weights with coordinate sum at most ``max_sum``."""
    out = [w for w in itertools.product(range(max_sum + 1), repeat=rs.rank) if sum(w) <= max_sum]
    return sorted(out, key=lambda w: (sum(w), w))
