"""Reduced effective divisors on the projective line and their Mobius
stabilizers.

A divisor is a finite set of distinct points over one tower. The
stabilizer Aut(P1, D) is found by exhausting ordered triples: an
automorphism is pinned down by where it sends three points of D, so the
n(n-1)(n-2) triple maps form a complete candidate list. The resulting
groups are the classical finite Mobius groups and are classified by
their element-order statistics.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .errors import (
    DegreeTooSmall,
    InternalInconsistency,
    UnrecognizedGroup,
)
from .projline import Mobius, ProjPoint, mobius_from_triples
from .qfield import FieldTower, GaloisAut


class Divisor:
    """A set of distinct points of the projective line over one tower."""

    __slots__ = ("points", "tower", "_set", "_hash")

    def __init__(self, points: Iterable[ProjPoint]):
        pts = list(points)
        if not pts:
            raise ValueError("a divisor needs at least one point")
        tower = pts[0].tower
        if any(p.tower != tower for p in pts):
            raise ValueError("points live in different towers")
        if len(set(pts)) != len(pts):
            raise ValueError("reduced divisor requires distinct points")
        self.points = tuple(sorted(pts, key=ProjPoint.sort_key))
        self.tower = tower
        self._set = frozenset(self.points)
        self._hash = None

    @property
    def degree(self) -> int:
        return len(self.points)

    def __contains__(self, p: ProjPoint) -> bool:
        return p in self._set

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Divisor) and self.tower == other.tower
                and self._set == other._set)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.tower, self._set))
        return self._hash

    def __repr__(self) -> str:
        return f"Divisor({list(self.points)!r})"

    def apply(self, m: Mobius) -> "Divisor":
        return Divisor(m(p) for p in self.points)

    def embed(self, tower: FieldTower) -> "Divisor":
        return Divisor(p.embed(tower) for p in self.points)


def conjugate_divisor(sigma: GaloisAut, d: Divisor) -> Divisor:
    """Apply a Galois automorphism to every coordinate of the divisor."""
    return Divisor(ProjPoint(sigma(p.x), sigma(p.y)) for p in d.points)


def conjugate_point(sigma: GaloisAut, p: ProjPoint) -> ProjPoint:
    return ProjPoint(sigma(p.x), sigma(p.y))


def conjugate_mobius(sigma: GaloisAut, m: Mobius) -> Mobius:
    return Mobius(sigma(m.a), sigma(m.b), sigma(m.c), sigma(m.d))


# ---------------------------------------------------------------------------
# stabilizer computation
# ---------------------------------------------------------------------------

class GroupTag:
    """Classification of a finite Mobius group."""

    __slots__ = ("kind", "m")

    def __init__(self, kind: str, m: int | None = None):
        self.kind = kind  # trivial | cyclic | dihedral | A4 | S4 | A5
        self.m = m

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupTag) and self.kind == other.kind
                and self.m == other.m)

    def __hash__(self) -> int:
        return hash((self.kind, self.m))

    def __repr__(self) -> str:
        if self.m is None:
            return f"GroupTag({self.kind})"
        return f"GroupTag({self.kind}({self.m}))"

    def label(self) -> str:
        return self.kind if self.m is None else f"{self.kind}({self.m})"


class AutGroup:
    """A finite group of Mobius transformations with its multiplication
    table, canonical element order (identity first) and classification."""

    __slots__ = ("elements", "tower", "table", "inverses", "orders",
                 "tag", "_by_key")

    def __init__(self, elements: Iterable[Mobius]):
        elems = list(elements)
        tower = elems[0].tower
        idn = [e for e in elems if e.is_identity()]
        rest = sorted((e for e in elems if not e.is_identity()),
                      key=_mobius_key)
        if len(idn) != 1:
            raise InternalInconsistency("group must contain the identity once")
        self.elements = tuple(idn + rest)
        self.tower = tower
        self._by_key = {_mobius_key(e): i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        self.table = [[0] * n for _ in range(n)]
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                k = self._by_key.get(_mobius_key(a.compose(b)))
                if k is None:
                    raise InternalInconsistency("set not closed under composition")
                self.table[i][j] = k
        self.inverses = [next(j for j in range(n) if self.table[i][j] == 0)
                         for i in range(n)]
        self.orders = [self._order_from_table(i) for i in range(n)]
        self.tag = _classify(self)

    def _order_from_table(self, i: int) -> int:
        k, n = i, 1
        while k != 0:
            k = self.table[k][i]
            n += 1
        return n

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Mobius:
        return self.elements[0]

    def index_of(self, m: Mobius) -> int:
        key = _mobius_key(m)
        if key not in self._by_key:
            raise ValueError("element not in group")
        return self._by_key[key]

    def __contains__(self, m: Mobius) -> bool:
        return _mobius_key(m) in self._by_key

    def __iter__(self):
        return iter(self.elements)

    def is_cyclic(self) -> bool:
        return self.tag.kind in ("trivial", "cyclic")

    def is_cyclic_even(self) -> bool:
        return self.tag.kind == "cyclic" and self.tag.m % 2 == 0

    def generator(self) -> Mobius:
        """A generator when the group is cyclic (the identity for the
        trivial group)."""
        if not self.is_cyclic():
            raise ValueError("group is not cyclic")
        n = self.order
        return self.elements[self.orders.index(n)]

    def contains_klein(self) -> bool:
        invs = [i for i in range(self.order) if self.orders[i] == 2]
        for a in invs:
            for b in invs:
                if a < b and self.table[a][b] == self.table[b][a]:
                    return True
        return False

    def centralizer_size(self, i: int) -> int:
        return sum(1 for j in range(self.order)
                   if self.table[i][j] == self.table[j][i])

    def __repr__(self) -> str:
        return f"AutGroup({self.tag.label()}, order={self.order})"


def _mobius_key(m: Mobius):
    return (m.a.sort_key(), m.b.sort_key(), m.c.sort_key(), m.d.sort_key())


def _classify(g: AutGroup) -> GroupTag:
    n = g.order
    mx = max(g.orders)
    if n == 1:
        return GroupTag("trivial")
    if mx == n:
        return GroupTag("cyclic", n)
    if n == 12 and mx == 3:
        return GroupTag("A4")
    if n == 24 and mx == 4:
        return GroupTag("S4")
    if n == 60 and mx == 5:
        return GroupTag("A5")
    if n % 2 == 0 and mx == n // 2:
        m = n // 2
        expected_invs = m + 1 if m % 2 == 0 else m
        if sum(1 for o in g.orders if o == 2) == expected_invs:
            return GroupTag("dihedral", m)
    raise UnrecognizedGroup(
        f"order {n} with element orders {sorted(set(g.orders))} is not a "
        "finite Mobius group")


def classify_group(g: AutGroup) -> GroupTag:
    return g.tag


def compute_aut(d: Divisor) -> AutGroup:
    """The stabilizer of the point set inside the Mobius group over the
    divisor's own tower.

    Complete for stabilizer elements defined over that tower: any such
    map is determined by the ordered triple it sends the base triple to,
    and all triples are tried.
    """
    if d.degree < 3:
        raise DegreeTooSmall(f"need at least 3 points, got {d.degree}")
    pts = d.points
    base = pts[:3]
    found: list[Mobius] = []
    seen: set = set()
    for q1 in pts:
        for q2 in pts:
            if q2 == q1:
                continue
            for q3 in pts:
                if q3 == q1 or q3 == q2:
                    continue
                m = mobius_from_triples(base[0], base[1], base[2], q1, q2, q3)
                key = _mobius_key(m)
                if key in seen:
                    continue
                if all(m(p) in d for p in pts):
                    seen.add(key)
                    found.append(m)
    return AutGroup(found)


def pgl2_equivalent(d1: Divisor, d2: Divisor) -> Optional[Mobius]:
    """Some Mobius map with M(d1) = d2, or None.

    Searches images of a fixed triple of d1 over ordered triples of d2;
    complete over the common tower by the same triple-determination
    argument as compute_aut.
    """
    if d1.tower != d2.tower:
        raise ValueError("divisors live in different towers")
    if d1.degree != d2.degree:
        return None
    base = d1.points[:3]
    for q1 in d2.points:
        for q2 in d2.points:
            if q2 == q1:
                continue
            for q3 in d2.points:
                if q3 == q1 or q3 == q2:
                    continue
                m = mobius_from_triples(base[0], base[1], base[2], q1, q2, q3)
                if all(m(p) in d2 for p in d1.points):
                    return m
    return None


def orbit_structure(d: Divisor, g: AutGroup) -> list[list[ProjPoint]]:
    """Partition of the divisor's points into orbits of the group.

    Orbits are listed by (size, first point); for a cyclic group the
    sizes are checked against the rotation picture: full orbits of size
    |G| apart from at most two fixed points of a generator.
    """
    remaining = set(d.points)
    orbits: list[list[ProjPoint]] = []
    while remaining:
        p = min(remaining, key=ProjPoint.sort_key)
        orbit = {m(p) for m in g.elements}
        if not orbit <= set(d.points):
            raise InternalInconsistency("group does not stabilize the divisor")
        remaining -= orbit
        orbits.append(sorted(orbit, key=ProjPoint.sort_key))
    orbits.sort(key=lambda o: (len(o), o[0].sort_key()))
    if g.is_cyclic() and g.order > 1:
        fixed = sum(1 for o in orbits if len(o) == 1)
        if fixed > 2 or any(len(o) not in (1, g.order) for o in orbits):
            raise InternalInconsistency(
                "cyclic group orbits must be free outside two fixed points")
    return orbits
