"""Iterated quadratic extensions of the rationals with exact arithmetic.

A tower of level L is Q(sqrt(d_0), ..., sqrt(d_{L-1})) where each radicand
d_i is an element of the level-i subtower. Elements carry a coordinate
vector of length 2^L over the power-product basis: the basis element at
index ``mask`` is the product of the roots whose step bits are set in
``mask`` (binary-counter order, step 0 is the lowest bit).

Arithmetic is recursive on the top step: writing x = a + b*t with t the
top root and a, b in the subtower, multiplication folds t^2 back to the
radicand and inversion uses the conjugate a - b*t.

Square roots, Galois groups of Galois towers, and fixed subfields of
subgroups are all computed exactly; no floating point appears anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from . import linalg
from .errors import (
    InternalInconsistency,
    NoInverse,
    NotGalois,
    ZeroRadicand,
)
from .intmath import fraction_sqrt, squarefree_part

Rational = Fraction
Coords = tuple[Fraction, ...]
Scalar = Union["FieldElem", Fraction, int]

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# raw coordinate arithmetic
# ---------------------------------------------------------------------------

def _vadd(a: Coords, b: Coords) -> Coords:
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a: Coords, b: Coords) -> Coords:
    return tuple(x - y for x, y in zip(a, b))


def _vneg(a: Coords) -> Coords:
    return tuple(-x for x in a)


def _vscale(a: Coords, c: Fraction) -> Coords:
    return tuple(c * x for x in a)


def _vmul(a: Coords, b: Coords, rads: Sequence[Coords]) -> Coords:
    n = len(a)
    if n == 1:
        return (a[0] * b[0],)
    h = n // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    sub = rads[:-1]
    rho = rads[-1]
    za1 = not any(a1)
    zb1 = not any(b1)
    if za1 and zb1:
        return _vmul(a0, b0, sub) + (_ZERO,) * h
    if za1:
        return _vmul(a0, b0, sub) + _vmul(a0, b1, sub)
    if zb1:
        return _vmul(a0, b0, sub) + _vmul(a1, b0, sub)
    p00 = _vmul(a0, b0, sub)
    p11 = _vmul(a1, b1, sub)
    low = _vadd(p00, _vmul(p11, rho, sub))
    high = _vadd(_vmul(a0, b1, sub), _vmul(a1, b0, sub))
    return low + high


def _vinv(a: Coords, rads: Sequence[Coords]) -> Coords:
    n = len(a)
    if n == 1:
        if a[0] == 0:
            raise NoInverse("division by zero in tower field")
        return (1 / a[0],)
    h = n // 2
    a0, a1 = a[:h], a[h:]
    sub = rads[:-1]
    if not any(a1):
        return _vinv(a0, sub) + (_ZERO,) * h
    rho = rads[-1]
    d = _vsub(_vmul(a0, a0, sub), _vmul(_vmul(a1, a1, sub), rho, sub))
    di = _vinv(d, sub)
    return _vmul(a0, di, sub) + _vneg(_vmul(a1, di, sub))


def _vsqrt(a: Coords, rads: Sequence[Coords]) -> Coords | None:
    """Some square root of a in the tower, or None when there is none."""
    n = len(a)
    if n == 1:
        r = fraction_sqrt(a[0])
        return None if r is None else (r,)
    h = n // 2
    a0, a1 = a[:h], a[h:]
    sub = rads[:-1]
    rho = rads[-1]
    zeros = (_ZERO,) * h
    if not any(a1):
        r = _vsqrt(a0, sub)
        if r is not None:
            return r + zeros
        q = _vmul(a0, _vinv(rho, sub), sub)
        r = _vsqrt(q, sub)
        if r is not None:
            return zeros + r
        return None
    # x = u + v t with 2uv = a1 != 0: norm descent
    norm = _vsub(_vmul(a0, a0, sub), _vmul(_vmul(a1, a1, sub), rho, sub))
    s = _vsqrt(norm, sub)
    if s is None:
        return None
    for cand in (s, _vneg(s)):
        u2 = _vscale(_vadd(a0, cand), _HALF)
        u = _vsqrt(u2, sub)
        if u is None or not any(u):
            continue
        v = _vmul(_vscale(a1, _HALF), _vinv(u, sub), sub)
        root = u + v
        if _vmul(root, root, rads) == a:
            return root
    return None


# ---------------------------------------------------------------------------
# towers and elements
# ---------------------------------------------------------------------------

class FieldTower:
    """An iterated quadratic extension of Q, immutable.

    ``rad_coords[i]`` is the coordinate vector (length 2^i) of the step-i
    radicand over the level-i subtower. Rational radicands are normalized
    to squarefree integers; genuinely irrational ones are kept as given.
    """

    __slots__ = ("rad_coords", "level", "degree", "_key", "_galois", "_is_real")

    def __init__(self, rad_coords: tuple[Coords, ...] = ()):
        self.rad_coords = rad_coords
        self.level = len(rad_coords)
        self.degree = 1 << self.level
        self._key = rad_coords
        self._galois = None
        self._is_real = None

    @staticmethod
    def rationals() -> "FieldTower":
        return FieldTower(())

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldTower) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        if self.level == 0:
            return "FieldTower(Q)"
        rads = ", ".join(_coords_repr(c) for c in self.rad_coords)
        return f"FieldTower(Q; {rads})"

    # -- element constructors ------------------------------------------------

    def element(self, coords: Iterable[Fraction | int]) -> "FieldElem":
        c = tuple(Fraction(x) for x in coords)
        if len(c) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates, got {len(c)}")
        return FieldElem(self, c)

    def from_rational(self, q: Fraction | int) -> "FieldElem":
        c = [_ZERO] * self.degree
        c[0] = Fraction(q)
        return FieldElem(self, tuple(c))

    def zero(self) -> "FieldElem":
        return self.from_rational(0)

    def one(self) -> "FieldElem":
        return self.from_rational(1)

    def root(self, step: int) -> "FieldElem":
        """The square root adjoined at the given step, as an element."""
        c = [_ZERO] * self.degree
        c[1 << step] = _ONE
        return FieldElem(self, tuple(c))

    def radicand(self, step: int) -> "FieldElem":
        """The step radicand embedded into the full tower."""
        c = self.rad_coords[step]
        return FieldElem(self, c + (_ZERO,) * (self.degree - len(c)))

    def prefix(self, level: int) -> "FieldTower":
        return FieldTower(self.rad_coords[:level])

    def embed(self, x: "FieldElem") -> "FieldElem":
        """Embed an element of a prefix tower into this tower."""
        if x.tower == self:
            return x
        if x.tower.rad_coords != self.rad_coords[: x.tower.level]:
            raise ValueError("element does not live in a prefix of this tower")
        return FieldElem(self, x.coords + (_ZERO,) * (self.degree - len(x.coords)))

    @property
    def is_real(self) -> bool:
        """True when every radicand is positive under the real embedding
        that takes all adjoined roots positive."""
        if self._is_real is None:
            flag = True
            for i in range(self.level):
                if not flag:
                    break
                sub = self.prefix(i)
                if not sub.is_real:
                    flag = False
                    break
                rad = sub.element(self.rad_coords[i])
                if sign_real(rad) <= 0:
                    flag = False
            self._is_real = flag
        return self._is_real

    def rationals_only(self) -> bool:
        return self.level == 0

    def is_multiquadratic(self) -> bool:
        """True when every radicand is rational."""
        return all(not any(c[1:]) for c in self.rad_coords)

    def rational_radicands(self) -> list[Fraction]:
        if not self.is_multiquadratic():
            raise ValueError("tower has irrational radicands")
        return [c[0] for c in self.rad_coords]


class FieldElem:
    """An element of a FieldTower; immutable and hashable."""

    __slots__ = ("tower", "coords", "_hash")

    def __init__(self, tower: FieldTower, coords: Coords):
        self.tower = tower
        self.coords = coords
        self._hash = None

    # -- coercion -------------------------------------------------------------

    def _coerce(self, other: Scalar) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.tower != self.tower:
                raise ValueError("elements live in different towers")
            return other
        return self.tower.from_rational(Fraction(other))

    # -- ring operations -------------------------------------------------------

    def __add__(self, other: Scalar) -> "FieldElem":
        o = self._coerce(other)
        return FieldElem(self.tower, _vadd(self.coords, o.coords))

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> "FieldElem":
        o = self._coerce(other)
        return FieldElem(self.tower, _vsub(self.coords, o.coords))

    def __rsub__(self, other: Scalar) -> "FieldElem":
        o = self._coerce(other)
        return FieldElem(self.tower, _vsub(o.coords, self.coords))

    def __neg__(self) -> "FieldElem":
        return FieldElem(self.tower, _vneg(self.coords))

    def __mul__(self, other: Scalar) -> "FieldElem":
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.tower, _vscale(self.coords, Fraction(other)))
        o = self._coerce(other)
        return FieldElem(self.tower, _vmul(self.coords, o.coords, self.tower.rad_coords))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        return FieldElem(self.tower, _vinv(self.coords, self.tower.rad_coords))

    def __truediv__(self, other: Scalar) -> "FieldElem":
        o = self._coerce(other)
        return self * o.inverse()

    def __rtruediv__(self, other: Scalar) -> "FieldElem":
        o = self._coerce(other)
        return o * self.inverse()

    def __pow__(self, n: int) -> "FieldElem":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.tower.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structure -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.tower.from_rational(other)
        return (
            isinstance(other, FieldElem)
            and self.tower == other.tower
            and self.coords == other.coords
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.tower, self.coords))
        return self._hash

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self) -> bool:
        return any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coords[0]

    def sqrt(self) -> "FieldElem | None":
        """The canonical square root inside the tower, or None.

        For a real tower the root positive under the real embedding is
        returned; otherwise the representative whose first nonzero
        coordinate is positive.
        """
        r = _vsqrt(self.coords, self.tower.rad_coords)
        if r is None:
            return None
        elem = FieldElem(self.tower, r)
        if elem.is_zero():
            return elem
        if self.tower.is_real:
            if sign_real(elem) < 0:
                elem = -elem
        else:
            first = next(x for x in elem.coords if x)
            if first < 0:
                elem = -elem
        return elem

    def __repr__(self) -> str:
        return f"FieldElem({_coords_repr(self.coords)})"

    def sort_key(self):
        return self.coords


def _coords_repr(coords: Coords) -> str:
    return "[" + ", ".join(str(c) for c in coords) + "]"


def sign_real(x: FieldElem) -> int:
    """Exact sign of x under the all-roots-positive real embedding.

    Only meaningful when the tower is real; computed by recursive
    comparison of conjugate halves, no floating point involved.
    """
    return _sign_real(x.coords, x.tower.rad_coords)


def _sign_real(a: Coords, rads: Sequence[Coords]) -> int:
    n = len(a)
    if n == 1:
        return (a[0] > 0) - (a[0] < 0)
    h = n // 2
    a0, a1 = a[:h], a[h:]
    sub = rads[:-1]
    s0 = _sign_real(a0, sub)
    s1 = _sign_real(a1, sub)
    if s1 == 0:
        return s0
    if s0 == 0:
        return s1
    if s0 == s1:
        return s0
    # opposite signs: compare a0^2 against a1^2 * rho
    rho = rads[-1]
    diff = _vsub(_vmul(a0, a0, sub), _vmul(_vmul(a1, a1, sub), rho, sub))
    sd = _sign_real(diff, sub)
    if sd == 0:
        raise InternalInconsistency("radicand is a square in its subtower")
    return sd if s0 > 0 else -sd


def sqrt_in_field(x: FieldElem) -> FieldElem | None:
    """Functional alias for FieldElem.sqrt."""
    return x.sqrt()


# ---------------------------------------------------------------------------
# tower extension
# ---------------------------------------------------------------------------

class ExtendResult:
    """Outcome of tower_extend.

    ``tower`` is the (possibly unchanged) tower, ``existing_sqrt`` is set
    when the radicand was already a square, and ``embed`` maps elements of
    the original tower into ``tower``.
    """

    __slots__ = ("tower", "existing_sqrt", "embed", "extended")

    def __init__(self, tower: FieldTower, existing_sqrt: FieldElem | None,
                 embed: Callable[[FieldElem], FieldElem], extended: bool):
        self.tower = tower
        self.existing_sqrt = existing_sqrt
        self.embed = embed
        self.extended = extended


def tower_extend(tower: FieldTower, radicand: Scalar) -> ExtendResult:
    """Adjoin a square root of ``radicand`` to ``tower``.

    If the radicand is already a square the tower is returned unchanged
    together with the square root as an embedding note. Rational radicands
    are reduced to their squarefree integer part before being stored.
    """
    if isinstance(radicand, (int, Fraction)):
        radicand = tower.from_rational(Fraction(radicand))
    if radicand.tower != tower:
        radicand = tower.embed(radicand)
    if radicand.is_zero():
        raise ZeroRadicand("cannot extend by a square root of zero")
    existing = radicand.sqrt()
    if existing is not None:
        return ExtendResult(tower, existing, lambda e: e, False)
    if radicand.is_rational():
        stored = Fraction(squarefree_part(radicand.as_fraction()))
        store_coords: Coords = (stored,) + (_ZERO,) * (tower.degree - 1)
    else:
        store_coords = radicand.coords
    new = FieldTower(tower.rad_coords + (store_coords,))
    return ExtendResult(new, None, new.embed, True)


def multiquadratic_tower(radicands: Sequence[Fraction | int]) -> FieldTower:
    """Tower from rational radicands, dropping those already squares."""
    t = FieldTower.rationals()
    for d in radicands:
        t = tower_extend(t, Fraction(d)).tower
    return t


# ---------------------------------------------------------------------------
# Galois groups
# ---------------------------------------------------------------------------

class GaloisAut:
    """A field automorphism of a Galois tower.

    ``images[i]`` is the image of the step-i root, a FieldElem of the full
    tower equal to plus or minus a square root of the conjugated radicand.
    """

    __slots__ = ("tower", "images", "_basis_imgs", "_hash", "index")

    def __init__(self, tower: FieldTower, images: tuple[FieldElem, ...]):
        self.tower = tower
        self.images = images
        self._basis_imgs = None
        self._hash = None
        self.index = None  # set by GaloisGroup

    def _basis_images(self) -> list[Coords]:
        if self._basis_imgs is None:
            deg = self.tower.degree
            imgs = [self.tower.one().coords] * deg
            for mask in range(1, deg):
                low = mask & (-mask)
                step = low.bit_length() - 1
                prev = imgs[mask ^ low]
                imgs[mask] = _vmul(prev, self.images[step].coords,
                                   self.tower.rad_coords)
            self._basis_imgs = imgs
        return self._basis_imgs

    def apply(self, x: FieldElem) -> FieldElem:
        if x.tower != self.tower:
            raise ValueError("element lives in a different tower")
        imgs = self._basis_images()
        acc = [_ZERO] * self.tower.degree
        for mask, c in enumerate(x.coords):
            if c:
                img = imgs[mask]
                for i, v in enumerate(img):
                    if v:
                        acc[i] += c * v
        return FieldElem(self.tower, tuple(acc))

    __call__ = apply

    def compose(self, other: "GaloisAut") -> "GaloisAut":
        """self after other: (self*other)(x) = self(other(x))."""
        return GaloisAut(self.tower,
                         tuple(self.apply(img) for img in other.images))

    def is_identity(self) -> bool:
        return all(img.coords == self.tower.root(i).coords
                   for i, img in enumerate(self.images))

    def key(self):
        return tuple(img.coords for img in self.images)

    def __eq__(self, other) -> bool:
        return (isinstance(other, GaloisAut) and self.tower == other.tower
                and self.key() == other.key())

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.tower, self.key()))
        return self._hash

    def __repr__(self) -> str:
        return f"GaloisAut({[repr(i) for i in self.images]})"


def apply_aut(aut: GaloisAut, x: FieldElem) -> FieldElem:
    return aut.apply(x)


class GaloisGroup:
    """The full automorphism group of a Galois tower, with its
    multiplication table.

    Elements are stored in a canonical order (identity first, the rest
    sorted by root-image coordinates); ``table[i][j]`` is the index of
    elements[i] composed with elements[j].
    """

    __slots__ = ("tower", "elements", "table", "inverses", "_by_key")

    def __init__(self, tower: FieldTower, elements: tuple[GaloisAut, ...]):
        self.tower = tower
        idn = [e for e in elements if e.is_identity()]
        rest = sorted((e for e in elements if not e.is_identity()),
                      key=lambda e: e.key())
        self.elements = tuple(idn + rest)
        self._by_key = {e.key(): i for i, e in enumerate(self.elements)}
        for i, e in enumerate(self.elements):
            e.index = i
        n = len(self.elements)
        self.table = [[0] * n for _ in range(n)]
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                k = self._by_key.get(a.compose(b).key())
                if k is None:
                    raise InternalInconsistency("Galois group not closed")
                self.table[i][j] = k
        self.inverses = [0] * n
        for i in range(n):
            self.inverses[i] = next(j for j in range(n) if self.table[i][j] == 0)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> GaloisAut:
        return self.elements[0]

    def index_of(self, aut: GaloisAut) -> int:
        return self._by_key[aut.key()]

    def compose(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse(self, i: int) -> int:
        return self.inverses[i]

    def subgroup_closure(self, indices: Iterable[int]) -> frozenset[int]:
        cur = {0} | set(indices)
        changed = True
        while changed:
            changed = False
            for i in list(cur):
                for j in list(cur):
                    k = self.table[i][j]
                    if k not in cur:
                        cur.add(k)
                        changed = True
        return frozenset(cur)

    def is_elementary_abelian_2(self) -> bool:
        n = self.order
        for i in range(n):
            if self.table[i][i] != 0:
                return False
            for j in range(i + 1, n):
                if self.table[i][j] != self.table[j][i]:
                    return False
        return True


def galois_group(tower: FieldTower) -> GaloisGroup:
    """The Galois group of the tower over Q.

    Raises NotGalois (with the offending step) when some conjugate of a
    radicand has no square root in the tower.
    """
    if tower._galois is not None:
        return tower._galois
    partial: list[list[FieldElem]] = [[]]
    for step in range(tower.level):
        rad_c = tower.rad_coords[step]
        nxt: list[list[FieldElem]] = []
        for images in partial:
            conj = _eval_on_images(rad_c, images, tower)
            root = conj.sqrt()
            if root is None:
                raise NotGalois(step,
                                f"conjugated radicand {conj!r} has no square root")
            nxt.append(images + [root])
            nxt.append(images + [-root])
        partial = nxt
    auts = tuple(GaloisAut(tower, tuple(imgs)) for imgs in partial)
    group = GaloisGroup(tower, auts)
    tower._galois = group
    return group


def _eval_on_images(coords: Coords, images: list[FieldElem],
                    tower: FieldTower) -> FieldElem:
    """Evaluate a subtower coordinate vector on given root images."""
    acc = tower.zero()
    for mask, c in enumerate(coords):
        if not c:
            continue
        term = tower.from_rational(c)
        m = mask
        while m:
            low = m & (-m)
            term = term * images[low.bit_length() - 1]
            m ^= low
        acc = acc + term
    return acc


# ---------------------------------------------------------------------------
# fixed subfields
# ---------------------------------------------------------------------------

class SubfieldPresentation:
    """A fixed field presented as its own tower plus maps in and out."""

    __slots__ = ("tower", "basis_images", "parent")

    def __init__(self, tower: FieldTower, basis_images: list[FieldElem],
                 parent: FieldTower):
        self.tower = tower
        self.basis_images = basis_images
        self.parent = parent

    def embed(self, x: FieldElem) -> FieldElem:
        if x.tower != self.tower:
            raise ValueError("element does not live in the subtower")
        acc = self.parent.zero()
        for c, img in zip(x.coords, self.basis_images):
            if c:
                acc = acc + c * img
        return acc

    def restrict(self, x: FieldElem) -> FieldElem:
        """Express a parent element lying in the subfield in subtower
        coordinates; raises when it does not lie there."""
        cols = [list(img.coords) for img in self.basis_images]
        m = linalg.transpose(cols)
        sol = linalg.solve(m, list(x.coords))
        if sol is None:
            raise ValueError("element is not fixed by the subgroup")
        return self.tower.element(sol)


def _action_matrix(aut: GaloisAut) -> linalg.Matrix:
    deg = aut.tower.degree
    imgs = aut._basis_images()
    return [[imgs[c][r] for c in range(deg)] for r in range(deg)]


def _fixed_space(group: GaloisGroup, indices: frozenset[int]) -> list[linalg.Vector]:
    deg = group.tower.degree
    rows: linalg.Matrix = []
    for i in sorted(indices):
        if i == 0:
            continue
        a = _action_matrix(group.elements[i])
        for r in range(deg):
            row = a[r][:]
            row[r] -= _ONE
            rows.append(row)
    if not rows:
        return [list(v) for v in linalg.identity(deg)]
    return linalg.kernel_basis(rows)


def fixed_subtower(group: GaloisGroup, subgroup: Iterable[int]) -> SubfieldPresentation:
    """The fixed field of a subgroup, presented as a quadratic tower.

    The subgroup is given by element indices; it is closed under products
    before use. Walks a chain of index-two subgroups between the subgroup
    and the whole group, producing one radicand per step.
    """
    tower = group.tower
    sub = group.subgroup_closure(subgroup)
    if len(sub) == len(group.elements):
        qq = FieldTower.rationals()
        return SubfieldPresentation(qq, [tower.one()], tower)
    if len(sub) == 1:
        basis = [FieldElem(tower, tuple(_ONE if i == m else _ZERO
                                        for i in range(tower.degree)))
                 for m in range(tower.degree)]
        return SubfieldPresentation(tower, basis, tower)

    # chain sub = U_0 < U_1 < ... < U_k = G with index-2 steps
    chain = [sub]
    full = frozenset(range(group.order))
    while chain[-1] != full:
        u = chain[-1]
        grew = None
        for g in range(group.order):
            if g in u:
                continue
            if group.table[g][g] not in u:
                continue
            conj_ok = all(
                group.table[group.table[g][h]][group.inverses[g]] in u
                for h in u)
            if conj_ok:
                grew = frozenset(u | {group.table[g][h] for h in u})
                break
        if grew is None:
            raise InternalInconsistency("no index-2 step above subgroup")
        chain.append(grew)

    fixed_spaces = {u: _fixed_space(group, u) for u in chain}
    subtower = FieldTower.rationals()
    basis_images = [tower.one()]
    # walk downward: from fixed(G) = Q towards fixed(sub)
    for j in range(len(chain) - 1, 0, -1):
        bigger_grp, smaller_grp = chain[j], chain[j - 1]
        space_small = fixed_spaces[smaller_grp]   # larger field
        space_big = fixed_spaces[bigger_grp]      # smaller field
        x_vec = next(v for v in space_small
                     if not linalg.in_span(space_big, v))
        tau_i = next(iter(bigger_grp - smaller_grp))
        tau = group.elements[tau_i]
        x = FieldElem(tower, tuple(x_vec))
        y = x - tau.apply(x)
        if y.is_zero():
            raise InternalInconsistency("fixed-space vector collapsed")
        d = y * y
        cols = [list(img.coords) for img in basis_images]
        sol = linalg.solve(linalg.transpose(cols), list(d.coords))
        if sol is None:
            raise InternalInconsistency("radicand not in current subfield")
        rad = subtower.element(sol)
        ext = tower_extend(subtower, rad)
        if not ext.extended:
            raise InternalInconsistency("chain step radicand was a square")
        # keep the stored radicand consistent with the chosen root image:
        # stored = rad * s^2 for rational s, so the root image is y / s
        stored = ext.tower.rad_coords[-1]
        if rad.is_rational():
            ratio = rad.as_fraction() / stored[0]
            s = fraction_sqrt(ratio)
            if s is None:
                raise InternalInconsistency("squarefree reduction mismatch")
            y = y / s
        subtower = ext.tower
        basis_images = basis_images + [img * y for img in basis_images]
    return SubfieldPresentation(subtower, basis_images, tower)
