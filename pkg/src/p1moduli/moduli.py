"""Field of moduli, descent cochains, and the compression conic.

The field of moduli of (P1, D) is the fixed field of the subgroup H of
Galois elements sigma for which sigma(D) is Mobius-equivalent to D. A
witness cochain phi_sigma with phi_sigma(sigma(D)) = D realizes the
descent data; its coboundary defect is a 2-cocycle valued in Aut(P1, D).

For cyclic Aut of order m the quotient by Aut is computed literally: a
generator is conjugated to w -> zeta w by sending its fixed points to 0
and infinity, the quotient map is w -> w^m, and the twisted Galois
action descends to the target line. Embedding the target by the degree-2
Veronese and dividing the symmetric square of each descended map by its
determinant yields an exact matrix 1-cocycle; averaging over the Galois
group cuts out a 3-dimensional rational subspace, and the Veronese
quadric expressed in that basis is the compression conic over the field
of moduli.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterable, Optional

from .conic import TernaryForm
from .divisor import (
    AutGroup,
    Divisor,
    compute_aut,
    conjugate_divisor,
    conjugate_mobius,
    pgl2_equivalent,
)
from .errors import (
    DescentFailure,
    InternalInconsistency,
    NonCyclicAut,
    NonElementaryGaloisQuotient,
    UnsupportedAut,
)
from .projline import Mobius, ProjPoint, mobius_from_triples, mobius_order_and_fixed
from .qfield import (
    FieldElem,
    FieldTower,
    GaloisAut,
    GaloisGroup,
    SubfieldPresentation,
    fixed_subtower,
    galois_group,
)

F = Fraction


class ModuliData:
    """The subgroup H, the witness cochain, and the field of moduli."""

    __slots__ = ("group", "h_indices", "cochain", "fom", "fom_is_q", "divisor")

    def __init__(self, group: GaloisGroup, h_indices: tuple[int, ...],
                 cochain: dict[int, Mobius], fom: SubfieldPresentation,
                 divisor: Divisor):
        self.group = group
        self.h_indices = h_indices
        self.cochain = cochain
        self.fom = fom
        self.fom_is_q = fom.tower.level == 0
        self.divisor = divisor

    def __repr__(self) -> str:
        return (f"ModuliData(|H|={len(self.h_indices)}, "
                f"fom_degree={self.fom.tower.degree})")


def field_of_moduli(d: Divisor, aut: Optional[AutGroup] = None) -> ModuliData:
    """H = {sigma : sigma(D) ~ D}, one equivalence witness per element,
    and the fixed field of H.

    Cosets are eliminated in blocks: once sigma is known to lie outside
    H, so does its entire coset sigma H; witnesses for products come from
    composing known witnesses instead of searching again.
    """
    group = galois_group(d.tower)
    n = group.order
    cochain: dict[int, Mobius] = {0: Mobius.identity(d.tower)}
    not_in_h: set[int] = set()
    for i in range(1, n):
        if i in cochain or i in not_in_h:
            continue
        sigma = group.elements[i]
        witness = pgl2_equivalent(conjugate_divisor(sigma, d), d)
        if witness is None:
            not_in_h.update(group.table[i][j] for j in cochain)
            continue
        cochain[i] = witness
        # close the witness set under composition:
        # phi_{sigma tau} = phi_sigma o sigma(phi_tau)
        changed = True
        while changed:
            changed = False
            for a in list(cochain):
                for b in list(cochain):
                    ab = group.table[a][b]
                    if ab not in cochain:
                        cochain[ab] = cochain[a].compose(
                            conjugate_mobius(group.elements[a], cochain[b]))
                        changed = True
        not_in_h = {group.table[j][k] for j in not_in_h for k in cochain}
    h = tuple(sorted(cochain))
    if group.subgroup_closure(h) != frozenset(h):
        raise InternalInconsistency("H is not closed under composition")
    for i in h:
        img = conjugate_divisor(group.elements[i], d).apply(cochain[i])
        if img != d:
            raise InternalInconsistency("witness does not carry sigma(D) to D")
    fom = fixed_subtower(group, h)
    return ModuliData(group, h, cochain, fom, d)


# ---------------------------------------------------------------------------
# descent cocycle
# ---------------------------------------------------------------------------

class Cocycle:
    """The coboundary defect c_{sigma,tau} of the witness cochain, valued
    in Aut(P1, D)."""

    __slots__ = ("values", "h_indices", "group")

    def __init__(self, values: dict[tuple[int, int], Mobius],
                 h_indices: tuple[int, ...], group: GaloisGroup):
        self.values = values
        self.h_indices = h_indices
        self.group = group

    def is_trivial_cochain(self) -> bool:
        return all(v.is_identity() for v in self.values.values())

    def __repr__(self) -> str:
        nontriv = sum(1 for v in self.values.values() if not v.is_identity())
        return f"Cocycle({nontriv} nontrivial of {len(self.values)})"


def descent_cocycle(data: ModuliData, d: Optional[Divisor] = None,
                    check_identity: bool = True) -> Cocycle:
    """c_{sigma,tau} = phi_sigma o sigma(phi_tau) o phi_{sigma tau}^-1.

    Each value is verified to stabilize D; the twisted 2-cocycle identity
    is asserted exactly over all of H^3 unless disabled.
    """
    if d is None:
        d = data.divisor
    group = data.group
    h = data.h_indices
    phi = data.cochain
    values: dict[tuple[int, int], Mobius] = {}
    for i in h:
        si = group.elements[i]
        for j in h:
            ij = group.table[i][j]
            c = phi[i].compose(conjugate_mobius(si, phi[j])) \
                .compose(phi[ij].inverse())
            if d.apply(c) != d:
                raise InternalInconsistency("cocycle value moves the divisor")
            values[(i, j)] = c
    coc = Cocycle(values, h, group)
    if check_identity:
        for i in h:
            si = group.elements[i]
            for j in h:
                ij = group.table[i][j]
                for k in h:
                    jk = group.table[j][k]
                    lhs = values[(i, j)].compose(values[(ij, k)])
                    twisted = phi[i].compose(
                        conjugate_mobius(si, values[(j, k)])).compose(
                        phi[i].inverse())
                    rhs = twisted.compose(values[(i, jk)])
                    if lhs != rhs:
                        raise InternalInconsistency("2-cocycle identity fails")
    return coc


# ---------------------------------------------------------------------------
# small exact matrix helpers over a tower
# ---------------------------------------------------------------------------

def _mat3_mul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(1, 3)),
                 start=a[i][0] * b[0][j]) for j in range(3)] for i in range(3)]


def _mat3_vec(a, v):
    return [sum((a[i][k] * v[k] for k in range(1, 3)), start=a[i][0] * v[0])
            for i in range(3)]


def _mat3_det(a):
    return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))


def _mat3_inv(a):
    det = _mat3_det(a)
    if not det:
        raise InternalInconsistency("singular 3x3 matrix")
    inv_det = 1 / det if isinstance(det, Fraction) else det.inverse()
    cof = [[(a[(i + 1) % 3][(j + 1) % 3] * a[(i + 2) % 3][(j + 2) % 3]
             - a[(i + 1) % 3][(j + 2) % 3] * a[(i + 2) % 3][(j + 1) % 3])
            for i in range(3)] for j in range(3)]
    return [[cof[i][j] * inv_det for j in range(3)] for i in range(3)]


def _mat3_aut(sigma: GaloisAut, a):
    return [[sigma(a[i][j]) for j in range(3)] for i in range(3)]


def _vec3_aut(sigma: GaloisAut, v):
    return [sigma(x) for x in v]


def _veronese_q(u, v):
    """The Veronese quadric as a bilinear form: (u0 v2 + u2 v0)/2 - u1 v1."""
    return (u[0] * v[2] + u[2] * v[0]) * F(1, 2) - u[1] * v[1]


def _sym2_over_det(m: Mobius):
    """Symmetric square of a 2x2 matrix divided by its determinant; the
    canonical scale-independent action on Veronese coordinates."""
    a, b, c, d = m.entries()
    det = a * d - b * c
    inv = det.inverse()
    two = 2
    return [[a * a * inv, two * a * b * inv, b * b * inv],
            [a * c * inv, (a * d + b * c) * inv, b * d * inv],
            [c * c * inv, two * c * d * inv, d * d * inv]]


def _veronese_point(p: ProjPoint):
    x, y = p.x, p.y
    return [x * x, x * y, y * y]


# ---------------------------------------------------------------------------
# compression
# ---------------------------------------------------------------------------

class CompressionResult:
    """All artifacts of the quotient-and-descend construction."""

    __slots__ = ("m", "tower2", "kappa", "zeta", "divisor_conj", "h2_group",
                 "h2_cochain", "h2_restriction", "psi", "rho", "basis",
                 "basis_inv", "conic", "conic_gram_fom", "fom", "scale")

    def __init__(self, **kw):
        for k in self.__slots__:
            setattr(self, k, kw[k])

    def quotient_map(self, p: ProjPoint) -> ProjPoint:
        """The quotient map w -> w^m in the conjugated coordinates."""
        return ProjPoint(p.x ** self.m, p.y ** self.m)

    def __repr__(self) -> str:
        return f"CompressionResult(m={self.m}, conic={self.conic!r})"


def _lift_subgroup(tower2: FieldTower, base: FieldTower, group: GaloisGroup,
                   h_indices: Iterable[int]) -> tuple[GaloisGroup, dict]:
    """All automorphisms of tower2 extending the given subgroup of the
    base tower's group; also the restriction map to base indices.

    tower2 is the base tower plus at most one extra quadratic step. The
    result is Gal(tower2 / fixed field of H), of size |H| or 2|H|.
    """
    lifts: list[GaloisAut] = []
    restriction: dict = {}
    extra = tower2.level - base.level
    if extra not in (0, 1):
        raise InternalInconsistency("tower2 must extend the base by one step")
    rad = base.element(tower2.rad_coords[base.level]) if extra else None
    for i in h_indices:
        sigma = group.elements[i]
        images = [tower2.embed(img) for img in sigma.images]
        if extra == 0:
            aut = GaloisAut(tower2, tuple(images))
            lifts.append(aut)
            restriction[aut.key()] = i
            continue
        conj = tower2.embed(sigma(rad))
        root = conj.sqrt()
        if root is None:
            raise DescentFailure(
                "conjugated fixed-point radicand has no square root; the "
                "automorphism does not extend")
        for r in (root, -root):
            aut = GaloisAut(tower2, tuple(images + [r]))
            lifts.append(aut)
            restriction[aut.key()] = i
    g2 = GaloisGroup(tower2, tuple(lifts))
    restr = {k: restriction[g2.elements[k].key()] for k in range(g2.order)}
    return g2, restr


def compression(d: Divisor, data: ModuliData,
                aut: Optional[AutGroup] = None) -> CompressionResult:
    """The conic model of P1/Aut over the field of moduli.

    Requires cyclic Aut; the quotient is taken in coordinates where a
    generator acts as w -> zeta w, and the Veronese embedding of the
    target is descended through the exact symmetric-square cocycle.
    """
    if aut is None:
        aut = compute_aut(d)
    if not aut.is_cyclic():
        raise NonCyclicAut("compression implemented for cyclic Aut only")
    m = aut.order
    base = d.tower

    if m == 1:
        tower2 = base
        kappa = Mobius.identity(base)
        zeta = base.one()
    else:
        gen = aut.generator()
        res = mobius_order_and_fixed(gen, max_order=max(24, m))
        if res.order != m:
            raise InternalInconsistency("generator order mismatch")
        tower2 = res.tower
        p_plus, p_minus = res.fixed
        kappa = Mobius(p_plus.y, -p_plus.x, p_minus.y, -p_minus.x)
        gen2 = gen.embed(tower2)
        gtilde = kappa.compose(gen2).compose(kappa.inverse())
        if not (gtilde.b.is_zero() and gtilde.c.is_zero()):
            raise InternalInconsistency("conjugated generator is not diagonal")
        zeta = gtilde.a / gtilde.d
        if zeta ** m != tower2.one():
            raise InternalInconsistency("scaling factor is not an m-th root of 1")

    h2, restr = _lift_subgroup(tower2, base, data.group, data.h_indices)
    cochain2 = {k: data.cochain[restr[k]].embed(tower2)
                for k in range(h2.order)}
    d2 = d.embed(tower2).apply(kappa)

    # twisted maps phi~ = kappa o phi o s(kappa)^-1 stabilize the moved divisor
    phit: dict[int, Mobius] = {}
    for k in range(h2.order):
        s = h2.elements[k]
        phit[k] = kappa.compose(cochain2[k]).compose(
            conjugate_mobius(s, kappa).inverse())
        if conjugate_divisor(s, d2).apply(phit[k]) != d2:
            raise InternalInconsistency("twisted witness fails on moved divisor")

    # descend each phi~ through q(w) = w^m via three rational sections
    def qpow(p: ProjPoint) -> ProjPoint:
        return ProjPoint(p.x ** m, p.y ** m)

    sections = [ProjPoint.finite(tower2.from_rational(2)),
                ProjPoint.finite(tower2.from_rational(3)),
                ProjPoint.infinity(tower2)]
    check_pt = ProjPoint.finite(tower2.from_rational(5))
    psi: dict[int, Mobius] = {}
    for k in range(h2.order):
        srcs = [qpow(w) for w in sections]
        dsts = [qpow(phit[k](w)) for w in sections]
        psi[k] = mobius_from_triples(*srcs, *dsts)
        if psi[k](qpow(check_pt)) != qpow(phit[k](check_pt)):
            raise DescentFailure("quotient map does not descend the witness")
    for i in range(h2.order):
        si = h2.elements[i]
        for j in range(h2.order):
            composed = psi[i].compose(conjugate_mobius(si, psi[j]))
            if composed != psi[h2.table[i][j]]:
                raise InternalInconsistency("1-cocycle identity fails for psi")

    # exact matrix cocycle on Veronese coordinates
    rho = {k: _sym2_over_det(psi[k]) for k in range(h2.order)}
    for i in range(h2.order):
        si = h2.elements[i]
        for j in range(h2.order):
            prod = _mat3_mul(rho[i], _mat3_aut(si, rho[j]))
            if prod != rho[h2.table[i][j]]:
                raise InternalInconsistency("matrix cocycle has scalar slack")

    # averaging projector onto the rational 3-space
    inv_n = F(1, h2.order)
    def project(v):
        acc = None
        for k in range(h2.order):
            term = _mat3_vec(rho[k], _vec3_aut(h2.elements[k], v))
            acc = term if acc is None else [acc[t] + term[t] for t in range(3)]
        return [x * inv_n for x in acc]

    # probing the projector with every coordinate vector scaled by every
    # basis element of the tower reaches the whole fixed space; rational
    # probes alone can land in a proper subspace
    zero = tower2.from_rational(0)
    candidates = []
    for j in range(tower2.degree):
        alpha = tower2.element([1 if t == j else 0 for t in range(tower2.degree)])
        for i in range(3):
            candidates.append([alpha if i == r else zero for r in range(3)])
    rng = random.Random(71520260)
    basis_cols: list[list[FieldElem]] = []
    attempts = 0
    max_attempts = len(candidates) + 12
    while len(basis_cols) < 3 and attempts < max_attempts:
        if candidates:
            cand = candidates.pop(0)
        else:
            cand = [tower2.from_rational(F(rng.randint(-9, 9), rng.randint(1, 3)))
                    for _ in range(3)]
        attempts += 1
        w = project(cand)
        for k in range(h2.order):
            if _mat3_vec(rho[k], _vec3_aut(h2.elements[k], w)) != w:
                raise InternalInconsistency("projector output is not fixed")
        trial = basis_cols + [w]
        if _cols_independent(trial):
            basis_cols = trial
    if len(basis_cols) < 3:
        raise DescentFailure("fixed space has dimension < 3")
    basis = [[basis_cols[c][r] for c in range(3)] for r in range(3)]
    basis_inv = _mat3_inv(basis)

    # conic = B^T Q B, entries provably in the field of moduli
    gram2 = [[_veronese_q(basis_cols[i], basis_cols[j]) for j in range(3)]
             for i in range(3)]
    fom = data.fom
    gram_fom = [[_restrict_to_fom(gram2[i][j], base, fom) for j in range(3)]
                for i in range(3)]
    conic = None
    scale = F(1)
    if data.fom_is_q:
        flat = [gram_fom[i][j].as_fraction() for i in range(3) for j in range(3)]
        scale = _integralizing_scale(flat)
        conic = TernaryForm([[x * scale for x in
                              (gram_fom[i][0].as_fraction(),
                               gram_fom[i][1].as_fraction(),
                               gram_fom[i][2].as_fraction())]
                             for i in range(3)])
        if not conic.is_nonsingular():
            raise InternalInconsistency("compression conic is singular")

    return CompressionResult(
        m=m, tower2=tower2, kappa=kappa, zeta=zeta, divisor_conj=d2,
        h2_group=h2, h2_cochain=cochain2, h2_restriction=restr, psi=psi,
        rho=rho, basis=basis, basis_inv=basis_inv, conic=conic,
        conic_gram_fom=gram_fom, fom=fom, scale=scale)


def _cols_independent(cols) -> bool:
    """Linear independence over the tower (not merely over Q; a fixed
    vector and a tower multiple of it are Q-independent but useless)."""
    k = len(cols)
    if k == 1:
        return any(not x.is_zero() for x in cols[0])
    if k == 2:
        u, v = cols
        return any(not (u[i] * v[j] - u[j] * v[i]).is_zero()
                   for i in range(3) for j in range(i + 1, 3))
    mat = [[cols[c][r] for c in range(3)] for r in range(3)]
    return not _mat3_det(mat).is_zero()


def _restrict_to_fom(x: FieldElem, base: FieldTower,
                     fom: SubfieldPresentation) -> FieldElem:
    """Move an element of tower2 known to lie in the field of moduli into
    the fom presentation (fom sits inside the base tower)."""
    if x.tower == base:
        return fom.restrict(x)
    deg = base.degree
    if any(x.coords[deg:]):
        raise InternalInconsistency("conic entry does not lie in the base tower")
    return fom.restrict(base.element(x.coords[:deg]))


def _integralizing_scale(values: list[Fraction]) -> Fraction:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    nums = [abs(int(v * den)) for v in values if v != 0]
    g = 0
    for n in nums:
        g = math.gcd(g, n)
    scale = Fraction(den, g if g else 1)
    lead = next((v for v in values if v != 0), F(1))
    if lead * scale < 0:
        scale = -scale
    return scale


# ---------------------------------------------------------------------------
# compressed divisor
# ---------------------------------------------------------------------------

class CompressedDivisor:
    """Galois orbits of the image of D on the descended conic."""

    __slots__ = ("orbits", "degrees")

    def __init__(self, orbits, degrees):
        self.orbits = orbits
        self.degrees = degrees

    @property
    def total_degree(self) -> int:
        return sum(self.degrees)

    def all_degrees_even(self) -> bool:
        return all(deg % 2 == 0 for deg in self.degrees)

    def __repr__(self) -> str:
        return f"CompressedDivisor(degrees={self.degrees})"


def compressed_divisor(d: Divisor, data: ModuliData,
                       comp: CompressionResult) -> CompressedDivisor:
    """Image points of D under the quotient map, grouped into orbits of
    the twisted Galois action and written in conic coordinates."""
    images = []
    seen = set()
    for p in comp.divisor_conj.points:
        q = comp.quotient_map(p)
        key = (q.x.coords, q.y.coords)
        if key not in seen:
            seen.add(key)
            images.append(q)
    h2 = comp.h2_group
    point_set = {(q.x.coords, q.y.coords) for q in images}
    orbits = []
    degrees = []
    remaining = list(images)
    while remaining:
        start = remaining[0]
        orbit = {}
        stack = [start]
        while stack:
            y = stack.pop()
            key = (y.x.coords, y.y.coords)
            if key in orbit:
                continue
            orbit[key] = y
            for k in range(h2.order):
                s = h2.elements[k]
                moved = comp.psi[k](ProjPoint(s(y.x), s(y.y)))
                mkey = (moved.x.coords, moved.y.coords)
                if mkey not in point_set:
                    raise InternalInconsistency(
                        "twisted action does not permute the image points")
                if mkey not in orbit:
                    stack.append(moved)
        orbits.append([orbit[k] for k in sorted(orbit)])
        degrees.append(len(orbit))
        remaining = [y for y in remaining
                     if (y.x.coords, y.y.coords) not in orbit]
    # conic coordinates: v = B^{-1} (y0^2, y0 y1, y1^2)
    coord_orbits = []
    for orbit in orbits:
        coords = []
        for y in orbit:
            v = _mat3_vec(comp.basis_inv, _veronese_point(y))
            lead = next(x for x in v if not x.is_zero())
            inv = lead.inverse()
            coords.append(tuple(x * inv for x in v))
        coord_orbits.append(coords)
    order = sorted(range(len(orbits)), key=lambda t: (degrees[t],
                   [tuple(c.coords for c in pt) for pt in coord_orbits[t]]))
    return CompressedDivisor([coord_orbits[t] for t in order],
                             [degrees[t] for t in order])


# ---------------------------------------------------------------------------
# ramification ledger
# ---------------------------------------------------------------------------

class RamificationLedger:
    """Ramification data of a tame covering of the line."""

    __slots__ = ("entries", "branch", "covering_degree")

    def __init__(self, entries, branch, covering_degree):
        self.entries = entries  # (label, e, d, residue degree)
        self.branch = branch    # (label, degree)
        self.covering_degree = covering_degree
        for (_, e, dd, _) in entries:
            if dd != e - 1:
                raise InternalInconsistency("tame entry must have d = e - 1")
        total = sum(dd * res for (_, _, dd, res) in entries)
        if total != 2 * covering_degree - 2:
            raise InternalInconsistency("Riemann-Hurwitz sum is off")

    def __repr__(self) -> str:
        return (f"RamificationLedger(degree={self.covering_degree}, "
                f"entries={self.entries})")


def quotient_ramification(m: int) -> RamificationLedger:
    """The ledger of w -> w^m: 0 and infinity totally ramified."""
    if m < 2:
        raise ValueError("quotient ramification needs m >= 2")
    entries = [("0", m, m - 1, 1), ("infinity", m, m - 1, 1)]
    branch = [("0", 1), ("infinity", 1)]
    return RamificationLedger(entries, branch, m)


# ---------------------------------------------------------------------------
# quaternion decomposition of the obstruction class
# ---------------------------------------------------------------------------

def cocycle_class_to_quaternion(coc: Cocycle, data: ModuliData
                                ) -> list[tuple[int, int]]:
    """The class of a {+-1}-valued 2-cocycle as quaternion symbols.

    Needs Aut of order at most 2 (central values), H elementary abelian
    with the base field as field of moduli. Writing H = (Z/2)^r with a
    dual basis of radicands d_i, the class decomposes via the alternating
    pairing A(u,v) = f(u,v) + f(v,u) into symbols (d_i, d_j), and via the
    diagonal Q(u) = f(u,u) into symbols (d_i, -1); both are coboundary
    invariants, so no normal form of the cocycle is needed.
    """
    group = data.group
    h = data.h_indices
    nontrivial = [v for v in coc.values.values() if not v.is_identity()]
    for v in nontrivial:
        if not _is_involution(v) or v != nontrivial[0]:
            raise UnsupportedAut(
                "cocycle values must lie in a single group of order 2")
    if not data.fom_is_q:
        raise NonElementaryGaloisQuotient(
            "decomposition implemented over Q only")
    for i in h:
        for j in h:
            if group.table[i][j] != group.table[j][i] or \
                    group.table[i][i] != 0:
                raise NonElementaryGaloisQuotient(
                    "H must be elementary 2-abelian")

    def bit(i: int, j: int) -> int:
        return 0 if coc.values[(i, j)].is_identity() else 1

    # greedy basis of H in canonical order
    basis: list[int] = []
    span = {0}
    for i in h:
        if i in span:
            continue
        basis.append(i)
        span = set(group.subgroup_closure(basis))
    r = len(basis)
    if (1 << r) != len(h):
        raise InternalInconsistency("basis does not span H")

    # dual radicands: d_i is fixed by every basis element except e_i
    rads: list[int] = []
    for i in range(r):
        others = [basis[j] for j in range(r) if j != i]
        pres = fixed_subtower(group, group.subgroup_closure(others))
        if pres.tower.level != 1:
            raise InternalInconsistency("dual fixed field is not quadratic")
        rad = pres.tower.rational_radicands()[0]
        if rad.denominator != 1:
            raise InternalInconsistency("radicand must be an integer")
        rads.append(int(rad))

    symbols: list[tuple[int, int]] = []
    for i in range(r):
        for j in range(i + 1, r):
            a_ij = (bit(basis[i], basis[j]) + bit(basis[j], basis[i])) % 2
            if a_ij:
                symbols.append((rads[i], rads[j]))
        if bit(basis[i], basis[i]):
            symbols.append((rads[i], -1))
    return symbols


def _is_involution(m: Mobius) -> bool:
    return m.compose(m).is_identity()
