"""Ternary quadratic forms over Q: diagonalization, local solvability,
rational points, and parametrization of plane conics.

Solvability is decided by Hilbert symbols at the relevant places (the
infinite place, 2, and the odd primes dividing the diagonal
coefficients). Points are produced by the classical descent on the
two-term Legendre equation x^2 = A y^2 + B z^2, replacing B by the
squarefree part of (w^2 - A)/B for a square root w of A modulo |B|
until a unit coefficient appears. All arithmetic is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from . import linalg
from .errors import (
    InternalInconsistency,
    PointNotOnConic,
    SearchExhausted,
    SingularForm,
)
from .intmath import (
    TRIAL_BOUND,
    crt,
    factorint,
    fraction_sqrt,
    sqrt_mod_prime,
    squarefree_part,
)

Place = Union[str, int]  # "infinity" or a prime
INFINITE_PLACE: Place = "infinity"

Coord = Union[Fraction, "object"]  # Fraction or FieldElem-like


class TernaryForm:
    """A symmetric 3x3 rational Gram matrix, viewed as a plane conic."""

    __slots__ = ("gram",)

    def __init__(self, gram: Sequence[Sequence[Fraction]]):
        g = [[Fraction(gram[i][j]) for j in range(3)] for i in range(3)]
        for i in range(3):
            for j in range(3):
                if g[i][j] != g[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        self.gram = tuple(tuple(row) for row in g)

    @staticmethod
    def diagonal(a, b, c) -> "TernaryForm":
        z = Fraction(0)
        return TernaryForm([[Fraction(a), z, z],
                            [z, Fraction(b), z],
                            [z, z, Fraction(c)]])

    @staticmethod
    def from_upper(entries: Sequence) -> "TernaryForm":
        """Build from the 6 upper-triangle entries (g00,g01,g02,g11,g12,g22);
        off-diagonal inputs are the full mixed coefficients of the conic,
        halved into the Gram matrix."""
        g00, g01, g02, g11, g12, g22 = (Fraction(e) for e in entries)
        h = Fraction(1, 2)
        return TernaryForm([[g00, g01 * h, g02 * h],
                            [g01 * h, g11, g12 * h],
                            [g02 * h, g12 * h, g22]])

    def upper(self) -> list[Fraction]:
        g = self.gram
        return [g[0][0], 2 * g[0][1], 2 * g[0][2], g[1][1], 2 * g[1][2], g[2][2]]

    def det(self) -> Fraction:
        return linalg.det([list(r) for r in self.gram])

    def is_nonsingular(self) -> bool:
        return self.det() != 0

    def evaluate(self, point: Sequence[Coord]):
        x0, x1, x2 = point
        g = self.gram
        acc = None
        for i, xi in enumerate((x0, x1, x2)):
            for j, xj in enumerate((x0, x1, x2)):
                term = xi * xj * g[i][j]
                acc = term if acc is None else acc + term
        return acc

    def polar(self, p: Sequence[Coord], q: Sequence[Coord]):
        """The symmetric bilinear form B(p, q) with B(x, x) = f(x)."""
        g = self.gram
        acc = None
        for i in range(3):
            for j in range(3):
                if g[i][j]:
                    term = p[i] * q[j] * g[i][j]
                    acc = term if acc is None else acc + term
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, TernaryForm) and self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def __repr__(self) -> str:
        return f"TernaryForm({[list(r) for r in self.gram]})"


class PlaceEval:
    """A Hilbert-symbol evaluation at one place."""

    __slots__ = ("place", "symbol")

    def __init__(self, place: Place, symbol: int):
        if symbol not in (1, -1):
            raise ValueError("symbol must be +1 or -1")
        self.place = place
        self.symbol = symbol

    def __eq__(self, other) -> bool:
        return (isinstance(other, PlaceEval) and self.place == other.place
                and self.symbol == other.symbol)

    def __hash__(self) -> int:
        return hash((self.place, self.symbol))

    def __repr__(self) -> str:
        return f"PlaceEval({self.place}, {self.symbol:+d})"


# ---------------------------------------------------------------------------
# diagonalization
# ---------------------------------------------------------------------------

def _col_addmul(g, b, dst: int, src: int, r: Fraction) -> None:
    # congruence x_dst -> x_dst + r x_src: add r * (row/col src) into dst
    for k in range(3):
        g[k][dst] += r * g[k][src]
    for k in range(3):
        g[dst][k] += r * g[src][k]
    for k in range(3):
        b[k][dst] += r * b[k][src]


def _col_swap(g, b, i: int, j: int) -> None:
    for k in range(3):
        g[k][i], g[k][j] = g[k][j], g[k][i]
    for k in range(3):
        g[i][k], g[j][k] = g[j][k], g[i][k]
    for k in range(3):
        b[k][i], b[k][j] = b[k][j], b[k][i]


def _col_scale(g, b, i: int, r: Fraction) -> None:
    for k in range(3):
        g[k][i] *= r
    for k in range(3):
        g[i][k] *= r
    for k in range(3):
        b[k][i] *= r


def diagonalize(f: TernaryForm) -> tuple[tuple[int, int, int], linalg.Matrix]:
    """Exact congruence diagonalization with squarefree integer entries.

    Returns (coefficients, B) with B^T G B = diag(coefficients); points
    of the diagonal conic map to points of f through B.
    """
    if not f.is_nonsingular():
        raise SingularForm("conic operations need a nonsingular form")
    g = [list(r) for r in f.gram]
    b = [list(r) for r in linalg.identity(3)]
    for i in range(3):
        if g[i][i] == 0:
            swap = next((j for j in range(i + 1, 3) if g[j][j] != 0), None)
            if swap is not None:
                _col_swap(g, b, i, swap)
            else:
                j = next(j for j in range(i + 1, 3) if g[i][j] != 0)
                _col_addmul(g, b, i, j, Fraction(1))
        for j in range(i + 1, 3):
            if g[i][j] != 0:
                _col_addmul(g, b, j, i, -g[i][j] / g[i][i])
    coeffs = []
    for i in range(3):
        d = g[i][i]
        target = squarefree_part(d)
        r = fraction_sqrt(Fraction(target) / d)
        if r is None:
            raise InternalInconsistency("squarefree rescale failed")
        _col_scale(g, b, i, r)
        coeffs.append(target)
    check = linalg.mat_mul(linalg.mat_mul(linalg.transpose(b),
                                          [list(r) for r in f.gram]), b)
    if check != [[Fraction(coeffs[i]) if i == j else Fraction(0)
                  for j in range(3)] for i in range(3)]:
        raise InternalInconsistency("congruence verification failed")
    return (coeffs[0], coeffs[1], coeffs[2]), b


# ---------------------------------------------------------------------------
# Hilbert symbols
# ---------------------------------------------------------------------------

def _split_valuation(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def _legendre_unit(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def hilbert_symbol(a, b, place: Place) -> int:
    """The Hilbert symbol (a, b) at a place of Q, by the closed formulas."""
    a = Fraction(a)
    b = Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    ai = squarefree_part(a)
    bi = squarefree_part(b)
    if place == INFINITE_PLACE:
        return -1 if (ai < 0 and bi < 0) else 1
    p = place
    if p == 2:
        alpha, u = _split_valuation(abs(ai), 2)
        beta, v = _split_valuation(abs(bi), 2)
        u = u if ai > 0 else -u
        v = v if bi > 0 else -v
        eps_u = ((u - 1) // 2) % 2
        eps_v = ((v - 1) // 2) % 2
        omega_u = ((u * u - 1) // 8) % 2
        omega_v = ((v * v - 1) // 8) % 2
        e = eps_u * eps_v + alpha * omega_v + beta * omega_u
        return -1 if e % 2 else 1
    alpha, u = _split_valuation(abs(ai), p)
    beta, v = _split_valuation(abs(bi), p)
    u = u if ai > 0 else -u
    v = v if bi > 0 else -v
    s = 1
    if alpha % 2 and beta % 2 and (p - 1) // 2 % 2:
        s = -s
    if beta % 2 and _legendre_unit(u, p) == -1:
        s = -s
    if alpha % 2 and _legendre_unit(v, p) == -1:
        s = -s
    return s


def hasse_solvable(f: TernaryForm, factor_bound: int = TRIAL_BOUND
                   ) -> tuple[bool, list[PlaceEval]]:
    """Global solvability of the conic and the places where it fails.

    Diagonalizes to (a, b, c), reduces to the symbol (-ac, -bc), and
    evaluates it at infinity, 2, and the odd primes dividing abc.
    Reciprocity (an even number of failing places) is asserted.
    """
    (a, b, c), _ = diagonalize(f)
    aa, bb = -a * c, -b * c
    places: list[Place] = [INFINITE_PLACE, 2]
    primes = sorted(q for q in factorint(abs(a * b * c), factor_bound) if q > 2)
    places.extend(primes)
    failing = [PlaceEval(v, -1) for v in places
               if hilbert_symbol(aa, bb, v) == -1]
    if len(failing) % 2:
        raise InternalInconsistency("odd number of failing places")
    return not failing, failing


# ---------------------------------------------------------------------------
# rational points
# ---------------------------------------------------------------------------

def _sqrt_mod_squarefree(a: int, m: int, factor_bound: int) -> Optional[int]:
    """A square root of a modulo squarefree m >= 1."""
    if m == 1:
        return 0
    residues, moduli = [], []
    for p in factorint(m, factor_bound):
        if p == 2:
            residues.append(a % 2)
            moduli.append(2)
            continue
        r = sqrt_mod_prime(a % p, p)
        if r is None:
            return None
        residues.append(r)
        moduli.append(p)
    return crt(residues, moduli)


def _solve_legendre(a: int, b: int, factor_bound: int, depth: int = 0
                    ) -> tuple[int, int, int]:
    """A nontrivial (x, y, z) with x^2 = a y^2 + b z^2, for squarefree
    nonzero a, b of a globally solvable equation."""
    if depth > 200:
        raise SearchExhausted("Legendre descent exceeded its depth bound")
    if a == 1:
        return (1, 1, 0)
    if b == 1:
        return (1, 0, 1)
    if abs(a) > abs(b):
        x, y, z = _solve_legendre(b, a, factor_bound, depth + 1)
        return (x, z, y)
    if b == -1:  # then a = -1 as well: x^2 + y^2 + z^2 = 0 has no solution
        raise SearchExhausted("reached x^2 = -y^2 - z^2; input not solvable")
    w = _sqrt_mod_squarefree(a % abs(b), abs(b), factor_bound)
    if w is None:
        raise SearchExhausted("no square root of a modulo b; input not solvable")
    if w > abs(b) // 2:
        w = abs(b) - w
    t = (w * w - a) // b
    if t == 0:
        raise InternalInconsistency("squarefree coefficient turned square")
    t1 = squarefree_part(t)
    s = math.isqrt(t // t1)
    x1, y1, z1 = _solve_legendre(a, t1, factor_bound, depth + 1)
    x, y, z = w * x1 + a * y1, x1 + w * y1, t1 * s * z1
    g = math.gcd(math.gcd(x, y), z)
    return (x // g, y // g, z // g)


def _normalize_int_point(coords: Sequence[Fraction]) -> tuple[int, int, int]:
    den = math.lcm(*(c.denominator for c in coords))
    ints = [int(c * den) for c in coords]
    g = math.gcd(math.gcd(ints[0], ints[1]), ints[2])
    ints = [v // g for v in ints]
    lead = next(v for v in ints if v)
    if lead < 0:
        ints = [-v for v in ints]
    return (ints[0], ints[1], ints[2])


def _coprime_reduce(a: int, b: int, c: int, factor_bound: int
                    ) -> tuple[tuple[int, int, int], list[Fraction]]:
    """Make squarefree (a,b,c) pairwise coprime; returns the new triple
    and per-coordinate multipliers carrying points back to the input."""
    mult = [Fraction(1)] * 3
    changed = True
    while changed:
        changed = False
        g3 = math.gcd(math.gcd(a, b), c)
        if g3 > 1:
            # scaling the whole form does not move its points
            a, b, c = a // g3, b // g3, c // g3
            changed = True
            continue
        for (i, j, k) in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            trip = [a, b, c]
            g = math.gcd(trip[i], trip[j])
            if g > 1:
                p = min(factorint(g, factor_bound))
                trip[i] //= p
                trip[j] //= p
                trip[k] *= p
                # substitution x_k -> x_k / p: points of the new form map
                # back with coordinate k scaled by p
                mult[k] *= p
                a, b, c = trip
                changed = True
    return (a, b, c), mult


def find_point(f: TernaryForm, factor_bound: int = TRIAL_BOUND
               ) -> Optional[tuple[int, int, int]]:
    """An exact rational point on the conic, or None when none exists.

    Runs the Legendre descent on the diagonalized form, with a bounded
    brute-force search as a fallback; the result is verified by
    substitution before being returned.
    """
    solvable, _ = hasse_solvable(f, factor_bound)
    if not solvable:
        return None
    (a0, b0, c0), basis = diagonalize(f)
    (a, b, c), mult = _coprime_reduce(a0, b0, c0, factor_bound)
    try:
        x, y, z = _solve_legendre(-a * c, -b * c, factor_bound)
        diag_pt = [Fraction(c * y), Fraction(c * z), Fraction(x)]
    except SearchExhausted:
        diag_pt = None
    if diag_pt is not None:
        reduced = TernaryForm.diagonal(a, b, c)
        if reduced.evaluate(diag_pt) != 0:
            raise InternalInconsistency("descent produced a non-point")
        back = [diag_pt[i] * mult[i] for i in range(3)]
        orig = linalg.mat_vec(basis, back)
        point = _normalize_int_point(orig)
        if f.evaluate([Fraction(v) for v in point]) != 0:
            raise InternalInconsistency("basis mapping produced a non-point")
        return point
    point = _bounded_search(f, 200)
    if point is None:
        raise SearchExhausted("solvable form but no point found")
    return point


def _bounded_search(f: TernaryForm, height: int) -> Optional[tuple[int, int, int]]:
    for h in range(1, height + 1):
        for x in range(-h, h + 1):
            for y in range(-h, h + 1):
                for z in range(-h, h + 1):
                    if max(abs(x), abs(y), abs(z)) != h:
                        continue
                    if x == 0 and y == 0 and z == 0:
                        continue
                    if f.evaluate([Fraction(x), Fraction(y), Fraction(z)]) == 0:
                        return _normalize_int_point(
                            [Fraction(x), Fraction(y), Fraction(z)])
    return None


# ---------------------------------------------------------------------------
# parametrization
# ---------------------------------------------------------------------------

class Parametrization:
    """A degree-2 map from the projective line onto a conic.

    ``coeffs[i]`` holds (alpha, beta, gamma) with
    X_i(s, t) = alpha s^2 + beta s t + gamma t^2.
    """

    __slots__ = ("form", "coeffs")

    def __init__(self, form: TernaryForm, coeffs):
        self.form = form
        self.coeffs = coeffs

    def apply(self, s: Coord, t: Coord) -> tuple:
        out = []
        for alpha, beta, gamma in self.coeffs:
            out.append(s * s * alpha + s * t * beta + t * t * gamma)
        return tuple(out)

    def __repr__(self) -> str:
        return f"Parametrization({self.coeffs!r})"


def _quartic_coeffs(q1, q2, gval):
    """gval * (quadratic q1) * (quadratic q2) as quartic coefficients."""
    out = [None] * 5
    for i, u in enumerate(q1):
        for j, v in enumerate(q2):
            term = u * v * gval
            k = i + j
            out[k] = term if out[k] is None else out[k] + term
    return out


def parametrize(f: TernaryForm, point: Sequence[Coord]) -> Parametrization:
    """Parametrize the conic by residual intersection of lines through a
    given point of it.

    The point's coordinates may live in any exact field containing the
    rationals; the parametrization inherits that field. The substitution
    identity f(X(s, t)) = 0 is verified exactly on the coefficients.
    """
    p = list(point)
    fp = f.evaluate(p)
    if not _is_zero_val(fp):
        raise PointNotOnConic(f"f(p) = {fp!r} is nonzero")
    lead = next(i for i in range(3) if not _is_zero_val(p[i]))
    others = [i for i in range(3) if i != lead]
    basis_vecs = []
    for idx in others:
        v = [Fraction(0)] * 3
        v[idx] = Fraction(1)
        basis_vecs.append(v)
    u, w = basis_vecs
    fu, fw = f.evaluate(u), f.evaluate(w)
    buw = f.polar(u, w)
    bpu = f.polar(p, u)
    bpw = f.polar(p, w)
    coeffs = []
    for i in range(3):
        alpha = p[i] * fu - 2 * (bpu * u[i])
        beta = p[i] * (2 * buw) - 2 * (bpu * w[i]) - 2 * (bpw * u[i])
        gamma = p[i] * fw - 2 * (bpw * w[i])
        coeffs.append((alpha, beta, gamma))
    quartic = [None] * 5
    for i in range(3):
        for j in range(3):
            gij = f.gram[i][j]
            if gij == 0:
                continue
            part = _quartic_coeffs(coeffs[i], coeffs[j], gij)
            for k in range(5):
                if part[k] is None:
                    continue
                quartic[k] = part[k] if quartic[k] is None else quartic[k] + part[k]
    for k in range(5):
        if quartic[k] is not None and not _is_zero_val(quartic[k]):
            raise InternalInconsistency("parametrization does not satisfy the form")
    if all(_is_zero_val(c) for triple in coeffs for c in triple):
        raise InternalInconsistency("degenerate parametrization")
    return Parametrization(f, tuple(coeffs))


def _is_zero_val(v) -> bool:
    return v == 0
