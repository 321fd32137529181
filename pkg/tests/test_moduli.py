import random
from fractions import Fraction as F

import pytest

from p1moduli.conic import find_point, hilbert_symbol
from p1moduli.divisor import Divisor, compute_aut, conjugate_divisor
from p1moduli.errors import (
    NonCyclicAut,
    NonElementaryGaloisQuotient,
    UnsupportedAut,
)
from p1moduli.moduli import (
    Cocycle,
    ModuliData,
    _mat3_inv,
    _mat3_mul,
    _mat3_vec,
    cocycle_class_to_quaternion,
    compressed_divisor,
    compression,
    descent_cocycle,
    field_of_moduli,
    quotient_ramification,
)
from p1moduli.projline import Mobius, ProjPoint
from p1moduli.qfield import FieldTower, fixed_subtower, galois_group, tower_extend

QQ = FieldTower()


def fin(tower, value):
    return ProjPoint.finite(tower.from_rational(F(value)))


def elem(tower, coords):
    return ProjPoint.finite(tower.element(coords))


def q_i_pentagon():
    """{i, 0, 1, -1, oo} over Q(i); Aut is Z/4 rotating the harmonic part."""
    t = tower_extend(QQ, F(-1)).tower
    pts = [elem(t, [0, 1]), fin(t, 0), fin(t, 1), fin(t, -1),
           ProjPoint.infinity(t)]
    return Divisor(pts)


def sqrt2_five_points():
    t = tower_extend(QQ, F(2)).tower
    r = t.root(0)
    return Divisor([ProjPoint.finite(r), ProjPoint.finite(-r),
                    fin(t, 0), fin(t, 1), fin(t, 3)])


def rational_involution_six():
    """{1, 2, -1, -2, 3, 2/3}: stable under z -> 2/z and nothing else."""
    return Divisor([fin(QQ, 1), fin(QQ, 2), fin(QQ, -1), fin(QQ, -2),
                    fin(QQ, 3), fin(QQ, F(2, 3))])


def biquadratic_five_points():
    t1 = tower_extend(QQ, F(2)).tower
    t2 = tower_extend(t1, F(3)).tower
    r2 = t2.element([0, 1, 0, 0])
    r3 = t2.element([0, 0, 1, 0])
    return Divisor([ProjPoint.finite(r2), ProjPoint.finite(-r2),
                    ProjPoint.finite(r3), ProjPoint.finite(-r3), fin(t2, 1)])


# ---------------------------------------------------------------------------
# field of moduli
# ---------------------------------------------------------------------------

def test_fom_is_q_when_divisor_is_stable():
    d = sqrt2_five_points()
    data = field_of_moduli(d)
    assert len(data.h_indices) == 2
    assert data.fom_is_q
    assert data.fom.tower.level == 0


def test_fom_biquadratic_full_group():
    d = biquadratic_five_points()
    data = field_of_moduli(d)
    assert len(data.h_indices) == 4
    assert data.fom_is_q


def test_fom_proper_subfield():
    t = tower_extend(QQ, F(2)).tower
    r = t.root(0)
    d = Divisor([ProjPoint.finite(r), ProjPoint.finite(t.from_rational(2) + r),
                 fin(t, 5), fin(t, 0), fin(t, 1)])
    data = field_of_moduli(d)
    assert data.h_indices == (0,)
    assert not data.fom_is_q
    assert data.fom.tower.level == 1
    assert data.fom.tower.rational_radicands() == [F(2)]


def test_fom_witnesses_carry_conjugate_back():
    d = q_i_pentagon()
    data = field_of_moduli(d)
    assert len(data.h_indices) == 2  # the full group of Q(i)
    for i in data.h_indices:
        sigma = data.group.elements[i]
        assert conjugate_divisor(sigma, d).apply(data.cochain[i]) == d


def test_fom_nontrivial_witness_needed():
    # sigma(D) != D for the pentagon, so the witness is a real motion
    d = q_i_pentagon()
    data = field_of_moduli(d)
    moved = [i for i in data.h_indices
             if conjugate_divisor(data.group.elements[i], d) != d]
    assert moved
    assert all(not data.cochain[i].is_identity() for i in moved)


# ---------------------------------------------------------------------------
# descent cocycle
# ---------------------------------------------------------------------------

def test_cocycle_trivial_for_stable_divisors():
    d = biquadratic_five_points()
    data = field_of_moduli(d)
    coc = descent_cocycle(data)
    assert coc.is_trivial_cochain()
    assert len(coc.values) == 16


def test_cocycle_values_stabilize_divisor():
    d = q_i_pentagon()
    data = field_of_moduli(d)
    coc = descent_cocycle(data)
    for v in coc.values.values():
        assert d.apply(v) == d


# ---------------------------------------------------------------------------
# compression
# ---------------------------------------------------------------------------

def test_compression_order_four_pentagon():
    d = q_i_pentagon()
    aut = compute_aut(d)
    assert aut.tag.label() == "cyclic(4)"
    data = field_of_moduli(d, aut)
    comp = compression(d, data, aut)
    assert comp.m == 4
    one = comp.tower2.one()
    assert comp.zeta ** 4 == one and comp.zeta ** 2 != one
    # conic of a rationally compressible divisor must have a point
    assert find_point(comp.conic) is not None


def test_compression_extends_tower_for_irrational_fixed_points():
    d = rational_involution_six()
    aut = compute_aut(d)
    assert aut.order == 2
    data = field_of_moduli(d, aut)
    comp = compression(d, data, aut)
    assert d.tower.level == 0 and comp.tower2.level == 1
    assert comp.h2_group.order == 2
    assert find_point(comp.conic) is not None


def test_compression_trivial_aut_descends_whole_line():
    d = sqrt2_five_points()
    data = field_of_moduli(d)
    comp = compression(d, data)
    assert comp.m == 1
    assert find_point(comp.conic) is not None


def test_compression_recovers_veronese_quadric():
    d = q_i_pentagon()
    data = field_of_moduli(d)
    comp = compression(d, data)
    t2 = comp.tower2
    gram = [[t2.from_rational(comp.conic.gram[i][j]) for j in range(3)]
            for i in range(3)]
    binv = comp.basis_inv
    bt = [[binv[j][i] for j in range(3)] for i in range(3)]
    back = _mat3_mul(bt, _mat3_mul(gram, binv))
    q = [[F(0), F(0), F(1, 2)], [F(0), F(-1), F(0)], [F(1, 2), F(0), F(0)]]
    scale = comp.scale
    for i in range(3):
        for j in range(3):
            assert back[i][j] == t2.from_rational(q[i][j] * scale)


def test_compression_conic_over_proper_subfield():
    t = tower_extend(QQ, F(2)).tower
    r = t.root(0)
    d = Divisor([ProjPoint.finite(r), ProjPoint.finite(t.from_rational(2) + r),
                 fin(t, 5), fin(t, 0), fin(t, 1)])
    data = field_of_moduli(d)
    comp = compression(d, data)
    assert comp.conic is None
    assert all(x.tower == data.fom.tower
               for row in comp.conic_gram_fom for x in row)


def test_compression_rejects_noncyclic():
    d = Divisor([fin(QQ, 0), ProjPoint.infinity(QQ), fin(QQ, 1), fin(QQ, -1)])
    data = field_of_moduli(d)
    with pytest.raises(NonCyclicAut):
        compression(d, data)


# ---------------------------------------------------------------------------
# compressed divisor
# ---------------------------------------------------------------------------

def test_compressed_degrees_pentagon():
    d = q_i_pentagon()
    data = field_of_moduli(d)
    comp = compression(d, data)
    cd = compressed_divisor(d, data, comp)
    assert cd.degrees == [1, 1]


def test_compressed_degrees_split_orbits():
    d = sqrt2_five_points()
    data = field_of_moduli(d)
    comp = compression(d, data)
    cd = compressed_divisor(d, data, comp)
    assert cd.degrees == [1, 1, 1, 2]
    assert cd.total_degree == 5
    assert not cd.all_degrees_even()


def test_compressed_degrees_biquadratic():
    d = biquadratic_five_points()
    data = field_of_moduli(d)
    comp = compression(d, data)
    cd = compressed_divisor(d, data, comp)
    assert cd.degrees == [1, 2, 2]


def test_compressed_points_lie_on_conic():
    for d in (q_i_pentagon(), rational_involution_six()):
        data = field_of_moduli(d)
        comp = compression(d, data)
        cd = compressed_divisor(d, data, comp)
        t2 = comp.tower2
        gram = [[t2.from_rational(comp.conic.gram[i][j]) for j in range(3)]
                for i in range(3)]
        for orbit in cd.orbits:
            for pt in orbit:
                gv = _mat3_vec(gram, list(pt))
                val = sum((pt[k] * gv[k] for k in range(1, 3)),
                          start=pt[0] * gv[0])
                assert val.is_zero()


def test_compressed_degree_count_matches_orbits():
    d = rational_involution_six()
    aut = compute_aut(d)
    data = field_of_moduli(d, aut)
    comp = compression(d, data, aut)
    cd = compressed_divisor(d, data, comp)
    # three <2/z>-orbits of size two, each rational as a point downstairs
    assert cd.degrees == [1, 1, 1]


# ---------------------------------------------------------------------------
# ramification ledger
# ---------------------------------------------------------------------------

def test_ramification_ledger_shape():
    led = quotient_ramification(5)
    assert led.covering_degree == 5
    assert led.entries == [("0", 5, 4, 1), ("infinity", 5, 4, 1)]
    assert sum(dd * res for (_, _, dd, res) in led.entries) == 8


def test_ramification_rejects_trivial_cover():
    with pytest.raises(ValueError):
        quotient_ramification(1)


# ---------------------------------------------------------------------------
# quaternion decomposition of the obstruction class
# ---------------------------------------------------------------------------

def symbols_agree(symbols_a, symbols_b):
    """Same Brauer class: equal local Hilbert invariants everywhere that
    could matter for the participating entries."""
    places = {"infinity", 2}
    for (u, v) in symbols_a + symbols_b:
        for w in (u, v):
            for p in range(2, abs(w) + 1):
                if w % p == 0:
                    places.add(p)
    def local(symbols, p):
        out = 1
        for (u, v) in symbols:
            out *= hilbert_symbol(u, v, p)
        return out
    return all(local(symbols_a, p) == local(symbols_b, p) for p in places)


def two_five_tower_data():
    t1 = tower_extend(QQ, F(2)).tower
    t2 = tower_extend(t1, F(5)).tower
    group = galois_group(t2)
    h = tuple(range(group.order))
    fom = fixed_subtower(group, h)
    ident = Mobius.identity(t2)
    cochain = {i: ident for i in h}
    dummy = Divisor([fin(t2, 0), fin(t2, 1), fin(t2, 2)])
    return t2, group, ModuliData(group, h, cochain, fom, dummy)


def sign_vector(group, i, tower):
    """Action of element i on (sqrt2, sqrt5) as bits."""
    r2 = tower.element([0, 1, 0, 0])
    r5 = tower.element([0, 0, 1, 0])
    sig = group.elements[i]
    return (0 if sig(r2) == r2 else 1, 0 if sig(r5) == r5 else 1)


def test_quaternion_trivial_class():
    t2, group, data = two_five_tower_data()
    coc = descent_cocycle(data)
    assert cocycle_class_to_quaternion(coc, data) == []


def test_quaternion_cup_product_class():
    t2, group, data = two_five_tower_data()
    g = Mobius.from_rationals(t2, -1, 0, 0, 1)  # z -> -z, an involution
    ident = Mobius.identity(t2)
    h = data.h_indices
    values = {}
    for i in h:
        si = sign_vector(group, i, t2)
        for j in h:
            sj = sign_vector(group, j, t2)
            values[(i, j)] = g if (si[0] * sj[1]) % 2 else ident
    coc = Cocycle(values, h, group)
    symbols = cocycle_class_to_quaternion(coc, data)
    assert symbols_agree(symbols, [(2, 5)])


def test_quaternion_diagonal_class():
    t2, group, data = two_five_tower_data()
    g = Mobius.from_rationals(t2, -1, 0, 0, 1)
    ident = Mobius.identity(t2)
    h = data.h_indices
    values = {}
    for i in h:
        si = sign_vector(group, i, t2)
        for j in h:
            sj = sign_vector(group, j, t2)
            values[(i, j)] = g if (si[0] * sj[0]) % 2 else ident
    coc = Cocycle(values, h, group)
    symbols = cocycle_class_to_quaternion(coc, data)
    assert symbols_agree(symbols, [(2, -1)])


def test_quaternion_rejects_cyclic_quartic_group():
    t1 = tower_extend(QQ, F(2)).tower
    step2 = tower_extend(t1, t1.from_rational(2) + t1.root(0))
    t2 = step2.tower
    r = t2.root(1)
    s2 = t2.element([0, 1, 0, 0])
    other = s2 / r  # sqrt(2 - sqrt2)
    d = Divisor([ProjPoint.finite(r), ProjPoint.finite(-r),
                 ProjPoint.finite(other), ProjPoint.finite(-other)])
    data = field_of_moduli(d)
    assert data.fom_is_q and len(data.h_indices) == 4
    coc = descent_cocycle(data)
    with pytest.raises(NonElementaryGaloisQuotient):
        cocycle_class_to_quaternion(coc, data)


def test_quaternion_rejects_higher_order_values():
    group = galois_group(QQ)
    fom = fixed_subtower(group, (0,))
    dummy = Divisor([fin(QQ, 0), fin(QQ, 1), fin(QQ, 2)])
    data = ModuliData(group, (0,), {0: Mobius.identity(QQ)}, fom, dummy)
    spin = Mobius.from_rationals(QQ, 1, -1, 1, 1)  # order 4
    coc = Cocycle({(0, 0): spin}, (0,), group)
    with pytest.raises(UnsupportedAut):
        cocycle_class_to_quaternion(coc, data)


# ---------------------------------------------------------------------------
# randomized invariants
# ---------------------------------------------------------------------------

def test_random_stable_divisors_descend(rounds=4):
    rng = random.Random(940)
    rads = [2, 3, 5, -1, -2]
    for _ in range(rounds):
        rad = F(rng.choice(rads))
        t = tower_extend(QQ, rad).tower
        r = t.root(0)
        used = set()
        pts = [ProjPoint.finite(r), ProjPoint.finite(-r)]
        while len(pts) < 5:
            q = F(rng.randint(-6, 6))
            if q in used:
                continue
            used.add(q)
            pts.append(fin(t, q))
        d = Divisor(pts)
        data = field_of_moduli(d)
        assert data.fom_is_q
        frozen = frozenset(data.h_indices)
        assert data.group.subgroup_closure(data.h_indices) == frozen
        aut = compute_aut(d)
        if not aut.is_cyclic():
            continue
        comp = compression(d, data, aut)
        cd = compressed_divisor(d, data, comp)
        orbit_count = len({frozenset(
            (m(p).x.coords, m(p).y.coords) for m in aut.elements)
            for p in d.points})
        assert cd.total_degree == orbit_count
        assert find_point(comp.conic) is not None
