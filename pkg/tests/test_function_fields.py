from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hurwitz_lab.errors import BudgetExceeded
from hurwitz_lab.function_fields import (
    Curve,
    Jacobian,
    cl_statistics,
    count_surjections,
    enumerate_monic_squarefree,
    gf,
    jacobian_structure,
    mu_cohen_lenstra,
    zeta_class_number,
)
from hurwitz_lab.function_fields import poly as P
from hurwitz_lab.function_fields.cohen_lenstra import (
    SURJECTION_ORDER_CAP,
    _curve_record,
    count_surjections_general,
    density_sweep,
    full_structure_record,
    records_csv,
)
from hurwitz_lab.function_fields.curves import (
    IDENTITY,
    CurveError,
    MumfordDivisor,
    curve_sweep,
    good_for_ell,
    is_valid,
    l_polynomial,
    partition_from_torsion_counts,
)
from hurwitz_lab.function_fields.field import FieldError, extension
from hurwitz_lab.groups import AbelianGroupType, GroupError

Z3 = AbelianGroupType(3, (1,))


# -- fields ----------------------------------------------------------------------

@pytest.mark.parametrize("q", [9, 25, 27])
def test_modulus_has_no_roots(q):
    F = gf(q)
    base = F.base
    # degree 2 and 3 moduli are irreducible exactly when rootless
    assert all(P.evaluate(base, list(F.modulus), x) for x in range(base.q))
    assert F.q == q and F.p ** (len(F.modulus) - 1) == q


@given(st.sampled_from([7, 9, 25, 27]), st.data())
def test_field_axioms(q, data):
    F = gf(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.add(a, b) == F.add(b, a) and F.mul(a, b) == F.mul(b, a)
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, q - 1) == 1


def test_multiplicative_group_is_cyclic():
    for q in (9, 25, 27):
        F = gf(q)
        orders = []
        for a in range(1, q):
            k, x = 1, a
            while x != 1:
                x, k = F.mul(x, a), k + 1
            orders.append(k)
        assert max(orders) == q - 1
        assert len(F.squares) == (q - 1) // 2
        assert F.chi(F.nonsquare) == -1


def test_bad_field_orders():
    for q in (1, 6, 12):
        with pytest.raises(FieldError):
            gf(q)


@given(st.sampled_from([5, 9]), st.data())
def test_poly_xgcd(q, data):
    F = gf(q)
    coeffs = st.lists(st.integers(0, q - 1), min_size=1, max_size=5)
    a, b = P.trim(data.draw(coeffs)), P.trim(data.draw(coeffs))
    d, s, t = P.xgcd(F, a, b)
    assert P.add(F, P.mul(F, s, a), P.mul(F, t, b)) == d
    if a or b:
        assert d[-1] == 1
        assert not P.mod(F, a, d) and not P.mod(F, b, d)
    if b:
        quo, rem = P.divmod_(F, a, b)
        assert P.add(F, P.mul(F, quo, b), rem) == a and P.deg(rem) < P.deg(b)


# -- squarefree polynomials and the curve family --------------------------------------

def squarefree_by_division(F, f):
    n = P.deg(f)
    for k in range(1, n // 2 + 1):
        for low in itertools.product(range(F.q), repeat=k):
            g = list(low) + [1]
            if not P.mod(F, f, P.mul(F, g, g)):
                return False
    return True


@pytest.mark.parametrize("q,n", [(3, 2), (3, 3), (5, 2), (5, 3), (4, 3), (9, 2), (3, 4)])
def test_squarefree_enumeration(q, n):
    F = gf(q)
    got = [tuple(f) for f in enumerate_monic_squarefree(q, n)]
    want = [tuple(list(low)[::-1] + [1]) for low in itertools.product(range(q), repeat=n)
            if squarefree_by_division(F, list(low)[::-1] + [1])]
    assert sorted(got) == sorted(want)
    assert len(got) == (q if n == 1 else q**n - q ** (n - 1))


def test_squarefree_examples():
    assert sum(1 for _ in enumerate_monic_squarefree(3, 2)) == 6
    assert sum(1 for _ in enumerate_monic_squarefree(5, 1)) == 5
    assert sum(1 for _ in enumerate_monic_squarefree(5, 3)) == 100
    with pytest.raises(BudgetExceeded):
        list(enumerate_monic_squarefree(5, 3, budget=10))


def test_curve_sweep():
    curves = list(curve_sweep(3, 1))
    assert len(curves) == 6
    assert all(zeta_class_number(c) == 1 for c in curves)
    assert sum(1 for _ in curve_sweep(5, 5)) == 5000
    with pytest.raises(CurveError):
        list(curve_sweep(5, 4))
    F = gf(5)
    with pytest.raises(CurveError):
        Curve(F, [0, 0, 0, 1], False)      # x^3 is not squarefree
    with pytest.raises(CurveError):
        Curve(F, [1, 0, 2], False)          # even degree


def test_twist_model_counts_match_rhs():
    """The monic model of a twist has the same point count as y^2 = eps f itself."""
    F = gf(7)
    for f in itertools.islice(enumerate_monic_squarefree(7, 3), 30):
        c = Curve(F, f, True)
        direct = 1 + sum(1 + F.chi(P.evaluate(F, c.rhs, x)) for x in range(7))
        model = 1 + sum(1 + F.chi(P.evaluate(F, c.model, x)) for x in range(7))
        assert direct == model


# -- Jacobians -------------------------------------------------------------------------

def chord_tangent(F, f, p1, p2):
    """Affine point addition on y^2 = f with f monic cubic; None is infinity."""
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    (x1, y1), (x2, y2) = p1, p2
    if x1 == x2 and F.add(y1, y2) == 0:
        return None
    if x1 == x2:
        num = F.add(F.mul(3 % F.p, F.mul(x1, x1)), F.mul(2 % F.p, F.mul(f[2], x1)))
        num = F.add(num, f[1])
        lam = F.div(num, F.mul(2 % F.p, y1))
    else:
        lam = F.div(F.sub(y2, y1), F.sub(x2, x1))
    x3 = F.sub(F.sub(F.sub(F.mul(lam, lam), f[2]), x1), x2)
    y3 = F.sub(F.mul(lam, F.sub(x1, x3)), y1)
    return (x3, y3)


def point_to_divisor(F, pt):
    if pt is None:
        return IDENTITY
    x, y = pt
    return MumfordDivisor(tuple(P.trim([F.neg(x), 1])), tuple(P.trim([y])))


def test_doubling_example():
    F = gf(5)
    c = Curve(F, [1, 1, 0, 1], False)
    jac = Jacobian(c)
    d = MumfordDivisor((0, 1), (1,))
    assert jac.add(d, d) == MumfordDivisor((1, 1), (2,))


@pytest.mark.parametrize("q", [5, 7, 9])
def test_cantor_matches_chord_tangent(q):
    F = gf(q)
    rng = random.Random(q)
    for f in rng.sample(list(enumerate_monic_squarefree(q, 3)), 6):
        c = Curve(F, f, False)
        jac = Jacobian(c)
        pts = [None] + [(x, y) for x in range(q) for y in range(q)
                        if F.mul(y, y) == P.evaluate(F, f, x)]
        assert len(pts) == len(jac.elements()) == zeta_class_number(c)
        for p1, p2 in itertools.product(pts, repeat=2):
            want = point_to_divisor(F, chord_tangent(F, f, p1, p2))
            assert jac.add(point_to_divisor(F, p1), point_to_divisor(F, p2)) == want


def jacobians(q, n, k, seed=0):
    F = gf(q)
    rng = random.Random(seed)
    fs = rng.sample(list(enumerate_monic_squarefree(q, n)), k)
    return [Jacobian(Curve(F, f, tw)) for f in fs for tw in (False, True)]


@pytest.mark.parametrize("q,n", [(3, 5), (5, 5), (3, 7)])
def test_group_law(q, n):
    rng = random.Random(1)
    for jac in jacobians(q, n, 3):
        els = jac.elements()
        assert len(set(els)) == len(els)
        pool = els if len(els) <= 12 else rng.sample(els, 12)
        for a in pool:
            assert jac.is_valid(a)
            assert jac.add(a, IDENTITY) == a == jac.add(IDENTITY, a)
            assert jac.add(a, jac.neg(a)).is_identity
            assert jac.mul(len(els), a).is_identity
            for b in pool[:6]:
                s = jac.add(a, b)
                assert s == jac.add(b, a) and jac.is_valid(s)
                for c in pool[:3]:
                    assert jac.add(jac.add(a, b), c) == jac.add(a, jac.add(b, c))


def brute_class_number(curve):
    """h = L(1) from point counts of y^2 = rhs over F_q, ..., F_{q^g} by direct search."""
    F = curve.field
    g = curve.genus
    counts = []
    for i in range(1, g + 1):
        E = extension(F, i)
        sq = {}
        for y in range(E.q):
            y2 = E.mul(y, y)
            sq[y2] = sq.get(y2, 0) + 1
        counts.append(1 + sum(sq.get(P.evaluate(E, curve.rhs, x), 0) for x in range(E.q)))
    q = F.q
    if g == 1:
        return counts[0]
    if g == 2:
        n1, n2 = counts
        return (n1 * n1 + n2) // 2 - q
    raise ValueError


@pytest.mark.parametrize("q,n", [(3, 3), (5, 3), (3, 5), (5, 5), (9, 3)])
def test_class_number_oracles(q, n):
    for jac in jacobians(q, n, 4, seed=q * n):
        h = zeta_class_number(jac.curve)
        assert h == brute_class_number(jac.curve) == len(jac.elements())
        lp = l_polynomial(jac.curve)
        assert lp[0] == 1 and lp[-1] == q ** jac.curve.genus


def test_class_number_examples():
    F = gf(5)
    assert zeta_class_number(Curve(F, [0, 4, 0, 1], False)) == 8
    c = Curve(F, [1, 1, 0, 1], False)
    assert zeta_class_number(c) == 9
    s = jacobian_structure(c)
    assert s.invariant_factors == [9] and s.ell_part(3) == (2,)


def test_structure_is_consistent():
    for jac in jacobians(5, 5, 8, seed=3):
        s = jacobian_structure(jac.curve)
        prod = 1
        for d in s.invariant_factors:
            prod *= d
        assert prod == s.order == zeta_class_number(jac.curve)
        assert all(b % a == 0 for a, b in zip(s.invariant_factors, s.invariant_factors[1:]))
        # exponent of the group kills every element
        top = s.invariant_factors[-1] if s.invariant_factors else 1
        assert all(jac.mul(top, x).is_identity for x in jac.elements())


def test_partition_from_torsion_counts():
    assert partition_from_torsion_counts(3, [1, 9, 27]) == (2, 1)
    assert partition_from_torsion_counts(3, [1, 3, 9]) == (2,)
    assert partition_from_torsion_counts(5, [1, 25]) == (1, 1)


def test_budget_fallback():
    F = gf(5)
    c = Curve(F, next(enumerate_monic_squarefree(5, 5)), False)
    s = jacobian_structure(c, budget=1)
    assert s.order_only and s.order == zeta_class_number(c)
    with pytest.raises(ValueError):
        s.ell_part(3)
    with pytest.raises(BudgetExceeded):
        jacobian_structure(c, budget=1, fallback=False)


def test_invalid_divisor():
    F = gf(5)
    f = [1, 1, 0, 1]
    assert not is_valid(F, f, MumfordDivisor((0, 1), (2,)))
    assert is_valid(F, f, MumfordDivisor((0, 1), (1,)))


# -- surjections and the Cohen–Lenstra measure -----------------------------------

def test_surjection_examples():
    assert count_surjections(AbelianGroupType(3, (2,)), Z3) == 2
    assert count_surjections(Z3, Z3) == 2
    assert count_surjections(AbelianGroupType(3, (1, 1)), Z3) == 8
    assert count_surjections(AbelianGroupType(3, ()), Z3) == 0
    assert count_surjections(Z3, AbelianGroupType(3, ())) == 1
    with pytest.raises(GroupError):
        count_surjections(AbelianGroupType(5, (1,)), Z3)


@given(st.sampled_from([3, 5]), st.lists(st.integers(1, 2), max_size=3))
def test_surjection_counts_closed_form(ell, exps):
    src = AbelianGroupType(ell, tuple(exps))
    r = len(exps)
    if src.order > SURJECTION_ORDER_CAP:
        with pytest.raises(GroupError):
            count_surjections(src, AbelianGroupType(ell, (1,)))
        return
    assert count_surjections(src, AbelianGroupType(ell, (1,))) == ell**r - 1
    if ell == 3 and sum(exps) <= 4:
        assert count_surjections(src, AbelianGroupType(ell, (1, 1))) == (ell**r - 1) * (ell**r - ell)


def test_surjections_from_full_group():
    # Z/6 x Z/12 has 3-part Z/3 + Z/3
    assert count_surjections_general([6, 12], Z3) == 8
    assert count_surjections_general([4], Z3) == 0
    assert count_surjections_general([], Z3) == 0


def test_mu_values():
    assert float(mu_cohen_lenstra(Z3)) == pytest.approx(0.280063, abs=1e-6)
    assert float(mu_cohen_lenstra(AbelianGroupType(3, ()))) == pytest.approx(0.560126, abs=1e-6)
    # |Aut(Z/3 + Z/3)| = |GL_2(F_3)| = 48
    assert mu_cohen_lenstra(AbelianGroupType(3, (1, 1))) * 48 == mu_cohen_lenstra(AbelianGroupType(3, ())) * 1
    with pytest.raises(GroupError):
        mu_cohen_lenstra(Z3, ell=5)


def test_mu_sums_to_one():
    ell = 3
    groups = [()] + [tuple(p) for n in range(1, 5) for p in partitions(n) if len(p) <= 2]
    total = sum(mu_cohen_lenstra(AbelianGroupType(ell, g)) for g in groups)
    assert 0.97 < float(total) < 1


def partitions(n, top=None):
    top = n if top is None else top
    if n == 0:
        yield []
        return
    for k in range(min(n, top), 0, -1):
        for rest in partitions(n - k, k):
            yield [k] + rest


def test_good_for_ell():
    assert good_for_ell(5, 3) and good_for_ell(11, 3) and good_for_ell(17, 3)
    assert not good_for_ell(7, 3) and not good_for_ell(9, 3) and not good_for_ell(4, 3)


# -- statistics ---------------------------------------------------------------------

def test_genus_zero_statistics():
    rep = cl_statistics(5, 1, Z3)
    assert rep.S_n_size == 10 and rep.sum_mA == 0 and rep.average == 0 and rep.density_A == 0


def test_statistics_against_full_structure():
    q = 5
    rep = cl_statistics(q, 3, Z3)
    F = gf(q)
    by_key = {(r.f_code, r.twist): r for r in rep.records}
    for c in curve_sweep(q, 3):
        order, exps, m = full_structure_record(c, Z3)
        r = by_key[(P.encode(F, c.f), int(c.twist))]
        assert (r.class_number, r.m_A, r.iota) == (order, m, int(exps == (1,)))
    assert Fraction(rep.sum_mA_exact) == Fraction(rep.sum_mA, rep.S_n_size)


def test_statistics_sample_genus_two():
    q = 5
    F = gf(q)
    rng = random.Random(7)
    fs = rng.sample(list(enumerate_monic_squarefree(q, 5)), 25)
    for f in fs:
        for tw in (False, True):
            c = Curve(F, f, tw)
            order, exps, m = full_structure_record(c, Z3)
            r = _curve_record(c, Z3)
            assert (r.class_number, r.m_A, r.iota) == (order, m, int(exps == (1,)))


def test_bad_q_needs_override():
    with pytest.raises(ValueError):
        cl_statistics(7, 3, Z3)
    rep = cl_statistics(7, 3, Z3, allow_bad=True, keep_records=False)
    assert not rep.good_for_ell and rep.S_n_size == 2 * (7**3 - 7**2)


def test_density_sweep_and_csv():
    sw = density_sweep(5, [1, 3], Z3)
    assert sw.ns == [1, 3] and sw.delta_plus == 0.3 and sw.delta_minus == 0.0
    rep = cl_statistics(5, 3, Z3)
    lines = records_csv(rep.records).splitlines()
    assert lines[0] == "f,twist,class_number,ell_part,m_A,iota" and len(lines) == 201
