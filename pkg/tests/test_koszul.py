from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hurwitz_lab.hurwitz import component_ring, find_stabilizer_U
from hurwitz_lab.koszul import (
    DiscreteModule,
    KoszulComplex,
    ModuleError,
    a_homology,
    a_homology_table,
    cofiber_degrees,
    h_degrees,
    koszul_differential,
    module_from_ring,
    regularity_check,
    sector_module,
    trivial_module,
)
from hurwitz_lab.linalg import SparseMat, rank
from hurwitz_lab.resolution import r_homology_table

NEG_INF = -math.inf


def modules(g, c, n_max):
    return [module_from_ring(g, c, n_max), trivial_module(g, c, n_max), sector_module(g, c, n_max)]


def oracle_differential_R(g, c, n, d):
    """d¹ on K_d(R) computed straight from tuples and the group table."""
    ring = component_ring(g, c, n)
    k = len(c)
    src, tgt = ring.dim(n - d), ring.dim(n - d + 1)
    entries: dict[tuple[int, int], int] = {}
    for w_idx, word in enumerate(itertools.product(range(k), repeat=d)):
        els = [c.elements[x] for x in word]
        for i in range(d):
            y = g.identity
            for e in els[i + 1:]:
                y = g.mul[y][e]
            x = g.mul[g.mul[g.inv[y]][els[i]]][y]
            rest = word[:i] + word[i + 1:]
            r_word = 0
            for z in rest:
                r_word = r_word * k + z
            for o in range(src):
                target = ring.multiply(1, c.position[x], n - d, o)
                key = (r_word * tgt + target, w_idx * src + o)
                entries[key] = entries.get(key, 0) + (-1) ** (i + 1)
    return {kk: v for kk, v in entries.items() if v}


@pytest.mark.parametrize("spec", ["gdih:3", "gdih:5"])
def test_differential_matches_tuple_oracle(spec):
    from hurwitz_lab.groups import parse_group_spec

    g, c = parse_group_spec(spec)
    m = module_from_ring(g, c, 5)
    for n in range(1, 5 if spec == "gdih:3" else 4):
        for d in range(1, n + 1):
            assert koszul_differential(m, n, d).entries == oracle_differential_R(g, c, n, d)


def test_low_degree_examples(s3):
    g, c = s3
    m = module_from_ring(g, c, 4)
    ring = component_ring(g, c, 4)
    k = len(c)
    # d = 1: g ⊗ m -> -act_g(m)
    d1 = koszul_differential(m, 2, 1)
    for gp in range(k):
        for o in range(ring.dim(1)):
            assert d1.entries == {**d1.entries, (ring.left[1][gp][o], gp * ring.dim(1) + o): -1}
    # d = 2: a ⊗ b ⊗ m -> -b ⊗ act_{a^b}(m) + a ⊗ act_b(m)
    d2 = koszul_differential(m, 2, 2)
    for a, b in itertools.product(range(k), repeat=2):
        ab = c.position[g.conj(c.elements[a], c.elements[b])]
        col = a * k + b
        expected: dict[tuple[int, int], int] = {}
        for key, v in (((b, ab), -1), ((a, b), 1)):
            row = key[0] * ring.dim(1) + ring.left[0][key[1]][0]
            expected[(row, col)] = expected.get((row, col), 0) + v
        got = {key: v for key, v in d2.entries.items() if key[1] == col}
        assert got == {kk: v for kk, v in expected.items() if v}
    # M = k: every differential vanishes
    kk = trivial_module(g, c, 4)
    for n in range(1, 5):
        for d in range(1, n + 1):
            assert koszul_differential(kk, n, d).is_zero()
    with pytest.raises(ValueError):
        koszul_differential(m, 2, 3)


def test_module_dims(s3):
    g, c = s3
    assert module_from_ring(g, c, 3).dims == [1, 3, 5, 6]
    assert trivial_module(g, c, 3).dims == [1, 0, 0, 0]


@pytest.mark.parametrize("spec", ["gdih:3", "gdih:5"])
def test_d_squared_zero_and_validation(spec):
    from hurwitz_lab.groups import parse_group_spec

    g, c = parse_group_spec(spec)
    n_max = 6 if spec == "gdih:3" else 4
    for m in modules(g, c, n_max):
        m.validate()
        for n in range(2, n_max + 1):
            for d in range(2, n + 1):
                assert (koszul_differential(m, n, d - 1) @ koszul_differential(m, n, d)).is_zero()


def test_sector_closure(s3):
    g, c = s3
    ring = component_ring(g, c, 6)
    whole = g.subgroup_table.whole
    for n in range(6):
        for o in ring.generating(n):
            for gp in range(len(c)):
                assert ring.levels[n + 1][ring.left[n][gp][o]].subgroup == whole


@given(st.sampled_from(["R", "sector"]), st.data())
def test_corrupted_actions_are_rejected(kind, data):
    from hurwitz_lab.groups import parse_group_spec

    g, c = parse_group_spec("gdih:3")
    n_max = 6
    m = module_from_ring(g, c, n_max) if kind == "R" else sector_module(g, c, n_max)
    n = data.draw(st.sampled_from([n for n in range(1, n_max) if m.dims[n - 1] and m.dims[n]]))
    gp = data.draw(st.integers(0, len(c) - 1))
    j = data.draw(st.integers(0, m.dims[n - 1] - 1))
    how = data.draw(st.sampled_from(["zero", "double", "negate"]))
    mat = m.act[gp][n]
    entries = dict(mat.entries)
    for (r, cc), v in mat.entries.items():
        if cc == j:
            if how == "zero":
                del entries[(r, cc)]
            else:
                entries[(r, cc)] = 2 * v if how == "double" else -v
    act = [list(row) for row in m.act]
    act[gp][n] = SparseMat(mat.rows, mat.cols, entries)
    with pytest.raises(ModuleError):
        DiscreteModule(g, c, m.dims, act, name="bad").validate()


def test_wrong_shape_rejected(s3):
    g, c = s3
    m = module_from_ring(g, c, 3)
    act = [list(row) for row in m.act]
    act[0][2] = SparseMat.zeros(1, 1)
    with pytest.raises(ModuleError):
        DiscreteModule(g, c, m.dims, act).validate()


@pytest.mark.parametrize("spec,n_top", [("gdih:3", 5), ("gdih:5", 3)])
def test_koszul_duality_for_k(spec, n_top):
    from hurwitz_lab.groups import parse_group_spec

    g, c = parse_group_spec(spec)
    kk = trivial_module(g, c, n_top)
    for n in range(n_top + 1):
        for d in range(n_top + 1):
            assert a_homology(kk, n, d) == (len(c) ** n if n == d else 0)
    assert h_degrees(kk, n_top, n_top).h == list(range(n_top + 1))


def test_euler_characteristic(s3):
    g, c = s3
    for m in modules(g, c, 6):
        for n in range(7):
            kc = KoszulComplex(m, n)
            assert kc.euler_terms() == sum((-1) ** d * kc.homology(d) for d in range(n + 1))


def test_R_homology_examples(s3):
    g, c = s3
    r = module_from_ring(g, c, 8)
    assert a_homology(r, 0, 0) == 1
    assert all(a_homology(r, n, 0) == 0 for n in range(1, 9))
    rep = h_degrees(r, 3, 8)
    assert rep.h[0] == 0 and rep.h[1] == NEG_INF


def dense_u_sector_rank(g, c, n_src, n_tgt, N):
    """Rank of U·- between generating sectors, via naive Fraction elimination."""
    from test_linalg import naive_rank

    ring = component_ring(g, c, n_tgt)
    src, tgt = ring.generating(n_src), ring.generating(n_tgt)
    ti = {o: i for i, o in enumerate(tgt)}
    mat = [[0] * len(src) for _ in tgt]
    for j, o in enumerate(src):
        for gp in range(len(c)):
            mat[ti[ring.left_mul_tuple((gp,) * N, n_src, o)]][j] += 1
    return naive_rank(mat) if mat and src else 0, len(src), len(tgt)


def test_cofiber_degrees(s3):
    g, c = s3
    spec = find_stabilizer_U(g, c, 12)
    r = module_from_ring(g, c, 10)
    deg0, deg1 = cofiber_degrees(r, spec)
    assert deg0 < spec.N_0 and deg1 < spec.N_0
    assert cofiber_degrees(trivial_module(g, c, 8), spec) == (0, 2)
    sec = sector_module(g, c, 10)
    coker, ker = [], []
    for n in range(11):
        if n < spec.N:
            coker.append(sec.dims[n])
            ker.append(0)
            continue
        rk, s, t = dense_u_sector_rank(g, c, n - spec.N, n, spec.N)
        coker.append(t - rk)
        ker.append(s - rk)
    top = lambda xs: max((i for i, x in enumerate(xs) if x), default=NEG_INF)
    assert cofiber_degrees(sec, spec) == (top(coker), top(ker))


@pytest.mark.parametrize("which", ["R", "sector"])
def test_regularity_flags(s3, which):
    g, c = s3
    spec = find_stabilizer_U(g, c, 12)
    m = module_from_ring(g, c, 10) if which == "R" else sector_module(g, c, 10)
    rep = regularity_check(m, spec, 3, with_r_homology=True)
    assert (rep.B0, rep.B1, rep.B2) == (spec.N_0 + 2, spec.N_0 - 1, spec.N_0 + 1)
    assert all(rep.bounds_ok) and len(rep.bounds_ok) == 3
    assert rep.cofiber["deg0_ok"] and rep.cofiber["deg1_ok"]
    assert all(rep.r_bounds_ok)
    if which == "R":
        assert all(rep.lemma_bound_ok)
    d = rep.to_dict()
    for key in ("module", "n_max", "d_max", "N_0", "B0", "B1", "B2", "h", "bounds_ok", "cofiber", "caveats"):
        assert key in d


def test_regularity_for_k(s3):
    g, c = s3
    spec = find_stabilizer_U(g, c, 12)
    rep = regularity_check(trivial_module(g, c, 6), spec, 4)
    assert all(rep.bounds_ok)


def test_window_caveat(s3):
    g, c = s3
    rep = h_degrees(trivial_module(g, c, 3), 3, 3)
    assert rep.at_edge[3] and any("exceed the window" in x for x in rep.caveats)


def test_table_shape(s3):
    g, c = s3
    t = a_homology_table(module_from_ring(g, c, 4), 2)
    assert len(t) == 5 and all(len(row) == 3 for row in t)


# -- R-module homology -----------------------------------------------------------

def test_r_homology_of_free_and_trivial(s3):
    g, c = s3
    ring = component_ring(g, c, 6)
    assert r_homology_table(module_from_ring(g, c, 6), 2) == [[1, 0, 0]] + [[0, 0, 0]] * 6
    t = r_homology_table(trivial_module(g, c, 6), 2)
    assert t[0] == [1, 0, 0] and t[1] == [0, 3, 0]
    assert t[2][2] == len(c) ** 2 - ring.dim(2)


@pytest.mark.parametrize("kind", ["k", "sector", "R"])
def test_r_homology_hilbert_series(s3, kind):
    """dim M_n = Σ_d (-1)^d Σ_j Tor_{d,j} dim R_{n-j}, exact for n <= d_max."""
    g, c = s3
    d_max = 4
    m = {"k": trivial_module, "sector": sector_module, "R": module_from_ring}[kind](g, c, d_max)
    t = r_homology_table(m, d_max)
    ring = component_ring(g, c, d_max)
    for n in range(d_max + 1):
        total = sum((-1) ** d * t[j][d] * ring.dim(n - j) for d in range(d_max + 1) for j in range(n + 1))
        assert total == m.dims[n]
