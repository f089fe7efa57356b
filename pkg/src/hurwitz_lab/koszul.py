"""Discrete R-modules, their Koszul complexes, A-module homology and regularity.

A discrete module is a graded vector space M_0..M_{n_max} with an action map
act_g : M_{n-1} -> M_n for each g in c, subject to the degree-two Hurwitz
relation act_g act_h = act_{g h g^-1} act_g.  In grading n the Koszul complex
has K_d = k{c}^{⊗d} ⊗ M_{n-d} and

    d(g_1 ⊗ ... ⊗ g_d ⊗ m) = Σ_i (-1)^i (... ĝ_i ...) ⊗ act_{x_i}(m),
    x_i = (g_i)^{g_{i+1}···g_d},   x^y = y^-1 x y.

H^A_{n,d}(M) is its homology at K_d.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import BudgetExceeded, budget_from_env
from .groups import ConjClass, FiniteGroup
from .hurwitz import ComponentRing, StabilizerSpec, component_ring
from .linalg import SparseMat, nullity, rank

NEG_INF = -math.inf
KOSZUL_BUDGET = 2 * 10**5


class ModuleError(ValueError):
    pass


@dataclass
class DiscreteModule:
    group: FiniteGroup
    c: ConjClass
    dims: list[int]
    # act[g][n] : M_{n-1} -> M_n, for 1 <= n <= n_max (index 0 unused)
    act: list[list[SparseMat | None]]
    name: str = ""

    @property
    def n_max(self) -> int:
        return len(self.dims) - 1

    def action(self, g: int, n: int) -> SparseMat:
        return self.act[g][n]

    def validate(self) -> None:
        """Raise ModuleError unless act_g act_h = act_{g h g^-1} act_g everywhere."""
        grp, els, pos = self.group, self.c.elements, self.c.position
        k = len(els)
        for g in range(k):
            for n in range(1, self.n_max + 1):
                m = self.act[g][n]
                if m is None or (m.rows, m.cols) != (self.dims[n], self.dims[n - 1]):
                    raise ModuleError(f"act[{g}][{n}] has the wrong shape")
        for n in range(2, self.n_max + 1):
            for g in range(k):
                for h in range(k):
                    ghg = pos[grp.mul[grp.mul[els[g]][els[h]]][grp.inv[els[g]]]]
                    lhs = self.act[g][n] @ self.act[h][n - 1]
                    rhs = self.act[ghg][n] @ self.act[g][n - 1]
                    if lhs.entries != rhs.entries:
                        raise ModuleError(f"braid compatibility fails for g={g}, h={h} into grading {n}")


def _perm_action(dim_to: int, dim_from: int, images: Sequence[int | None]) -> SparseMat:
    return SparseMat(dim_to, dim_from, {(t, s): 1 for s, t in enumerate(images) if t is not None})


def module_from_ring(group: FiniteGroup, c: ConjClass, n_max: int, ring: ComponentRing | None = None) -> DiscreteModule:
    """R as a left module over itself: act_g is left concatenation by [g]."""
    ring = ring or component_ring(group, c, n_max)
    dims = ring.dims()[: n_max + 1]
    act: list[list[SparseMat | None]] = []
    for g in range(len(c)):
        row: list[SparseMat | None] = [None]
        for n in range(1, n_max + 1):
            row.append(_perm_action(dims[n], dims[n - 1], ring.left[n - 1][g]))
        act.append(row)
    return DiscreteModule(group, c, dims, act, name="R")


def trivial_module(group: FiniteGroup, c: ConjClass, n_max: int) -> DiscreteModule:
    """k: one dimension in grading 0, nothing above."""
    dims = [1] + [0] * n_max
    act = [[None] + [SparseMat.zeros(dims[n], dims[n - 1]) for n in range(1, n_max + 1)] for _ in c.elements]
    return DiscreteModule(group, c, dims, act, name="k")


def sector_module(group: FiniteGroup, c: ConjClass, n_max: int, subgroup: int | None = None,
                  ring: ComponentRing | None = None) -> DiscreteModule:
    """Span of the orbits generating exactly H, with [g] acting by concatenation
    for g in H and by zero otherwise.

    This is the subquotient (tuples generating a group ⊇ H) / (tuples
    generating a group ⊋ H) of R, so it is an honest R-module.
    """
    ring = ring or component_ring(group, c, n_max)
    h = group.subgroup_table.whole if subgroup is None else subgroup
    members = group.subgroup_table[h]
    sectors = [ring.sector(n, h) for n in range(n_max + 1)]
    index = [{o: i for i, o in enumerate(s)} for s in sectors]
    dims = [len(s) for s in sectors]
    act: list[list[SparseMat | None]] = []
    for g in range(len(c)):
        row: list[SparseMat | None] = [None]
        inside = c.elements[g] in members
        for n in range(1, n_max + 1):
            if inside:
                images = [index[n][ring.left[n - 1][g][o]] for o in sectors[n - 1]]
            else:
                images = [None] * dims[n - 1]
            row.append(_perm_action(dims[n], dims[n - 1], images))
        act.append(row)
    return DiscreteModule(group, c, dims, act, name=f"sector[{h}]")


# -- the Koszul complex ------------------------------------------------------

def _conjugator_table(c: ConjClass) -> Callable[[Sequence[int]], list[int]]:
    """For a word (g_1..g_d) of positions, return the positions of x_i = g_i^{g_{i+1}...g_d}."""
    grp, els, pos = c.group, c.elements, c.position

    def acting(word: Sequence[int]) -> list[int]:
        out = [0] * len(word)
        suffix = grp.identity
        for i in range(len(word) - 1, -1, -1):
            out[i] = pos[grp.conj(els[word[i]], suffix)]
            suffix = grp.mul[els[word[i]]][suffix]
        return out

    return acting


def koszul_dim(m: DiscreteModule, n: int, d: int) -> int:
    if d < 0 or d > n or n - d > m.n_max:
        return 0
    return len(m.c) ** d * m.dims[n - d]


def koszul_differential(m: DiscreteModule, n: int, d: int) -> SparseMat:
    """The differential K_d -> K_{d-1} in grading n (basis: word-major, then M basis)."""
    if not 1 <= d <= n:
        raise ValueError(f"differential index d={d} out of range for grading {n}")
    if n > m.n_max:
        raise ValueError(f"grading {n} exceeds the module's n_max={m.n_max}")
    k = len(m.c)
    src_dim = m.dims[n - d]
    tgt_dim = m.dims[n - d + 1]
    rows = k ** (d - 1) * tgt_dim
    cols = k**d * src_dim
    budget = budget_from_env(KOSZUL_BUDGET)
    if max(rows, cols) > budget:
        raise BudgetExceeded(f"Koszul term of dimension {max(rows, cols)} exceeds budget {budget}")
    acting = _conjugator_table(m.c)
    # column lists of each action matrix, built once
    act_cols = []
    for g in range(k):
        cols_g: list[list[tuple[int, int]]] = [[] for _ in range(src_dim)]
        for (r, cc), v in m.act[g][n - d + 1].entries.items():
            cols_g[cc].append((r, v))
        act_cols.append(cols_g)
    out = SparseMat.zeros(rows, cols)
    entries = out.entries
    for w_idx, word in enumerate(itertools.product(range(k), repeat=d)):
        xs = acting(word)
        for i in range(d):
            sign = -1 if (i + 1) % 2 else 1
            rest = word[:i] + word[i + 1:]
            r_word = 0
            for x in rest:
                r_word = r_word * k + x
            base_row = r_word * tgt_dim
            ac = act_cols[xs[i]]
            for j in range(src_dim):
                col = w_idx * src_dim + j
                for r, v in ac[j]:
                    key = (base_row + r, col)
                    nv = entries.get(key, 0) + sign * v
                    if nv:
                        entries[key] = nv
                    else:
                        entries.pop(key, None)
    return out


class KoszulComplex:
    """Koszul complex of a discrete module in one grading, with cached ranks."""

    def __init__(self, module: DiscreteModule, n: int) -> None:
        self.module = module
        self.n = n
        self._rank: dict[int, int] = {}

    def dim(self, d: int) -> int:
        return koszul_dim(self.module, self.n, d)

    def differential(self, d: int) -> SparseMat:
        return koszul_differential(self.module, self.n, d)

    def rank(self, d: int) -> int:
        if d < 1 or d > self.n or self.dim(d) == 0 or self.dim(d - 1) == 0:
            return 0
        if d not in self._rank:
            self._rank[d] = rank(self.differential(d))
        return self._rank[d]

    def homology(self, d: int) -> int:
        return self.dim(d) - self.rank(d) - self.rank(d + 1)

    def euler_terms(self) -> int:
        return sum((-1) ** d * self.dim(d) for d in range(self.n + 1))


def a_homology(m: DiscreteModule, n: int, d: int) -> int:
    """dim H^A_{n,d}(M)."""
    if n > m.n_max:
        raise ValueError(f"grading {n} exceeds the module's n_max={m.n_max}")
    if d < 0 or d > n:
        return 0
    return KoszulComplex(m, n).homology(d)


def a_homology_table(m: DiscreteModule, d_max: int, n_max: int | None = None) -> list[list[int]]:
    """table[n][d] = dim H^A_{n,d}(M) for n <= n_max, d <= d_max."""
    n_max = m.n_max if n_max is None else n_max
    out = []
    for n in range(n_max + 1):
        kc = KoszulComplex(m, n)
        out.append([kc.homology(d) if d <= n else 0 for d in range(d_max + 1)])
    return out


# -- degrees and regularity ---------------------------------------------------

def _fmt(x: float) -> int | str:
    return "-inf" if x == NEG_INF else int(x)


@dataclass
class RegularityReport:
    module: str
    n_max: int
    d_max: int
    h: list[float]                       # h^A_d within the window, -inf if zero
    at_edge: list[bool]                  # nonzero in grading n_max: true degree may be larger
    table: list[list[int]] = field(default_factory=list)
    N_0: int | None = None
    N: int | None = None
    bounds_ok: list[bool] = field(default_factory=list)     # index d-1 for d = 1..d_max
    lemma_bound_ok: list[bool] = field(default_factory=list)  # h_d(R) <= B2 + d
    cofiber: dict | None = None
    h_R: list[float] | None = None
    r_bounds_ok: list[bool] | None = None
    caveats: list[str] = field(default_factory=list)

    @property
    def B0(self) -> int | None:
        return None if self.N_0 is None else self.N_0 + 2

    @property
    def B1(self) -> int | None:
        return None if self.N_0 is None else self.N_0 - 1

    @property
    def B2(self) -> int | None:
        return None if self.N_0 is None else self.N_0 + 1

    def to_dict(self) -> dict:
        out = {
            "module": self.module,
            "n_max": self.n_max,
            "d_max": self.d_max,
            "N_0": self.N_0,
            "B0": self.B0,
            "B1": self.B1,
            "B2": self.B2,
            "h": [_fmt(x) for x in self.h],
            "bounds_ok": self.bounds_ok,
            "cofiber": self.cofiber,
            "caveats": self.caveats,
            "homology_table": self.table,
        }
        if self.lemma_bound_ok:
            out["lemma_bound_ok"] = self.lemma_bound_ok
        if self.h_R is not None:
            out["h_R"] = [_fmt(x) for x in self.h_R]
            out["r_bounds_ok"] = self.r_bounds_ok
        return out


def degree_of(dims_by_n: Sequence[int]) -> float:
    """Largest n with a nonzero entry, -inf if all zero."""
    for n in range(len(dims_by_n) - 1, -1, -1):
        if dims_by_n[n]:
            return n
    return NEG_INF


def h_degrees(m: DiscreteModule, d_max: int, n_max: int | None = None) -> RegularityReport:
    n_max = m.n_max if n_max is None else n_max
    table = a_homology_table(m, d_max, n_max)
    h = [degree_of([table[n][d] for n in range(n_max + 1)]) for d in range(d_max + 1)]
    edge = [table[n_max][d] != 0 for d in range(d_max + 1)]
    caveats = [f"h_{d} may exceed the window: H^A_{{{n_max},{d}}} is nonzero" for d in range(d_max + 1) if edge[d]]
    caveats.append(f"degrees are verified only for gradings <= {n_max}")
    return RegularityReport(m.name, n_max, d_max, h, edge, table, caveats=caveats)


def _u_map(m: DiscreteModule, power: int, n: int) -> SparseMat:
    """U·- : M_{n-power} -> M_n, U = Σ_g act_g^power."""
    src = n - power
    total = SparseMat.zeros(m.dims[n], m.dims[src])
    for g in range(len(m.c)):
        acc = SparseMat.identity(m.dims[src])
        for j in range(src + 1, n + 1):
            acc = m.act[g][j] @ acc
        for (r, cc), v in acc.entries.items():
            total.add(r, cc, v)
    return total


def cofiber_degrees(m: DiscreteModule, spec: StabilizerSpec, n_max: int | None = None) -> tuple[float, float]:
    """(deg H_{*,0}(M//U), deg H_{*,1}(M//U)) within the window: the largest
    grading with a nonzero cokernel, resp. kernel, of U·- : M_{n-N} -> M_n."""
    if spec.N is None:
        raise ValueError("stabilizer not found")
    n_max = m.n_max if n_max is None else n_max
    N = spec.N
    coker = []
    ker = []
    for n in range(n_max + 1):
        if n < N:
            coker.append(m.dims[n])
            ker.append(0)
            continue
        u = _u_map(m, N, n)
        r = rank(u)
        coker.append(u.rows - r)
        ker.append(u.cols - r)
    return degree_of(coker), degree_of(ker)


def _le(a: float, b: float) -> bool:
    return a <= b


def regularity_check(m: DiscreteModule, spec: StabilizerSpec, d_max: int, n_max: int | None = None,
                     with_r_homology: bool = False) -> RegularityReport:
    """Evaluate h_d <= max(h_0, h_1) + B0 (d-1) for 1 <= d <= d_max (B0 = N_0 + 2),
    plus the cofiber bounds, and for M = R the bound h_d(R) <= B2 + d."""
    if spec.N_0 is None:
        raise ValueError("stabilizer not found")
    rep = h_degrees(m, d_max, n_max)
    rep.N_0, rep.N = spec.N_0, spec.N
    top = max(rep.h[0], rep.h[1]) if d_max >= 1 else rep.h[0]
    rep.bounds_ok = [_le(rep.h[d], top + rep.B0 * (d - 1)) for d in range(1, d_max + 1)]
    if m.name == "R":
        rep.lemma_bound_ok = [_le(rep.h[d], rep.B2 + d) for d in range(d_max + 1)]
    deg0, deg1 = cofiber_degrees(m, spec, rep.n_max)
    b0 = rep.h[0] + spec.N_0
    b1 = max(rep.h[1], rep.h[0]) + spec.N_0 if d_max >= 1 else math.inf
    rep.cofiber = {
        "deg0": _fmt(deg0), "deg1": _fmt(deg1),
        "bound0": _fmt(b0), "bound1": _fmt(b1),
        "deg0_ok": _le(deg0, b0), "deg1_ok": _le(deg1, b1),
    }
    if with_r_homology:
        from .resolution import r_homology_table

        rt = r_homology_table(m, min(d_max, 2), rep.n_max)
        rep.h_R = [degree_of([rt[n][d] for n in range(rep.n_max + 1)]) for d in range(len(rt[0]))]
        topR = max(rep.h_R[0], rep.h_R[1]) if len(rep.h_R) > 1 else rep.h_R[0]
        rep.r_bounds_ok = [_le(rep.h_R[d], topR + rep.B1 * (d - 1)) for d in range(1, len(rep.h_R))]
    return rep
