"""Braid orbits on c^n, the graded component ring R, and its stabilization.

Tuples are stored as tuples of *positions* in ``c.elements`` (so entry ``i``
stands for the group element ``c.elements[i]``); a tuple's integer encoding
is its base-|c| value with the first entry most significant, so numeric order
is lexicographic order.

Two routes produce the orbit partition:

* :func:`bfs_orbits` visits every tuple of c^n and closes under the braid
  generators.  Exact but limited to |c|^n within the visit budget.
* :class:`ComponentRing` never visits tuples.  Since R is generated in
  degree 1, every level-n orbit is a union of classes ``[g]·o`` with o a
  level-(n-1) orbit, and the only identifications between those classes come
  from sigma_1: ``(g, [h]·o'') ~ (g h g^-1, [g]·o'')``.  A union-find over
  ``c × Orb(n-1)`` therefore gives the level-n orbits together with the
  left-multiplication table by degree-one generators.
"""

from __future__ import annotations

import logging
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .groups import ConjClass, FiniteGroup, GroupError

from .errors import BudgetExceeded, budget_from_env as _env_budget

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**8


class PreconditionError(ValueError):
    pass


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    return _env_budget(default)


# -- tuple-level operations ---------------------------------------------------

def braid_move(group: FiniteGroup, t: Sequence[int], i: int, sign: int = 1) -> tuple[int, ...]:
    """Apply sigma_i (sign=+1) or its inverse to a tuple of *group elements*.

    ``i`` is 1-based.  sigma_i: (.., a, b, ..) -> (.., a b a^-1, a, ..).
    """
    n = len(t)
    if not 1 <= i <= n - 1:
        raise IndexError(f"braid index {i} out of range for a tuple of length {n}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    m, inv = group.mul, group.inv
    a, b = t[i - 1], t[i]
    if sign == 1:
        new = (m[m[a][b]][inv[a]], a)
    else:
        new = (b, m[m[inv[b]][a]][b])
    return tuple(t[: i - 1]) + new + tuple(t[i + 1:])


def global_monodromy(group: FiniteGroup, t: Iterable[int]) -> int:
    """The ordered product g_1 g_2 ... g_n (identity for the empty tuple)."""
    return group.prod(t)


def _position_tables(c: ConjClass) -> tuple[list[list[int]], list[list[int]]]:
    """Braid moves on positions: fwd[a][b] = pos(a b a^-1), bwd[a][b] = pos(b^-1 a b)."""
    g = c.group
    pos = c.position
    els = c.elements
    k = len(els)
    fwd = [[pos[g.mul[g.mul[els[a]][els[b]]][g.inv[els[a]]]] for b in range(k)] for a in range(k)]
    bwd = [[pos[g.conj(els[a], els[b])] for b in range(k)] for a in range(k)]
    return fwd, bwd


def encode(t: Sequence[int], k: int) -> int:
    e = 0
    for x in t:
        e = e * k + x
    return e


def decode(e: int, k: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        e, out[i] = divmod(e, k)
    return tuple(out)


def bfs_orbits(c: ConjClass, n: int, budget: int | None = None) -> list[list[int]]:
    """Partition c^n (as encodings) into braid orbits by breadth-first closure.

    Returns orbits sorted by their smallest encoding; each orbit is a sorted
    list of encodings.
    """
    k = len(c)
    total = k**n
    budget = budget_from_env() if budget is None else budget
    if total > budget:
        raise BudgetExceeded(f"|c|^n = {k}^{n} = {total} tuple visits exceeds the budget {budget}")
    fwd, bwd = _position_tables(c)
    label = [-1] * total
    orbits: list[list[int]] = []
    weights = [k ** (n - 1 - i) for i in range(n)]
    for seed in range(total):
        if label[seed] >= 0:
            continue
        oid = len(orbits)
        label[seed] = oid
        members = [seed]
        queue = deque([seed])
        while queue:
            e = queue.popleft()
            t = decode(e, k, n)
            for i in range(n - 1):
                a, b = t[i], t[i + 1]
                base = e - a * weights[i] - b * weights[i + 1]
                for na, nb in ((fwd[a][b], a), (b, bwd[a][b])):
                    f = base + na * weights[i] + nb * weights[i + 1]
                    if label[f] < 0:
                        label[f] = oid
                        members.append(f)
                        queue.append(f)
        members.sort()
        orbits.append(members)
    return orbits


# -- the component ring -------------------------------------------------------

@dataclass
class Orbit:
    rep: tuple[int, ...]      # lexicographically least member, as c-positions
    size: int
    monodromy: int            # group element index
    subgroup: int             # index into the group's SubgroupTable


class _DisjointSet:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


class ComponentRing:
    """The graded ring R = ⊕ R_n with basis c^n / braid group, for n <= n_max.

    ``left[n][g][o]`` is the id of the level-(n+1) orbit ``[g]·o`` for a level-n
    orbit ``o`` and a position ``g`` in c.
    """

    def __init__(self, group: FiniteGroup, c: ConjClass, n_max: int, orbit_budget: int | None = None) -> None:
        if n_max < 0:
            raise ValueError("n_max must be non-negative")
        self.group = group
        self.c = c
        self.k = len(c)
        self.n_max = n_max
        self.budget = budget_from_env() if orbit_budget is None else orbit_budget
        self.levels: list[list[Orbit]] = []
        self.left: list[list[list[int]]] = []
        self._nodes: list[list[list[int]]] = []   # level n: orbit id -> node list (g * |O_{n-1}| + o)
        self._join_cache: dict[tuple[int, int], int] = {}
        self._build()

    # construction
    def _join(self, g_pos: int, sub: int) -> int:
        key = (g_pos, sub)
        hit = self._join_cache.get(key)
        if hit is None:
            grp = self.group
            h = grp.subgroup_table[sub] | {self.c.elements[g_pos]}
            hit = grp.generated_subgroup(h)
            self._join_cache[key] = hit
        return hit

    def _build(self) -> None:
        grp, c, k = self.group, self.c, self.k
        trivial = grp.generated_subgroup([])
        self.levels.append([Orbit((), 1, grp.identity, trivial)])
        self._nodes.append([[]])
        fwd, _ = _position_tables(c)
        els = c.elements
        for n in range(1, self.n_max + 1):
            prev = self.levels[n - 1]
            m_prev = len(prev)
            if k * m_prev > self.budget:
                raise BudgetExceeded(f"level {n} needs {k * m_prev} union-find nodes, budget {self.budget}")
            ds = _DisjointSet(k * m_prev)
            if n >= 2:
                lt = self.left[n - 2]
                for o2 in range(len(self.levels[n - 2])):
                    for g in range(k):
                        g_o2 = lt[g][o2]
                        for h in range(k):
                            # (g, [h] o2) ~ (g h g^-1, [g] o2)
                            ds.union(g * m_prev + lt[h][o2], fwd[g][h] * m_prev + g_o2)
            comps: dict[int, list[int]] = {}
            for node in range(k * m_prev):
                comps.setdefault(ds.find(node), []).append(node)
            # nodes are numbered g-major and level-(n-1) orbit ids are sorted by
            # rep, so the least rep of a component comes from its least node
            # with the minimal g -- but ties in g need the min rep over o.
            entries = []
            for nodes in comps.values():
                g0 = nodes[0] // m_prev
                o_min = min(nd % m_prev for nd in nodes if nd // m_prev == g0)
                rep = (g0,) + prev[o_min].rep
                entries.append((rep, nodes))
            entries.sort(key=lambda x: x[0])
            level: list[Orbit] = []
            left_prev = [[0] * m_prev for _ in range(k)]
            node_lists = []
            for oid, (rep, nodes) in enumerate(entries):
                g0, o0 = divmod(nodes[0], m_prev)
                size = 0
                for nd in nodes:
                    g, o = divmod(nd, m_prev)
                    left_prev[g][o] = oid
                    size += prev[o].size
                mono = grp.mul[els[g0]][prev[o0].monodromy]
                sub = self._join(g0, prev[o0].subgroup)
                level.append(Orbit(rep, size, mono, sub))
                node_lists.append(nodes)
            self.left.append(left_prev)
            self.levels.append(level)
            self._nodes.append(node_lists)
            log.debug("level %d: %d orbits", n, len(level))

    # queries
    def dim(self, n: int) -> int:
        return len(self.levels[n])

    def dims(self) -> list[int]:
        return [len(lv) for lv in self.levels]

    def orbit(self, n: int, oid: int) -> Orbit:
        return self.levels[n][oid]

    def orbit_of(self, t: Sequence[int]) -> int:
        """Orbit id of a tuple of c-positions, by folding left multiplication from the right."""
        if len(t) > self.n_max:
            raise ValueError(f"tuple of length {len(t)} exceeds n_max={self.n_max}")
        o = 0
        for depth, g in enumerate(reversed(t)):
            o = self.left[depth][g][o]
        return o

    def orbit_of_elements(self, t: Sequence[int]) -> int:
        pos = self.c.position
        try:
            return self.orbit_of([pos[x] for x in t])
        except KeyError as exc:
            raise GroupError(f"tuple entry {exc.args[0]} is not in c") from None

    def left_mul_gen(self, g_pos: int, n: int, oid: int) -> int:
        return self.left[n][g_pos][oid]

    def multiply(self, n1: int, o1: int, n2: int, o2: int) -> int:
        """Orbit id (at level n1+n2) of the product of two basis elements."""
        if n1 + n2 > self.n_max:
            raise ValueError(f"grading {n1}+{n2} exceeds n_max={self.n_max}")
        o = o2
        depth = n2
        for g in reversed(self.levels[n1][o1].rep):
            o = self.left[depth][g][o]
            depth += 1
        return o

    def left_mul_tuple(self, word: Sequence[int], n: int, oid: int) -> int:
        """Apply left multiplication by a word of c-positions to a level-n orbit."""
        o, depth = oid, n
        for g in reversed(word):
            o = self.left[depth][g][o]
            depth += 1
        return o

    def sector(self, n: int, sub: int) -> list[int]:
        return [i for i, o in enumerate(self.levels[n]) if o.subgroup == sub]

    def generating(self, n: int) -> list[int]:
        whole = self.group.subgroup_table.whole
        return self.sector(n, whole)

    def nodes(self, n: int, oid: int) -> list[tuple[int, int]]:
        """Pairs (g, o') with [g]·o' equal to the given level-n orbit."""
        m_prev = len(self.levels[n - 1])
        return [divmod(nd, m_prev) for nd in self._nodes[n][oid]]

    def conjugate_orbit(self, n: int, oid: int, x: int) -> int:
        """Orbit of the simultaneous conjugate x^-1 (g_i) x of the representative."""
        els, pos, grp = self.c.elements, self.c.position, self.group
        return self.orbit_of([pos[grp.conj(els[g], x)] for g in self.levels[n][oid].rep])

    def conjugation_components(self, n: int) -> dict[int, int]:
        """Generating orbit id -> component id, after quotienting by G-conjugation."""
        gen = self.generating(n)
        ds = {o: o for o in gen}

        def find(o: int) -> int:
            while ds[o] != o:
                ds[o] = ds[ds[o]]
                o = ds[o]
            return o

        for o in gen:
            for x in range(self.group.order):
                p = self.conjugate_orbit(n, o, x)
                a, b = find(o), find(p)
                if a != b:
                    ds[max(a, b)] = min(a, b)
        roots = sorted({find(o) for o in gen})
        cid = {r: i for i, r in enumerate(roots)}
        return {o: cid[find(o)] for o in gen}

    def elements_of(self, rep: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.c.elements[g] for g in rep)


_RING_CACHE: dict[tuple[int, tuple[int, ...], int], ComponentRing] = {}


def component_ring(group: FiniteGroup, c: ConjClass, n_max: int) -> ComponentRing:
    """Cached :class:`ComponentRing`; a ring for a larger n_max serves smaller requests."""
    for (gid, elems, nm), ring in _RING_CACHE.items():
        if gid == id(group) and elems == c.elements and nm >= n_max and ring.group is group:
            return ring
    ring = ComponentRing(group, c, n_max)
    _RING_CACHE[(id(group), c.elements, n_max)] = ring
    return ring


# -- orbit tables -------------------------------------------------------------

@dataclass
class OrbitTable:
    group: FiniteGroup
    c: ConjClass
    n: int
    representatives: list[tuple[int, ...]]     # as group elements
    sizes: list[int]
    monodromy: list[int]
    subgroup: list[int]
    generating: list[bool]
    component: list[int | None]
    ring: ComponentRing = field(repr=False)

    def __len__(self) -> int:
        return len(self.representatives)

    def orbit_of(self, t: Sequence[int]) -> int:
        """Orbit id of a tuple of group elements of length n."""
        if len(t) != self.n:
            raise ValueError(f"expected a tuple of length {self.n}")
        return self.ring.orbit_of_elements(t)

    @property
    def component_count(self) -> int:
        return len({x for x in self.component if x is not None})

    def rows(self) -> list[dict]:
        return [
            {
                "orbit_id": i,
                "size": self.sizes[i],
                "monodromy": self.group.label(self.monodromy[i]),
                "subgroup": self.subgroup[i],
                "generating": int(self.generating[i]),
                "component_id": "" if self.component[i] is None else self.component[i],
                "representative": " ".join(self.group.label(x) for x in self.representatives[i]),
            }
            for i in range(len(self))
        ]


def orbit_table(group: FiniteGroup, c: ConjClass, n: int, *, method: str = "ring",
                budget: int | None = None) -> OrbitTable:
    """Partition of c^n into braid orbits with per-orbit metadata.

    ``method="bfs"`` visits all |c|^n tuples (subject to ``budget``) and is
    cross-checked against the ring construction; ``method="ring"`` uses only
    the incremental construction.
    """
    ring = component_ring(group, c, n)
    if method == "bfs":
        orbits = bfs_orbits(c, n, budget)
        k = len(c)
        if len(orbits) != ring.dim(n):
            raise AssertionError("BFS and incremental orbit counts disagree")
        for oid, members in enumerate(orbits):
            rep = decode(members[0], k, n)
            if ring.levels[n][oid].rep != rep or ring.levels[n][oid].size != len(members):
                raise AssertionError(f"BFS and incremental orbit {oid} disagree")
    elif method != "ring":
        raise ValueError(f"unknown method {method!r}")
    whole = group.subgroup_table.whole
    comps = ring.conjugation_components(n)
    level = ring.levels[n]
    return OrbitTable(
        group, c, n,
        representatives=[ring.elements_of(o.rep) for o in level],
        sizes=[o.size for o in level],
        monodromy=[o.monodromy for o in level],
        subgroup=[o.subgroup for o in level],
        generating=[o.subgroup == whole for o in level],
        component=[comps.get(i) for i in range(len(level))],
        ring=ring,
    )


def ring_multiply(ring: ComponentRing, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    """Product of basis elements given as (grading, orbit id)."""
    (n1, o1), (n2, o2) = a, b
    return n1 + n2, ring.multiply(n1, o1, n2, o2)


def component_count_connected(group: FiniteGroup, c: ConjClass, n: int) -> int:
    ring = component_ring(group, c, n)
    return len(set(ring.conjugation_components(n).values()))


def check_fried_volklein(group: FiniteGroup, c: ConjClass, n: int, g: int) -> bool:
    """Every generating level-n orbit contains (g, g'_2..g'_n) with the tail generating G."""
    if g not in c:
        raise PreconditionError(f"element {g} is not in c")
    if n == 0:
        return True
    ring = component_ring(group, c, n)
    whole = group.subgroup_table.whole
    gp = c.position[g]
    prev = ring.levels[n - 1]
    for oid in ring.generating(n):
        if not any(h == gp and prev[o].subgroup == whole for h, o in ring.nodes(n, oid)):
            return False
    return True


# -- stabilization ------------------------------------------------------------

@dataclass
class SectorRow:
    n: int
    subgroup: int
    source_size: int
    target_size: int
    bijective: bool
    independent: bool


@dataclass
class StabilizerSpec:
    group: FiniteGroup
    c: ConjClass
    D: int | None
    N: int | None
    N_0: int | None
    n_max_checked: int
    found: bool
    sector_onsets: dict[int, int | None] = field(default_factory=dict)
    tried: list[dict] = field(default_factory=list)
    note: str = ""

    @property
    def power(self) -> int | None:
        """Exponent |g| D of each summand [g]^{|g| D} of U."""
        return None if self.D is None else self.c.common_order * self.D

    @property
    def V_grading(self) -> int:
        return len(self.c) * self.c.common_order

    def U_terms(self) -> list[tuple[int, ...]]:
        """The summands of U as words (c-positions): [g]^{|g|D} for g in c."""
        if self.N is None:
            return []
        return [(g,) * self.N for g in range(len(self.c))]

    def to_dict(self) -> dict:
        return {
            "group": self.group.name,
            "class_size": len(self.c),
            "common_order": self.c.common_order,
            "D": self.D,
            "N": self.N,
            "N_0": self.N_0,
            "n_max_checked": self.n_max_checked,
            "found": self.found,
            "U": " + ".join(f"[{self.group.label(x)}]^{self.N}" for x in self.c.elements) if self.N else None,
            "V_grading": self.V_grading,
            "sector_onsets": {str(k): v for k, v in self.sector_onsets.items()},
            "tried": self.tried,
            "note": self.note,
        }


def _power_map(ring: ComponentRing, g: int, power: int, n_src: int) -> list[int]:
    return [ring.left_mul_tuple((g,) * power, n_src, o) for o in range(ring.dim(n_src))]


def sector_rows(ring: ComponentRing, power: int) -> list[SectorRow]:
    """For each subgroup H meeting c and each target n >= power: is [g]^power · -
    a bijection S_{n-power}(H) -> S_n(H), and is it the same map for all g in c ∩ H?"""
    grp, c = ring.group, ring.c
    table = grp.subgroup_table
    rows = []
    for n in range(power, ring.n_max + 1):
        src = n - power
        maps = {g: _power_map(ring, g, power, src) for g in range(len(c))}
        src_subs = [o.subgroup for o in ring.levels[src]]
        tgt_subs = [o.subgroup for o in ring.levels[n]]
        for h in range(len(table)):
            gs = [g for g in range(len(c)) if c.elements[g] in table[h]]
            if not gs:
                continue
            s_src = [o for o in range(len(src_subs)) if src_subs[o] == h]
            n_tgt = sum(1 for s in tgt_subs if s == h)
            images = {g: [maps[g][o] for o in s_src] for g in gs}
            first = images[gs[0]]
            bij = len(s_src) == n_tgt and len(set(first)) == len(first) and all(tgt_subs[x] == h for x in first)
            indep = all(images[g] == first for g in gs)
            rows.append(SectorRow(n, h, len(s_src), n_tgt, bij, indep))
    return rows


def _terminal_onset(flags: dict[int, bool], n_max: int) -> int | None:
    """Least n such that flags[m] holds for every tested m in [n, n_max]."""
    onset = None
    for n in range(n_max, -1, -1):
        if n not in flags:
            continue
        if flags[n]:
            onset = n
        else:
            break
    return onset


def u_matrix(ring: ComponentRing, power: int, n: int):
    """Matrix of U·- : R_{n-power} -> R_n with U = sum_g [g]^power."""
    from .linalg import SparseMat

    src = n - power
    m = SparseMat.zeros(ring.dim(n), ring.dim(src))
    for g in range(ring.k):
        for o in range(ring.dim(src)):
            m.add(ring.left_mul_tuple((g,) * power, src, o), o, 1)
    return m


def u_global_flags(ring: ComponentRing, power: int) -> dict[int, tuple[bool, bool]]:
    """n -> (injective, surjective) for U·- : R_{n-power} -> R_n."""
    from .linalg import rank

    out = {}
    for n in range(power, ring.n_max + 1):
        m = u_matrix(ring, power, n)
        r = rank(m)
        out[n] = (r == m.cols, r == m.rows)
    return out


def find_stabilizer_U(group: FiniteGroup, c: ConjClass, n_max: int, D_cap: int = 4,
                      min_confirm: int | None = None) -> StabilizerSpec:
    """Search D = 1..D_cap for the smallest D whose U_D stabilizes within n_max.

    D is accepted when, for every subgroup H meeting c, the sector maps
    [g]^{|g|D}·- are bijective and independent of g on a terminal run of
    gradings [n_0(H), n_max] containing at least ``min_confirm`` gradings
    (default: N + 1, i.e. the run spans a full period of U), and U·- is
    bijective on R for a terminal run of the same length.  N_0 is the start of
    the global run.  Nothing here claims stabilization beyond n_max.
    """
    if not c.is_single_class():
        raise PreconditionError("stabilization search needs c to be a single conjugacy class")
    if not c.generates():
        raise PreconditionError("c does not generate G")
    from .groups import is_nonsplitting

    if not is_nonsplitting(group, c):
        raise PreconditionError("(G, c) is not non-splitting")
    ring = component_ring(group, c, n_max)
    order = c.common_order
    tried = []
    for D in range(1, D_cap + 1):
        N = order * D
        confirm = N + 1 if min_confirm is None else min_confirm
        if N > n_max:
            tried.append({"D": D, "N": N, "ok": False, "reason": "N exceeds n_max"})
            break
        rows = sector_rows(ring, N)
        onsets: dict[int, int | None] = {}
        for h in sorted({r.subgroup for r in rows}):
            flags = {r.n: r.bijective and r.independent for r in rows if r.subgroup == h}
            onsets[h] = _terminal_onset(flags, n_max)
        sectors_ok = all(v is not None and n_max - v + 1 >= confirm for v in onsets.values())
        gflags = u_global_flags(ring, N)
        N_0 = _terminal_onset({n: a and b for n, (a, b) in gflags.items()}, n_max)
        global_ok = N_0 is not None and n_max - N_0 + 1 >= confirm
        tried.append({"D": D, "N": N, "ok": sectors_ok and global_ok, "N_0": N_0,
                      "sector_onsets": {str(h): v for h, v in onsets.items()}})
        if sectors_ok and global_ok:
            return StabilizerSpec(group, c, D, N, N_0, n_max, True, onsets, tried)
    return StabilizerSpec(group, c, None, None, None, n_max, False, {}, tried,
                          note=f"inconclusive: no D <= {D_cap} confirmed within n_max={n_max}")


@dataclass
class UScanRow:
    n: int
    dim_source: int
    dim_target: int
    injective: bool
    surjective: bool
    sectors: dict[int, tuple[bool, bool]]

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def _block(m, rows: list[int], cols: list[int]):
    from .linalg import SparseMat

    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: j for j, c in enumerate(cols)}
    return SparseMat(len(rows), len(cols),
                     {(ri[r], ci[c]): v for (r, c), v in m.entries.items() if r in ri and c in ci})


def scan_U_stability(spec: StabilizerSpec, n_max: int | None = None) -> list[UScanRow]:
    """Injectivity/surjectivity of U·- : R_{n-N} -> R_n, globally and per sector block."""
    from .linalg import rank

    if spec.N is None:
        raise PreconditionError("no stabilizing element found")
    n_max = spec.n_max_checked if n_max is None else n_max
    ring = component_ring(spec.group, spec.c, n_max)
    table = spec.group.subgroup_table
    rows = []
    for n in range(spec.N, n_max + 1):
        m = u_matrix(ring, spec.N, n)
        r = rank(m)
        sectors = {}
        for h in range(len(table)):
            if not any(x in table[h] for x in spec.c.elements):
                continue
            src = ring.sector(n - spec.N, h)
            tgt = ring.sector(n, h)
            b = _block(m, tgt, src)
            rb = rank(b)
            sectors[h] = (rb == len(src), rb == len(tgt))
        rows.append(UScanRow(n, m.cols, m.rows, r == m.cols, r == m.rows, sectors))
    return rows


@dataclass
class VScanRow:
    n: int
    generating_source: int
    generating_target: int
    injective: bool
    surjective: bool


def scan_V_stability(group: FiniteGroup, c: ConjClass, n_max: int) -> list[VScanRow]:
    """V·- with V = prod_{g in c} [g]^{|g|}, restricted to generating orbits.

    Exploratory only: rows for source gradings n = 1 .. n_max - grading(V).
    """
    vg = len(c) * c.common_order
    if n_max < vg + 1:
        return []
    ring = component_ring(group, c, n_max)
    word = tuple(g for g in range(len(c)) for _ in range(c.common_order))
    rows = []
    for n in range(1, n_max - vg + 1):
        src = ring.generating(n)
        tgt = set(ring.generating(n + vg))
        images = [ring.left_mul_tuple(word, n, o) for o in src]
        assert all(x in tgt for x in images)
        rows.append(VScanRow(n, len(src), len(tgt), len(set(images)) == len(images), set(images) == tgt))
    return rows
