"""Finite groups as multiplication tables, conjugation-invariant subsets, subgroups."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .primes import is_prime

SUBGROUP_ORDER_CAP = 200


class GroupError(ValueError):
    pass


class TooLargeError(GroupError):
    pass


@dataclass(frozen=True)
class AbelianGroupType:
    """The abelian ell-group ⊕ Z/ell^e_i, exponents stored non-increasing."""

    prime: int
    exponents: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not is_prime(self.prime):
            raise GroupError(f"{self.prime} is not prime")
        exps = tuple(sorted((int(e) for e in self.exponents), reverse=True))
        if any(e <= 0 for e in exps):
            raise GroupError("exponents must be positive")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def from_factors(cls, factors: Sequence[int], prime: int | None = None) -> "AbelianGroupType":
        """``[9, 3]`` -> Z/9 ⊕ Z/3.  ``prime`` is needed only for the trivial group."""
        factors = [int(f) for f in factors if int(f) != 1]
        if not factors:
            if prime is None:
                raise GroupError("trivial group needs an explicit prime")
            return cls(prime, ())
        p = _prime_of_power(factors[0])
        exps = []
        for f in factors:
            if _prime_of_power(f) != p:
                raise GroupError(f"invariant factors {factors} are not powers of a single prime")
            e = 0
            while f > 1:
                f //= p
                e += 1
            exps.append(e)
        if prime is not None and prime != p:
            raise GroupError(f"factors {factors} are not powers of {prime}")
        return cls(p, tuple(exps))

    @property
    def order(self) -> int:
        return self.prime ** sum(self.exponents)

    @property
    def factors(self) -> tuple[int, ...]:
        return tuple(self.prime**e for e in self.exponents)

    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(f) for f in self.factors)))

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        return "+".join(f"Z/{f}" for f in self.factors)


def _prime_of_power(n: int) -> int:
    if n < 2:
        raise GroupError(f"{n} is not a prime power")
    p = next(d for d in itertools.count(2) if n % d == 0)
    m = n
    while m % p == 0:
        m //= p
    if m != 1:
        raise GroupError(f"{n} is not a prime power")
    return p


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    mul: tuple[tuple[int, ...], ...]
    identity: int
    inv: tuple[int, ...]
    element_labels: tuple[str, ...] | None = None
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.mul)

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
                   name: str = "", validate: bool = True) -> "FiniteGroup":
        n = len(table)
        mul = tuple(tuple(int(x) for x in row) for row in table)
        if any(len(row) != n for row in mul):
            raise GroupError("multiplication table must be square")
        if any(not 0 <= x < n for row in mul for x in row):
            raise GroupError("table entry out of range")
        ids = [e for e in range(n) if all(mul[e][x] == x and mul[x][e] == x for x in range(n))]
        if not ids:
            raise GroupError("no two-sided identity")
        e = ids[0]
        inv = []
        for x in range(n):
            ys = [y for y in range(n) if mul[x][y] == e]
            if len(ys) != 1 or mul[ys[0]][x] != e:
                raise GroupError(f"element {x} has no two-sided inverse")
            inv.append(ys[0])
        g = cls(mul, e, tuple(inv), tuple(labels) if labels else None, name)
        if validate:
            g.check_associative()
        return g

    def check_associative(self, samples: int = 20000, seed: int = 0) -> None:
        n, m = self.order, self.mul
        if n <= 64:
            triples: Iterable[tuple[int, int, int]] = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(seed)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(samples))
        for a, b, c in triples:
            if m[m[a][b]][c] != m[a][m[b][c]]:
                raise GroupError(f"not associative at ({a}, {b}, {c})")

    def label(self, x: int) -> str:
        return self.element_labels[x] if self.element_labels else str(x)

    def prod(self, xs: Iterable[int]) -> int:
        acc = self.identity
        m = self.mul
        for x in xs:
            acc = m[acc][x]
        return acc

    def conj(self, x: int, y: int) -> int:
        """``y^-1 x y``."""
        return self.mul[self.mul[self.inv[y]][x]][y]

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv[x], -k
        acc = self.identity
        for _ in range(k):
            acc = self.mul[acc][x]
        return acc

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        out = []
        for x in range(self.order):
            k, y = 1, x
            while y != self.identity:
                y = self.mul[y][x]
                k += 1
            out.append(k)
        return tuple(out)

    def conjugacy_class(self, x: int) -> frozenset[int]:
        return frozenset(self.conj(x, y) for y in range(self.order))

    @cached_property
    def conjugacy_classes(self) -> tuple[frozenset[int], ...]:
        seen: set[int] = set()
        out = []
        for x in range(self.order):
            if x not in seen:
                cl = self.conjugacy_class(x)
                seen |= cl
                out.append(cl)
        return tuple(out)

    def closure(self, gens: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by ``gens`` (finite group, so products suffice)."""
        gens = set(gens)
        elems = {self.identity}
        frontier = [self.identity]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.mul[x][g]
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
            frontier = new
        return frozenset(elems)

    @cached_property
    def subgroup_table(self) -> "SubgroupTable":
        return subgroups(self)

    def generated_subgroup(self, s: Iterable[int]) -> int:
        """Index into ``subgroup_table`` of the subgroup generated by ``s``."""
        return self.subgroup_table.index_of(self.closure(s))

    def is_abelian(self) -> bool:
        m = self.mul
        return all(m[a][b] == m[b][a] for a in range(self.order) for b in range(a))


@dataclass(frozen=True)
class ConjClass:
    """A conjugation-invariant subset c of G (often, but not always, one class)."""

    group: FiniteGroup
    elements: tuple[int, ...]
    common_order: int

    @classmethod
    def of(cls, group: FiniteGroup, elements: Iterable[int]) -> "ConjClass":
        elems = tuple(sorted(set(elements)))
        if not elems:
            raise GroupError("empty class")
        s = set(elems)
        for x in elems:
            for y in range(group.order):
                if group.conj(x, y) not in s:
                    raise GroupError(f"subset not closed under conjugation ({x} by {y})")
        orders = {group.element_orders[x] for x in elems}
        if len(orders) != 1:
            raise GroupError(f"elements of c have different orders {sorted(orders)}")
        return cls(group, elems, orders.pop())

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.elements)

    @cached_property
    def position(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def is_single_class(self) -> bool:
        return self.group.conjugacy_class(self.elements[0]) == self._set

    def generates(self) -> bool:
        return len(self.group.closure(self.elements)) == self.group.order


@dataclass
class SubgroupTable:
    group_order: int
    subgroups: list[frozenset[int]]
    _index: dict[frozenset[int], int] = field(repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        self.subgroups.sort(key=lambda h: (len(h), sorted(h)))
        self._index = {h: i for i, h in enumerate(self.subgroups)}

    def __len__(self) -> int:
        return len(self.subgroups)

    def __getitem__(self, i: int) -> frozenset[int]:
        return self.subgroups[i]

    def index_of(self, h: frozenset[int]) -> int:
        return self._index[h]

    def contains(self, i: int, j: int) -> bool:
        """Whether subgroup ``j`` is contained in subgroup ``i``."""
        return self.subgroups[j] <= self.subgroups[i]

    @property
    def trivial(self) -> int:
        return 0

    @property
    def whole(self) -> int:
        return len(self.subgroups) - 1


def subgroups(group: FiniteGroup, max_gens: int = 3) -> SubgroupTable:
    """All subgroups, by closing generator subsets of size <= ``max_gens``.

    The candidate set is then swept to a fixed point under pairwise joins,
    which picks up anything needing more generators.
    """
    if group.order > SUBGROUP_ORDER_CAP:
        raise TooLargeError(f"group of order {group.order} too large for subgroup enumeration (cap {SUBGROUP_ORDER_CAP})")
    found: set[frozenset[int]] = {frozenset([group.identity])}
    # a subgroup generated by k elements is a join of k cyclic subgroups, so one
    # generator per distinct cyclic subgroup is enough
    cyclic: dict[frozenset[int], int] = {}
    for x in range(group.order):
        cyclic.setdefault(group.closure([x]), x)
    found |= set(cyclic)
    gens = sorted(cyclic.values())
    for k in range(2, max_gens + 1):
        for combo in itertools.combinations(gens, k):
            found.add(group.closure(combo))
    changed = True
    while changed:
        changed = False
        current = list(found)
        for a, b in itertools.combinations(current, 2):
            if a <= b or b <= a:
                continue
            j = group.closure(a | b)
            if j not in found:
                found.add(j)
                changed = True
    return SubgroupTable(group.order, list(found))


# -- constructions -----------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup.from_table([[(a + b) % n for b in range(n)] for a in range(n)],
                                  [str(a) for a in range(n)], f"Z/{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    pairs = list(itertools.product(range(g.order), range(h.order)))
    idx = {p: i for i, p in enumerate(pairs)}
    table = [[idx[(g.mul[a][c], h.mul[b][d])] for (c, d) in pairs] for (a, b) in pairs]
    labels = [f"({g.label(a)},{h.label(b)})" for a, b in pairs]
    return FiniteGroup.from_table(table, labels, f"{g.name}x{h.name}")


def symmetric_group(n: int) -> FiniteGroup:
    """S_n acting on {1..n}; product ``p*q`` means apply q first, then p."""
    perms = sorted(itertools.permutations(range(n)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return FiniteGroup.from_table(table, [cycle_notation(p) for p in perms], f"S{n}", validate=n <= 4)


def cycle_notation(perm: Sequence[int]) -> str:
    seen, parts = set(), []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = perm[j]
        parts.append("(" + "".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def transpositions(g: FiniteGroup) -> ConjClass:
    """The transposition class of a symmetric group built by ``symmetric_group``."""
    assert g.element_labels is not None
    elems = [x for x in range(g.order) if g.element_labels[x].count("(") == 1 and len(g.element_labels[x]) == 4]
    return ConjClass.of(g, elems)


def build_generalized_dihedral(a: AbelianGroupType) -> tuple[FiniteGroup, ConjClass]:
    """G = A ⋊ {±1} with -1 acting by inversion, and c = its involutions (a, -1)."""
    if a.prime == 2:
        raise GroupError("generalized dihedral construction needs |A| odd")
    mods = a.factors
    elems_a = a.elements()
    elements = [(x, s) for s in (1, -1) for x in elems_a]
    idx = {e: i for i, e in enumerate(elements)}

    def mul(p: tuple, q: tuple) -> tuple:
        (x, s), (y, t) = p, q
        return tuple((xi + s * yi) % m for xi, yi, m in zip(x, y, mods)), s * t

    table = [[idx[mul(p, q)] for q in elements] for p in elements]
    labels = [f"({','.join(map(str, x))};{'+' if s == 1 else '-'})" for x, s in elements]
    g = FiniteGroup.from_table(table, labels, f"gdih[{a}]", validate=len(elements) <= 64)
    c = ConjClass.of(g, [idx[(x, -1)] for x in elems_a])
    return g, c


def is_admissible(group: FiniteGroup, c: ConjClass) -> bool:
    if not c.generates():
        return False
    n = group.order
    coprime = [k for k in range(1, n + 1) if _gcd(k, n) == 1]
    return all(group.power(g, k) in c for g in c for k in coprime)


def is_nonsplitting(group: FiniteGroup, c: ConjClass) -> bool:
    if not c.generates():
        return False
    for h in group.subgroup_table.subgroups:
        inter = frozenset(c.elements) & h
        if not inter:
            continue
        x = min(inter)
        h_class = frozenset(group.conj(x, y) for y in h)
        if h_class != inter:
            return False
    return True


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# -- parsing -----------------------------------------------------------------

def parse_group_spec(spec: str) -> tuple[FiniteGroup, ConjClass]:
    """Resolve a CLI group spec: ``gdih:3``, ``gdih:3,3``, ``sym:3`` or a JSON table path."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "gdih":
            factors = [int(x) for x in arg.split(",") if x.strip()]
            if factors == [1] or not factors:
                return build_generalized_dihedral(AbelianGroupType(3, ()))
            return build_generalized_dihedral(AbelianGroupType.from_factors(factors))
        if kind == "sym":
            n = int(arg)
            if n < 2 or n > 5:
                raise GroupError("sym:n supported for 2 <= n <= 5")
            g = symmetric_group(n)
            return g, transpositions(g)
        if kind == "json" or spec.endswith(".json"):
            return load_group_json(arg if kind == "json" else spec)
    except ValueError as exc:
        raise GroupError(f"bad group spec {spec!r}: {exc}") from exc
    raise GroupError(f"unknown group spec {spec!r}")


def load_group_json(path: str | Path) -> tuple[FiniteGroup, ConjClass]:
    data = json.loads(Path(path).read_text())
    g = FiniteGroup.from_table(data["mul"], data.get("labels"), Path(path).stem)
    if data.get("order", g.order) != g.order:
        raise GroupError("declared order does not match table size")
    return g, ConjClass.of(g, data["class"])
