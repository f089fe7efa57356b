"""Racks, the cubical rack space, rational rack homology and the shuffle coproduct.

Rack convention: ``a^b = b^-1 a b`` for a conjugation rack, so the second
face map conjugates earlier entries exactly as g_j -> g_i^-1 g_j g_i.
Basis tuples are tuples of rack positions 0..size-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import BudgetExceeded, budget_from_env
from .groups import ConjClass, FiniteGroup, GroupError
from .linalg import SparseMat, homology_dim_snf, nullity, rank

RACK_MATRIX_BUDGET = 10**6


class RackError(ValueError):
    pass


@dataclass(frozen=True)
class Rack:
    op: tuple[tuple[int, ...], ...]     # op[a][b] = a^b
    labels: tuple[str, ...] | None = None
    name: str = ""

    def __post_init__(self) -> None:
        n = len(self.op)
        for b in range(n):
            col = {self.op[a][b] for a in range(n)}
            if col != set(range(n)):
                raise RackError(f"a -> a^{b} is not a bijection")
        op = self.op
        for a, b, c in itertools.product(range(n), repeat=3):
            if op[op[a][b]][c] != op[op[a][c]][op[b][c]]:
                raise RackError(f"self-distributivity fails at ({a}, {b}, {c})")

    @property
    def size(self) -> int:
        return len(self.op)

    @cached_property
    def orbit_count(self) -> int:
        """Number of orbits of the rack acting on itself (the m in m^d)."""
        parent = list(range(self.size))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in range(self.size):
            for b in range(self.size):
                ra, rb = find(a), find(self.op[a][b])
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        return len({find(x) for x in range(self.size)})


def conjugation_rack(group: FiniteGroup, c: ConjClass) -> Rack:
    pos = c.position
    op = tuple(tuple(pos[group.conj(a, b)] for b in c.elements) for a in c.elements)
    return Rack(op, tuple(group.label(x) for x in c.elements), f"conj[{group.name}]")


def trivial_rack(m: int) -> Rack:
    if m < 1:
        raise RackError("trivial rack needs at least one element")
    return Rack(tuple(tuple(a for _ in range(m)) for a in range(m)), name=f"trivial:{m}")


def parse_rack_spec(spec: str) -> Rack:
    """``trivial:m`` or any group spec (conjugation rack of its class)."""
    kind, _, arg = spec.partition(":")
    if kind == "trivial":
        try:
            return trivial_rack(int(arg))
        except ValueError as exc:
            raise RackError(f"bad rack spec {spec!r}") from exc
    from .groups import parse_group_spec

    try:
        g, c = parse_group_spec(spec)
    except GroupError as exc:
        raise RackError(str(exc)) from exc
    return conjugation_rack(g, c)


def face_map(rack: Rack, t: Sequence[int], i: int, eps: int) -> tuple[int, ...]:
    """d_i^eps on a cube (1-based i): eps=0 deletes entry i; eps=1 deletes it
    and replaces each earlier entry g_j by g_j^{g_i}."""
    n = len(t)
    if not 1 <= i <= n:
        raise IndexError(f"face index {i} out of range for an {n}-cube")
    if eps == 0:
        return tuple(t[: i - 1]) + tuple(t[i:])
    if eps == 1:
        gi = t[i - 1]
        return tuple(rack.op[x][gi] for x in t[: i - 1]) + tuple(t[i:])
    raise ValueError("eps must be 0 or 1")


def _encode(t: Sequence[int], m: int) -> int:
    e = 0
    for x in t:
        e = e * m + x
    return e


def boundary_matrix(rack: Rack, n: int, sign_offset: int = 0) -> SparseMat:
    """∂_n = Σ_i (-1)^(i + sign_offset) (d_i^0 - d_i^1) : C_n -> C_{n-1}."""
    m = rack.size
    if n <= 0:
        return SparseMat.zeros(0 if n < 0 else 1, 1 if n == 0 else 0)
    budget = budget_from_env(RACK_MATRIX_BUDGET)
    if m**n > budget:
        raise BudgetExceeded(f"rack chain group of rank {m}^{n} exceeds budget {budget}")
    mat = SparseMat.zeros(m ** (n - 1), m**n)
    for col, t in enumerate(itertools.product(range(m), repeat=n)):
        for i in range(1, n + 1):
            s = -1 if (i + sign_offset) % 2 else 1
            a = _encode(face_map(rack, t, i, 0), m)
            b = _encode(face_map(rack, t, i, 1), m)
            if a != b:
                mat.add(a, col, s)
                mat.add(b, col, -s)
    return mat


def rack_homology_dims(rack: Rack, d_max: int, sign_offset: int = 0) -> list[int]:
    """dim H_d(Bc; Q) for 0 <= d <= d_max."""
    budget = budget_from_env(RACK_MATRIX_BUDGET)
    if rack.size ** (d_max + 1) > budget:
        raise BudgetExceeded(f"{rack.size}^{d_max + 1} exceeds the rack matrix budget {budget}")
    ranks = [0] + [rank(boundary_matrix(rack, n, sign_offset)) for n in range(1, d_max + 2)]
    return [rack.size**d - ranks[d] - ranks[d + 1] for d in range(d_max + 1)]


def rack_homology_integral(rack: Rack, d_max: int) -> list[tuple[int, list[int]]]:
    """(free rank, torsion coefficients) of H_d(Bc; Z), via Smith normal form."""
    out = []
    for d in range(d_max + 1):
        d_out = boundary_matrix(rack, d).to_dense() if d >= 1 else []
        d_in = boundary_matrix(rack, d + 1).to_dense()
        out.append(homology_dim_snf(d_in, d_out, rack.size**d))
    return out


# -- shuffle coproduct --------------------------------------------------------

def shuffle_sign(first: Sequence[int], n: int) -> int:
    """Sign of the (p, n-p)-shuffle sending 1..p onto ``first`` (sorted, 1-based)."""
    inversions = sum(s - (k + 1) for k, s in enumerate(first))
    return -1 if inversions % 2 else 1


def shuffle_coproduct(rack: Rack, x: Sequence[int]) -> dict[tuple[tuple[int, ...], tuple[int, ...]], int]:
    """Serre-diagonal coproduct of a basis tensor.

    For every (p, q)-shuffle σ the term is
    sign(σ) · d^0_{σ(1)}···d^0_{σ(p)}(x) ⊗ d^1_{σ(p+1)}···d^1_{σ(n)}(x),
    compositions applied right to left.
    """
    n = len(x)
    out: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}
    for p in range(n + 1):
        for first in itertools.combinations(range(1, n + 1), p):
            rest = [i for i in range(1, n + 1) if i not in first]
            left = tuple(x)
            for i in reversed(first):
                left = face_map(rack, left, i, 0)
            right = tuple(x)
            for i in reversed(rest):
                right = face_map(rack, right, i, 1)
            key = (left, right)
            v = out.get(key, 0) + shuffle_sign(first, n)
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def coassociativity_defect(rack: Rack, x: Sequence[int]) -> dict:
    """(Δ⊗id)Δ(x) - (id⊗Δ)Δ(x); empty when coassociative on x."""
    acc: dict[tuple, int] = {}
    for (a, b), v in shuffle_coproduct(rack, x).items():
        for (a1, a2), w in shuffle_coproduct(rack, a).items():
            key = (a1, a2, b)
            acc[key] = acc.get(key, 0) + v * w
        for (b1, b2), w in shuffle_coproduct(rack, b).items():
            key = (a, b1, b2)
            acc[key] = acc.get(key, 0) - v * w
    return {k: v for k, v in acc.items() if v}
