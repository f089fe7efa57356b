"""R-module homology H^R_{n,d}(M) = Tor^R_d(k, M)_n from a minimal free resolution.

The resolution is built one grading at a time.  Everything in grading n only
depends on gradings <= n, so truncating at n_max gives exact answers for
every n <= n_max.  Minimal generators of a submodule K in grading n are a
complement of Σ_g [g]·K_{n-1} inside K_n; this uses that R is generated in
degree one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Protocol, Sequence

from .hurwitz import ComponentRing, component_ring
from .koszul import DiscreteModule
from .linalg import EchelonSpan, SparseMat, Vec, apply, kernel_basis


class _Graded(Protocol):
    dims: list[int]

    def act(self, g: int, n: int, v: Vec) -> Vec: ...


class _Wrapped:
    """A DiscreteModule seen through the act(g, n, v) interface (v in M_{n-1})."""

    def __init__(self, m: DiscreteModule) -> None:
        self.dims = list(m.dims)
        self._m = m

    def act(self, g: int, n: int, v: Vec) -> Vec:
        return apply(self._m.act[g][n], v)


class FreeModule:
    """⊕_i R·e_i with deg e_i = degrees[i], truncated at n_max.

    Basis of F_n: pairs (i, o) with o an orbit of length n - degrees[i], laid
    out generator by generator.
    """

    def __init__(self, ring: ComponentRing, degrees: Sequence[int], n_max: int) -> None:
        self.ring = ring
        self.degrees = list(degrees)
        self.n_max = n_max
        self.offsets: list[dict[int, int]] = []
        self.dims = []
        for n in range(n_max + 1):
            off, total = {}, 0
            for i, a in enumerate(self.degrees):
                if a <= n:
                    off[i] = total
                    total += ring.dim(n - a)
            self.offsets.append(off)
            self.dims.append(total)

    def index(self, n: int, i: int, o: int) -> int:
        return self.offsets[n][i] + o

    def act(self, g: int, n: int, v: Vec) -> Vec:
        """[g]· : F_{n-1} -> F_n."""
        out: Vec = {}
        src = self.offsets[n - 1]
        for i, start in src.items():
            k = n - 1 - self.degrees[i]
            size = self.ring.dim(k)
            left = self.ring.left[k][g]
            for o in range(size):
                x = v.get(start + o)
                if x:
                    t = self.index(n, i, left[o])
                    out[t] = out.get(t, 0) + x
        return {k: x for k, x in out.items() if x}


def _map_from_free(F: FreeModule, T: _Graded, images: Sequence[Vec], n_max: int) -> list[SparseMat]:
    """Matrices of the R-linear map F -> T sending e_i to images[i], per grading."""
    ring = F.ring
    # value[(i, k, o)] = [o]·images[i], with [o] = [w_1]...[w_k] acting as w_1(w_2(...))
    value: dict[tuple[int, int, int], Vec] = {}
    mats = []
    for n in range(n_max + 1):
        triples = []
        for i, a in enumerate(F.degrees):
            if a > n:
                continue
            k = n - a
            for o in range(ring.dim(k)):
                if k == 0:
                    v = images[i]
                else:
                    rep = ring.orbit(k, o).rep
                    tail = ring.orbit_of(rep[1:])
                    v = T.act(rep[0], n, value[(i, k - 1, tail)])
                value[(i, k, o)] = v
                col = F.index(n, i, o)
                triples.extend((r, col, x) for r, x in v.items())
        mats.append(SparseMat.from_triples(T.dims[n], F.dims[n], triples))
    return mats


def _minimal_generators(T: _Graded, K: list[list[Vec]], n_classes: int, n_max: int) -> list[tuple[int, Vec]]:
    gens = []
    for n in range(n_max + 1):
        span = EchelonSpan()
        if n >= 1:
            for v in K[n - 1]:
                for g in range(n_classes):
                    span.add(T.act(g, n, v))
        for v in K[n]:
            if span.add(v):
                gens.append((n, v))
    return gens


def r_homology_table(m: DiscreteModule, d_max: int, n_max: int | None = None,
                     ring: ComponentRing | None = None) -> list[list[int]]:
    """table[n][d] = dim H^R_{n,d}(M) for n <= n_max, d <= d_max."""
    n_max = m.n_max if n_max is None else n_max
    ring = ring or component_ring(m.group, m.c, n_max)
    k = len(m.c)
    table = [[0] * (d_max + 1) for _ in range(n_max + 1)]
    T: _Graded = _Wrapped(m)
    K = [[{j: Fraction(1)} for j in range(m.dims[n])] for n in range(n_max + 1)]
    for d in range(d_max + 1):
        gens = _minimal_generators(T, K, k, n_max)
        for n, _ in gens:
            table[n][d] += 1
        if d == d_max:
            break
        F = FreeModule(ring, [n for n, _ in gens], n_max)
        phi = _map_from_free(F, T, [v for _, v in gens], n_max)
        K = [kernel_basis(phi[n]) for n in range(n_max + 1)]
        T = F
    return table
