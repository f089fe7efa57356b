"""Exact rank and homology dimensions over the rationals.

Everything here works with Python integers (or Fractions that get cleared to
integers), so there is no overflow and no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Sequence


class ContractViolation(ValueError):
    """Raised when two maps passed as a chain complex do not compose to zero."""


class SizeLimitError(ValueError):
    pass


@dataclass
class SparseMat:
    """Sparse rational matrix stored as ``{(row, col): value}`` with no zeros."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], Fraction | int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        for (r, c), v in list(self.entries.items()):
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if v == 0:
                del self.entries[(r, c)]

    @classmethod
    def from_triples(cls, rows: int, cols: int, triples: Iterable[tuple[int, int, Rational]]) -> "SparseMat":
        """Build a matrix, summing values given at repeated positions."""
        acc: dict[tuple[int, int], Fraction | int] = {}
        for r, c, v in triples:
            acc[(r, c)] = acc.get((r, c), 0) + v
        return cls(rows, cols, acc)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[Rational]]) -> "SparseMat":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        return cls(nrows, ncols, {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v != 0})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseMat":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseMat":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def add(self, r: int, c: int, v: Rational) -> None:
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
        new = self.entries.get((r, c), 0) + v
        if new == 0:
            self.entries.pop((r, c), None)
        else:
            self.entries[(r, c)] = new

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def transpose(self) -> "SparseMat":
        return SparseMat(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def to_dense(self) -> list[list[Fraction | int]]:
        out: list[list[Fraction | int]] = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> list[dict[int, Fraction | int]]:
        rows: list[dict[int, Fraction | int]] = [{} for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def __matmul__(self, other: "SparseMat") -> "SparseMat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        other_rows = other.row_dicts()
        acc: dict[tuple[int, int], Fraction | int] = {}
        for (r, k), v in self.entries.items():
            for c, w in other_rows[k].items():
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return SparseMat(self.rows, other.cols, acc)

    def is_zero(self) -> bool:
        return not self.entries


def _integer_rows(m: SparseMat) -> list[dict[int, int]]:
    """Scale each row by the lcm of its denominators so all entries are integers."""
    out = []
    for row in m.row_dicts():
        if not row:
            continue
        den = 1
        for v in row.values():
            if isinstance(v, Fraction):
                d = v.denominator
                den = den * d // gcd(den, d)
        out.append({c: int(v * den) for c, v in row.items()})
    return out


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def rank(m: SparseMat) -> int:
    """Exact rank over Q.

    Fraction-free row elimination: eliminating with pivot ``p`` replaces a row
    ``r`` by ``p*r - a*pivot_row`` and then divides out its content, so entries
    stay integral and small.  Pivots are taken from the sparsest available row.
    """
    rows = _integer_rows(m)
    # column -> indices of active rows with a nonzero in that column
    by_col: dict[int, set[int]] = {}
    for i, row in enumerate(rows):
        for c in row:
            by_col.setdefault(c, set()).add(i)
    active = set(range(len(rows)))
    r = 0
    while active:
        # choose the sparsest active row, then its sparsest column
        pi = min(active, key=lambda i: (len(rows[i]), i))
        prow = rows[pi]
        if not prow:
            active.discard(pi)
            continue
        pc = min(prow, key=lambda c: (len(by_col[c]), abs(prow[c]), c))
        active.discard(pi)
        for c in prow:
            by_col[c].discard(pi)
        r += 1
        p = prow[pc]
        for j in list(by_col.get(pc, ())):
            row = rows[j]
            a = row[pc]
            g = gcd(p, a)
            mp, ma = p // g, a // g
            new: dict[int, int] = {c: mp * v for c, v in row.items()}
            for c, v in prow.items():
                nv = new.get(c, 0) - ma * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            new = _primitive(new)
            for c in row:
                if c not in new:
                    by_col[c].discard(j)
            for c in new:
                if c not in row:
                    by_col.setdefault(c, set()).add(j)
            rows[j] = new
            if not new:
                active.discard(j)
    return r


def nullity(m: SparseMat) -> int:
    """Dimension of the kernel of ``m`` acting on column vectors."""
    return m.cols - rank(m)


def homology_dim(d_in: SparseMat, d_out: SparseMat, *, check: bool = True) -> int:
    """``dim ker(d_out) - rank(d_in)`` for ``C' --d_in--> C --d_out--> C''``."""
    if d_in.rows != d_out.cols:
        raise ValueError(f"maps not composable: d_in lands in dim {d_in.rows}, d_out starts in dim {d_out.cols}")
    if check and not (d_out @ d_in).is_zero():
        raise ContractViolation("d_out ∘ d_in is not zero")
    h = nullity(d_out) - rank(d_in)
    assert h >= 0
    return h


def modular_rank(m: SparseMat, p: int) -> int:
    """Rank over F_p.  Only used as an independent check in tests."""
    rows = []
    for row in m.row_dicts():
        red = {}
        for c, v in row.items():
            v = Fraction(v)
            x = v.numerator * pow(v.denominator, -1, p) % p
            if x:
                red[c] = x
        if red:
            rows.append(red)
    r = 0
    pivots: dict[int, dict[int, int]] = {}
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            if c not in pivots:
                inv = pow(row[c], -1, p)
                pivots[c] = {k: v * inv % p for k, v in row.items()}
                r += 1
                break
            f = row[c]
            for k, v in pivots[c].items():
                nv = (row.get(k, 0) - f * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return r


# -- Smith normal form ------------------------------------------------------

SNF_SIZE_CAP = 500


@dataclass
class SmithForm:
    diagonal: list[int]          # nonzero invariants d_1 | d_2 | ...
    left: list[list[int]]        # unimodular S with S @ M @ T = D
    right: list[list[int]]       # unimodular T


def _matmul_int(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithForm:
    """Smith normal form of a dense integer matrix, with transforms recorded."""
    nr = len(m)
    nc = len(m[0]) if nr else 0
    if nr > SNF_SIZE_CAP or nc > SNF_SIZE_CAP:
        raise SizeLimitError(f"matrix {nr}x{nc} exceeds the Smith form cap of {SNF_SIZE_CAP}")
    a = [[int(x) for x in row] for row in m]
    s = [[int(i == j) for j in range(nr)] for i in range(nr)]
    t = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        s[i], s[j] = s[j], s[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in t:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, f: int) -> None:
        # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        s[dst] = [x + f * y for x, y in zip(s[dst], s[src])]

    def add_col(dst: int, src: int, f: int) -> None:
        for row in a:
            row[dst] += f * row[src]
        for row in t:
            row[dst] += f * row[src]

    k = 0
    while k < min(nr, nc):
        nonzero = [(abs(a[i][j]), i, j) for i in range(k, nr) for j in range(k, nc) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(k, i)
        swap_cols(k, j)
        while True:
            done = True
            for i in range(k + 1, nr):
                if a[i][k]:
                    q = a[i][k] // a[k][k]
                    add_row(i, k, -q)
                    if a[i][k]:
                        swap_rows(k, i)
                        done = False
            for j in range(k + 1, nc):
                if a[k][j]:
                    q = a[k][j] // a[k][k]
                    add_col(j, k, -q)
                    if a[k][j]:
                        swap_cols(k, j)
                        done = False
            if not done:
                continue
            # divisibility: the pivot must divide the rest of the block
            bad = next(((i, j) for i in range(k + 1, nr) for j in range(k + 1, nc) if a[i][j] % a[k][k]), None)
            if bad is None:
                break
            add_row(k, bad[0], 1)
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            s[k] = [-x for x in s[k]]
        k += 1
    diag = [a[i][i] for i in range(min(nr, nc)) if a[i][i]]
    return SmithForm(diag, s, t)


def homology_dim_snf(d_in: Sequence[Sequence[int]], d_out: Sequence[Sequence[int]], n: int) -> tuple[int, list[int]]:
    """Free rank and torsion coefficients of integral homology at a chain group of rank ``n``."""
    r_in = smith_normal_form(d_in).diagonal if d_in and d_in[0] else []
    r_out = smith_normal_form(d_out).diagonal if d_out and d_out[0] else []
    free = n - len(r_out) - len(r_in)
    torsion = [d for d in r_in if d > 1]
    return free, torsion


# -- kernels and spans -------------------------------------------------------------

Vec = dict[int, Fraction]


class EchelonSpan:
    """Incrementally grown subspace of Q^dim, kept in reduced echelon form.

    ``add`` reports whether a vector enlarged the span; ``reduce`` returns the
    residue of a vector modulo the span (zero iff the vector lies in it).
    """

    def __init__(self) -> None:
        self.pivots: dict[int, Vec] = {}   # pivot column -> row with 1 there

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, v: Vec) -> Vec:
        v = {c: Fraction(x) for c, x in v.items() if x}
        for c in sorted(v):
            if c in v and c in self.pivots:
                a = v[c]
                for cc, x in self.pivots[c].items():
                    nv = v.get(cc, 0) - a * x
                    if nv:
                        v[cc] = nv
                    else:
                        v.pop(cc, None)
        return v

    def add(self, v: Vec) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        pc = min(r)
        inv = 1 / r[pc]
        r = {c: x * inv for c, x in r.items()}
        for row in self.pivots.values():
            a = row.get(pc)
            if a:
                for cc, x in r.items():
                    nv = row.get(cc, 0) - a * x
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
        self.pivots[pc] = r
        return True


def kernel_basis(m: SparseMat) -> list[Vec]:
    """Basis of {x : m x = 0}, as sparse vectors indexed by column."""
    span = EchelonSpan()
    for row in m.row_dicts():
        span.add(row)
    free = [c for c in range(m.cols) if c not in span.pivots]
    basis = []
    for f in free:
        v: Vec = {f: Fraction(1)}
        for pc, row in span.pivots.items():
            a = row.get(f)
            if a:
                v[pc] = -a
        basis.append(v)
    return basis


def apply(m: SparseMat, v: Vec) -> Vec:
    out: Vec = {}
    cols: dict[int, list[tuple[int, Fraction | int]]] = {}
    for (r, c), x in m.entries.items():
        cols.setdefault(c, []).append((r, x))
    for c, a in v.items():
        for r, x in cols.get(c, ()):
            nv = out.get(r, 0) + a * x
            if nv:
                out[r] = nv
            else:
                out.pop(r, None)
    return out
