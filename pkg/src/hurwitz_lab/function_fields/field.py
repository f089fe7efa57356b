"""Finite fields F_q as towers over F_p, elements encoded as small integers.

An element of an extension of ``base`` of degree k is the integer
Σ a_i · |base|^i for its coefficient vector (a_0, ..., a_{k-1}) in the basis
1, y, ..., y^{k-1}, where y is a root of the chosen modulus.  Base-field
elements therefore keep their own encoding inside every extension, which
makes embedding F_q -> F_{q^i} the identity map on integers.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Sequence

from ..primes import is_prime, prime_power

TABLE_LIMIT = 1024


class FieldError(ValueError):
    pass


class FiniteField:
    def __init__(self, p: int, base: "FiniteField | None" = None, modulus: Sequence[int] | None = None) -> None:
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        self.p = p
        self.base = base
        self.modulus = tuple(modulus) if modulus is not None else None
        if base is None:
            self.degree_over_base = 1
            self.q = p
        else:
            if self.modulus is None or self.modulus[-1] != 1:
                raise FieldError("an extension needs a monic modulus")
            self.degree_over_base = len(self.modulus) - 1
            self.q = base.q ** self.degree_over_base
        self._add = self._mul = None
        if base is not None and self.q <= TABLE_LIMIT:
            self._build_tables()

    # -- element arithmetic --
    def _digits(self, a: int) -> list[int]:
        bq = self.base.q
        out = []
        for _ in range(self.degree_over_base):
            a, r = divmod(a, bq)
            out.append(r)
        return out

    def _undigits(self, ds: Sequence[int]) -> int:
        bq = self.base.q
        a = 0
        for d in reversed(ds):
            a = a * bq + d
        return a

    def _slow_add(self, a: int, b: int) -> int:
        B = self.base
        return self._undigits([B.add(x, y) for x, y in zip(self._digits(a), self._digits(b))])

    def _slow_mul(self, a: int, b: int) -> int:
        B = self.base
        da, db = self._digits(a), self._digits(b)
        k = self.degree_over_base
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        mod = self.modulus
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i]
            if c:
                for j in range(k):
                    prod[i - k + j] = B.sub(prod[i - k + j], B.mul(c, mod[j]))
                prod[i] = 0
        return self._undigits(prod[:k])

    def _build_tables(self) -> None:
        q = self.q
        self._add = [[self._slow_add(a, b) for b in range(q)] for a in range(q)]
        self._mul = [[0] * q for _ in range(q)]
        for a in range(q):
            row = self._mul[a]
            for b in range(a, q):
                v = self._slow_mul(a, b)
                row[b] = v
                self._mul[b][a] = v

    def add(self, a: int, b: int) -> int:
        if self.base is None:
            return (a + b) % self.p
        if self._add is not None:
            return self._add[a][b]
        return self._slow_add(a, b)

    def neg(self, a: int) -> int:
        if self.base is None:
            return -a % self.p
        return self._neg_table[a] if self._add is not None else self._undigits([self.base.neg(x) for x in self._digits(a)])

    @cached_property
    def _neg_table(self) -> list[int]:
        return [self._undigits([self.base.neg(x) for x in self._digits(a)]) for a in range(self.q)]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.base is None:
            return a * b % self.p
        if self._mul is not None:
            return self._mul[a][b]
        return self._slow_mul(a, b)

    def pow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.base is None:
            return pow(a, -1, self.p)
        if self._add is not None:
            return self._inv_table[a]
        return self.pow(a, self.q - 2)

    @cached_property
    def _inv_table(self) -> list[int]:
        out = [0] * self.q
        for a in range(1, self.q):
            for b in range(1, self.q):
                if self.mul(a, b) == 1:
                    out[a] = b
                    break
        return out

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    @cached_property
    def squares(self) -> frozenset[int]:
        """Nonzero squares."""
        return frozenset(self.mul(a, a) for a in range(1, self.q))

    def chi(self, a: int) -> int:
        """Quadratic character (0 at 0)."""
        if a == 0:
            return 0
        return 1 if a in self.squares else -1

    @cached_property
    def nonsquare(self) -> int:
        """Least element (by encoding) that is not a square."""
        return next(a for a in range(1, self.q) if a not in self.squares)

    def sqrt_all(self, a: int) -> list[int]:
        return [x for x in range(self.q) if self.mul(x, x) == a]

    def __repr__(self) -> str:
        if self.base is None:
            return f"F_{self.p}"
        return f"F_{self.q}[{self.base!r} / {list(self.modulus)}]"

    def describe(self) -> dict:
        return {
            "q": self.q,
            "p": self.p,
            "tower": self._tower(),
        }

    def _tower(self) -> list[list[int]]:
        if self.base is None:
            return []
        return self.base._tower() + [list(self.modulus)]


def is_irreducible(base: FiniteField, poly: Sequence[int]) -> bool:
    """Irreducibility over ``base`` of a monic polynomial, by trial division."""
    from . import poly as P

    d = len(poly) - 1
    if d <= 0:
        return False
    for k in range(1, d // 2 + 1):
        for rest in itertools.product(range(base.q), repeat=k):
            div = list(rest) + [1]
            _, r = P.divmod_(base, list(poly), div)
            if not r:
                return False
    return True


def smallest_irreducible(base: FiniteField, degree: int) -> list[int]:
    """Monic irreducible of the given degree with least encoding of its lower coefficients
    (constant term least significant)."""
    for code in range(base.q**degree):
        coeffs = []
        c = code
        for _ in range(degree):
            c, r = divmod(c, base.q)
            coeffs.append(r)
        cand = coeffs + [1]
        if is_irreducible(base, cand):
            return cand
    raise FieldError("no irreducible polynomial found")


_FIELD_CACHE: dict[tuple, FiniteField] = {}


def prime_field(p: int) -> FiniteField:
    key = ("prime", p)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FiniteField(p)
    return _FIELD_CACHE[key]


def extension(base: FiniteField, degree: int) -> FiniteField:
    if degree == 1:
        return base
    key = ("ext", id(base), degree)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FiniteField(base.p, base, smallest_irreducible(base, degree))
    return _FIELD_CACHE[key]


def gf(q: int) -> FiniteField:
    """F_q, built as F_p[x]/(smallest irreducible) when q is not prime."""
    try:
        p, k = prime_power(q)
    except ValueError as exc:
        raise FieldError(str(exc)) from None
    return extension(prime_field(p), k)
