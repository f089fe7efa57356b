"""Dense univariate polynomials over a FiniteField: lists of coefficients, constant first.

The zero polynomial is ``[]``; every other polynomial has a nonzero last entry.
"""

from __future__ import annotations

from typing import Sequence

from .field import FiniteField

Poly = list[int]


def trim(a: Sequence[int]) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a: Sequence[int]) -> int:
    return len(a) - 1  # -1 for zero


def add(F: FiniteField, a: Sequence[int], b: Sequence[int]) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    if F.base is None:
        p = F.p
        for i, x in enumerate(b):
            out[i] = (out[i] + x) % p
        return trim(out)
    for i, x in enumerate(b):
        out[i] = F.add(out[i], x)
    return trim(out)


def neg(F: FiniteField, a: Sequence[int]) -> Poly:
    if F.base is None:
        return [-x % F.p for x in a]
    return [F.neg(x) for x in a]


def sub(F: FiniteField, a: Sequence[int], b: Sequence[int]) -> Poly:
    return add(F, a, neg(F, b))


def scale(F: FiniteField, c: int, a: Sequence[int]) -> Poly:
    if c == 0:
        return []
    return trim([F.mul(c, x) for x in a])


def mul(F: FiniteField, a: Sequence[int], b: Sequence[int]) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    if F.base is None:
        p = F.p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return trim([x % p for x in out])
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def divmod_(F: FiniteField, a: Sequence[int], b: Sequence[int]) -> tuple[Poly, Poly]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    inv_lead = F.inv(b[-1])
    q = [0] * (len(r) - db)
    r = list(r)
    if F.base is None:
        p = F.p
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i] % p
            if c == 0:
                continue
            c = c * inv_lead % p
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] -= c * b[j]
        return trim(q), trim([x % p for x in r[:db]])
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c == 0:
            continue
        c = F.mul(c, inv_lead)
        q[i - db] = c
        for j in range(db + 1):
            r[i - db + j] = F.sub(r[i - db + j], F.mul(c, b[j]))
    return trim(q), trim(r[:db])


def mod(F: FiniteField, a: Sequence[int], b: Sequence[int]) -> Poly:
    return divmod_(F, a, b)[1]


def monic(F: FiniteField, a: Sequence[int]) -> Poly:
    a = trim(a)
    if not a:
        return []
    return scale(F, F.inv(a[-1]), a)


def gcd(F: FiniteField, a: Sequence[int], b: Sequence[int]) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(F, a, b)
    return monic(F, a)


def xgcd(F: FiniteField, a: Sequence[int], b: Sequence[int]) -> tuple[Poly, Poly, Poly]:
    """(g, s, t) with s a + t b = g, g monic (or zero)."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if not r0:
        return [], [], []
    c = F.inv(r0[-1])
    return scale(F, c, r0), scale(F, c, s0), scale(F, c, t0)


def derivative(F: FiniteField, a: Sequence[int]) -> Poly:
    out = []
    for i in range(1, len(a)):
        c = 0
        for _ in range(i % F.p):
            c = F.add(c, a[i])
        out.append(c)
    return trim(out)


def evaluate(F: FiniteField, a: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def is_squarefree(F: FiniteField, a: Sequence[int]) -> bool:
    return deg(gcd(F, a, derivative(F, a))) == 0


def exact_div(F: FiniteField, a: Sequence[int], b: Sequence[int]) -> Poly:
    q, r = divmod_(F, a, b)
    if r:
        raise ArithmeticError("division is not exact")
    return q


def encode(F: FiniteField, a: Sequence[int]) -> int:
    """Integer code with the constant term least significant."""
    e = 0
    for c in reversed(a):
        e = e * F.q + c
    return e


def to_str(F: FiniteField, a: Sequence[int], var: str = "x") -> str:
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        coef = "" if (c == 1 and i) else str(c)
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append(f"{coef}{var}")
        else:
            terms.append(f"{coef}{var}^{i}")
    return " + ".join(terms)
