"""Imaginary hyperelliptic curves y^2 = f(x) over F_q and their Jacobians.

Divisor classes are kept in reduced Mumford form (u, v): u monic, deg v < deg u <= g,
u | v^2 - f.  Group law is Cantor's composition followed by reduction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from ..errors import BudgetExceeded, budget_from_env
from ..primes import factorize
from . import poly as P
from .field import FiniteField, extension, gf

ENUMERATION_BUDGET = 10**7
CLASS_NUMBER_BUDGET = 10**6


class CurveError(ValueError):
    pass


def good_for_ell(q: int, ell: int) -> bool:
    return q % 2 == 1 and q % ell != 0 and (q - 1) % ell != 0


def monic_polys(F: FiniteField, n: int) -> Iterator[P.Poly]:
    """All monic degree-n polynomials, in increasing encoding order."""
    for lower in itertools.product(range(F.q), repeat=n):
        yield list(reversed(lower)) + [1]


def enumerate_monic_squarefree(q: int, n: int, budget: int | None = None) -> Iterator[P.Poly]:
    budget = budget_from_env(ENUMERATION_BUDGET) if budget is None else budget
    if q**n > budget:
        raise BudgetExceeded(f"q^n = {q}^{n} exceeds the enumeration budget {budget}")
    F = gf(q)
    for f in monic_polys(F, n):
        if P.is_squarefree(F, f):
            yield f


def count_monic_squarefree(q: int, n: int, budget: int | None = None) -> int:
    return sum(1 for _ in enumerate_monic_squarefree(q, n, budget))


@dataclass
class Curve:
    field: FiniteField
    f: P.Poly            # monic squarefree, odd degree
    twist: bool          # the curve is y^2 = eps * f

    def __post_init__(self) -> None:
        if not self.f or self.f[-1] != 1:
            raise CurveError("f must be monic")
        if P.deg(self.f) % 2 == 0:
            raise CurveError("f must have odd degree")
        if not P.is_squarefree(self.field, self.f):
            raise CurveError("f is not squarefree")

    @property
    def n(self) -> int:
        return P.deg(self.f)

    @property
    def genus(self) -> int:
        return (self.n - 1) // 2

    @property
    def eps(self) -> int:
        return self.field.nonsquare

    @cached_property
    def rhs(self) -> P.Poly:
        """The actual right-hand side: f or eps*f."""
        return P.scale(self.field, self.eps, self.f) if self.twist else list(self.f)

    @cached_property
    def model(self) -> P.Poly:
        """A monic model isomorphic over F_q.

        For the twist, x = u/eps and y = eps^{(1-n)/2} y' turn y^2 = eps f(x) into
        y'^2 = eps^n f(u/eps), which is monic in u.
        """
        if not self.twist:
            return list(self.f)
        F, e = self.field, self.eps
        e_inv = F.inv(e)
        n = self.n
        # coefficient of u^i: eps^n * f_i * eps^{-i}
        return P.trim([F.mul(F.pow(e, n), F.mul(c, F.pow(e_inv, i))) for i, c in enumerate(self.f)])

    def label(self) -> str:
        return P.to_str(self.field, self.f) + (" [twist]" if self.twist else "")


def curve_sweep(q: int, n: int, budget: int | None = None) -> Iterator[Curve]:
    """All of 𝔖_n: y^2 = f and y^2 = eps f for each monic squarefree f of degree n."""
    if n % 2 == 0:
        raise CurveError("imaginary quadratic fields need odd degree")
    F = gf(q)
    for f in enumerate_monic_squarefree(q, n, budget):
        yield Curve(F, f, False)
        yield Curve(F, f, True)


# -- Mumford representation and Cantor's algorithm -----------------------------

@dataclass(frozen=True)
class MumfordDivisor:
    u: tuple[int, ...]
    v: tuple[int, ...]

    @property
    def is_identity(self) -> bool:
        return self.u == (1,)


IDENTITY = MumfordDivisor((1,), ())


def _div(u, v) -> MumfordDivisor:
    return MumfordDivisor(tuple(u), tuple(v))


def is_valid(F: FiniteField, f: P.Poly, D: MumfordDivisor, genus: int | None = None) -> bool:
    u, v = list(D.u), list(D.v)
    if not u or u[-1] != 1 or P.deg(v) >= P.deg(u):
        return False
    if genus is not None and P.deg(u) > genus:
        return False
    return not P.mod(F, P.sub(F, P.mul(F, v, v), f), u)


def cantor_compose_reduce(F: FiniteField, f: P.Poly, genus: int, D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
    """Reduced representative of D1 + D2 on y^2 = f (f monic of degree 2g+1)."""
    u1, v1, u2, v2 = list(D1.u), list(D1.v), list(D2.u), list(D2.v)
    d1, e1, e2 = P.xgcd(F, u1, u2)
    d, c1, s3 = P.xgcd(F, d1, P.add(F, v1, v2))
    s1, s2 = P.mul(F, c1, e1), P.mul(F, c1, e2)
    dd = P.mul(F, d, d)
    u = P.exact_div(F, P.mul(F, u1, u2), dd)
    num = P.add(F, P.add(F, P.mul(F, P.mul(F, s1, u1), v2), P.mul(F, P.mul(F, s2, u2), v1)),
                P.mul(F, s3, P.add(F, P.mul(F, v1, v2), f)))
    v = P.mod(F, P.exact_div(F, num, d), u)
    while P.deg(u) > genus:
        u = P.monic(F, P.exact_div(F, P.sub(F, f, P.mul(F, v, v)), u))
        v = P.mod(F, P.neg(F, v), u)
    u = P.monic(F, u)
    return _div(u, P.mod(F, v, u))


def negate(F: FiniteField, D: MumfordDivisor) -> MumfordDivisor:
    return _div(D.u, P.mod(F, P.neg(F, list(D.v)), list(D.u)))


class Jacobian:
    """The group Jac(C)(F_q) of a curve, via its monic model."""

    def __init__(self, curve: Curve) -> None:
        self.curve = curve
        self.F = curve.field
        self.f = curve.model
        self.g = curve.genus

    def add(self, a: MumfordDivisor, b: MumfordDivisor) -> MumfordDivisor:
        return cantor_compose_reduce(self.F, self.f, self.g, a, b)

    def neg(self, a: MumfordDivisor) -> MumfordDivisor:
        return negate(self.F, a)

    def mul(self, k: int, a: MumfordDivisor) -> MumfordDivisor:
        if k < 0:
            k, a = -k, self.neg(a)
        result = IDENTITY
        base = a
        while k:
            if k & 1:
                result = self.add(result, base)
            k >>= 1
            if k:
                base = self.add(base, base)
        return result

    def is_valid(self, D: MumfordDivisor) -> bool:
        return is_valid(self.F, self.f, D, self.g)

    def elements(self, budget: int | None = None) -> list[MumfordDivisor]:
        """Every reduced divisor class, identity first."""
        budget = budget_from_env(CLASS_NUMBER_BUDGET) if budget is None else budget
        F, f = self.F, self.f
        out = [IDENTITY]
        for d in range(1, self.g + 1):
            if F.q ** (2 * d) > budget * 10:
                raise BudgetExceeded(f"enumerating degree-{d} Mumford pairs over F_{F.q} exceeds the budget")
            roots = _square_roots_mod(F, d)
            for u in monic_polys(F, d):
                r = tuple(P.mod(F, f, u))
                for v in roots(tuple(u)).get(r, ()):
                    out.append(_div(u, v))
                if len(out) > budget:
                    raise BudgetExceeded(f"class number exceeds the enumeration budget {budget}")
        return out


_SQRT_CACHE: dict[tuple[int, int], object] = {}


def _square_roots_mod(F: FiniteField, d: int):
    """Returns a function u -> {v^2 mod u : [v, ...]} over deg v < d, memoized per u."""
    key = (id(F), d)
    if key not in _SQRT_CACHE:
        cache: dict[tuple[int, ...], dict[tuple[int, ...], list[P.Poly]]] = {}
        vs = [P.trim(list(c)) for c in itertools.product(range(F.q), repeat=d)]

        def roots(u: tuple[int, ...]) -> dict[tuple[int, ...], list[P.Poly]]:
            hit = cache.get(u)
            if hit is None:
                hit = {}
                lu = list(u)
                for v in vs:
                    hit.setdefault(tuple(P.mod(F, P.mul(F, v, v), lu)), []).append(v)
                cache[u] = hit
            return hit

        _SQRT_CACHE[key] = roots
    return _SQRT_CACHE[key]


# -- structure ------------------------------------------------------------------

@dataclass
class AbelianGroupStructure:
    invariant_factors: list[int]      # d_1 | d_2 | ..., all > 1
    order: int
    ell_parts: dict[int, tuple[int, ...]] = field(default_factory=dict)   # ell -> exponents (non-increasing)
    order_only: bool = False          # enumeration was over budget; only the order is known

    def ell_part(self, ell: int) -> tuple[int, ...]:
        """Exponents of the ell-primary part, non-increasing."""
        if self.order_only:
            raise ValueError("structure unknown: only the class number was computed")
        if ell in self.ell_parts:
            return self.ell_parts[ell]
        exps = []
        for d in self.invariant_factors:
            e = 0
            while d % ell == 0:
                d //= ell
                e += 1
            if e:
                exps.append(e)
        return tuple(sorted(exps, reverse=True))


def partition_from_torsion_counts(ell: int, counts: list[int]) -> tuple[int, ...]:
    """Exponents of an abelian ell-group from c_j = #{x : ell^j x = 0}, j = 0..e.

    log_ell(c_j / c_{j-1}) is the number of cyclic factors of exponent >= j.
    """
    at_least = []
    for j in range(1, len(counts)):
        ratio = counts[j] // counts[j - 1]
        r = 0
        while ratio > 1:
            if ratio % ell:
                raise ValueError("torsion counts are not powers of ell")
            ratio //= ell
            r += 1
        at_least.append(r)
    if not at_least:
        return ()
    rank = at_least[0]
    return tuple(sum(1 for a in at_least if a > i) for i in range(rank))


def _torsion_counts(jac: Jacobian, elements: list[MumfordDivisor], ell: int, e: int) -> list[int]:
    """c_j = #{D : ell^j D = 0} for j = 0..e, iterating the map D -> ell D by lookup."""
    times_ell = {D: jac.mul(ell, D) for D in elements}
    counts = [1] + [0] * e
    for D in elements:
        x = D
        for j in range(1, e + 1):
            x = times_ell[x]
            if x.is_identity:
                for jj in range(j, e + 1):
                    counts[jj] += 1
                break
    return counts


def jacobian_structure(curve: Curve, budget: int | None = None, *, fallback: bool = True) -> AbelianGroupStructure:
    """Order and invariant factors of Jac(C)(F_q) by enumeration and torsion counting.

    Over budget, returns an ``order_only`` result from the zeta function when
    ``fallback`` is set and the genus allows it; otherwise re-raises.
    """
    jac = Jacobian(curve)
    try:
        elements = jac.elements(budget)
    except BudgetExceeded:
        if not fallback or curve.genus > 3:
            raise
        return AbelianGroupStructure([], zeta_class_number(curve), {}, order_only=True)
    h = len(elements)
    parts: dict[int, tuple[int, ...]] = {}
    for ell, e in factorize(h).items():
        parts[ell] = partition_from_torsion_counts(ell, _torsion_counts(jac, elements, ell, e))
    return AbelianGroupStructure(_invariant_factors(parts), h, parts)


def _invariant_factors(parts: dict[int, tuple[int, ...]]) -> list[int]:
    rank = max((len(v) for v in parts.values()), default=0)
    factors = [1] * rank
    for ell, exps in parts.items():
        for i, e in enumerate(sorted(exps)):
            factors[rank - len(exps) + i] *= ell**e
    return [d for d in factors if d > 1]


def ell_part_structure(curve: Curve, ell: int, class_number: int | None = None) -> tuple[int, ...]:
    """Exponents of the ell-part of the class group.

    With a known class number prime to ell nothing is enumerated.
    """
    h = zeta_class_number(curve) if class_number is None and curve.genus <= 3 else class_number
    if h is not None and h % ell:
        return ()
    jac = Jacobian(curve)
    elements = jac.elements()
    h = len(elements)
    e = 0
    while h % ell == 0:
        h //= ell
        e += 1
    if e == 0:
        return ()
    return partition_from_torsion_counts(ell, _torsion_counts(jac, elements, ell, e))


# -- zeta function ---------------------------------------------------------------

def point_counts(curve: Curve, up_to: int) -> list[int]:
    """#C(F_{q^i}) for i = 1..up_to on the smooth complete model (one point at infinity)."""
    F = curve.field
    f = curve.model
    out = []
    for i in range(1, up_to + 1):
        E = extension(F, i)
        total = E.q + 1
        for x in range(E.q):
            total += E.chi(P.evaluate(E, f, x))
        out.append(total)
    return out


def l_polynomial(curve: Curve) -> list[int]:
    """Coefficients a_0..a_{2g} of L(T) = Π (1 - α_j T)."""
    g, q = curve.genus, curve.field.q
    if g == 0:
        return [1]
    counts = point_counts(curve, g)
    power_sums = [q**i + 1 - counts[i - 1] for i in range(1, g + 1)]
    # Newton: k e_k = Σ_{i=1}^k (-1)^{i-1} e_{k-i} p_i
    e = [1]
    for k in range(1, g + 1):
        s = sum((-1) ** (i - 1) * e[k - i] * power_sums[i - 1] for i in range(1, k + 1))
        if s % k:
            raise ArithmeticError("non-integral elementary symmetric function")
        e.append(s // k)
    a = [(-1) ** k * e[k] for k in range(g + 1)]
    for k in range(g + 1, 2 * g + 1):
        a.append(q ** (k - g) * a[2 * g - k])
    return a


def zeta_class_number(curve: Curve) -> int:
    if curve.genus > 3:
        raise CurveError("zeta class number is implemented for genus <= 3")
    return sum(l_polynomial(curve))
