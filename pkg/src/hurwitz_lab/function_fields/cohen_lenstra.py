"""Surjection counts, the Cohen–Lenstra measure, and class-group statistics over 𝔖_n."""

from __future__ import annotations

import csv
import io
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from ..groups import AbelianGroupType, GroupError
from . import poly as P
from .curves import (
    Curve,
    CurveError,
    curve_sweep,
    ell_part_structure,
    good_for_ell,
    jacobian_structure,
    zeta_class_number,
)
from .field import gf

log = logging.getLogger(__name__)

SURJECTION_ORDER_CAP = 10**4


def _elements(factors: Sequence[int]) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(f) for f in factors)))


def _kernel_of_mult(x: tuple[int, ...], k: int, factors: Sequence[int]) -> bool:
    return all((k * a) % f == 0 for a, f in zip(x, factors))


def _span_size(images: Sequence[tuple[int, ...]], factors: Sequence[int]) -> int:
    """Size of the subgroup generated by ``images`` in ⊕ Z/f, by closure."""
    zero = tuple(0 for _ in factors)
    seen = {zero}
    frontier = [zero]
    while frontier:
        new = []
        for x in frontier:
            for g in images:
                y = tuple((a + b) % f for a, b, f in zip(x, g, factors))
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return len(seen)


@lru_cache(maxsize=None)
def count_surjections(source: AbelianGroupType, target: AbelianGroupType) -> int:
    """Number of surjective homomorphisms source -> target (both ell-groups).

    A homomorphism is a choice of image for each cyclic generator of the
    source, killed by that generator's order; it is onto when the images
    generate the target.
    """
    if source.prime != target.prime and source.exponents and target.exponents:
        raise GroupError(f"mismatched primes {source.prime} and {target.prime}")
    if source.order > SURJECTION_ORDER_CAP or target.order > SURJECTION_ORDER_CAP:
        raise GroupError(f"group orders above {SURJECTION_ORDER_CAP} are outside the brute-force range")
    if not target.exponents:
        return 1
    tf = target.factors
    tel = _elements(tf)
    choices = [[x for x in tel if _kernel_of_mult(x, s, tf)] for s in source.factors]
    total = 0
    for images in itertools.product(*choices):
        if images and _span_size(images, tf) == target.order:
            total += 1
    return total


def count_surjections_general(invariant_factors: Sequence[int], target: AbelianGroupType) -> int:
    """Surjections from ⊕ Z/d_i (any finite abelian group) onto an ell-group."""
    if not target.exponents:
        return 1
    tf = target.factors
    tel = _elements(tf)
    choices = [[x for x in tel if _kernel_of_mult(x, d, tf)] for d in invariant_factors]
    if not choices:
        return 0
    return sum(1 for images in itertools.product(*choices) if _span_size(images, tf) == target.order)


def automorphism_count(a: AbelianGroupType) -> int:
    return count_surjections(a, a)


def cl_product(ell: int, tol: float = 1e-15) -> tuple[Fraction, int]:
    """Π_{i=1}^{I} (1 - ell^-i) truncated so the tail error is below ``tol``.

    The omitted factors multiply to at least 1 - Σ_{i>I} ell^-i = 1 - ell^-I/(ell-1).
    """
    I = 1
    while Fraction(1, ell**I * (ell - 1)) >= Fraction(tol):
        I += 1
    prod = Fraction(1)
    for i in range(1, I + 1):
        prod *= 1 - Fraction(1, ell**i)
    return prod, I


def mu_cohen_lenstra(a: AbelianGroupType, ell: int | None = None, tol: float = 1e-15) -> Fraction:
    if ell is not None and ell != a.prime:
        raise GroupError(f"A is an {a.prime}-group, not an {ell}-group")
    if a.order > SURJECTION_ORDER_CAP:
        raise GroupError("|A| too large for brute-force automorphism counting")
    prod, _ = cl_product(a.prime, tol)
    return prod / automorphism_count(a)


# -- sweeps ----------------------------------------------------------------------

@dataclass
class CurveRecord:
    f: str
    f_code: int
    twist: int
    class_number: int
    ell_part: str
    m_A: int
    iota: int


@dataclass
class CLReport:
    q: int
    n: int
    A: str
    ell: int
    S_n_size: int
    sum_mA: int
    average: float
    density_A: float
    mu_reference: float
    abs_average_minus_1: float
    abs_density_minus_mu: float
    good_for_ell: bool
    epsilon: int
    field_tower: list
    sum_mA_exact: str = ""
    records: list[CurveRecord] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("records")
        return d


def _ell_part_str(exps: Sequence[int], ell: int) -> str:
    return "+".join(f"Z/{ell**e}" for e in exps) if exps else "1"


def _curve_record(curve: Curve, a: AbelianGroupType) -> CurveRecord:
    ell = a.prime
    h = zeta_class_number(curve)
    exps = ell_part_structure(curve, ell, h)
    part = AbelianGroupType(ell, exps)
    m = count_surjections(part, a)
    return CurveRecord(
        P.to_str(curve.field, curve.f), P.encode(curve.field, curve.f), int(curve.twist), h,
        _ell_part_str(exps, ell), m, int(part.exponents == a.exponents),
    )


def _records_for_chunk(args: tuple[int, int, tuple[int, ...], int, list[tuple[tuple[int, ...], bool]]]) -> list[CurveRecord]:
    q, _, exps, ell, items = args
    F = gf(q)
    a = AbelianGroupType(ell, exps)
    return [_curve_record(Curve(F, list(f), tw), a) for f, tw in items]


def cl_statistics(q: int, n: int, a: AbelianGroupType, *, allow_bad: bool = False,
                  threads: int = 1, keep_records: bool = True) -> CLReport:
    """Sweep 𝔖_n and aggregate m_A, the indicator of ell-part ≅ A, and comparisons to μ(A)."""
    ell = a.prime
    if ell == 2:
        raise GroupError("the heuristic concerns odd ell")
    if n % 2 == 0:
        raise CurveError("n must be odd")
    good = good_for_ell(q, ell)
    if not good:
        if not allow_bad:
            raise ValueError(f"q={q} is not good for ell={ell}")
        log.warning("q=%d is not good for ell=%d; exploration only", q, ell)
    curves = [(tuple(c.f), c.twist) for c in curve_sweep(q, n)]
    if threads > 1 and len(curves) > 200:
        size = math.ceil(len(curves) / (threads * 4))
        chunks = [(q, n, a.exponents, ell, curves[i:i + size]) for i in range(0, len(curves), size)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = [r for part in pool.map(_records_for_chunk, chunks) for r in part]
    else:
        records = _records_for_chunk((q, n, a.exponents, ell, curves))
    total = len(records)
    expected = 2 * (q if n == 1 else q**n - q ** (n - 1))
    if total != expected:
        raise AssertionError(f"|S_n| = {total}, expected {expected}")
    sum_m = sum(r.m_A for r in records)
    hits = sum(r.iota for r in records)
    mu = float(mu_cohen_lenstra(a))
    avg = Fraction(sum_m, total)
    dens = Fraction(hits, total)
    F = gf(q)
    return CLReport(
        q, n, str(a), ell, total, sum_m, float(avg), float(dens), mu,
        abs(float(avg) - 1), abs(float(dens) - mu), good, F.nonsquare, F.describe()["tower"],
        sum_mA_exact=f"{avg.numerator}/{avg.denominator}",
        records=records if keep_records else [],
    )


@dataclass
class DensitySweep:
    q: int
    A: str
    ns: list[int]
    densities: list[float]
    averages: list[float]
    delta_plus: float       # max density over the sweep (finite-window stand-in for limsup)
    delta_minus: float      # min density over the sweep
    mu_reference: float


def density_sweep(q: int, ns: Iterable[int], a: AbelianGroupType, **kw) -> DensitySweep:
    reps = [cl_statistics(q, n, a, keep_records=False, **kw) for n in ns]
    dens = [r.density_A for r in reps]
    return DensitySweep(q, str(a), [r.n for r in reps], dens, [r.average for r in reps],
                        max(dens), min(dens), reps[0].mu_reference if reps else float("nan"))


def records_csv(records: Sequence[CurveRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["f", "twist", "class_number", "ell_part", "m_A", "iota"])
    for r in sorted(records, key=lambda r: (r.f_code, r.twist)):
        w.writerow([r.f, r.twist, r.class_number, r.ell_part, r.m_A, r.iota])
    return buf.getvalue()


def full_structure_record(curve: Curve, a: AbelianGroupType) -> tuple[int, tuple[int, ...], int]:
    """(class number, ell-part exponents, m_A computed from the full group).

    Independent of :func:`_curve_record`: uses complete enumeration and the
    full invariant factors rather than the zeta shortcut.
    """
    s = jacobian_structure(curve)
    return s.order, s.ell_part(a.prime), count_surjections_general(s.invariant_factors, a)
