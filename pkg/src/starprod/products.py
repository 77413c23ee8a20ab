"""The deformed products: Clifford, 3D Moyal, 4D Moyal, and their combination.

Conventions
-----------
* The Clifford product pairs right anticommuting derivatives of the left
  factor with left anticommuting derivatives of the right factor, one metric
  contraction per order; the series terminates at order 4.  On basis vectors
  this yields ``{g_mu, g_nu}*C = 2 eta_mu_nu``.
* Moyal products act on the commuting coefficients only; blades of
  multivector-valued operands multiply by the undeformed exterior product.
  The conjugate pairs are (q^mu, p_mu), so ``[q^mu, p_nu]*M = i hb delta`` in
  any signature: written with raised momenta, the metric weight of the 4D
  product cancels against the lowering, which is why no eta appears in the
  expansion below.  Raising and lowering happen explicitly at call sites.
* The combined product deforms both sectors at once and factorizes:
  coefficients via Moyal, blades via Clifford.

All four products are exact on polynomial data: every bidifferential series
is summed to the order at which it terminates, never truncated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Literal

from .errors import DomainError
from .multivector import (
    ALL_MASKS,
    Metric,
    Multivector,
    NONSTANDARD,
    exterior_sign,
    left_derivative_blade,
    right_derivative_blade,
)
from .poly import PhasePoly, P_INDEX, Q_INDEX
from .scalar import HALF, I, ScalarH

# -- Clifford sector ---------------------------------------------------------

_clifford_tables: dict[tuple[int, ...], dict[tuple[int, int], tuple[Fraction, int]]] = {}


def _clifford_blade_product(a: int, b: int, metric: Metric) -> tuple[Fraction, int]:
    """Contract two blades through the terminating derivative series.

    Order k pairs k right-derivatives of the left blade with k
    left-derivatives of the right blade, weighted by one metric factor per
    contraction and 1/k!; only the full contraction of the shared generators
    survives, so the result is a single signed blade.
    """
    coeff = Fraction(0)
    out_mask = -1
    frontier: dict[tuple[int, int], Fraction] = {(a, b): Fraction(1)}
    k = 0
    while frontier:
        inv_fact = Fraction(1, factorial(k))
        for (ma, mb), c in frontier.items():
            sign = exterior_sign(ma, mb)
            if sign == 0:
                continue
            mask = ma | mb
            if out_mask == -1:
                out_mask = mask
            coeff += c * sign * inv_fact
        nxt: dict[tuple[int, int], Fraction] = {}
        for (ma, mb), c in frontier.items():
            for mu in range(4):
                sa, ma2 = right_derivative_blade(ma, mu)
                if sa == 0:
                    continue
                sb, mb2 = left_derivative_blade(mb, mu)
                if sb == 0:
                    continue
                key = (ma2, mb2)
                add = c * sa * sb * metric.diag[mu]
                nxt[key] = nxt.get(key, Fraction(0)) + add
        frontier = nxt
        k += 1
    if coeff == 0:
        return Fraction(0), 0
    return coeff, out_mask


def clifford_table(metric: Metric) -> dict[tuple[int, int], tuple[Fraction, int]]:
    """Blade-level product table for one metric (memoized)."""
    table = _clifford_tables.get(metric.diag)
    if table is None:
        table = {
            (a, b): _clifford_blade_product(a, b, metric)
            for a in ALL_MASKS
            for b in ALL_MASKS
        }
        _clifford_tables[metric.diag] = table
    return table


def clifford_star(a: Multivector, b: Multivector, metric: Metric) -> Multivector:
    """Fermionic star product; deforms the exterior algebra into a Clifford algebra."""
    table = clifford_table(metric)
    comp: dict[int, PhasePoly] = {}
    for ma, ca in a._comp.items():
        for mb, cb in b._comp.items():
            coeff, mask = table[(ma, mb)]
            if coeff == 0:
                continue
            poly = (ca * cb).scale(coeff)
            acc = comp.get(mask)
            comp[mask] = poly if acc is None else acc + poly
    return Multivector(comp)


# -- Moyal sector ------------------------------------------------------------

# Each direction applies (d/d left-var to f, d/d right-var to g, sign).
_MOYAL3_DIRECTIONS = tuple(
    [(Q_INDEX[i], P_INDEX[i], 1) for i in (1, 2, 3)]
    + [(P_INDEX[i], Q_INDEX[i], -1) for i in (1, 2, 3)]
)
_MOYAL4_DIRECTIONS = tuple(
    [(Q_INDEX[i], P_INDEX[i], 1) for i in (0, 1, 2, 3)]
    + [(P_INDEX[i], Q_INDEX[i], -1) for i in (0, 1, 2, 3)]
)

_I_HALF = I * HALF  # i/2


def moyal_star_poly(
    f: PhasePoly,
    g: PhasePoly,
    directions: tuple[tuple[int, int, int], ...] = _MOYAL4_DIRECTIONS,
) -> PhasePoly:
    """Exponential bidifferential series on polynomials, summed to termination.

    Level n enumerates derivative multisets once (nondecreasing direction
    index), reusing the parent derivatives; the weight of a multiset alpha is
    (i hb/2)^n * sign(alpha)/alpha!.
    """
    total = f * g
    # level: multiset key -> (f-derivative, g-derivative, sign, 1/alpha!)
    level: dict[tuple[int, ...], tuple[PhasePoly, PhasePoly, int, Fraction]] = {
        (): (f, g, 1, Fraction(1))
    }
    n = 0
    ihalf_pow = ScalarH.one()
    while level:
        n += 1
        ihalf_pow = ihalf_pow * _I_HALF * ScalarH.hbar()
        nxt: dict[tuple[int, ...], tuple[PhasePoly, PhasePoly, int, Fraction]] = {}
        for key, (fd, gd, sign, inv_af) in level.items():
            start = key[-1] if key else 0
            for j in range(start, len(directions)):
                fvar, gvar, dir_sign = directions[j]
                f2 = fd.partial(fvar)
                if f2.is_zero:
                    continue
                g2 = gd.partial(gvar)
                if g2.is_zero:
                    continue
                count = 1
                for kk in reversed(key):
                    if kk == j:
                        count += 1
                    else:
                        break
                nxt[key + (j,)] = (f2, g2, sign * dir_sign, inv_af / count)
        for fd, gd, sign, inv_af in nxt.values():
            weight = ihalf_pow.scale(inv_af if sign > 0 else -inv_af)
            total = total + (fd * gd).scale(weight)
        level = nxt
    return total


def _moyal_star_mv(a: Multivector, b: Multivector, directions) -> Multivector:
    comp: dict[int, PhasePoly] = {}
    for ma, ca in a._comp.items():
        for mb, cb in b._comp.items():
            sign = exterior_sign(ma, mb)
            if sign == 0:
                continue
            poly = moyal_star_poly(ca, cb, directions)
            if sign < 0:
                poly = -poly
            mask = ma | mb
            acc = comp.get(mask)
            comp[mask] = poly if acc is None else acc + poly
    return Multivector(comp)


def moyal3_star(a: Multivector, b: Multivector) -> Multivector:
    """Spatial Moyal product over the pairs (q1,p1)..(q3,p3); no metric weight."""
    return _moyal_star_mv(a, b, _MOYAL3_DIRECTIONS)


def moyal4_star(a: Multivector, b: Multivector, metric: Metric | None = None) -> Multivector:
    """Moyal product over all four conjugate pairs, time/energy included.

    In the internal index convention the expansion is signature-free (see the
    module docstring); the metric argument is accepted to mirror the rest of
    the product API.
    """
    return _moyal_star_mv(a, b, _MOYAL4_DIRECTIONS)


def mc_star(
    a: Multivector,
    b: Multivector,
    metric: Metric,
    moyal: Literal["moyal3", "moyal4"] = "moyal4",
) -> Multivector:
    """Combined product: Moyal on the coefficients tensored with Clifford on blades."""
    table = clifford_table(metric)
    directions = _MOYAL3_DIRECTIONS if moyal == "moyal3" else _MOYAL4_DIRECTIONS
    comp: dict[int, PhasePoly] = {}
    for ma, ca in a._comp.items():
        for mb, cb in b._comp.items():
            coeff, mask = table[(ma, mb)]
            if coeff == 0:
                continue
            poly = moyal_star_poly(ca, cb, directions).scale(coeff)
            acc = comp.get(mask)
            comp[mask] = poly if acc is None else acc + poly
    return Multivector(comp)


# -- product selection -------------------------------------------------------

KIND_NAMES = ("clifford", "moyal3", "moyal4", "moyal_clifford")


@dataclass(frozen=True)
class ProductKind:
    """A star product tag plus the metric it carries."""

    kind: str
    metric: Metric = NONSTANDARD

    def __post_init__(self):
        if self.kind not in KIND_NAMES:
            raise DomainError(f"unknown product kind {self.kind!r}")

    def __str__(self) -> str:
        return f"{self.kind}[{self.metric}]"


def star(a: Multivector, b: Multivector, kind: ProductKind) -> Multivector:
    if kind.kind == "clifford":
        return clifford_star(a, b, kind.metric)
    if kind.kind == "moyal3":
        return moyal3_star(a, b)
    if kind.kind == "moyal4":
        return moyal4_star(a, b, kind.metric)
    return mc_star(a, b, kind.metric)


def star_commutator(a: Multivector, b: Multivector, kind: ProductKind) -> Multivector:
    return star(a, b, kind) - star(b, a, kind)


def star_anticommutator(a: Multivector, b: Multivector, kind: ProductKind) -> Multivector:
    return star(a, b, kind) + star(b, a, kind)


def moyal_commutator_poly(f: PhasePoly, g: PhasePoly) -> PhasePoly:
    """[f, g] under the 4D Moyal product, staying in the polynomial ring."""
    return moyal_star_poly(f, g) - moyal_star_poly(g, f)
