"""Star powers, star exponentials, projector splittings and eigenvalue checks.

The evolution exponential of a generator ``K`` is the series
``sum_n (1/n!) (-i s / hb)^n K^(n*)``.  Its coefficients carry negative powers
of hb, which is why the scalar ring is Laurent.  When ``K`` star-squares to a
constant ``c^2`` the series resums into two idempotents: the exponential
splits as ``pi_minus e^{+i s c/hb} + pi_plus e^{-i s c/hb}`` with
``pi_pm = (1 pm K/c)/2``.  The phase factors are never materialized; the split
is represented structurally and compared against series coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, IrrationalEigenvalueError, NotSplittableError
from .multivector import Multivector
from .poly import PhasePoly, S_INDEX
from .products import ProductKind, star
from .scalar import HALF, I, ScalarH


def star_power(a: Multivector, n: int, kind: ProductKind) -> Multivector:
    """n-fold star product of a with itself; n = 0 gives the unit."""
    if n < 0:
        raise DomainError("star_power needs n >= 0")
    out = Multivector.one()
    for _ in range(n):
        out = star(out, a, kind)
    return out


@dataclass(frozen=True)
class ProjectorSplit:
    """Resolution of the identity attached to an element with constant star-square.

    ``pi_plus + pi_minus = 1``, both are star-idempotent and mutually
    orthogonal, and ``a * pi_pm = +-eigenvalue * pi_pm``.
    """

    eigenvalue: ScalarH
    pi_plus: Multivector
    pi_minus: Multivector
    kind: ProductKind


def projector_split(
    a: Multivector, kind: ProductKind, eigenvalue: ScalarH | None = None
) -> ProjectorSplit:
    """Split the exponential of ``a`` into idempotents.

    Requires ``a * a`` to be a constant grade-0 scalar; the eigenvalue is its
    exact square root (or a caller-supplied exact root, checked).
    """
    square = star(a, a, kind)
    if not square.is_scalar() or not square.scalar_part().is_constant():
        raise NotSplittableError(f"star square is not a constant scalar: {square}")
    c2 = square.constant_scalar()
    if eigenvalue is None:
        try:
            eigenvalue = c2.sqrt_exact()
        except DomainError as exc:
            raise IrrationalEigenvalueError(
                f"star square {c2} has no exact square root; "
                "evaluate at an exact point or supply the root"
            ) from exc
    elif eigenvalue * eigenvalue != c2:
        raise DomainError(f"supplied eigenvalue {eigenvalue} does not square to {c2}")
    half = Multivector.scalar(HALF)
    scaled = a.div_scalar(eigenvalue).scale(HALF)
    return ProjectorSplit(
        eigenvalue=eigenvalue,
        pi_plus=half + scaled,
        pi_minus=half - scaled,
        kind=kind,
    )


@dataclass(frozen=True)
class TruncatedExp:
    """Truncated evolution exponential: coefficients of powers of the parameter.

    ``coefficients[n] = (1/n!) (-i/hb)^n K^(n*)``; coefficient 0 is the unit.
    """

    order: int
    coefficients: tuple[Multivector, ...]
    kind: ProductKind

    def as_multivector(self) -> Multivector:
        """Materialize as a polynomial in the evolution variable s."""
        out = Multivector.zero()
        for n, c in enumerate(self.coefficients):
            out = out + c.map_coeffs(lambda poly: poly * PhasePoly.variable(S_INDEX, n))
        return out


_MINUS_I = -I


def star_exp_truncated(k: Multivector, order: int, kind: ProductKind) -> TruncatedExp:
    """First ``order + 1`` series coefficients of the evolution exponential, exact."""
    if order < 0:
        raise DomainError("truncation order must be >= 0")
    coeffs = [Multivector.one()]
    minus_i_over_hbar = ScalarH({-1: (Fraction(0), Fraction(-1))})  # -i/hb
    for n in range(order):
        step = minus_i_over_hbar.scale(Fraction(1, n + 1))
        coeffs.append(star(k, coeffs[n], kind).scale(step))
    return TruncatedExp(order=order, coefficients=tuple(coeffs), kind=kind)


def star_eigencheck(
    h: Multivector, w: Multivector, eigenvalue: ScalarH, kind: ProductKind
) -> bool:
    """True iff ``h * w = eigenvalue * w`` exactly."""
    return (star(h, w, kind) - w.scale(eigenvalue)).is_zero


def schrodinger_residual(k: Multivector, order: int, kind: ProductKind) -> list[Multivector]:
    """Residual of the evolution equation on the truncated exponential.

    Returns the s-power coefficients of ``i hb d/ds E - K * E`` for the
    order-N truncation E; entries below index N must vanish exactly, the
    index-N entry is the truncation remainder.
    """
    if order < 1:
        raise DomainError("residual check needs order >= 1")
    exp = star_exp_truncated(k, order, kind)
    ihbar = ScalarH.hbar(1, 0, 1)
    residual: list[Multivector] = []
    for n in range(order):
        d_ds = exp.coefficients[n + 1].scale(ihbar.scale(n + 1))
        residual.append(d_ds - star(k, exp.coefficients[n], kind))
    residual.append(-star(k, exp.coefficients[order], kind))
    return residual


def closed_form_coefficient(split: ProjectorSplit, a: Multivector, n: int) -> Multivector:
    """Series coefficient n implied by the projector split of ``a``.

    Even orders resum on the unit, odd orders on ``a/c``:
    ``(1/n!) (-i c/hb)^n`` times 1 or ``a/c``.
    """
    c = split.eigenvalue
    minus_i_over_hbar = ScalarH({-1: (Fraction(0), Fraction(-1))})
    weight = (minus_i_over_hbar * c) ** n
    weight = weight.scale(Fraction(1, _factorial(n)))
    base = Multivector.one() if n % 2 == 0 else a.div_scalar(c)
    return base.scale(weight)


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out
