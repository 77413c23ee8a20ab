"""Grassmann (exterior) algebra of the four spacetime generators over PhasePoly.

Blades are encoded as 4-bit masks over the generators g0..g3 in ascending
canonical order; a multivector maps blades to phase-space polynomial
coefficients.  The product implemented here is the *undeformed* exterior
product; the deformed (Clifford and Moyal) products live in
:mod:`starprod.products` and are built on the anticommuting derivatives
defined below.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import DivisibilityError, DomainError
from .poly import Coeff, PhasePoly
from .scalar import ScalarH

N_GENERATORS = 4
ALL_MASKS = tuple(range(1 << N_GENERATORS))
PSEUDOSCALAR_MASK = (1 << N_GENERATORS) - 1


@dataclass(frozen=True)
class Metric:
    """Diagonal Lorentz metric, its own inverse by construction."""

    signature: str
    diag: tuple[int, int, int, int]

    def eta(self, mu: int, nu: int) -> int:
        if not (0 <= mu < 4 and 0 <= nu < 4):
            raise DomainError(f"metric index out of range: ({mu}, {nu})")
        return self.diag[mu] if mu == nu else 0

    def raise_momentum(self, mu: int) -> "PhasePoly":
        """p^mu expressed in the stored lower-index momenta."""
        from .poly import p

        return p(mu).scale(Fraction(self.diag[mu]))

    def __str__(self) -> str:
        return self.signature


STANDARD = Metric("standard", (1, -1, -1, -1))
NONSTANDARD = Metric("nonstandard", (-1, 1, 1, 1))

_METRICS = {"standard": STANDARD, "nonstandard": NONSTANDARD}


def metric_by_name(name: str) -> Metric:
    try:
        return _METRICS[name]
    except KeyError:
        raise DomainError(f"unknown metric {name!r}") from None


# -- blade mask helpers ------------------------------------------------------


def mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    prev = -1
    for i in indices:
        if not 0 <= i < N_GENERATORS:
            raise DomainError(f"generator index {i} out of range")
        if i <= prev:
            raise DomainError(f"blade indices must be strictly ascending, got {tuple(indices)}")
        mask |= 1 << i
        prev = i
    return mask


def indices_from_mask(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(N_GENERATORS) if mask >> i & 1)


def grade_of(mask: int) -> int:
    return bin(mask).count("1")


def blade_name(mask: int) -> str:
    if mask == 0:
        return "1"
    return "".join(f"g{i}" for i in indices_from_mask(mask))


def exterior_sign(a: int, b: int) -> int:
    """Sign of merging blade a with blade b; 0 when a generator repeats."""
    if a & b:
        return 0
    swaps = 0
    for j in indices_from_mask(b):
        swaps += grade_of(a & ~((1 << (j + 1)) - 1))  # generators of a above j
    return -1 if swaps & 1 else 1


def left_derivative_blade(mask: int, mu: int) -> tuple[int, int]:
    """Anticommute g_mu to the front and strike it; returns (sign, new mask).

    Sign is (-1)^k with k the number of generators before g_mu; (0, 0) when
    the generator is absent.
    """
    bit = 1 << mu
    if not mask & bit:
        return 0, 0
    before = grade_of(mask & (bit - 1))
    return (-1 if before & 1 else 1), mask ^ bit


def right_derivative_blade(mask: int, mu: int) -> tuple[int, int]:
    """Anticommute g_mu to the back and strike it; sign (-1)^(count after)."""
    bit = 1 << mu
    if not mask & bit:
        return 0, 0
    after = grade_of(mask & ~((bit << 1) - 1))
    return (-1 if after & 1 else 1), mask ^ bit


@dataclass(frozen=True, order=True)
class Blade:
    """A canonical product of distinct generators, identified by its index set."""

    indices: tuple[int, ...]

    @classmethod
    def from_mask(cls, mask: int) -> "Blade":
        return cls(indices_from_mask(mask))

    @property
    def mask(self) -> int:
        return mask_from_indices(self.indices)

    @property
    def grade(self) -> int:
        return len(self.indices)

    def __str__(self) -> str:
        return blade_name(self.mask)


# -- the multivector ---------------------------------------------------------


MVCoeff = Union[PhasePoly, ScalarH, int, Fraction]


def _as_poly(value: MVCoeff) -> PhasePoly:
    if isinstance(value, PhasePoly):
        return value
    return PhasePoly.constant(value)


class Multivector:
    """Map from blades to phase-space polynomials; the engine's value type.

    Immutable, canonical (no zero components), and graded: the sum of the
    grade projections 0..4 reconstructs the value exactly.  ``*`` is the
    undeformed exterior product.
    """

    __slots__ = ("_comp",)

    def __init__(self, components: Mapping[int, PhasePoly] | None = None):
        clean: dict[int, PhasePoly] = {}
        if components:
            for mask, poly in components.items():
                if not 0 <= mask < 16:
                    raise DomainError(f"blade mask {mask} out of range")
                if not poly.is_zero:
                    clean[mask] = poly
        object.__setattr__(self, "_comp", clean)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Multivector":
        return cls()

    @classmethod
    def scalar(cls, value: MVCoeff) -> "Multivector":
        return cls({0: _as_poly(value)})

    @classmethod
    def one(cls) -> "Multivector":
        return cls.scalar(1)

    @classmethod
    def gamma(cls, mu: int) -> "Multivector":
        if not 0 <= mu < N_GENERATORS:
            raise DomainError(f"generator index {mu} out of range")
        return cls({1 << mu: PhasePoly.one()})

    @classmethod
    def blade(cls, indices: Iterable[int], coeff: MVCoeff = 1) -> "Multivector":
        return cls({mask_from_indices(indices): _as_poly(coeff)})

    @classmethod
    def pseudoscalar(cls) -> "Multivector":
        return cls({PSEUDOSCALAR_MASK: PhasePoly.one()})

    @classmethod
    def gamma5(cls) -> "Multivector":
        """i * g0g1g2g3, the chirality element."""
        return cls({PSEUDOSCALAR_MASK: PhasePoly.constant(ScalarH.i())})

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._comp

    def components(self) -> list[tuple[Blade, PhasePoly]]:
        """Components in canonical order: by grade, then by index set."""
        order = sorted(self._comp, key=lambda m: (grade_of(m), indices_from_mask(m)))
        return [(Blade.from_mask(m), self._comp[m]) for m in order]

    def component(self, indices: Iterable[int] | int) -> PhasePoly:
        mask = indices if isinstance(indices, int) else mask_from_indices(indices)
        return self._comp.get(mask, PhasePoly.zero())

    def grades(self) -> set[int]:
        return {grade_of(m) for m in self._comp}

    def grade_project(self, n: int) -> "Multivector":
        if not 0 <= n <= N_GENERATORS:
            raise DomainError(f"grade {n} out of range 0..4")
        return Multivector({m: c for m, c in self._comp.items() if grade_of(m) == n})

    def scalar_part(self) -> PhasePoly:
        return self._comp.get(0, PhasePoly.zero())

    def is_scalar(self) -> bool:
        return set(self._comp) <= {0}

    def constant_scalar(self) -> ScalarH:
        """The value as a constant; raises unless grade 0 and variable-free."""
        if not self.is_scalar():
            raise DomainError(f"{self} has nonzero grades above 0")
        return self.scalar_part().constant_value()

    # -- linear operations ---------------------------------------------------

    def __add__(self, other):
        other = _coerce_mv(other)
        if other is None:
            return NotImplemented
        comp = dict(self._comp)
        for mask, poly in other._comp.items():
            acc = comp.get(mask)
            comp[mask] = poly if acc is None else acc + poly
        return Multivector(comp)

    __radd__ = __add__

    def __neg__(self):
        return Multivector({m: -c for m, c in self._comp.items()})

    def __sub__(self, other):
        other = _coerce_mv(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_mv(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, value: MVCoeff) -> "Multivector":
        poly = _as_poly(value)
        return Multivector({m: c * poly for m, c in self._comp.items()})

    # -- exterior product ----------------------------------------------------

    def __mul__(self, other):
        """Undeformed product: signed exterior merge on blades, commutative
        polynomial product on coefficients."""
        other = _coerce_mv(other)
        if other is None:
            return NotImplemented
        comp: dict[int, PhasePoly] = {}
        for ma, ca in self._comp.items():
            for mb, cb in other._comp.items():
                sign = exterior_sign(ma, mb)
                if sign == 0:
                    continue
                poly = ca * cb
                if sign < 0:
                    poly = -poly
                mask = ma | mb
                acc = comp.get(mask)
                comp[mask] = poly if acc is None else acc + poly
        return Multivector(comp)

    __rmul__ = __mul__

    # -- derivatives -----------------------------------------------------------

    def partial(self, var: str | int) -> "Multivector":
        """Coefficient-wise formal derivative; blades untouched."""
        return Multivector({m: c.partial(var) for m, c in self._comp.items()})

    def grassmann_partial_left(self, mu: int) -> "Multivector":
        """Left anticommuting derivative d/dg_mu acting from the front."""
        comp: dict[int, PhasePoly] = {}
        for mask, poly in self._comp.items():
            sign, new = left_derivative_blade(mask, mu)
            if sign == 0:
                continue
            term = poly if sign > 0 else -poly
            acc = comp.get(new)
            comp[new] = term if acc is None else acc + term
        return Multivector(comp)

    def grassmann_partial_right(self, mu: int) -> "Multivector":
        """Right anticommuting derivative, acting from the back of each blade."""
        comp: dict[int, PhasePoly] = {}
        for mask, poly in self._comp.items():
            sign, new = right_derivative_blade(mask, mu)
            if sign == 0:
                continue
            term = poly if sign > 0 else -poly
            acc = comp.get(new)
            comp[new] = term if acc is None else acc + term
        return Multivector(comp)

    # -- hbar handling -----------------------------------------------------

    def hbar_set_zero(self) -> "Multivector":
        """Drop every term carrying hb to a positive power (classical part)."""
        return Multivector({m: c.at_hbar_zero() for m, c in self._comp.items()})

    def divide_by_ihbar(self) -> "Multivector":
        """Exact division by i*hb; raises DivisibilityError on any bare term."""
        return Multivector({m: c.div_ihbar() for m, c in self._comp.items()})

    def is_hbar_free(self) -> bool:
        return all(c.is_hbar_free() for c in self._comp.values())

    def div_scalar(self, divisor: ScalarH) -> "Multivector":
        return Multivector(
            {m: c.map_coeffs(lambda x: x.div_exact(divisor)) for m, c in self._comp.items()}
        )

    # -- substitution ----------------------------------------------------------

    def substitute(self, assignments: Mapping[str, Fraction | int]) -> "Multivector":
        return Multivector({m: c.substitute(assignments) for m, c in self._comp.items()})

    def map_coeffs(self, fn) -> "Multivector":
        return Multivector({m: fn(c) for m, c in self._comp.items()})

    # -- comparison / display ------------------------------------------------

    def __eq__(self, other: object) -> bool:
        other = _coerce_mv(other)
        if other is None:
            return NotImplemented
        return self._comp == other._comp

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._comp.items())))

    def __bool__(self) -> bool:
        return bool(self._comp)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        from .scalar import _join_sum

        pieces: list[str] = []
        for blade, poly in self.components():
            if blade.grade == 0:
                pieces.extend(poly.monomial_strings())
                continue
            name = str(blade)
            monos = poly.monomial_strings()
            if len(monos) == 1:
                m = monos[0]
                if m == "1":
                    pieces.append(name)
                elif m == "-1":
                    pieces.append("-" + name)
                else:
                    pieces.append(f"{m}*{name}")
            else:
                pieces.append(f"({str(poly)})*{name}")
        return _join_sum(pieces)

    def __repr__(self) -> str:
        return f"Multivector({self})"


def _coerce_mv(value) -> Multivector | None:
    if isinstance(value, Multivector):
        return value
    if isinstance(value, (PhasePoly, ScalarH, int, Fraction)):
        return Multivector.scalar(value)
    return None


def as_multivector(value) -> Multivector:
    mv = _coerce_mv(value)
    if mv is None:
        raise DomainError(f"cannot interpret {value!r} as a multivector")
    return mv
