"""Exact scalar ring: complex rationals times formal powers of the deformation parameter.

A :class:`ScalarH` is a Laurent polynomial in the central symbol ``hb`` with
coefficients in Q(i), stored sparsely as ``{power: (re, im)}`` with exact
:class:`~fractions.Fraction` parts.  No floating point ever enters: the
classical limit and all commutator bookkeeping are exact coefficient
extractions.  Negative powers exist only so that evolution-exponential
coefficients ``(-i/hb)^n`` are representable; the constructors used by the
polynomial and multivector layers only produce powers >= 0.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Union

from .errors import DivisibilityError, DomainError

Rat = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_fraction(x: Rat) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def fraction_sqrt(x: Fraction) -> Fraction:
    """Exact square root of a non-negative rational; raises if none exists."""
    if x < 0:
        raise DomainError(f"no real square root of {x}")
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise DomainError(f"{x} is not a rational square")
    return Fraction(rn, rd)


class ScalarH:
    """Element of Q(i)[hb, 1/hb] in canonical sparse form.

    Canonical form: no zero coefficients stored, powers unique.  Instances are
    immutable and hashable; all arithmetic is exact.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[int, tuple[Fraction, Fraction]] | None = None):
        clean: dict[int, tuple[Fraction, Fraction]] = {}
        if terms:
            for k, (re, im) in terms.items():
                if re or im:
                    clean[k] = (re, im)
        object.__setattr__(self, "_terms", clean)

    # -- constructors ------------------------------------------------------

    @classmethod
    def rational(cls, re: Rat, im: Rat = 0) -> "ScalarH":
        return cls({0: (_as_fraction(re), _as_fraction(im))})

    @classmethod
    def i(cls) -> "ScalarH":
        return cls({0: (_ZERO, _ONE)})

    @classmethod
    def hbar(cls, power: int = 1, re: Rat = 1, im: Rat = 0) -> "ScalarH":
        return cls({power: (_as_fraction(re), _as_fraction(im))})

    @classmethod
    def zero(cls) -> "ScalarH":
        return cls()

    @classmethod
    def one(cls) -> "ScalarH":
        return cls.rational(1)

    @staticmethod
    def coerce(value: "ScalarH | Rat") -> "ScalarH":
        if isinstance(value, ScalarH):
            return value
        return ScalarH.rational(_as_fraction(value))

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> list[tuple[int, Fraction, Fraction]]:
        """Terms as (power, re, im), highest power first."""
        return [(k, re, im) for k, (re, im) in sorted(self._terms.items(), reverse=True)]

    def min_power(self) -> int:
        if not self._terms:
            return 0
        return min(self._terms)

    def is_rational(self) -> bool:
        """True for 0 or a single real hb^0 term."""
        if not self._terms:
            return True
        return set(self._terms) == {0} and self._terms[0][1] == 0

    def rational_value(self) -> Fraction:
        if self.is_zero:
            return _ZERO
        if not self.is_rational():
            raise DomainError(f"{self} is not a plain rational")
        return self._terms[0][0]

    def is_hbar_free(self) -> bool:
        return all(k == 0 for k in self._terms)

    def complex_value(self) -> complex:
        """Numeric value; only defined when no hb power is present."""
        if not self.is_hbar_free():
            raise DomainError(f"{self} carries powers of hb")
        if self.is_zero:
            return 0j
        re, im = self._terms[0]
        return complex(re) + 1j * complex(im)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "ScalarH | Rat") -> "ScalarH":
        other = ScalarH.coerce(other)
        terms = dict(self._terms)
        for k, (re, im) in other._terms.items():
            r0, i0 = terms.get(k, (_ZERO, _ZERO))
            terms[k] = (r0 + re, i0 + im)
        return ScalarH(terms)

    __radd__ = __add__

    def __neg__(self) -> "ScalarH":
        return ScalarH({k: (-re, -im) for k, (re, im) in self._terms.items()})

    def __sub__(self, other: "ScalarH | Rat") -> "ScalarH":
        return self + (-ScalarH.coerce(other))

    def __rsub__(self, other: "ScalarH | Rat") -> "ScalarH":
        return ScalarH.coerce(other) + (-self)

    def __mul__(self, other: "ScalarH | Rat") -> "ScalarH":
        other = ScalarH.coerce(other)
        terms: dict[int, tuple[Fraction, Fraction]] = {}
        for ka, (ra, ia) in self._terms.items():
            for kb, (rb, ib) in other._terms.items():
                k = ka + kb
                re = ra * rb - ia * ib
                im = ra * ib + ia * rb
                r0, i0 = terms.get(k, (_ZERO, _ZERO))
                terms[k] = (r0 + re, i0 + im)
        return ScalarH(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ScalarH":
        if n < 0:
            raise DomainError("negative scalar powers are not defined")
        out = ScalarH.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, r: Rat) -> "ScalarH":
        r = _as_fraction(r)
        return ScalarH({k: (re * r, im * r) for k, (re, im) in self._terms.items()})

    # -- hbar-specific operations -----------------------------------------

    def shift_hbar(self, delta: int) -> "ScalarH":
        """Multiply by hb**delta (delta may be negative)."""
        return ScalarH({k + delta: v for k, v in self._terms.items()})

    def at_hbar_zero(self) -> "ScalarH":
        """Set hb -> 0: keep only the power-0 coefficient.

        Terms with negative powers have no limit and are rejected.
        """
        if any(k < 0 for k in self._terms):
            raise DivisibilityError(f"{self} diverges as hb -> 0")
        if 0 in self._terms:
            return ScalarH({0: self._terms[0]})
        return ScalarH.zero()

    def div_ihbar(self) -> "ScalarH":
        """Exact division by i*hb; every term must carry hb to power >= 1."""
        if any(k < 1 for k in self._terms):
            raise DivisibilityError(f"{self} is not divisible by i*hb")
        # 1/i = -i, so (re + i im)/i = im - i re
        return ScalarH({k - 1: (im, -re) for k, (re, im) in self._terms.items()})

    def div_exact(self, divisor: "ScalarH") -> "ScalarH":
        """Exact division by a single-term scalar c*hb^k."""
        items = list(divisor._terms.items())
        if len(items) != 1:
            raise DivisibilityError(f"cannot divide exactly by {divisor}")
        k, (re, im) = items[0]
        norm = re * re + im * im
        if norm == 0:
            raise ZeroDivisionError("division by zero scalar")
        inv = ScalarH({-k: (re / norm, -im / norm)})
        return self * inv

    def sqrt_exact(self) -> "ScalarH":
        """Exact square root of a single-term positive scalar r*hb^(2k)."""
        if self.is_zero:
            return ScalarH.zero()
        items = list(self._terms.items())
        if len(items) != 1:
            raise DomainError(f"{self} is not a scalar square")
        k, (re, im) = items[0]
        if im != 0 or re <= 0 or k % 2 != 0:
            raise DomainError(f"{self} is not a positive even-power square")
        return ScalarH({k // 2: (fraction_sqrt(re), _ZERO)})

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ScalarH.rational(other)
        if not isinstance(other, ScalarH):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def monomial_strings(self) -> list[str]:
        """Render each (power, re, im) pair as one or two product atoms.

        Highest hb power first, real part before imaginary part.  Used by the
        canonical printers; the output re-parses to the same value.
        """
        out: list[str] = []
        for k, re, im in self.terms():
            hb = "" if k == 0 else ("hb" if k == 1 else f"hb^{k}")
            if re:
                out.append(_join_atoms(_rat_str(re), hb))
            if im:
                if im == 1:
                    body = "i"
                elif im == -1:
                    body = "-i"
                else:
                    body = _join_atoms(_rat_str(im), "i")
                out.append(_join_atoms(body, hb))
        return out

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return _join_sum(self.monomial_strings())

    def __repr__(self) -> str:
        return f"ScalarH({self})"


def _rat_str(x: Fraction) -> str:
    return str(x)


def _join_atoms(*parts: str) -> str:
    parts = tuple(p for p in parts if p)
    if not parts:
        return "1"
    # fold "1*x" -> "x" and "-1*x" -> "-x"
    if len(parts) > 1 and parts[0] == "1":
        parts = parts[1:]
    elif len(parts) > 1 and parts[0] == "-1":
        parts = ("-" + parts[1],) + parts[2:]
    return "*".join(parts)


def _join_sum(monomials: Iterable[str]) -> str:
    pieces: list[str] = []
    for m in monomials:
        if not pieces:
            pieces.append(m)
        elif m.startswith("-"):
            pieces.append("- " + m[1:])
        else:
            pieces.append("+ " + m)
    return " ".join(pieces)


ZERO = ScalarH.zero()
ONE = ScalarH.one()
I = ScalarH.i()
HBAR = ScalarH.hbar()
I_HBAR = I * HBAR
HALF = ScalarH.rational(Fraction(1, 2))
