"""Sparse multivariate polynomials over the exact scalar ring.

The phase space has eight coordinates ``q0..q3, p0..p3`` plus the evolution
parameter ``s``.  Positions are stored with the upper index and momenta with
the lower index; any raising/lowering happens explicitly at call sites via the
metric.  Terms are kept in a canonical sparse map from exponent vectors to
:class:`~starprod.scalar.ScalarH` coefficients, with zero terms never stored,
so structural equality is semantic equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import ClassVar, Iterable, Mapping, Union

from .errors import DomainError
from .scalar import Rat, ScalarH, _as_fraction

Coeff = Union[ScalarH, int, Fraction]


class SparsePoly:
    """Polynomial over ScalarH in the class's variable tuple.

    Subclasses fix ``VARS``; all operations stay inside the subclass, so the
    nine-variable phase-space ring and the extended ring used for Lagrangian
    manipulations share one implementation.
    """

    VARS: ClassVar[tuple[str, ...]] = ()
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, ...], ScalarH] | None = None):
        n = len(type(self).VARS)
        clean: dict[tuple[int, ...], ScalarH] = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != n:
                    raise DomainError(f"exponent vector {exps} has wrong length")
                if not coeff.is_zero:
                    clean[exps] = coeff
        object.__setattr__(self, "_terms", clean)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, coeff: Coeff):
        c = ScalarH.coerce(coeff)
        return cls({(0,) * len(cls.VARS): c})

    @classmethod
    def one(cls):
        return cls.constant(1)

    @classmethod
    def var_index(cls, name: str) -> int:
        try:
            return cls.VARS.index(name)
        except ValueError:
            raise DomainError(f"unknown variable {name!r}; have {cls.VARS}") from None

    @classmethod
    def variable(cls, var: str | int, power: int = 1, coeff: Coeff = 1):
        idx = cls.var_index(var) if isinstance(var, str) else var
        exps = [0] * len(cls.VARS)
        exps[idx] = power
        return cls({tuple(exps): ScalarH.coerce(coeff)})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: Coeff = 1):
        vec = [0] * len(cls.VARS)
        for name, e in exps.items():
            vec[cls.var_index(name)] = e
        return cls({tuple(vec): ScalarH.coerce(coeff)})

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> list[tuple[tuple[int, ...], ScalarH]]:
        """Canonical term order: exponent vectors lexicographically descending."""
        return sorted(self._terms.items(), key=lambda kv: kv[0], reverse=True)

    def is_constant(self) -> bool:
        return all(not any(exps) for exps in self._terms)

    def constant_value(self) -> ScalarH:
        if self.is_zero:
            return ScalarH.zero()
        if not self.is_constant():
            raise DomainError(f"{self} is not constant")
        return next(iter(self._terms.values()))

    def degree(self) -> int:
        if not self._terms:
            return 0
        return max(sum(exps) for exps in self._terms)

    def uses_variable(self, var: str | int) -> bool:
        idx = self.var_index(var) if isinstance(var, str) else var
        return any(exps[idx] for exps in self._terms)

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, (int, Fraction, ScalarH)):
            return type(self).constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for exps, coeff in other._terms.items():
            acc = terms.get(exps)
            terms[exps] = coeff if acc is None else acc + coeff
        return type(self)(terms)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: dict[tuple[int, ...], ScalarH] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                acc = terms.get(e)
                terms[e] = c if acc is None else acc + c
        return type(self)(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative polynomial powers are not defined")
        out = type(self).one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c: Coeff):
        c = ScalarH.coerce(c)
        return type(self)({e: coeff * c for e, coeff in self._terms.items()})

    # -- calculus ----------------------------------------------------------

    def partial(self, var: str | int):
        """Formal partial derivative with respect to one variable."""
        idx = self.var_index(var) if isinstance(var, str) else var
        terms: dict[tuple[int, ...], ScalarH] = {}
        for exps, coeff in self._terms.items():
            e = exps[idx]
            if e == 0:
                continue
            new = list(exps)
            new[idx] = e - 1
            key = tuple(new)
            c = coeff.scale(e)
            acc = terms.get(key)
            terms[key] = c if acc is None else acc + c
        return type(self)(terms)

    def substitute(self, assignments: Mapping[str, Rat]):
        """Exactly substitute rational values for a subset of the variables."""
        pairs = [(self.var_index(name), _as_fraction(val)) for name, val in assignments.items()]
        terms: dict[tuple[int, ...], ScalarH] = {}
        for exps, coeff in self._terms.items():
            factor = Fraction(1)
            new = list(exps)
            for idx, val in pairs:
                if new[idx]:
                    factor *= val ** new[idx]
                    new[idx] = 0
            key = tuple(new)
            c = coeff.scale(factor)
            acc = terms.get(key)
            terms[key] = c if acc is None else acc + c
        return type(self)(terms)

    def substitute_polys(self, assignments: Mapping[str, "SparsePoly"]):
        """Substitute polynomials for variables (used by the Legendre transform)."""
        pairs = {self.var_index(name): poly for name, poly in assignments.items()}
        out = type(self).zero()
        for exps, coeff in self._terms.items():
            term = type(self).constant(coeff)
            for idx, e in enumerate(exps):
                if not e:
                    continue
                if idx in pairs:
                    term = term * pairs[idx] ** e
                else:
                    term = term * type(self).variable(idx, e)
            out = out + term
        return out

    # -- hbar handling (delegates to the scalar ring) -----------------------

    def map_coeffs(self, fn):
        terms = {}
        for exps, coeff in self._terms.items():
            c = fn(coeff)
            if not c.is_zero:
                terms[exps] = c
        return type(self)(terms)

    def at_hbar_zero(self):
        return self.map_coeffs(lambda c: c.at_hbar_zero())

    def div_ihbar(self):
        return self.map_coeffs(lambda c: c.div_ihbar())

    def is_hbar_free(self) -> bool:
        return all(c.is_hbar_free() for c in self._terms.values())

    # -- numeric lane --------------------------------------------------------

    def eval_complex(self, values: Mapping[str, float] | Iterable[float]) -> complex:
        """Evaluate at numeric coordinates; requires an hb-free polynomial."""
        if isinstance(values, Mapping):
            vec = [float(values.get(name, 0.0)) for name in type(self).VARS]
        else:
            vec = [float(v) for v in values]
        total = 0j
        for exps, coeff in self._terms.items():
            acc = coeff.complex_value()
            for idx, e in enumerate(exps):
                if e:
                    acc *= vec[idx] ** e
            total += acc
        return total

    def eval_float(self, values) -> float:
        z = self.eval_complex(values)
        if z.imag != 0.0:
            raise DomainError("polynomial has an imaginary part at this point")
        return z.real

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, ScalarH)):
            other = type(self).constant(other)
        if not isinstance(other, SparsePoly) or type(other) is not type(self):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def monomial_strings(self) -> list[str]:
        out: list[str] = []
        names = type(self).VARS
        for exps, coeff in self.terms():
            factors = [
                (name if e == 1 else f"{name}^{e}")
                for name, e in zip(names, exps)
                if e
            ]
            mono = "*".join(factors)
            atoms = coeff.monomial_strings()
            if not factors:
                out.extend(atoms)
            elif len(atoms) == 1:
                a = atoms[0]
                if a == "1":
                    out.append(mono)
                elif a == "-1":
                    out.append("-" + mono)
                else:
                    out.append(f"{a}*{mono}")
            else:
                out.append(f"({str(coeff)})*{mono}")
        return out

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        from .scalar import _join_sum

        return _join_sum(self.monomial_strings())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"


class PhasePoly(SparsePoly):
    """Polynomial on the extended phase space (q0..q3, p0..p3, s)."""

    VARS: ClassVar[tuple[str, ...]] = ("q0", "q1", "q2", "q3", "p0", "p1", "p2", "p3", "s")

    __slots__ = ()


NVARS = len(PhasePoly.VARS)
Q_INDEX = (0, 1, 2, 3)
P_INDEX = (4, 5, 6, 7)
S_INDEX = 8


def q(mu: int) -> PhasePoly:
    """Position coordinate q^mu."""
    if mu not in (0, 1, 2, 3):
        raise DomainError(f"position index {mu} out of range")
    return PhasePoly.variable(Q_INDEX[mu])


def p(mu: int) -> PhasePoly:
    """Momentum coordinate p_mu (lower index)."""
    if mu not in (0, 1, 2, 3):
        raise DomainError(f"momentum index {mu} out of range")
    return PhasePoly.variable(P_INDEX[mu])


def s_var() -> PhasePoly:
    """The evolution parameter."""
    return PhasePoly.variable(S_INDEX)
