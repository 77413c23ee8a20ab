"""Seeded random instances for property checks; deterministic across runs."""

from __future__ import annotations

import random
from fractions import Fraction

from .multivector import ALL_MASKS, Multivector
from .poly import PhasePoly
from .scalar import ScalarH


def random_rational(rng: random.Random, span: int = 5) -> Fraction:
    num = rng.randint(-span, span)
    den = rng.randint(1, 4)
    return Fraction(num, den)


def random_scalar(rng: random.Random, allow_hbar: bool = True, allow_i: bool = True) -> ScalarH:
    re = random_rational(rng)
    im = random_rational(rng) if allow_i and rng.random() < 0.4 else Fraction(0)
    power = rng.randint(0, 2) if allow_hbar and rng.random() < 0.3 else 0
    out = ScalarH.hbar(power, re, im)
    if out.is_zero:
        return ScalarH.one()
    return out


def random_phase_poly(
    rng: random.Random,
    degree: int = 3,
    terms: int = 3,
    allow_hbar: bool = False,
    allow_s: bool = False,
    variables: tuple[int, ...] = tuple(range(8)),
) -> PhasePoly:
    pool = variables + ((8,) if allow_s else ())
    out = PhasePoly.zero()
    for _ in range(terms):
        exps = [0] * 9
        for _ in range(rng.randint(0, degree)):
            exps[rng.choice(pool)] += 1
        out = out + PhasePoly({tuple(exps): random_scalar(rng, allow_hbar=allow_hbar)})
    return out


def random_multivector(
    rng: random.Random,
    degree: int = 3,
    terms: int = 2,
    blades: int = 3,
    allow_hbar: bool = False,
    constant: bool = False,
) -> Multivector:
    comp = {}
    for mask in rng.sample(ALL_MASKS, k=min(blades, len(ALL_MASKS))):
        if constant:
            comp[mask] = PhasePoly.constant(random_scalar(rng, allow_hbar=allow_hbar))
        else:
            comp[mask] = random_phase_poly(rng, degree=degree, terms=terms, allow_hbar=allow_hbar)
    return Multivector(comp)
