"""Named verification suites driven by the CLI and the acceptance tests.

Every suite aggregates exact residual checks (and, where a finite
transformation is involved, float checks with pinned tolerances) into a
deterministic :class:`~starprod.report.CheckReport`.  Random instances use
fixed seeds so two runs produce identical bytes.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from .dirac import (
    PYTHAGOREAN_POINTS,
    alpha_element,
    dirac_hamiltonian,
    magnetic_spin_eigenfunctions,
    verify_dirac_point,
)
from .errors import DomainError
from .lorentz import (
    active_algebra_check,
    active_matrix,
    active_transform,
    alpha_table,
    boost_alpha,
    minkowski_gram,
    passive_algebra_check,
    passive_alpha_from_active,
    passive_transform,
    poincare_check,
    rotation_alpha,
)
from .mechanics import (
    CovariantHamiltonian,
    classical_limit_check,
    homogeneous_b_potential,
    kinetic_commutator,
    kinetic_commutator_expected,
    kinetic_square_derivative,
    lorentz_force_residual,
    poisson_bracket,
    spin_hamiltonian,
    spin_term_expected,
)
from .multivector import Multivector, NONSTANDARD, STANDARD
from .poly import PhasePoly, Q_INDEX, p, q
from .products import ProductKind, mc_star, star_anticommutator
from .randgen import random_phase_poly
from .report import CheckReport
from .scalar import ScalarH


def _random_alpha(rng: random.Random, scale: float = 1.0):
    entries = {}
    for mu in range(4):
        for nu in range(mu + 1, 4):
            entries[(mu, nu)] = Fraction(rng.uniform(-scale / 2, scale / 2)).limit_denominator(
                10_000
            )
    return alpha_table(entries)


def suite_dirac() -> CheckReport:
    report = CheckReport(name="dirac")
    metric = STANDARD
    one = Multivector.one()
    ckind = ProductKind("clifford", metric)

    beta = Multivector.gamma(0)
    report.add("beta *C beta = 1", mc_star(beta, beta, metric) == one)
    for i in (1, 2, 3):
        a_i = alpha_element(i, metric)
        report.add(f"alpha{i} *C alpha{i} = 1", mc_star(a_i, a_i, metric) == one)
        report.add(
            f"{{beta, alpha{i}}} = 0", star_anticommutator(beta, a_i, ckind).is_zero
        )
        for j in (1, 2, 3):
            expected = Multivector.scalar(2 if i == j else 0)
            report.add(
                f"{{alpha{i}, alpha{j}}} = 2 delta",
                star_anticommutator(a_i, alpha_element(j, metric), ckind) == expected,
            )

    h_sym = dirac_hamiltonian(mass=1)
    shell = Multivector.scalar(p(1) ** 2 + p(2) ** 2 + p(3) ** 2 + 1)
    report.add("H *MC H = p^2 + m^2 (symbolic)", mc_star(h_sym, h_sym, metric) == shell)

    for system, axis in PYTHAGOREAN_POINTS:
        tag = f"m={system.mass}, p={tuple(map(str, system.momentum))}, u={tuple(map(str, axis.u))}"
        for label, ok in verify_dirac_point(system, axis):
            report.add(f"[{tag}] {label}", ok)

    w_plus, w_minus = magnetic_spin_eigenfunctions(metric)
    report.add("magnetic eigenfunctions complete", w_plus + w_minus == one)
    report.add(
        "magnetic eigenfunctions idempotent",
        mc_star(w_plus, w_plus, metric) == w_plus
        and mc_star(w_minus, w_minus, metric) == w_minus,
    )
    return report


def suite_lorentz() -> CheckReport:
    report = CheckReport(name="lorentz")
    for metric in (NONSTANDARD, STANDARD):
        for sub in (passive_algebra_check(metric), active_algebra_check(metric)):
            for check in sub.checks:
                report.add(f"({metric}) {check.label}", check.passed)

    metric = NONSTANDARD
    eta = minkowski_gram(metric)

    import math

    out = active_transform((1.0, 0.0, 0.0, 0.0), boost_alpha(Fraction(1, 2), 1, metric), metric)
    boost_err = max(
        abs(out[0] - math.cosh(0.5)), abs(out[1] - math.sinh(0.5)), abs(out[2]), abs(out[3])
    )
    report.add("boost rapidity 1/2 mixes cosh/sinh", boost_err < 1e-12, f"err={boost_err:.2e}")

    rng = random.Random(1601)
    worst = 0.0
    for _ in range(100):
        lam = active_matrix(_random_alpha(rng), metric)
        worst = max(worst, float(np.max(np.abs(lam.T @ eta @ lam - eta))))
    report.add("Lambda^T eta Lambda = eta (100 random)", worst < 1e-12, f"err={worst:.2e}")

    lam_rot = active_matrix(rotation_alpha(Fraction(2, 3), (1, 2), metric), metric)
    det_err = abs(float(np.linalg.det(lam_rot)) - 1.0)
    report.add("rotation determinant = 1", det_err < 1e-12, f"err={det_err:.2e}")

    coords = (1.0, 0.25, -0.5, 0.75)
    basis = Multivector.zero()
    for mu, c in enumerate(coords):
        basis = basis + Multivector.gamma(mu).scale(Fraction(c))
    worst = 0.0
    for _ in range(20):
        alpha = _random_alpha(rng, scale=0.8)
        active_out = active_transform(coords, alpha, metric)
        transformed = passive_transform(basis, passive_alpha_from_active(alpha, metric), metric)
        passive_out = [
            float(transformed.component((mu,)).constant_value().rational_value())
            if not transformed.component((mu,)).is_zero
            else 0.0
            for mu in range(4)
        ]
        worst = max(worst, max(abs(a - b) for a, b in zip(active_out, passive_out)))
    report.add("passive/active agreement (20 random)", worst < 1e-10, f"err={worst:.2e}")
    return report


def suite_poincare() -> CheckReport:
    report = CheckReport(name="poincare")
    for metric in (NONSTANDARD, STANDARD):
        sub = poincare_check(metric)
        for check in sub.checks:
            report.add(f"({metric}) {check.label}", check.passed)
    return report


def suite_classical_limit(count: int = 100, seed: int = 20406) -> CheckReport:
    report = CheckReport(name="classical-limit")
    for mu in range(4):
        for nu in range(4):
            expected = PhasePoly.one() if mu == nu else PhasePoly.zero()
            report.add(f"{{q{mu}, p{nu}}} = delta", poisson_bracket(q(mu), p(nu)) == expected)
            report.add(f"{{q{mu}, q{nu}}} = 0", poisson_bracket(q(mu), q(nu)).is_zero)
            report.add(f"{{p{mu}, p{nu}}} = 0", poisson_bracket(p(mu), p(nu)).is_zero)

    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        f = random_phase_poly(rng, degree=4, terms=3)
        g = random_phase_poly(rng, degree=4, terms=3)
        if not classical_limit_check(f, g):
            failures += 1
    report.add(
        f"commutator/ i hb -> bracket on {count} random pairs",
        failures == 0,
        f"{failures} failures",
    )

    free = CovariantHamiltonian.free(1)
    report.add(
        "free flow: momenta conserved",
        all(r.is_zero for r in lorentz_force_residual(free)),
    )
    rng2 = random.Random(seed + 1)
    for name, potentials in (
        ("homogeneous B3", homogeneous_b_potential(1)),
        (
            "random quadratic gauge",
            tuple(
                random_phase_poly(rng2, degree=2, terms=2, variables=Q_INDEX) for _ in range(4)
            ),
        ),
    ):
        ham = CovariantHamiltonian.charged(1, 1, potentials)
        report.add(
            f"force law residual = 0 ({name})",
            all(r.is_zero for r in lorentz_force_residual(ham)),
        )
        report.add(
            f"d/ds pi.pi = 0 ({name})", kinetic_square_derivative(ham).is_zero
        )
    return report


def suite_spin(count: int = 20, seed: int = 515) -> CheckReport:
    report = CheckReport(name="spin")
    rng = random.Random(seed)

    potentials = homogeneous_b_potential(1)
    actual = kinetic_commutator(potentials, 1)
    expected = kinetic_commutator_expected(potentials, 1)
    report.add(
        "[pi_mu, pi_nu] = i hb e F (homogeneous B3)",
        all(actual[key] == expected[key] for key in actual),
    )

    failures = 0
    for _ in range(count):
        charge = Fraction(rng.randint(1, 3), rng.randint(1, 2))
        pots = tuple(
            random_phase_poly(rng, degree=rng.choice((1, 2)), terms=2, variables=Q_INDEX)
            for _ in range(4)
        )
        actual = kinetic_commutator(pots, charge)
        expected = kinetic_commutator_expected(pots, charge)
        if not all(actual[key] == expected[key] for key in actual):
            failures += 1
    report.add(
        f"[pi_mu, pi_nu] = i hb e F ({count} random gauges)", failures == 0, f"{failures} failures"
    )

    for metric in (STANDARD, NONSTANDARD):
        k_full = spin_hamiltonian(potentials, 1, 1, metric)
        want = spin_term_expected(potentials, 1, 1, metric)
        half_ihbar = Multivector.blade((1, 2), ScalarH.hbar(1, 0, Fraction(1, 2)))
        report.add(
            f"spin term = i (e hb / 2m) B3 g1g2 ({metric})",
            k_full.grade_project(2) == want and k_full.grade_project(2) == half_ihbar,
        )
        report.add(
            f"spin term odd grades vanish ({metric})",
            k_full.grade_project(1).is_zero and k_full.grade_project(3).is_zero,
        )

    chi = random_phase_poly(rng, degree=3, terms=3, variables=Q_INDEX)
    gauge_pots = tuple(chi.partial(Q_INDEX[mu]) for mu in range(4))
    k_gauge = spin_hamiltonian(gauge_pots, 1, 1)
    report.add("pure gauge has no spin term", k_gauge.grade_project(2).is_zero)

    for metric in (STANDARD, NONSTANDARD):
        try:
            magnetic_spin_eigenfunctions(metric)
            report.add(f"i g1g2 eigenfunctions verified ({metric})", True)
        except AssertionError:
            report.add(f"i g1g2 eigenfunctions verified ({metric})", False)
    return report


SUITES = {
    "dirac": suite_dirac,
    "lorentz": suite_lorentz,
    "poincare": suite_poincare,
    "classical-limit": suite_classical_limit,
    "spin": suite_spin,
}


def run_suite(name: str) -> CheckReport:
    try:
        factory = SUITES[name]
    except KeyError:
        raise DomainError(
            f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))} or 'all'"
        ) from None
    return factory()


def run_all() -> list[CheckReport]:
    return [SUITES[name]() for name in ("dirac", "lorentz", "poincare", "classical-limit", "spin")]
