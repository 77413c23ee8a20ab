"""Free Dirac sector: Hamiltonian, energy and spin projectors, Wigner functions.

This sector lives on the spatial phase space with the standard signature; its
combined product couples the *spatial* Moyal sector to the Clifford sector.
(The coefficients here depend on momenta only, so the spatial and the full
four-dimensional Moyal sectors act identically; the distinction matters for
the printed convention, not the values.)  Spatial momentum components are
stored in the lower-index slots ``p1..p3`` and treated as plain Euclidean
3-vector entries; no Lorentz raising is applied inside this module.

Exactness requires eigenvalues in Q, which is why the shipped test points are
Pythagorean: (m, |p|, E) in {(3,4,5), (5,12,13), (8,15,17)}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .calculus import ProjectorSplit, projector_split
from .errors import DomainError, IrrationalEigenvalueError
from .multivector import Metric, Multivector, STANDARD
from .poly import PhasePoly, p
from .scalar import HALF, ScalarH, fraction_sqrt
from .products import ProductKind, clifford_star, mc_star


@dataclass(frozen=True)
class DiracSystem:
    """Mass, spatial momentum and the exact energy on the mass shell."""

    mass: Fraction
    momentum: tuple[Fraction, Fraction, Fraction]
    energy: Fraction
    metric: Metric = STANDARD

    def __post_init__(self):
        if self.mass <= 0:
            raise DomainError("mass must be positive")
        if self.energy <= 0 or self.energy**2 != self.mass**2 + sum(c * c for c in self.momentum):
            raise DomainError("energy must satisfy E^2 = p^2 + m^2 exactly")

    @classmethod
    def from_mass_momentum(cls, mass, momentum, metric: Metric = STANDARD) -> "DiracSystem":
        mass = Fraction(mass)
        momentum = tuple(Fraction(c) for c in momentum)
        e2 = mass**2 + sum(c * c for c in momentum)
        try:
            energy = fraction_sqrt(e2)
        except DomainError as exc:
            raise IrrationalEigenvalueError(
                f"E^2 = {e2} is not a rational square; pick a Pythagorean point"
            ) from exc
        return cls(mass=mass, momentum=momentum, energy=energy, metric=metric)


@dataclass(frozen=True)
class SpinAxis:
    """Unit 3-vector; must be orthogonal to the momentum it is paired with."""

    u: tuple[Fraction, Fraction, Fraction]

    def __post_init__(self):
        if sum(c * c for c in self.u) != 1:
            raise DomainError("spin axis must have unit length")

    @classmethod
    def of(cls, u) -> "SpinAxis":
        return cls(tuple(Fraction(c) for c in u))

    def orthogonal_to(self, system: DiracSystem) -> bool:
        return sum(a * b for a, b in zip(self.u, system.momentum)) == 0


# Exact on-shell catalogue used by the verification suites.
PYTHAGOREAN_POINTS: tuple[tuple[DiracSystem, SpinAxis], ...] = (
    (DiracSystem.from_mass_momentum(3, (0, 0, 4)), SpinAxis.of((1, 0, 0))),
    (DiracSystem.from_mass_momentum(3, (0, 0, 4)), SpinAxis.of((Fraction(3, 5), Fraction(4, 5), 0))),
    (DiracSystem.from_mass_momentum(5, (0, 12, 0)), SpinAxis.of((0, 0, 1))),
    (DiracSystem.from_mass_momentum(8, (15, 0, 0)), SpinAxis.of((0, 1, 0))),
)


def combined_star(a: Multivector, b: Multivector, metric: Metric = STANDARD) -> Multivector:
    """The sector's combined product: spatial Moyal on coefficients, Clifford on blades."""
    return mc_star(a, b, metric, moyal="moyal3")


def alpha_element(i: int, metric: Metric = STANDARD) -> Multivector:
    """The velocity operator g0 *C g_i (= g0g_i for a diagonal metric)."""
    if i not in (1, 2, 3):
        raise DomainError("alpha index must be spatial")
    return clifford_star(Multivector.gamma(0), Multivector.gamma(i), metric)


def dirac_hamiltonian(
    system: DiracSystem | None = None,
    metric: Metric = STANDARD,
    mass: Fraction | int = 1,
) -> Multivector:
    """alpha_i p^i + g0 m.

    With a system the momenta and mass are its exact numbers; without one the
    momenta stay symbolic (the stored spatial variables) and ``mass`` is a
    rational parameter.
    """
    if system is not None:
        metric = system.metric
        mass = system.mass
    out = Multivector.zero()
    for i in (1, 2, 3):
        coeff: PhasePoly = (
            p(i) if system is None else PhasePoly.constant(system.momentum[i - 1])
        )
        out = out + alpha_element(i, metric).scale(coeff)
    return out + Multivector.gamma(0).scale(PhasePoly.constant(Fraction(mass)))


def energy_projectors(system: DiracSystem) -> ProjectorSplit:
    """The pair (1 +- H/E)/2; exact because E is rational on the shell."""
    h = dirac_hamiltonian(system)
    return projector_split(
        h,
        ProductKind("moyal_clifford", system.metric),
        eigenvalue=ScalarH.rational(system.energy),
    )


def spin_operator(axis: SpinAxis, metric: Metric = STANDARD) -> Multivector:
    """(hb/2) gamma5 *C (u^i g_i); star-squares to (hb/2)^2."""
    direction = Multivector.zero()
    for i, c in zip((1, 2, 3), axis.u):
        direction = direction + Multivector.gamma(i).scale(PhasePoly.constant(c))
    half_hbar = ScalarH.hbar(1, Fraction(1, 2))
    return clifford_star(Multivector.gamma5(), direction, metric).scale(half_hbar)


def spin_projectors(axis: SpinAxis, metric: Metric = STANDARD) -> ProjectorSplit:
    """1/2 +- S_u/hb, the phase-space analogue of the spin projectors."""
    s_u = spin_operator(axis, metric)
    return projector_split(
        s_u,
        ProductKind("clifford", metric),
        eigenvalue=ScalarH.hbar(1, Fraction(1, 2)),
    )


@dataclass(frozen=True)
class CombinedProjectors:
    """The four Wigner functions labeled by (energy sign, spin sign)."""

    system: DiracSystem
    axis: SpinAxis
    table: dict[tuple[int, int], Multivector]

    def __iter__(self):
        return iter(sorted(self.table.items(), reverse=True))


def combined_projectors(system: DiracSystem, axis: SpinAxis) -> CombinedProjectors:
    """Products pi_(+-E) * pi_(+-1/2); idempotent, orthogonal, complete."""
    if not axis.orthogonal_to(system):
        raise DomainError("spin axis must be orthogonal to the momentum")
    energy = energy_projectors(system)
    spin = spin_projectors(axis, system.metric)
    table = {}
    for es, epi in ((1, energy.pi_plus), (-1, energy.pi_minus)):
        for ss, spi in ((1, spin.pi_plus), (-1, spin.pi_minus)):
            table[(es, ss)] = combined_star(epi, spi, system.metric)
    return CombinedProjectors(system=system, axis=axis, table=table)


def magnetic_spin_eigenfunctions(metric: Metric = STANDARD) -> tuple[Multivector, Multivector]:
    """Eigenfunctions (1 +- i g1g2)/2 of i g1g2; verified before returning."""
    op = Multivector.blade((1, 2), ScalarH.i())
    plus = Multivector.scalar(HALF) + op.scale(HALF)
    minus = Multivector.scalar(HALF) - op.scale(HALF)
    for w, sign in ((plus, 1), (minus, -1)):
        lhs = clifford_star(op, w, metric)
        rhs = w if sign > 0 else -w
        if lhs != rhs:
            raise AssertionError("spin eigenfunction identity failed; algebra is inconsistent")
    return plus, minus


def verify_dirac_point(system: DiracSystem, axis: SpinAxis) -> list[tuple[str, bool]]:
    """Full identity battery for one on-shell point; every check must pass."""
    checks: list[tuple[str, bool]] = []
    metric = system.metric
    one = Multivector.one()

    def eigencheck(op: Multivector, w: Multivector, value: ScalarH) -> bool:
        return (combined_star(op, w, metric) - w.scale(value)).is_zero

    h = dirac_hamiltonian(system)
    e = ScalarH.rational(system.energy)
    energy = energy_projectors(system)
    checks.append(("energy projectors complete", energy.pi_plus + energy.pi_minus == one))
    for label, pi in (("pi(+E)", energy.pi_plus), ("pi(-E)", energy.pi_minus)):
        checks.append((f"{label} idempotent", combined_star(pi, pi, metric) == pi))
    checks.append(
        ("energy projectors orthogonal", combined_star(energy.pi_plus, energy.pi_minus, metric).is_zero)
    )
    checks.append(("H * pi(+E) = +E pi(+E)", eigencheck(h, energy.pi_plus, e)))
    checks.append(("H * pi(-E) = -E pi(-E)", eigencheck(h, energy.pi_minus, -e)))

    s_u = spin_operator(axis, metric)
    half_hbar = ScalarH.hbar(1, Fraction(1, 2))
    spin = spin_projectors(axis, metric)
    checks.append(
        (
            "S*S = (hb/2)^2",
            clifford_star(s_u, s_u, metric) == Multivector.scalar(half_hbar * half_hbar),
        )
    )
    checks.append(("spin projectors complete", spin.pi_plus + spin.pi_minus == one))
    checks.append(
        ("spin projectors orthogonal", clifford_star(spin.pi_plus, spin.pi_minus, metric).is_zero)
    )
    checks.append(("S * pi(+1/2) = +hb/2 pi(+1/2)", eigencheck(s_u, spin.pi_plus, half_hbar)))
    checks.append(("S * pi(-1/2) = -hb/2 pi(-1/2)", eigencheck(s_u, spin.pi_minus, -half_hbar)))
    checks.append(
        ("[H, S] = 0", (combined_star(h, s_u, metric) - combined_star(s_u, h, metric)).is_zero)
    )

    combined = combined_projectors(system, axis)
    total = Multivector.zero()
    for (es, ss), pi in combined:
        tag = f"pi({'+' if es > 0 else '-'}E,{'+' if ss > 0 else '-'}1/2)"
        total = total + pi
        checks.append((f"{tag} idempotent", combined_star(pi, pi, metric) == pi))
        checks.append((f"H * {tag} eigenvalue", eigencheck(h, pi, e.scale(es))))
        checks.append((f"S * {tag} eigenvalue", eigencheck(s_u, pi, half_hbar.scale(ss))))
    checks.append(("four projectors complete", total == one))
    keys = sorted(combined.table, reverse=True)
    for a_i in range(len(keys)):
        for b_i in range(a_i + 1, len(keys)):
            pa, pb = combined.table[keys[a_i]], combined.table[keys[b_i]]
            checks.append(
                (f"pi{keys[a_i]} orth pi{keys[b_i]}", combined_star(pa, pb, metric).is_zero)
            )
    return checks
