"""Parametrized relativistic mechanics: brackets, flows, fields and the integrator.

All four spacetime coordinates are dynamical; evolution runs in the invariant
parameter ``s``.  The symbolic layer is exact (bracket algebra, force law,
classical-limit and kinetic-commutator checks, Legendre transform); the
numerical layer is a fixed-step RK4 integrator in binary64 that monitors, but
never enforces, conservation of the squared kinetic momentum.

The module defaults to the standard signature so that timelike on-shell data
satisfies ``p.p = m^2``; everything takes the metric as a parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isfinite
from typing import Callable, ClassVar, Sequence

from .errors import DomainError, IntegrationDivergedError
from .multivector import Metric, Multivector, STANDARD
from .poly import PhasePoly, P_INDEX, Q_INDEX, SparsePoly, p, q
from .products import mc_star, moyal_commutator_poly
from .scalar import ScalarH

# -- bracket ---------------------------------------------------------------


def poisson_bracket(f: PhasePoly, g: PhasePoly) -> PhasePoly:
    """Four-space bracket: sum over all (q^mu, p_mu) conjugate pairs."""
    out = PhasePoly.zero()
    for mu in range(4):
        out = out + f.partial(Q_INDEX[mu]) * g.partial(P_INDEX[mu])
        out = out - f.partial(P_INDEX[mu]) * g.partial(Q_INDEX[mu])
    return out


def classical_limit_check(f: PhasePoly, g: PhasePoly) -> bool:
    """Does (1/i hb)[f, g] reduce to the Poisson bracket at hb -> 0?"""
    lhs = moyal_commutator_poly(f, g).div_ihbar().at_hbar_zero()
    return lhs == poisson_bracket(f, g)


# -- covariant Hamiltonian ---------------------------------------------------


@dataclass(frozen=True)
class CovariantHamiltonian:
    """Charged-particle generator K = (1/2m) eta^mu_nu pi_mu pi_nu.

    Potentials are polynomials in the positions only; the free particle is
    the zero-potential case.
    """

    mass: Fraction
    charge: Fraction
    potentials: tuple[PhasePoly, PhasePoly, PhasePoly, PhasePoly]
    metric: Metric = STANDARD

    def __post_init__(self):
        if self.mass <= 0:
            raise DomainError("mass must be positive")
        for a_mu in self.potentials:
            if any(a_mu.uses_variable(idx) for idx in P_INDEX) or a_mu.uses_variable("s"):
                raise DomainError("potentials must depend on the positions only")

    @classmethod
    def free(cls, mass=1, metric: Metric = STANDARD) -> "CovariantHamiltonian":
        zero = PhasePoly.zero()
        return cls(Fraction(mass), Fraction(0), (zero, zero, zero, zero), metric)

    @classmethod
    def charged(cls, mass, charge, potentials, metric: Metric = STANDARD) -> "CovariantHamiltonian":
        return cls(Fraction(mass), Fraction(charge), tuple(potentials), metric)

    def kinetic_momentum(self, mu: int) -> PhasePoly:
        return p(mu) - self.potentials[mu].scale(self.charge)

    def kinetic_square(self) -> PhasePoly:
        """pi_mu pi^mu, the conserved mass-shell quadratic."""
        out = PhasePoly.zero()
        for mu in range(4):
            pi = self.kinetic_momentum(mu)
            out = out + (pi * pi).scale(Fraction(self.metric.diag[mu]))
        return out

    def hamiltonian(self) -> PhasePoly:
        return self.kinetic_square().scale(Fraction(1, 2 * self.mass))


def homogeneous_b_potential(b3) -> tuple[PhasePoly, PhasePoly, PhasePoly, PhasePoly]:
    """Symmetric-gauge potential of a constant magnetic field along the 3-axis."""
    b3 = Fraction(b3)
    return (
        PhasePoly.zero(),
        q(2).scale(-b3 / 2),
        q(1).scale(b3 / 2),
        PhasePoly.zero(),
    )


def field_tensor(potentials: Sequence[PhasePoly]) -> dict[tuple[int, int], PhasePoly]:
    """F(mu,nu) = d_mu A_nu - d_nu A_mu; antisymmetric by construction."""
    f = {}
    for mu in range(4):
        for nu in range(4):
            f[(mu, nu)] = potentials[nu].partial(Q_INDEX[mu]) - potentials[mu].partial(Q_INDEX[nu])
    return f


def _scalar_hamiltonian(k) -> PhasePoly:
    if isinstance(k, CovariantHamiltonian):
        return k.hamiltonian()
    if isinstance(k, PhasePoly):
        return k
    if isinstance(k, Multivector):
        if k.grades() - {0}:
            raise DomainError("classical flow needs a grade-0 generator")
        return k.scalar_part()
    raise DomainError(f"cannot interpret {type(k).__name__} as a Hamiltonian")


def hamilton_rhs(k) -> tuple[tuple[PhasePoly, ...], tuple[PhasePoly, ...]]:
    """(dq^mu/ds, dp_mu/ds) = (dK/dp_mu, -dK/dq^mu) as exact polynomials."""
    ham = _scalar_hamiltonian(k)
    qdot = tuple(ham.partial(P_INDEX[mu]) for mu in range(4))
    pdot = tuple(-ham.partial(Q_INDEX[mu]) for mu in range(4))
    return qdot, pdot


def s_derivative(f: PhasePoly, k) -> PhasePoly:
    """Total derivative along the flow: {f, K} plus the explicit s-dependence."""
    ham = _scalar_hamiltonian(k)
    return poisson_bracket(f, ham) + f.partial("s")


def lorentz_force_residual(ham: CovariantHamiltonian) -> list[PhasePoly]:
    """pi-dot minus the field force along the flow; identically zero when consistent."""
    f = field_tensor(ham.potentials)
    qdot, _ = hamilton_rhs(ham)
    residuals = []
    for mu in range(4):
        pi_dot = s_derivative(ham.kinetic_momentum(mu), ham)
        force = PhasePoly.zero()
        for nu in range(4):
            force = force + f[(mu, nu)] * qdot[nu]
        residuals.append(pi_dot - force.scale(ham.charge))
    return residuals


def kinetic_square_derivative(ham: CovariantHamiltonian) -> PhasePoly:
    """d/ds of pi.pi along the flow; vanishes identically (mass-shell conservation)."""
    return s_derivative(ham.kinetic_square(), ham)


def kinetic_commutator(
    potentials: Sequence[PhasePoly], charge, metric: Metric = STANDARD
) -> dict[tuple[int, int], PhasePoly]:
    """Moyal commutators [pi_mu, pi_nu]; equal i hb e F_mu_nu for any polynomial gauge."""
    charge = Fraction(charge)
    pis = [p(mu) - potentials[mu].scale(charge) for mu in range(4)]
    return {
        (mu, nu): moyal_commutator_poly(pis[mu], pis[nu])
        for mu in range(4)
        for nu in range(4)
    }


def kinetic_commutator_expected(
    potentials: Sequence[PhasePoly], charge
) -> dict[tuple[int, int], PhasePoly]:
    ihbar_e = ScalarH.hbar(1, 0, 1).scale(Fraction(charge))
    f = field_tensor(potentials)
    return {key: poly.scale(ihbar_e) for key, poly in f.items()}


def spin_hamiltonian(
    potentials: Sequence[PhasePoly], charge, mass, metric: Metric = STANDARD
) -> Multivector:
    """(1/2m) pi *MC pi with pi = pi^mu g_mu: scalar part plus the spin bivector.

    The grade-2 part equals (i hb e / 4m) F^mu^nu g_mu g_nu; the grade-0 part
    is the classical generator.
    """
    charge = Fraction(charge)
    mass = Fraction(mass)
    pi_vec = Multivector.zero()
    for mu in range(4):
        pi_upper = (p(mu) - potentials[mu].scale(charge)).scale(Fraction(metric.diag[mu]))
        pi_vec = pi_vec + Multivector.gamma(mu).scale(pi_upper)
    return mc_star(pi_vec, pi_vec, metric).scale(ScalarH.rational(Fraction(1, 2 * mass)))


def spin_term_expected(
    potentials: Sequence[PhasePoly], charge, mass, metric: Metric = STANDARD
) -> Multivector:
    """(i hb e / 2m) sum_(mu<nu) F^mu^nu g_mu g_nu, from the field tensor alone."""
    charge = Fraction(charge)
    mass = Fraction(mass)
    f = field_tensor(potentials)
    weight = ScalarH.hbar(1, 0, 1).scale(charge / (2 * mass))
    out = Multivector.zero()
    for mu in range(4):
        for nu in range(mu + 1, 4):
            f_up = f[(mu, nu)].scale(Fraction(metric.diag[mu] * metric.diag[nu]))
            out = out + Multivector.blade((mu, nu), f_up.scale(weight))
    return out


# -- Lagrangian side ----------------------------------------------------------


class LagrangePoly(SparsePoly):
    """Phase-space ring extended by the four formal velocities v0..v3."""

    VARS: ClassVar[tuple[str, ...]] = PhasePoly.VARS + ("v0", "v1", "v2", "v3")

    __slots__ = ()

    @classmethod
    def from_phase(cls, poly: PhasePoly) -> "LagrangePoly":
        return cls({exps + (0, 0, 0, 0): c for exps, c in poly.terms()})

    def to_phase(self) -> PhasePoly:
        terms = {}
        for exps, c in self.terms():
            if any(exps[len(PhasePoly.VARS):]):
                raise DomainError("polynomial still depends on a velocity")
            terms[exps[: len(PhasePoly.VARS)]] = c
        return PhasePoly(terms)


def velocity(mu: int) -> LagrangePoly:
    return LagrangePoly.variable(f"v{mu}")


def free_lagrangian(mass, metric: Metric = STANDARD) -> LagrangePoly:
    """(m/2) eta_mu_nu v^mu v^nu."""
    mass = Fraction(mass)
    out = LagrangePoly.zero()
    for mu in range(4):
        v = velocity(mu)
        out = out + (v * v).scale(mass * metric.diag[mu] / 2)
    return out


def charged_lagrangian(mass, charge, potentials, metric: Metric = STANDARD) -> LagrangePoly:
    """Free part plus the minimal coupling e v^mu A_mu(q)."""
    out = free_lagrangian(mass, metric)
    charge = Fraction(charge)
    for mu in range(4):
        out = out + (velocity(mu) * LagrangePoly.from_phase(potentials[mu])).scale(charge)
    return out


def _invert_rational_matrix(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise DomainError("velocity Hessian is singular; Legendre transform undefined")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def legendre_transform(lagrangian: LagrangePoly) -> tuple[PhasePoly, list[LagrangePoly]]:
    """Covariant Hamiltonian of a velocity-quadratic Lagrangian.

    Returns (K, momenta) with momenta[mu] = dL/dv^mu still in the extended
    ring.  The velocity Hessian must be constant and invertible.
    """
    momenta = [lagrangian.partial(f"v{mu}") for mu in range(4)]
    hessian = []
    for mu in range(4):
        row = []
        for nu in range(4):
            h = momenta[mu].partial(f"v{nu}")
            if not h.is_constant():
                raise DomainError("Lagrangian is not quadratic in the velocities")
            row.append(h.constant_value().rational_value() if not h.is_zero else Fraction(0))
        hessian.append(row)
    inverse = _invert_rational_matrix(hessian)
    offsets = [m.substitute({f"v{nu}": 0 for nu in range(4)}) for m in momenta]
    v_solution = []
    for mu in range(4):
        v = LagrangePoly.zero()
        for nu in range(4):
            if inverse[mu][nu]:
                v = v + (LagrangePoly.variable(f"p{nu}") - offsets[nu]).scale(inverse[mu][nu])
        v_solution.append(v)
    subs = {f"v{mu}": v_solution[mu] for mu in range(4)}
    k_ext = LagrangePoly.zero()
    for mu in range(4):
        k_ext = k_ext + v_solution[mu] * LagrangePoly.variable(f"p{mu}")
    k_ext = k_ext - lagrangian.substitute_polys(subs)
    return k_ext.to_phase(), momenta


def euler_lagrange_check(lagrangian: LagrangePoly) -> list[PhasePoly]:
    """Residual of the variational equation along the Hamiltonian flow.

    Substituting the flow velocities into d/ds(dL/dv^mu) - dL/dq^mu must give
    the zero polynomial for every mu; any nonzero entry marks an inconsistency
    between the two formulations.
    """
    k, momenta = legendre_transform(lagrangian)
    qdot, _ = hamilton_rhs(k)
    flow_subs = {f"v{mu}": LagrangePoly.from_phase(qdot[mu]) for mu in range(4)}
    residuals = []
    for mu in range(4):
        p_onshell = momenta[mu].substitute_polys(flow_subs).to_phase()
        dl_dq = lagrangian.partial(f"q{mu}").substitute_polys(flow_subs).to_phase()
        residuals.append(s_derivative(p_onshell, k) - dl_dq)
    return residuals


# -- numerical layer -----------------------------------------------------------


@dataclass
class Trajectory:
    """Sampled phase-space path, strictly increasing in s by the fixed step."""

    samples: list[tuple[float, tuple[float, float, float, float], tuple[float, float, float, float]]]
    step: float
    method: str = "rk4"
    pi2_drift: list[float] = field(default_factory=list)

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("s,q0,q1,q2,q3,p0,p1,p2,p3,pi2_drift\n")
            for (s_val, qs, ps), drift in zip(self.samples, self.pi2_drift):
                row = [s_val, *qs, *ps, drift]
                fh.write(",".join(repr(float(x)) for x in row) + "\n")


def _compile_poly(poly: PhasePoly) -> Callable[[Sequence[float]], float]:
    data = []
    for exps, coeff in poly.terms():
        z = coeff.complex_value()
        if z.imag:
            raise DomainError("numeric lane needs real coefficients")
        powers = tuple((idx, e) for idx, e in enumerate(exps[:8]) if e)
        if exps[8]:
            raise DomainError("numeric lane does not evolve explicit s-dependence")
        data.append((z.real, powers))

    def evaluate(state: Sequence[float]) -> float:
        total = 0.0
        for c, powers in data:
            acc = c
            for idx, e in powers:
                acc *= state[idx] ** e
            total += acc
        return total

    return evaluate


def integrate(
    ham: CovariantHamiltonian,
    q0: Sequence[float],
    p0: Sequence[float],
    s_max: float,
    step: float,
) -> Trajectory:
    """Classical fixed-step RK4 integration of the parametrized Hamilton equations."""
    if step <= 0:
        raise DomainError("step must be positive")
    qdot, pdot = hamilton_rhs(ham)
    rhs_fns = [_compile_poly(poly) for poly in (*qdot, *pdot)]
    pi2_fn = _compile_poly(ham.kinetic_square())

    def rhs(state):
        return [f(state) for f in rhs_fns]

    state = [float(x) for x in (*q0, *p0)]
    n_steps = max(1, round(s_max / step))
    pi2_0 = pi2_fn(state)

    def snapshot(i, st):
        return (i * step, tuple(st[:4]), tuple(st[4:]))

    samples = [snapshot(0, state)]
    drift = [0.0]
    for i in range(1, n_steps + 1):
        k1 = rhs(state)
        k2 = rhs([x + 0.5 * step * d for x, d in zip(state, k1)])
        k3 = rhs([x + 0.5 * step * d for x, d in zip(state, k2)])
        k4 = rhs([x + step * d for x, d in zip(state, k3)])
        state = [
            x + step / 6.0 * (a + 2 * b + 2 * c + d)
            for x, a, b, c, d in zip(state, k1, k2, k3, k4)
        ]
        if not all(isfinite(x) for x in state):
            raise IntegrationDivergedError(
                f"non-finite state at s = {i * step}", last_sample=samples[-1]
            )
        samples.append(snapshot(i, state))
        drift.append(pi2_fn(state) - pi2_0)
    return Trajectory(samples=samples, step=step, pi2_drift=drift)
