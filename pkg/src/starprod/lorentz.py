"""Lorentz generators on both sides of the formalism, plus finite transformations.

Passive generators are spacetime bivectors acting on the basis vectors by
Clifford conjugation; active generators are quadratic phase-space polynomials
acting on coefficients through Moyal commutators.  Both close on the same
matrix algebra: the adjoint action of the active side on linear functions is a
4x4 matrix ``G``, the finite map is ``exp(G)``, and a matched parameter
convention (see :func:`passive_alpha_from_active`) makes the two finite
transformations identical.

Everything symbolic here is exact; floats enter only through the matrix
exponential of ``G`` (scaling and squaring) and through the closed-form rotor
coefficients cosh/sinh/cos/sin.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import cos, cosh, factorial, sin, sinh, sqrt

import numpy as np
from scipy.linalg import expm

from .errors import DomainError
from .multivector import Metric, Multivector, NONSTANDARD, grade_of
from .poly import PhasePoly, Q_INDEX, p, q
from .report import CheckReport
from .products import (
    ProductKind,
    clifford_star,
    moyal_commutator_poly,
    star_commutator,
)
from .scalar import ScalarH

AlphaTable = tuple[tuple[Fraction, ...], ...]

_EPS3 = {}
for _i, _j, _k, _s in (
    (1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1),
    (2, 1, 3, -1), (3, 2, 1, -1), (1, 3, 2, -1),
):
    _EPS3[(_i, _j, _k)] = _s


def epsilon3(i: int, j: int, k: int) -> int:
    return _EPS3.get((i, j, k), 0)


def alpha_table(entries: dict[tuple[int, int], Fraction | int]) -> AlphaTable:
    """Antisymmetric parameter table from the independent entries mu < nu."""
    m = [[Fraction(0)] * 4 for _ in range(4)]
    for (mu, nu), val in entries.items():
        if mu == nu:
            raise DomainError("diagonal parameters must vanish")
        val = Fraction(val)
        m[mu][nu] += val
        m[nu][mu] -= val
    return tuple(tuple(row) for row in m)


def _check_antisymmetric(alpha: AlphaTable) -> None:
    for mu in range(4):
        for nu in range(4):
            if alpha[mu][nu] != -alpha[nu][mu]:
                raise DomainError("parameter table must be antisymmetric")


# -- passive (Clifford) side ---------------------------------------------------


@dataclass(frozen=True)
class PassiveGenerators:
    """Bivector generators: sigma(mu,nu), boosts K_i = sigma_0i/2, rotations L_i."""

    metric: Metric
    sigma: dict[tuple[int, int], Multivector]
    boosts: tuple[Multivector, Multivector, Multivector]
    rotations: tuple[Multivector, Multivector, Multivector]

    def sigma_at(self, mu: int, nu: int) -> Multivector:
        if mu == nu:
            return Multivector.zero()
        if mu < nu:
            return self.sigma[(mu, nu)]
        return -self.sigma[(nu, mu)]


def passive_generators(metric: Metric) -> PassiveGenerators:
    i4 = Multivector.pseudoscalar()
    ckind = ProductKind("clifford", metric)
    half = Fraction(1, 2)
    sigma: dict[tuple[int, int], Multivector] = {}
    for mu in range(4):
        for nu in range(mu + 1, 4):
            comm = star_commutator(Multivector.gamma(mu), Multivector.gamma(nu), ckind)
            sigma[(mu, nu)] = clifford_star(i4.scale(half), comm, metric)
    boosts = tuple(sigma[(0, i)].scale(half) for i in (1, 2, 3))
    rotations = []
    for i in (1, 2, 3):
        acc = Multivector.zero()
        for j in (1, 2, 3):
            for k in (1, 2, 3):
                if j < k and epsilon3(i, j, k):
                    acc = acc + sigma[(j, k)].scale(Fraction(epsilon3(i, j, k), 2))
        rotations.append(acc)
    return PassiveGenerators(metric=metric, sigma=sigma, boosts=boosts, rotations=tuple(rotations))


def passive_algebra_check(metric: Metric) -> CheckReport:
    """Commutator table of the passive boosts and rotations.

    With the nonstandard signature the structure constants carry the
    pseudoscalar; the standard signature flips its sign.
    """
    gen = passive_generators(metric)
    ckind = ProductKind("clifford", metric)
    i4 = Multivector.pseudoscalar()
    if metric.signature == "standard":
        i4 = -i4
    report = CheckReport(name=f"passive algebra ({metric})")
    L, K = gen.rotations, gen.boosts

    def res_zero(label: str, lhs: Multivector, rhs: Multivector) -> None:
        report.add(label, (lhs - rhs).is_zero)

    for i in (1, 2, 3):
        for j in (1, 2, 3):
            eps_sum_L = Multivector.zero()
            eps_sum_K = Multivector.zero()
            for k in (1, 2, 3):
                e = epsilon3(i, j, k)
                if e:
                    eps_sum_L = eps_sum_L + L[k - 1].scale(Fraction(e))
                    eps_sum_K = eps_sum_K + K[k - 1].scale(Fraction(e))
            res_zero(
                f"[L{i}, L{j}] = -I4 eps L",
                star_commutator(L[i - 1], L[j - 1], ckind),
                -clifford_star(i4, eps_sum_L, metric),
            )
            res_zero(
                f"[L{i}, K{j}] = -I4 eps K",
                star_commutator(L[i - 1], K[j - 1], ckind),
                -clifford_star(i4, eps_sum_K, metric),
            )
            res_zero(
                f"[K{i}, K{j}] = +I4 eps L",
                star_commutator(K[i - 1], K[j - 1], ckind),
                clifford_star(i4, eps_sum_L, metric),
            )
    return report


def rotor_exponent(alpha: AlphaTable, metric: Metric) -> Multivector:
    """The bivector (1/4) I4 * (alpha^mu_nu sigma_mu_nu), summed over all indices."""
    _check_antisymmetric(alpha)
    gen = passive_generators(metric)
    acc = Multivector.zero()
    for mu in range(4):
        for nu in range(4):
            if alpha[mu][nu]:
                acc = acc + gen.sigma_at(mu, nu).scale(alpha[mu][nu])
    i4 = Multivector.pseudoscalar()
    return clifford_star(i4.scale(Fraction(1, 4)), acc, metric)


def _reversal(a: Multivector) -> Multivector:
    comp = {}
    for blade, poly in a.components():
        g = blade.grade
        sign = -1 if (g * (g - 1) // 2) % 2 else 1
        comp[blade.mask] = poly if sign > 0 else -poly
    return Multivector(comp)


def _mv_float_norm(a: Multivector) -> float:
    total = 0.0
    for _, poly in a.components():
        for _, coeff in poly.terms():
            for _, re, im in coeff.terms():
                total += abs(float(re)) + abs(float(im))
    return total


def clifford_rotor(b: Multivector, metric: Metric) -> Multivector:
    """Exponential of a bivector under the Clifford product.

    When ``b`` squares to a constant scalar the series resums in closed form
    (circular or hyperbolic, with binary64 coefficients embedded exactly in
    Q); otherwise the series is summed until the term norm is negligible.
    """
    square = clifford_star(b, b, metric)
    if square.is_scalar() and square.scalar_part().is_constant():
        v_scalar = square.constant_scalar()
        if v_scalar.is_rational():
            v = float(v_scalar.rational_value())
            if v < 0:
                theta = sqrt(-v)
                c, s = cos(theta), sin(theta) / theta
            elif v > 0:
                a = sqrt(v)
                c, s = cosh(a), sinh(a) / a
            else:
                c, s = 1.0, 1.0
            return Multivector.scalar(Fraction(c)) + b.scale(Fraction(s))
    out = Multivector.one()
    term = Multivector.one()
    for n in range(1, 80):
        term = clifford_star(term, b, metric).scale(Fraction(1, n))
        out = out + term
        if _mv_float_norm(term) < 1e-24:
            return out
    raise DomainError("rotor series did not converge; parameters too large")


def passive_transform(
    x: Multivector,
    alpha: AlphaTable,
    metric: Metric,
    order: int | None = None,
) -> Multivector:
    """Conjugate a grade-1 multivector with the rotor of the parameter table.

    With ``order`` given, returns the exact truncation of the conjugation
    (the commutator series, term-for-term the matrix Taylor polynomial of the
    coefficient action).  Without it, conjugates with the closed-form rotor
    and projects back to grade 1; the tiny truncation junk from the series
    fallback never reaches the returned grade.
    """
    if not x.is_zero and x.grades() != {1}:
        raise DomainError("passive_transform expects a grade-1 multivector")
    b = rotor_exponent(alpha, metric)
    ckind = ProductKind("clifford", metric)
    if order is not None:
        out = Multivector.zero()
        term = x
        for n in range(order + 1):
            if n > 0:
                term = star_commutator(b, term, ckind).scale(Fraction(1, n))
            out = out + term
        return out
    rotor = clifford_rotor(b, metric)
    rev = _reversal(rotor)
    norm = clifford_star(rotor, rev, metric).scalar_part().constant_value()
    out = clifford_star(clifford_star(rotor, x, metric), rev, metric)
    return out.grade_project(1).map_coeffs(lambda c: c.map_coeffs(lambda s: s.div_exact(norm)))


# -- active (Moyal) side -------------------------------------------------------


@dataclass(frozen=True)
class ActiveGenerators:
    """Quadratic polynomials M(mu,nu) = q^mu p^nu - p^mu q^nu and the K/L triples."""

    metric: Metric
    m: dict[tuple[int, int], PhasePoly]
    boosts: tuple[PhasePoly, PhasePoly, PhasePoly]
    rotations: tuple[PhasePoly, PhasePoly, PhasePoly]

    def m_at(self, mu: int, nu: int) -> PhasePoly:
        if mu == nu:
            return PhasePoly.zero()
        if mu < nu:
            return self.m[(mu, nu)]
        return -self.m[(nu, mu)]


def active_generators(metric: Metric) -> ActiveGenerators:
    m: dict[tuple[int, int], PhasePoly] = {}
    for mu in range(4):
        for nu in range(mu + 1, 4):
            m[(mu, nu)] = q(mu) * metric.raise_momentum(nu) - metric.raise_momentum(mu) * q(nu)
    boosts = tuple(m[(0, i)] for i in (1, 2, 3))
    rotations = []
    for i in (1, 2, 3):
        acc = PhasePoly.zero()
        for j in (1, 2, 3):
            for k in (j + 1, j + 2):
                if k <= 3 and epsilon3(i, j, k):
                    acc = acc + m[(j, k)].scale(Fraction(epsilon3(i, j, k)))
        rotations.append(acc)
    return ActiveGenerators(metric=metric, m=m, boosts=boosts, rotations=tuple(rotations))


def active_algebra_check(metric: Metric) -> CheckReport:
    """Moyal commutator algebra of the active generators, all index combinations."""
    gen = active_generators(metric)
    ihbar = ScalarH.hbar(1, 0, 1)
    report = CheckReport(name=f"active algebra ({metric})")

    pairs = [(mu, nu) for mu in range(4) for nu in range(mu + 1, 4)]
    for mu, nu in pairs:
        for rho, sig in pairs:
            lhs = moyal_commutator_poly(gen.m_at(mu, nu), gen.m_at(rho, sig))
            rhs = (
                gen.m_at(nu, sig).scale(Fraction(metric.eta(mu, rho)))
                - gen.m_at(mu, sig).scale(Fraction(metric.eta(nu, rho)))
                + gen.m_at(rho, nu).scale(Fraction(metric.eta(mu, sig)))
                - gen.m_at(rho, mu).scale(Fraction(metric.eta(nu, sig)))
            ).scale(ihbar)
            report.add(
                f"[M{mu}{nu}, M{rho}{sig}] closes with metric weights",
                (lhs - rhs).is_zero,
            )

    # Boost/rotation table; the spatial and temporal diagonal entries set the signs
    # (with the nonstandard signature these are +1/-1 and the bare epsilon form holds).
    sig_s = metric.diag[1]
    sig_t = metric.diag[0]
    L, K = gen.rotations, gen.boosts
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            eps_L = PhasePoly.zero()
            eps_K = PhasePoly.zero()
            for k in (1, 2, 3):
                e = epsilon3(i, j, k)
                if e:
                    eps_L = eps_L + L[k - 1].scale(Fraction(e))
                    eps_K = eps_K + K[k - 1].scale(Fraction(e))
            report.add(
                f"[L{i}, L{j}] = {'+' if sig_s > 0 else '-'}i hb eps L",
                (moyal_commutator_poly(L[i - 1], L[j - 1]) - eps_L.scale(ihbar.scale(sig_s))).is_zero,
            )
            report.add(
                f"[L{i}, K{j}] = {'+' if sig_s > 0 else '-'}i hb eps K",
                (moyal_commutator_poly(L[i - 1], K[j - 1]) - eps_K.scale(ihbar.scale(sig_s))).is_zero,
            )
            report.add(
                f"[K{i}, K{j}] = {'+' if sig_t > 0 else '-'}i hb eps L",
                (moyal_commutator_poly(K[i - 1], K[j - 1]) - eps_L.scale(ihbar.scale(sig_t))).is_zero,
            )
    return report


def poincare_check(metric: Metric) -> CheckReport:
    """Translation sector: momenta commute and transform as a vector."""
    gen = active_generators(metric)
    ihbar = ScalarH.hbar(1, 0, 1)
    report = CheckReport(name=f"poincare algebra ({metric})")
    for mu in range(4):
        for nu in range(4):
            report.add(
                f"[p{mu}, p{nu}] = 0",
                moyal_commutator_poly(p(mu), p(nu)).is_zero,
            )
    for mu in range(4):
        for nu in range(mu + 1, 4):
            m_poly = gen.m_at(mu, nu)
            for rho in range(4):
                # raised-index form
                lhs = moyal_commutator_poly(m_poly, metric.raise_momentum(rho))
                rhs = (
                    metric.raise_momentum(nu).scale(Fraction(metric.eta(mu, rho)))
                    - metric.raise_momentum(mu).scale(Fraction(metric.eta(nu, rho)))
                ).scale(ihbar)
                report.add(
                    f"[M{mu}{nu}, p^{rho}] transforms as a vector",
                    (lhs - rhs).is_zero,
                )
                # equivalent lower-index form with Kronecker deltas
                lhs_low = moyal_commutator_poly(m_poly, p(rho))
                rhs_low = (
                    metric.raise_momentum(nu).scale(Fraction(1 if mu == rho else 0))
                    - metric.raise_momentum(mu).scale(Fraction(1 if nu == rho else 0))
                ).scale(ihbar)
                report.add(
                    f"[M{mu}{nu}, p_{rho}] delta form",
                    (lhs_low - rhs_low).is_zero,
                )
    return report


# -- finite transformations ------------------------------------------------------


def active_adjoint_matrix(alpha: AlphaTable, metric: Metric) -> tuple[tuple[Fraction, ...], ...]:
    """Exact matrix G with (1/i hb) [alpha.M, q^rho] = G^rho_sigma q^sigma."""
    _check_antisymmetric(alpha)
    gen = active_generators(metric)
    alpha_m = PhasePoly.zero()
    for mu in range(4):
        for nu in range(4):
            if alpha[mu][nu]:
                alpha_m = alpha_m + gen.m_at(mu, nu).scale(alpha[mu][nu])
    rows = []
    for rho in range(4):
        action = moyal_commutator_poly(alpha_m, q(rho)).div_ihbar()
        row = []
        for sigma in range(4):
            coeff = action.partial(Q_INDEX[sigma]).constant_value()
            row.append(coeff.rational_value())
        if not action.substitute({name: 0 for name in ("q0", "q1", "q2", "q3")}).is_zero:
            raise DomainError("adjoint action is not linear in the positions")
        rows.append(tuple(row))
    return tuple(rows)


def matrix_exp_taylor(g: tuple[tuple[Fraction, ...], ...], order: int) -> tuple[tuple[Fraction, ...], ...]:
    """Exact truncated Taylor series of exp(G) over the rationals (order <= 20)."""
    if order > 20:
        raise DomainError("exact Taylor mode is limited to order 20")
    n = len(g)
    out = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    power = [row[:] for row in out]
    for k in range(1, order + 1):
        power = [
            [sum(power[i][m] * g[m][j] for m in range(n)) for j in range(n)]
            for i in range(n)
        ]
        inv = Fraction(1, factorial(k))
        for i in range(n):
            for j in range(n):
                out[i][j] += power[i][j] * inv
    return tuple(tuple(row) for row in out)


def active_matrix(alpha: AlphaTable, metric: Metric) -> np.ndarray:
    """Finite coefficient transformation exp(G) in binary64."""
    g = active_adjoint_matrix(alpha, metric)
    return expm(np.array([[float(x) for x in row] for row in g], dtype=float))


def active_transform(coords, alpha: AlphaTable, metric: Metric) -> tuple[float, float, float, float]:
    """Apply the finite active transformation to a coefficient 4-vector."""
    lam = active_matrix(alpha, metric)
    vec = np.array([float(c) for c in coords], dtype=float)
    return tuple(lam @ vec)


def active_adjoint_apply(
    alpha: AlphaTable, x: PhasePoly, order: int, metric: Metric
) -> PhasePoly:
    """Exact truncation of the conjugation series on a phase-space polynomial."""
    gen = active_generators(metric)
    alpha_m = PhasePoly.zero()
    for mu in range(4):
        for nu in range(4):
            if alpha[mu][nu]:
                alpha_m = alpha_m + gen.m_at(mu, nu).scale(alpha[mu][nu])
    out = PhasePoly.zero()
    term = x
    for n in range(order + 1):
        if n > 0:
            term = moyal_commutator_poly(alpha_m, term).div_ihbar().scale(Fraction(1, n))
        out = out + term
    return out


def boost_alpha(rapidity: Fraction | float, axis: int, metric: Metric) -> AlphaTable:
    """Parameters of a pure boost along a spatial axis with the given rapidity."""
    if axis not in (1, 2, 3):
        raise DomainError("boost axis must be 1, 2 or 3")
    a = Fraction(rapidity) if not isinstance(rapidity, float) else Fraction(rapidity)
    return alpha_table({(0, axis): a * metric.diag[0] / 2})


def rotation_alpha(angle: Fraction | float, plane: tuple[int, int], metric: Metric) -> AlphaTable:
    """Parameters of a rotation by ``angle`` in a spatial plane (i, j)."""
    i, j = plane
    if not (1 <= i < j <= 3):
        raise DomainError("rotation plane must be spatial with i < j")
    a = Fraction(angle)
    return alpha_table({(i, j): -a * metric.diag[i] / 2})


def passive_alpha_from_active(alpha: AlphaTable, metric: Metric) -> AlphaTable:
    """Parameter convention matching the passive to the active finite map.

    Raising both indices and scaling by -2 makes the rotor conjugation act on
    coefficients with exactly the adjoint matrix of the active side; fixed
    empirically and pinned by the agreement tests.
    """
    out = [[Fraction(0)] * 4 for _ in range(4)]
    for mu in range(4):
        for nu in range(4):
            out[mu][nu] = Fraction(-2) * metric.diag[mu] * metric.diag[nu] * alpha[mu][nu]
    return tuple(tuple(row) for row in out)


def minkowski_gram(metric: Metric) -> np.ndarray:
    return np.diag([float(d) for d in metric.diag])
