"""Small-delay asymptotic series for the switched pendulum.

Closed-form expansions of one zigzag excursion in the slope s and the
delay tau: the piecewise solution with the alpha coefficients, the
intersection time T_int (xi family, chi family for rule 2), the
Hamiltonian change Delta H (zeta family), and the derived bifurcation
curves (zigzag birth at the origin, its criticality, the homoclinic
connection, and the rule-2 amplitude law).  Every series is evaluated
exactly at its stated truncation; remainder orders are noted per
function for convergence checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .model import GKind, Params, on_jacobian, saddle_theta


class NoIntersection(ValueError):
    """The control is too weak for the orbit to return to the switching line."""


class NoPeriodicOrbit(ValueError):
    """The rule-2 amplitude law has no real solution at these parameters."""


# ---------------------------------------------------------------------------
# coefficient families


@dataclass(frozen=True)
class AlphaCoefficients:
    """Polynomial coefficients of the piecewise zigzag solution at base
    point theta1 (hatted values apply on the third validity window)."""

    theta1: float
    a1_hat: float
    a2_hat: float
    a3: float
    a4: float
    a5_hat: float
    a6: float
    a6_hat: float


def alpha_coefficients(theta1: float, p: Params) -> AlphaCoefficients:
    a, b = p.a, p.b
    g = p.g(theta1)
    sn = math.sin(theta1)
    return AlphaCoefficients(
        theta1=theta1,
        a1_hat=-a * b * theta1 * g * g / 6.0,
        a2_hat=0.5 * a * b * theta1 * g * g,
        a3=-0.5 * (a * theta1 * g - sn),
        a4=-0.5 * b * theta1 * g,
        a5_hat=-0.5 * a * b * theta1 * g * g,
        # note: a single factor of G here; the delayed velocity on the
        # second window comes from the uncontrolled flow
        a6=-b * sn * g / 6.0,
        a6_hat=b * g * (a * theta1 * g - sn) / 6.0,
    )


@dataclass(frozen=True)
class TintCoefficients:
    xi1: float
    xi2: float
    xi3: float
    xi3_hat: float


def tint_coefficients(theta1: float, p: Params) -> TintCoefficients:
    a, b = p.a, p.b
    g = p.g(theta1)
    sn = math.sin(theta1)
    den = a * theta1 * g - sn
    if den <= 0.0:
        raise NoIntersection(
            f"a*theta1*G(theta1) - sin(theta1) = {den} is not positive"
        )
    return TintCoefficients(
        xi1=a * theta1 * g / den,
        xi2=-b * theta1 * sn * g / den**2,
        xi3=-0.5 * b * sn**3 * g / den**3,
        xi3_hat=0.5 * b * g * (sn * sn - 3 * a * theta1 * sn * g + (a * theta1 * g) ** 2) / den**2,
    )


@dataclass(frozen=True)
class DeltaHCoefficients:
    z1: float
    z2: float
    z3: float
    z4: float
    z5: float
    z4_hat: float
    z5_hat: float


def delta_h_coefficients(theta1: float, p: Params) -> DeltaHCoefficients:
    a, b = p.a, p.b
    g = p.g(theta1)
    sn = math.sin(theta1)
    ag = a * theta1 * g
    den = ag - sn
    if den <= 0.0:
        raise NoIntersection(
            f"a*theta1*G(theta1) - sin(theta1) = {den} is not positive"
        )
    return DeltaHCoefficients(
        z1=-(a * theta1 * g) ** 2 * theta1 / den,
        z2=-((a * theta1 * g) ** 2) * (sn - 0.5 * ag) / den,
        z3=2 * a * b * theta1**3 * g * g * (sn - 0.5 * ag) / den**2,
        z4=-2 * a * b * theta1**2 * g * g
        * (sn**3 - 2.75 * ag * sn * sn + 2 * ag * ag * sn - 0.5 * ag**3)
        / den**3,
        z5=-a * b * theta1 * sn * g * g
        * (sn**3 - 6 * ag * sn * sn + 8 * ag * ag * sn - 3 * ag**3)
        / (6 * den**3),
        z4_hat=2 * a * b * theta1**2 * g * g
        * (sn * sn - 0.75 * ag * sn + 0.25 * ag * ag)
        / den**2,
        z5_hat=a * b * theta1 * g * g
        * (sn**3 + 7 * ag * sn * sn - 9 * ag * ag * sn + 3 * ag**3)
        / (6 * den**2),
    )


@dataclass(frozen=True)
class ChiCoefficients:
    """Rule-2 intersection-time coefficients at base angle sigma."""

    chi1: float
    chi2: float
    chi3: float


def chi_coefficients(p: Params) -> ChiCoefficients:
    a, b, sg = p.a, p.b, p.sigma
    g = p.g(sg)
    den = a * sg * g - math.sin(sg)
    if den <= 0.0:
        raise NoIntersection(
            f"a*sigma*G(sigma) - sin(sigma) = {den} is not positive"
        )
    return ChiCoefficients(
        chi1=2.0 / den,
        chi2=-2.0 * b * g / (3.0 * den * den),
        chi3=2.0 * a * sg * g / den,
    )


# ---------------------------------------------------------------------------
# series evaluators


def series_off_segment(theta0: float, s: float, t: float) -> float:
    """Uncontrolled segment from (theta0, s*theta0); quartic remainder."""
    return theta0 + theta0 * s * t + 0.5 * math.sin(theta0) * t * t


def series_zigzag(theta1: float, p: Params, t: float) -> float:
    """Piecewise zigzag solution theta(t) expanded at the first switching
    point theta1; branch picked by t against tau and 2*tau.  Quartic
    remainder in (s, tau, t)."""
    s, tau = p.s, p.tau
    al = alpha_coefficients(theta1, p)
    sn = math.sin(theta1)
    dt = t - tau
    slope = s * theta1 + sn * tau
    if t <= tau:
        return theta1 + slope * dt + 0.5 * sn * dt * dt
    if t <= 2 * tau:
        return theta1 + slope * dt + (al.a3 + al.a4 * s) * dt * dt + al.a6 * dt**3
    return (
        theta1
        + al.a1_hat * tau**3
        + (slope + al.a2_hat * tau * tau) * dt
        + (al.a3 + al.a4 * s + al.a5_hat * tau) * dt * dt
        + al.a6_hat * dt**3
    )


def _tint_branch_low(theta1: float, p: Params) -> bool:
    """True when the return falls in the second validity window
    (T_int <= 2*tau at leading order, i.e. phi - s*theta <= 0 at 2*tau)."""
    xi = tint_coefficients(theta1, p)
    lead = xi.xi1 * p.tau + xi.xi2 * p.s * p.tau
    return lead <= 2 * p.tau


def series_T_int(theta1: float, p: Params, *, branch_low: bool | None = None) -> float:
    """Return time to the switching line; cubic remainder in (s, tau)."""
    xi = tint_coefficients(theta1, p)
    if branch_low is None:
        branch_low = _tint_branch_low(theta1, p)
    x3 = xi.xi3 if branch_low else xi.xi3_hat
    return xi.xi1 * p.tau + xi.xi2 * p.s * p.tau + x3 * p.tau * p.tau


def series_delta_H(theta1: float, p: Params, *, branch_low: bool | None = None) -> float:
    """Hamiltonian change over one zigzag; quartic remainder in (s, tau)."""
    z = delta_h_coefficients(theta1, p)
    s, tau = p.s, p.tau
    if branch_low is None:
        branch_low = _tint_branch_low(theta1, p)
    z4 = z.z4 if branch_low else z.z4_hat
    z5 = z.z5 if branch_low else z.z5_hat
    return z.z1 * s * tau + z.z2 * tau * tau + z.z3 * s * s * tau + z4 * s * tau * tau + z5 * tau**3


def delta_H_small_theta(theta1: float, a: float, b: float, s: float, tau: float) -> float:
    """Small-theta1 expansion of the Hamiltonian change (theta1^2 term
    only, identical for both control shapes)."""
    c = (
        -(a * a) / (a - 1) * s * tau
        + a * a * (a - 2) / (2 * (a - 1)) * tau * tau
        - a * b * (a - 2) / (a - 1) ** 2 * s * s * tau
        + a * b * (a * a - 3 * a + 4) / (2 * (a - 1) ** 2) * s * tau * tau
        + a * b * (3 * a**3 - 9 * a * a + 7 * a + 1) / (6 * (a - 1) ** 2) * tau**3
    )
    return c * theta1 * theta1


# ---------------------------------------------------------------------------
# bifurcation curves


def dib_curve(a: float, b: float, s: float) -> float:
    """Delay at which a zigzag periodic orbit is born at the origin."""
    if a == 1.0 or a == 2.0:
        raise ValueError("curve is singular at a = 1 and a = 2")
    return 2 * s / (a - 2) - 2 * (2 + 8 * a - 15 * a * a + 6 * a**3) / (
        3 * a * (a - 1) * (a - 2) ** 3
    ) * b * s * s


def criticality_curve(a: float, b: float, s: float, g_kind: GKind) -> float:
    """Delay at which the quartic term of the small-amplitude Hamiltonian
    change vanishes, separating super- from subcritical zigzag birth."""
    if g_kind is GKind.COSINE:
        den = 3 * a * a - 8 * a + 6
        if den == 0.0 or a in (0.0, 1.0):
            raise ValueError("singular denominator")
        num = (
            -243 * a**6
            + 1674 * a**5
            - 4491 * a**4
            + 5862 * a**3
            - 3611 * a**2
            + 642 * a
            + 175
        )
        return (3 * a - 5) / den * s + b * num / (6 * a * (a - 1) * den**3) * s * s
    if a in (0.0, 1.0):
        raise ValueError("singular denominator")
    return -2 * s / a - 2 * b * (a * a - 2) * (3 * a - 1) / (3 * a**4 * (a - 1)) * s * s


def saddle_eigen(p: Params) -> tuple[float, float, tuple[float, float]]:
    """Eigenvalues (lam_plus, lam_minus) of the controlled saddle at
    (theta*, 0) for tau = 0, plus the eigenvector slopes (equal to the
    eigenvalues for a companion-form Jacobian)."""
    th = saddle_theta(p)
    c = math.cos(th)
    half_trace = -p.b * c / 2.0
    disc = half_trace * half_trace + (2 * th - math.sin(2 * th)) / (2 * th * c)
    if disc < 0:
        raise ValueError("equilibrium is not a saddle at these parameters")
    root = math.sqrt(disc)
    lam_p = half_trace + root
    lam_m = half_trace - root
    return lam_p, lam_m, (lam_p, lam_m)


def homoclinic_curve(a: float, b: float, s: float) -> float:
    """Delay of the zigzag connection homoclinic to the controlled saddle
    (cosine control shape only), to first order in s."""
    p = Params(a=a, b=b, g_kind=GKind.COSINE)
    lam_p, _, _ = saddle_eigen(p)
    th = saddle_theta(p)
    return -(2.0 / math.cos(th) + b / lam_p) * s / a


def rule2_periodic(p: Params) -> tuple[float, bool]:
    """Amplitude phi0 of the small rule-2 periodic orbit encircling
    (sigma, 0), and its stability (always stable at this order)."""
    sg = p.sigma
    g = p.g(sg)
    den = p.a * sg * g - math.sin(sg)
    if den <= 0.0:
        raise NoPeriodicOrbit(
            f"a*sigma*G(sigma) - sin(sigma) = {den} is not positive"
        )
    phi0 = math.sqrt(3.0 * p.a * sg * den * p.tau / p.b)
    return phi0, True


def series_T_int_rule2(phi0: float, p: Params) -> float:
    """Rule-2 return time to theta = sigma; remainder is cubic in
    (phi0, tau^(1/2))."""
    ch = chi_coefficients(p)
    return ch.chi1 * phi0 + ch.chi2 * phi0 * phi0 + ch.chi3 * p.tau
