"""Core model types: vector fields, switching rules, Hamiltonian, equilibria.

The system is an inverted pendulum (dimensionless time, angles in radians)
with delayed PD control that is switched on and off by one of two
state-dependent rules.  Everything in this module is a pure function of
immutable values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

from .rootfind import bisect_root, bracket_roots


class GKind(Enum):
    ONE = "one"
    COSINE = "cos"


class Rule(Enum):
    RULE1 = 1
    RULE2 = 2


class Manifold(Enum):
    SIGMA1 = "sigma1"  # phi = s*theta
    SIGMA2 = "sigma2"  # theta = 0
    SIGMA3 = "sigma3"  # theta = sigma
    SIGMA4 = "sigma4"  # theta = -sigma


class State(NamedTuple):
    theta: float
    phi: float

    def __neg__(self) -> "State":
        return State(-self.theta, -self.phi)


@dataclass(frozen=True)
class Params:
    """Control and switching parameters.

    a, b    -- position and velocity gains of the PD control
    tau     -- feedback delay (>= 0)
    s       -- slope of the rule-1 switching line phi = s*theta (s <= 0)
    sigma   -- half-width of the rule-2 dead zone (> 0)
    g_kind  -- multiplier G(theta) of the control force (1 or cos(theta))
    rule    -- which switching rule is active
    """

    a: float
    b: float
    tau: float = 0.0
    s: float = -0.01
    sigma: float = 0.3
    g_kind: GKind = GKind.COSINE
    rule: Rule = Rule.RULE1

    def __post_init__(self) -> None:
        if self.tau < 0:
            raise ValueError("tau must be nonnegative")
        if self.rule is Rule.RULE1 and self.s > 0:
            raise ValueError("rule 1 requires s <= 0")
        if self.rule is Rule.RULE2 and self.sigma <= 0:
            raise ValueError("rule 2 requires sigma > 0")

    def g(self, theta: float) -> float:
        if self.g_kind is GKind.COSINE:
            return math.cos(theta)
        return 1.0


def off_field(x: State) -> State:
    """Uncontrolled pendulum: (theta', phi') = (phi, sin theta)."""
    return State(x.phi, math.sin(x.theta))


def on_field(x: State, x_delayed: State, p: Params) -> State:
    """Controlled pendulum: phi' = sin(theta) - (a*theta_d + b*phi_d) G(theta).

    The delayed state supplies the PD terms; at tau = 0 with x_delayed = x
    this is the instantaneous ON system.
    """
    force = p.a * x_delayed.theta + p.b * x_delayed.phi
    return State(x.phi, math.sin(x.theta) - force * p.g(x.theta))


def control_active(x_delayed: State, p: Params) -> bool:
    """Whether the control is engaged for a given (delayed) state.

    Points exactly on a switching manifold count as OFF, matching the
    'otherwise' branch of both rules.
    """
    th, ph = x_delayed
    if p.rule is Rule.RULE1:
        return th * (ph - p.s * th) > 0.0
    return abs(th) > p.sigma


def hamiltonian(x: State) -> float:
    """Energy-like invariant of the OFF system: phi^2/2 + cos(theta)."""
    return 0.5 * x.phi * x.phi + math.cos(x.theta)


def manifold_value(x: State, m: Manifold, p: Params) -> float:
    """Signed defining-function value h(x); zero exactly on the manifold."""
    if m is Manifold.SIGMA1:
        return x.phi - p.s * x.theta
    if m is Manifold.SIGMA2:
        return x.theta
    if m is Manifold.SIGMA3:
        return x.theta - p.sigma
    return x.theta + p.sigma


def active_manifolds(p: Params) -> tuple[Manifold, ...]:
    if p.rule is Rule.RULE1:
        return (Manifold.SIGMA1, Manifold.SIGMA2)
    return (Manifold.SIGMA3, Manifold.SIGMA4)


def on_equilibria(p: Params, tol: float = 1e-12) -> list[float]:
    """Positive theta values of ON-system equilibria, roots of
    sin(theta) - a*theta*G(theta) on (0, pi], smallest first.

    Empty list when no admissible root exists (e.g. G = 1 with a >= 1).
    """

    def f(theta: float) -> float:
        return math.sin(theta) - p.a * theta * p.g(theta)

    eps = 1e-9
    roots = bracket_roots(f, eps, math.pi, n=4000, tol=tol)
    # a = 0 keeps only the uncontrolled equilibrium at pi
    return [r for r in roots if r > eps * 10]


def on_jacobian(theta: float, p: Params) -> tuple[float, float, float, float]:
    """Jacobian of the instantaneous ON system at (theta, 0), row-major."""
    g = p.g(theta)
    if p.g_kind is GKind.COSINE:
        dg = -math.sin(theta)
    else:
        dg = 0.0
    d_th = math.cos(theta) - p.a * g - p.a * theta * dg
    d_ph = -p.b * g
    return (0.0, 1.0, d_th, d_ph)


def saddle_theta(p: Params, tol: float = 1e-12) -> float:
    """Smallest positive ON equilibrium for G = cos, the saddle theta*_cos."""
    if p.g_kind is not GKind.COSINE:
        raise ValueError("saddle equilibrium requires G = cos(theta)")
    if p.a <= 1.0:
        raise ValueError("saddle equilibrium requires a > 1")

    def f(theta: float) -> float:
        return math.sin(theta) - p.a * theta * math.cos(theta)

    return bisect_root(f, 1e-12, math.pi / 2, tol=tol)
