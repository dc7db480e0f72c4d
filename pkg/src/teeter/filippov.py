"""Zero-delay analysis of the rule-1 switched system.

With tau = 0 the model is a planar Filippov system.  This module locates
grazing points and attracting sliding regions on the switching line
phi = s*theta, evaluates the sliding vector field, and simulates the
piecewise flow including sliding episodes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .model import (
    GKind,
    Manifold,
    Params,
    Rule,
    State,
    manifold_value,
    off_field,
    on_field,
)
from .rootfind import bisect_root

THETA_MAX = math.pi / 2  # physical-meaning cutoff


class ZeroDelayEventKind(Enum):
    ENTER_SLIDING = "enter_sliding"
    EXIT_SLIDING = "exit_sliding"
    CROSS_SIGMA1 = "cross_sigma1"
    CROSS_SIGMA2 = "cross_sigma2"
    REACH_EQUILIBRIUM = "reach_equilibrium"


@dataclass(frozen=True)
class ZeroDelayEvent:
    t: float
    kind: ZeroDelayEventKind
    state: State


@dataclass(frozen=True)
class SlidingRegion:
    lo: float
    hi: float
    attracting: bool = True


@dataclass
class ZeroDelayResult:
    times: list[float]
    states: list[State]
    events: list[ZeroDelayEvent]
    diverged: bool = False


def grazing_off(s: float) -> float:
    """Unique root theta in (0, pi] of sin(theta)/theta - s^2.

    This is where the OFF field is tangent to the line phi = s*theta.
    """
    if not (-1.0 < s <= 0.0):
        raise ValueError("grazing_off requires s in (-1, 0]")
    if s == 0.0:
        return math.pi

    def f(theta: float) -> float:
        return math.sin(theta) / theta - s * s

    return bisect_root(f, 1e-12, math.pi, tol=1e-14)


def _g_tangency(theta: float, p: Params) -> float:
    return math.sin(theta) / theta - p.s * p.s - (p.a + p.b * p.s) * p.g(theta)


def grazing_on(p: Params) -> float | None:
    """Root of the ON-field tangency condition on phi = s*theta, or None.

    G = 1: a unique root in (0, pi/2) exists for 2/pi < a + b*s + s^2 < 1.
    G = cos: the smallest positive root exists for a > 1 - b*s - s^2.
    """
    c = p.a + p.b * p.s + p.s * p.s
    if p.g_kind is GKind.ONE:
        if not (2.0 / math.pi < c < 1.0):
            return None
        return bisect_root(lambda th: _g_tangency(th, p), 1e-12, math.pi / 2, tol=1e-14)
    if p.a <= 1.0 - p.b * p.s - p.s * p.s:
        return None
    # G(0+) limit is 1 - a - b*s - s^2 < 0 while the value at pi/2 is positive
    return bisect_root(lambda th: _g_tangency(th, p), 1e-12, math.pi / 2, tol=1e-14)


def sliding_region(p: Params) -> SlidingRegion | None:
    """Attracting sliding interval on phi = s*theta for theta > 0, if any."""
    theta_on = grazing_on(p)
    if theta_on is None:
        return None
    if p.g_kind is GKind.ONE:
        return SlidingRegion(theta_on, THETA_MAX)
    return SlidingRegion(0.0, theta_on)


def filippov_q(theta: float, p: Params) -> float:
    """Convex-combination weight of the ON field in the sliding flow.

    Outside a valid sliding region the value leaves [0, 1]; callers use
    that as the exit signal.
    """
    num = math.sin(theta) - p.s * p.s * theta
    den = (p.a + p.b * p.s) * theta * p.g(theta)
    if theta == 0.0:
        # limit theta -> 0 of the closed form
        return (1.0 - p.s * p.s) / (p.a + p.b * p.s)
    return num / den


def sliding_solution(theta0: float, s: float, t: float) -> State:
    """Exact sliding trajectory theta0 * e^(s t) * (1, s)."""
    th = theta0 * math.exp(s * t)
    return State(th, s * th)


def _field(x: State, p: Params) -> State:
    if control_region_on(x, p):
        return on_field(x, x, p)
    return off_field(x)


def control_region_on(x: State, p: Params) -> bool:
    return x.theta * (x.phi - p.s * x.theta) > 0.0


def _rk4(x: State, h: float, p: Params) -> State:
    k1 = _field(x, p)
    k2 = _field(State(x.theta + 0.5 * h * k1.theta, x.phi + 0.5 * h * k1.phi), p)
    k3 = _field(State(x.theta + 0.5 * h * k2.theta, x.phi + 0.5 * h * k2.phi), p)
    k4 = _field(State(x.theta + h * k3.theta, x.phi + h * k3.phi), p)
    return State(
        x.theta + h / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta),
        x.phi + h / 6.0 * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi),
    )


def _in_sliding_interval(theta: float, p: Params, region: SlidingRegion | None) -> bool:
    if region is None:
        return False
    q = filippov_q(abs(theta), p)
    return region.lo < abs(theta) < region.hi and -1e-12 <= q <= 1.0 + 1e-12


def simulate_zero_delay(
    x0: State,
    p: Params,
    t_max: float,
    dt: float = 1e-3,
) -> ZeroDelayResult:
    """Integrate the tau = 0 Filippov system from x0 for rule 1.

    Switches fields at crossings of the two switching lines, enters the
    Filippov sliding flow on attracting sliding segments, and follows it
    until exit or until the origin is reached.
    """
    if p.rule is not Rule.RULE1:
        raise ValueError("zero-delay analysis applies to rule 1")
    region = sliding_region(p)
    times = [0.0]
    states = [x0]
    events: list[ZeroDelayEvent] = []
    t = 0.0
    x = x0
    sliding = False

    if abs(manifold_value(x, Manifold.SIGMA1, p)) < 1e-14 and _in_sliding_interval(
        x.theta, p, region
    ):
        sliding = True
        events.append(ZeroDelayEvent(t, ZeroDelayEventKind.ENTER_SLIDING, x))

    while t < t_max - 1e-15:
        if abs(x.theta) > THETA_MAX:
            return ZeroDelayResult(times, states, events, diverged=True)
        if x.theta * x.theta + x.phi * x.phi < 1e-24:
            events.append(ZeroDelayEvent(t, ZeroDelayEventKind.REACH_EQUILIBRIUM, x))
            break

        if sliding:
            # theta' = phi = s*theta on the manifold: integrate that scalar
            # flow, reconstructing q each step for the exit test.
            h = min(dt, t_max - t)
            sgn = 1.0 if x.theta >= 0 else -1.0
            th = abs(x.theta)
            k1 = p.s * th
            k2 = p.s * (th + 0.5 * h * k1)
            k3 = p.s * (th + 0.5 * h * k2)
            k4 = p.s * (th + h * k3)
            th_new = th + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            t += h
            x = State(sgn * th_new, p.s * sgn * th_new)
            times.append(t)
            states.append(x)
            if p.s == 0.0:
                continue
            if th_new < 1e-12:
                events.append(ZeroDelayEvent(t, ZeroDelayEventKind.REACH_EQUILIBRIUM, x))
                break
            q = filippov_q(th_new, p)
            assert region is not None
            if not (region.lo <= th_new <= region.hi) or q < -1e-12 or q > 1 + 1e-12:
                sliding = False
                events.append(ZeroDelayEvent(t, ZeroDelayEventKind.EXIT_SLIDING, x))
            continue

        h = min(dt, t_max - t)
        x_new = _rk4(x, h, p)
        crossed = None
        for m in (Manifold.SIGMA1, Manifold.SIGMA2):
            g0 = manifold_value(x, m, p)
            g1 = manifold_value(x_new, m, p)
            if g0 * g1 < 0.0:
                # locate crossing time by bisection on the step
                def gval(hh: float, _m=m) -> float:
                    return manifold_value(_rk4(x, hh, p), _m, p)

                hc = bisect_root(gval, 0.0, h, tol=1e-14)
                if crossed is None or hc < crossed[0]:
                    crossed = (hc, m)
        if crossed is None:
            t += h
            x = x_new
            times.append(t)
            states.append(x)
            continue

        hc, m = crossed
        x = _rk4(x, hc, p)
        t += hc
        times.append(t)
        states.append(x)
        if m is Manifold.SIGMA1:
            if _in_sliding_interval(x.theta, p, region):
                sliding = True
                x = State(x.theta, p.s * x.theta)  # project exactly onto the line
                events.append(ZeroDelayEvent(t, ZeroDelayEventKind.ENTER_SLIDING, x))
            else:
                events.append(ZeroDelayEvent(t, ZeroDelayEventKind.CROSS_SIGMA1, x))
                # nudge off the manifold so the crossing is not re-detected
                x = _rk4(x, 1e-13, p)
                t += 1e-13
        else:
            events.append(ZeroDelayEvent(t, ZeroDelayEventKind.CROSS_SIGMA2, x))
            x = _rk4(x, 1e-13, p)
            t += 1e-13

    return ZeroDelayResult(times, states, events)
