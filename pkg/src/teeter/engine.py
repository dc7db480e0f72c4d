"""Method-of-steps integration of the delayed switched pendulum.

Between control toggles the active system is a plain ODE (control off) or
an ODE that reads delayed values from stored dense interpolants (control
on).  Manifold crossings of the trajectory are localized to a time
tolerance of 1e-12; each crossing schedules a control toggle exactly tau
later, because the switching rules act on the delayed state.
"""
from __future__ import annotations

import heapq
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .model import (
    Manifold,
    Params,
    Rule,
    State,
    active_manifolds,
    hamiltonian,
    manifold_value,
)

TIME_TOL = 1e-12
ORIGIN_TOL = 1e-9
THETA_MAX = math.pi / 2


class EventKind(Enum):
    MANIFOLD_CROSS = "manifold_cross"
    CONTROL_ON = "control_on"
    CONTROL_OFF = "control_off"
    SHORT_OFF_WINDOW = "short_off_window"
    WS_COINCIDENCE = "ws_coincidence"
    DIVERGED = "diverged"
    CONVERGED_ORIGIN = "converged_origin"


class OscillationTag(Enum):
    ZIGZAG = "zigzag"
    SPIRAL_HALF = "spiral_half"
    TRAPPED_ON = "trapped_on"
    WS_ASYMPTOTIC = "ws_asymptotic"


@dataclass(frozen=True)
class Event:
    t: float
    kind: EventKind
    state: State
    manifold: Manifold | None = None
    entered_on: bool | None = None  # for crossings: region entered is ON


@dataclass(frozen=True)
class HistorySegment:
    """Dense cubic-Hermite output of one accepted step."""

    t0: float
    t1: float
    y0: State
    y1: State
    f0: State
    f1: State
    control_on: bool

    def eval(self, t: float) -> State:
        h = self.t1 - self.t0
        if h <= 0.0:
            return self.y1
        u = (t - self.t0) / h
        u2 = u * u
        u3 = u2 * u
        h00 = 2 * u3 - 3 * u2 + 1
        h10 = u3 - 2 * u2 + u
        h01 = -2 * u3 + 3 * u2
        h11 = u3 - u2
        return State(
            h00 * self.y0.theta + h10 * h * self.f0.theta + h01 * self.y1.theta + h11 * h * self.f1.theta,
            h00 * self.y0.phi + h10 * h * self.f0.phi + h01 * self.y1.phi + h11 * h * self.f1.phi,
        )


class SimulationError(Exception):
    pass


class InvalidStart(SimulationError):
    """Initial point violates the manifold-start transversality convention."""


class NotZigzag(SimulationError):
    """The orbit crossed theta = 0 instead of completing a zigzag."""


class TrappedOn(SimulationError):
    """The orbit never returned to the switching line while controlled."""


@dataclass
class SimResult:
    segments: list[HistorySegment]
    events: list[Event]
    status: str  # "t_max" | "diverged" | "converged" | "stopped"
    t_end: float
    state_end: State
    _starts: list[float] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        if not self._starts:
            self._starts = [seg.t0 for seg in self.segments]

    def state_at(self, t: float) -> State:
        if not self.segments:
            raise ValueError("empty trajectory")
        i = bisect_right(self._starts, t) - 1
        i = max(0, min(i, len(self.segments) - 1))
        return self.segments[i].eval(t)

    def sample(self, stride: float) -> list[tuple[float, State, bool]]:
        out = []
        t = 0.0
        i = 0
        while t <= self.t_end + 1e-15 and self.segments:
            while i + 1 < len(self.segments) and self.segments[i].t1 < t:
                i += 1
            seg = self.segments[i]
            out.append((t, seg.eval(min(t, seg.t1)), seg.control_on))
            t += stride
        return out


def _region_on(x: State, p: Params, override: dict[Manifold, float] | None = None) -> bool:
    """Control-region membership from manifold signs, with optional sign
    overrides for a manifold the state currently sits on."""
    vals = {}
    for m in active_manifolds(p):
        v = manifold_value(x, m, p)
        if override and m in override:
            v = override[m]
        vals[m] = v
    if p.rule is Rule.RULE1:
        return vals[Manifold.SIGMA1] * vals[Manifold.SIGMA2] > 0.0
    return vals[Manifold.SIGMA3] > 0.0 or vals[Manifold.SIGMA4] < 0.0


def simulate(
    x0: State,
    p: Params,
    t_max: float,
    dt: float = 1e-3,
    *,
    linear: bool = False,
    history: Callable[[float], State] | None = None,
    start_control_on: bool | None = None,
    stop_condition: Callable[[Event], bool] | None = None,
    stop_state: Callable[[float, State], bool] | None = None,
) -> SimResult:
    """Integrate the delayed switched system from x0 on [0, t_max].

    The default initial convention is that the orbit has been in an OFF
    region for at least tau before t = 0, so x0 must either lie strictly
    inside an OFF region or on a switching manifold with the OFF field
    pointing into the neighbouring ON region.  For starts inside an ON
    region pass an explicit ``history`` callable (t <= 0 -> State) and
    ``start_control_on=True``.

    ``linear`` replaces sin(theta) by theta and G by 1 (the small-angle
    system); the switching rules are unchanged.  ``stop_condition`` is
    called on every appended event, ``stop_state`` after every accepted
    step; either ends the run when it returns True.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    a, b, s, tau = p.a, p.b, p.s, p.tau
    sin = math.sin
    cos = math.cos
    g_cos = p.g_kind.value == "cos" and not linear

    segments: list[HistorySegment] = []
    starts: list[float] = []
    events: list[Event] = []

    def state_at(t: float) -> State:
        if t <= 0.0:
            return history(t) if history is not None else x0
        i = bisect_right(starts, t) - 1
        i = max(0, min(i, len(segments) - 1))
        return segments[i].eval(t)

    def rhs(t: float, th: float, ph: float, on: bool) -> tuple[float, float]:
        acc = th if linear else sin(th)
        if on:
            if tau > 0.0:
                thd, phd = state_at(t - tau)
            else:
                thd, phd = th, ph
            force = a * thd + b * phd
            if g_cos:
                force *= cos(th)
            acc -= force
        return ph, acc

    def rk4(t: float, y: State, h: float, on: bool) -> tuple[State, State, State]:
        k1t, k1p = rhs(t, y.theta, y.phi, on)
        k2t, k2p = rhs(t + 0.5 * h, y.theta + 0.5 * h * k1t, y.phi + 0.5 * h * k1p, on)
        k3t, k3p = rhs(t + 0.5 * h, y.theta + 0.5 * h * k2t, y.phi + 0.5 * h * k2p, on)
        k4t, k4p = rhs(t + h, y.theta + h * k3t, y.phi + h * k3p, on)
        y1 = State(
            y.theta + h / 6.0 * (k1t + 2 * k2t + 2 * k3t + k4t),
            y.phi + h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p),
        )
        f1t, f1p = rhs(t + h, y1.theta, y1.phi, on)
        return y1, State(k1t, k1p), State(f1t, f1p)

    manifolds = active_manifolds(p)

    def mval(x: State, m: Manifold) -> float:
        return manifold_value(x, m, p)

    def mdot(f: State, m: Manifold) -> float:
        if m is Manifold.SIGMA1:
            return f.phi - s * f.theta
        return f.theta

    # toggle queue entries: (time, priority, control_flag)
    toggles: list[tuple[float, int, bool]] = []
    seq = 0

    def schedule(t_cross: float, flag: bool) -> None:
        nonlocal seq
        heapq.heappush(toggles, (t_cross + tau, seq, flag))
        seq += 1

    scale0 = abs(x0.theta) + abs(x0.phi) + 1e-300
    control_on = bool(start_control_on) if start_control_on is not None else False
    region_on = _region_on(x0, p)

    on_manifold = None
    for m in manifolds:
        if abs(mval(x0, m)) <= 1e-12 * scale0:
            on_manifold = m
            break
    if on_manifold is not None and start_control_on is None:
        f_off0 = State(x0.phi, x0.theta if linear else sin(x0.theta))
        hdot = mdot(f_off0, on_manifold)
        if hdot == 0.0:
            raise InvalidStart("OFF field tangent to the manifold at x0")
        entered = _region_on(x0, p, {on_manifold: math.copysign(1.0, hdot)})
        if not entered:
            raise InvalidStart("OFF field points away from the ON region at x0")
        region_on = True
        events.append(Event(0.0, EventKind.MANIFOLD_CROSS, x0, on_manifold, True))
        schedule(0.0, True)
    elif start_control_on is None and region_on and history is None:
        raise InvalidStart("x0 lies inside an ON region; supply a history")

    off_entry_t = 0.0
    t = 0.0
    y = x0
    status = "t_max"
    stop = False

    def emit(ev: Event) -> None:
        nonlocal stop
        events.append(ev)
        if stop_condition is not None and stop_condition(ev):
            stop = True

    while t < t_max - 1e-15 and not stop:
        while toggles and toggles[0][0] <= t + TIME_TOL:
            t_tog, _, flag = heapq.heappop(toggles)
            if flag == control_on:
                continue
            control_on = flag
            kind = EventKind.CONTROL_ON if flag else EventKind.CONTROL_OFF
            st = state_at(t_tog) if segments else y
            emit(Event(t_tog, kind, st))
            if not flag and not linear and abs(hamiltonian(st) - 1.0) <= ORIGIN_TOL:
                emit(Event(t_tog, EventKind.WS_COINCIDENCE, st))
        if stop:
            break

        t_stop = t_max
        if toggles:
            t_stop = min(t_stop, toggles[0][0])
        h = min(dt, t_stop - t)
        if control_on and tau > 0.0:
            h = min(h, tau)
        if h < 1e-14:
            t = t_stop
            continue

        y_trial, f0, f1 = rk4(t, y, h, control_on)
        seg_trial = HistorySegment(t, t + h, y, y_trial, f0, f1, control_on)

        # earliest manifold crossing on the step, if any
        best: tuple[float, Manifold] | None = None
        for m in manifolds:
            g0 = mval(y, m)
            g1 = mval(y_trial, m)
            d0 = mdot(f0, m)
            d1 = mdot(f1, m)
            if g0 * g1 < 0.0:
                scan = True
            else:
                # double crossings are only possible when the manifold is
                # within reach of the step
                reach = h * max(abs(d0), abs(d1))
                scan = min(abs(g0), abs(g1)) <= 1.25 * reach and (d0 * d1 < 0.0 or g0 == 0.0)
                if g0 == 0.0:
                    scan = False  # leaving the manifold is not a crossing
            if not scan:
                continue
            nsmp = 8
            gprev, uprev = g0, 0.0
            for k in range(1, nsmp + 1):
                u = h * k / nsmp
                gk = g1 if k == nsmp else mval(seg_trial.eval(t + u), m)
                if gprev != 0.0 and gprev * gk < 0.0:
                    lo, hi, glo = uprev, u, gprev
                    for _ in range(80):
                        mid = 0.5 * (lo + hi)
                        gm = mval(seg_trial.eval(t + mid), m)
                        if gm == 0.0 or hi - lo < TIME_TOL:
                            lo = hi = mid
                            break
                        if glo * gm < 0.0:
                            hi = mid
                        else:
                            lo, glo = mid, gm
                    uc = 0.5 * (lo + hi)
                    if best is None or uc < best[0]:
                        best = (uc, m)
                    break
                gprev, uprev = gk, u

        if best is not None and best[0] > TIME_TOL:
            uc, m = best
            # re-integrate to the crossing and polish with Newton steps
            y_c, f0c, f1c = rk4(t, y, uc, control_on)
            for _ in range(3):
                gm = mval(y_c, m)
                gdot = mdot(f1c, m)
                if gdot == 0.0:
                    break
                du = -gm / gdot
                if abs(du) < 1e-16 * max(uc, 1e-16):
                    break
                uc = min(max(uc + du, 0.0), h)
                y_c, f0c, f1c = rk4(t, y, uc, control_on)
            seg = HistorySegment(t, t + uc, y, y_c, f0c, f1c, control_on)
            segments.append(seg)
            starts.append(seg.t0)
            t_c = t + uc
            gdot = mdot(f1c, m)
            new_region_on = _region_on(y_c, p, {m: math.copysign(1.0, gdot or 1.0)})
            emit(Event(t_c, EventKind.MANIFOLD_CROSS, y_c, m, new_region_on))
            if new_region_on != region_on:
                if new_region_on and tau > 0.0 and t_c - off_entry_t < tau - TIME_TOL:
                    emit(Event(t_c, EventKind.SHORT_OFF_WINDOW, y_c, m))
                if not new_region_on:
                    off_entry_t = t_c
                region_on = new_region_on
            schedule(t_c, new_region_on)
            t = t_c
            y = y_c
        else:
            segments.append(seg_trial)
            starts.append(seg_trial.t0)
            t += h
            y = y_trial

        if stop_state is not None and stop_state(t, y):
            stop = True
            break
        # the small-angle system has no physical fall-over angle
        div_thresh = THETA_MAX if not linear else 1e12
        if abs(y.theta) > div_thresh:
            events.append(Event(t, EventKind.DIVERGED, y))
            status = "diverged"
            break
        if (
            not control_on
            and not linear
            and abs(y.theta) + abs(y.phi) < ORIGIN_TOL
            and abs(hamiltonian(y) - 1.0) < ORIGIN_TOL
        ):
            events.append(Event(t, EventKind.CONVERGED_ORIGIN, y))
            status = "converged"
            break

    if stop:
        status = "stopped"
    return SimResult(segments, events, status, t, y, starts)


def classify_oscillation(events: list[Event], p: Params) -> list[OscillationTag]:
    """Tag the spans between successive entries into an ON region.

    A span ending with a crossing of phi = s*theta is a zigzag; one ending
    on theta = 0 is half a spiral.  A control-off state on the OFF stable
    manifold (H = 1) tags WS_ASYMPTOTIC; ending the run under active
    control with no further OFF return tags TRAPPED_ON.
    """
    if p.rule is not Rule.RULE1:
        raise ValueError("oscillation classification applies to rule 1")
    tags: list[OscillationTag] = []
    entries = [
        e
        for e in events
        if e.kind is EventKind.MANIFOLD_CROSS and e.entered_on
    ]
    for nxt in entries[1:]:
        if nxt.manifold is Manifold.SIGMA2:
            tags.append(OscillationTag.SPIRAL_HALF)
        else:
            tags.append(OscillationTag.ZIGZAG)
    for e in events:
        if e.kind is EventKind.WS_COINCIDENCE:
            tags.append(OscillationTag.WS_ASYMPTOTIC)
    terminal = {EventKind.DIVERGED, EventKind.CONVERGED_ORIGIN}
    if not any(e.kind in terminal for e in events):
        control_events = [e for e in events if e.kind in (EventKind.CONTROL_ON, EventKind.CONTROL_OFF)]
        crossings = [e for e in events if e.kind is EventKind.MANIFOLD_CROSS]
        if (
            control_events
            and control_events[-1].kind is EventKind.CONTROL_ON
            and crossings
            and crossings[-1].t <= control_events[-1].t + TIME_TOL
        ):
            tags.append(OscillationTag.TRAPPED_ON)
    return tags


@dataclass
class ZigzagReturn:
    theta3: float
    delta_H: float
    T_int: float
    t_exit: float
    theta1: float
    phi1: float
    theta2: float
    phi2: float

    @property
    def T_off(self) -> float:
        return self.t_exit - self.T_int


def zigzag_return_map(
    theta0: float,
    p: Params,
    dt: float | None = None,
    t_cap: float | None = None,
) -> ZigzagReturn:
    """Run one zigzag of the forward orbit of (theta0, s*theta0).

    Returns the next exit ordinate theta3 on phi = s*theta, the change of
    the Hamiltonian between the two switching points, and the measured
    intersection time T_int.  Raises NotZigzag if the orbit crosses
    theta = 0 first and TrappedOn if it never comes back.
    """
    if p.rule is not Rule.RULE1:
        raise ValueError("the zigzag map applies to rule 1")
    if theta0 <= 0:
        raise ValueError("theta0 must be positive")
    tau = p.tau
    if dt is None:
        dt = min(1e-3, tau / 200.0) if tau > 0 else 1e-3
    if t_cap is None:
        t_cap = max(200.0 * max(tau, dt), 20.0)

    x0 = State(theta0, p.s * theta0)
    sig1: list[float] = []
    crossed_sigma2 = False

    def stop(e: Event) -> bool:
        nonlocal crossed_sigma2
        if e.kind is EventKind.MANIFOLD_CROSS:
            if e.manifold is Manifold.SIGMA2:
                crossed_sigma2 = True
                return True
            if e.manifold is Manifold.SIGMA1 and e.t > TIME_TOL:
                sig1.append(e.t)
        return len(sig1) >= 2 and e.t >= sig1[0] + tau

    res = simulate(x0, p, t_cap, dt, stop_condition=stop)
    if crossed_sigma2:
        raise NotZigzag(f"orbit from theta0={theta0} crossed theta = 0")
    if len(sig1) < 2:
        raise TrappedOn(f"no zigzag completed by t={t_cap}")
    t_int, t_exit = sig1[0], sig1[1]
    x1 = res.state_at(tau)
    x2 = res.state_at(t_int + tau)
    x3 = res.state_at(t_exit)
    return ZigzagReturn(
        theta3=x3.theta,
        delta_H=hamiltonian(x2) - hamiltonian(x1),
        T_int=t_int,
        t_exit=t_exit,
        theta1=x1.theta,
        phi1=x1.phi,
        theta2=x2.theta,
        phi2=x2.phi,
    )


def detect_short_off(events: list[Event], p: Params) -> list[tuple[float, float]]:
    """OFF-region residences shorter than tau: (exit time, exit theta)."""
    if p.tau <= 0:
        return []
    return [
        (e.t, e.state.theta)
        for e in events
        if e.kind is EventKind.SHORT_OFF_WINDOW
    ]
