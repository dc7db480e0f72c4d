"""Numeric bifurcation locators and regime scans.

Locates zigzag-orbit births at the origin, saddle-node and homoclinic
bifurcations, rule-2 boundary-equilibrium and homoclinic transitions,
the bursting-regime thresholds, and classifies points of the control
plane via the small-angle system.  Everything here is driven by the
engine; the asymptotic curves only seed search brackets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .engine import (
    Event,
    EventKind,
    NotZigzag,
    SimulationError,
    TrappedOn,
    simulate,
    zigzag_return_map,
)
from .model import GKind, Manifold, Params, Rule, State, on_equilibria, saddle_theta
from .rootfind import bisect_root
from .series import dib_curve, homoclinic_curve, saddle_eigen


class BifKind(Enum):
    DIB = "dib"
    SADDLE_NODE = "saddle_node"
    HOMOCLINIC = "homoclinic"
    BOUNDARY_EQUILIBRIUM = "boundary_equilibrium"
    SYMMETRIC_HOMOCLINIC = "symmetric_homoclinic"
    TIME_EQUALS_TAU = "time_equals_tau"


@dataclass(frozen=True)
class BifPoint:
    kind: BifKind
    a: float
    b: float
    tau: float
    s_or_sigma: float
    witness: float  # locator-specific diagnostic (residual or orbit theta)


@dataclass(frozen=True)
class PlaneRegionLabel:
    zigzag: str  # "in" | "out" | "to_spiral"
    spiral: str  # "in" | "out" | "to_zigzag"
    zigzag_trapped: bool = False
    spiral_trapped: bool = False


@dataclass(frozen=True)
class BurstDiagnostics:
    a1: float | None
    a2: float | None
    a3: float | None
    excursion_reentry_theta: float | None
    short_off_exit_theta: float | None
    attractor_kind: str  # "periodic" | "aperiodic"


# ---------------------------------------------------------------------------
# zigzag-orbit birth at the origin (rule 1)


def _dib_indicator(tau: float, a: float, b: float, s: float, g_kind: GKind, theta0: float) -> float:
    p = Params(a=a, b=b, tau=tau, s=s, g_kind=g_kind)
    r = zigzag_return_map(theta0, p, dt=tau / 300.0)
    return r.theta3 / theta0 - 1.0


def find_dib(
    a: float,
    b: float,
    s: float,
    g_kind: GKind = GKind.COSINE,
    theta0: float = 1e-3,
    confirm_theta0: float = 1e-4,
) -> BifPoint | None:
    """Delay at which a zigzag periodic orbit is born at the origin,
    located by bisecting the small-amplitude return ratio and confirmed
    at a smaller probe amplitude."""

    def locate(th0: float) -> float | None:
        tau_est = abs(dib_curve(a, b, s))
        lo, hi = 0.5 * tau_est, 1.7 * tau_est
        f_lo = _dib_indicator(lo, a, b, s, g_kind, th0)
        f_hi = _dib_indicator(hi, a, b, s, g_kind, th0)
        if f_lo * f_hi > 0:
            return None
        return bisect_root(
            lambda tau: _dib_indicator(tau, a, b, s, g_kind, th0), lo, hi, tol=1e-9
        )

    tau1 = locate(theta0)
    if tau1 is None:
        return None
    tau2 = locate(confirm_theta0)
    if tau2 is None or abs(tau2 - tau1) > 1e-5 * max(tau1, 1e-12):
        return None
    resid = _dib_indicator(tau1, a, b, s, g_kind, theta0)
    return BifPoint(BifKind.DIB, a, b, tau1, s, resid)


def dib_branch_stable(a: float, b: float, s: float, g_kind: GKind = GKind.COSINE,
                      probe_theta0: float = 0.05) -> bool:
    """Criticality of the zigzag birth: at the located bifurcation delay a
    finite-amplitude probe decays exactly when the bifurcating branch is
    stable (supercritical side)."""
    pt = find_dib(a, b, s, g_kind)
    if pt is None:
        raise ValueError(f"no zigzag birth located at a={a}")
    p = Params(a=a, b=b, tau=pt.tau, s=s, g_kind=g_kind)
    r = zigzag_return_map(probe_theta0, p, dt=pt.tau / 300.0)
    return r.theta3 < probe_theta0


def find_criticality_flip(
    b: float,
    s: float,
    g_kind: GKind = GKind.COSINE,
    a_lo: float = 1.03,
    a_hi: float = 1.2,
    tol: float = 1e-3,
) -> float:
    """Gain at which the bifurcating zigzag branch changes stability."""
    lo_stable = dib_branch_stable(a_lo, b, s, g_kind)
    hi_stable = dib_branch_stable(a_hi, b, s, g_kind)
    if lo_stable == hi_stable:
        raise ValueError("criticality does not flip on the bracket")
    lo, hi = a_lo, a_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if dib_branch_stable(mid, b, s, g_kind) == lo_stable:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# saddle-node of zigzag periodic orbits (rule 1)


def _delta_h_extremum(
    tau: float, a: float, b: float, s: float, g_kind: GKind,
    theta_lo: float, theta_hi: float, n: int = 25,
) -> tuple[float, float]:
    """(extremal Delta H, argmax theta0) over a probe grid; the extremum
    tracked is the one closest to zero from the no-orbit side (maximum,
    since growing orbits have negative Delta H)."""
    p = Params(a=a, b=b, tau=tau, s=s, g_kind=g_kind)
    best_v = -math.inf
    best_t = theta_lo
    th = theta_lo
    step = (theta_hi - theta_lo) / (n - 1)
    vals: list[tuple[float, float]] = []
    for i in range(n):
        try:
            r = zigzag_return_map(th, p)
            vals.append((th, r.delta_H))
            if r.delta_H > best_v:
                best_v, best_t = r.delta_H, th
        except SimulationError:
            pass
        th += step
    # parabolic refinement through the grid maximum when interior
    pts = [v for v in vals if abs(v[0] - best_t) <= 1.5 * step]
    if len(pts) == 3:
        (x0, y0), (x1, y1), (x2, y2) = pts
        d1 = (y1 - y0) / (x1 - x0)
        d2 = (y2 - y1) / (x2 - x1)
        curv = (d2 - d1) / (x2 - x0)
        if curv < 0:
            xv = 0.5 * (x0 + x1) - d1 / (2 * curv)
            if theta_lo < xv < theta_hi:
                p2 = Params(a=a, b=b, tau=tau, s=s, g_kind=g_kind)
                try:
                    rv = zigzag_return_map(xv, p2)
                    if rv.delta_H > best_v:
                        best_v, best_t = rv.delta_H, xv
                except SimulationError:
                    pass
    return best_v, best_t


def find_saddle_node(
    a: float,
    b: float,
    s: float,
    g_kind: GKind = GKind.COSINE,
    theta_lo: float = 0.02,
    theta_hi: float = 0.7,
) -> BifPoint | None:
    """Delay at which the Hamiltonian-change map acquires a double root,
    i.e. a pair of zigzag periodic orbits is born."""
    tau_est = abs(dib_curve(a, b, s))
    lo, hi = 0.4 * tau_est, 1.4 * tau_est
    f = lambda tau: _delta_h_extremum(tau, a, b, s, g_kind, theta_lo, theta_hi)[0]
    f_lo, f_hi = f(lo), f(hi)
    if f_lo * f_hi > 0:
        return None
    tau_sn = bisect_root(f, lo, hi, tol=1e-9)
    v, th = _delta_h_extremum(tau_sn, a, b, s, g_kind, theta_lo, theta_hi)
    return BifPoint(BifKind.SADDLE_NODE, a, b, tau_sn, s, th)


# ---------------------------------------------------------------------------
# homoclinic connection to the controlled saddle (rule 1)


def delayed_unstable_lambda(p: Params) -> float:
    """Unstable eigenvalue of the controlled saddle for the delayed
    linearization, from Newton refinement of the instantaneous value."""
    th = saddle_theta(p)
    c = math.cos(th)
    k = math.cos(th) + p.a * th * math.sin(th)

    def f(lam: float) -> float:
        return lam * lam + (p.a + p.b * lam) * c * math.exp(-lam * p.tau) - k

    def fp(lam: float) -> float:
        e = math.exp(-lam * p.tau)
        return 2 * lam + p.b * c * e - p.tau * (p.a + p.b * lam) * c * e

    lam, _, _ = saddle_eigen(p)
    for _ in range(100):
        step = f(lam) / fp(lam)
        lam -= step
        if abs(step) < 1e-14:
            break
    return lam


def _unstable_manifold_history(p: Params, delta: float = 1e-8):
    """Initial data on the inward branch of the saddle's unstable
    manifold: exponential history along the delayed eigenvector."""
    th = saddle_theta(p)
    lam = delayed_unstable_lambda(p)

    def hist(t: float) -> State:
        e = delta * math.exp(lam * t)
        return State(th - e, -lam * e)

    return hist(0.0), hist, th, lam


def shoot_unstable_manifold(
    p: Params, t_max: float = 500.0, dt: float = 2e-3, delta: float = 1e-8
) -> float | None:
    """theta at which the saddle's inward unstable manifold meets the
    switching line, or None when it runs to the origin without meeting it."""
    x0, hist, th_star, _ = _unstable_manifold_history(p, delta)
    crossing: list[float] = []

    def on_event(e: Event) -> bool:
        if e.kind is EventKind.MANIFOLD_CROSS and e.manifold is Manifold.SIGMA1:
            crossing.append(e.state.theta)
            return True
        return False

    res = simulate(
        x0, p, t_max, dt,
        history=hist, start_control_on=True,
        stop_condition=on_event,
        stop_state=lambda t, x: abs(x.theta) < 1e-3 * th_star,
    )
    if crossing:
        return crossing[0]
    return None


def _homoclinic_miss(p: Params, t_max: float = 500.0, dt: float = 2e-3) -> float | None:
    """+1 when the shot along the unstable manifold passes over the saddle
    after its OFF excursion, -1 when it falls back to the switching line;
    None when it never reaches the switching line at all."""
    x0, hist, th_star, _ = _unstable_manifold_history(p)
    sig1 = 0
    outcome: list[float] = []

    def on_event(e: Event) -> bool:
        nonlocal sig1
        if e.kind is EventKind.MANIFOLD_CROSS and e.manifold is Manifold.SIGMA1:
            sig1 += 1
            if sig1 >= 3:
                outcome.append(-1.0)
                return True
        return False

    def past_saddle(t: float, x: State) -> bool:
        if sig1 >= 2 and x.theta > th_star + 0.05:
            outcome.append(1.0)
            return True
        if sig1 == 0 and abs(x.theta) < 1e-3 * th_star:
            return True
        return False

    res = simulate(
        x0, p, t_max, dt,
        history=hist, start_control_on=True,
        stop_condition=on_event, stop_state=past_saddle,
    )
    if outcome:
        return outcome[0]
    if res.status == "diverged" and sig1 >= 2:
        return 1.0
    return None


def find_homoclinic(
    a: float, b: float, s: float, g_kind: GKind = GKind.COSINE, dt: float = 2e-3
) -> BifPoint | None:
    """Delay of the zigzag orbit homoclinic to the controlled saddle,
    by bisection on the over/under outcome of unstable-manifold shooting."""
    probe = Params(a=a, b=b, g_kind=g_kind)
    if g_kind is not GKind.COSINE or not on_equilibria(probe):
        return None
    tau_est = abs(homoclinic_curve(a, b, s))
    lo, hi = 0.3 * tau_est, 2.2 * tau_est
    m_lo = _homoclinic_miss(Params(a=a, b=b, tau=lo, s=s, g_kind=g_kind), dt=dt)
    m_hi = _homoclinic_miss(Params(a=a, b=b, tau=hi, s=s, g_kind=g_kind), dt=dt)
    if m_lo is None or m_hi is None or m_lo == m_hi:
        return None
    while hi - lo > 1e-6 * tau_est:
        mid = 0.5 * (lo + hi)
        m = _homoclinic_miss(Params(a=a, b=b, tau=mid, s=s, g_kind=g_kind), dt=dt)
        if m is None:
            return None
        if m == m_lo:
            lo = mid
        else:
            hi = mid
    tau_hc = 0.5 * (lo + hi)
    return BifPoint(BifKind.HOMOCLINIC, a, b, tau_hc, s, saddle_theta(probe))


# ---------------------------------------------------------------------------
# (a, b)-plane classification via the small-angle system (rule 1)


def classify_plane_point(
    a: float, b: float, tau: float, s: float,
    probe_scale: float = 1.0, t_max: float = 80.0, dt: float = 1e-3,
) -> PlaneRegionLabel:
    """Fate of the two canonical probes of the small-angle system: a
    zigzag probe on the switching line and a spiral probe on the vertical
    axis.  Completion ratios below one mean motion toward the origin."""
    p = Params(a=a, b=b, tau=tau, s=s, g_kind=GKind.ONE)

    def zigzag_probe() -> tuple[str, bool]:
        x0 = State(probe_scale, s * probe_scale)
        result: list[str] = []

        def on_event(e: Event) -> bool:
            if e.kind is not EventKind.MANIFOLD_CROSS or e.t <= 1e-12:
                return False
            if e.manifold is Manifold.SIGMA2:
                result.append("to_spiral")
                return True
            if e.entered_on:
                result.append("in" if abs(e.state.theta) < probe_scale else "out")
                return True
            return False

        simulate(x0, p, t_max, dt, linear=True, stop_condition=on_event)
        if result:
            return result[0], False
        return "out", True

    def spiral_probe() -> tuple[str, bool]:
        x0 = State(0.0, probe_scale)
        result: list[str] = []

        def on_event(e: Event) -> bool:
            if e.kind is not EventKind.MANIFOLD_CROSS or e.t <= 1e-12:
                return False
            if e.manifold is Manifold.SIGMA2:
                result.append("in" if abs(e.state.phi) < probe_scale else "out")
                return True
            if e.entered_on:
                result.append("to_zigzag")
                return True
            return False

        simulate(x0, p, t_max, dt, linear=True, stop_condition=on_event)
        if result:
            return result[0], False
        return "out", True

    z, zt = zigzag_probe()
    sp, st = spiral_probe()
    return PlaneRegionLabel(zigzag=z, spiral=sp, zigzag_trapped=zt, spiral_trapped=st)


# ---------------------------------------------------------------------------
# bursting-regime diagnostics (rule 1, cosine control shape)


def _small_orbit_escapes(a: float, b: float, s: float, tau: float,
                         theta0: float = 1e-4, t_max: float = 900.0,
                         dt: float = 3e-3) -> bool:
    """Whether the forward orbit of a near-origin point on the switching
    line zigzags outward (True) or decays in place (False)."""
    p = Params(a=a, b=b, tau=tau, s=s, g_kind=GKind.COSINE)
    res = simulate(
        State(theta0, s * theta0), p, t_max, dt,
        stop_state=lambda t, x: abs(x.theta) > 100 * theta0 or abs(x.theta) < 1e-2 * theta0,
    )
    return abs(res.state_end.theta) > 100 * theta0 * 0.99 or res.status == "diverged"


def stable_zigzag_orbit(p: Params, theta_lo: float = 0.05, theta_hi: float = 1.2,
                        n: int = 24, tol: float = 1e-9):
    """Stable fixed point of the zigzag return map, or None."""

    def f(th0: float) -> float | None:
        try:
            return zigzag_return_map(th0, p).theta3 - th0
        except SimulationError:
            return None

    prev = None
    step = (theta_hi - theta_lo) / (n - 1)
    for i in range(n):
        th = theta_lo + i * step
        v = f(th)
        if v is None:
            prev = None
            continue
        if prev is not None and prev[1] > 0 and v < 0:
            lo, hi = prev[0], th
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                vm = f(mid)
                if vm is None:
                    return None
                if vm > 0:
                    lo = mid
                else:
                    hi = mid
            th_star = 0.5 * (lo + hi)
            return th_star, zigzag_return_map(th_star, p)
        prev = (th, v)
    return None


def _orbit_off_time(a: float, b: float, s: float, tau: float) -> float | None:
    p = Params(a=a, b=b, tau=tau, s=s, g_kind=GKind.COSINE)
    orbit = stable_zigzag_orbit(p)
    if orbit is None:
        return None
    return orbit[1].T_off


def burst_diagnose(
    b: float = 2.0,
    s: float = -0.1,
    tau: float = 0.3,
    a_range: tuple[float, float] = (1.10, 1.25),
    sample_a: float = 1.18,
    tol: float = 1.5e-3,
) -> BurstDiagnostics:
    """Thresholds of the bursting regime and diagnostics at a sample gain.

    a1: onset of recapture of the outward zigzag from near the origin.
    a2: the saddle's unstable manifold stops meeting the switching line.
    a3: the stable zigzag orbit's OFF-residence time equals the delay.
    """
    a_lo, a_hi = a_range

    def bisect_flag(flag, lo: float, hi: float) -> float | None:
        f_lo, f_hi = flag(lo), flag(hi)
        if f_lo == f_hi:
            return None
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if flag(mid) == f_lo:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    a1 = bisect_flag(
        lambda a: _small_orbit_escapes(a, b, s, tau), a_lo, min(1.155, a_hi)
    )
    a2 = bisect_flag(
        lambda a: shoot_unstable_manifold(Params(a=a, b=b, tau=tau, s=s, g_kind=GKind.COSINE))
        is not None,
        max(a_lo, 1.14), min(1.19, a_hi),
    )
    # a3: the stable orbit's OFF residence hits the delay exactly where the
    # orbit ceases to exist, so secant-extrapolate T_off - tau from the
    # existing side and fall back to the existence boundary
    a3 = None
    f = lambda a: _orbit_off_time(a, b, s, tau)
    step = 0.01
    samples = []
    a_probe = a_hi
    while a_probe > 1.15 and len(samples) < 6:
        t_off = f(a_probe)
        if t_off is None:
            break
        samples.append((a_probe, t_off - tau))
        if t_off - tau < 0:
            break
        a_probe -= step
    if len(samples) >= 2:
        (xa, fa), (xb, fb) = samples[-2], samples[-1]
        for _ in range(30):
            if fb == fa:
                break
            x_new = xb - fb * (xb - xa) / (fb - fa)
            if abs(x_new - xb) < 0.25 * tol:
                xb = x_new
                break
            t_off = f(x_new)
            if t_off is None:
                # crossed the existence boundary; keep the extrapolation
                xb = x_new
                break
            xa, fa, xb, fb = xb, fb, x_new, t_off - tau
        a3 = xb

    reentry = shoot_unstable_manifold(
        Params(a=sample_a, b=b, tau=tau, s=s, g_kind=GKind.COSINE)
    )
    short_theta, kind = _attractor_short_off(sample_a, b, s, tau)
    return BurstDiagnostics(
        a1=a1, a2=a2, a3=a3,
        excursion_reentry_theta=reentry,
        short_off_exit_theta=short_theta,
        attractor_kind=kind,
    )


def _attractor_short_off(
    a: float, b: float, s: float, tau: float,
    t_max: float = 900.0, dt: float = 3e-3,
) -> tuple[float | None, str]:
    """Short-OFF exit angles on the attractor and a periodicity verdict
    from their recurrence after transients."""
    p = Params(a=a, b=b, tau=tau, s=s, g_kind=GKind.COSINE)
    res = simulate(State(0.05, s * 0.05), p, t_max, dt)
    hits = [
        (e.t, e.state.theta)
        for e in res.events
        if e.kind is EventKind.SHORT_OFF_WINDOW
    ]
    settled = [th for (t, th) in hits if t > 0.4 * t_max]
    if not settled:
        return None, "aperiodic"
    spread = max(settled) - min(settled)
    kind = "periodic" if spread < 5e-3 and len(settled) >= 2 else "aperiodic"
    return sum(settled) / len(settled), kind


# ---------------------------------------------------------------------------
# rule 2: return map around (sigma, 0), periodic orbit, BEB/HC


def rule2_return_map(phi0: float, p: Params, t_cap: float = 60.0) -> float:
    """One turn of the forward orbit of (sigma, phi0) back to the upward
    crossing of theta = sigma; raises TrappedOn when it never returns."""
    if p.rule is not Rule.RULE2:
        raise ValueError("the sigma return map applies to rule 2")
    if phi0 <= 0:
        raise ValueError("phi0 must be positive")
    dt = min(1e-3, max(p.tau, 1e-6)) if p.tau > 0 else 1e-3
    hit: list[float] = []

    def on_event(e: Event) -> bool:
        if (
            e.kind is EventKind.MANIFOLD_CROSS
            and e.manifold is Manifold.SIGMA3
            and e.t > 1e-12
            and e.entered_on
        ):
            hit.append(e.state.phi)
            return True
        return False

    simulate(State(p.sigma, phi0), p, t_cap, dt, stop_condition=on_event)
    if not hit:
        raise TrappedOn(f"orbit from (sigma, {phi0}) did not return by t={t_cap}")
    return hit[0]


def rule2_fixed_point(p: Params, phi_guess: float | None = None) -> tuple[float, float]:
    """(phi0, return-map slope) of the periodic orbit encircling
    (sigma, 0), by bisection of the return displacement."""
    from .series import rule2_periodic

    if phi_guess is None:
        phi_guess, _ = rule2_periodic(p)
    f = lambda phi: rule2_return_map(phi, p) - phi
    lo, hi = 0.4 * phi_guess, 2.0 * phi_guess
    f_lo, f_hi = f(lo), f(hi)
    if f_lo * f_hi > 0:
        raise ValueError("no return-map fixed point on the bracket")
    phi_star = bisect_root(f, lo, hi, tol=1e-12 * phi_guess + 1e-15)
    h = 1e-3 * phi_star
    slope = (rule2_return_map(phi_star + h, p) - rule2_return_map(phi_star - h, p)) / (2 * h)
    return phi_star, slope


def rule2_beb(b: float, sigma: float, g_kind: GKind, tau: float = 0.0) -> BifPoint:
    """Gain at which the controlled equilibrium sits exactly on the
    switching manifold theta = sigma."""
    g = math.cos(sigma) if g_kind is GKind.COSINE else 1.0
    a = math.sin(sigma) / (sigma * g)
    return BifPoint(BifKind.BOUNDARY_EQUILIBRIUM, a, b, tau, sigma, sigma)


def _rule2_orbit_amplitude(a: float, p_template: Params, phi_probe: float) -> float:
    """Attracting amplitude of the sigma-encircling orbit (0 when the
    probe decays or is trapped)."""
    p = Params(a=a, b=p_template.b, tau=p_template.tau, s=p_template.s,
               sigma=p_template.sigma, g_kind=p_template.g_kind, rule=Rule.RULE2)
    phi = phi_probe
    try:
        for _ in range(40):
            nxt = rule2_return_map(phi, p)
            if nxt < 1e-6:
                return 0.0
            if abs(nxt - phi) < 1e-7 * max(phi, 1e-9):
                return nxt
            phi = nxt
    except (TrappedOn, SimulationError, ValueError):
        return 0.0
    return phi


def rule2_left_homoclinic(
    p_template: Params, a_lo: float, a_hi: float,
    phi_probe: float = 0.02, tol: float = 1e-3, amp_floor: float = 2e-4,
) -> BifPoint | None:
    """Gain below which the sigma-encircling orbit ceases to exist, by
    bisection on the attracting amplitude of the return map."""
    exists = lambda a: _rule2_orbit_amplitude(a, p_template, phi_probe) > amp_floor
    e_lo, e_hi = exists(a_lo), exists(a_hi)
    if e_lo == e_hi:
        return None
    lo, hi = a_lo, a_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if exists(mid) == e_lo:
            lo = mid
        else:
            hi = mid
    a_hc = 0.5 * (lo + hi)
    return BifPoint(
        BifKind.HOMOCLINIC, a_hc, p_template.b, p_template.tau,
        p_template.sigma, p_template.sigma,
    )


# ---------------------------------------------------------------------------
# branch tables


@dataclass(frozen=True)
class BranchRow:
    a: float
    branch_id: str
    theta_min: float
    theta_max: float
    stability: str  # "stable" | "unstable" | "n/a"


def bif_diagram(
    a_values: list[float], p_template: Params
) -> list[BranchRow]:
    """Equilibria and periodic-orbit extents over a gain grid."""
    rows: list[BranchRow] = []
    for a in a_values:
        p = Params(a=a, b=p_template.b, tau=p_template.tau, s=p_template.s,
                   sigma=p_template.sigma, g_kind=p_template.g_kind,
                   rule=p_template.rule)
        for th in on_equilibria(p):
            admissible = p.rule is Rule.RULE1 or th > p.sigma
            if not admissible:
                continue
            stab = "unstable"
            if p.g_kind is GKind.ONE and a < 1:
                stab = "stable"
            rows.append(BranchRow(a, "equilibrium", th, th, stab))
        if p.rule is Rule.RULE1:
            orbit = stable_zigzag_orbit(p)
            if orbit is not None:
                th0, r = orbit
                rows.append(BranchRow(a, "zigzag_orbit", min(th0, r.theta3),
                                      max(th0, r.theta2, r.theta1), "stable"))
        else:
            try:
                phi_star, slope = rule2_fixed_point(p)
                stab = "stable" if abs(slope) < 1.0 else "unstable"
                rows.append(BranchRow(a, "sigma_orbit", p.sigma, p.sigma + phi_star, stab))
            except (ValueError, SimulationError, TrappedOn):
                pass
    return rows
