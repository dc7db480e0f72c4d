import math

import pytest

from teeter.engine import (
    EventKind,
    InvalidStart,
    NotZigzag,
    OscillationTag,
    classify_oscillation,
    simulate,
    zigzag_return_map,
)
from teeter.model import GKind, Params, Rule, State, hamiltonian


FIG4 = Params(a=2.5, b=2.0, tau=0.25, s=-0.3, g_kind=GKind.COSINE)


def test_off_flow_conserves_energy():
    # tau larger than the horizon keeps every scheduled switch from firing,
    # so the run is pure pendulum flow.
    p = Params(a=2.0, b=2.0, tau=50.0, s=-0.01)
    res = simulate(State(1.3, -1.0), p, t_max=2.0, dt=1e-3)
    h0 = hamiltonian(State(1.3, -1.0))
    for t in (0.5, 1.0, 2.0):
        assert hamiltonian(res.state_at(t)) == pytest.approx(h0, abs=1e-12)


def test_invalid_start_inside_on_region():
    with pytest.raises(InvalidStart):
        simulate(State(0.5, 0.5), FIG4, t_max=1.0)


def test_dense_output_matches_endpoints():
    p = Params(a=2.0, b=2.0, tau=50.0, s=-0.01)
    x0 = State(0.8, -0.3)
    res = simulate(x0, p, t_max=1.0, dt=1e-3)
    assert res.state_at(0.0).theta == pytest.approx(0.8, abs=1e-14)
    assert res.state_at(res.t_end) == res.state_end


def test_zigzag_return_contracts_for_fig4_parameters():
    r = zigzag_return_map(0.5, FIG4)
    assert abs(r.theta3) < 0.5
    # The return approaches the H = 1 level set from below.
    h1 = hamiltonian(State(r.theta1, r.phi1))
    h2 = hamiltonian(State(r.theta2, r.phi2))
    assert h1 < 1.0 and h2 < 1.0
    assert r.delta_H > 0.0
    assert r.T_int > 0.0 and r.T_off > 0.0


def test_zigzag_map_rejects_spiral_half():
    # Strong delay pushes the orbit across theta = 0 instead of returning.
    p = Params(a=2.5, b=2.0, tau=1.2, s=-0.3, g_kind=GKind.COSINE)
    with pytest.raises(NotZigzag):
        zigzag_return_map(0.3, p)


def test_classify_oscillation_zigzag():
    res = simulate(State(0.5, FIG4.s * 0.5), FIG4, t_max=6.0, dt=1e-3)
    tags = classify_oscillation(res.events, FIG4)
    assert tags and all(t is OscillationTag.ZIGZAG for t in tags)


def test_trajectory_negation_symmetry():
    p = Params(a=1.4, b=1.0, tau=0.2, s=-0.05, g_kind=GKind.COSINE)
    x0 = State(0.4, p.s * 0.4)
    res = simulate(x0, p, t_max=5.0, dt=1e-3)
    neg = simulate(-x0, p, t_max=5.0, dt=1e-3)
    for t in (0.7, 1.9, 3.3, 4.8):
        x = res.state_at(t)
        y = neg.state_at(t)
        assert y.theta == pytest.approx(-x.theta, abs=1e-9)
        assert y.phi == pytest.approx(-x.phi, abs=1e-9)


def test_rule2_simulation_runs_and_switches():
    p = Params(a=2.5, b=0.5, tau=1e-3, sigma=0.3, rule=Rule.RULE2,
               g_kind=GKind.COSINE)
    res = simulate(State(p.sigma, 0.5), p, t_max=5.0, dt=1e-3,
                   start_control_on=True)
    crossings = [e for e in res.events if e.kind == EventKind.MANIFOLD_CROSS]
    assert crossings, "rule-2 orbit should cross the switching lines"
    assert res.status == "t_max"


def test_linear_mode_matches_small_amplitude():
    p = Params(a=2.0, b=2.0, tau=50.0, s=-0.01)
    x0 = State(1e-5, -2e-7)
    res = simulate(x0, p, t_max=1.0, dt=1e-3, linear=True)
    # linearized OFF flow is theta'' = theta
    expected = x0.theta * math.cosh(1.0) + x0.phi * math.sinh(1.0)
    assert res.state_at(1.0).theta == pytest.approx(expected, rel=1e-8)
