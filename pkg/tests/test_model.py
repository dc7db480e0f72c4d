import math

import pytest

from teeter.model import (
    GKind,
    Manifold,
    Params,
    Rule,
    State,
    active_manifolds,
    control_active,
    hamiltonian,
    manifold_value,
    off_field,
    on_equilibria,
    on_field,
    saddle_theta,
)


def test_params_validation():
    with pytest.raises(ValueError):
        Params(a=1.0, b=1.0, tau=-0.1)
    with pytest.raises(ValueError):
        Params(a=1.0, b=1.0, s=0.1)
    with pytest.raises(ValueError):
        Params(a=1.0, b=1.0, sigma=0.0, rule=Rule.RULE2)


def test_off_field_odd():
    x = State(0.4, -0.7)
    f = off_field(x)
    assert f == State(-0.7, math.sin(0.4))
    g = off_field(-x)
    assert g.theta == -f.theta and g.phi == -f.phi


def test_on_field_reduces_to_instantaneous():
    p = Params(a=2.0, b=1.5, s=-0.1, g_kind=GKind.COSINE)
    x = State(0.3, 0.2)
    f = on_field(x, x, p)
    expected = math.sin(0.3) - (2.0 * 0.3 + 1.5 * 0.2) * math.cos(0.3)
    assert f.phi == pytest.approx(expected, abs=1e-15)
    assert f.theta == x.phi


def test_control_boundary_counts_as_off():
    p = Params(a=2.0, b=2.0, s=-0.1)
    assert not control_active(State(0.0, 0.5), p)          # on Sigma2
    assert not control_active(State(0.3, -0.03), p)        # on Sigma1
    assert control_active(State(0.3, 0.1), p)
    p2 = Params(a=2.0, b=2.0, sigma=0.3, rule=Rule.RULE2)
    assert not control_active(State(0.3, 1.0), p2)         # on Sigma3
    assert control_active(State(0.31, 0.0), p2)
    assert control_active(State(-0.31, 0.0), p2)


def test_hamiltonian_origin_is_one():
    assert hamiltonian(State(0.0, 0.0)) == 1.0


def test_manifold_values_and_active_set():
    p = Params(a=1.0, b=1.0, s=-0.2)
    x = State(0.5, 0.1)
    assert manifold_value(x, Manifold.SIGMA1, p) == pytest.approx(0.1 + 0.2 * 0.5)
    assert manifold_value(x, Manifold.SIGMA2, p) == 0.5
    assert active_manifolds(p) == (Manifold.SIGMA1, Manifold.SIGMA2)
    p2 = Params(a=1.0, b=1.0, sigma=0.3, rule=Rule.RULE2)
    assert manifold_value(x, Manifold.SIGMA3, p2) == pytest.approx(0.2)
    assert manifold_value(x, Manifold.SIGMA4, p2) == pytest.approx(0.8)
    assert active_manifolds(p2) == (Manifold.SIGMA3, Manifold.SIGMA4)


def test_on_equilibria_cosine():
    p = Params(a=1.5, b=2.0, g_kind=GKind.COSINE)
    roots = on_equilibria(p)
    assert roots, "expected a controlled equilibrium for a > 1"
    th = roots[0]
    assert math.sin(th) - 1.5 * th * math.cos(th) == pytest.approx(0.0, abs=1e-10)
    assert saddle_theta(p) == pytest.approx(th, abs=1e-10)


def test_on_equilibria_one_gone_for_strong_gain():
    p = Params(a=1.2, b=2.0, g_kind=GKind.ONE)
    assert on_equilibria(p) == []
    weak = Params(a=0.8, b=2.0, g_kind=GKind.ONE)
    roots = on_equilibria(weak)
    assert roots and math.sin(roots[0]) == pytest.approx(0.8 * roots[0], abs=1e-10)


def test_saddle_requires_cosine_and_strong_gain():
    with pytest.raises(ValueError):
        saddle_theta(Params(a=1.5, b=2.0, g_kind=GKind.ONE))
    with pytest.raises(ValueError):
        saddle_theta(Params(a=0.9, b=2.0, g_kind=GKind.COSINE))
