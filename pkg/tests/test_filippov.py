import math

import numpy as np
import pytest

from teeter.filippov import (
    ZeroDelayEventKind,
    filippov_q,
    grazing_off,
    grazing_on,
    simulate_zero_delay,
    sliding_region,
    sliding_solution,
)
from teeter.model import GKind, Params, State


def test_grazing_off_root_property():
    s = -0.1
    th = grazing_off(s)
    assert math.sin(th) / th == pytest.approx(s * s, abs=1e-12)
    assert grazing_off(0.0) == pytest.approx(math.pi, abs=1e-10)


def test_grazing_on_root_property():
    p = Params(a=1.05, b=2.0, s=-0.01, g_kind=GKind.COSINE)
    th = grazing_on(p)
    g = math.cos(th)
    val = math.sin(th) - (p.a * th + p.b * p.s * th) * g - p.s * p.s * th
    assert val == pytest.approx(0.0, abs=1e-12)


def test_sliding_region_onset_cosine():
    # Attracting sliding on Sigma1 appears once a exceeds 1 - b s - s^2.
    b, s = 2.0, -0.01
    onset = 1.0 - b * s - s * s
    above = sliding_region(Params(a=onset + 1e-4, b=b, s=s, g_kind=GKind.COSINE))
    below = sliding_region(Params(a=onset - 1e-4, b=b, s=s, g_kind=GKind.COSINE))
    assert above is not None and above.hi > above.lo
    assert below is None


def test_filippov_q_small_angle_limit():
    p = Params(a=1.5, b=2.0, s=-0.01, g_kind=GKind.COSINE)
    q = filippov_q(1e-8, p)
    expected = (1.0 - p.s * p.s) / (p.a + p.b * p.s)
    assert q == pytest.approx(expected, rel=1e-6)


def test_sliding_solution_is_exponential():
    s = -0.05
    for t in np.linspace(0.0, 10.0, 11):
        x = sliding_solution(0.2, s, float(t))
        assert x.theta == pytest.approx(0.2 * math.exp(s * t), abs=1e-12)
        assert x.phi == pytest.approx(s * x.theta, abs=1e-14)


def test_zero_delay_sliding_run_reaches_equilibrium():
    p = Params(a=1.05, b=2.0, s=-0.01, g_kind=GKind.COSINE)
    region = sliding_region(p)
    th0 = 0.5 * (region.lo + region.hi)
    res = simulate_zero_delay(State(th0, p.s * th0), p, t_max=3000.0, dt=0.05)
    kinds = [e.kind for e in res.events]
    assert ZeroDelayEventKind.ENTER_SLIDING in kinds
    assert ZeroDelayEventKind.REACH_EQUILIBRIUM in kinds
    assert not res.diverged
    assert abs(res.states[-1].theta) < 1e-6
