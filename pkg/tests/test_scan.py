import math

import pytest

from teeter.model import GKind, Params, Rule
from teeter.scan import (
    classify_plane_point,
    find_dib,
    rule2_beb,
    rule2_fixed_point,
    stable_zigzag_orbit,
)
from teeter.series import dib_curve


def test_find_dib_matches_asymptote():
    pt = find_dib(1.5, 2.0, -0.01)
    assert pt is not None
    predicted = dib_curve(1.5, 2.0, -0.01)
    assert abs(pt.tau - predicted) / predicted < 0.05


def test_classify_plane_far_field():
    lab = classify_plane_point(3.0, 3.0, 0.5, 0.0)
    assert lab.zigzag == "to_spiral"
    assert lab.spiral == "out"


def test_classify_plane_scale_invariant():
    base = classify_plane_point(1.5, 3.5, 0.5, 0.0)
    small = classify_plane_point(1.5, 3.5, 0.5, 0.0, probe_scale=0.1)
    assert (base.zigzag, base.spiral) == (small.zigzag, small.spiral)


def test_rule2_beb_value():
    sigma = 0.3
    assert rule2_beb(0.5, sigma, GKind.ONE).a == pytest.approx(
        math.sin(sigma) / sigma)
    assert rule2_beb(0.5, sigma, GKind.COSINE).a == pytest.approx(
        math.tan(sigma) / sigma)


def test_rule2_fixed_point_is_stable():
    p = Params(a=2.5, b=0.5, tau=1e-3, sigma=0.3, rule=Rule.RULE2,
               g_kind=GKind.COSINE)
    phi_star, slope = rule2_fixed_point(p)
    assert phi_star > 0.0
    assert abs(slope) < 1.0


def test_stable_zigzag_orbit_is_fixed_point():
    p = Params(a=1.22, b=2.0, tau=0.3, s=-0.1, g_kind=GKind.COSINE)
    theta0, ret = stable_zigzag_orbit(p)
    assert abs(ret.theta3 - theta0) < 1e-6 * max(1.0, theta0)
