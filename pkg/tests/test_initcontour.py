import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from levelseg import field, initcontour as ic


def test_circle_sdf_values():
    phi = ic.init_levelset([ic.Circle(32, 32, 10)], 64, 64)
    assert phi[32, 32] == -10
    assert phi[42, 32] == 0 and phi[32, 42] == 0
    assert phi[52, 32] == 10
    assert np.allclose(phi, oracles.circle_sdf(64, 64, 32, 32, 10), atol=1e-12)


def test_rect_binary_step():
    phi = ic.init_levelset([ic.Rect(10, 10, 20, 20)], 64, 64, mode="binary_step")
    assert phi[15, 15] == -2 and phi[0, 0] == 2
    assert set(np.unique(phi)) == {-2.0, 2.0}


def test_rect_sdf_distances():
    phi = ic.init_levelset([ic.Rect(10, 10, 30, 20)], 40, 40)
    assert phi[15, 20] == pytest.approx(-5)  # 5 from the top and bottom edges
    assert phi[15, 0] == pytest.approx(10)
    assert phi[0, 0] == pytest.approx(np.hypot(10, 10))


def test_union_of_two_circles():
    shapes = [ic.Circle(16, 16, 6), ic.Circle(46, 46, 6)]
    phi = ic.init_levelset(shapes, 64, 64)
    assert phi[16, 16] < 0 and phi[46, 46] < 0 and phi[32, 32] > 0
    assert np.allclose(phi, np.minimum(oracles.circle_sdf(64, 64, 16, 16, 6),
                                      oracles.circle_sdf(64, 64, 46, 46, 6)), atol=1e-12)


def test_sdf_has_unit_gradient():
    phi = ic.init_levelset([ic.Circle(30.5, 33.2, 14)], 64, 64)
    m = field.grad_magnitude(field.grad_central(phi))
    band = np.abs(phi) < 5
    band[:2] = band[-2:] = False
    band[:, :2] = band[:, -2:] = False
    assert np.abs(m[band] - 1).max() < 0.05


@settings(max_examples=40, deadline=None)
@given(cx=st.floats(5, 59), cy=st.floats(5, 59), r=st.floats(2, 20))
def test_binary_step_sign_matches_sdf(cx, cy, r):
    shape = ic.Circle(cx, cy, r)
    a = ic.init_levelset([shape], 64, 64)
    b = ic.init_levelset([shape], 64, 64, mode="binary_step", c0=3.0)
    assert np.array_equal(a < 0, b < 0)


def test_parse_and_str_roundtrip():
    for text in ["circle:32,32,20", "rect:1.5,2,30,40.25", "circle:0.1,0.2,3.3333333333333335"]:
        assert str(ic.parse_shape(text)) == text
    assert ic.parse_shape(" circle:1,2,3 ") == ic.Circle(1, 2, 3)


@pytest.mark.parametrize("bad", ["circle:1,2", "square:1,2,3", "circle:a,b,c", "circle:5,5,1",
                                 "rect:5,5,1,9", "rect:0,0,0,0"])
def test_parse_errors(bad):
    with pytest.raises(ic.InitSpecError):
        ic.parse_shape(bad)


def test_shape_off_grid_and_empty():
    with pytest.raises(ic.InitSpecError):
        ic.init_levelset([ic.Circle(500, 500, 3)], 64, 64)
    with pytest.raises(ic.InitSpecError):
        ic.init_levelset([], 64, 64)
    with pytest.raises(ic.InitSpecError):
        ic.init_levelset([ic.Circle(5, 5, 3)], 64, 64, mode="spline")


def test_default_shape_is_centred():
    r = ic.default_shape(128, 64)
    assert r.x0 + r.x1 == pytest.approx(127) and r.y0 + r.y1 == pytest.approx(63)
    assert (r.x1 - r.x0) == pytest.approx(0.6 * 127)
