import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from levelseg import contour, raster
from levelseg.contour import Contour


def _circle_length_error(n):
    r = n * 10 / 64
    cs = contour.extract_zero_set(oracles.circle_sdf(n, n, n / 2 + 0.3, n / 2 - 0.2, r))
    return abs(contour.contour_length(cs[0]) - 2 * np.pi * r) / (2 * np.pi * r)


def test_circle_extraction():
    cs = contour.extract_zero_set(oracles.circle_sdf(64, 64, 32, 32, 10))
    assert len(cs) == 1 and cs[0].closed
    assert contour.contour_length(cs[0]) == pytest.approx(2 * np.pi * 10, rel=0.02)
    assert np.allclose(np.hypot(cs[0].vertices[:, 0] - 32, cs[0].vertices[:, 1] - 32), 10, atol=0.05)


def test_positive_field_has_no_contour():
    assert contour.extract_zero_set(np.ones((10, 10))) == []


def test_two_disks():
    phi = np.minimum(oracles.circle_sdf(64, 64, 16, 20, 8), oracles.circle_sdf(64, 64, 44, 40, 10))
    cs = contour.extract_zero_set(phi)
    assert len(cs) == 2 and all(c.closed for c in cs)


def test_border_crossing_is_open():
    xx = np.mgrid[0:12, 0:12][1].astype(float) - 5.5
    cs = contour.extract_zero_set(xx)
    assert len(cs) == 1 and not cs[0].closed
    assert np.allclose(cs[0].vertices[:, 0], 5.5)


def test_exact_zero_counts_as_outside():
    phi = np.ones((5, 5))
    phi[2, 2] = 0.0
    assert contour.extract_zero_set(phi) == []
    phi[2, 2] = -1.0
    assert len(contour.extract_zero_set(phi)) == 1


@pytest.mark.parametrize("other, expected", [(0.5, 1), (3.0, 2)])
def test_saddle_rule(other, expected):
    # diagonal corners inside; the cell-centre average decides whether they join
    phi = np.ones((4, 4))
    phi[1, 1] = phi[2, 2] = -1.0
    phi[1, 2] = phi[2, 1] = other
    cs = contour.extract_zero_set(phi)
    assert len(cs) == expected and all(c.closed for c in cs)


# magnitudes below 1e-6 put interpolated crossings on top of each other
_VALUES = st.one_of(st.floats(1e-6, 1), st.floats(-1, -1e-6))


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (9, 11), elements=_VALUES))
def test_segments_pair_up(phi):
    fixed, segs = contour.cell_segments(phi)
    inside = fixed < 0
    case = (inside[:-1, :-1] * 1 + inside[:-1, 1:] * 2 + inside[1:, 1:] * 4 + inside[1:, :-1] * 8)
    expected = sum(2 if c in (5, 10) else (0 if c in (0, 15) else 1) for c in case.ravel())
    assert len(segs) == expected
    degree = {}
    for a, b in segs:
        degree[a] = degree.get(a, 0) + 1
        degree[b] = degree.get(b, 0) + 1
    h, w = phi.shape
    for (kind, i, j), d in degree.items():
        on_border = (kind == "h" and i in (0, h - 1)) or (kind == "v" and j in (0, w - 1))
        assert d == 2 or (d == 1 and on_border)
    for c in contour.extract_zero_set(phi):
        assert len(c) >= 2
        steps = np.hypot(*np.diff(c.vertices, axis=0).T)
        assert (steps <= np.sqrt(2) + 0.01).all()
        if c.closed:
            assert len({tuple(v) for v in c.vertices}) == len(c)


def test_resolution_convergence():
    e64, e128 = _circle_length_error(64), _circle_length_error(128)
    assert e128 <= e64 / 2


def test_lengths():
    assert contour.contour_length(Contour([(0, 0), (3, 4)])) == 5
    square = Contour([(0, 0), (1, 0), (1, 1), (0, 1)], closed=True)
    assert contour.contour_length(square) == 4


def _segment(length):
    return Contour([(0, 0), (length, 0)])


def test_filter_by_length():
    cs = [_segment(12), _segment(45), _segment(80)]
    kept = contour.filter_by_length(cs, 30)
    assert [contour.contour_length(c) for c in kept] == [45, 80]
    assert contour.filter_by_length(cs, 0) == cs
    assert contour.filter_by_length(cs, 100) == []
    assert contour.filter_by_length(kept, 30) == kept
    with pytest.raises(ValueError):
        contour.filter_by_length(cs, -1)


@pytest.mark.parametrize("seg", [(0, 0, 7, 3), (5, 1, 0, 6), (2, 9, 2, 0), (1, 4, 8, 4), (3, 3, 3, 3)])
def test_bresenham_matches_textbook(seg):
    assert sorted(contour.bresenham(*seg)) == sorted(oracles.bresenham_pixels(*seg))


def test_overlay():
    img = np.linspace(0, 1, 80).reshape(8, 10)
    plain = contour.render_overlay(img, [])
    assert plain.samples.shape == (8, 10, 3)
    assert (plain.samples[:, :, 0] == plain.samples[:, :, 2]).all()
    red = contour.render_overlay(img, [Contour([(1.2, 3.0), (7.4, 3.1)])])
    painted = {(x, y) for y, x in zip(*np.nonzero((red.samples == (255, 0, 0)).all(axis=2)))}
    assert painted == {(x, 3) for x in range(1, 8)}


def test_csv_and_svg_formats():
    open_c = Contour([(0, 0), (1.5, 2), (3, 1)])
    closed_c = Contour([(0, 0), (1, 0), (1, 1)], closed=True)
    text = contour.contours_csv([open_c])
    assert text.splitlines() == ["contour_id,vertex_index,x,y", "0,0,0.000000,0.000000",
                                 "0,1,1.500000,2.000000", "0,2,3.000000,1.000000"]
    assert contour.contours_csv([]) == "contour_id,vertex_index,x,y\n"
    svg = contour.contours_svg([closed_c, open_c], 20, 10)
    assert 'viewBox="0 0 20 10"' in svg
    assert svg.count("<polygon") == 1 and svg.count("<polyline") == 1
    empty = contour.contours_svg([], 20, 10)
    assert "<g" in empty and "<poly" not in empty


def test_export_writes_files(tmp_path):
    c = [Contour([(0, 0), (2, 2)])]
    contour.export_contours(c, "csv", tmp_path / "a.csv")
    contour.export_contours(c, "svg", tmp_path / "a.svg", 8, 8)
    assert (tmp_path / "a.csv").read_text() == contour.contours_csv(c)
    assert (tmp_path / "a.svg").read_text().startswith("<svg")
    with pytest.raises(OSError, match="missing"):
        contour.export_contours(c, "csv", tmp_path / "missing" / "a.csv")
    with pytest.raises(ValueError):
        contour.export_contours(c, "png", tmp_path / "a.png")


def test_overlay_roundtrips_as_ppm(tmp_path):
    img = contour.render_overlay(np.zeros((6, 6)), [Contour([(0, 0), (5, 5)])])
    raster.write_pnm(img, tmp_path / "o.ppm")
    back = raster.load_pnm(tmp_path / "o.ppm")
    assert np.array_equal(back.samples, img.samples)
