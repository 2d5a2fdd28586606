import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.dc.convex import PiecewiseLinear1D
from src.dc.interpolation import slopes_and_turning
from src.geometry.isometry import PlanarIsometry
from src.geometry.polyline import Polyline, as_points, line_distance, polyline_distance, segment_distance
from src.geometry.wedge import Wedge, vertex_angles, wedge_at_vertex, wedge_from_slopes
from src.utils.error_handler import DomainError


@pytest.fixture
def vee():
    return Polyline([[-1.0, 1.0], [0.0, 0.0], [1.0, 1.0]])


def test_segment_distance_interior_projection():
    result = segment_distance((0.0, 1.0), (-1.0, 0.0), (1.0, 0.0))
    assert result.distance == pytest.approx(1.0)
    assert np.allclose(result.nearest, [0.0, 0.0])


def test_segment_distance_past_endpoint_differs_from_line():
    z, a, b = (3.0, 1.0), (0.0, 0.0), (2.0, 0.0)
    assert segment_distance(z, a, b).distance == pytest.approx(math.sqrt(2.0))
    assert line_distance(z, a, b) == pytest.approx(1.0)


def test_degenerate_segment_is_a_point():
    result = segment_distance((3.0, 4.0), (0.0, 0.0), (0.0, 0.0))
    assert result.distance == pytest.approx(5.0)
    with pytest.raises(DomainError):
        line_distance((3.0, 4.0), (1.0, 1.0), (1.0, 1.0))


def test_polyline_tie_reports_both_projections(vee):
    result = polyline_distance((0.0, 0.5), vee)
    assert result.distance == pytest.approx(0.5 / math.sqrt(2.0))
    assert len(result.projections) == 2
    assert np.allclose(sorted(result.projections[:, 0]), [-0.25, 0.25])
    assert set(result.segments) == {0, 1}


def test_polyline_vertex_projection_is_deduplicated(vee):
    result = vee.project((0.0, -2.0))
    assert result.distance == pytest.approx(2.0)
    assert result.projections.shape == (1, 2)
    assert np.allclose(result.nearest, [0.0, 0.0])


def test_batched_distances_match_projection(vee):
    rng = np.random.default_rng(3)
    points = rng.uniform(-2.0, 2.0, size=(200, 2))
    batch = vee.distances(points)
    single = np.array([polyline_distance(z, vee).distance for z in points])
    assert np.allclose(batch, single, atol=1e-14)


def test_polyline_validation():
    with pytest.raises(DomainError):
        Polyline([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]])
    with pytest.raises(DomainError):
        Polyline([[0.0, 0.0]])
    with pytest.raises(DomainError):
        as_points(np.zeros((3, 3)))


def test_polyline_from_graph_and_normals():
    p = Polyline.from_graph(PiecewiseLinear1D([0.0, 1.0, 2.0], [0.0, 0.0, 1.0]))
    assert p.is_graph
    assert np.allclose(p.slopes, [0.0, 1.0])
    assert np.allclose(p.normals[0], [0.0, 1.0])
    assert np.allclose(p.normals[1], np.array([-1.0, 1.0]) / np.sqrt(2.0))


def test_vertex_angles_of_abs(vee):
    betas, alphas, total = vertex_angles(vee)
    assert np.allclose(betas, [-math.pi / 4, math.pi / 4])
    assert np.allclose(alphas, [math.pi / 2])
    assert total == pytest.approx(math.pi / 2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(min_value=-10.0, max_value=10.0), min_size=3, max_size=16))
def test_vertex_angle_below_slope_change(values):
    p = PiecewiseLinear1D(np.linspace(-1.0, 1.0, len(values)), values)
    _, alphas, total = vertex_angles(p)
    s, turning = slopes_and_turning(p)
    assert alphas.shape == (len(values) - 2,)
    assert np.all(alphas <= np.abs(np.diff(s)) + 1e-12)
    assert total <= turning + 1e-9


def test_vertex_angles_need_graph():
    with pytest.raises(DomainError):
        vertex_angles(Polyline([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]]))


def test_wedge_at_vee_vertex():
    wedge = wedge_at_vertex((-1.0, 1.0), (0.0, 0.0), (1.0, 1.0))
    assert np.allclose(wedge.bisector, [0.0, -1.0])
    assert wedge.half_angle == pytest.approx(math.pi / 4)
    inside = wedge.contains([[0.0, -1.0], [1.0, -1.0], [0.0, 1.0], [1.0, -0.5]])
    assert inside.tolist() == [True, True, False, False]


def test_wedge_from_slopes_matches_vertex_construction():
    a = wedge_from_slopes((0.0, 0.0), -1.0, 1.0)
    b = wedge_at_vertex((-1.0, 1.0), (0.0, 0.0), (1.0, 1.0))
    assert np.allclose(a.bisector, b.bisector)
    assert a.half_angle == pytest.approx(b.half_angle)


def test_collinear_vertices_have_no_wedge():
    assert wedge_at_vertex((-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)) is None
    assert wedge_from_slopes((0.0, 0.0), 2.0, 2.0) is None


def test_folded_polyline_is_rejected():
    with pytest.raises(DomainError):
        wedge_at_vertex((1.0, 0.0), (0.0, 0.0), (1.0, 0.0))


def test_wedge_validation():
    with pytest.raises(DomainError):
        Wedge((0.0, 0.0), (2.0, 0.0), 0.5)
    with pytest.raises(DomainError):
        Wedge((0.0, 0.0), (1.0, 0.0), math.pi / 2)


def test_wedge_local_coordinates():
    wedge = Wedge((1.0, 1.0), (0.0, 1.0), 0.3)
    x, y = wedge.local_coordinates([[1.0, 3.0], [2.0, 1.0]])
    assert np.allclose(x, [2.0, 0.0])
    assert np.allclose(y, [0.0, -1.0])


def test_isometry_round_trip():
    iso = PlanarIsometry(math.pi / 2, (1.0, 0.0))
    image = iso.apply([[1.0, 0.0]])
    assert np.allclose(image, [[1.0, 1.0]])
    assert np.allclose(iso.inverse_apply(image), [[1.0, 0.0]])
    assert np.allclose(iso.inverse().apply(image), [[1.0, 0.0]])


def test_isometry_composition():
    rotate = PlanarIsometry(math.pi / 2)
    shift = PlanarIsometry.translation_by(2.0, -1.0)
    both = shift.compose(rotate)
    assert np.allclose(both.apply([[1.0, 0.0]]), [[2.0, 0.0]])
    assert not both.is_identity
    assert PlanarIsometry().is_identity


if __name__ == "__main__":
    pytest.main()
