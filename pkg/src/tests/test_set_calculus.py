import dataclasses
import json
import math

import numpy as np
import pytest
from unittest.mock import patch

from src.dc.builtins import absolute, constant, max5, pl, poly5cos_value, quadratic, sq_minus_abs
from src.sets.gallery import (
    GALLERY,
    d1_counterexample,
    d1_finite,
    envelope_values,
    gallery,
    nowhere_dense,
    oscillation_zero_set,
)
from src.sets.identities import (
    BOUNDARY_TRIPLES,
    asplund_support,
    asplund_support_batch,
    boundary_identity_check,
    boundary_triple,
    tube_identity_check,
    tube_setup,
)
from src.sets.line_sets import Interval1DSet, components_locally_finite
from src.sets.primitives import Disk, Epigraph, Graph, HalfPlane, Hypograph, Point, Ray, Segment, Tube
from src.sets.scene import Scene, load_scene, scene_from_dict
from src.sets.truncated import TruncatedGraph, truncated_graph_distance
from src.utils.error_handler import ConfigError, DomainError, PreconditionError
from src.verify.sampling import BoxRegion, sample_points


@pytest.fixture
def two_points():
    return Scene((Point((0.0, 0.0)),)) | Scene((Point((2.0, 0.0)),))


def test_graph_distance_to_parabola():
    parabola = Graph(quadratic(), (-1.0, 1.0))
    assert parabola.distance((0.0, 1.0)) == pytest.approx(math.sqrt(0.75), abs=1e-8)
    assert parabola.distance((0.5, 0.25)) == pytest.approx(0.0, abs=1e-9)


def test_union_keeps_all_nearest_points(two_points):
    result = two_points.project((1.0, 0.0))
    assert result.distance == pytest.approx(1.0)
    assert len(result.projections) == 2
    assert two_points.distance((3.0, 0.0)) == pytest.approx(1.0)


def test_union_is_pointwise_minimum():
    first = Scene((Disk((1.0, 1.0), 0.5), Segment((-2.0, 0.0), (0.0, -1.0))))
    second = Scene((HalfPlane((1.0, 0.0), -2.5), Ray((-2.0, 2.0), (-1.0, 0.0))))
    points = np.random.default_rng(2).uniform(-3.0, 3.0, size=(300, 2))
    both = (first | second).distances(points)
    assert np.allclose(both, np.minimum(first.distances(points), second.distances(points)), atol=1e-15)


def test_empty_scene_has_no_distance():
    with pytest.raises(DomainError):
        Scene(()).distance((0.0, 0.0))


def test_disk_parts():
    solid, circle, outside = (Disk((0.0, 0.0), 1.0, part) for part in ("solid", "boundary", "exterior"))
    assert solid.distance((0.5, 0.0)) == 0.0
    assert circle.distance((0.5, 0.0)) == pytest.approx(0.5)
    assert outside.distance((0.5, 0.0)) == pytest.approx(0.5)
    assert solid.distance((3.0, 4.0)) == pytest.approx(4.0)
    assert circle.project((0.0, 0.0)).distance == pytest.approx(1.0)
    assert solid.reach == math.inf and circle.reach == 1.0


def test_half_plane_and_ray():
    lower = HalfPlane((0.0, 1.0), 0.0)
    assert lower.distance((0.0, -3.0)) == 0.0
    assert lower.distance((1.0, 2.0)) == pytest.approx(2.0)
    assert HalfPlane((0.0, 1.0), 0.0, "boundary").distance((0.0, -3.0)) == pytest.approx(3.0)
    ray = Ray((0.0, 0.0), (0.0, 2.0))
    assert ray.distance((1.0, 5.0)) == pytest.approx(1.0)
    assert ray.distance((0.0, -2.0)) == pytest.approx(2.0)


def test_epigraph_and_hypograph_of_abs():
    epi = Epigraph(absolute(), (-1.0, 1.0))
    hypo = Hypograph(absolute(), (-1.0, 1.0))
    assert epi.distance((0.0, 1.0)) == 0.0
    assert epi.distance((0.0, -1.0)) == pytest.approx(1.0)
    assert hypo.distance((0.0, -1.0)) == 0.0
    assert hypo.distance((0.0, 1.0)) == pytest.approx(1.0 / math.sqrt(2.0))
    assert epi.reach == math.inf
    assert Epigraph(sq_minus_abs(), (-1.0, 1.0)).reach is None


def test_tube_around_point():
    tube = Tube(Point((0.0, 0.0)), 1.0)
    assert tube.distance((0.5, 0.0)) == 0.0
    assert tube.distance((3.0, 0.0)) == pytest.approx(2.0)
    assert np.allclose(tube.project((3.0, 0.0)).nearest, [1.0, 0.0])
    # sublevel form: the centre lies in the tube, one unit from the level circle
    assert tube.distance((0.0, 0.0)) == 0.0
    assert np.allclose(tube.project((0.0, 0.0)).nearest, [0.0, 0.0])
    level = Disk((0.0, 0.0), 1.0, "boundary")
    assert level.distance((0.0, 0.0)) == pytest.approx(1.0)


def test_boundary_triples_satisfy_identity():
    for name in BOUNDARY_TRIPLES:
        report = boundary_triple(name).check(resolution=24)
        assert report.passed, report.to_dict()


def test_boundary_identity_needs_boundary():
    with pytest.raises(PreconditionError):
        boundary_identity_check(Scene((Point((0.0, 0.0)),)), Scene((Point((1.0, 0.0)),)), Scene(()), [[0.0, 0.0]])


@pytest.mark.parametrize("name, r", [("disk", 0.5), ("half-plane", 1.0)])
def test_tube_identity_exact_setups(name, r):
    report = tube_identity_check(tube_setup(name), r, count=512, seed=3, tol=1e-12)
    assert report.passed, report.to_dict()
    assert report.samples > 0


def test_tube_identity_semiconcave_setup():
    report = tube_identity_check(tube_setup("hypograph-neg-quadratic"), 0.1, count=128, seed=4, tol=1e-6)
    assert report.passed, report.to_dict()


def test_tube_radius_beyond_reach():
    setup = tube_setup("disk")
    capped = dataclasses.replace(setup, a=Scene((Disk((0.0, 0.0), 1.0, reach_override=0.5),)))
    with pytest.raises(PreconditionError):
        tube_identity_check(capped, 0.7)
    with pytest.raises(PreconditionError):
        tube_identity_check(setup, 0.0)


def test_squared_distance_split(two_points):
    c, residual = asplund_support(two_points, (3.0, 0.0))
    assert c == pytest.approx(8.0)
    assert residual == pytest.approx(0.0, abs=1e-12)
    scene = Scene((Graph(pl([-1.0, 0.0, 1.0], [1.0, 0.0, 1.0]), (-1.0, 1.0)), Segment((-1.0, -1.0), (1.0, -2.0))))
    points = np.random.default_rng(8).uniform(-2.0, 2.0, size=(200, 2))
    _, residuals = asplund_support_batch(scene, points)
    assert np.max(residuals) <= 1e-12


def test_squared_distance_split_rejects_curved_sets():
    with pytest.raises(DomainError):
        asplund_support(Scene((Disk((0.0, 0.0), 1.0),)), (2.0, 0.0))


def test_line_sets():
    finite = d1_finite()
    assert finite.components == 3
    assert np.allclose(finite.distances([1.5, 2.5, -1.0, 0.5]), [0.5, 0.5, 1.0, 0.0])
    assert finite.gaps() == ((1.0, 2.0), (2.0, 3.0))
    with pytest.raises(DomainError):
        Interval1DSet(((0.0, 1.0), (1.0, 2.0)))


def test_locally_finite_components():
    assert components_locally_finite(d1_finite(), (-1.0, 5.0)) == (True, None)
    assert components_locally_finite(d1_counterexample(50), (-1.0, 1.0)) == (False, 0.0)
    assert components_locally_finite(d1_counterexample(50), (0.5, 1.0)) == (True, None)


def test_oscillation_zero_set_components_are_nonnegative():
    h = oscillation_zero_set(8)
    mids = np.array([0.5 * (lo + hi) for lo, hi in h.intervals])
    assert np.all(poly5cos_value(mids) >= 0.0)
    gaps = np.array([0.5 * (lo + hi) for lo, hi in h.gaps()])
    assert np.all(poly5cos_value(gaps[np.abs(gaps) > 1.0 / 17.0]) < 0.0)
    assert h.limit_points == (0.0,)


def test_envelopes_bracket_g():
    xs = np.linspace(-1.0, 1.0, 4001)
    g = poly5cos_value(xs)
    for kind in ("U", "U~"):
        assert np.all(envelope_values(xs, kind) >= g)
    for kind in ("L", "L~"):
        assert np.all(envelope_values(xs, kind) <= g)
    with pytest.raises(ConfigError):
        envelope_values(xs, "V")


@pytest.mark.timeout(120)
def test_nowhere_dense_distance_follows_case_analysis():
    scene, envelopes = nowhere_dense(6)
    assert set(envelopes) == {"U", "U~", "L", "L~"}
    cases = [Graph(max5(), (-1.0, 1.0)), Graph(max5().scale(-1.0), (-1.0, 1.0))]
    cases += [Graph(envelopes[kind], (-1.0, 1.0)) for kind in sorted(envelopes)]
    away = sample_points(BoxRegion(0.15, 1.0, -0.2, 0.2), 64, seed=6)
    d_a = scene.distances(away)
    matrix = np.column_stack([c.distances(away) for c in cases])
    assert np.all(np.min(np.abs(matrix - d_a[:, None]), axis=1) <= 1e-6)


def test_truncated_graph_matches_direct_distance():
    f = sq_minus_abs()
    truncated = TruncatedGraph(f, 0.5, 1.0)
    oracle = Graph(f, (0.0, 0.5))
    for z in [(0.1, -0.2), (-0.05, 0.2), (-0.2, -0.1), (-0.1, 0.0), (0.15, 0.05), (0.0, 0.0)]:
        assert truncated.distance(z) == pytest.approx(oracle.distance(z), abs=1e-8)


@patch("src.sets.truncated.logger")
def test_truncated_graph_regions(mock_logger):
    truncated = TruncatedGraph(sq_minus_abs(), 0.5, 1.0)
    assert truncated.regions((-0.1, 0.0))[3]
    assert truncated.regions((0.1, 0.5))[1]
    assert truncated.regions((0.1, -0.5))[2]
    assert truncated.extended(-0.1, 1) == pytest.approx(-0.2)
    assert truncated.extended(-0.1, -1) == pytest.approx(0.2)
    assert truncated.extended(0.8, 1) == pytest.approx(-0.25)
    truncated.distance((0.0, 0.0))
    mock_logger.debug.assert_called()


def test_truncated_graph_preconditions():
    with pytest.raises(DomainError):
        TruncatedGraph(constant(1.0), 0.5, 1.0)
    with pytest.raises(DomainError):
        truncated_graph_distance((0.0, 0.0), quadratic(), 0.0, 1.0)


def test_gallery_scenes():
    assert set(GALLERY) == {
        "osc-intersection-A",
        "osc-intersection-B",
        "osc-M",
        "osc-K",
        "nowhere-dense-A",
        "d1-counterexample",
        "d1-finite",
        "osc-zero-set",
        "semiconcave-graph",
    }
    assert gallery("osc-intersection-A").distance((0.0, -1.0)) == pytest.approx(1.0)
    assert gallery("d1-counterexample").distance((0.75, 0.0)) == pytest.approx(0.25)
    assert gallery("d1-finite").metadata["line_set"].components == 3
    assert gallery("osc-M", k_max=4).distance((0.0, 0.0)) == 0.0
    with pytest.raises(ConfigError):
        gallery("nope")


def test_osc_k_covers_the_plane_outside_m():
    k = gallery("osc-K")
    for z in [(2.0, 5.0), (-2.0, 3.0), (1.0, 0.5), (0.0, 0.5), (0.5, -0.2)]:
        assert k.distance(z) == 0.0
    inside_m = k.distance((0.5, 0.01))
    assert 0.0 < inside_m <= 0.01


def test_scene_documents(tmp_path):
    doc = {
        "primitives": [
            {"kind": "disk", "center": [0, 0], "radius": 1},
            {"kind": "graph", "function": {"builtin": "quadratic"}, "interval": [-1, 1], "isometry": {"translation": [5, 0]}},
        ]
    }
    scene = scene_from_dict(doc)
    assert scene.distance((2.0, 0.0)) == pytest.approx(1.0)
    assert scene.distance((5.0, 0.0)) == pytest.approx(0.0, abs=1e-9)
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(doc))
    assert load_scene(str(path)).distance((2.0, 0.0)) == pytest.approx(1.0)


@pytest.mark.parametrize(
    "doc",
    [
        {"primitives": []},
        {"primitives": [{"kind": "blob"}]},
        {"primitives": [{"kind": "disk", "center": [0, 0]}]},
        {"primitives": [{"kind": "disk", "center": [0, 0], "radius": -1}]},
        {"shapes": []},
    ],
)
def test_bad_scene_documents(doc):
    with pytest.raises(ConfigError):
        scene_from_dict(doc)


if __name__ == "__main__":
    pytest.main()
