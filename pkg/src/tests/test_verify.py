import json

import numpy as np
import pytest
from unittest.mock import patch

from src.compensator.certificate import build_certificate
from src.dc.builtins import pl, quadratic
from src.dc.interpolation import interpolate_on_partition
from src.sets.gallery import d1_counterexample, d1_finite, oscillation_zero_set
from src.sets.primitives import Graph
from src.sets.scene import Scene
from src.utils.error_handler import ConfigError, DomainError, EvaluationError
from src.verify.checks import (
    STEPS,
    _extrapolate,
    check_comix,
    check_concave,
    check_lipschitz,
    check_onesided_sum,
    check_uniform_convergence,
    detect_non_dc_on_line,
    estimate_dir_deriv,
)
from src.verify.reports import CheckReport, dumps, suite_document, worst
from src.verify.sampling import BoxRegion, DiskRegion, grid, sample_points, unit_directions, unit_samples
from src.verify.suites import SUITES, bounds_suite, convergence_suite, run_suite


@pytest.fixture
def box():
    return BoxRegion(-1.0, 1.0, -1.0, 1.0)


@pytest.fixture
def abs_graph():
    return Scene((Graph(pl([-1.0, 0.0, 1.0], [1.0, 0.0, 1.0]), (-1.0, 1.0)),))


def norm(p):
    return np.hypot(p[:, 0], p[:, 1])


def test_extrapolation_removes_linear_error():
    steps = np.array([1e-2, 1e-3, 1e-4])
    value, residual = _extrapolate((3.0 + 0.5 * steps)[None, :], 10.0)
    assert value[0] == pytest.approx(3.0, abs=1e-12)
    assert residual[0] <= 1e-12


def test_extrapolation_falls_back_on_kinks():
    value, _ = _extrapolate(np.array([[0.5, 0.9, 0.99]]), 10.0)
    assert value[0] == 0.99


def test_extrapolation_falls_back_at_curvature_scale():
    # -|z| seen from a point at distance r along a tangent: linear only for h << r
    r = 2.8e-3
    h = np.array(STEPS)
    quotients = (-(np.sqrt(r**2 + h**2) - r) / h)[None, :]
    value, _ = _extrapolate(quotients, 10.0)
    assert value[0] == quotients[0, -1]


def test_onesided_sum_of_certificate_near_graph():
    cert = build_certificate(quadratic(), 64)
    v = np.array([-0.2917, 0.9565])
    directions = np.array([v / np.hypot(*v), (1.0, 0.0)])
    report = check_onesided_sum(cert.c_star, [(0.000965, 0.002675)], directions)
    assert report.passed, report.to_dict()


def test_estimate_dir_deriv():
    smooth = estimate_dir_deriv(lambda p: p[:, 0] ** 2 + p[:, 1], (1.0, 0.0), (1.0, 0.0))
    assert smooth.value == pytest.approx(2.0, abs=1e-8)
    assert smooth.steps == (1e-2, 1e-3, 1e-4, 1e-5)
    cone = estimate_dir_deriv(norm, (0.0, 0.0), (0.0, 1.0))
    assert cone.value == pytest.approx(1.0)


def test_estimate_dir_deriv_needs_unit_direction():
    with pytest.raises(DomainError):
        estimate_dir_deriv(norm, (0.0, 0.0), (2.0, 0.0))


def test_non_finite_values_are_reported():
    with pytest.raises(EvaluationError):
        with np.errstate(divide="ignore"):
            estimate_dir_deriv(lambda p: np.log(p[:, 0]), (0.0, 1.0), (1.0, 0.0))


def test_check_concave(box):
    assert check_concave(lambda p: -(p[:, 0] ** 2 + p[:, 1] ** 2), box, 512, seed=1).passed
    report = check_concave(lambda p: p[:, 0] ** 2, box, 512, seed=1)
    assert not report.passed
    assert report.residual > 0.0
    assert len(report.witness) == 3


def test_check_lipschitz(box):
    report = check_lipschitz(norm, box, 1.0, 512, seed=2)
    assert report.passed
    assert report.details["max_ratio"] <= 1.0 + 1e-9
    assert not check_lipschitz(norm, box, 0.5, 512, seed=2).passed
    with pytest.raises(DomainError):
        check_lipschitz(norm, box, 0.0)


def test_onesided_sum_of_graph_distance(abs_graph):
    points = [(0.0, 0.5), (0.3, 0.9), (-0.2, -0.5), (0.2, -0.3), (0.0, -0.4)]
    report = check_onesided_sum(abs_graph.distances, points, unit_directions(8, 3))
    assert report.passed, report.to_dict()
    assert report.samples == 40


def test_onesided_sum_detects_convex_kink():
    report = check_onesided_sum(norm, [(0.0, 0.0)], [(1.0, 0.0)])
    assert not report.passed
    assert report.residual == pytest.approx(2.0)


def test_detector_flags_d1_counterexample():
    s = d1_counterexample(100)
    mids = np.array([0.5 * (lo + hi) for lo, hi in s.gaps()])
    report = detect_non_dc_on_line(s.distances, 0.0, mids)
    assert report.details["flagged"]
    assert report.details["oscillation"]["right"] == pytest.approx(2.0)
    assert len(report.details["per_level"]["right"]) == 4
    assert all(s == pytest.approx(2.0) for s in report.details["per_level"]["right"])


def test_detector_ignores_single_kink():
    # one kink of |x - k| inside the window changes the derivative sign once
    offsets = 0.3 * 2.0 ** -np.arange(20)
    kink = float(offsets[5])
    report = detect_non_dc_on_line(lambda xs: np.abs(xs - kink), 0.0, np.concatenate([-offsets, offsets]))
    assert not report.details["flagged"]
    assert report.details["oscillation"]["right"] == pytest.approx(0.0, abs=1e-6)
    assert max(report.details["per_level"]["right"]) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        detect_non_dc_on_line(np.abs, 0.0, offsets, levels=0)


def test_detector_flags_oscillation_zero_set():
    s = oscillation_zero_set(24)
    mids = np.array([0.5 * (lo + hi) for lo, hi in s.gaps()])
    assert detect_non_dc_on_line(s.distances, 0.0, mids).details["flagged"]


@pytest.mark.parametrize("a", [0.0, 1.0, 2.0])
def test_detector_accepts_finite_set(a):
    offsets = 0.3 * 2.0 ** -np.arange(20)
    report = detect_non_dc_on_line(d1_finite().distances, a, np.concatenate([a - offsets, a + offsets]))
    assert not report.details["flagged"]
    assert report.passed


def test_uniform_convergence_of_interpolants():
    f = quadratic()
    line = np.column_stack([np.linspace(-1.0, 1.0, 257), np.zeros(257)])
    sequence = {n: (lambda p, q=interpolate_on_partition(f, n): q(p[:, 0])) for n in (8, 16, 32)}
    report = check_uniform_convergence(lambda p: p[:, 0] ** 2, sequence, line, min_ratio=3.9)
    assert report.passed
    assert report.details["errors"][0] == pytest.approx(1.0 / 64.0)
    assert all(r == pytest.approx(4.0) for r in report.details["ratios"])


def test_uniform_convergence_detects_stall():
    line = np.column_stack([np.linspace(-1.0, 1.0, 11), np.zeros(11)])
    stuck = {n: (lambda p: p[:, 0] + 1.0) for n in (1, 2, 3)}
    assert not check_uniform_convergence(lambda p: p[:, 0], stuck, line).passed


def test_comix_concave(box):
    report = check_comix(lambda p: -np.abs(p[:, 0]), [lambda p: p[:, 0], lambda p: -p[:, 0]], box, count=256, seed=4)
    assert report.details["status"] == "concave"
    assert report.passed


def test_comix_hypotheses_unmet(box):
    cover = lambda p: np.column_stack([p[:, 0], -p[:, 0]])
    report = check_comix(lambda p: np.abs(p[:, 0]), cover, box, count=256, seed=4, anchors=[(0.0, 0.0)])
    assert report.details["status"] == "hypotheses-unmet"
    assert not report.passed
    partial = check_comix(lambda p: -np.abs(p[:, 0]), [lambda p: p[:, 0]], box, count=256, seed=4)
    assert partial.details["status"] == "hypotheses-unmet"


def test_reports_serialise_deterministically():
    report = worst("demo", np.array([0.1, np.inf]), ["a", "b"], 1.0, seed=3)
    assert not report.passed and report.witness == "b"
    empty = worst("empty", np.array([]), [], 1e-9)
    assert empty.passed and empty.samples == 0
    doc = suite_document("demo", 3, [report, CheckReport("ok", 1, 0.0, 1e-9)])
    text = dumps(doc)
    assert text == dumps(json.loads(text))
    parsed = json.loads(text)
    assert parsed["pass"] is False
    assert parsed["reports"][0]["residual"] == "inf"


def test_sampling_is_seeded():
    assert np.array_equal(unit_samples(10, 2, 5), unit_samples(10, 2, 5))
    assert unit_samples(10, 2, 5).shape == (10, 2)
    disk = DiskRegion((0.0, 1.0), 0.1)
    assert np.all(disk.contains(sample_points(disk, 100, 1)))
    with_anchor = sample_points(disk, 8, 1, anchors=[(0.0, 1.0), (5.0, 5.0)])
    assert with_anchor.shape == (9, 2)
    with pytest.raises(DomainError):
        unit_samples(0, 2, 1)


def test_grid_is_row_major():
    assert np.allclose(grid((0.0, 1.0, 0.0, 1.0), 2), [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    with pytest.raises(DomainError):
        grid((0.0, 1.0, 0.0, 1.0), 1)


def test_bounds_suite():
    reports = bounds_suite(seed=7, samples=16, tol=1e-9, pairs=10)
    assert [r.name for r in reports] == ["bounds/turning", "bounds/angle-sum"]
    assert all(r.passed for r in reports)


@patch("src.verify.suites.logger")
def test_run_suite(mock_logger):
    reports = run_suite("bounds", seed=7, samples=16)
    assert all(r.passed for r in reports)
    mock_logger.info.assert_any_call("Suite bounds: all 2 checks passed")
    assert "all" in SUITES
    with pytest.raises(ConfigError):
        run_suite("everything")


@pytest.mark.timeout(600)
def test_counterexamples_suite():
    reports = run_suite("counterexamples", seed=7, samples=64)
    failed = [r.to_dict() for r in reports if not r.passed]
    assert not failed


@pytest.mark.timeout(300)
@pytest.mark.parametrize("suite", ["kofu", "certificate", "compensation", "convergence", "sets"])
def test_suites_pass(suite):
    reports = run_suite(suite, seed=7, samples=64)
    assert reports
    failed = [r.to_dict() for r in reports if not r.passed]
    assert not failed


@pytest.mark.timeout(300)
def test_distance_to_interpolant_converges_at_rate_three():
    report = convergence_suite(seed=7, samples=64, tol=1e-9)[0]
    assert report.name == "convergence/d_n[quadratic]"
    assert report.passed
    assert len(report.details["ratios"]) == 3
    assert all(r >= 3.0 for r in report.details["ratios"])


@pytest.mark.timeout(300)
@pytest.mark.parametrize("suite", ["kofu", "bounds"])
def test_suite_documents_repeat_for_a_seed(suite):
    first = dumps(suite_document(suite, 11, run_suite(suite, seed=11, samples=32)))
    second = dumps(suite_document(suite, 11, run_suite(suite, seed=11, samples=32)))
    assert first == second
    other = dumps(suite_document(suite, 12, run_suite(suite, seed=12, samples=32)))
    assert other != first


if __name__ == "__main__":
    pytest.main()
