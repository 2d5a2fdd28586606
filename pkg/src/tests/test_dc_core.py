import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from unittest.mock import patch

from src.dc.builtins import (
    absolute,
    constant,
    function_from_dict,
    load_function,
    pl,
    poly5cos,
    poly5cos_convexifier,
    poly5cos_second_derivative,
    poly5cos_value,
    quadratic,
    sq_minus_abs,
)
from src.dc.convex import ClosedFormConvex, ConvexPL, PiecewiseLinear1D, is_midpoint_convex
from src.dc.dc_function import DCFunction1D, dc_eval, recenter
from src.dc.interpolation import (
    canonical_pl_split,
    interpolate_on_partition,
    lipschitz_const,
    partition,
    refine_to_tolerance,
    slopes_and_turning,
)
from src.utils.error_handler import ConfigError, DomainError, EvaluationError


@pytest.fixture
def square():
    return quadratic()


def test_interpolation_of_square_on_two_cells(square):
    p = interpolate_on_partition(square, 2)
    assert np.allclose(p.vertices(), [[-1.0, 1.0], [0.0, 0.0], [1.0, 1.0]])
    assert np.allclose(p.slopes, [-1.0, 1.0])


def test_interpolation_reproduces_abs():
    p = interpolate_on_partition(absolute(), 2)
    xs = np.linspace(-1.0, 1.0, 101)
    assert np.allclose(p(xs), np.abs(xs), atol=1e-15)


def test_interpolation_slopes_of_square_on_four_cells(square):
    s, turning = slopes_and_turning(interpolate_on_partition(square, 4))
    assert np.allclose(s, [-1.5, -0.5, 0.5, 1.5])
    assert turning == pytest.approx(3.0)
    assert turning <= 4.0 * lipschitz_const(square.g, square.h)


def test_partition_hits_both_endpoints():
    nodes = partition(7, -1.0, 1.0)
    assert nodes[0] == -1.0 and nodes[-1] == 1.0
    assert np.all(np.diff(nodes) > 0)
    with pytest.raises(DomainError):
        partition(0)


def test_interpolation_reports_non_finite_node():
    with pytest.raises(EvaluationError) as excinfo:
        with np.errstate(divide="ignore"):
            interpolate_on_partition(lambda x: 1.0 / x, 2)
    assert excinfo.value.point == 0.0


def test_turning_of_abs():
    s, turning = slopes_and_turning(interpolate_on_partition(absolute(), 2))
    assert np.allclose(s, [-1.0, 1.0])
    assert turning == 2.0


@pytest.mark.parametrize(
    "f, expected",
    [(quadratic(), 4.0), (absolute(), 2.0), (constant(0.0), 1.0)],
)
def test_lipschitz_const(f, expected):
    assert lipschitz_const(f.g, f.h) == pytest.approx(expected)


def test_lipschitz_const_rejects_unbounded_slope():
    sqrt_like = ClosedFormConvex("-sqrt", lambda x: -np.sqrt(x), lambda x: -0.5 / np.sqrt(x), domain=(0.0, 1.0))
    with pytest.raises(DomainError):
        with np.errstate(divide="ignore"):
            lipschitz_const(sqrt_like, sqrt_like, 0.0, 1.0)


def test_canonical_split_of_abs_and_negative_abs():
    xs = np.array([-1.0, 0.0, 1.0])
    u, v = canonical_pl_split(PiecewiseLinear1D(xs, np.abs(xs)))
    assert np.allclose(u.ys, np.abs(xs)) and np.allclose(v.ys, 0.0)
    u, v = canonical_pl_split(PiecewiseLinear1D(xs, -np.abs(xs)))
    assert np.allclose(u.ys, 0.0) and np.allclose(v.ys, np.abs(xs))


def test_canonical_split_of_tent_map():
    p = PiecewiseLinear1D([-1.0, -0.5, 0.5, 1.0], [0.0, 0.5, -0.5, 0.0])
    u, v = canonical_pl_split(p)
    xs = np.linspace(-1.0, 1.0, 1000)
    assert np.max(np.abs(u(xs) - v(xs) - p(xs))) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(min_value=-10.0, max_value=10.0), min_size=2, max_size=12))
def test_canonical_split_is_exact_and_convex(values):
    xs = np.linspace(-1.0, 1.0, len(values))
    p = PiecewiseLinear1D(xs, values)
    u, v = canonical_pl_split(p)
    assert u.is_convex() and v.is_convex()
    assert np.allclose(u.ys - v.ys, p.ys, atol=1e-9)


@pytest.mark.parametrize("shift", [0.0, 5.0, -40.0])
def test_canonical_split_of_dense_concave_data(shift):
    xs = np.linspace(-3.0, 3.0, 20001)
    p = PiecewiseLinear1D(xs, shift - xs**2)
    u, v = canonical_pl_split(p)
    assert u.is_convex() and v.is_convex()
    assert np.allclose(u.ys - v.ys, p.ys, atol=1e-9)
    assert np.allclose(u.ys, 0.0)
    f = pl(xs, shift - xs**2)
    assert f(0.5) == pytest.approx(shift - 0.25, abs=1e-9)


def test_pl_builtin_accepts_dense_offset_curve():
    # outer parallel curve of y = -x^2 at distance 0.1, non-uniform abscissae
    x = np.linspace(-3.0, 3.0, 20001)
    norm = np.sqrt(1.0 + 4.0 * x * x)
    ox, oy = x + 0.2 * x / norm, -x * x + 0.1 / norm
    f = pl(ox, oy)
    assert f(0.0) == pytest.approx(0.1, abs=1e-9)
    assert f.g.is_convex() and f.h.is_convex()


def test_convex_pl_rejects_concave_data():
    with pytest.raises(DomainError):
        ConvexPL([-1.0, 0.0, 1.0], [0.0, 1.0, 0.0])


def test_dc_function_rejects_non_convex_component():
    bump = ClosedFormConvex("-x^2", lambda x: -x * x, lambda x: -2.0 * x)
    with pytest.raises(DomainError):
        DCFunction1D(bump, quadratic().g, "bad")


@pytest.mark.parametrize(
    "f, side, expected",
    [(absolute(), "+", (0.0, 1.0)), (absolute(), "-", (0.0, -1.0)), (sq_minus_abs(), "+", (0.0, -1.0))],
)
def test_dc_eval_one_sided(f, side, expected):
    assert dc_eval(f, 0.0, side) == pytest.approx(expected)


def test_dc_eval_rejects_unknown_direction():
    with pytest.raises(DomainError):
        dc_eval(absolute(), 0.0, "up")


def test_recenter_square(square):
    shifted, iso = recenter(square, 1.0)
    ts = np.linspace(-1.0, 1.0, 11)
    assert np.allclose(shifted(ts), ts * ts + 2.0 * ts)
    assert iso.translation == (1.0, 1.0)
    assert np.allclose(iso.apply([[0.0, 0.0]]), [[1.0, 1.0]])


def test_recenter_at_zero_is_identity(square):
    shifted, iso = recenter(square, 0.0)
    assert iso.is_identity
    assert shifted(0.3) == pytest.approx(square(0.3))


def test_recenter_abs():
    shifted, _ = recenter(absolute(), -1.0)
    ts = np.linspace(-1.0, 2.0, 13)
    assert np.allclose(shifted(ts), np.abs(ts - 1.0) - 1.0)


def test_dc_algebra_keeps_convex_components():
    f, g = quadratic(), absolute()
    xs = np.linspace(-1.0, 1.0, 41)
    top = f.maximum(g)
    assert np.allclose(top(xs), np.maximum(xs * xs, np.abs(xs)))
    assert is_midpoint_convex(top.g) and is_midpoint_convex(top.h)
    assert np.allclose(f.minimum(g)(xs), np.minimum(xs * xs, np.abs(xs)))
    assert np.allclose(sq_minus_abs().absolute()(xs), np.abs(xs * xs - np.abs(xs)))
    assert np.allclose((f - g)(xs), sq_minus_abs()(xs))
    assert np.allclose(f.scale(-2.0)(xs), -2.0 * xs * xs)


def test_refine_is_exact_for_pl():
    f = pl([-1.0, 0.0, 0.5, 1.0], [1.0, 0.0, 0.25, 1.0])
    refined = refine_to_tolerance(f, -1.0, 1.0, 1e-9)
    assert np.allclose(refined.xs, [-1.0, 0.0, 0.5, 1.0])


def test_refine_meets_tolerance_and_keeps_kinks():
    f = sq_minus_abs()
    refined = refine_to_tolerance(f, -1.0, 1.0, 1e-8)
    assert 0.0 in refined.xs
    xs = np.linspace(-1.0, 1.0, 20001)
    assert np.max(np.abs(refined(xs) - f(xs))) <= 1e-8


@patch("src.dc.interpolation.logger")
def test_refine_warns_when_capped(mock_logger, square):
    refine_to_tolerance(square, -1.0, 1.0, 1e-12, max_nodes=64)
    mock_logger.warning.assert_called_once()


def test_poly5cos_values_and_second_derivative():
    assert float(poly5cos_value(0.5)) == pytest.approx(1.0 / 32.0)
    assert float(poly5cos_second_derivative(0.0)) == 0.0
    h = 1e-4
    for x in (0.3, 0.5):
        fd = (poly5cos_value(x + h) - 2.0 * poly5cos_value(x) + poly5cos_value(x - h)) / (h * h)
        assert float(fd) == pytest.approx(float(poly5cos_second_derivative(x)), abs=1e-5)


def test_poly5cos_split_is_dc_on_window():
    f = poly5cos(1.0)
    xs = np.linspace(-1.0, 1.0, 2001)
    assert np.allclose(f(xs), poly5cos_value(xs), atol=1e-12)
    assert is_midpoint_convex(f.g, samples=65)
    assert np.all(2.0 * poly5cos_convexifier(1.0) >= np.abs(poly5cos_second_derivative(xs)))


def test_function_documents(tmp_path):
    f = function_from_dict({"builtin": "pl", "breakpoints": [-1, 0, 1], "values": [1, 0, 1]})
    assert f(0.5) == pytest.approx(0.5)
    path = tmp_path / "fn.json"
    path.write_text(json.dumps({"builtin": "poly5cos", "window": 0.5}))
    assert load_function(str(path))(0.5) == pytest.approx(0.5**5 * math.cos(2.0 * math.pi))
    assert load_function("quadratic")(0.5) == pytest.approx(0.25)


@pytest.mark.parametrize(
    "doc",
    [{}, {"builtin": "nope"}, {"builtin": "quadratic", "width": 2}, {"builtin": "pl", "breakpoints": [0, 0], "values": [1, 2]}],
)
def test_bad_function_documents(doc):
    with pytest.raises(ConfigError):
        function_from_dict(doc)


def test_load_function_missing_file():
    with pytest.raises(ConfigError):
        load_function("/nonexistent/fn.json")


if __name__ == "__main__":
    pytest.main()
