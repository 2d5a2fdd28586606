"""Named verification batteries.

Each suite is a pure function of (seed, samples, tol) returning a list of
CheckReports. `run_suite("all")` runs the suites on a thread pool and merges the
results in suite order.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional

import numpy as np

from ..compensator.certificate import build_certificate, check_cover_batch
from ..compensator.kofu import kofu
from ..config import Config
from ..dc.builtins import absolute, constant, max5, pl, quadratic, sq_minus_abs
from ..dc.convex import ConvexPL
from ..dc.dc_function import DCFunction1D
from ..dc.interpolation import interpolate_on_partition, lipschitz_const, slopes_and_turning
from ..geometry.wedge import Wedge, vertex_angles
from ..sets.gallery import d1_counterexample, d1_finite, gallery, nowhere_dense, oscillation_zero_set
from ..sets.identities import BOUNDARY_TRIPLES, asplund_support_batch, boundary_triple, tube_identity_check, tube_setup
from ..sets.line_sets import Interval1DSet, components_locally_finite
from ..sets.primitives import Disk, Graph, HalfPlane, Point, Ray, Segment
from ..sets.scene import Scene
from ..sets.truncated import TruncatedGraph
from ..utils.error_handler import ConfigError, CoverViolationError, DomainError, InternalConsistencyError
from ..utils.logger import logger
from .checks import (
    check_comix,
    check_concave,
    check_lipschitz,
    check_onesided_sum,
    check_uniform_convergence,
    detect_non_dc_on_line,
)
from .reports import CheckReport, worst
from .sampling import BoxRegion, DiskRegion, grid, sample_points, unit_directions, unit_samples

WEDGE_ANGLES = (math.pi / 6, math.pi / 3, math.pi / 2, 2.8)
CERTIFICATE_RESOLUTIONS = (8, 64, 256)
CONVERGENCE_RESOLUTIONS = (8, 16, 32, 64)
CONVERGENCE_REFERENCE = 1024
COMPENSATION_DIRECTIONS = 16
RANDOM_PAIRS = 100
SEMICONCAVE_TUBE_TOL = 1e-6
EXACT_TOL = 1e-12


def _certificate_functions() -> Dict[str, DCFunction1D]:
    return {"zero": constant(0.0), "abs": absolute(), "quadratic": quadratic(), "sq_minus_abs": sq_minus_abs()}


def kofu_suite(seed: int, samples: int, tol: float) -> List[CheckReport]:
    reports = []
    box = BoxRegion(-2.0, 2.0, -2.0, 2.0)
    for i, alpha in enumerate(WEDGE_ANGLES):
        beta = alpha / 2.0
        turn = 0.4 + i
        wedge = Wedge((0.3, -0.2), (math.cos(turn), math.sin(turn)), beta)
        pair = kofu(wedge)
        label = f"alpha={alpha:.4f}"

        u = unit_samples(samples, 2, seed + i)
        theta = turn + (2.0 * u[:, 0] - 1.0) * beta
        rho = 2.0 * u[:, 1]
        z = wedge.vertex + np.column_stack([rho * np.cos(theta), rho * np.sin(theta)])
        dist = np.hypot(z[:, 0] - wedge.vertex[0], z[:, 1] - wedge.vertex[1])
        residual = np.abs(dist + pair.psi(z) - pair.affine(z))
        reports.append(worst(f"kofu/identity[{label}]", residual, z.tolist(), tol, seed + i))

        reports.append(check_concave(pair.psi, box, samples, tol, seed + 10 + i, f"kofu/concavity[{label}]"))
        reports.append(
            check_lipschitz(
                pair.psi, box, math.sqrt(2.0) * math.tan(beta), samples, Config.LIPSCHITZ_SLACK, seed + 20 + i, f"kofu/lipschitz[{label}]"
            )
        )

        sampled = sample_points(box, 16, seed + 30 + i)
        searched = kofu(wedge, "search").phi_ext(sampled)
        reports.append(
            worst(f"kofu/search-agreement[{label}]", np.abs(searched - pair.phi_ext(sampled)), sampled.tolist(), 1e-6, seed + 30 + i)
        )
    return reports


def _cover_report(cert, points, tol, name) -> CheckReport:
    try:
        chosen = check_cover_batch(cert, points, tol)
    except (CoverViolationError, InternalConsistencyError) as e:
        logger.error(f"{name}: {e}")
        return CheckReport(name, int(points.shape[0]), math.inf, tol, details={"error": str(e)}, passed=False)
    return CheckReport(name, int(points.shape[0]), 0.0, tol, details={"cover_functions_used": int(np.unique(chosen).size)})


def certificate_suite(seed: int, samples: int, tol: float) -> List[CheckReport]:
    reports = []
    cover_points = max(samples // 10, 16)
    for fname, f in _certificate_functions().items():
        for n in CERTIFICATE_RESOLUTIONS:
            cert = build_certificate(f, n)
            region = DiskRegion(cert.center, cert.radius)
            label = f"{fname},n={n}"
            reports.append(check_concave(cert.c_star, region, samples, tol, seed, f"certificate/c_star-concavity[{label}]"))
            reports.append(check_concave(cert.c_n, region, samples, tol, seed + 1, f"certificate/c_n-concavity[{label}]"))
            reports.append(
                check_lipschitz(
                    cert.c_n, region, cert.L_star, samples, Config.LIPSCHITZ_SLACK, seed + 2, f"certificate/c_n-lipschitz[{label}]"
                )
            )
            points = sample_points(region, samples, seed + 3)
            parts = cert.components(points)
            split = np.abs(parts["d_n"] - (parts["c_star"] - parts["c_n"]))
            reports.append(worst(f"certificate/split[{label}]", split, points.tolist(), EXACT_TOL, seed + 3))
            cover = sample_points(region, cover_points, seed + 4)
            reports.append(_cover_report(cert, cover, tol, f"certificate/cover[{label}]"))

    cert = build_certificate(quadratic(), 64)
    region = DiskRegion(cert.center, cert.radius)
    inner = DiskRegion(cert.center, 0.5 * cert.radius)
    sampled = sample_points(inner, 64, seed + 5)
    reports.append(
        check_onesided_sum(
            cert.c_star, sampled, unit_directions(8, seed + 6), Config.DERIVATIVE_TOL, "certificate/c_star-onesided-sum[quadratic,n=64]", seed + 5
        )
    )
    reports.append(
        check_comix(cert.c_star, cert.cover_values, region, tol, cover_points, seed + 7, name="certificate/concave-mixing[quadratic,n=64]")
    )
    return reports


def compensation_suite(seed: int, samples: int, tol: float) -> List[CheckReport]:
    reports = []
    count = max(samples // 100, 8)
    angles = 2.0 * math.pi * np.arange(COMPENSATION_DIRECTIONS) / COMPENSATION_DIRECTIONS
    directions = np.column_stack([np.cos(angles), np.sin(angles)])
    for fname, f in (("quadratic", quadratic()), ("abs", absolute()), ("sq_minus_abs", sq_minus_abs())):
        cert = build_certificate(f, 64)
        xs = -0.9 + 1.8 * unit_samples(count, 1, seed)[:, 0]
        xs = np.concatenate([xs, cert.f_n.xs[1:-1:8]])
        troj, kompgr, witnesses = [], [], []
        for x in xs:
            for v in directions:
                sums = cert.compensation_sums(float(x), v)
                troj.append(max(sums["d_n"] - sums["p_n"], 0.0))
                kompgr.append(max(sums["d_n+xi_n"], 0.0))
                witnesses.append({"x": float(x), "direction": v.tolist()})
        reports.append(worst(f"compensation/distance-below-vertical[{fname}]", troj, witnesses, Config.DERIVATIVE_TOL, seed))
        reports.append(worst(f"compensation/compensated-sum[{fname}]", kompgr, witnesses, Config.DERIVATIVE_TOL, seed))
    return reports


def convergence_suite(seed: int, samples: int, tol: float) -> List[CheckReport]:
    f = quadratic()
    reference = build_certificate(f, CONVERGENCE_REFERENCE)
    cx, cy = reference.center
    r = reference.radius
    points = grid((cx - r, cx + r, cy - r, cy + r), 41)
    points = points[reference.contains(points)]
    sequence = {n: build_certificate(f, n).d_n for n in CONVERGENCE_RESOLUTIONS}
    report = check_uniform_convergence(reference.d_n, sequence, points, EXACT_TOL, min_ratio=3.0, name="convergence/d_n[quadratic]")
    report.seed = seed
    reports = [report]

    for fname, g in (("abs", absolute()), ("zero", constant(0.0))):
        exact = build_certificate(g, 8)
        seq = {n: build_certificate(g, n).d_n for n in CONVERGENCE_RESOLUTIONS}
        reports.append(check_uniform_convergence(exact.d_n, seq, points, EXACT_TOL, name=f"convergence/d_n[{fname}]"))
    return reports


def _union_scenes():
    first = Scene((Disk((1.0, 1.0), 0.5), Segment((-2.0, 0.0), (0.0, -1.0)), Point((2.0, -2.0))))
    second = Scene((Graph(quadratic(), (-1.0, 1.0)), HalfPlane((1.0, 0.0), -2.5), Ray((-2.0, 2.0), (-1.0, 0.0))))
    return first, second


def sets_suite(seed: int, samples: int, tol: float) -> List[CheckReport]:
    reports = []
    box = BoxRegion(-3.0, 3.0, -3.0, 3.0)
    points = sample_points(box, samples, seed)
    first, second = _union_scenes()
    union = (first | second).distances(points)
    residual = np.abs(union - np.minimum(first.distances(points), second.distances(points)))
    reports.append(worst("sets/union-min-rule", residual, points.tolist(), EXACT_TOL, seed))

    resolution = max(int(math.isqrt(samples)), 2)
    for name in BOUNDARY_TRIPLES:
        report = boundary_triple(name).check(resolution, tol)
        report.name = f"sets/{report.name}"
        reports.append(report)

    for name, r, t in (("disk", 0.5, EXACT_TOL), ("half-plane", 1.0, EXACT_TOL)):
        report = tube_identity_check(tube_setup(name), r, count=samples, seed=seed + 1, tol=t)
        report.name = f"sets/{report.name}"
        reports.append(report)
    report = tube_identity_check(
        tube_setup("hypograph-neg-quadratic"), 0.1, count=max(samples // 10, 16), seed=seed + 2, tol=SEMICONCAVE_TUBE_TOL
    )
    report.name = f"sets/{report.name}"
    reports.append(report)

    polyline_scene = Scene(
        (Segment((-1.0, -1.0), (1.0, -2.0)), Point((0.5, 1.5)), Graph(pl([-1.0, 0.0, 1.0], [1.0, 0.0, 1.0]), (-1.0, 1.0)))
    )
    square = BoxRegion(-2.0, 2.0, -2.0, 2.0)
    z = sample_points(square, samples, seed + 3)
    _, residual = asplund_support_batch(polyline_scene, z)
    reports.append(worst("sets/squared-distance-split", residual, z.tolist(), tol, seed + 3))
    reports.append(
        check_concave(
            lambda p: -asplund_support_batch(polyline_scene, p)[0], square, samples, tol, seed + 4, "sets/support-convexity"
        )
    )

    truncated = TruncatedGraph(sq_minus_abs(), 0.5, 1.0)
    oracle = Graph(sq_minus_abs(), (0.0, 0.5))
    near = sample_points(DiskRegion((0.0, 0.0), 0.25), max(samples // 10, 16), seed + 5)
    residual = np.abs(np.array([truncated.distance(q) for q in near]) - oracle.distances(near))
    reports.append(worst("sets/truncated-graph", residual, near.tolist(), max(1e-8, tol), seed + 5))

    scene, envelopes = nowhere_dense(6)
    candidates = [Graph(max5(), (-1.0, 1.0)), Graph(max5().scale(-1.0), (-1.0, 1.0))]
    candidates += [Graph(envelopes[kind], (-1.0, 1.0)) for kind in sorted(envelopes)]
    away = sample_points(BoxRegion(0.15, 1.0, -0.2, 0.2), max(samples // 10, 16), seed + 6)
    d_a = scene.distances(away)
    matrix = np.column_stack([c.distances(away) for c in candidates])
    residual = np.min(np.abs(matrix - d_a[:, None]), axis=1)
    reports.append(worst("sets/nowhere-dense-cases", residual, away.tolist(), SEMICONCAVE_TUBE_TOL, seed + 6))
    return reports


def _line_section(scene: Scene, y: float = 0.0) -> Callable:
    def evaluate(xs):
        xs = np.asarray(xs, dtype=float).reshape(-1)
        return scene.distances(np.column_stack([xs, np.full(xs.shape, y)]))

    return evaluate


def _midpoints(s: Interval1DSet) -> np.ndarray:
    return np.array([0.5 * (lo + hi) for lo, hi in s.gaps()])


def _expect_flag(report: CheckReport, expected: bool) -> CheckReport:
    report.details["expected_flag"] = expected
    report.passed = report.details["flagged"] == expected
    return report


def counterexamples_suite(seed: int, samples: int, tol: float) -> List[CheckReport]:
    reports = []
    d1 = d1_counterexample(100)
    reports.append(_expect_flag(detect_non_dc_on_line(d1.distances, 0.0, _midpoints(d1), name="counterexamples/d1-counterexample"), True))

    osc = gallery("osc-M", k_max=24)
    h = osc.metadata["line_set"]
    reports.append(
        _expect_flag(detect_non_dc_on_line(_line_section(osc), 0.0, _midpoints(h), name="counterexamples/osc-M-section"), True)
    )
    zero_set = oscillation_zero_set(24)
    reports.append(
        _expect_flag(detect_non_dc_on_line(zero_set.distances, 0.0, _midpoints(zero_set), name="counterexamples/osc-zero-set"), True)
    )

    finite = d1_finite()
    offsets = 0.3 * 2.0 ** -np.arange(20)
    for a in (0.0, 1.0, 2.0, 3.0, 4.0):
        sequence = np.concatenate([a - offsets, a + offsets])
        reports.append(
            _expect_flag(detect_non_dc_on_line(finite.distances, a, sequence, name=f"counterexamples/d1-finite[a={a:g}]"), False)
        )

    for name, s, window, expected in (
        ("d1-counterexample", d1, (0.0, 1.0), False),
        ("d1-finite", finite, (-1.0, 5.0), True),
        ("osc-zero-set", zero_set, (-1.0, 1.0), False),
    ):
        ok, witness = components_locally_finite(s, window)
        reports.append(
            CheckReport(
                f"counterexamples/locally-finite[{name}]",
                s.components,
                0.0 if ok == expected else 1.0,
                0.0,
                witness=witness,
                details={"locally_finite": ok, "expected": expected},
            )
        )
    return reports


def _random_convex_pl(rng: np.random.Generator) -> ConvexPL:
    k = int(rng.integers(3, 13))
    xs = np.concatenate([[-1.0], np.sort(rng.uniform(-1.0, 1.0, k)), [1.0]])
    xs = np.unique(xs)
    bound = rng.uniform(0.5, 5.0)
    slopes = np.sort(rng.uniform(-bound, bound, xs.size - 1))
    ys = np.concatenate([[rng.uniform(-1.0, 1.0)], np.cumsum(slopes * np.diff(xs))])
    ys[1:] += ys[0]
    return ConvexPL(xs, ys)


def bounds_suite(seed: int, samples: int, tol: float, pairs: int = RANDOM_PAIRS, n: int = 64) -> List[CheckReport]:
    turning, angles, witnesses = [], [], []
    for i in range(pairs):
        rng = np.random.default_rng(seed + i)
        g, h = _random_convex_pl(rng), _random_convex_pl(rng)
        L = lipschitz_const(g, h)
        p = interpolate_on_partition(g, n) - interpolate_on_partition(h, n)
        _, total = slopes_and_turning(p)
        _, _, alpha_sum = vertex_angles(p)
        turning.append(max(total - 4.0 * L, 0.0))
        angles.append(max(alpha_sum - 4.0 * L, 0.0))
        witnesses.append({"pair": i, "L": L, "turning": total, "angle_sum": alpha_sum})
    return [
        worst("bounds/turning", turning, witnesses, EXACT_TOL, seed, pairs=pairs, n=n),
        worst("bounds/angle-sum", angles, witnesses, EXACT_TOL, seed, pairs=pairs, n=n),
    ]


SUITE_FUNCTIONS: Dict[str, Callable[[int, int, float], List[CheckReport]]] = {
    "kofu": kofu_suite,
    "certificate": certificate_suite,
    "compensation": compensation_suite,
    "convergence": convergence_suite,
    "sets": sets_suite,
    "counterexamples": counterexamples_suite,
    "bounds": bounds_suite,
}
SUITES = tuple(SUITE_FUNCTIONS) + ("all",)


def run_suite(name: str, seed: int = Config.SEED, samples: int = 10_000, tol: Optional[float] = None) -> List[CheckReport]:
    if name not in SUITES:
        raise ConfigError(f"Unknown suite {name!r}; expected one of {', '.join(SUITES)}")
    if samples < 1:
        raise DomainError(f"Sample count must be positive, got {samples}")
    tol = Config.IDENTITY_TOL if tol is None else float(tol)
    names = list(SUITE_FUNCTIONS) if name == "all" else [name]

    def run(suite: str) -> List[CheckReport]:
        logger.info(f"Running suite {suite} (seed={seed}, samples={samples})")
        reports = SUITE_FUNCTIONS[suite](seed, samples, tol)
        failed = [r.name for r in reports if not r.passed]
        if failed:
            logger.warning(f"Suite {suite}: {len(failed)} of {len(reports)} checks failed: {', '.join(failed)}")
        else:
            logger.info(f"Suite {suite}: all {len(reports)} checks passed")
        return reports

    workers = max(1, min(Config.THREADS, len(names)))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(run, names))
    return [report for batch in results for report in batch]
