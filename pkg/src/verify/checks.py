"""Sampled numerical checks.

A planar evaluator maps an (m, 2) array of points to m values; a line evaluator
maps a 1-D array of abscissae to values. Every check is seeded and returns a
CheckReport (or a DerivEstimate) that records what was sampled.
"""
from __future__ import annotations

from typing import Callable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import Config
from ..geometry.polyline import as_point, as_points
from ..utils.error_handler import DomainError, EvaluationError
from ..utils.logger import logger
from .reports import CheckReport, DerivEstimate, worst
from .sampling import sample_points, sample_pairs, sample_triples, unit_directions

STEPS = (1e-2, 1e-3, 1e-4, 1e-5)
LINE_STEPS = (1e-4, 1e-5, 1e-6)
ACCEPT_REL = 1e-8
CONSISTENCY = 0.1
UNIT_TOL = 1e-12
OSCILLATION_THRESHOLD = 0.9
OSCILLATION_WINDOW = 20
OSCILLATION_LEVELS = 4

Evaluator = Callable[[np.ndarray], np.ndarray]


def _evaluate(F: Evaluator, points) -> np.ndarray:
    p = as_points(points)
    values = np.asarray(F(p), dtype=float).reshape(-1)
    if values.size != p.shape[0]:
        raise DomainError(f"Evaluator returned {values.size} values for {p.shape[0]} points")
    bad = ~np.isfinite(values)
    if np.any(bad):
        z = p[bad][0]
        raise EvaluationError(f"Non-finite value at {z.tolist()}", point=tuple(z.tolist()))
    return values


def _evaluate_line(f: Evaluator, xs: np.ndarray) -> np.ndarray:
    values = np.asarray(f(np.asarray(xs, dtype=float)), dtype=float).reshape(-1)
    bad = ~np.isfinite(values)
    if np.any(bad):
        x = float(np.asarray(xs).reshape(-1)[bad][0])
        raise EvaluationError(f"Non-finite value at {x!r}", point=x)
    return values


def _unit(v) -> np.ndarray:
    v = as_points(v)
    norms = np.hypot(v[:, 0], v[:, 1])
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise DomainError(f"Direction {v[np.argmax(np.abs(norms - 1.0))].tolist()} is not a unit vector")
    return v


def _extrapolate(quotients: np.ndarray, ratio: float) -> Tuple[np.ndarray, np.ndarray]:
    """Richardson on forward-difference quotients (columns = steps shrinking by `ratio`).

    The extrapolated value is kept only where the quotients are in the linear regime
    q(h) = q0 + a h over the whole step range: consecutive quotient changes d_k keep
    their sign and ratio * d_{k+1} matches d_k to within CONSISTENCY * |d_k|, or all
    changes are below ACCEPT_REL. Otherwise (a kink or a curvature scale inside the
    step range) the finest quotient is used.
    """
    finest = quotients[:, -1]
    if quotients.shape[1] < 3:
        return finest, np.zeros_like(finest)
    r = (ratio * quotients[:, 1:] - quotients[:, :-1]) / (ratio - 1.0)
    residual = np.abs(r[:, -1] - r[:, -2])
    d = np.diff(quotients, axis=1)
    flat = np.max(np.abs(d), axis=1) <= ACCEPT_REL * np.maximum(1.0, np.abs(finest))
    linear = np.all(np.abs(ratio * d[:, 1:] - d[:, :-1]) <= CONSISTENCY * np.abs(d[:, :-1]), axis=1)
    return np.where(flat | linear, r[:, -1], finest), residual


def directional_derivatives(F: Evaluator, points, directions, steps: Sequence[float] = STEPS):
    """One-sided derivatives F'(x_i; v_i) for matching rows of points and directions."""
    x = as_points(points)
    v = _unit(directions)
    if v.shape[0] == 1 and x.shape[0] > 1:
        v = np.repeat(v, x.shape[0], axis=0)
    steps = np.asarray(steps, dtype=float)
    base = _evaluate(F, x)
    shifted = np.concatenate([x + h * v for h in steps])
    values = _evaluate(F, shifted).reshape(steps.size, x.shape[0]).T
    quotients = (values - base[:, None]) / steps[None, :]
    ratio = float(steps[0] / steps[1]) if steps.size > 1 else 1.0
    return _extrapolate(quotients, ratio)


def estimate_dir_deriv(F: Evaluator, x, v, steps: Sequence[float] = STEPS) -> DerivEstimate:
    point = as_point(x)
    direction = _unit(v)[0]
    value, residual = directional_derivatives(F, point[None, :], direction[None, :], steps)
    return DerivEstimate(
        tuple(point.tolist()), tuple(direction.tolist()), float(value[0]), tuple(float(h) for h in steps), float(residual[0])
    )


def check_concave(
    F: Evaluator, region, count: int = 10_000, tol: float = Config.IDENTITY_TOL, seed: int = Config.SEED, name: str = "concavity"
) -> CheckReport:
    z1, z2, t = sample_triples(region, count, seed)
    mid = t[:, None] * z1 + (1.0 - t[:, None]) * z2
    f1, f2, fm = _evaluate(F, z1), _evaluate(F, z2), _evaluate(F, mid)
    residual = np.maximum(t * f1 + (1.0 - t) * f2 - fm, 0.0)
    witnesses = [(a, b, s) for a, b, s in zip(z1.tolist(), z2.tolist(), t.tolist())]
    return worst(name, residual, witnesses, tol, seed)


def check_lipschitz(
    F: Evaluator,
    region,
    K: float,
    count: int = 10_000,
    tol: float = Config.LIPSCHITZ_SLACK,
    seed: int = Config.SEED,
    name: str = "lipschitz",
) -> CheckReport:
    if not K > 0:
        raise DomainError(f"Lipschitz constant must be positive, got {K}")
    z1, z2 = sample_pairs(region, count, seed)
    gap = np.hypot(z1[:, 0] - z2[:, 0], z1[:, 1] - z2[:, 1])
    keep = gap > 0.0
    if not np.all(keep):
        logger.debug(f"{name}: discarded {int(np.sum(~keep))} coincident sample pairs")
    z1, z2, gap = z1[keep], z2[keep], gap[keep]
    ratio = np.abs(_evaluate(F, z1) - _evaluate(F, z2)) / gap
    witnesses = [(a, b) for a, b in zip(z1.tolist(), z2.tolist())]
    report = worst(name, np.maximum(ratio - K, 0.0), witnesses, tol, seed, K=K, discarded=int(np.sum(~keep)))
    report.details["max_ratio"] = float(np.max(ratio, initial=0.0))
    return report


def check_onesided_sum(
    F: Evaluator, points, directions, tol: float = Config.DERIVATIVE_TOL, name: str = "onesided-sum", seed=None
) -> CheckReport:
    """F'(x; v) + F'(x; -v) <= tol for every point crossed with every direction."""
    x = as_points(points)
    v = _unit(directions)
    xs = np.repeat(x, v.shape[0], axis=0)
    vs = np.tile(v, (x.shape[0], 1))
    forward, r1 = directional_derivatives(F, xs, vs)
    backward, r2 = directional_derivatives(F, xs, -vs)
    sums = forward + backward
    witnesses = [{"point": p, "direction": d} for p, d in zip(xs.tolist(), vs.tolist())]
    report = worst(name, np.maximum(sums, 0.0), witnesses, tol, seed)
    report.details["max_extrapolation_residual"] = float(np.max(np.maximum(r1, r2), initial=0.0))
    return report


def _side_derivatives(f: Evaluator, a: float, cs: np.ndarray, steps: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Left and right derivative estimates at each c, steps scaled by |c - a|."""
    scale = np.abs(cs - a)
    h = scale[:, None] * np.asarray(steps, dtype=float)[None, :]
    base = _evaluate_line(f, cs)
    right = (_evaluate_line(f, (cs[:, None] + h).ravel()).reshape(h.shape) - base[:, None]) / h
    left = (base[:, None] - _evaluate_line(f, (cs[:, None] - h).ravel()).reshape(h.shape)) / h
    ratio = float(steps[0] / steps[1])
    d_right, _ = _extrapolate(right, ratio)
    d_left, _ = _extrapolate(left, ratio)
    return d_left, d_right


def detect_non_dc_on_line(
    f: Evaluator,
    a: float,
    sequence,
    threshold: float = OSCILLATION_THRESHOLD,
    window: int = OSCILLATION_WINDOW,
    steps: Sequence[float] = LINE_STEPS,
    levels: int = OSCILLATION_LEVELS,
    name: str = "non-dc-detector",
) -> CheckReport:
    """Flag a line function whose one-sided derivatives keep oscillating near a.

    DC functions of one variable are one-sidedly strictly differentiable, so on each
    side of a the one-sided derivatives at points tending to a settle. The last
    `window` points of a side, ordered towards a, are cut into `levels` consecutive
    blocks; the oscillation of the side is the smallest max - min over the blocks,
    so a kink or a sign change met at a single level does not count. The report
    fails (flags) when the oscillation of one side exceeds `threshold`.
    """
    if levels < 1:
        raise DomainError(f"Detector needs at least one level, got {levels}")
    seq = np.asarray(sequence, dtype=float).reshape(-1)
    seq = seq[seq != a]
    oscillation, per_level, witness = {}, {}, None
    worst_value = 0.0
    for side, mask in (("left", seq < a), ("right", seq > a)):
        cs = seq[mask]
        if cs.size < 2:
            oscillation[side] = 0.0
            per_level[side] = []
            continue
        cs = cs[np.argsort(-np.abs(cs - a), kind="stable")][-window:]
        d_left, d_right = _side_derivatives(f, a, cs, steps)
        blocks = np.array_split(np.arange(cs.size), min(levels, cs.size))
        spreads = [
            float(max(d_left[b].max(), d_right[b].max()) - min(d_left[b].min(), d_right[b].min())) for b in blocks
        ]
        spread = min(spreads)
        oscillation[side] = spread
        per_level[side] = spreads
        if spread >= worst_value:
            worst_value = spread
            witness = {"side": side, "closest": float(cs[-1]), "farthest": float(cs[0])}
    report = CheckReport(
        name,
        int(seq.size),
        worst_value,
        threshold,
        None,
        witness,
        {"a": a, "window": window, "levels": levels, "oscillation": oscillation, "per_level": per_level},
    )
    report.details["flagged"] = not report.passed
    logger.debug(f"{name}: oscillation {oscillation} against threshold {threshold}")
    return report


def check_uniform_convergence(
    reference: Evaluator,
    sequence: Mapping[int, Evaluator],
    grid,
    tol: float = 1e-12,
    min_ratio: Optional[float] = None,
    name: str = "uniform-convergence",
) -> CheckReport:
    """Sup-grid errors e_n against the reference; pass iff each e_n drops below its predecessor.

    Errors already within `tol` count as converged. With `min_ratio`, every drop of an
    error above `tol` must also be by at least that factor.
    """
    p = as_points(grid)
    ref = _evaluate(reference, p)
    ns = sorted(sequence)
    errors, where = [], []
    for n in ns:
        diff = np.abs(_evaluate(sequence[n], p) - ref)
        where.append(p[int(np.argmax(diff))].tolist())
        errors.append(float(np.max(diff, initial=0.0)))
    ratios = [errors[i - 1] / errors[i] if errors[i] > 0 else float("inf") for i in range(1, len(errors))]
    ok = True
    for i in range(1, len(errors)):
        if errors[i] <= tol:
            continue
        if not errors[i] < errors[i - 1]:
            ok = False
        if min_ratio is not None and ratios[i - 1] < min_ratio:
            ok = False
    return CheckReport(
        name,
        int(p.shape[0] * len(ns)),
        errors[-1] if errors else 0.0,
        tol,
        None,
        where[-1] if where else None,
        {"n": ns, "errors": errors, "ratios": ratios, "min_ratio": min_ratio},
        passed=ok,
    )


def check_comix(
    gamma: Evaluator,
    cover: Union[Sequence[Evaluator], Evaluator],
    region,
    tol: float = Config.IDENTITY_TOL,
    count: int = 1000,
    seed: int = Config.SEED,
    directions: int = 8,
    derivative_points: int = 64,
    anchors=None,
    deriv_tol: float = Config.DERIVATIVE_TOL,
    name: str = "concave-mixing",
) -> CheckReport:
    """Test the concave-mixing implication (cover agreement and sum condition give concavity).

    `cover` is a sequence of concave evaluators or a single evaluator returning an
    (m, k) matrix with one column per cover function. Status is `concave`,
    `hypotheses-unmet` or `violated`; only `concave` passes.
    """
    points = sample_points(region, count, seed, anchors)
    target = _evaluate(gamma, points)
    if callable(cover):
        values = np.asarray(cover(points), dtype=float).reshape(points.shape[0], -1)
    else:
        values = np.column_stack([_evaluate(c, points) for c in cover])
    agreement = np.min(np.abs(values - target[:, None]), axis=1)
    covered = worst(f"{name}/cover", agreement, points.tolist(), tol, seed)

    subset = points[: min(derivative_points, count)]
    if anchors is not None and len(anchors):
        subset = np.vstack([subset, points[count:]])
    sums = check_onesided_sum(gamma, subset, unit_directions(directions, seed + 1), deriv_tol, f"{name}/onesided-sum", seed)
    concave = check_concave(gamma, region, count, tol, seed + 2, f"{name}/concavity")

    if covered.passed and sums.passed:
        status = "concave" if concave.passed else "violated"
    else:
        status = "hypotheses-unmet"
    if status == "violated":
        logger.warning(f"{name}: hypotheses held but concavity failed, residual {concave.residual:.3g}")
    decisive = concave if status != "hypotheses-unmet" else (covered if not covered.passed else sums)
    return CheckReport(
        name,
        covered.samples + sums.samples + concave.samples,
        decisive.residual,
        decisive.tolerance,
        seed,
        decisive.witness,
        {
            "status": status,
            "cover": covered.to_dict(),
            "onesided_sum": sums.to_dict(),
            "concavity": concave.to_dict(),
        },
        passed=status == "concave",
    )
