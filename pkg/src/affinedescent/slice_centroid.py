"""Geometric direction estimate from sublevel-set slices (2-d objectives).

The sublevel set is cut with a line parallel to the level set's tangent
at z, offset below it by delta along the unit gradient. The centroid of
the cut, relative to z, estimates the analytic direction to O(delta)
where the level set is locally strictly convex.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .direction import PointTag, classify_point
from .errors import EmptySlice
from .numerics import Frame, Vector, as_vector, build_gradient_frame
from .objective import Objective


@dataclass(frozen=True)
class SliceParams:
    delta: float = 1e-4
    samples: int = 2048
    window: float | None = None   # half-width of the scan; None = automatic
    bisect_tol: float = 1e-12

    def __post_init__(self):
        if self.delta <= 0.0:
            raise ValueError("delta must be positive")
        if self.samples < 16:
            raise ValueError("samples must be at least 16")
        if self.window is not None and self.window <= 0.0:
            raise ValueError("window must be positive")
        if self.bisect_tol > self.delta * 1e-3:
            raise ValueError("bisect_tol must be <= delta * 1e-3")


@dataclass(frozen=True)
class SliceRegion:
    """Sublevel slice as intervals in the tangent parameter t, plus its
    centroid in both parameter and ambient coordinates."""

    intervals: list[tuple[float, float]]
    total_length: float
    centroid_param: float
    centroid: Vector
    window: float
    frame: Frame = field(repr=False)


def _auto_window(obj: Objective, z: Vector, offset: float,
                 frame: Frame) -> float:
    """Scan half-width from the tangent curvature at z: covers ~10x the
    chord half-width sqrt(2|C| / lambda), with the curvature floored at
    |C| so non-elliptic points get a wide but finite window."""
    pc = classify_point(obj, z, frame=frame)
    lam = max(pc.min_eig_B, offset)
    return max(1.0, 10.0 * float(np.sqrt(2.0 * offset / lam)))


def _bisect_edge(feasible, lo: float, hi: float, lo_feasible: bool,
                 tol: float) -> float:
    """Refine a feasibility crossing in (lo, hi) to width tol. lo_feasible
    says which endpoint is inside the region."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid) == lo_feasible:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def slice_region_2d(obj: Objective, z, C: float,
                    params: SliceParams | None = None) -> SliceRegion:
    """Intersect {f <= f(z)} with the line z + (C/||grad||) n_hat + t t_hat,
    t in [-R, R], for a 2-d objective.

    Returns the feasible t-intervals (grid scan refined by bisection; runs
    touching the window edge are clipped at +-R) and their centroid.
    Raises EmptySlice when no grid point is feasible.
    """
    if params is None:
        params = SliceParams()
    z = as_vector(z)
    if obj.dim != 2:
        raise ValueError("slice scan is implemented for 2-d objectives")
    if C == 0.0:
        raise ValueError("C must be nonzero")
    f0 = obj.value(z)
    frame = build_gradient_frame(obj.gradient(z))
    offset = abs(C)
    R = params.window if params.window is not None else _auto_window(
        obj, z, offset, frame)
    foot = z + (C / frame.grad_norm) * frame.normal
    t_hat = frame.tangent[:, 0]

    def feasible(t: float) -> bool:
        return obj.value(foot + t * t_hat) <= f0

    n = params.samples + (1 - params.samples % 2)   # odd count => t=0 on grid
    grid = np.linspace(-R, R, n)
    flags = np.fromiter((feasible(t) for t in grid), dtype=bool, count=n)
    if not flags.any():
        raise EmptySlice(f"no feasible point in [-{R:g}, {R:g}] at C={C:g}")

    intervals: list[tuple[float, float]] = []
    i = 0
    while i < n:
        if not flags[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and flags[j + 1]:
            j += 1
        lo = grid[i] if i == 0 else _bisect_edge(
            feasible, grid[i - 1], grid[i], False, params.bisect_tol)
        hi = grid[j] if j == n - 1 else _bisect_edge(
            feasible, grid[j], grid[j + 1], True, params.bisect_tol)
        intervals.append((float(lo), float(hi)))
        i = j + 1

    total = sum(b - a for a, b in intervals)
    if total > 1e-300:
        centroid_param = sum(0.5 * (b * b - a * a) for a, b in intervals) / total
    else:
        centroid_param = float(np.mean([0.5 * (a + b) for a, b in intervals]))
    centroid = foot + centroid_param * t_hat
    return SliceRegion(intervals=intervals, total_length=float(total),
                       centroid_param=float(centroid_param),
                       centroid=centroid, window=float(R), frame=frame)


def slice_centroid_direction(obj: Objective, z,
                             params: SliceParams | None = None) -> Vector:
    """Direction estimate from the centroid of the slice at C = -delta.

    At elliptic points the centroid displacement from z, scaled by
    ||grad||/delta, has frame-normal component exactly -1 and tangential
    part tau + O(delta); it is returned as the descent estimate. Where
    the tangent block is not positive definite the construction's premise
    fails and the raw outward difference (z - centroid) * ||grad||/delta
    is returned unchanged, so misbehavior (e.g. an ascent direction) stays
    observable.
    """
    if params is None:
        params = SliceParams()
    z = as_vector(z)
    region = slice_region_2d(obj, z, -params.delta, params)
    gnorm = region.frame.grad_norm
    v = (region.centroid - z) * (gnorm / params.delta)
    pc = classify_point(obj, z, frame=region.frame)
    if pc.tag is PointTag.ELLIPTIC:
        return v
    return -v
