"""Geometric stability and operational efficiency metrics for removal candidates."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .assembly import AssemblyBundle, HostGroup, subsequence_excluding

COLLINEAR_TOL = 1e-12
DISTANCE_EPS = 1e-9  # mm


@dataclass(frozen=True)
class StabilityRatios:
    rho_J: float
    rho_A: float
    degenerate_J: bool = False
    degenerate_A: bool = False


@dataclass(frozen=True)
class EfficiencyDeltas:
    delta_T: int
    delta_D: float


def _as_points(points, dim: int) -> np.ndarray:
    return np.asarray(points, dtype=float).reshape(-1, dim)


def polar_moment(points) -> float:
    """Mean squared distance of the points from their centroid (0 for <2 points)."""
    pts = _as_points(points, 3)
    if len(pts) < 2:
        return 0.0
    centered = pts - pts.mean(axis=0)
    return float(np.einsum("ij,ij->", centered, centered) / len(pts))


def _fix_sign(v: np.ndarray) -> np.ndarray:
    for x in v:
        if abs(x) > COLLINEAR_TOL:
            return v if x > 0 else -v
    return v


def principal_axes(points) -> np.ndarray:
    """Return the 3 principal axes as rows, by descending variance.

    Each axis is sign-fixed so its first non-negligible loading is positive.
    Eigenvalues equal to within a relative 1e-12 are ordered by the
    descending lexicographic order of their axes, so e.g. an isotropic
    cloud yields the x, y, z axes in that order.
    """
    pts = _as_points(points, 3)
    centered = pts - pts.mean(axis=0)
    cov = centered.T @ centered / max(len(pts), 1)
    values, vectors = np.linalg.eigh(cov)
    axes = [_fix_sign(vectors[:, k]) for k in range(3)]
    scale = max(float(values.max()), 0.0)
    tol = COLLINEAR_TOL * scale

    def key(k: int):
        # round equal-within-tolerance eigenvalues onto a common bucket
        bucket = round(values[k] / tol) if tol > 0 else 0
        return (-bucket, tuple(-x for x in axes[k]))

    order = sorted(range(3), key=key)
    return np.array([axes[k] for k in order])


def pca_plane_projection(points) -> np.ndarray:
    """Project 3D points onto their two leading principal axes; returns (m, 2)."""
    pts = _as_points(points, 3)
    if len(pts) == 0:
        raise ValueError("at least one point is required")
    centered = pts - pts.mean(axis=0)
    if not centered.any():
        return np.zeros((len(pts), 2))
    axes = principal_axes(pts)
    return centered @ axes[:2].T


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points2d) -> list[tuple[float, float]]:
    """Monotone-chain hull, counter-clockwise, collinear points dropped."""
    pts = sorted(set(map(tuple, _as_points(points2d, 2).tolist())))
    if len(pts) < 3:
        return pts

    def chain(seq):
        out: list[tuple[float, float]] = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    return lower[:-1] + upper[:-1]


def convex_hull_area(points2d) -> float:
    """Shoelace area of the hull; 0 when the points are collinear.

    Hulls thinner than COLLINEAR_TOL relative to their diameter (area below
    COLLINEAR_TOL * diameter**2) are treated as collinear, which absorbs the
    rounding noise left by projecting a straight row of points.
    """
    hull = convex_hull(points2d)
    if len(hull) < 3:
        return 0.0
    xs = np.array([p[0] for p in hull])
    ys = np.array([p[1] for p in hull])
    area = float(abs(np.dot(xs, np.roll(ys, -1)) - np.dot(ys, np.roll(xs, -1))) / 2.0)
    diameter2 = max((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 for a in hull for b in hull)
    return 0.0 if area <= COLLINEAR_TOL * diameter2 else area


def footprint_area(points3d) -> float:
    """Convex hull area of 3D points on their principal plane (0 if empty)."""
    pts = _as_points(points3d, 3)
    if len(pts) < 3:
        return 0.0
    return convex_hull_area(pca_plane_projection(pts))


def _ratio(before: float, after: float) -> tuple[float, bool]:
    if before == 0.0:
        return 1.0, True
    if after == 0.0:
        return 0.0, False
    return after / before, False


def stability_ratios(group: HostGroup, removed: Iterable[int], bundle: AssemblyBundle) -> StabilityRatios:
    removed = set(removed)
    if not removed <= set(group.fasteners):
        raise ValueError(f"removal set {sorted(removed)} is not within host {group.host}'s fasteners")
    centers = bundle.centers
    before = centers[list(group.fasteners)]
    after = centers[[f for f in group.fasteners if f not in removed]]
    rho_J, deg_J = _ratio(polar_moment(before), polar_moment(after))
    rho_A, deg_A = _ratio(footprint_area(before), footprint_area(after))
    return StabilityRatios(rho_J, rho_A, deg_J, deg_A)


def tool_changes(sequence: Sequence[int], bundle: AssemblyBundle) -> int:
    if len(sequence) == 0:
        raise ValueError("sequence must be non-empty")
    tools = [bundle.parts[c].tool for c in sequence]
    return sum(a != b for a, b in zip(tools, tools[1:]))


def travel_distance(sequence: Sequence[int], bundle: AssemblyBundle) -> float:
    if len(sequence) == 0:
        raise ValueError("sequence must be non-empty")
    path = bundle.centers[list(sequence)]
    return float(np.linalg.norm(np.diff(path, axis=0), axis=1).sum())


def efficiency_deltas(bundle: AssemblyBundle, removed: Iterable[int]) -> EfficiencyDeltas:
    removed = set(removed)
    if len(removed) >= bundle.n:
        raise ValueError("cannot remove every part")
    base = bundle.baseline_sequence
    reduced = subsequence_excluding(base, removed)
    delta_D = travel_distance(reduced, bundle) - travel_distance(base, bundle)
    # rounding can leave a few ulps of either sign where the triangle inequality is tight
    if abs(delta_D) <= DISTANCE_EPS:
        delta_D = 0.0
    return EfficiencyDeltas(
        delta_T=tool_changes(reduced, bundle) - tool_changes(base, bundle),
        delta_D=delta_D,
    )
