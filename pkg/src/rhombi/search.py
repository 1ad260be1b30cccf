"""Inscribed rhombi of a given angle as intersections of two medians.

A point Z on both the theta-median and the (theta + pi/2)-median is the
common midpoint of a theta-chord p1p2 and a perpendicular chord q1q2, so
p1, q1, p2, q2 is an inscribed rhombus whose diagonals have angles theta
and theta + pi/2.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .curve import JordanCurve
from .frame import ArcSplit, check_arcs, split_arcs, support_frame
from .geometry import HALF_PI, canonical_angle, polyline_distance, segment_intersections
from .median import MedianSet, median_set

# centers closer than this (times the diameter) are the same rhombus
DEDUP_FRACTION = 1e-7
# four vertices closer than this (times the diameter) make a degenerate rhombus
DEGENERACY_FRACTION = 1e-7
# two median segments meet if they pass within this (times the diameter)
INTERSECT_FRACTION = 1e-11


@dataclass
class RhombusCandidate:
    """Vertices in cyclic order p1, q1, p2, q2; p1p2 has angle theta, q1q2 angle theta + pi/2."""

    theta: float
    center: np.ndarray
    vertices: np.ndarray
    preimages: tuple[float, float, float, float]
    metrics: dict = field(default_factory=dict)

    @property
    def p1(self) -> np.ndarray:
        return self.vertices[0]

    @property
    def q1(self) -> np.ndarray:
        return self.vertices[1]

    @property
    def p2(self) -> np.ndarray:
        return self.vertices[2]

    @property
    def q2(self) -> np.ndarray:
        return self.vertices[3]

    def to_dict(self) -> dict:
        return {
            "theta": float(self.theta),
            "center": [float(c) for c in self.center],
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
            "preimages": [float(t) for t in self.preimages],
            "metrics": {k: float(v) for k, v in sorted(self.metrics.items())},
        }

    def transformed(self, matrix=None, offset=(0.0, 0.0), scale: float = 1.0, theta: float | None = None) -> "RhombusCandidate":
        v = self.vertices if matrix is None else self.vertices @ np.asarray(matrix, float).T
        c = self.center if matrix is None else np.asarray(matrix, float) @ self.center
        off = np.asarray(offset, float)
        return RhombusCandidate(
            theta=self.theta if theta is None else theta,
            center=scale * c + off,
            vertices=scale * v + off,
            preimages=self.preimages,
            metrics=dict(self.metrics),
        )


def rhombus_metrics(vertices: np.ndarray, curve: JordanCurve | None = None) -> dict:
    v = np.asarray(vertices, float)
    sides = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
    seps = [float(np.linalg.norm(v[a] - v[b])) for a, b in itertools.combinations(range(4), 2)]
    out = {
        "side_dispersion": float(sides.max() / sides.min() - 1.0) if sides.min() > 0 else math.inf,
        "min_vertex_separation": min(seps),
    }
    if curve is not None:
        out["on_curve_residual"] = float(polyline_distance(v, curve.vertices).max())
    return out


@dataclass
class RhombusCheck:
    passed: bool
    side_dispersion: float
    diagonal_angle_error: float
    midpoint_mismatch: float
    on_curve_residual: float
    min_vertex_separation: float
    reasons: list[str] = field(default_factory=list)


def validate_rhombus(candidate: RhombusCandidate, curve: JordanCurve, tol: float) -> RhombusCheck:
    """Recompute every rhombus property from the vertices alone.

    Sides must agree within ``tol`` relative, the diagonals must be
    perpendicular within ``tol`` radians and bisect each other within
    ``tol`` times the diameter, and each vertex must lie within ``tol`` times
    the diameter of the curve.  Vertices closer than the degeneracy floor fail.
    """
    v = np.asarray(candidate.vertices, float)
    diam = curve.diameter
    m = rhombus_metrics(v, curve)
    d1 = v[2] - v[0]
    d2 = v[3] - v[1]
    n1, n2 = np.linalg.norm(d1), np.linalg.norm(d2)
    if n1 > 0 and n2 > 0:
        cosang = abs(float(d1 @ d2)) / (n1 * n2)
        angle_err = abs(HALF_PI - math.acos(min(cosang, 1.0)))
    else:
        angle_err = math.inf
    mid_gap = float(np.linalg.norm(0.5 * (v[0] + v[2]) - 0.5 * (v[1] + v[3])))
    reasons = []
    if not m["side_dispersion"] <= tol:
        reasons.append("unequal sides")
    if not angle_err <= tol:
        reasons.append("diagonals not perpendicular")
    if not mid_gap <= tol * diam:
        reasons.append("diagonals do not bisect each other")
    if not m["on_curve_residual"] <= tol * diam:
        reasons.append("vertex off the curve")
    if not m["min_vertex_separation"] >= DEGENERACY_FRACTION * diam:
        reasons.append("coincident vertices")
    return RhombusCheck(
        passed=not reasons,
        side_dispersion=m["side_dispersion"],
        diagonal_angle_error=angle_err,
        midpoint_mismatch=mid_gap,
        on_curve_residual=m["on_curve_residual"],
        min_vertex_separation=m["min_vertex_separation"],
        reasons=reasons,
    )


@dataclass
class SearchResult:
    theta: float
    candidates: list[RhombusCandidate]
    flags: frozenset
    median: MedianSet
    median_perp: MedianSet

    def __len__(self) -> int:
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)

    def __getitem__(self, i):
        return self.candidates[i]


def _bbox_pairs(a: np.ndarray, b: np.ndarray, pad: float, chunk: int = 2048) -> list[tuple[int, int]]:
    """Index pairs of segments (K, 2, 2) whose padded bounding boxes overlap."""
    alo, ahi = a.min(axis=1) - pad, a.max(axis=1) + pad
    blo, bhi = b.min(axis=1), b.max(axis=1)
    out: list[tuple[int, int]] = []
    for start in range(0, len(a), chunk):
        sl = slice(start, start + chunk)
        ok = (
            (alo[sl, None, 0] <= bhi[None, :, 0])
            & (blo[None, :, 0] <= ahi[sl, None, 0])
            & (alo[sl, None, 1] <= bhi[None, :, 1])
            & (blo[None, :, 1] <= ahi[sl, None, 1])
        )
        i, j = np.nonzero(ok)
        out.extend(zip((i + start).tolist(), j.tolist()))
    return out


def median_crossings(med_a: MedianSet, med_b: MedianSet, tol: float) -> list[tuple[int, float, int, float]]:
    """All (segment of a, parameter, segment of b, parameter) where the medians meet.

    Collinear overlaps, including those with thick-median boundaries, give
    the two ends of the overlap and its midpoint.
    """
    out = []
    sa, sb = med_a.segments, med_b.segments
    for i, j in _bbox_pairs(sa, sb, tol):
        for t, u in segment_intersections(sa[i, 0], sa[i, 1], sb[j, 0], sb[j, 1], tol):
            out.append((i, t, j, u))
    return out


def lift(curve: JordanCurve, med: MedianSet, med_perp: MedianSet, hit: tuple[int, float, int, float]) -> RhombusCandidate:
    """Rhombus whose diagonals are the chords behind a median crossing."""
    k, t, l, u = hit
    p1, p2 = med.chord(k, t)
    q1, q2 = med_perp.chord(l, u)
    i, s, j, r = med.preimage(k, t)
    a, b, c, d = med_perp.preimage(l, u)
    pre = (
        med.arcs.gamma.curve_param(curve, i, s),
        med_perp.arcs.gamma.curve_param(curve, a, b),
        med.arcs.Gamma.curve_param(curve, j, r),
        med_perp.arcs.Gamma.curve_param(curve, c, d),
    )
    verts = np.array([p1, q1, p2, q2])
    center = 0.5 * (med.point(k, t) + med_perp.point(l, u))
    return RhombusCandidate(theta=med.theta, center=center, vertices=verts, preimages=pre)


def finalize(candidates: list[RhombusCandidate], curve: JordanCurve) -> list[RhombusCandidate]:
    """Drop degenerate rhombi, merge near-equal centers, sort by center."""
    diam = curve.diameter
    floor = DEGENERACY_FRACTION * diam
    radius = DEDUP_FRACTION * diam
    kept: list[RhombusCandidate] = []
    for cand in candidates:
        cand.metrics = rhombus_metrics(cand.vertices, curve)
        if cand.metrics["min_vertex_separation"] < floor:
            continue
        if any(np.linalg.norm(cand.center - k.center) < radius for k in kept):
            continue
        kept.append(cand)
    kept.sort(key=lambda c: (float(c.center[0]), float(c.center[1])))
    return kept


def angle_is_special(corners, theta: float) -> bool:
    if not corners:
        return False
    th = canonical_angle(theta)
    return any(rec.contains(th) for rec in corners)


def medians_for(curve: JordanCurve, theta: float, check: bool = False) -> tuple[MedianSet, MedianSet]:
    th = canonical_angle(theta)
    out = []
    for angle in (th, th + HALF_PI):
        arcs: ArcSplit = split_arcs(curve, support_frame(curve, angle))
        if check:
            check_arcs(arcs)
        out.append(median_set(arcs))
    return out[0], out[1]


def find_rhombi(curve: JordanCurve, theta: float, corners=None, check: bool = False) -> SearchResult:
    """Inscribed rhombi of angle ``theta`` from the crossings of the two medians.

    ``corners`` (special corner records) only affects flags: an angle that is
    special for some corner is marked ``not_guaranteed``; otherwise an empty
    result is marked ``finding``.  With ``check`` the arc properties the
    construction relies on are verified and violations raise.
    """
    th = canonical_angle(theta)
    med, med_perp = medians_for(curve, th, check=check)
    tol = INTERSECT_FRACTION * curve.diameter
    hits = median_crossings(med, med_perp, tol)
    cands = finalize([lift(curve, med, med_perp, h) for h in hits], curve)
    for c in cands:
        c.theta = th
    flags = set(med.flags | med_perp.flags)
    if angle_is_special(corners, th):
        flags.add("not_guaranteed")
    elif not cands:
        flags.add("finding")
    return SearchResult(theta=th, candidates=cands, flags=frozenset(flags), median=med, median_perp=med_perp)
