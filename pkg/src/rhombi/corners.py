"""Special corners and the per-angle choice of search mode.

A vertex p is a special corner of angle theta when the lines of angles
theta and theta + pi/2 through p meet the curve only at p, i.e. the rest of
the curve sits inside one open quadrant of those axes.  Only vertices can
qualify: at an edge-interior point the curve leaves in two opposite
directions, which never fit in a single open quadrant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import JordanCurve
from .geometry import HALF_PI, canonical_angle

# open angle sets are shrunk by this much so grazing angles are excluded
ANGLE_GUARD = 1e-12


@dataclass(frozen=True)
class AngleInterval:
    """Interval of canonical angles in [0, pi/2); ``lo_closed`` marks a piece split off at 0."""

    lo: float
    hi: float
    lo_closed: bool = False

    def contains(self, theta: float) -> bool:
        if self.lo_closed and theta == self.lo:
            return True
        return self.lo < theta < self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo


def wrap_interval(lo: float, hi: float) -> list[AngleInterval]:
    """Open interval (lo, hi) of width < pi/2, reduced modulo pi/2 into [0, pi/2)."""
    if hi <= lo:
        return []
    a = canonical_angle(lo)
    b = a + (hi - lo)
    if b <= HALF_PI:
        return [AngleInterval(a, b)]
    return [AngleInterval(0.0, b - HALF_PI, lo_closed=True), AngleInterval(a, HALF_PI)]


def direction_range(curve: JordanCurve, index: int) -> tuple[float, float, np.ndarray]:
    """Continuous range of directions from vertex ``index`` to the rest of the curve.

    Directions to the other vertices are unwrapped along the curve; since no
    edge passes through the vertex, each edge sweeps the directions between
    its endpoints and the vertex directions give the exact range.  Returns
    (lo, hi, unwrapped directions in curve order starting after ``index``).
    """
    v = curve.vertices
    n = curve.n
    order = (index + 1 + np.arange(n - 1)) % n
    d = v[order] - v[index]
    phi = np.unwrap(np.arctan2(d[:, 1], d[:, 0]))
    return float(phi.min()), float(phi.max()), phi


def special_angle_bounds(curve: JordanCurve, index: int) -> tuple[float, float] | None:
    """Open set (lo, hi) of quadrant angles, before reduction mod pi/2, or ``None``."""
    lo, hi, _ = direction_range(curve, index)
    if hi - lo >= HALF_PI:
        return None
    a, b = hi - HALF_PI + ANGLE_GUARD, lo - ANGLE_GUARD
    if b <= a:
        return None
    return a, b


def special_corner_angles(curve: JordanCurve, vertex_index: int) -> list[AngleInterval]:
    """Canonical angles theta for which vertex ``vertex_index`` is a special corner."""
    b = special_angle_bounds(curve, vertex_index)
    return [] if b is None else wrap_interval(*b)


@dataclass(frozen=True)
class CornerRecord:
    vertex_index: int
    point: np.ndarray
    intervals: tuple

    def contains(self, theta: float) -> bool:
        th = canonical_angle(theta)
        return any(iv.contains(th) for iv in self.intervals)

    def to_dict(self) -> dict:
        return {
            "vertex_index": self.vertex_index,
            "point": [float(self.point[0]), float(self.point[1])],
            "intervals": [[iv.lo, iv.hi] for iv in self.intervals],
        }


def _sharp_vertices(curve: JordanCurve) -> np.ndarray:
    """Vertices whose two incident edges make an angle below pi/2."""
    v = curve.vertices
    a = np.roll(v, 1, axis=0) - v
    b = np.roll(v, -1, axis=0) - v
    cos = np.einsum("ij,ij->i", a, b) / (np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
    return np.flatnonzero(cos > 0.0)


def find_special_corners(curve: JordanCurve) -> list[CornerRecord]:
    out = []
    for i in _sharp_vertices(curve):
        ivs = special_corner_angles(curve, int(i))
        if ivs:
            out.append(CornerRecord(int(i), curve.vertices[i].copy(), tuple(ivs)))
    return out


# --- planning a sweep -------------------------------------------------------------


@dataclass
class PlanEntry:
    theta: float
    mode: str
    witness: dict | None = None


@dataclass
class TwoCornerCoverage:
    """Guarantee interval around ``theta0`` from a pair of special corners.

    ``frames`` maps +1 / -1 to the frame that covers angles above / below
    ``theta0``; ``half_width`` is the smaller of their guarantee radii so the
    interval is centered.
    """

    p: CornerRecord
    q: CornerRecord
    theta0: float
    half_width: float
    frames: dict = field(default_factory=dict)

    def offset(self, theta: float) -> float:
        """Signed distance from theta0 to theta, as rhombus angle classes."""
        return math.remainder(canonical_angle(theta) - self.theta0, HALF_PI)

    def covers(self, theta: float) -> bool:
        return abs(self.offset(theta)) < self.half_width


@dataclass
class SweepPlan:
    entries: list[PlanEntry]
    corners: list[CornerRecord]
    coverages: list[TwoCornerCoverage]

    def modes(self) -> list[str]:
        return [e.mode for e in self.entries]


def two_corner_coverages(curve: JordanCurve, corners: list[CornerRecord]) -> list[TwoCornerCoverage]:
    from .two_corner import frames_for_pair

    out = []
    for a in range(len(corners)):
        for b in range(a + 1, len(corners)):
            p, q = corners[a], corners[b]
            frames = frames_for_pair(curve, p, q)
            if 1 not in frames and -1 not in frames:
                continue
            sides = [f.eps for f in frames.values()]
            half = min(sides) if len(frames) == 2 else 0.0
            theta0 = next(iter(frames.values())).theta0
            out.append(TwoCornerCoverage(p, q, theta0, half, frames))
    return out


def plan_sweep(curve: JordanCurve, requested_angles, corners: list[CornerRecord] | None = None) -> SweepPlan:
    """Classify each angle as ``two_corner``, ``corner_free`` or ``uncovered``.

    A two-corner guarantee takes precedence, then the absence of special
    corners of that angle; anything else is left uncovered.
    """
    corners = find_special_corners(curve) if corners is None else corners
    coverages = two_corner_coverages(curve, corners) if len(corners) >= 2 else []
    entries = []
    for theta in requested_angles:
        th = canonical_angle(theta)
        cov = next((c for c in coverages if c.covers(th) or c.offset(th) == 0.0), None)
        if cov is not None:
            entries.append(
                PlanEntry(
                    th,
                    "two_corner",
                    {"p": cov.p.vertex_index, "q": cov.q.vertex_index, "theta0": cov.theta0},
                )
            )
        elif not any(rec.contains(th) for rec in corners):
            entries.append(PlanEntry(th, "corner_free"))
        else:
            entries.append(PlanEntry(th, "uncovered"))
    return SweepPlan(entries, corners, coverages)
