"""Brute-force inscribed rhombi for cross-checking the median pipeline.

Dense arc-length samples are paired into chords; chords close to angle
theta and chords close to theta + pi/2 with nearly equal midpoints give
approximate rhombi.  Each approximate rhombus is then solved exactly on the
polygon edges around its four samples, which needs nothing from the median
construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.spatial import cKDTree

from .curve import JordanCurve
from .geometry import HALF_PI, canonical_angle
from .search import RhombusCandidate, rhombus_metrics


@dataclass(frozen=True)
class OracleConfig:
    """Dense-sampling parameters.

    A sampled chord counts as having angle theta when its direction is within
    ``angle_tol`` of theta or its endpoints are within ``offset_tol`` (times
    the diameter) of a common line of angle theta; the offset rule catches
    short chords, whose direction is dominated by sampling error.  Midpoints
    closer than ``midpoint_tol`` (times the diameter) are matched.
    ``offset_tol`` defaults to the sample spacing.
    """

    samples: int = 2000
    angle_tol: float = 2e-3
    midpoint_tol: float = 5e-3
    offset_tol: float | None = None
    refine: bool = True

    def __post_init__(self):
        if self.samples < 100:
            raise ValueError("oracle needs at least 100 samples")
        if not (self.angle_tol > 0 and self.midpoint_tol > 0):
            raise ValueError("oracle tolerances must be positive")
        if self.offset_tol is not None and not self.offset_tol > 0:
            raise ValueError("oracle tolerances must be positive")

    @classmethod
    def for_curve(cls, curve: JordanCurve, samples: int = 2000, **kw) -> "OracleConfig":
        """Midpoint radius of two sample spacings, as a fraction of the diameter."""
        spacing = curve.length / samples / curve.diameter
        kw.setdefault("midpoint_tol", 2.0 * spacing)
        return cls(samples=samples, **kw)


def _chords(pts: np.ndarray, phi: float, angle_tol: float, offset_tol: float, chunk: int = 256) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (i < j) whose chord is close to a line of angle ``phi``."""
    n = len(pts)
    normal = np.array([math.sin(phi), -math.cos(phi)])
    out_i, out_j = [], []
    for start in range(0, n, chunk):
        i = np.arange(start, min(start + chunk, n))
        d = pts[None, :, :] - pts[i, None, :]
        ang = np.arctan2(d[..., 1], d[..., 0])
        diff = np.abs(np.remainder(ang - phi + HALF_PI, math.pi) - HALF_PI)
        ok = (diff <= angle_tol) | (np.abs(d @ normal) <= offset_tol)
        ok &= np.arange(n)[None, :] > i[:, None]
        a, b = np.nonzero(ok)
        out_i.append(i[a])
        out_j.append(b)
    return np.concatenate(out_i), np.concatenate(out_j)


def _raw_matches(pts: np.ndarray, theta: float, cfg: OracleConfig, diam: float, spacing: float) -> np.ndarray:
    """Sample quadruples (p1, p2, q1, q2) of nearly perpendicular chords with nearly equal midpoints."""
    off = (cfg.offset_tol * diam) if cfg.offset_tol is not None else spacing
    ai, aj = _chords(pts, theta, cfg.angle_tol, off)
    bi, bj = _chords(pts, theta + HALF_PI, cfg.angle_tol, off)
    if len(ai) == 0 or len(bi) == 0:
        return np.zeros((0, 4), dtype=int)
    amid = 0.5 * (pts[ai] + pts[aj])
    bmid = 0.5 * (pts[bi] + pts[bj])
    coo = cKDTree(amid).sparse_distance_matrix(cKDTree(bmid), cfg.midpoint_tol * diam, output_type="coo_matrix")
    k, b = coo.row, coo.col
    return np.stack([ai[k], aj[k], bi[b], bj[b]], axis=1)


def _unique_rows(rows: np.ndarray, n: int) -> np.ndarray:
    """Distinct rows of non-negative integers below ``n``, via a single int64 code per row."""
    code = np.zeros(len(rows), dtype=np.int64)
    for c in range(rows.shape[1]):
        code = code * n + rows[:, c]
    code = np.unique(code)
    out = np.empty((len(code), rows.shape[1]), dtype=np.int64)
    for c in range(rows.shape[1] - 1, -1, -1):
        out[:, c] = code % n
        code //= n
    return out


_OFFSETS = np.array(list(product((-1, 0, 1), repeat=4)))


def _refine(curve: JordanCurve, theta: float, keys: np.ndarray) -> np.ndarray:
    """Exact rhombi with vertices on edges next to each (p1, p2, q1, q2) edge quadruple.

    The conditions (p1p2 along theta, q1q2 along theta + pi/2, equal
    midpoints) are linear in the four edge fractions.  Returns vertex arrays
    (K, 4, 2) in cyclic order p1, q1, p2, q2.
    """
    n = curve.n
    V = curve.vertices
    E = ((keys[:, None, :] + _OFFSETS[None, :, :]) % n).reshape(-1, 4)
    E = _unique_rows(E, n)
    P0 = V[E]
    D = V[(E + 1) % n] - P0
    nv = np.array([math.sin(theta), -math.cos(theta)])
    mv = np.array([math.cos(theta), math.sin(theta)])
    A = np.zeros((len(E), 4, 4))
    rhs = np.zeros((len(E), 4))
    A[:, 0, 0] = D[:, 0] @ nv
    A[:, 0, 1] = -(D[:, 1] @ nv)
    rhs[:, 0] = (P0[:, 1] - P0[:, 0]) @ nv
    A[:, 1, 2] = D[:, 2] @ mv
    A[:, 1, 3] = -(D[:, 3] @ mv)
    rhs[:, 1] = (P0[:, 3] - P0[:, 2]) @ mv
    for c in range(2):
        A[:, 2 + c, 0] = D[:, 0, c]
        A[:, 2 + c, 1] = D[:, 1, c]
        A[:, 2 + c, 2] = -D[:, 2, c]
        A[:, 2 + c, 3] = -D[:, 3, c]
        rhs[:, 2 + c] = P0[:, 2, c] + P0[:, 3, c] - P0[:, 0, c] - P0[:, 1, c]
    scale = np.abs(A).max(axis=(1, 2))
    ok = np.abs(np.linalg.det(A)) > 1e-12 * scale**4
    if not ok.any():
        return np.zeros((0, 4, 2))
    t = np.linalg.solve(A[ok], rhs[ok][..., None])[..., 0]
    inside = np.all((t >= -1e-12) & (t <= 1 + 1e-12), axis=1)
    t = np.clip(t[inside], 0.0, 1.0)
    P = P0[ok][inside] + t[..., None] * D[ok][inside]
    return P[:, [0, 2, 1, 3]]


def _distinct(verts: np.ndarray, radius: float, floor: float) -> np.ndarray:
    """Drop rhombi with coincident vertices, then keep one per cluster of centers within ``radius``."""
    if not len(verts):
        return verts
    sep = np.full(len(verts), np.inf)
    for a in range(4):
        for b in range(a + 1, 4):
            sep = np.minimum(sep, np.linalg.norm(verts[:, a] - verts[:, b], axis=1))
    verts = verts[sep >= floor]
    centers = 0.25 * verts.sum(axis=1)
    order = np.lexsort((centers[:, 1], centers[:, 0]))
    verts, centers = verts[order], centers[order]
    tree = cKDTree(centers)
    keep = np.ones(len(verts), dtype=bool)
    for i in range(len(verts)):
        if keep[i]:
            near = tree.query_ball_point(centers[i], radius)
            keep[[j for j in near if j > i]] = False
    return verts[keep]


def brute_force_rhombi(curve: JordanCurve, theta: float, config: OracleConfig | None = None) -> list[RhombusCandidate]:
    cfg = config or OracleConfig()
    th = canonical_angle(theta)
    diam = curve.diameter
    M = cfg.samples
    pts = curve.resample(M)
    spacing = curve.length / M
    s = np.arange(M) * spacing
    sample_edge = np.clip(np.searchsorted(curve.cumulative_length, s, side="right") - 1, 0, curve.n - 1)
    raw = _raw_matches(pts, th, cfg, diam, spacing)

    floor = 1e-7 * diam
    found = np.zeros((0, 4, 2))
    if len(raw) and cfg.refine:
        found = _distinct(_refine(curve, th, _unique_rows(sample_edge[raw], curve.n)), floor, floor)
    if len(raw) and not len(found):
        approx = pts[raw[:, [0, 2, 1, 3]]]
        found = _distinct(approx, cfg.midpoint_tol * diam, floor)

    out = []
    for v in found:
        c = 0.25 * v.sum(axis=0)
        out.append(RhombusCandidate(theta=th, center=c, vertices=v, preimages=(math.nan,) * 4, metrics=rhombus_metrics(v, curve)))
    out.sort(key=lambda c: (float(c.center[0]), float(c.center[1])))
    return out


@dataclass
class MatchReport:
    matched: list[tuple[int, int, float]] = field(default_factory=list)
    found_only: list[int] = field(default_factory=list)
    oracle_only: list[int] = field(default_factory=list)

    @property
    def max_distance(self) -> float:
        return max((d for _, _, d in self.matched), default=0.0)

    def to_dict(self) -> dict:
        return {
            "matched": [[i, j, d] for i, j, d in self.matched],
            "median_only": list(self.found_only),
            "oracle_only": list(self.oracle_only),
        }


def compare_with_oracle(found: list[RhombusCandidate], oracle: list[RhombusCandidate], radius: float) -> MatchReport:
    """Greedy one-to-one matching of centers, nearest pairs first, ties by oracle residual."""
    pairs = []
    for i, a in enumerate(found):
        for j, b in enumerate(oracle):
            d = float(np.linalg.norm(np.asarray(a.center) - np.asarray(b.center)))
            if d <= radius:
                pairs.append((d, b.metrics.get("on_curve_residual", 0.0), i, j))
    pairs.sort()
    used_i, used_j = set(), set()
    rep = MatchReport()
    for d, _, i, j in pairs:
        if i in used_i or j in used_j:
            continue
        used_i.add(i)
        used_j.add(j)
        rep.matched.append((i, j, d))
    rep.matched.sort()
    rep.found_only = [i for i in range(len(found)) if i not in used_i]
    rep.oracle_only = [j for j in range(len(oracle)) if j not in used_j]
    return rep
