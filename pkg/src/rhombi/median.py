"""Exact chord-midpoint loci (medians) of polygonal arcs.

With ``f(r1, r2) = proj(gamma(r1)) - proj(Gamma(r2))`` and ``g`` the midpoint
map, the median is ``g(f^{-1}(0))``.  On the parameter rectangle of one edge
pair both arcs are affine, ``f`` is affine with no mixed term, so its zero set
is a segment (or the whole rectangle) and ``g`` maps it to a plane segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .frame import ArcSplit, RecRegion


@dataclass(frozen=True)
class MedianSet:
    """Union of plane segments with their parameter-space preimages.

    Segment ``k`` joins ``segments[k, 0]`` to ``segments[k, 1]``; its end ``e``
    is the midpoint of ``gamma`` edge ``gamma_edge[k]`` at local fraction
    ``s[k, e]`` and ``Gamma`` edge ``Gamma_edge[k]`` at fraction ``u[k, e]``.
    """

    theta: float
    arcs: ArcSplit
    segments: np.ndarray
    gamma_edge: np.ndarray
    Gamma_edge: np.ndarray
    s: np.ndarray
    u: np.ndarray
    thick: np.ndarray
    A: np.ndarray
    B: np.ndarray
    flags: frozenset = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.segments)

    @property
    def is_thick(self) -> bool:
        return bool(self.thick.any())

    def preimage(self, k: int, lam: float) -> tuple[int, float, int, float]:
        """(gamma edge, s, Gamma edge, u) of the point at ``lam`` along segment ``k``."""
        s = (1.0 - lam) * self.s[k, 0] + lam * self.s[k, 1]
        u = (1.0 - lam) * self.u[k, 0] + lam * self.u[k, 1]
        return int(self.gamma_edge[k]), float(s), int(self.Gamma_edge[k]), float(u)

    def chord(self, k: int, lam: float) -> tuple[np.ndarray, np.ndarray]:
        """Chord endpoints on gamma and Gamma whose midpoint is the given median point."""
        i, s, j, u = self.preimage(k, lam)
        return self.arcs.gamma.edge_point(i, s), self.arcs.Gamma.edge_point(j, u)

    def point(self, k: int, lam: float) -> np.ndarray:
        p1, p2 = self.chord(k, lam)
        return 0.5 * (p1 + p2)

    def param_segments(self) -> np.ndarray:
        """Segments in the (r1, r2) parameter square, shape (K, 2, 2)."""
        g, G = self.arcs.gamma, self.arcs.Gamma
        r1 = (1.0 - self.s) * g.cum[self.gamma_edge, None] + self.s * g.cum[self.gamma_edge + 1, None]
        r2 = (1.0 - self.u) * G.cum[self.Gamma_edge, None] + self.u * G.cum[self.Gamma_edge + 1, None]
        return np.stack([r1, r2], axis=-1)

    def endpoints(self) -> np.ndarray:
        return self.segments.reshape(-1, 2)

    def restricted(self, keep: np.ndarray) -> "MedianSet":
        return MedianSet(
            theta=self.theta,
            arcs=self.arcs,
            segments=self.segments[keep],
            gamma_edge=self.gamma_edge[keep],
            Gamma_edge=self.Gamma_edge[keep],
            s=self.s[keep],
            u=self.u[keep],
            thick=self.thick[keep],
            A=self.A,
            B=self.B,
            flags=self.flags,
        )

    def clipped(self, lam: np.ndarray) -> "MedianSet":
        """Replace each segment by its sub-segment between parameters lam[k, 0] and lam[k, 1]."""
        l0, l1 = lam[:, 0:1], lam[:, 1:2]
        seg0 = self.segments[:, 0]
        seg1 = self.segments[:, 1]
        new_seg = np.stack([(1 - l0) * seg0 + l0 * seg1, (1 - l1) * seg0 + l1 * seg1], axis=1)
        s = np.concatenate([(1 - l0) * self.s[:, :1] + l0 * self.s[:, 1:], (1 - l1) * self.s[:, :1] + l1 * self.s[:, 1:]], axis=1)
        u = np.concatenate([(1 - l0) * self.u[:, :1] + l0 * self.u[:, 1:], (1 - l1) * self.u[:, :1] + l1 * self.u[:, 1:]], axis=1)
        return MedianSet(
            theta=self.theta,
            arcs=self.arcs,
            segments=new_seg,
            gamma_edge=self.gamma_edge,
            Gamma_edge=self.Gamma_edge,
            s=s,
            u=u,
            thick=self.thick,
            A=self.A,
            B=self.B,
            flags=self.flags,
        )


def _side_zeros(fa: float, fb: float) -> list[float]:
    out = []
    if fa == 0.0:
        out.append(0.0)
    if fb == 0.0:
        out.append(1.0)
    if fa * fb < 0.0:
        out.append(fa / (fa - fb))
    return out


_THICK_BOUNDARY = (((0.0, 0.0), (1.0, 0.0)), ((1.0, 0.0), (1.0, 1.0)), ((1.0, 1.0), (0.0, 1.0)), ((0.0, 1.0), (0.0, 0.0)))


def rect_zero_set(c00: float, c10: float, c01: float, c11: float):
    """Zero set of the affine function with the given corner values on [0, 1]^2.

    Returns ``None`` (empty), ``"thick"`` (identically zero) or a pair of
    (s, u) points (equal for a single touching point).  Points on a side are
    computed from that side's two corner values only, in increasing
    parameter direction, so neighbouring rectangles agree bit for bit.
    """
    if c00 == 0.0 and c10 == 0.0 and c01 == 0.0 and c11 == 0.0:
        return "thick"
    pts: list[tuple[float, float]] = []
    for lam in _side_zeros(c00, c10):
        pts.append((lam, 0.0))
    for lam in _side_zeros(c01, c11):
        pts.append((lam, 1.0))
    for lam in _side_zeros(c00, c01):
        pts.append((0.0, lam))
    for lam in _side_zeros(c10, c11):
        pts.append((1.0, lam))
    pts = sorted(set(pts))
    if not pts:
        return None
    if len(pts) <= 2:
        return pts[0], pts[-1]
    best, pair = -1.0, (pts[0], pts[-1])
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            d = math.dist(pts[a], pts[b])
            if d > best:
                best, pair = d, (pts[a], pts[b])
    return pair


def median_set(arcs: ArcSplit, theta: float | None = None) -> MedianSet:
    """Exact median of ``arcs`` for chords of angle ``theta`` (defaults to the frame's)."""
    fr = arcs.frame
    theta = fr.theta if theta is None else theta
    if abs(math.remainder(theta - fr.theta, math.pi)) > 1e-12:
        raise ValueError("theta does not match the frame the arcs were split with")
    st, ct = math.sin(fr.theta), math.cos(fr.theta)
    g, G = arcs.gamma, arcs.Gamma
    Pg = g.points[:, 0] * st - g.points[:, 1] * ct
    PG = G.points[:, 0] * st - G.points[:, 1] * ct
    # arc endpoints lie on the support lines by construction
    Pg[0], Pg[-1] = fr.m, fr.M
    PG[0], PG[-1] = fr.m, fr.M
    D = Pg[:, None] - PG[None, :]
    c00, c10, c01, c11 = D[:-1, :-1], D[1:, :-1], D[:-1, 1:], D[1:, 1:]
    stack = np.stack([c00, c10, c01, c11])
    cand = ~((stack > 0).all(axis=0) | (stack < 0).all(axis=0))

    segs, gi, Gj, ss, uu, thick = [], [], [], [], [], []
    for i, j in zip(*np.nonzero(cand)):
        z = rect_zero_set(c00[i, j], c10[i, j], c01[i, j], c11[i, j])
        if z is None:
            continue
        pieces = _THICK_BOUNDARY if z == "thick" else (z,)
        for (s0, u0), (s1, u1) in pieces:
            a = 0.5 * (g.edge_point(i, s0) + G.edge_point(j, u0))
            b = 0.5 * (g.edge_point(i, s1) + G.edge_point(j, u1))
            segs.append((a, b))
            gi.append(i)
            Gj.append(j)
            ss.append((s0, s1))
            uu.append((u0, u1))
            thick.append(z == "thick")

    thick_arr = np.array(thick, dtype=bool)
    flags = frozenset({"thick_median"}) if thick_arr.any() else frozenset()
    return MedianSet(
        theta=fr.theta,
        arcs=arcs,
        segments=np.array(segs, dtype=float).reshape(-1, 2, 2),
        gamma_edge=np.array(gi, dtype=int),
        Gamma_edge=np.array(Gj, dtype=int),
        s=np.array(ss, dtype=float).reshape(-1, 2),
        u=np.array(uu, dtype=float).reshape(-1, 2),
        thick=thick_arr,
        A=0.5 * (g.start + G.start),
        B=0.5 * (g.end + G.end),
        flags=flags,
    )


# --- pixelized zero sets ---------------------------------------------------------

_EDGE_EPS = 1e-9


@dataclass
class ZeroMask:
    """Boolean G x G grid over [0, 1]^2; ``cells[a, b]`` covers [a/G, (a+1)/G] x [b/G, (b+1)/G]."""

    resolution: int
    cells: np.ndarray

    @classmethod
    def empty(cls, resolution: int) -> "ZeroMask":
        return cls(resolution, np.zeros((resolution, resolution), dtype=bool))

    def marked(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.cells))]

    def __len__(self) -> int:
        return int(self.cells.sum())


def mark_segment(cells: np.ndarray, p: np.ndarray, q: np.ndarray) -> None:
    """Mark every closed cell met by the segment pq (grid coordinates in [0, G])."""
    G = cells.shape[0]
    x0, y0 = float(p[0]), float(p[1])
    x1, y1 = float(q[0]), float(q[1])
    if x0 > x1:
        x0, y0, x1, y1 = x1, y1, x0, y0
    c_lo = max(0, math.floor(x0 - _EDGE_EPS))
    c_hi = min(G - 1, math.floor(x1 + _EDGE_EPS))
    dx = x1 - x0
    for c in range(c_lo, c_hi + 1):
        if dx > 0:
            t0 = min(max((c - _EDGE_EPS - x0) / dx, 0.0), 1.0)
            t1 = min(max((c + 1 + _EDGE_EPS - x0) / dx, 0.0), 1.0)
        else:
            t0, t1 = 0.0, 1.0
        ya = y0 + t0 * (y1 - y0)
        yb = y0 + t1 * (y1 - y0)
        r_lo = max(0, math.floor(min(ya, yb) - _EDGE_EPS))
        r_hi = min(G - 1, math.floor(max(ya, yb) + _EDGE_EPS))
        if r_lo <= r_hi:
            cells[c, r_lo : r_hi + 1] = True


def mark_box(cells: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> None:
    G = cells.shape[0]
    a0 = max(0, math.floor(lo[0] - _EDGE_EPS))
    a1 = min(G - 1, math.floor(hi[0] + _EDGE_EPS))
    b0 = max(0, math.floor(lo[1] - _EDGE_EPS))
    b1 = min(G - 1, math.floor(hi[1] + _EDGE_EPS))
    cells[a0 : a1 + 1, b0 : b1 + 1] = True


def median_mask(arcs: ArcSplit, theta: float | None, resolution: int, median: MedianSet | None = None) -> ZeroMask:
    """Cells of the (r1, r2) parameter square met by the exact zero set of ``f``.

    The corner cells at (0, 0) and (1, 1) are always marked.
    """
    if resolution < 16:
        raise ValueError("mask resolution must be at least 16")
    med = median if median is not None else median_set(arcs, theta)
    G = resolution
    cells = np.zeros((G, G), dtype=bool)
    g, Gm = arcs.gamma, arcs.Gamma
    for k, seg in enumerate(med.param_segments() * G):
        if med.thick[k]:
            i, j = med.gamma_edge[k], med.Gamma_edge[k]
            lo = np.array([g.cum[i], Gm.cum[j]]) * G
            hi = np.array([g.cum[i + 1], Gm.cum[j + 1]]) * G
            mark_box(cells, lo, hi)
        else:
            mark_segment(cells, seg[0], seg[1])
    cells[0, 0] = True
    cells[G - 1, G - 1] = True
    return ZeroMask(G, cells)


def plane_mask(median: MedianSet, rec: RecRegion, resolution: int) -> ZeroMask:
    """Cells of Rec (in its own unit coordinates) met by the median's plane segments."""
    G = resolution
    cells = np.zeros((G, G), dtype=bool)
    uv = rec.unit(median.segments) * G
    for seg in uv:
        mark_segment(cells, seg[0], seg[1])
    return ZeroMask(G, cells)
