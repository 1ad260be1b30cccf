"""Angle-dependent support data of a curve and the three-arc decomposition.

For a line angle ``theta`` the curve is squeezed between two support lines
``x sin(theta) - y cos(theta) = m`` and ``= M``.  The extremal contact points on
those lines (and on the halfway line ``mu``) split the curve into the arcs that
the median construction pairs up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curve import JordanCurve
from .errors import InvariantViolation
from .geometry import HALF_PI, reduce_angle, segments_touch

# contact with a support line is decided at this fraction of the diameter
SUPPORT_TOL = 1e-9


@dataclass(frozen=True)
class CurvePos:
    """A point on a curve: ``frac`` in [0, 1) along edge ``edge``."""

    edge: int
    frac: float

    def key(self, origin: "CurvePos", n: int) -> tuple[int, float]:
        """Ordering key of this position going forward from ``origin``."""
        d = (self.edge - origin.edge) % n
        if d == 0 and self.frac < origin.frac:
            d = n
        return d, self.frac


def _pos(curve: JordanCurve, edge: int, frac: float) -> CurvePos:
    if frac >= 1.0:
        return CurvePos((edge + 1) % curve.n, 0.0)
    return CurvePos(edge % curve.n, float(frac))


@dataclass(frozen=True)
class SupportFrame:
    theta: float
    M: float
    m: float
    mu: float
    MM: np.ndarray
    mM: np.ndarray
    Mm: np.ndarray
    mm: np.ndarray
    Mmu: np.ndarray
    mmu: np.ndarray
    t_min: float
    t_max: float
    A: np.ndarray
    B: np.ndarray
    positions: dict
    tol: float

    @property
    def strip(self) -> tuple[float, float]:
        return self.m, self.M

    def point(self, name: str) -> np.ndarray:
        return getattr(self, name)


def support_frame(curve: JordanCurve, theta: float) -> SupportFrame:
    """All support data of ``curve`` for lines of angle ``theta`` (reduced mod pi).

    Extremal points on a support line are vertices: when an edge lies on the
    line its endpoints are the candidates, and the one with the largest
    (smallest) coordinate along the line is taken.
    """
    theta = reduce_angle(theta)
    st, ct = math.sin(theta), math.cos(theta)
    v = curve.vertices
    P = v[:, 0] * st - v[:, 1] * ct
    T = v[:, 0] * ct + v[:, 1] * st
    tol = SUPPORT_TOL * curve.diameter
    M = float(P.max())
    m = float(P.min())
    mu = 0.5 * (M + m)

    def extremes(on: np.ndarray) -> tuple[int, int]:
        idx = np.flatnonzero(on)
        return int(idx[np.argmin(T[idx])]), int(idx[np.argmax(T[idx])])

    i_mM, i_MM = extremes(P >= M - tol)
    i_mm, i_Mm = extremes(P <= m + tol)

    # crossings of the halfway line, one per edge (or both ends of an edge lying on it)
    Pn = np.roll(P, -1)
    d = Pn - P
    hits: list[tuple[float, int, float]] = []
    for k in np.flatnonzero((P - mu) * (Pn - mu) <= 0):
        k = int(k)
        if d[k] == 0.0:
            hits.append((float(T[k]), k, 0.0))
            hits.append((float(T[(k + 1) % curve.n]), k, 1.0))
            continue
        s = (mu - P[k]) / d[k]
        s = min(max(s, 0.0), 1.0)
        hits.append((float((1.0 - s) * T[k] + s * T[(k + 1) % curve.n]), k, float(s)))
    t_min, k_lo, s_lo = min(hits)
    t_max, k_hi, s_hi = max(hits)

    positions = {
        "MM": CurvePos(i_MM, 0.0),
        "mM": CurvePos(i_mM, 0.0),
        "Mm": CurvePos(i_Mm, 0.0),
        "mm": CurvePos(i_mm, 0.0),
        "mmu": _pos(curve, k_lo, s_lo),
        "Mmu": _pos(curve, k_hi, s_hi),
    }
    pts = {name: curve.point_on_edge(p.edge, p.frac) for name, p in positions.items()}
    return SupportFrame(
        theta=theta,
        M=M,
        m=m,
        mu=mu,
        MM=pts["MM"],
        mM=pts["mM"],
        Mm=pts["Mm"],
        mm=pts["mm"],
        Mmu=pts["Mmu"],
        mmu=pts["mmu"],
        t_min=t_min,
        t_max=t_max,
        A=0.5 * (pts["Mm"] + pts["mm"]),
        B=0.5 * (pts["MM"] + pts["mM"]),
        positions=positions,
        tol=tol,
    )


# --- arcs --------------------------------------------------------------------


@dataclass(frozen=True)
class Arc:
    """A sub-polyline of a curve, parametrized by normalized arc length on [0, 1].

    Arc edge ``k`` runs along curve edge ``curve_edges[k]`` from local fraction
    ``frac0[k]`` to ``frac1[k]`` (decreasing when the arc runs backwards).
    """

    points: np.ndarray
    curve_edges: np.ndarray
    frac0: np.ndarray
    frac1: np.ndarray
    cum: np.ndarray

    @property
    def n_edges(self) -> int:
        return len(self.curve_edges)

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    def edge_point(self, k: int, s: float) -> np.ndarray:
        return (1.0 - s) * self.points[k] + s * self.points[k + 1]

    def arc_param(self, k: int, s: float) -> float:
        return float((1.0 - s) * self.cum[k] + s * self.cum[k + 1])

    def locate(self, r: float) -> tuple[int, float]:
        r = min(max(r, 0.0), 1.0)
        k = int(np.searchsorted(self.cum, r, side="right") - 1)
        k = min(max(k, 0), self.n_edges - 1)
        span = self.cum[k + 1] - self.cum[k]
        return k, float(min(max((r - self.cum[k]) / span, 0.0), 1.0)) if span > 0 else 0.0

    def point(self, r: float) -> np.ndarray:
        return self.edge_point(*self.locate(r))

    def curve_position(self, k: int, s: float) -> tuple[int, float]:
        """Curve edge and fraction of the point ``s`` along arc edge ``k``."""
        return int(self.curve_edges[k]), float((1.0 - s) * self.frac0[k] + s * self.frac1[k])

    def curve_param(self, curve: JordanCurve, k: int, s: float) -> float:
        return curve.param(*self.curve_position(k, s))

    def param_of(self, curve: JordanCurve, pos: CurvePos) -> float | None:
        """Arc parameter of a curve position, or ``None`` if it is not on the arc."""
        best = None
        options = [(pos.edge, pos.frac)]
        if pos.frac == 0.0:
            options.append(((pos.edge - 1) % curve.n, 1.0))
        for e, f in options:
            for k in np.flatnonzero(self.curve_edges == e):
                f0, f1 = self.frac0[k], self.frac1[k]
                if min(f0, f1) <= f <= max(f0, f1):
                    s = 0.0 if f1 == f0 else (f - f0) / (f1 - f0)
                    r = self.arc_param(int(k), float(s))
                    best = r if best is None else min(best, r)
        return best

    def reversed(self) -> "Arc":
        return Arc(
            points=self.points[::-1].copy(),
            curve_edges=self.curve_edges[::-1].copy(),
            frac0=self.frac1[::-1].copy(),
            frac1=self.frac0[::-1].copy(),
            cum=(1.0 - self.cum[::-1]).copy(),
        )


def forward_arc(curve: JordanCurve, start: CurvePos, end: CurvePos) -> Arc:
    """Arc from ``start`` to ``end`` in the direction of increasing curve parameter."""
    n = curve.n
    if start == end:
        raise InvariantViolation("arc endpoints coincide")
    pieces: list[tuple[int, float, float]] = []
    if start.edge == end.edge and start.frac < end.frac:
        pieces.append((start.edge, start.frac, end.frac))
    else:
        pieces.append((start.edge, start.frac, 1.0))
        e = (start.edge + 1) % n
        while e != end.edge:
            pieces.append((e, 0.0, 1.0))
            e = (e + 1) % n
        if end.frac > 0.0:
            pieces.append((end.edge, 0.0, end.frac))
    pts = [curve.point_on_edge(start.edge, start.frac)]
    lengths = []
    for e, f0, f1 in pieces:
        pts.append(curve.point_on_edge(e, f1))
        lengths.append((f1 - f0) * curve.edge_lengths[e])
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    cum /= cum[-1]
    cum[-1] = 1.0
    return Arc(
        points=np.array(pts),
        curve_edges=np.array([p[0] for p in pieces], dtype=int),
        frac0=np.array([p[1] for p in pieces]),
        frac1=np.array([p[2] for p in pieces]),
        cum=cum,
    )


def arc_through(curve: JordanCurve, start: CurvePos, end: CurvePos, via: CurvePos) -> tuple[Arc, Arc]:
    """The arc from ``start`` to ``end`` that passes ``via``, and the other one.

    Both are oriented from ``start`` to ``end``.
    """
    n = curve.n
    fwd = forward_arc(curve, start, end)
    back = forward_arc(curve, end, start).reversed()
    if start.key(start, n) < via.key(start, n) < end.key(start, n):
        return fwd, back
    return back, fwd


@dataclass(frozen=True)
class ArcSplit:
    gamma: Arc
    gamma_o: Arc
    Gamma: Arc
    Gamma_o: Arc
    frame: SupportFrame


def split_arcs(curve: JordanCurve, frame: SupportFrame) -> ArcSplit:
    """Split the curve at the frame's extremal points.

    ``gamma`` runs mm -> mM through mmu, ``Gamma`` runs Mm -> MM through Mmu;
    ``gamma_o`` and ``Gamma_o`` are the complementary arcs.
    """
    pos = frame.positions
    if pos["mm"] == pos["mM"] or pos["Mm"] == pos["MM"]:
        raise InvariantViolation("support lines touch the curve at the same point")
    gamma, gamma_o = arc_through(curve, pos["mm"], pos["mM"], pos["mmu"])
    Gamma, Gamma_o = arc_through(curve, pos["Mm"], pos["MM"], pos["Mmu"])
    return ArcSplit(gamma=gamma, gamma_o=gamma_o, Gamma=Gamma, Gamma_o=Gamma_o, frame=frame)


# --- the bounding rectangle --------------------------------------------------


@dataclass(frozen=True)
class RecRegion:
    """Rectangle cut out by the support lines of angles theta and theta + pi/2.

    Coordinates inside it are (offset across theta-lines, offset along them),
    i.e. (project(theta, p), tangential(theta, p)).
    """

    theta: float
    m: float
    M: float
    m_perp: float
    M_perp: float

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return self.m, self.M, self.m_perp, self.M_perp

    def coords(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        pts = np.asarray(pts, float)
        st, ct = math.sin(self.theta), math.cos(self.theta)
        return pts[..., 0] * st - pts[..., 1] * ct, pts[..., 0] * ct + pts[..., 1] * st

    def unit(self, pts: np.ndarray) -> np.ndarray:
        """Map points to [0, 1]^2 rectangle coordinates."""
        a, b = self.coords(pts)
        return np.stack(
            [(a - self.m) / (self.M - self.m), (b - self.m_perp) / (self.M_perp - self.m_perp)],
            axis=-1,
        )

    def contains(self, pts: np.ndarray, tol: float = 0.0) -> np.ndarray:
        a, b = self.coords(pts)
        return (
            (a >= self.m - tol) & (a <= self.M + tol) & (b >= self.m_perp - tol) & (b <= self.M_perp + tol)
        )

    def on_boundary(self, pts: np.ndarray, tol: float) -> np.ndarray:
        a, b = self.coords(pts)
        return (
            (np.abs(a - self.m) <= tol)
            | (np.abs(a - self.M) <= tol)
            | (np.abs(b - self.m_perp) <= tol)
            | (np.abs(b - self.M_perp) <= tol)
        )

    def corners(self) -> np.ndarray:
        st, ct = math.sin(self.theta), math.cos(self.theta)
        out = []
        for a, b in ((self.m, self.m_perp), (self.M, self.m_perp), (self.M, self.M_perp), (self.m, self.M_perp)):
            # invert (a, b) = (x st - y ct, x ct + y st)
            out.append((a * st + b * ct, -a * ct + b * st))
        return np.array(out)


def rec_region(curve: JordanCurve, theta: float) -> RecRegion:
    theta = reduce_angle(theta)
    v = curve.vertices
    st, ct = math.sin(theta), math.cos(theta)
    a = v[:, 0] * st - v[:, 1] * ct
    b = v[:, 0] * ct + v[:, 1] * st
    return RecRegion(theta, float(a.min()), float(a.max()), float(b.min()), float(b.max()))


# --- checks of the arc properties ----------------------------------------------


def support_contact_violations(arcs: ArcSplit, tol: float | None = None) -> list[str]:
    """Arcs must touch each support line only at their designated endpoint.

    Projection is affine on edges, so checking arc vertices is exhaustive.
    """
    fr = arcs.frame
    tol = fr.tol if tol is None else tol
    st, ct = math.sin(fr.theta), math.cos(fr.theta)
    out = []
    checks = (
        ("gamma", arcs.gamma, fr.m, 0),
        ("gamma", arcs.gamma, fr.M, -1),
        ("Gamma", arcs.Gamma, fr.m, 0),
        ("Gamma", arcs.Gamma, fr.M, -1),
    )
    for name, arc, level, keep in checks:
        P = arc.points[:, 0] * st - arc.points[:, 1] * ct
        touching = np.flatnonzero(np.abs(P - level) <= tol)
        allowed = len(P) - 1 if keep == -1 else 0
        extra = [int(i) for i in touching if i != allowed]
        if extra:
            out.append(f"{name} meets the support line {level:.17g} at arc vertices {extra}")
    return out


def arc_interior_violations(arcs: ArcSplit) -> list[tuple[int, int]]:
    """Pairs (gamma edge, Gamma edge) that meet anywhere but a shared arc endpoint."""
    g, G = arcs.gamma, arcs.Gamma
    a0, a1 = g.points[:-1], g.points[1:]
    b0, b1 = G.points[:-1], G.points[1:]
    hit = segments_touch(a0[:, None], a1[:, None], b0[None, :], b1[None, :])
    if np.array_equal(g.start, G.start) and hit[0, 0]:
        hit[0, 0] = _touch_only_at(a0[0], a1[0], b0[0], b1[0], g.start)
    if np.array_equal(g.end, G.end):
        hit[-1, -1] = hit[-1, -1] and _touch_only_at(a0[-1], a1[-1], b0[-1], b1[-1], g.end)
    return [(int(i), int(j)) for i, j in zip(*np.nonzero(hit))]


def _touch_only_at(a0, a1, b0, b1, p) -> bool:
    """True when segments a, b overlap beyond their shared endpoint ``p``."""
    da = a1 - a0 if np.array_equal(a0, p) else a0 - a1
    db = b1 - b0 if np.array_equal(b0, p) else b0 - b1
    cross = da[0] * db[1] - da[1] * db[0]
    return bool(cross == 0 and da @ db > 0)


def check_arcs(arcs: ArcSplit) -> None:
    """Raise :class:`InvariantViolation` if the arc properties fail numerically."""
    problems = support_contact_violations(arcs)
    bad = arc_interior_violations(arcs)
    if bad:
        problems.append(f"gamma and Gamma interiors meet at edge pairs {bad[:5]}")
    if problems:
        raise InvariantViolation(f"theta={arcs.frame.theta!r}: " + "; ".join(problems))


def perp(theta: float) -> float:
    return reduce_angle(theta + HALF_PI)
