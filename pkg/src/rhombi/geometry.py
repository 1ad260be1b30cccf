"""Planar primitives: angle projections, orientation tests, segment intersection."""

from __future__ import annotations

import math

import numpy as np

HALF_PI = 0.5 * math.pi


def reduce_angle(theta: float) -> float:
    """Reduce a line angle to [0, pi); lines of angle theta and theta+pi coincide."""
    r = math.fmod(theta, math.pi)
    if r < 0.0:
        r += math.pi
    if r >= math.pi:
        r = 0.0
    return r


def canonical_angle(theta: float) -> float:
    """Reduce a rhombus angle class to [0, pi/2)."""
    r = math.fmod(theta, HALF_PI)
    if r < 0.0:
        r += HALF_PI
    if r >= HALF_PI:
        r = 0.0
    return r


def project(theta: float, p) -> float:
    """Signed offset of ``p`` across lines of angle ``theta``: x sin(theta) - y cos(theta)."""
    return p[0] * math.sin(theta) - p[1] * math.cos(theta)


def tangential(theta: float, p) -> float:
    """Coordinate of ``p`` along lines of angle ``theta``: x cos(theta) + y sin(theta)."""
    return p[0] * math.cos(theta) + p[1] * math.sin(theta)


def project_many(theta: float, pts: np.ndarray) -> np.ndarray:
    return pts[..., 0] * math.sin(theta) - pts[..., 1] * math.cos(theta)


def tangential_many(theta: float, pts: np.ndarray) -> np.ndarray:
    return pts[..., 0] * math.cos(theta) + pts[..., 1] * math.sin(theta)


def lerp(a, b, s):
    """Affine interpolation that returns ``a`` exactly at s=0 and ``b`` exactly at s=1."""
    return (1.0 - s) * a + s * b


def cross2(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def orient(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Twice the signed area of triangle abc (positive for counter-clockwise)."""
    return cross2(b - a, c - a)


def _on_box(a: np.ndarray, b: np.ndarray, p: np.ndarray) -> np.ndarray:
    return (
        (np.minimum(a[..., 0], b[..., 0]) <= p[..., 0])
        & (p[..., 0] <= np.maximum(a[..., 0], b[..., 0]))
        & (np.minimum(a[..., 1], b[..., 1]) <= p[..., 1])
        & (p[..., 1] <= np.maximum(a[..., 1], b[..., 1]))
    )


def segments_touch(a0, a1, b0, b1) -> np.ndarray:
    """Closed-segment intersection predicate, broadcast over leading axes."""
    o1 = orient(a0, a1, b0)
    o2 = orient(a0, a1, b1)
    o3 = orient(b0, b1, a0)
    o4 = orient(b0, b1, a1)
    hit = (o1 * o2 < 0) & (o3 * o4 < 0)
    hit |= (o1 == 0) & _on_box(a0, a1, b0)
    hit |= (o2 == 0) & _on_box(a0, a1, b1)
    hit |= (o3 == 0) & _on_box(b0, b1, a0)
    hit |= (o4 == 0) & _on_box(b0, b1, a1)
    return hit


def point_segment_distance(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from each point in ``pts`` (..., 2) to each segment ab; broadcasts."""
    d = b - a
    dd = np.einsum("...i,...i->...", d, d)
    w = pts - a
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(dd > 0, np.einsum("...i,...i->...", w, d) / np.where(dd > 0, dd, 1.0), 0.0)
    s = np.clip(s, 0.0, 1.0)
    foot = a + s[..., None] * d
    return np.linalg.norm(pts - foot, axis=-1)


def polyline_distance(pts: np.ndarray, vertices: np.ndarray, closed: bool = True) -> np.ndarray:
    """Distance from each point to a polyline given by ``vertices``."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    a = vertices
    b = np.roll(vertices, -1, axis=0) if closed else vertices[1:]
    if not closed:
        a = vertices[:-1]
    dist = point_segment_distance(pts[:, None, :], a[None, :, :], b[None, :, :])
    return dist.min(axis=1)


def segment_intersections(p0, p1, q0, q1, tol: float) -> list[tuple[float, float]]:
    """Intersection parameters (t, u) with p0 + t (p1 - p0) == q0 + u (q1 - q0).

    ``tol`` is an absolute distance. Transversal crossings give one pair;
    collinear overlaps give the two ends of the overlap and its midpoint;
    degenerate (point) segments are handled by point-to-segment distance.
    """
    p0 = np.asarray(p0, float)
    q0 = np.asarray(q0, float)
    r = np.asarray(p1, float) - p0
    s = np.asarray(q1, float) - q0
    rl = math.hypot(r[0], r[1])
    sl = math.hypot(s[0], s[1])
    qp = q0 - p0
    if rl <= tol and sl <= tol:
        return [(0.0, 0.0)] if math.hypot(qp[0], qp[1]) <= tol else []
    if rl <= tol:
        u = _foot(-qp, s, sl)
        foot = q0 + u * s
        return [(0.0, u)] if math.hypot(*(p0 - foot)) <= tol else []
    if sl <= tol:
        t = _foot(qp, r, rl)
        foot = p0 + t * r
        return [(t, 0.0)] if math.hypot(*(q0 - foot)) <= tol else []
    denom = r[0] * s[1] - r[1] * s[0]
    if abs(denom) > 1e-13 * rl * sl:
        t = (qp[0] * s[1] - qp[1] * s[0]) / denom
        u = (qp[0] * r[1] - qp[1] * r[0]) / denom
        et, eu = tol / rl, tol / sl
        if -et <= t <= 1.0 + et and -eu <= u <= 1.0 + eu:
            return [(min(max(t, 0.0), 1.0), min(max(u, 0.0), 1.0))]
        return []
    # parallel: overlap only if collinear
    if abs(qp[0] * r[1] - qp[1] * r[0]) / rl > tol:
        return []
    rr = rl * rl
    ta = (qp[0] * r[0] + qp[1] * r[1]) / rr
    tb = ta + (s[0] * r[0] + s[1] * r[1]) / rr
    lo, hi = max(0.0, min(ta, tb)), min(1.0, max(ta, tb))
    if hi < lo - tol / rl:
        return []
    hi = max(hi, lo)
    out = []
    for t in (lo, 0.5 * (lo + hi), hi):
        u = (t - ta) / (tb - ta)
        out.append((t, min(max(u, 0.0), 1.0)))
    return out


def _foot(w, d, dl):
    return min(max((w[0] * d[0] + w[1] * d[1]) / (dl * dl), 0.0), 1.0)


def rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])
