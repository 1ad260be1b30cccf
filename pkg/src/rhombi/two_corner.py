"""Rhombi near the angle of the line through two special corners.

The curve is posed with one corner p at the origin and the other corner q
at (w, 0), reflected if needed so that A_0 lies strictly above the x-axis.
Posed angles theta in [0, eps) are then guaranteed to carry an inscribed
rhombus.  Case 1 (part of the curve below the axis) reduces to the plain
median search.  In Case 2 (curve on or above the axis) the theta-median is
taken on a clipped curve and intersected with the perpendicular median
inside a region R that keeps both away from p and q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corners import CornerRecord, direction_range
from .curve import JordanCurve
from .errors import InvariantViolation, TwoCornerError
from .frame import Arc, SUPPORT_TOL, split_arcs, support_frame
from .geometry import HALF_PI, canonical_angle, reduce_angle, rotation, segment_intersections
from .median import MedianSet, median_set
from .search import RhombusCandidate, finalize, find_rhombi, median_crossings

SAFETY = 0.99
_TWO_PI = 2.0 * math.pi


@dataclass
class TwoCornerFrame:
    """Posed data for the ordered corner pair (p, q)."""

    p: CornerRecord
    q: CornerRecord
    origin: np.ndarray
    alpha: float
    reflect: bool
    posed: JordanCurve
    w: float
    h: float
    A0: np.ndarray
    B0: np.ndarray
    theta_p: float
    theta_q: float
    eps_A: float
    eps_B: float
    case: str
    eps: float
    eps_l: float = math.nan
    eps_r: float = math.nan
    eps_y: float = math.nan
    Gamma: Arc | None = None
    r_Mm_epsA: float = math.nan
    r_mm0: float = math.nan

    @property
    def sigma(self) -> int:
        """+1 if posed angles increase with original angles, -1 if reflected."""
        return -1 if self.reflect else 1

    @property
    def theta0(self) -> float:
        return canonical_angle(self.alpha)

    def original_angle(self, theta: float) -> float:
        return reduce_angle(self.alpha + self.sigma * theta)

    def _linear(self) -> np.ndarray:
        f = np.diag([1.0, -1.0]) if self.reflect else np.eye(2)
        return rotation(self.alpha) @ f

    def to_original(self, pts) -> np.ndarray:
        return np.asarray(pts, float) @ self._linear().T + self.origin

    def to_posed(self, pts) -> np.ndarray:
        return (np.asarray(pts, float) - self.origin) @ self._linear()

    def summary(self) -> dict:
        out = {
            "p": self.p.vertex_index,
            "q": self.q.vertex_index,
            "reflect": self.reflect,
            "case": self.case,
            "w": self.w,
            "h": self.h,
            "theta_p": self.theta_p,
            "theta_q": self.theta_q,
            "eps_A": self.eps_A,
            "eps_B": self.eps_B,
            "eps": self.eps,
        }
        if self.case == "case2":
            out.update(eps_l=self.eps_l, eps_r=self.eps_r, eps_y=self.eps_y)
        return out


def pose_curve(curve: JordanCurve, p: int, q: int, reflect: bool) -> tuple[JordanCurve, float, float]:
    """Curve moved so vertex p is the origin and vertex q is (w, 0); returns (posed, alpha, w)."""
    v = curve.vertices
    d = v[q] - v[p]
    alpha = math.atan2(d[1], d[0])
    w = math.hypot(d[0], d[1])
    posed = (v - v[p]) @ rotation(-alpha).T
    if reflect:
        posed[:, 1] = -posed[:, 1]
    posed[p] = (0.0, 0.0)
    posed[q] = (w, 0.0)
    return JordanCurve(posed, check_simple=False), alpha, w


def _shifted_range(curve: JordanCurve, i: int, j: int, target: float) -> tuple[float, float]:
    """Direction range from vertex i, unwrapped so the direction to vertex j equals ``target``."""
    _, _, phi = direction_range(curve, i)
    k = (j - i - 1) % curve.n
    phi = phi - _TWO_PI * round((phi[k] - target) / _TWO_PI)
    return float(phi.min()), float(phi.max())


def _min_y_in_window(points: np.ndarray, x_lo: float, x_hi: float) -> float:
    """Smallest y on the polyline restricted to x_lo <= x <= x_hi."""
    best = math.inf
    for a, b in zip(points[:-1], points[1:]):
        lo, hi = min(a[0], b[0]), max(a[0], b[0])
        if hi < x_lo or lo > x_hi:
            continue
        if b[0] == a[0]:
            best = min(best, a[1], b[1])
            continue
        for x in (max(lo, x_lo), min(hi, x_hi)):
            s = (x - a[0]) / (b[0] - a[0])
            best = min(best, (1.0 - s) * a[1] + s * b[1])
    return best


def compute_frame(curve: JordanCurve, p: CornerRecord, q: CornerRecord, reflect: bool | None = None) -> TwoCornerFrame:
    """Pose the pair and compute every quantity the guarantee interval depends on.

    With ``reflect=None`` the reflection is chosen so that A_0 lies strictly
    above the x-axis; an explicit value is honoured or rejected.
    """
    if p.vertex_index == q.vertex_index:
        raise TwoCornerError("corners must be distinct")
    if reflect is None:
        for option in (False, True):
            try:
                return compute_frame(curve, p, q, option)
            except TwoCornerError:
                continue
        raise TwoCornerError("no reflection puts A_0 strictly above the line pq")

    ip, iq = p.vertex_index, q.vertex_index
    posed, alpha, w = pose_curve(curve, ip, iq, reflect)
    tol = SUPPORT_TOL * posed.diameter
    fr0 = support_frame(posed, 0.0)
    A0, B0 = fr0.A, fr0.B
    if not A0[1] > tol:
        raise TwoCornerError("A_0 is not strictly above the line pq in this pose")
    h = float(A0[1])
    eps_A = math.atan2(A0[1], A0[0])
    eps_B = 0.0 if abs(B0[1]) <= tol else math.atan2(-B0[1], w - B0[0])

    lo_p, _ = _shifted_range(posed, ip, iq, 0.0)
    lo_q, _ = _shifted_range(posed, iq, ip, math.pi)
    theta_p = min(lo_p + HALF_PI, HALF_PI)
    theta_q = min(lo_q - HALF_PI, HALF_PI)
    if not (theta_p > 0 and theta_q > 0):
        raise TwoCornerError("corner angles of p and q leave no room in this pose")

    common = dict(
        p=p, q=q, origin=curve.vertices[ip].copy(), alpha=alpha, reflect=reflect, posed=posed,
        w=w, h=h, A0=A0, B0=B0, theta_p=theta_p, theta_q=theta_q, eps_A=eps_A, eps_B=eps_B,
    )
    if eps_B > 0.0:
        eps = min(eps_A, eps_B)
        if not eps > 0.0:
            raise InvariantViolation("two-corner guarantee radius is not positive")
        return TwoCornerFrame(case="case1", eps=eps, **common)

    arcs = split_arcs(posed, support_frame(posed, HALF_PI))
    Gamma = arcs.Gamma
    if np.abs(Gamma.start).max() > tol or np.abs(Gamma.end - (w, 0.0)).max() > tol:
        raise InvariantViolation("upper arc at angle pi/2 does not run from p to q")
    r0 = Gamma.param_of(posed, support_frame(posed, eps_A).positions["Mm"])
    r1 = Gamma.param_of(posed, fr0.positions["mm"])
    if r0 is None or r1 is None:
        raise InvariantViolation("top support points are not on the upper arc")
    k0 = Gamma.locate(r0)[0]
    k1 = Gamma.locate(r1)[0]
    xs_l = np.concatenate([[Gamma.point(r0)[0]], Gamma.points[k0 + 1 :, 0]])
    xs_r = np.concatenate([Gamma.points[: k1 + 1, 0], [Gamma.point(r1)[0]]])
    eps_l = float(xs_l.min())
    eps_r = float((w - xs_r).min())
    eps_y = float(_min_y_in_window(Gamma.points, eps_l / 8.0, w - eps_r / 8.0))
    if not (eps_l > 0 and eps_r > 0 and eps_y > 0):
        raise InvariantViolation(f"degenerate two-corner margins: eps_l={eps_l}, eps_r={eps_r}, eps_y={eps_y}")
    bound = min(eps_l / (8.0 * h), eps_r / (8.0 * h), eps_y / (2.0 * w))
    eps = SAFETY * min(math.atan(bound), eps_A, theta_p, theta_q)
    return TwoCornerFrame(
        case="case2", eps=eps, eps_l=eps_l, eps_r=eps_r, eps_y=eps_y, Gamma=Gamma,
        r_Mm_epsA=r0, r_mm0=r1, **common,
    )


def frames_for_pair(curve: JordanCurve, p: CornerRecord, q: CornerRecord) -> dict[int, TwoCornerFrame]:
    """Best valid frame for each side (+1 above, -1 below theta0) over both orders and reflections."""
    best: dict[int, TwoCornerFrame] = {}
    for a, b in ((p, q), (q, p)):
        for reflect in (False, True):
            try:
                fr = compute_frame(curve, a, b, reflect)
            except (TwoCornerError, InvariantViolation):
                continue
            if fr.sigma not in best or fr.eps > best[fr.sigma].eps:
                best[fr.sigma] = fr
    return best


# --- Case 2 machinery ---------------------------------------------------------------


@dataclass(frozen=True)
class RegionR:
    """Parallelogram between y = x tan(theta) and the top support line, clipped to an x-window."""

    theta: float
    x_lo: float
    x_hi: float
    m: float
    Z_S: np.ndarray | None = None
    Z_N: np.ndarray | None = None

    def _top_y(self, x: float) -> float:
        return (x * math.sin(self.theta) - self.m) / math.cos(self.theta)

    @property
    def Z_SW(self) -> np.ndarray:
        return np.array([self.x_lo, self.x_lo * math.tan(self.theta)])

    @property
    def Z_SE(self) -> np.ndarray:
        return np.array([self.x_hi, self.x_hi * math.tan(self.theta)])

    @property
    def Z_W(self) -> np.ndarray:
        return np.array([self.Z_SW, (self.x_lo, self._top_y(self.x_lo))])

    @property
    def Z_E(self) -> np.ndarray:
        return np.array([self.Z_SE, (self.x_hi, self._top_y(self.x_hi))])

    def polygon(self) -> np.ndarray:
        return np.array([self.Z_SW, self.Z_SE, self.Z_E[1], self.Z_W[1]])

    def contains(self, pts, margin: float = 0.0) -> np.ndarray:
        """Membership, shrunk by ``margin`` on every side when positive (strict interior)."""
        pts = np.atleast_2d(np.asarray(pts, float))
        proj = pts[:, 0] * math.sin(self.theta) - pts[:, 1] * math.cos(self.theta)
        return (
            (pts[:, 0] >= self.x_lo + margin)
            & (pts[:, 0] <= self.x_hi - margin)
            & (proj >= self.m + margin)
            & (proj <= -margin)
        )


def region_r(frame: TwoCornerFrame, theta: float) -> RegionR:
    m = support_frame(frame.posed, theta).m
    return RegionR(theta, frame.eps_l / 4.0, frame.w - frame.eps_r / 4.0, m)


@dataclass
class ClippedCurve:
    """The clipped curve: the upper arc between t_l and t_r, closed by a segment of L."""

    curve: JordanCurve
    t_l: float
    t_r: float
    theta: float


def _line_hits(Gamma: Arc, a: np.ndarray, b: np.ndarray, tol: float) -> list[tuple[float, int, float]]:
    out = []
    for k in range(Gamma.n_edges):
        for s, _ in segment_intersections(Gamma.points[k], Gamma.points[k + 1], a, b, tol):
            out.append((Gamma.arc_param(k, s), k, s))
    return out


def _require_case2(frame: TwoCornerFrame, theta: float) -> None:
    if frame.case != "case2":
        raise TwoCornerError("clipping is only defined when the curve lies on one side of pq")
    if not 0.0 < theta < frame.eps:
        raise TwoCornerError(f"posed angle {theta!r} outside (0, {frame.eps!r})")


def clip_curve(curve: JordanCurve, frame: TwoCornerFrame, theta: float) -> ClippedCurve:
    """Clip the posed upper arc to the part strictly above L and close it along L.

    Checks that the frame points mm_theta and Mm_theta fall strictly inside
    the clipped parameter range, as the construction requires.
    """
    _require_case2(frame, theta)
    G = frame.Gamma
    tol = 1e-12 * frame.posed.diameter
    tan = math.tan(theta)
    xl, xr = frame.eps_l / 8.0, frame.w - frame.eps_r / 8.0
    hits_l = _line_hits(G, np.array([0.0, 0.0]), np.array([xl, xl * tan]), tol)
    if not hits_l:
        raise InvariantViolation("upper arc misses the left part of L")
    t_l, k_l, s_l = max(hits_l)
    hits_r = [h for h in _line_hits(G, np.array([xr, xr * tan]), np.array([frame.w, frame.w * tan]), tol) if h[0] >= t_l]
    if not hits_r:
        raise InvariantViolation("upper arc misses the right part of L")
    t_r, k_r, s_r = min(hits_r)

    pts = [G.edge_point(k_l, s_l)]
    pts.extend(G.points[k_l + 1 : k_r + 1])
    pts.append(G.edge_point(k_r, s_r))
    clean = [pts[0]]
    for pt in pts[1:]:
        if not np.array_equal(pt, clean[-1]):
            clean.append(pt)
    if len(clean) >= 2 and np.array_equal(clean[0], clean[-1]):
        clean.pop()
    bar = JordanCurve(np.array(clean), check_simple=False)

    fr = support_frame(frame.posed, theta)
    r_mm = G.param_of(frame.posed, fr.positions["mm"])
    r_Mm = G.param_of(frame.posed, fr.positions["Mm"])
    if r_mm is None or r_Mm is None or not (t_l < r_mm <= r_Mm < t_r):
        raise InvariantViolation(
            f"clip order violated at theta={theta!r}: t_l={t_l}, mm={r_mm}, Mm={r_Mm}, t_r={t_r}"
        )
    return ClippedCurve(bar, t_l, t_r, theta)


def _clip_to_window(seg: np.ndarray, x_lo: float, x_hi: float) -> np.ndarray | None:
    a, b = seg
    lo, hi = min(a[0], b[0]), max(a[0], b[0])
    if hi < x_lo or lo > x_hi:
        return None
    if a[0] == b[0]:
        return seg
    s0 = (max(lo, x_lo) - a[0]) / (b[0] - a[0])
    s1 = (min(hi, x_hi) - a[0]) / (b[0] - a[0])
    return np.array([(1 - s0) * a + s0 * b, (1 - s1) * a + s1 * b])


def above_line_violations(frame: TwoCornerFrame, theta: float, med_perp: MedianSet | None = None) -> list[np.ndarray]:
    """Points of the perpendicular median within R's x-window that are not strictly above L.

    The height above L is affine along each segment, so the clipped
    endpoints and midpoints of the segments decide it.
    """
    if med_perp is None:
        med_perp = median_set(split_arcs(frame.posed, support_frame(frame.posed, theta + HALF_PI)))
    x_lo, x_hi = frame.eps_l / 4.0, frame.w - frame.eps_r / 4.0
    tan = math.tan(theta)
    bad = []
    for seg in med_perp.segments:
        c = _clip_to_window(seg, x_lo, x_hi)
        if c is None:
            continue
        for pt in (c[0], c[1], 0.5 * (c[0] + c[1])):
            if not pt[1] > pt[0] * tan:
                bad.append(pt)
    return bad


def clipped_window_violations(frame: TwoCornerFrame, med_bar: MedianSet) -> list[np.ndarray]:
    """Points of the clipped-curve median whose x is not strictly inside R's x-window."""
    x_lo, x_hi = frame.eps_l / 4.0, frame.w - frame.eps_r / 4.0
    pts = med_bar.endpoints()
    return [pt for pt in pts if not (x_lo < pt[0] < x_hi)]


def path_order_holds(frame: TwoCornerFrame, theta1: float, theta2: float) -> bool:
    """mm and Mm at the larger angle precede mm and Mm at the smaller one along the upper arc."""
    if frame.Gamma is None:
        raise TwoCornerError("path order is stated on the upper arc of a one-sided pose")
    if not 0.0 <= theta1 < theta2 < HALF_PI:
        raise ValueError("need 0 <= theta1 < theta2 < pi/2")
    G, posed = frame.Gamma, frame.posed
    f1, f2 = support_frame(posed, theta1), support_frame(posed, theta2)
    r = [
        G.param_of(posed, f2.positions["mm"]),
        G.param_of(posed, f2.positions["Mm"]),
        G.param_of(posed, f1.positions["mm"]),
        G.param_of(posed, f1.positions["Mm"]),
    ]
    if any(x is None for x in r):
        return False
    return r[0] <= r[1] <= r[2] <= r[3]


# --- search -----------------------------------------------------------------------------


def curve_param_of_point(curve: JordanCurve, pt: np.ndarray) -> float:
    """Curve parameter of the closest point on the curve to ``pt``."""
    v = curve.vertices
    b = np.roll(v, -1, axis=0)
    d = b - v
    s = np.clip(np.einsum("ij,ij->i", pt - v, d) / np.einsum("ij,ij->i", d, d), 0.0, 1.0)
    dist = np.linalg.norm(v + s[:, None] * d - pt, axis=1)
    k = int(np.argmin(dist))
    return curve.param(k, float(s[k]))


@dataclass
class TwoCornerResult:
    theta: float
    posed_theta: float
    frame: TwoCornerFrame
    candidates: list[RhombusCandidate]
    flags: frozenset = field(default_factory=frozenset)
    region: RegionR | None = None
    clipped: ClippedCurve | None = None
    median: MedianSet | None = None
    median_perp: MedianSet | None = None

    def __len__(self) -> int:
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)

    def __getitem__(self, i):
        return self.candidates[i]


def two_corner_search(curve: JordanCurve, frame: TwoCornerFrame, theta: float) -> TwoCornerResult:
    """Inscribed rhombi at posed angle ``theta`` with |theta| < eps, in original coordinates.

    Negative angles are served by the frame of the same pair that covers the
    other side of theta0 (the other order or reflection of the pair).
    """
    if theta < 0.0:
        other = frames_for_pair(curve, frame.p, frame.q).get(-frame.sigma)
        if other is None or -theta >= other.eps:
            raise TwoCornerError(f"posed angle {theta!r} is outside every guarantee interval of this pair")
        return two_corner_search(curve, other, -theta)
    if theta >= frame.eps:
        raise TwoCornerError(f"posed angle {theta!r} is not below eps={frame.eps!r}")

    orig = canonical_angle(frame.original_angle(theta))
    if frame.case == "case1" or theta == 0.0:
        res = find_rhombi(curve, orig)
        return TwoCornerResult(orig, theta, frame, res.candidates, res.flags, median=res.median, median_perp=res.median_perp)

    posed = frame.posed
    clipped = clip_curve(curve, frame, theta)
    med_bar = median_set(split_arcs(clipped.curve, support_frame(clipped.curve, theta)))
    med_perp = median_set(split_arcs(posed, support_frame(posed, theta + HALF_PI)))
    region = region_r(frame, theta)
    region = RegionR(region.theta, region.x_lo, region.x_hi, region.m, Z_S=med_bar.B, Z_N=med_bar.A)
    tol = 1e-11 * posed.diameter

    cands = []
    for k, t, l, u in median_crossings(med_bar, med_perp, tol):
        z = med_bar.point(k, t)
        if not region.contains(z, margin=tol)[0]:
            continue
        p1, p2 = med_bar.chord(k, t)
        q1, q2 = med_perp.chord(l, u)
        verts = frame.to_original(np.array([p1, q1, p2, q2]))
        center = frame.to_original(0.5 * (z + med_perp.point(l, u)))
        pre = tuple(curve_param_of_point(curve, v) for v in verts)
        cands.append(RhombusCandidate(theta=orig, center=center, vertices=verts, preimages=pre))
    cands = finalize(cands, curve)
    flags = set(med_bar.flags | med_perp.flags)
    if not cands:
        flags.add("finding")
    return TwoCornerResult(
        orig, theta, frame, cands, frozenset(flags), region=region, clipped=clipped,
        median=med_bar, median_perp=med_perp,
    )
