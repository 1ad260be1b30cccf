"""Polygonal Jordan curves: representation, I/O, fixtures and simplicity checks."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Union

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial.distance import pdist

from .errors import CurveParseError, CurveValidationError
from .geometry import orient, segments_touch

CURVE_FORMAT = "jordan-curve/1"

Edge = tuple[int, int]


class JordanCurve:
    """Closed simple polyline, parametrized proportionally to arc length on [0, 1).

    The vertex array is copied and frozen; instances are safe to share.
    """

    def __init__(self, vertices: Iterable, check_simple: bool = True):
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise CurveValidationError("vertices must be a list of (x, y) pairs")
        if not np.all(np.isfinite(v)):
            raise CurveValidationError("vertex coordinates must be finite")
        if len(v) > 1 and np.array_equal(v[0], v[-1]):
            v = v[:-1]
        if len(v) < 3:
            raise CurveValidationError(f"need at least 3 distinct vertices, got {len(v)}")
        seg = np.roll(v, -1, axis=0) - v
        lengths = np.hypot(seg[:, 0], seg[:, 1])
        if np.any(lengths == 0.0):
            i = int(np.flatnonzero(lengths == 0.0)[0])
            raise CurveValidationError(f"consecutive vertices {i} and {(i + 1) % len(v)} coincide")
        v.setflags(write=False)
        lengths.setflags(write=False)
        self._vertices = v
        self._edge_lengths = lengths
        cum = np.concatenate([[0.0], np.cumsum(lengths)])
        cum.setflags(write=False)
        self._cum = cum
        self._diameter: float | None = None
        if check_simple:
            report = validate_simple(self)
            if not report.ok:
                a, b = report.crossings[0]
                raise CurveValidationError(
                    f"curve is not simple: edges {a} and {b} intersect", report.crossings
                )

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def edge_lengths(self) -> np.ndarray:
        return self._edge_lengths

    @property
    def cumulative_length(self) -> np.ndarray:
        """Arc-length prefix sums, ``n + 1`` entries starting at 0."""
        return self._cum

    @property
    def length(self) -> float:
        return float(self._cum[-1])

    @property
    def diameter(self) -> float:
        if self._diameter is None:
            pts = self._vertices
            if len(pts) > 64:
                try:
                    pts = pts[ConvexHull(pts).vertices]
                except Exception:  # collinear input; fall back to all points
                    pass
            self._diameter = float(pdist(pts).max())
        return self._diameter

    def edge(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        return self._vertices[i % self.n], self._vertices[(i + 1) % self.n]

    def point_on_edge(self, i: int, frac: float) -> np.ndarray:
        a, b = self.edge(i)
        return (1.0 - frac) * a + frac * b

    def param(self, i: int, frac: float) -> float:
        """Global arc-length parameter of the point at ``frac`` along edge ``i``."""
        return float((self._cum[i] + frac * self._edge_lengths[i]) / self.length)

    def locate(self, t: float) -> tuple[int, float]:
        """Edge index and fraction of the curve parameter ``t`` (taken mod 1)."""
        t = t % 1.0
        s = t * self.length
        i = int(np.searchsorted(self._cum, s, side="right") - 1)
        i = min(max(i, 0), self.n - 1)
        frac = (s - self._cum[i]) / self._edge_lengths[i]
        return i, float(min(max(frac, 0.0), 1.0))

    def point(self, t: float) -> np.ndarray:
        i, frac = self.locate(t)
        if frac == 0.0:
            return self._vertices[i].copy()
        return self.point_on_edge(i, frac)

    def resample(self, m: int) -> np.ndarray:
        """``m`` points uniformly spaced in arc length, the first at ``vertices[0]``."""
        s = np.arange(m) * (self.length / m)
        i = np.clip(np.searchsorted(self._cum, s, side="right") - 1, 0, self.n - 1)
        frac = (s - self._cum[i]) / self._edge_lengths[i]
        a = self._vertices[i]
        b = self._vertices[(i + 1) % self.n]
        return (1.0 - frac)[:, None] * a + frac[:, None] * b

    def transformed(self, matrix=None, offset=(0.0, 0.0), scale: float = 1.0) -> "JordanCurve":
        """Image under x -> scale * (matrix @ x) + offset, without re-validation."""
        v = self._vertices
        if matrix is not None:
            v = v @ np.asarray(matrix, float).T
        v = scale * v + np.asarray(offset, float)
        return JordanCurve(v, check_simple=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, JordanCurve):
            return NotImplemented
        return np.array_equal(self._vertices, other._vertices)

    def __hash__(self) -> int:
        return hash(self._vertices.tobytes())

    def __repr__(self) -> str:
        return f"JordanCurve(n={self.n}, length={self.length:.6g})"


@dataclass
class ValidationReport:
    ok: bool
    crossings: list[tuple[Edge, Edge]] = field(default_factory=list)


def validate_simple(curve: JordanCurve) -> ValidationReport:
    """Brute-force O(E^2) check that the closed polyline does not self-intersect.

    Non-adjacent edges must be disjoint; adjacent edges may share only
    their common vertex (a fold-back along the same line counts as a crossing).
    """
    v = curve.vertices
    n = len(v)
    a = v
    b = np.roll(v, -1, axis=0)
    crossings: list[tuple[Edge, Edge]] = []

    def edge(i: int) -> Edge:
        return (i, (i + 1) % n)

    # adjacent edges i and i+1 overlap iff the turn at vertex i+1 is a full reversal
    d0 = b - a
    d1 = np.roll(d0, -1, axis=0)
    turn = orient(a, b, np.roll(b, -1, axis=0))
    back = (turn == 0) & (np.einsum("ij,ij->i", d0, d1) < 0)
    for i in np.flatnonzero(back):
        j = (i + 1) % n
        crossings.append(tuple(sorted((edge(int(i)), edge(int(j))))))

    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    chunk = max(1, 4_000_000 // max(n, 1))
    idx = np.arange(n)
    for start in range(0, n, chunk):
        rows = idx[start : start + chunk]
        near = (lo[rows, None, 0] <= hi[None, :, 0]) & (lo[None, :, 0] <= hi[rows, None, 0])
        near &= (lo[rows, None, 1] <= hi[None, :, 1]) & (lo[None, :, 1] <= hi[rows, None, 1])
        near &= idx[None, :] > rows[:, None]
        ri, cj = np.nonzero(near)
        ri = rows[ri]
        gap = (cj - ri) % n
        keep = (gap != 1) & (gap != n - 1)
        ri, cj = ri[keep], cj[keep]
        hit = segments_touch(a[ri], b[ri], a[cj], b[cj])
        for i, j in zip(ri[hit], cj[hit]):
            crossings.append((edge(int(i)), edge(int(j))))
    crossings = sorted(set(crossings))
    return ValidationReport(ok=not crossings, crossings=crossings)


# --- I/O -------------------------------------------------------------------

Source = Union[str, os.PathLike, bytes, IO]


def _read_text(source: Source) -> tuple[str, str | None]:
    if isinstance(source, (bytes, bytearray)):
        return bytes(source).decode("utf-8"), None
    if isinstance(source, (str, os.PathLike)):
        path = os.fspath(source)
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read(), os.path.splitext(path)[1].lower().lstrip(".")
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data, None


def load_curve(source: Source, format: str | None = None) -> JordanCurve:
    """Read a curve from a path, bytes, or an open stream.

    ``format`` is ``"json"`` or ``"csv"``; for paths it defaults to the extension.
    A repeated closing vertex is dropped.
    """
    text, ext = _read_text(source)
    fmt = (format or ext or "json").lower()
    if fmt == "json":
        vertices = _parse_json(text)
    elif fmt == "csv":
        vertices = _parse_csv(text)
    else:
        raise CurveParseError(f"unknown curve format {fmt!r}")
    return JordanCurve(vertices)


def _parse_json(text: str) -> list[list[float]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CurveParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != CURVE_FORMAT:
        raise CurveParseError(f'expected an object with "format": "{CURVE_FORMAT}"')
    verts = doc.get("vertices")
    if not isinstance(verts, list):
        raise CurveParseError('"vertices" must be a list')
    out = []
    for k, p in enumerate(verts):
        if (
            not isinstance(p, list)
            or len(p) != 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p)
        ):
            raise CurveParseError(f"vertex {k} is not an [x, y] pair of numbers")
        if not all(math.isfinite(c) for c in p):
            raise CurveParseError(f"vertex {k} is not finite")
        out.append([float(p[0]), float(p[1])])
    return out


def _parse_csv(text: str) -> list[list[float]]:
    out = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise CurveParseError(f"line {lineno}: expected 'x,y'")
        try:
            x, y = float(row[0]), float(row[1])
        except ValueError:
            if not out and lineno == 1:
                continue  # header
            raise CurveParseError(f"line {lineno}: not a number pair: {row!r}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise CurveParseError(f"line {lineno}: coordinates must be finite")
        out.append([x, y])
    return out


def curve_to_dict(curve: JordanCurve) -> dict:
    return {"format": CURVE_FORMAT, "vertices": curve.vertices.tolist()}


def dump_curve(curve: JordanCurve) -> str:
    """Curve JSON; floats use shortest round-trip repr so reloading is bit-exact."""
    return json.dumps(curve_to_dict(curve)) + "\n"


def save_curve(curve: JordanCurve, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_curve(curve))


# --- fixtures --------------------------------------------------------------

SHAPES = ("circle", "ellipse", "rounded_polygon", "random_star", "lens", "square")

_DEFAULTS = {
    "circle": {"radius": 1.0},
    "ellipse": {"a": 2.0, "b": 1.0},
    "rounded_polygon": {"sides": 5.0, "radius": 1.0, "rounding": 0.25},
    "random_star": {"seed": 0.0, "r_min": 0.5, "r_max": 1.0},
    "lens": {"a": 2.0},
    "square": {"side": 1.0},
}
_DIMENSIONAL = {"radius", "a", "b", "side", "r_min", "r_max", "rounding", "sides"}


@dataclass(frozen=True)
class CurveSpec:
    shape: str
    resolution: int
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}; choose from {', '.join(SHAPES)}")
        if int(self.resolution) != self.resolution or self.resolution < 3:
            raise ValueError("resolution must be an integer >= 3")
        if self.shape == "square" and self.resolution % 4:
            raise ValueError("square resolution must be a multiple of 4")
        if self.shape == "lens" and self.resolution < 4:
            raise ValueError("lens resolution must be at least 4")
        for key, value in self.parameters.items():
            if key in _DIMENSIONAL and not value > 0:
                raise ValueError(f"parameter {key} must be positive")

    def param(self, key: str) -> float:
        return float(self.parameters.get(key, _DEFAULTS[self.shape].get(key, 0.0)))


def generate(spec: CurveSpec) -> JordanCurve:
    n = int(spec.resolution)
    k = np.arange(n)
    if spec.shape == "circle":
        r = spec.param("radius")
        phi = 2.0 * np.pi * k / n
        pts = np.column_stack([r * np.cos(phi), r * np.sin(phi)])
    elif spec.shape == "ellipse":
        phi = 2.0 * np.pi * k / n
        pts = np.column_stack([spec.param("a") * np.cos(phi), spec.param("b") * np.sin(phi)])
    elif spec.shape == "square":
        pts = _square(n, spec.param("side"))
    elif spec.shape == "random_star":
        rng = np.random.default_rng(int(spec.param("seed")))
        lo, hi = spec.param("r_min"), spec.param("r_max")
        if lo > hi:
            raise ValueError("r_min must not exceed r_max")
        r = rng.uniform(lo, hi, size=n)
        phi = 2.0 * np.pi * k / n
        pts = np.column_stack([r * np.cos(phi), r * np.sin(phi)])
    elif spec.shape == "lens":
        a = spec.param("a")
        b = float(spec.parameters.get("b", 1.0 / a))
        pts = _lens(n, a, b)
    else:
        pts = _rounded_polygon(
            n, int(spec.param("sides")), spec.param("radius"), spec.param("rounding")
        )
    return JordanCurve(pts)


def _square(n: int, side: float) -> np.ndarray:
    m = n // 4
    s = np.arange(m) / m * side
    z = np.zeros(m)
    full = np.full(m, side)
    return np.concatenate(
        [
            np.column_stack([s, z]),
            np.column_stack([full, s]),
            np.column_stack([side - s, full]),
            np.column_stack([z, side - s]),
        ]
    )


def _lens(n: int, a: float, b: float) -> np.ndarray:
    """Region between y = x**a (lower) and y = x**b (upper) on [0, 1]."""
    if not (a > b > 0):
        raise ValueError("lens needs a > b > 0 so that y = x**b lies above y = x**a")
    m = n // 2
    x = np.arange(m + 1) / m
    lower = np.column_stack([x, x**a])
    j = np.arange(n - m - 1, 0, -1) / (n - m)
    if b < 1.0:
        # sample the upper branch by height so both tips are resolved alike
        upper = np.column_stack([j ** (1.0 / b), j])
    else:
        upper = np.column_stack([j, j**b])
    return np.concatenate([lower, upper])


def _rounded_polygon(n: int, sides: int, radius: float, rounding: float) -> np.ndarray:
    if sides < 3:
        raise ValueError("rounded_polygon needs at least 3 sides")
    if rounding >= radius * math.cos(math.pi / sides):
        raise ValueError("rounding must be smaller than the inradius")
    corner_r = radius - rounding / math.cos(math.pi / sides)
    dense = []
    for i in range(sides):
        c = 2 * math.pi * i / sides
        centre = np.array([corner_r * math.cos(c), corner_r * math.sin(c)])
        arc = np.linspace(c - math.pi / sides, c + math.pi / sides, 64)
        dense.append(centre + rounding * np.column_stack([np.cos(arc), np.sin(arc)]))
    dense = np.concatenate(dense)
    seg = np.diff(np.vstack([dense, dense[:1]]), axis=0)
    cum = np.concatenate([[0.0], np.cumsum(np.hypot(seg[:, 0], seg[:, 1]))])
    s = np.arange(n) * cum[-1] / n
    closed = np.vstack([dense, dense[:1]])
    return np.column_stack([np.interp(s, cum, closed[:, 0]), np.interp(s, cum, closed[:, 1])])
