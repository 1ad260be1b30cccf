"""Angle sweeps, canonical JSON reports and per-angle SVG pictures."""

from __future__ import annotations

import hashlib
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .corners import CornerRecord, PlanEntry, SweepPlan, TwoCornerCoverage, plan_sweep
from .curve import JordanCurve, dump_curve
from .search import RhombusCandidate, find_rhombi, validate_rhombus
from .two_corner import two_corner_search

REPORT_FORMAT = "rhombus-report/1"


@dataclass
class SweepEntry:
    theta: float
    mode: str
    candidates: list[RhombusCandidate]
    flags: list[str]
    witness: dict | None = None
    timing: float = 0.0
    median_segments: np.ndarray | None = None
    median_perp_segments: np.ndarray | None = None
    region: np.ndarray | None = None

    def to_dict(self) -> dict:
        out = {
            "theta": self.theta,
            "mode": self.mode,
            "candidates": [c.to_dict() for c in self.candidates],
            "flags": sorted(self.flags),
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class SweepReport:
    curve: JordanCurve
    curve_digest: str
    entries: list[SweepEntry]
    corners: list[CornerRecord]
    tool_version: str = __version__
    tol: float = 1e-9

    @property
    def summary(self) -> dict:
        return {
            "angles": len(self.entries),
            "with_candidates": sum(1 for e in self.entries if e.candidates),
            "candidates": sum(len(e.candidates) for e in self.entries),
            "findings": sum(1 for e in self.entries if "finding" in e.flags),
            "not_guaranteed": sum(1 for e in self.entries if "not_guaranteed" in e.flags),
            "thick_median": sum(1 for e in self.entries if "thick_median" in e.flags),
        }

    @property
    def findings(self) -> int:
        return self.summary["findings"]

    def to_dict(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "curve_digest": self.curve_digest,
            "tool_version": self.tool_version,
            "tol": self.tol,
            "entries": [e.to_dict() for e in self.entries],
            "corners": [c.to_dict() for c in self.corners],
            "summary": self.summary,
        }


def curve_digest(curve: JordanCurve) -> str:
    return hashlib.sha256(dump_curve(curve).encode("utf-8")).hexdigest()


# --- canonical JSON ------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    if x == 0.0:
        x = 0.0  # no negative zero
    return "%.17g" % x


def canonical_json(obj) -> str:
    """Sorted keys, %.17g floats, no whitespace, newline-terminated."""
    return _encode(obj) + "\n"


def _encode(obj) -> str:
    import json

    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(json.dumps(k, ensure_ascii=False) + ":" + _encode(v) for k, v in items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__} as JSON")


# --- sweeps --------------------------------------------------------------------------------


def _coverage_for(plan: SweepPlan, entry: PlanEntry) -> TwoCornerCoverage:
    w = entry.witness
    for cov in plan.coverages:
        if cov.p.vertex_index == w["p"] and cov.q.vertex_index == w["q"]:
            return cov
    raise KeyError("two-corner witness without coverage")


def run_entry(curve: JordanCurve, plan: SweepPlan, entry: PlanEntry, tol: float) -> SweepEntry:
    start = time.perf_counter()
    region = None
    witness = None
    if entry.mode == "two_corner":
        cov = _coverage_for(plan, entry)
        off = cov.offset(entry.theta)
        side = 1 if off >= 0 else -1
        frame = cov.frames.get(side) or next(iter(cov.frames.values()))
        posed = abs(off)
        res = two_corner_search(curve, frame, posed)
        cands, flags = res.candidates, set(res.flags)
        med = res.median.segments
        med_perp = res.median_perp.segments
        if res.region is not None:
            med = frame.to_original(med)
            med_perp = frame.to_original(med_perp)
            region = frame.to_original(res.region.polygon())
        witness = dict(entry.witness, posed_theta=posed, **frame.summary())
    else:
        res = find_rhombi(curve, entry.theta, corners=plan.corners)
        cands, flags = res.candidates, set(res.flags)
        med, med_perp = res.median.segments, res.median_perp.segments
    kept = []
    for c in cands:
        if validate_rhombus(c, curve, tol).passed:
            kept.append(c)
        else:
            flags.add("rejected_candidate")
    if not kept and entry.mode != "uncovered":
        flags.add("finding")
    return SweepEntry(
        theta=entry.theta,
        mode=entry.mode,
        candidates=kept,
        flags=sorted(flags),
        witness=witness,
        timing=time.perf_counter() - start,
        median_segments=med,
        median_perp_segments=med_perp,
        region=region,
    )


def _run_entry_args(args):
    return run_entry(*args)


def run_sweep(curve: JordanCurve, angles, tol: float = 1e-9, jobs: int = 1) -> SweepReport:
    """Plan, search and validate every requested angle; ordered as requested."""
    angles = list(angles)
    if not angles:
        raise ValueError("no angles requested")
    plan = plan_sweep(curve, angles)
    work = [(curve, plan, e, tol) for e in plan.entries]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            entries = list(ex.map(_run_entry_args, work))
    else:
        entries = [run_entry(*w) for w in work]
    return SweepReport(curve, curve_digest(curve), entries, plan.corners, tol=tol)


def sweep_angles(steps: int, lo: float = 0.0, hi: float = 0.5 * math.pi) -> list[float]:
    if steps < 1:
        raise ValueError("steps must be positive")
    return [lo + (hi - lo) * k / steps for k in range(steps)]


# --- output --------------------------------------------------------------------------------


def emit_report(report: SweepReport, json_path, svg_dir=None) -> list[Path]:
    """Write the JSON report and, with ``svg_dir``, one SVG per entry; returns SVG paths."""
    text = canonical_json(report.to_dict())
    try:
        Path(json_path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write report to {json_path}: {exc.strerror or exc}") from exc
    if svg_dir is None:
        return []
    out = []
    try:
        os.makedirs(svg_dir, exist_ok=True)
        for k, e in enumerate(report.entries):
            path = Path(svg_dir) / f"entry_{k:03d}.svg"
            path.write_text(render_svg(report.curve, e), encoding="utf-8")
            out.append(path)
    except OSError as exc:
        raise OSError(f"cannot write SVG into {svg_dir}: {exc.strerror or exc}") from exc
    return out


SVG_SIZE = 1000.0
SVG_MARGIN = 40.0


def render_svg(curve: JordanCurve, entry: SweepEntry) -> str:
    v = curve.vertices
    lo, hi = v.min(axis=0), v.max(axis=0)
    span = max(float((hi - lo).max()), 1e-300)
    scale = (SVG_SIZE - 2 * SVG_MARGIN) / span
    off = SVG_MARGIN + 0.5 * ((SVG_SIZE - 2 * SVG_MARGIN) - scale * (hi - lo))

    def tx(pts) -> np.ndarray:
        pts = np.asarray(pts, float)
        x = off[0] + scale * (pts[..., 0] - lo[0])
        y = SVG_SIZE - (off[1] + scale * (pts[..., 1] - lo[1]))
        return np.stack([x, y], axis=-1)

    def pts_attr(pts) -> str:
        return " ".join(f"{x:.3f},{y:.3f}" for x, y in tx(pts))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE:g}" height="{SVG_SIZE:g}" '
        f'viewBox="0 0 {SVG_SIZE:g} {SVG_SIZE:g}">',
        f"<title>theta={entry.theta:.17g} mode={entry.mode}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if entry.region is not None:
        parts.append(f'<polygon class="region" points="{pts_attr(entry.region)}" fill="#ffe9a8" stroke="none"/>')
    parts.append(f'<polygon class="curve" points="{pts_attr(v)}" fill="none" stroke="black" stroke-width="1.5"/>')
    for cls, segs, color in (
        ("median", entry.median_segments, "#1f77b4"),
        ("median-perp", entry.median_perp_segments, "#d62728"),
    ):
        if segs is None or not len(segs):
            continue
        d = " ".join(f"M{a[0]:.3f},{a[1]:.3f}L{b[0]:.3f},{b[1]:.3f}" for a, b in tx(segs))
        parts.append(f'<path class="{cls}" d="{d}" fill="none" stroke="{color}" stroke-width="1"/>')
    for c in entry.candidates:
        parts.append(
            f'<polygon class="rhombus" points="{pts_attr(c.vertices)}" fill="none" stroke="#2ca02c" stroke-width="2"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
