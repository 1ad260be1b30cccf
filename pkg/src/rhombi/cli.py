"""Command line interface: gen, corners, find, sweep, verify.

Exit codes: 0 ran, 1 input error, 2 internal invariant violated,
3 a FINDING was reported and ``--strict`` was given.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .corners import find_special_corners
from .curve import CurveSpec, generate, load_curve, save_curve
from .errors import CurveParseError, CurveValidationError, InvariantViolation, TwoCornerError
from .geometry import canonical_angle
from .oracle import OracleConfig, brute_force_rhombi, compare_with_oracle
from .report import canonical_json, curve_digest, emit_report, run_sweep, sweep_angles
from .search import find_rhombi

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT, EXIT_FINDING = 0, 1, 2, 3


def _param(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"parameter {key!r} needs a number, got {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rhombi", description="Find inscribed rhombi in polygonal Jordan curves.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a fixture curve")
    g.add_argument("--shape", required=True)
    g.add_argument("--n", type=int, required=True, help="vertex count")
    g.add_argument("--param", type=_param, action="append", default=[], metavar="KEY=VALUE")
    g.add_argument("--out", required=True)

    c = sub.add_parser("corners", help="list special corners")
    c.add_argument("--curve", required=True)
    c.add_argument("--json", dest="json_out")

    f = sub.add_parser("find", help="rhombi at one angle")
    f.add_argument("--curve", required=True)
    f.add_argument("--angle", type=float, required=True, help="radians")
    f.add_argument("--tol", type=float, default=1e-9)
    f.add_argument("--perturb", type=float, default=None, help="retry once at angle+PERTURB if nothing is found")
    f.add_argument("--out", required=True)
    f.add_argument("--svg")
    f.add_argument("--strict", action="store_true")

    s = sub.add_parser("sweep", help="rhombi over a range of angles")
    s.add_argument("--curve", required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--range", nargs=2, type=float, default=(0.0, 0.5 * math.pi), metavar=("A", "B"))
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", required=True)
    s.add_argument("--svg")
    s.add_argument("--strict", action="store_true")

    v = sub.add_parser("verify", help="compare the median search against brute force")
    v.add_argument("--curve", required=True)
    v.add_argument("--angle", type=float, required=True)
    v.add_argument("--samples", type=int, default=2000)
    v.add_argument("--radius", type=float, default=None, help="match radius (default 2*(2*pi/M)*diameter)")
    v.add_argument("--out", required=True)
    return ap


def _cmd_gen(a) -> int:
    spec = CurveSpec(a.shape, a.n, dict(a.param))
    save_curve(generate(spec), a.out)
    print(f"wrote {a.out}")
    return EXIT_OK


def _cmd_corners(a) -> int:
    curve = load_curve(a.curve)
    recs = find_special_corners(curve)
    for r in recs:
        ivs = ", ".join(f"({iv.lo:.6g}, {iv.hi:.6g})" for iv in r.intervals)
        print(f"vertex {r.vertex_index} at ({r.point[0]:.6g}, {r.point[1]:.6g}): {ivs}")
    if not recs:
        print("no special corners")
    if a.json_out:
        doc = {"curve_digest": curve_digest(curve), "corners": [r.to_dict() for r in recs]}
        Path(a.json_out).write_text(canonical_json(doc), encoding="utf-8")
    return EXIT_OK


def _finish(report, a) -> int:
    emit_report(report, a.out, a.svg)
    for e in report.entries:
        print(f"theta={e.theta:.6f} mode={e.mode} candidates={len(e.candidates)} flags={','.join(e.flags) or '-'} ({e.timing:.3f}s)", file=sys.stderr)
    summ = report.summary
    print(f"{summ['angles']} angles, {summ['candidates']} candidates, {summ['findings']} findings -> {a.out}")
    if a.strict and report.findings:
        return EXIT_FINDING
    return EXIT_OK


def _cmd_find(a) -> int:
    curve = load_curve(a.curve)
    report = run_sweep(curve, [a.angle], tol=a.tol)
    entry = report.entries[0]
    if a.perturb is not None and not entry.candidates:
        retry = run_sweep(curve, [a.angle + a.perturb], tol=a.tol).entries[0]
        retry.flags = sorted(set(retry.flags) | {"perturbed"})
        retry.witness = dict(retry.witness or {}, requested_theta=canonical_angle(a.angle))
        report.entries[0] = retry
    return _finish(report, a)


def _cmd_sweep(a) -> int:
    curve = load_curve(a.curve)
    report = run_sweep(curve, sweep_angles(a.steps, *a.range), tol=a.tol, jobs=a.jobs)
    return _finish(report, a)


def _cmd_verify(a) -> int:
    curve = load_curve(a.curve)
    th = canonical_angle(a.angle)
    found = find_rhombi(curve, th).candidates
    oracle = brute_force_rhombi(curve, th, OracleConfig.for_curve(curve, a.samples))
    radius = a.radius if a.radius is not None else 2.0 * (2.0 * math.pi / a.samples) * curve.diameter
    rep = compare_with_oracle(found, oracle, radius)
    doc = {
        "curve_digest": curve_digest(curve),
        "theta": th,
        "samples": a.samples,
        "radius": radius,
        "median_candidates": [c.to_dict() for c in found],
        "oracle_count": len(oracle),
        "match": rep.to_dict(),
    }
    Path(a.out).write_text(canonical_json(doc), encoding="utf-8")
    print(f"{len(rep.matched)}/{len(found)} median candidates matched among {len(oracle)} oracle candidates")
    return EXIT_OK


COMMANDS = {"gen": _cmd_gen, "corners": _cmd_corners, "find": _cmd_find, "sweep": _cmd_sweep, "verify": _cmd_verify}


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        return COMMANDS[a.command](a)
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (CurveParseError, CurveValidationError, TwoCornerError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
