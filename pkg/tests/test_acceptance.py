"""End-to-end acceptance checks; each prints one PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from conftest import CORPUS, SIXTEEN_ANGLES, STAR_SEEDS, analytic_square, corners_for, curve_for, record_criterion, same_point_set
from rhombi.cli import main
from rhombi.corners import find_special_corners
from rhombi.curve import save_curve
from rhombi.frame import arc_interior_violations, rec_region, split_arcs, support_contact_violations, support_frame
from rhombi.geometry import HALF_PI, rotation
from rhombi.median import median_mask, median_set, plane_mask
from rhombi.oracle import OracleConfig, brute_force_rhombi, compare_with_oracle
from rhombi.report import run_sweep, sweep_angles
from rhombi.search import find_rhombi, validate_rhombus
from rhombi.separation import ANTI_DIAGONAL, masks_intersect, separates
from rhombi.two_corner import (
    above_line_violations,
    clip_curve,
    clipped_window_violations,
    compute_frame,
    path_order_holds,
    two_corner_search,
)


def test_criterion_1_circle_sweep(circle):
    start = time.perf_counter()
    rep = run_sweep(circle, sweep_angles(90))
    elapsed = time.perf_counter() - start
    problems = []
    for e in rep.entries:
        if e.mode != "corner_free" or not e.candidates:
            problems.append(f"theta={e.theta:.4f}: mode {e.mode}, {len(e.candidates)} candidates")
        for c in e.candidates:
            if c.metrics["side_dispersion"] > 1e-3:
                problems.append(f"theta={e.theta:.4f}: side dispersion {c.metrics['side_dispersion']:.2e}")
            if np.linalg.norm(c.center) > 1e-3:
                problems.append(f"theta={e.theta:.4f}: center {c.center}")
            if not same_point_set(c.vertices, analytic_square(e.theta), 2e-3):
                problems.append(f"theta={e.theta:.4f}: vertices off the analytic square")
    ok = not problems and len(rep.entries) == 90 and elapsed <= 60.0
    record_criterion(1, ok, f"90 angles, {rep.summary['candidates']} candidates, {elapsed:.1f}s; {problems[:3]}")
    assert ok


def test_criterion_2_ellipse(ellipse):
    worst = 0.0
    count = 0
    for th in sweep_angles(32):
        for c in find_rhombi(ellipse, th):
            count += 1
            worst = max(worst, float(np.linalg.norm(c.center)))
    zero = find_rhombi(ellipse, 0.0).candidates
    target = [[2, 0], [0, 1], [-2, 0], [0, -1]]
    at_zero = bool(zero) and all(same_point_set(c.vertices, target, 2e-3) for c in zero)
    sides = [np.linalg.norm(np.roll(c.vertices, -1, axis=0) - c.vertices, axis=1) for c in zero]
    sides_ok = all(np.abs(s - math.sqrt(5)).max() <= 2e-3 for s in sides)
    ok = count >= 32 and worst <= 1e-3 and at_zero and sides_ok
    record_criterion(2, ok, f"{count} candidates over 32 angles, max |center| {worst:.2e}, theta=0 axes rhombus {at_zero and sides_ok}")
    assert ok


def test_criterion_3_square(square):
    found = find_rhombi(square, 0.0).candidates
    target = np.array([[0, 0.5], [0.5, 0], [1, 0.5], [0.5, 1]])
    hit = [
        c
        for c in found
        if np.linalg.norm(c.center - [0.5, 0.5]) <= 1e-9 and same_point_set(c.vertices, target, 1e-9)
    ]
    corners = find_special_corners(square)
    ok = bool(hit) and corners == []
    record_criterion(3, ok, f"{len(found)} candidates, exact match {bool(hit)}, special corners {len(corners)}")
    assert ok


def test_criterion_4_lens_two_corner(lens):
    recs = find_special_corners(lens)
    points_ok = [r.point.tolist() for r in recs] == [[0.0, 0.0], [1.0, 1.0]] and all(r.contains(0.0) for r in recs)
    frame = compute_frame(lens, recs[0], recs[1])
    per_theta = []
    for frac in (0.0, 0.25, 0.5, 0.75, 0.9):
        res = two_corner_search(lens, frame, frac * frame.eps)
        valid = [c for c in res if validate_rhombus(c, lens, 1e-3).passed]
        per_theta.append(len(valid))
    ok = points_ok and frame.eps > 0 and all(n >= 1 for n in per_theta)
    record_criterion(4, ok, f"corners ok {points_ok}, {frame.case} eps={frame.eps:.4g}, validated per posed theta {per_theta}")
    assert ok


def test_criterion_5_arc_and_pose_properties(one_sided_lens, one_sided_frames):
    violations = []
    checked = 0
    for name in CORPUS:
        c = curve_for(name)
        for th in SIXTEEN_ANGLES:
            for angle in (th, th + HALF_PI):
                arcs = split_arcs(c, support_frame(c, angle))
                contact = support_contact_violations(arcs)
                overlap = arc_interior_violations(arcs)
                checked += 1
                if contact or overlap:
                    violations.append(f"{name} theta={angle:.4f}: {contact} {overlap[:3]}")
    # the one-sided pose properties need a curve lying on one side of pq
    posed_checked = 0
    for sigma, f in one_sided_frames.items():
        thetas = [(k + 0.5) / 16 * f.eps for k in range(16)]
        for th in thetas:
            posed_checked += 1
            bad = above_line_violations(f, th)
            if bad:
                violations.append(f"upper-side sigma={sigma} theta={th:.3e}: {len(bad)} points")
            clipped = clip_curve(one_sided_lens, f, th)
            med_bar = median_set(split_arcs(clipped.curve, support_frame(clipped.curve, th)))
            bad = clipped_window_violations(f, med_bar)
            if bad:
                violations.append(f"x-window sigma={sigma} theta={th:.3e}: {len(bad)} points")
        for t1, t2 in zip([0.0] + thetas[:-1], thetas):
            if not path_order_holds(f, t1, t2):
                violations.append(f"path order sigma={sigma} {t1:.3e} < {t2:.3e}")
    ok = not violations
    record_criterion(5, ok, f"{checked} arc splits, {posed_checked} one-sided poses, {len(violations)} violations {violations[:3]}")
    assert ok


def test_criterion_6_separation_suite():
    G = 128
    failures = []
    compared = 0
    for name in CORPUS:
        c = curve_for(name)
        corners = corners_for(name)
        for th in SIXTEEN_ANGLES:
            res = find_rhombi(c, th, corners=corners)
            for med in (res.median, res.median_perp):
                if not separates(median_mask(med.arcs, None, G, median=med), ANTI_DIAGONAL):
                    failures.append(f"{name} theta={med.theta:.4f}: no separation")
            if any(r.contains(th) for r in corners):
                continue
            rec = rec_region(c, th)
            meet = masks_intersect(plane_mask(res.median, rec, G), plane_mask(res.median_perp, rec, G))
            compared += 1
            if bool(meet) != bool(res.candidates):
                failures.append(f"{name} theta={th:.4f}: {len(meet)} shared cells vs {len(res.candidates)} rhombi")
    ok = not failures
    record_criterion(6, ok, f"{len(CORPUS) * 16 * 2} masks at G={G}, {compared} corner-free cross-checks; {failures[:3]}")
    assert ok


def test_criterion_7_oracle_equivalence(stars):
    M = 2000
    unmatched = []
    total = 0
    worst = 0.0
    for seed, c in zip(STAR_SEEDS, stars):
        radius = 2.0 * (2.0 * math.pi / M) * c.diameter
        for k in range(8):
            th = k * HALF_PI / 8
            found = find_rhombi(c, th).candidates
            oracle = brute_force_rhombi(c, th, OracleConfig.for_curve(c, M))
            rep = compare_with_oracle(found, oracle, radius)
            total += len(found)
            worst = max(worst, rep.max_distance)
            if rep.found_only:
                unmatched.append(f"seed {seed} theta={th:.4f}: {len(rep.found_only)} unmatched")
    ok = not unmatched and total > 0
    record_criterion(7, ok, f"{total} pipeline candidates on 40 curve-angle pairs, max center distance {worst:.2e}; {unmatched[:3]}")
    assert ok


def test_criterion_8_equivariance(ellipse, stars):
    phi, shift, s = 0.37, (3.0, -1.0), 2.5
    R = rotation(phi)
    rigid_bad, scale_bad = [], []
    for curve in [ellipse, *stars]:
        tol = 1e-9 * curve.diameter
        moved = curve.transformed(R, offset=shift)
        scaled = curve.transformed(scale=s)
        for th in (0.1, 0.5, 0.9, 1.3):
            orig = find_rhombi(curve, th).candidates
            expect = [c.transformed(R, offset=shift) for c in orig]
            got = find_rhombi(moved, th + phi).candidates
            if len(got) != len(expect) or not all(
                any(np.linalg.norm(e.center - g.center) <= tol and same_point_set(e.vertices, g.vertices, tol) for g in got)
                for e in expect
            ):
                rigid_bad.append(f"theta={th}: {len(expect)} vs {len(got)}")
            big = find_rhombi(scaled, th).candidates
            if len(big) != len(orig):
                scale_bad.append(f"theta={th}: count {len(orig)} vs {len(big)}")
                continue
            for a, b in zip(orig, big):
                rel = max(
                    np.abs(s * a.vertices - b.vertices).max(), np.abs(s * a.center - b.center).max()
                ) / (s * curve.diameter)
                if rel > 1e-12:
                    scale_bad.append(f"theta={th}: relative error {rel:.1e}")
    ok = not rigid_bad and not scale_bad
    record_criterion(8, ok, f"rotation+translation mismatches {rigid_bad[:3]}, scale mismatches {scale_bad[:3]}")
    assert ok


@pytest.mark.parametrize("name", ["lens"])
def test_criterion_9_determinism(tmp_path, name):
    path = tmp_path / "curve.json"
    save_curve(curve_for(name), path)
    outputs = []
    for k in range(2):
        out = tmp_path / f"run{k}.json"
        code = main(["sweep", "--curve", str(path), "--steps", "16", "--out", str(out)])
        outputs.append((code, out.read_bytes()))
    ok = outputs[0][0] == outputs[1][0] == 0 and outputs[0][1] == outputs[1][1]
    record_criterion(9, ok, f"two sweeps of the {name} curve, {len(outputs[0][1])} bytes, identical {outputs[0][1] == outputs[1][1]}")
    assert ok
