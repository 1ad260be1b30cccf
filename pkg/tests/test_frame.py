import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CORPUS, SIXTEEN_ANGLES, corners_for, curve_for
from rhombi.frame import (
    arc_interior_violations,
    check_arcs,
    rec_region,
    split_arcs,
    support_contact_violations,
    support_frame,
)
from rhombi.geometry import HALF_PI, project, project_many, rotation, tangential


def test_circle_frame_at_zero(circle):
    f = support_frame(circle, 0.0)
    assert f.M == pytest.approx(1.0, abs=1e-4)
    assert f.m == pytest.approx(-1.0, abs=1e-4)
    assert np.allclose(f.A, [0, 1], atol=1e-4)
    assert np.allclose(f.B, [0, -1], atol=1e-4)
    assert np.allclose(f.mmu, [-1, 0], atol=1e-4)
    assert np.allclose(f.Mmu, [1, 0], atol=1e-4)


def test_square_frame_uses_flat_edge_endpoints(square):
    f = support_frame(square, 0.0)
    assert (f.M, f.m) == (0.0, -1.0)
    assert f.MM.tolist() == [1, 0]
    assert f.mM.tolist() == [0, 0]
    assert f.Mm.tolist() == [1, 1]
    assert f.mm.tolist() == [0, 1]
    assert f.A.tolist() == [0.5, 1.0]
    assert f.B.tolist() == [0.5, 0.0]


def test_circle_arcs_are_left_and_right_halves(circle):
    arcs = split_arcs(circle, support_frame(circle, 0.0))
    assert (arcs.gamma.points[:, 0] <= 1e-12).all()
    assert (arcs.Gamma.points[:, 0] >= -1e-12).all()
    assert np.allclose(arcs.gamma.start, [0, 1], atol=1e-12)
    assert np.allclose(arcs.gamma.end, [0, -1], atol=1e-12)


def test_square_arcs_are_vertical_edges(square):
    arcs = split_arcs(square, support_frame(square, 0.0))
    assert arcs.gamma.points.tolist() == [[0, 1], [0, 0]]
    assert arcs.Gamma.points.tolist() == [[1, 1], [1, 0]]


def test_lens_gamma_touches_min_line_only_at_mm(lens):
    th = math.pi / 4
    arcs = split_arcs(lens, support_frame(lens, th))
    vals = project_many(th, arcs.gamma.points)
    low = np.flatnonzero(vals <= vals.min() + 1e-9 * lens.diameter)
    assert low.tolist() == [0]


def test_angle_and_its_full_turn_give_the_same_frame(stars):
    for c in stars:
        a, b = support_frame(c, 0.4), support_frame(c, 0.4 + 2 * math.pi)
        for key, pos in a.positions.items():
            assert b.positions[key].edge == pos.edge
            assert b.positions[key].frac == pytest.approx(pos.frac, abs=1e-12)
        for name in ("MM", "mM", "Mm", "mm", "Mmu", "mmu", "A", "B"):
            assert np.allclose(getattr(a, name), getattr(b, name), rtol=0, atol=1e-12)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_frame_and_arc_invariants_over_corpus(name):
    c = curve_for(name)
    tol12 = 1e-12 * c.diameter
    for th in SIXTEEN_ANGLES + [a + HALF_PI for a in SIXTEEN_ANGLES]:
        f = support_frame(c, th)
        P = project_many(f.theta, c.vertices)
        assert P.min() == f.m and P.max() == f.M
        assert f.m <= f.mu <= f.M
        for pt, level in ((f.MM, f.M), (f.mM, f.M), (f.Mm, f.m), (f.mm, f.m)):
            assert abs(project(f.theta, pt) - level) <= tol12
        assert tangential(f.theta, f.mM) <= tangential(f.theta, f.MM)
        assert tangential(f.theta, f.mm) <= tangential(f.theta, f.Mm)
        assert tangential(f.theta, f.mmu) == pytest.approx(f.t_min, abs=tol12)
        assert tangential(f.theta, f.Mmu) == pytest.approx(f.t_max, abs=tol12)
        assert f.t_min <= f.t_max
        assert np.array_equal(f.A, 0.5 * (f.Mm + f.mm))
        assert np.array_equal(f.B, 0.5 * (f.MM + f.mM))

        arcs = split_arcs(c, f)
        assert np.array_equal(arcs.gamma.start, f.mm) and np.array_equal(arcs.gamma.end, f.mM)
        assert np.array_equal(arcs.Gamma.start, f.Mm) and np.array_equal(arcs.Gamma.end, f.MM)
        # support lines touched only at the designated endpoints, arc interiors disjoint
        assert support_contact_violations(arcs) == []
        assert arc_interior_violations(arcs) == []
        check_arcs(arcs)
        # the four arcs partition the curve
        total = _arc_length(arcs.gamma) + _arc_length(arcs.gamma_o)
        assert total == pytest.approx(c.length, rel=1e-12)


def _arc_length(arc) -> float:
    return float(np.linalg.norm(np.diff(arc.points, axis=0), axis=1).sum())


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_rec_contains_curve_and_matches_perpendicular(name):
    c = curve_for(name)
    for th in SIXTEEN_ANGLES:
        rec = rec_region(c, th)
        assert rec.contains(c.vertices, tol=1e-12 * c.diameter).all()
        other = rec_region(c, th + HALF_PI)
        assert np.allclose(
            sorted(map(tuple, rec.corners())), sorted(map(tuple, other.corners())), atol=1e-12 * c.diameter
        )


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.floats(0, 3.1, allow_nan=False), st.floats(0, 0.999, allow_nan=False))
def test_frame_rotation_equivariance(seed, theta, frac):
    # stay inside one half turn: past pi the line angle wraps and M, m swap roles
    phi = -theta + frac * math.pi
    c = curve_for(f"star{seed}")
    R = rotation(phi)
    f = support_frame(c, theta)
    g = support_frame(c.transformed(R), theta + phi)
    tol = 1e-9 * c.diameter
    for name in ("MM", "mM", "Mm", "mm", "A", "B"):
        assert np.linalg.norm(R @ getattr(f, name) - getattr(g, name)) <= tol
    assert g.M == pytest.approx(f.M, abs=tol) and g.m == pytest.approx(f.m, abs=tol)
