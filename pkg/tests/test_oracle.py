import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import analytic_square, same_point_set
from rhombi.curve import CurveSpec, generate
from rhombi.geometry import HALF_PI
from rhombi.oracle import OracleConfig, brute_force_rhombi, compare_with_oracle
from rhombi.search import RhombusCandidate, find_rhombi, validate_rhombus


def fake(center) -> RhombusCandidate:
    c = np.asarray(center, float)
    v = c + np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], float)
    return RhombusCandidate(0.0, c, v, (0.0,) * 4, {"on_curve_residual": 0.0})


@pytest.fixture(scope="module")
def circle_oracle(circle):
    return brute_force_rhombi(circle, 0.0, OracleConfig(samples=2000, angle_tol=2e-3, midpoint_tol=5e-3))


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(samples=50)
    with pytest.raises(ValueError):
        OracleConfig(angle_tol=0.0)
    with pytest.raises(ValueError):
        OracleConfig(offset_tol=-1.0)


def test_circle_oracle_finds_the_square(circle_oracle):
    near = [c for c in circle_oracle if np.linalg.norm(c.center) <= 5e-3]
    assert near
    assert any(same_point_set(c.vertices, analytic_square(0.0), 5e-3) for c in near)


def test_square_oracle(square):
    found = brute_force_rhombi(square, 0.0, OracleConfig.for_curve(square))
    assert any(np.linalg.norm(c.center - [0.5, 0.5]) <= 1e-9 for c in found)


def test_oracle_soundness(circle, stars):
    M = 2000
    for curve in (circle, stars[0]):
        spacing = curve.length / M
        tol = 4 * spacing / curve.diameter
        found = brute_force_rhombi(curve, 0.6, OracleConfig.for_curve(curve, M))
        assert found
        assert all(validate_rhombus(c, curve, tol).passed for c in found)


def test_oracle_angle_class_identity(stars):
    c = stars[1]
    a = brute_force_rhombi(c, 0.4, OracleConfig.for_curve(c))
    b = brute_force_rhombi(c, 0.4 + HALF_PI, OracleConfig.for_curve(c))
    assert len(a) == len(b)
    for x, y in zip(a, b):
        assert np.allclose(x.center, y.center, atol=1e-12)


def test_self_match_is_exact():
    cands = [fake((0, 0)), fake((3, 1)), fake((-2, 5))]
    rep = compare_with_oracle(cands, cands, 1e-6)
    assert [(i, j) for i, j, _ in rep.matched] == [(0, 0), (1, 1), (2, 2)]
    assert rep.max_distance == 0.0
    assert rep.found_only == [] and rep.oracle_only == []


def test_far_lists_do_not_match():
    rep = compare_with_oracle([fake((0, 0))], [fake((10, 10))], 1.0)
    assert rep.matched == []
    assert rep.to_dict() == {"matched": [], "median_only": [0], "oracle_only": [0]}


def test_matching_is_one_to_one_and_nearest_first():
    rep = compare_with_oracle([fake((0, 0)), fake((0.1, 0))], [fake((0.09, 0))], 1.0)
    assert [(i, j) for i, j, _ in rep.matched] == [(1, 0)]
    assert rep.found_only == [0]


def test_circle_pipeline_matches_oracle(circle, circle_oracle):
    found = find_rhombi(circle, 0.0).candidates
    rep = compare_with_oracle(found, circle_oracle, 5e-3)
    assert rep.found_only == []


def test_frozen_oracle_values(frozen_oracle):
    """The median search reproduces rhombi recorded from the brute-force oracle."""
    for case in frozen_oracle:
        curve = generate(CurveSpec(case["shape"], case["n"], case["params"]))
        frozen = [
            RhombusCandidate(case["theta"], np.array(c), np.array(v), (math.nan,) * 4)
            for c, v in zip(case["centers"], case["vertices"])
        ]
        found = find_rhombi(curve, case["theta"]).candidates
        assert found
        rep = compare_with_oracle(found, frozen, 1e-9 * curve.diameter)
        assert rep.found_only == [], case["shape"]
        for i, j, _ in rep.matched:
            assert same_point_set(found[i].vertices, frozen[j].vertices, 1e-9 * curve.diameter)


def test_frozen_analytic_cases(frozen_oracle):
    by_shape = {c["shape"]: c for c in frozen_oracle}
    circle = by_shape["circle"]
    assert len(circle["centers"]) == 1
    assert same_point_set(circle["vertices"][0], analytic_square(math.pi / 6), 2e-3)
    square = by_shape["square"]
    assert square["centers"] == [[0.5, 0.5]]
    ellipse = by_shape["ellipse"]
    assert same_point_set(ellipse["vertices"][0], [[2, 0], [0, 1], [-2, 0], [0, -1]], 2e-3)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=0, max_size=6), st.floats(0.01, 3))
def test_match_report_partitions_both_lists(a, radius):
    found = [fake(p) for p in a]
    oracle = [fake((x + 0.05, y)) for x, y in a[::-1]]
    rep = compare_with_oracle(found, oracle, radius)
    assert sorted([i for i, _, _ in rep.matched] + rep.found_only) == list(range(len(found)))
    assert sorted([j for _, j, _ in rep.matched] + rep.oracle_only) == list(range(len(oracle)))
    assert all(d <= radius for _, _, d in rep.matched)
