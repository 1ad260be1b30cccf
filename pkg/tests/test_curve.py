import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rhombi.curve import CurveSpec, JordanCurve, dump_curve, generate, load_curve, save_curve, validate_simple
from rhombi.errors import CurveParseError, CurveValidationError

BOWTIE = [[0, 0], [1, 1], [1, 0], [0, 1]]


def test_load_triangle_json():
    c = load_curve(b'{"format":"jordan-curve/1","vertices":[[0,0],[1,0],[0,1]]}', "json")
    assert c.n == 3


def test_bowtie_is_rejected_with_crossing_pair():
    with pytest.raises(CurveValidationError) as exc:
        load_curve(('{"format":"jordan-curve/1","vertices":%s}' % BOWTIE).encode(), "json")
    assert ((0, 1), (2, 3)) in exc.value.crossings


def test_validate_simple_reports_bowtie():
    report = validate_simple(JordanCurve(BOWTIE, check_simple=False))
    assert not report.ok
    assert report.crossings == [((0, 1), (2, 3))]


def test_csv_circle_diameter():
    k = np.arange(360)
    text = "x,y\n" + "\n".join(f"{math.cos(2 * math.pi * i / 360)!r},{math.sin(2 * math.pi * i / 360)!r}" for i in k)
    c = load_curve(io.StringIO(text), "csv")
    assert c.n == 360
    assert abs(c.diameter - 2.0) <= 1e-9


def test_closing_vertex_is_dropped():
    c = JordanCurve([[0, 0], [1, 0], [0, 1], [0, 0]])
    assert c.n == 3


@pytest.mark.parametrize(
    "text",
    [b"{not json", b'{"format":"other","vertices":[]}', b'{"format":"jordan-curve/1","vertices":[[0,"a"]]}'],
)
def test_malformed_json_raises_parse_error(text):
    with pytest.raises(CurveParseError):
        load_curve(text, "json")


def test_too_few_vertices():
    with pytest.raises(CurveValidationError):
        JordanCurve([[0, 0], [1, 0]])


def test_octagon_generator():
    c = generate(CurveSpec("circle", 8, {"radius": 1.0}))
    assert c.n == 8
    assert np.allclose(np.hypot(*c.vertices.T), 1.0)


def test_lens_touches_axes_only_at_tips(lens):
    v = lens.vertices
    assert [tuple(p) for p in v[v[:, 1] == 0.0]] == [(0.0, 0.0)]
    assert [tuple(p) for p in v[v[:, 0] == 1.0]] == [(1.0, 1.0)]
    assert validate_simple(lens).ok


def test_random_star_is_simple_and_deterministic():
    a = generate(CurveSpec("random_star", 200, {"seed": 7}))
    b = generate(CurveSpec("random_star", 200, {"seed": 7}))
    assert validate_simple(a).ok
    assert a == b


def test_unit_square_resolution_four():
    c = generate(CurveSpec("square", 4, {}))
    assert c.vertices.tolist() == [[0, 0], [1, 0], [1, 1], [0, 1]]


def test_bad_specs():
    with pytest.raises(ValueError):
        CurveSpec("blob", 10)
    with pytest.raises(ValueError):
        CurveSpec("square", 10)
    with pytest.raises(ValueError):
        generate(CurveSpec("lens", 100, {"a": 1.0, "b": 2.0}))


def test_json_round_trip_is_bit_exact(tmp_path, stars):
    for c in stars:
        path = tmp_path / "c.json"
        save_curve(c, path)
        back = load_curve(path)
        assert np.array_equal(back.vertices, c.vertices)
        assert dump_curve(back) == dump_curve(c)


def test_point_hits_every_vertex_once_on_regular_polygon():
    c = generate(CurveSpec("circle", 12, {}))
    pts = np.array([c.point(k / 12) for k in range(12)])
    assert np.allclose(pts, c.vertices, atol=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**16), st.integers(0, 199), st.booleans())
def test_simplicity_ignores_cyclic_shift_and_orientation(seed, shift, flip):
    c = generate(CurveSpec("random_star", 200, {"seed": seed}))
    v = np.roll(c.vertices, shift, axis=0)
    if flip:
        v = v[::-1]
    assert validate_simple(JordanCurve(v, check_simple=False)).ok

    bad = c.vertices.copy()
    bad[[0, 100]] = bad[[100, 0]]
    bad_v = np.roll(bad, shift, axis=0)
    if flip:
        bad_v = bad_v[::-1]
    assert validate_simple(JordanCurve(bad, check_simple=False)).ok == validate_simple(
        JordanCurve(bad_v, check_simple=False)
    ).ok
