import json
import math
from pathlib import Path

import numpy as np
import pytest

from rhombi.corners import find_special_corners
from rhombi.curve import CurveSpec, generate
from rhombi.geometry import HALF_PI

DATA = Path(__file__).parent / "data"

STAR_SEEDS = (1, 2, 3, 4, 5)

CORPUS = {
    "circle": CurveSpec("circle", 720, {}),
    "ellipse": CurveSpec("ellipse", 720, {"a": 2.0, "b": 1.0}),
    "square": CurveSpec("square", 4, {}),
    "lens": CurveSpec("lens", 800, {"a": 2.0}),
    **{f"star{s}": CurveSpec("random_star", 200, {"seed": s}) for s in STAR_SEEDS},
}

SIXTEEN_ANGLES = [k * HALF_PI / 16 for k in range(16)]

_cache: dict = {}


def curve_for(name: str):
    if name not in _cache:
        _cache[name] = generate(CORPUS[name])
    return _cache[name]


def corners_for(name: str):
    key = ("corners", name)
    if key not in _cache:
        _cache[key] = find_special_corners(curve_for(name))
    return _cache[key]


@pytest.fixture(scope="session")
def circle():
    return curve_for("circle")


@pytest.fixture(scope="session")
def ellipse():
    return curve_for("ellipse")


@pytest.fixture(scope="session")
def square():
    return curve_for("square")


@pytest.fixture(scope="session")
def lens():
    return curve_for("lens")


@pytest.fixture(scope="session")
def lens_corners(lens):
    return find_special_corners(lens)


@pytest.fixture(scope="session")
def one_sided_lens():
    """Lens lying entirely above the line through its two corners."""
    return generate(CurveSpec("lens", 800, {"a": 3.0, "b": 1.5}))


@pytest.fixture(scope="session")
def one_sided_frames(one_sided_lens):
    from rhombi.two_corner import frames_for_pair

    p, q = find_special_corners(one_sided_lens)
    return frames_for_pair(one_sided_lens, p, q)


@pytest.fixture(scope="session")
def stars():
    return [curve_for(f"star{s}") for s in STAR_SEEDS]


@pytest.fixture(scope="session")
def frozen_oracle():
    return json.loads((DATA / "frozen_oracle.json").read_text())


def analytic_square(theta: float) -> np.ndarray:
    """Inscribed square of the unit circle with diagonals along theta, theta + pi/2."""
    return np.array([[math.cos(theta + k * HALF_PI), math.sin(theta + k * HALF_PI)] for k in range(4)])


def same_point_set(a, b, tol: float) -> bool:
    """Every point of ``a`` is within ``tol`` of some point of ``b`` and vice versa."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    d = np.linalg.norm(a[:, None] - b[None, :], axis=-1)
    return bool(d.min(axis=1).max() <= tol and d.min(axis=0).max() <= tol)


# --- acceptance summary -------------------------------------------------------------

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
