"""Regenerate frozen_oracle.json: brute-force rhombi for the fixture corpus.

The values come from the dense-sampling oracle only, never from the median
search, so tests comparing the two are independent.  Run from the package
root: ``python3 tests/data/freeze_oracle.py``.
"""

import json
import math
from pathlib import Path

from rhombi.curve import CurveSpec, generate
from rhombi.oracle import OracleConfig, brute_force_rhombi

CASES = [
    ("circle", 720, {}, math.pi / 6),
    ("ellipse", 720, {"a": 2.0, "b": 1.0}, 0.0),
    ("square", 4, {}, 0.0),
    ("random_star", 200, {"seed": 1}, 0.3),
    ("random_star", 200, {"seed": 2}, 1.1),
]


def main() -> None:
    out = []
    for shape, n, params, theta in CASES:
        curve = generate(CurveSpec(shape, n, params))
        found = brute_force_rhombi(curve, theta, OracleConfig.for_curve(curve))
        out.append(
            {
                "shape": shape,
                "n": n,
                "params": params,
                "theta": theta,
                "centers": [[float(c) for c in r.center] for r in found],
                "vertices": [[[float(x), float(y)] for x, y in r.vertices] for r in found],
            }
        )
    path = Path(__file__).with_name("frozen_oracle.json")
    path.write_text(json.dumps(out, indent=1) + "\n")
    print(f"wrote {path} ({sum(len(c['centers']) for c in out)} rhombi)")


if __name__ == "__main__":
    main()
