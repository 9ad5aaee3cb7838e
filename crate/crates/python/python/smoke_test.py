"""Smoke test for the pycylcover extension.

Run after `maturin develop` inside crates/python, or after
`cargo build -p cylcover-py --features extension-module`, in which case the
shared library is picked up from the cargo target directory.
"""

import importlib.util
import json
import math
import os
import shutil
import sys
import tempfile
import unittest


def _load():
    try:
        import pycylcover

        return pycylcover
    except ImportError:
        pass
    root = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..", ".."))
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(root, "target"))
    for profile in ("release", "debug"):
        lib = os.path.join(target, profile, "libpycylcover.so")
        if os.path.exists(lib):
            tmp = tempfile.mkdtemp()
            dest = os.path.join(tmp, "pycylcover.so")
            shutil.copy(lib, dest)
            spec = importlib.util.spec_from_file_location("pycylcover", dest)
            mod = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    sys.exit("pycylcover is not built; see the module docstring")


cc = _load()

SQUARE = json.dumps({"kind": "vpolytope", "dim": 2, "vertices": [[-2, -2], [2, -2], [2, 2], [-2, 2]]})
TRIANGLE = json.dumps({"kind": "vpolytope", "dim": 2, "vertices": [[0, 0], [1, 0], [0, 1]]})
BALL = json.dumps({"kind": "ball", "dim": 3, "center": [0, 0, 0], "radius": 2.0})


class Smoke(unittest.TestCase):
    def test_volume_and_width(self):
        self.assertEqual(cc.volume(SQUARE), 16.0)
        self.assertAlmostEqual(cc.volume(BALL), 4.0 / 3.0 * math.pi * 8.0, places=9)
        self.assertEqual(cc.lattice_width(SQUARE), (4.0, [1, 0]))

    def test_asymmetry_and_mean_width(self):
        self.assertAlmostEqual(cc.sd(TRIANGLE), 2.0, places=9)
        self.assertEqual(cc.mean_widths(BALL), (0.5, 2.0))

    def test_chord_and_cover(self):
        self.assertAlmostEqual(cc.bang_chord_integral([0.3, 0.4], 3), math.pi, places=9)
        grid = [[x, y] for x in range(3) for y in range(3)]
        self.assertEqual(cc.min_flat_cover(grid), (3, True))

    def test_suite(self):
        report = json.loads(cc.run_suite("bang-density", trials=4, seed=1))
        self.assertEqual(report["passes"], 4)
        self.assertIn("plank-witness", cc.SUITES)

    def test_errors(self):
        with self.assertRaises(ValueError):
            cc.run_suite("nonexistent")
        with self.assertRaises(ValueError):
            cc.volume('{"kind": "torus", "dim": 2}')


if __name__ == "__main__":
    unittest.main()
