"""Smoke test for the burnt_pancake extension module.

Build and run from the repository root:

    cargo build -p burnt-pancake-py --features extension-module
    cp target/debug/libburnt_pancake_py.so python/burnt_pancake.so
    python3 python/smoke_test.py

or install with `maturin develop -m crates/python/Cargo.toml` first.
"""

import json
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import burnt_pancake as bp


def main():
    s = bp.SignedPermutation.parse("2 1")
    assert str(s.reverse(2)) == "-1 -2"
    assert s.reverse(1).reverse(1) == s
    assert bp.SignedPermutation.identity(3).rank() == 0
    assert bp.SignedPermutation.unrank(3, 5).rank() == 5
    try:
        bp.SignedPermutation([1, 1])
    except ValueError:
        pass
    else:
        raise AssertionError("duplicate magnitude accepted")

    g = bp.CayleyGraph(3)
    assert (g.vertex_count, g.degree) == (48, 3)
    assert g.matrix_market().splitlines()[1] == "48 48 72"
    assert bp.CayleyGraph(3, "plain").vertex_count == 6

    assert bp.quotient_block(3) == [
        [2, 0, 0, 1, 0, 0],
        [0, 1, 0, 1, 1, 0],
        [0, 0, 0, 1, 1, 1],
        [1, 1, 1, 0, 0, 0],
        [0, 1, 1, 0, 1, 0],
        [0, 0, 1, 0, 0, 2],
    ]
    pairs = bp.theorem_eigenpairs(4)
    assert sorted(l for l, _ in pairs) == [0, 1, 3, 4]

    report = json.loads(bp.verify_theorem(4, lift=True))
    assert report["passed"] and len(report["lifted"]) == 4

    lambda2, gap, method, _ = bp.spectral_gap(2)
    assert method == "dense" and abs(gap - (2 - math.sqrt(2))) < 1e-10

    spectrum = bp.burnt_spectrum(3)
    assert len(spectrum) == 48 and abs(spectrum[0] - 3) < 1e-9

    lap = bp.btilde_spectrum(4)
    assert all(abs(a - b) < 1e-10 for a, b in zip(lap, [0, 0.25, 0.25, 1]))

    cover = json.loads(bp.check_covering(3))
    assert cover["index"] == 8
    failed = sorted((c["fiber"], c["target"]) for c in cover["condition1"] if not c["passed"])
    assert failed == [("F3", "v1"), ("F3", "v2")]

    print("smoke test passed, burnt_pancake", bp.__version__)


if __name__ == "__main__":
    main()
