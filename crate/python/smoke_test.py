"""Build the extension with cargo, import it, and spot-check a few results."""

import os
import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def build():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "conserved-moments-py"],
        cwd=ROOT,
        check=True,
    )
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(ROOT, "target"))
    lib = os.path.join(target, "release", "libconserved_moments_py.so")
    out = tempfile.mkdtemp()
    shutil.copy(lib, os.path.join(out, "conserved_moments.so"))
    sys.path.insert(0, out)


def main():
    build()
    import conserved_moments as cm

    w = cm.Word("a2b2")
    assert str(w) == "aabb" and len(w) == 4 and w.counts == [2, 2]
    assert cm.sub_multisets("aab", 2) == ["aa", "ab"]
    assert [2, 1] in cm.partitions(3)

    s = cm.EquationSystem("abcde", 2)
    v = s.solve()
    assert len(s.unknowns) == 10 and v.nullity == 0 and v.all_moments_zero

    v = cm.EquationSystem("a2b2", 2).solve()
    assert v.nullity == 1 and not v.conjecture_applicable
    assert v.nullspace == [[Fraction(1), Fraction(-1, 2), Fraction(1)]]

    try:
        cm.EquationSystem("ab", 5)
    except ValueError as e:
        assert "split too large" in str(e)
    else:
        raise AssertionError("expected ValueError")

    assert all(n == 0 for _, n in cm.sweep(5, 2))

    r = cm.spectrum(3)
    assert r.det == 47775744 and r.passed()
    assert r.eigenvalues == [(4, 1), (-3, 6), (2, 14), (-1, 14)]

    rows = cm.spectral_table(3)
    assert [row[0] for row in rows] == [1, 2, 3]

    ok, worst = cm.oracle("gaussian", 1.0)
    assert ok and worst < 1e-8

    print("python smoke test: PASS")


if __name__ == "__main__":
    main()
