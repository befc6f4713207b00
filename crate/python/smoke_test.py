"""Smoke test for the pycopylemma extension.

Build and run from the workspace root:

    cargo build -p copylemma-py --release --features extension-module
    python3 python/smoke_test.py

The script loads target/release/libpycopylemma.so unless the module is
already importable (for example after `maturin develop`).
"""

import importlib.machinery
import importlib.util
import os
import sys
from fractions import Fraction

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    try:
        import pycopylemma

        return pycopylemma
    except ImportError:
        pass
    for suffix in ("so", "dylib"):
        path = os.path.join(ROOT, "target", "release", f"libpycopylemma.{suffix}")
        if os.path.exists(path):
            loader = importlib.machinery.ExtensionFileLoader("pycopylemma", path)
            spec = importlib.util.spec_from_file_location("pycopylemma", path, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("pycopylemma not built; see the module docstring")


def main():
    cl = load()
    assert [cl.elemental_count(m) for m in range(1, 7)] == [1, 3, 9, 28, 85, 246]
    assert "Rminus" in cl.catalog_names()

    c5 = cl.SightGraph.cycle(5)
    assert c5.clique_cover_number() == 3
    assert c5.fractional_clique_cover_number() == Fraction(5, 2)
    assert c5.alpha() == 2
    assert c5.shannon_bound() == Fraction(5, 2)
    assert c5.blow_up(2).clique_cover_number() == 5
    assert cl.SightGraph(3, [(1, 2), (1, 3), (2, 3)]).brute_force(2) == 4

    problem = cl.Problem.from_catalog("C5")
    assert problem.kind == "guessing"
    assert problem.solve() == Fraction(5, 2)
    assert problem.export_lp() == problem.export_lp()
    assert cl.Problem.from_text(problem.to_text()).solve() == Fraction(5, 2)

    path = cl.Problem.access_structure(4, [[1, 2], [2, 3], [3, 4]], ["(14)(23)"])
    assert path.solve() == Fraction(3, 2)
    assert path.without_symmetry().solve() == Fraction(3, 2)
    try:
        cl.Problem.access_structure(4, [[1, 2], [2, 3], [3, 4]], ["(12)"])
    except cl.CopylemmaError as e:
        assert "automorphism" in str(e)
    else:
        raise AssertionError("non-automorphism accepted")

    rminus = cl.Problem.from_catalog("Rminus")
    with open(os.path.join(ROOT, "crates", "core", "tests", "data", "rminus.cert")) as fh:
        assert rminus.verify_certificate(fh.read()) == Fraction(1847, 276)

    print("smoke test passed")


if __name__ == "__main__":
    main()
