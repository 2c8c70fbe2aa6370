#!/usr/bin/env python3
"""Smoke test for the grassmann_codes_py extension module.

Builds the cdylib with cargo, copies it next to this script under an
importable name, and exercises the bound types and functions.

Usage: python3 python/smoke_test.py [--debug]
"""

import json
import shutil
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
BUILD_DIR = Path(__file__).resolve().parent / "_build"


def build_extension(debug: bool) -> Path:
    profile = "debug" if debug else "release"
    cmd = ["cargo", "build", "-p", "grassmann-codes-py"]
    if not debug:
        cmd.append("--release")
    subprocess.run(cmd, cwd=ROOT, check=True)
    built = ROOT / "target" / profile / "libgrassmann_codes_py.so"
    if not built.exists():  # macOS fallback
        built = ROOT / "target" / profile / "libgrassmann_codes_py.dylib"
    BUILD_DIR.mkdir(exist_ok=True)
    target = BUILD_DIR / "grassmann_codes_py.so"
    shutil.copy2(built, target)
    return target


PASSED = 0


def check(name: str, ok: bool, detail: str = "") -> None:
    global PASSED
    status = "PASS" if ok else "FAIL"
    print(f"SMOKE {name}: {status}" + (f" ({detail})" if detail else ""))
    if not ok:
        sys.exit(1)
    PASSED += 1


def main() -> None:
    debug = "--debug" in sys.argv
    build_extension(debug)
    sys.path.insert(0, str(BUILD_DIR))
    import grassmann_codes_py as gc

    # field arithmetic
    f4 = gc.Gf(4)
    check("gf4 table", f4.mul(2, 2) == 3 and f4.inv(2) == 3 and f4.add(2, 3) == 1)
    f3 = gc.Gf(3)
    check("gf3 add", f3.add(2, 2) == 1)
    check("gf9 elements", len(gc.Gf(9).elements()) == 9)
    spec = json.loads(f4.spec_json())
    check("field spec", spec["p"] == 2 and spec["e"] == 2 and spec["modulus"] == [1, 1, 1])
    try:
        gc.Gf(6)
        check("gf6 rejected", False)
    except ValueError:
        check("gf6 rejected", True)

    # counting
    check("count_points", gc.count_points(3, 3) == 13 and gc.count_points(3, 2) == 7)
    check(
        "gaussian_binomial",
        gc.gaussian_binomial(4, 2, 3) == 130 and gc.gaussian_binomial(5, 2, 4) == 5797,
    )
    check("enumerate", len(gc.enumerate_subspaces(4, 3, 2)) == 130)

    # graphs
    gamma = gc.Grassmann(4, 2, 3, "gamma")
    check("gamma vertices", gamma.vertex_count() == 130, repr(gamma))
    delta = gc.Grassmann(4, 2, 3, "delta")
    check("delta vertices", delta.vertex_count() == 84)
    v0 = delta.vertices()[0]
    check("vertex lookup", delta.index_of(v0) == 0)
    nbrs = delta.neighbors(0)
    check("neighbors symmetric", all(delta.has_edge(0, u) for u in nbrs))
    check("no degenerate vertices in delta",
          not any(delta.is_degenerate_vertex(u) for u in range(delta.vertex_count())))

    # census
    census = json.loads(gc.classify_cliques(4, 2, 3))
    check(
        "census counts",
        census["maximal_stars"] == 8
        and census["non_maximal_stars"] == 32
        and census["tops"] == 36,
        f"total {census['total']}",
    )

    # recovery
    verdict = json.loads(gc.recover(4, 2, 3))
    check("recover (4,2,3)", verdict["isomorphic"] is True and verdict["route"] == "n4")
    verdict = json.loads(gc.recover(5, 3, 3, route="stars"))
    check(
        "recover (5,3,3)",
        verdict["isomorphic"] is True
        and verdict["counts"]["special_sets"] == 190
        and verdict["counts"]["degenerate_k_subspaces"] == 190,
    )
    try:
        gc.recover(5, 2, 3)
        check("refusal at q = n-k", False)
    except ValueError as e:
        check("refusal at q = n-k", "q > n-k" in str(e))

    # counterexamples
    report = json.loads(gc.run_example(2, 5, 2, 3, sweep=True))
    check(
        "example 2",
        report["holds"] and report["oracle_agrees"] and report["completions_swept"] == 3,
    )

    print(f"all {PASSED} smoke checks passed")


if __name__ == "__main__":
    main()
