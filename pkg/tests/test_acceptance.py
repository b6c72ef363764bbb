"""Acceptance criteria, one test each, with a one-line verdict on stdout.

Run ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import os
import random
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from doubles import FullOrbitHostSpec, tower_of  # noqa: E402
from hand_assembly import assemble_level1_ball  # noqa: E402
from trees import all_trees, brute_isomorphic, make_tree, shuffled  # noqa: E402

from startree.addr import Base, RayV, wrap  # noqa: E402
from startree.construction import ball_at, build_tower  # noqa: E402
from startree.iso import tree_isomorphic, verify_witness  # noqa: E402
from startree.orbits import Region, default_margin, hosts, orbit  # noqa: E402
from startree.tree_kernel import degree, leaves, remove_leaf  # noqa: E402
from startree.verifier import PASS, Verifier  # noqa: E402

GOLDEN = Path(__file__).parent / "golden" / "truncate_l0_ray0_r2.edgelist"
SUITE_REGIONS = ((0, 20), (1, 12), (2, 8))
_results = {}


def _verdict(n, ok, detail):
    line = f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    _results[n] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def tower2():
    return build_tower(2)


def test_1_exhaustive_isomorphism():
    t0 = time.perf_counter()
    rng = random.Random(1)
    pool = [(n, edges) for n, edges in all_trees(8)]
    pairs = bad = 0
    for i, (na, ea) in enumerate(pool):
        a = make_tree(na, ea, prefix="a")
        for nb, eb in pool:
            b = shuffled(nb, eb, rng, prefix="b")
            pairs += 1
            w = tree_isomorphic(a, b)
            truth = brute_isomorphic(a, b)
            if (w is not None) != truth or (w is not None and not verify_witness(w)):
                bad += 1
    dt = time.perf_counter() - t0
    _verdict(1, bad == 0 and dt < 60,
             f"{pairs} pairs over {len(pool)} classes, {bad} disagreements, {dt:.1f}s (limit 60s)")


def test_2_leaf_count_lemma():
    trees = checked = bad = 0
    for n, edges in all_trees(9):
        if n < 3:
            continue  # removing a leaf of K2 leaves an isolated vertex, not a tree with leaves
        t = make_tree(n, edges)
        trees += 1
        before = len(leaves(t))
        for x in leaves(t):
            (nb,) = t.adjacency(x)
            delta = len(leaves(remove_leaf(t, x))) - before
            checked += 1
            if delta not in (-1, 0) or (delta == 0) != (degree(t, nb) == 2):
                bad += 1
    _verdict(2, bad == 0, f"{trees} trees, {checked} leaf removals, {bad} violations")


def _suite(tower, level, radius, limit, n):
    t0 = time.perf_counter()
    reps = Verifier(tower).level_reports(level, radius)
    dt = time.perf_counter() - t0
    failing = [f"{r.check}={r.verdict}" for r in reps if r.verdict != PASS]
    _verdict(n, not failing and dt < limit,
             f"level {level} radius {radius}: {len(reps)} checks, "
             f"{'all pass' if not failing else ', '.join(failing)}, {dt:.1f}s (limit {limit}s)")


def test_3_level0_suite(tower2):
    _suite(build_tower(0), 0, 20, 5, 3)


def test_4_level1_suite():
    _suite(build_tower(1), 1, 12, 60, 4)


def test_5_level2_suite():
    _suite(build_tower(2), 2, 8, 600, 5)


def test_6_hand_assembly(tower2):
    mine, asm = assemble_level1_ball(radius=10)
    theirs = ball_at(tower2[1], Base(RayV(0)), 10)
    w = tree_isomorphic(mine, theirs)
    ok = w is not None and verify_witness(w)
    _verdict(6, ok, f"hand-built ball {len(mine)} vertices vs engine ball {len(theirs)} vertices, "
                    f"{'isomorphic' if ok else 'not isomorphic'} with leaf/frontier marks")


def test_7_ladder_vs_full_orbit(tower2):
    bad = Verifier(tower_of(FullOrbitHostSpec, 1)).check_max_degree(1, 8)
    good = Verifier(tower2).check_max_degree(1, 8)
    ok = (bad.verdict == "fail" and bad.stats["max_degree"] == 4 and bool(bad.counterexamples)
          and good.verdict == PASS)
    first = bad.counterexamples[0] if bad.counterexamples else "none"
    _verdict(7, ok, f"full-orbit double: {bad.verdict}, max degree {bad.stats['max_degree']}, "
                    f"first counterexample {first}; ladder engine: {good.verdict}")


def test_8_stability(tower2):
    notes = []
    ok = True
    for level, radius in SUITE_REGIONS:
        spec = tower2[level]
        region = Region(wrap(RayV(0), level), radius, default_margin(level))
        wide = region.doubled(level)
        gens = range(level + 1)
        if orbit(spec, gens, [spec.witness], region) != orbit(spec, gens, [spec.witness], wide):
            ok = False
            notes.append(f"orbit L{level} margin")
        if level >= 1:
            base = hosts(spec, region, 3)
            if base != hosts(spec, wide, 3):
                ok = False
                notes.append(f"hosts L{level} margin")
            if base != hosts(spec, region, 6):
                ok = False
                notes.append(f"hosts L{level} K")
    _verdict(8, ok, "orbits and hosts unchanged under margin doubling and K=3 vs 6 on "
                    + ", ".join(f"L{lv} r{r}" for lv, r in SUITE_REGIONS)
                    + ("" if ok else f"; unstable: {', '.join(notes)}"))


def _cli(args, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    proc = subprocess.run([sys.executable, "-m", "startree", *args], capture_output=True, env=env)
    return proc.returncode, proc.stdout


def test_9_determinism():
    verify = ["verify", "--max-level", "1", "--radius", "10"]
    trunc = ["truncate", "--level", "0", "--center", "ray(0)", "--radius", "2", "--format", "edgelist"]
    with ThreadPoolExecutor(max_workers=4) as pool:
        runs = list(pool.map(lambda s: _cli(verify, s), (0, 12345)))
        truncs = list(pool.map(lambda s: _cli(trunc, s), (0, 1, 2, 3)))
    same_verify = runs[0] == runs[1] and runs[0][0] == 0 and runs[0][1]
    golden = GOLDEN.read_bytes()
    same_trunc = all(rc == 0 and out == golden for rc, out in truncs)
    _verdict(9, bool(same_verify) and same_trunc,
             f"verify L1 r10 byte-identical across hash seeds: {bool(same_verify)}; "
             f"truncate matches golden in 4 concurrent runs: {same_trunc}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
