import json

import pytest

from doubles import (DegreeThreeHostSpec, FullOrbitHostSpec, OddShiftSpec, ReversedTieSpec,
                     SkipNearestSpec, tower_of)
from startree.addr import RayV
from startree.construction import build_tower
from startree.verifier import FAIL, INCONCLUSIVE, PASS, Config, Report, Verifier, run_suite, suite_ok


def _by_check(reports):
    return {r.check: r for r in reports}


def test_level0_suite_passes(tower):
    reps = Verifier(tower).level_reports(0, 12)
    assert [r.check for r in reps] == [
        "max_degree", "leaf_roster", "local_iso[g0]", "witness_orbit", "x_selection", "core"]
    assert all(r.verdict == PASS for r in reps), [r.to_dict() for r in reps if not r.ok]
    assert _by_check(reps)["local_iso[g0]"].stats["uncovered"] == ["leaf(0)"]


def test_level1_suite_passes(tower):
    reps = Verifier(tower).level_reports(1, 8)
    assert all(r.verdict == PASS for r in reps), [r.to_dict() for r in reps if not r.ok]
    assert "host_degree" in _by_check(reps)


def test_small_radius_is_inconclusive_for_degree(tower):
    v = Verifier(tower, center="ray(5)")
    rep = v.check_max_degree(0, 0)
    assert rep.verdict == INCONCLUSIVE


def test_off_center_region(tower):
    v = Verifier(tower, center="ray(9)")
    for r in v.level_reports(1, 6):
        assert r.verdict in (PASS, INCONCLUSIVE), r.to_dict()
        assert r.verdict == PASS or r.check in ("witness_orbit", "host_degree")


def test_level3_tie_break_real_engine():
    t = build_tower(3)
    assert Verifier(t).check_x_selection(3, 10).verdict == PASS


def test_reversed_tie_break_fails():
    rep = Verifier(tower_of(ReversedTieSpec, 3)).check_x_selection(3, 10)
    assert rep.verdict == FAIL
    assert any("canonical order" in d for d in rep.stats["diagnostics"])


def test_skip_nearest_fails():
    rep = Verifier(tower_of(SkipNearestSpec, 1)).check_x_selection(1, 10)
    assert rep.verdict == FAIL
    assert rep.counterexamples == ["base(leaf(2))"]  # the double skipped it at level 0 too


def test_full_orbit_hosts_give_degree_four():
    t = tower_of(FullOrbitHostSpec, 1)
    rep = Verifier(t).check_max_degree(1, 8)
    assert rep.verdict == FAIL
    assert "in(h=base(ray(1));c(1,1,ray(1)))" in rep.counterexamples
    assert rep.stats["max_degree"] == 4


def test_degree_three_attachment_fails():
    rep = Verifier(tower_of(DegreeThreeHostSpec, 1)).check_host_degree(1, 6)
    assert rep.verdict == FAIL
    assert rep.counterexamples[0] == "base(ray(0))"


def test_odd_shift_breaks_local_iso():
    rep = Verifier(tower_of(OddShiftSpec, 0)).check_local_iso(0, 0, 6)
    assert rep.verdict == FAIL


def test_broken_engine_suite_status():
    reps = run_suite(Config(max_level=0, radius=6), tower=tower_of(OddShiftSpec, 0))
    assert not suite_ok(reps)
    reps = run_suite(Config(max_level=0, radius=6))
    assert suite_ok(reps)


def test_report_json_is_reproducible(tower):
    a = [r.to_json() for r in Verifier(tower).level_reports(1, 6)]
    b = [r.to_json() for r in Verifier(build_tower(1)).level_reports(1, 6)]
    assert a == b
    d = json.loads(a[0])
    assert set(d) >= {"check", "level", "radius", "verdict", "counterexamples", "stats"}


def test_report_fail_dominates_inconclusive():
    r = Report("x", 0, 1)
    r.inconclusive("why")
    r.fail(RayV(0), "bad")
    r.inconclusive("again")
    assert r.verdict == FAIL


def test_passing_is_monotone_in_radius(tower):
    v = Verifier(tower)
    for r in (2, 4, 6, 8):
        assert all(rep.ok for rep in v.level_reports(1, r))


def test_radii_config():
    reps = run_suite(Config(max_level=0, radii=[3, 5]))
    assert sorted({r.radius for r in reps}) == [3, 5]


def test_host_degree_needs_level1(tower):
    with pytest.raises(ValueError):
        Verifier(tower).check_host_degree(0, 4)
