"""Finite-radius checks of the construction's properties.

Every check samples a ball of the level-``n`` tree and returns a
:class:`Report`.  Isomorphism checks quantify over the ball's interior
(vertices whose whole neighbourhood lies inside), so cut edges never
produce false failures.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Optional

from .addr import In, Z, addr_key, parse_addr, render, wrap, RayV
from .construction import LevelSpec, build_tower
from .orbits import HostRef, MarginInstability, Region, default_margin, hosts, orbit

__all__ = ["Report", "Config", "Verifier", "run_suite", "suite_ok", "reports_to_json",
           "PASS", "FAIL", "INCONCLUSIVE"]

log = logging.getLogger(__name__)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
_MAX_LISTED = 50


@dataclass
class Report:
    check: str
    level: int
    radius: int
    verdict: str = PASS
    counterexamples: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def fail(self, addr, why=None):
        self.verdict = FAIL
        self.counterexamples.append(render(addr))
        if why and len(self.stats.setdefault("diagnostics", [])) < _MAX_LISTED:
            self.stats["diagnostics"].append(f"{render(addr)}: {why}")

    def inconclusive(self, why):
        if self.verdict != FAIL:
            self.verdict = INCONCLUSIVE
        self.stats["inconclusive"] = why

    @property
    def ok(self):
        return self.verdict == PASS

    def finish(self):
        self.counterexamples = sorted(set(self.counterexamples))
        return self

    def to_dict(self):
        return {
            "check": self.check,
            "level": self.level,
            "radius": self.radius,
            "verdict": self.verdict,
            "counterexamples": self.counterexamples,
            "stats": self.stats,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


@dataclass
class Config:
    max_level: int = 1
    radius: int = 10
    margin: Optional[int] = None
    stability_k: int = 3
    format: str = "json"
    center: Optional[str] = None
    radii: Optional[tuple] = None

    def __post_init__(self):
        if self.radius < 1:
            raise ValueError("radius must be >= 1")
        if self.margin is not None and self.margin < self.radius / 2:
            log.warning("margin %d is below radius/2; orbit results may be unstable", self.margin)


class Verifier:
    """Runs checks against a tower of level specs (real or test doubles)."""

    def __init__(self, tower=None, max_level=None, margin=None, stability_k=3, center=None):
        if tower is None:
            tower = build_tower(max_level if max_level is not None else 1)
        self.tower = tower
        self.margin = margin
        self.stability_k = stability_k
        self.center = parse_addr(center) if isinstance(center, str) else center

    def region(self, level, radius) -> Region:
        c = self.center
        if c is None:
            c = wrap(RayV(0), level)
        else:
            from .addr import addr_level
            m = addr_level(c)
            c = wrap(c, level - m) if m <= level else wrap(RayV(0), level)
        return Region(c, radius, self.margin if self.margin is not None else default_margin(level))

    def _ball(self, spec, region, rep):
        dist = spec.ball_distances(region.center, region.radius)
        rep.stats["vertices"] = len(dist)
        rep.stats["center"] = render(region.center)
        rep.stats["margin"] = region.margin
        return dist

    @staticmethod
    def _interior(spec, dist):
        return [a for a in dist if all(u in dist for u in spec.neighbors(a))]

    # -- degree bound --------------------------------------------------------
    def check_max_degree(self, level, radius) -> Report:
        spec = self.tower[level]
        rep = Report("max_degree", level, radius)
        dist = self._ball(spec, self.region(level, radius), rep)
        top = 0
        for a in sorted(dist, key=addr_key):
            d = spec.degree(a)
            top = max(top, d)
            if d > 3:
                rep.fail(a, f"degree {d}")
        rep.stats["max_degree"] = top
        if rep.ok and top != 3:
            rep.inconclusive(f"no degree-3 vertex within radius {radius}")
        return rep.finish()

    # -- designated leaves ---------------------------------------------------
    def check_leaf_roster(self, level, radius) -> Report:
        spec = self.tower[level]
        rep = Report("leaf_roster", level, radius)
        dist = self._ball(spec, self.region(level, radius), rep)
        seen = 0
        for i, x in enumerate(spec.x_leaves()):
            if x not in dist:
                continue
            seen += 1
            if spec.degree(x) != 1:
                rep.fail(x, f"x_{i} has degree {spec.degree(x)}")
        rep.stats["x_in_region"] = seen
        return rep.finish()

    # -- generators ----------------------------------------------------------
    def check_local_iso(self, level, j, radius) -> Report:
        spec = self.tower[level]
        rep = Report(f"local_iso[g{j}]", level, radius)
        dist = self._ball(spec, self.region(level, radius), rep)
        interior = sorted(self._interior(spec, dist), key=addr_key)
        x = spec.x_leaf(j)
        apply = spec.apply_generator
        image_of = {}
        for v in interior:
            img = apply(j, 1, v)
            if img is None:
                rep.fail(v, "forward image undefined")
                continue
            if img in image_of:
                rep.fail(v, f"collides with {render(image_of[img])}")
            image_of[img] = v
            want = {apply(j, 1, u) for u in spec.neighbors(v)}
            have = set(spec.neighbors(img)) - {x}
            if want != have:
                rep.fail(v, "adjacency not preserved")
            if apply(j, -1, img) != v:
                rep.fail(v, "inverse does not undo forward")
        uncovered = []
        for w in interior:
            pre = apply(j, -1, w)
            if pre is None:
                uncovered.append(w)
            elif apply(j, 1, pre) != w:
                rep.fail(w, "forward does not undo inverse")
        expected = [x] if x in dist else []
        if uncovered != expected:
            for w in set(uncovered) ^ set(expected):
                rep.fail(w, "uncovered set differs from the removed leaf")
        rep.stats["interior"] = len(interior)
        rep.stats["uncovered"] = [render(w) for w in uncovered]
        return rep.finish()

    def check_nesting(self, level, j, radius) -> Report:
        """Level ``level`` generator ``j`` restricted to the base copy equals level ``level-1``'s."""
        if level < 1 or not 0 <= j < level:
            raise ValueError("nesting needs level >= 1 and j < level")
        hi, lo = self.tower[level], self.tower[level - 1]
        rep = Report(f"nesting[g{j}]", level, radius)
        dist = self._ball(lo, self.region(level - 1, radius), rep)
        for a in sorted(dist, key=addr_key):
            for e in (1, -1):
                below = lo.apply_generator(j, e, a)
                above = hi.apply_generator(j, e, wrap(a))
                if above != (None if below is None else wrap(below)):
                    rep.fail(a, f"g{j}^{e:+d} disagrees across levels")
        return rep.finish()

    # -- witness orbit -------------------------------------------------------
    def check_witness_orbit(self, level, radius) -> Report:
        spec = self.tower[level]
        rep = Report("witness_orbit", level, radius)
        region = self.region(level, radius)
        dist = self._ball(spec, region, rep)
        y = spec.witness
        seeded = spec.distance(region.center, y) <= radius + region.margin
        closed = {a for a in dist if spec.in_witness_orbit(a)}
        found = set()
        if seeded:
            stats = {}
            try:
                found = orbit(spec, range(level + 1), [y], region, audit=True, stats=stats)
            except MarginInstability as exc:
                rep.inconclusive(str(exc))
            rep.stats["explored"] = stats.get("explored", 0)
            for a in sorted(found - closed, key=addr_key):
                rep.fail(a, "orbit search reached a vertex the predicate rejects")
            missed = closed - found
            if missed and rep.verdict == PASS:
                rep.inconclusive(f"orbit search missed {len(missed)} predicted vertices within the limit")
        else:
            rep.stats["search"] = "witness beyond exploration limit"
        rep.stats["orbit_size"] = len(closed | found)
        for a in sorted(closed | found, key=addr_key):
            pre = spec.degree(a) - (1 if spec.is_host(a) else 0)
            if pre != 2:
                rep.fail(a, f"orbit vertex has degree {pre} before attachment")
        return rep.finish()

    # -- leaf selection --------------------------------------------------------
    def check_x_selection(self, level, radius) -> Report:
        spec = self.tower[level]
        rep = Report("x_selection", level, radius)
        dist = self._ball(spec, self.region(level, radius), rep)
        x0 = spec.x_leaf(0)
        chosen = spec.x_leaf(level + 1)
        if x0 not in dist or chosen not in dist:
            rep.stats["vacuous"] = True
            return rep.finish()
        d = spec.distance(x0, chosen)
        rep.stats["distance"] = d
        taken = set(spec.x_leaves()[: level + 1])
        around = spec.ball_distances(x0, d)
        if around.get(chosen) != d or spec.degree(chosen) != 1:
            rep.fail(chosen, "selected vertex is not a leaf at the stated distance")
        for a in sorted(around, key=addr_key):
            if a in taken or a == chosen or spec.degree(a) != 1:
                continue
            if around[a] < d:
                rep.fail(a, f"leaf at distance {around[a]} < {d}")
            elif addr_key(a) < addr_key(chosen):
                rep.fail(a, "tie broken against canonical order")
        return rep.finish()

    # -- core ---------------------------------------------------------------
    def _direction_infinite(self, spec, v, u, budget):
        """Budgeted depth-first walk into the component of T - v containing u."""
        stack = [(u, v, 1)]
        visited = 0
        while stack:
            a, came, depth = stack.pop()
            visited += 1
            if depth >= budget:
                return True, visited
            for b in sorted(spec.neighbors(a), key=addr_key):
                if b != came:
                    stack.append((b, a, depth + 1))
        return False, visited

    def _in_core(self, spec, v, budget, rep):
        if spec.degree(v) <= 1:
            return False
        infinite = 0
        for u in spec.neighbors(v):
            inf, visited = self._direction_infinite(spec, v, u, budget)
            rep.stats["expanded"] = rep.stats.get("expanded", 0) + visited
            if inf == (spec.degree(u) == 1):
                rep.fail(u, "finite directions must be exactly pendant leaves")
            infinite += inf
        return infinite >= 2

    def check_core(self, level, radius) -> Report:
        spec = self.tower[level]
        rep = Report("core", level, radius)
        region = self.region(level, radius)
        dist = self._ball(spec, region, rep)
        budget = radius + region.margin
        core = {a for a in dist if self._in_core(spec, a, budget, rep)}
        rep.stats["core_size"] = len(core)
        for a in sorted(dist, key=addr_key):
            if spec.is_host(a) and a not in core:
                rep.fail(a, "host outside the core")
        interior = set(self._interior(spec, dist))
        for a in sorted(core & interior, key=addr_key):
            for j in range(level + 1):
                img = spec.apply_generator(j, 1, a)
                if img not in core and not self._in_core(spec, img, budget, rep):
                    rep.fail(a, f"g{j} moves a core vertex out of the core")
        return rep.finish()

    # -- ladder -------------------------------------------------------------
    def check_host_degree(self, level, radius) -> Report:
        if level < 1:
            raise ValueError("hosts exist from level 1 on")
        spec = self.tower[level]
        rep = Report("host_degree", level, radius)
        region = self.region(level, radius)
        dist = self._ball(spec, region, rep)
        predicted = {a for a in dist if spec.is_host(a)}
        if spec.distance(region.center, spec.root_host) <= radius + region.margin:
            stats = {}
            try:
                ladder = hosts(spec, region, self.stability_k, audit=True, stats=stats)
            except MarginInstability as exc:
                rep.inconclusive(str(exc))
                ladder = frozenset()
            rep.stats["strata_used"] = stats.get("strata", 0)
            per = {}
            for ref in sorted(ladder, key=HostRef.sort_key):
                per[str(ref.stratum)] = per.get(str(ref.stratum), 0) + 1
                if ref.host not in predicted:
                    rep.fail(ref.host, "ladder host the predicate rejects")
                elif spec.stratum(ref.host) != ref.stratum:
                    rep.fail(ref.host, f"stratum {ref.stratum} vs predicted {spec.stratum(ref.host)}")
            rep.stats["per_stratum"] = per
            missed = predicted - {ref.host for ref in ladder}
            if missed and rep.verdict == PASS:
                rep.inconclusive(f"ladder missed {len(missed)} predicted hosts within the limit")
        else:
            rep.stats["ladder"] = "root host beyond exploration limit"
        rep.stats["hosts"] = len(predicted)
        for h in sorted(predicted, key=addr_key):
            nb = spec.neighbors(h)
            if In(h, Z()) not in nb or len(nb) - 1 != 2:
                rep.fail(h, f"degree {len(nb)} with gadget; must be 2 without it")
        return rep.finish()

    # -- suite ----------------------------------------------------------------
    def level_reports(self, level, radius) -> list:
        out = [
            self.check_max_degree(level, radius),
            self.check_leaf_roster(level, radius),
        ]
        out += [self.check_local_iso(level, j, radius) for j in range(level + 1)]
        out += [self.check_nesting(level, j, radius) for j in range(level)]
        out += [
            self.check_witness_orbit(level, radius),
            self.check_x_selection(level, radius),
            self.check_core(level, radius),
        ]
        if level >= 1:
            out.append(self.check_host_degree(level, radius))
        return out


def run_suite(config: Config, tower=None) -> list:
    """All checks for every level up to ``config.max_level``, in fixed order."""
    if tower is None:
        tower = build_tower(config.max_level)
    v = Verifier(tower, margin=config.margin, stability_k=config.stability_k, center=config.center)
    radii = sorted(set(config.radii)) if config.radii else [config.radius]
    reports = []
    for level in range(config.max_level + 1):
        for r in radii:
            reports.extend(v.level_reports(level, r))
    return reports


def suite_ok(reports) -> bool:
    return all(r.ok for r in reports)


def reports_to_json(reports) -> str:
    return "".join(r.to_json() + "\n" for r in reports)
