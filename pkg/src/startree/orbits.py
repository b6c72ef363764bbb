"""Region-bounded orbit closure and the host ladder.

Both computations explore only addresses within ``radius + margin`` of
the region centre and report what lies within ``radius``.  Generators
can move a vertex arbitrarily far, so pruning is not certified; callers
that need confidence re-run with a doubled margin (``audit=True``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .addr import Addr, addr_key, render

__all__ = [
    "Region", "HostRef", "MarginInstability", "LadderDidNotSettle",
    "default_margin", "orbit", "hosts",
]


def default_margin(level: int) -> int:
    return level + 4


@dataclass(frozen=True)
class Region:
    center: Addr
    radius: int
    margin: Optional[int] = None

    def margin_for(self, level: int) -> int:
        return default_margin(level) if self.margin is None else self.margin

    def doubled(self, level: int) -> "Region":
        return Region(self.center, self.radius, 2 * self.margin_for(level))


@dataclass(frozen=True)
class HostRef:
    stratum: int
    host: Addr

    def __str__(self):
        return f"{render(self.host)}@W{self.stratum}"

    def sort_key(self):
        return (self.stratum, addr_key(self.host))


class MarginInstability(RuntimeError):
    """Result changed when the exploration margin was doubled."""

    def __init__(self, what, region, level, added, lost):
        self.added = added
        self.lost = lost
        super().__init__(
            f"{what} at level {level} around {render(region.center)} radius {region.radius}: "
            f"margin doubling added {len(added)} and removed {len(lost)} addresses"
        )


class LadderDidNotSettle(RuntimeError):
    pass


def _closure(spec, gens, seeds, center, limit, stats=None):
    dist = spec.distance
    seen = {a for a in seeds if dist(center, a) <= limit}
    todo = sorted(seen, key=addr_key)
    while todo:
        a = todo.pop()
        for j in gens:
            for e in (1, -1):
                b = spec.apply_generator(j, e, a)
                if b is None or b in seen:
                    continue
                if dist(center, b) <= limit:
                    seen.add(b)
                    todo.append(b)
    if stats is not None:
        stats["explored"] = stats.get("explored", 0) + len(seen)
    return seen


def orbit(spec, gens, Y, region: Region, audit: bool = False, stats=None) -> frozenset:
    """Addresses within the region reachable from ``Y`` by words over ``gens``."""
    gens = sorted(set(gens))
    for j in gens:
        if not 0 <= j <= spec.level:
            raise ValueError(f"generator {j} invalid at level {spec.level}")
    limit = region.radius + region.margin_for(spec.level)
    full = _closure(spec, gens, Y, region.center, limit, stats)
    result = frozenset(a for a in full if spec.distance(region.center, a) <= region.radius)
    if audit:
        wide = orbit(spec, gens, Y, region.doubled(spec.level))
        if wide != result:
            raise MarginInstability("orbit", region, spec.level, wide - result, result - wide)
    return result


def hosts(spec, region: Region, stability_k: int = 3, audit: bool = False,
          stats=None, max_strata: int = 10_000) -> frozenset:
    """Ladder fixpoint restricted to the region, as ``HostRef``s.

    Stratum 1 is the root host.  Stratum ``i + 1`` closes stratum ``i``
    under the lower-level generators when ``i + 1`` is even and under
    the newest generator when it is odd, keeping only addresses not seen
    before.  This is deliberately not the full orbit of the root host.
    Iteration stops once ``stability_k`` consecutive strata add nothing
    inside the region.
    """
    if spec.level < 1:
        raise ValueError("hosts exist from level 1 on")
    n = spec.level - 1
    old_gens = list(range(n + 1))
    new_gen = [n + 1]
    c = region.center
    limit = region.radius + region.margin_for(spec.level)
    dist = spec.distance

    stratum_of = {}
    layer = {spec.root_host} if dist(c, spec.root_host) <= limit else set()
    i = 1
    quiet = 0
    while layer:
        for h in layer:
            stratum_of[h] = i
        if any(dist(c, h) <= region.radius for h in layer):
            quiet = 0
        else:
            quiet += 1
            if quiet >= stability_k:
                break
        if i >= max_strata:
            raise LadderDidNotSettle(f"ladder still growing after {max_strata} strata")
        gens = old_gens if (i + 1) % 2 == 0 else new_gen
        layer = _closure(spec, gens, layer, c, limit) - stratum_of.keys()
        i += 1
    if stats is not None:
        stats["strata"] = i
        stats["explored"] = stats.get("explored", 0) + len(stratum_of)
    result = frozenset(
        HostRef(s, h) for h, s in stratum_of.items() if dist(c, h) <= region.radius
    )
    if audit:
        wide = hosts(spec, region.doubled(spec.level), stability_k, max_strata=max_strata)
        if wide != result:
            raise MarginInstability("hosts", region, spec.level,
                                    {r.host for r in wide - result}, {r.host for r in result - wide})
    return result
