"""Lazy construction of the self-similar tree, level by level.

``LevelSpec(n)`` answers adjacency queries for the level-``n`` tree
``T_n`` without materialising it.  Level 0 is the doubly infinite ray
with a pendant leaf at every even non-negative vertex.  Level ``n + 1``
keeps a copy of ``T_n`` (addresses ``Base(a)``) and hangs one gadget at
every host.  A gadget is a 2-path from the host to a point ``yp`` on a
doubly infinite line; every other line vertex carries, through its own
2-path, a copy of ``T_n`` (side 1) or of ``T_n`` minus the leaf
``x_{n+1}`` (side 2).

Host membership is decided from the address alone:

* ``Base(a)`` is a host iff ``a`` lies in the orbit of the level-``n``
  witness under the level-``n`` generators;
* ``In(h, C(s, j, w))`` is a host iff ``w`` lies in that orbit and is not
  the witness itself;
* nothing else is.

At every level ``n >= 1`` that orbit is exactly the set of ``z`` and
``cz(s, j)`` vertices of all gadgets; at level 0 it is the odd ray
vertices.  The region-bounded ladder in :mod:`startree.orbits` recomputes
the same sets the slow way and the verifier compares the two.
"""

from __future__ import annotations

from collections import deque
from typing import Optional

from .addr import (
    C, CZ, R, Yp, Z, Addr, Base, In, LeafV, RayV, addr_key, addr_level, render, wrap,
)
from .tree_kernel import FRONTIER, INTERIOR, LEAF, FiniteTree

__all__ = ["LevelSpec", "InvalidAddress", "build_tower", "limit_neighbors", "ball_at"]

_Z = Z()
_YP = Yp()


class InvalidAddress(ValueError):
    pass


class LevelSpec:
    """Construction state of one level; ``parent`` is the level below."""

    def __init__(self, level: int = 0, parent: Optional["LevelSpec"] = None):
        if level < 0:
            raise ValueError("level must be >= 0")
        if level > 0 and parent is None:
            parent = LevelSpec(level - 1)
        if parent is not None and parent.level != level - 1:
            raise ValueError("parent must sit one level below")
        self.level = level
        self.parent = parent
        self._nbr_cache = {}
        self._dist_cache = {}
        self._x_cache = {}
        if level == 0:
            self.witness = RayV(1)
        else:
            self.witness = In(Base(parent.witness), _Z)

    def __repr__(self):
        return f"{type(self).__name__}(level={self.level})"

    # -- hosts and the witness orbit ----------------------------------------
    @property
    def root_host(self) -> Addr:
        """Host of the first gadget: the wrapped witness of the level below."""
        if self.level == 0:
            raise ValueError("level 0 has no gadgets")
        return Base(self.parent.witness)

    def in_witness_orbit(self, a: Addr) -> bool:
        if self.level == 0:
            return isinstance(a, RayV) and a.k % 2 == 1
        return isinstance(a, In) and isinstance(a.local, (Z, CZ))

    def is_host(self, a: Addr) -> bool:
        if self.level == 0:
            return False
        p = self.parent
        if isinstance(a, Base):
            return p.in_witness_orbit(a.inner)
        if isinstance(a, In) and isinstance(a.local, C):
            w = a.local.inner
            return w != p.witness and p.in_witness_orbit(w)
        return False

    def stratum(self, h: Addr) -> int:
        """Ladder stratum in which ``h`` first receives its gadget."""
        if not self.is_host(h):
            raise InvalidAddress(f"{render(h)} is not a host at level {self.level}")
        depth = 0
        while isinstance(h, In):
            depth += 1
            h = h.host
        base = 1 if h.inner == self.parent.witness else 2
        return base + 2 * depth

    def x_removed(self) -> Addr:
        """The leaf missing from side-2 copies (x_{n+1} of the level below)."""
        return self.parent.x_leaf(self.level)

    # -- validity -------------------------------------------------------------
    def is_valid(self, a) -> bool:
        try:
            self.check(a)
        except InvalidAddress:
            return False
        return True

    def check(self, a):
        if self.level == 0:
            if isinstance(a, (RayV, LeafV)):
                return
            raise InvalidAddress(f"{a!r} is not a level-0 address")
        if isinstance(a, Base):
            self.parent.check(a.inner)
            return
        if isinstance(a, In):
            self.check(a.host)
            if not self.is_host(a.host):
                raise InvalidAddress(f"{render(a.host)} carries no gadget at level {self.level}")
            loc = a.local
            if isinstance(loc, C):
                self.parent.check(loc.inner)
                if loc.side == 2 and loc.inner == self.x_removed():
                    raise InvalidAddress(f"side-2 copies omit {render(loc.inner)}")
            return
        raise InvalidAddress(f"{a!r} is not a level-{self.level} address")

    # -- adjacency --------------------------------------------------------------
    def neighbors(self, a: Addr) -> frozenset:
        try:
            return self._nbr_cache[a]
        except KeyError:
            pass
        out = frozenset(self._neighbors(a))
        self._nbr_cache[a] = out
        return out

    def degree(self, a: Addr) -> int:
        return len(self.neighbors(a))

    def _neighbors(self, a):
        if self.level == 0:
            if isinstance(a, RayV):
                out = [RayV(a.k - 1), RayV(a.k + 1)]
                if a.k >= 0 and a.k % 2 == 0:
                    out.append(LeafV(a.k))
                return out
            if isinstance(a, LeafV):
                return [RayV(a.k)]
            raise InvalidAddress(f"{a!r} is not a level-0 address")
        p = self.parent
        if isinstance(a, Base):
            out = [Base(b) for b in p.neighbors(a.inner)]
            if self.is_host(a):
                out.append(In(a, _Z))
            return out
        if not isinstance(a, In):
            raise InvalidAddress(f"{a!r} is not a level-{self.level} address")
        h, loc = a.host, a.local
        if isinstance(loc, Z):
            return [h, In(h, _YP)]
        if isinstance(loc, Yp):
            return [In(h, _Z), In(h, R(1, 1)), In(h, R(2, 1))]
        if isinstance(loc, R):
            s, j = loc.side, loc.j
            prev = In(h, _YP) if j == 1 else In(h, R(s, j - 1))
            return [prev, In(h, R(s, j + 1)), In(h, CZ(s, j))]
        if isinstance(loc, CZ):
            return [In(h, R(loc.side, loc.j)), In(h, C(loc.side, loc.j, p.witness))]
        s, j, w = loc.side, loc.j, loc.inner
        gone = self.x_removed() if s == 2 else None
        out = [In(h, C(s, j, b)) for b in p.neighbors(w) if b != gone]
        if w == p.witness:
            out.append(In(h, CZ(s, j)))
        if self.is_host(a):
            out.append(In(a, _Z))
        return out

    # -- generators ---------------------------------------------------------------
    def apply_generator(self, j: int, e: int, a: Addr) -> Optional[Addr]:
        """Image of ``a`` under generator ``j`` (``e = -1`` for its inverse).

        Generator ``j`` maps the tree onto the tree minus the leaf ``x_j``,
        so the inverse is undefined exactly at ``x_j``.
        """
        if not 0 <= j <= self.level:
            raise ValueError(f"generator index {j} invalid at level {self.level}")
        if e not in (1, -1):
            raise ValueError("exponent must be +1 or -1")
        if self.level == 0:
            if isinstance(a, RayV):
                return RayV(a.k + 2 * e)
            k = a.k + 2 * e
            return LeafV(k) if k >= 0 else None
        if j < self.level:
            return self._transport(j, e, a)
        return self._shift(e, a)

    def _transport(self, j, e, a):
        if isinstance(a, Base):
            img = self.parent.apply_generator(j, e, a.inner)
            return None if img is None else Base(img)
        host = self._transport(j, e, a.host)
        return None if host is None else In(host, a.local)

    def _shift(self, e, a):
        g0 = self.root_host
        if isinstance(a, Base):
            if e == 1:
                return In(g0, C(1, 1, a.inner))
            if a.inner == self.x_removed():
                return None
            return In(g0, C(2, 1, a.inner))
        if a.host != g0:
            host = self._shift(e, a.host)
            return None if host is None else In(host, a.local)
        return _slide(g0, a.local, e)

    def apply_word(self, word, a: Addr) -> Optional[Addr]:
        for j, e in reversed(tuple(word)):
            a = self.apply_generator(j, e, a)
            if a is None:
                return None
        return a

    # -- metric -------------------------------------------------------------------
    def distance(self, a: Addr, b: Addr) -> int:
        if a == b:
            return 0
        key = (a, b) if addr_key(a) <= addr_key(b) else (b, a)
        try:
            return self._dist_cache[key]
        except KeyError:
            pass
        d = self._distance(a, b)
        self._dist_cache[key] = d
        return d

    def _distance(self, a, b):
        if self.level == 0:
            ka = a.k
            kb = b.k
            d = abs(ka - kb)
            if isinstance(a, LeafV):
                d += 1
            if isinstance(b, LeafV):
                d += 1
            if isinstance(a, LeafV) and isinstance(b, LeafV) and ka == kb:
                d = 0
            return d
        oa, la = _decompose(a)
        ob, lb = _decompose(b)
        if oa != ob:
            return self.parent.distance(oa, ob) + self._depth(la) + self._depth(lb)
        p = 0
        while p < len(la) and p < len(lb) and la[p] == lb[p]:
            p += 1
        if p == len(la):
            return self._depth(lb[p:])
        if p == len(lb):
            return self._depth(la[p:])
        return self._gadget_distance(la[p], lb[p]) + self._depth(la[p + 1:]) + self._depth(lb[p + 1:])

    def _height(self, loc):
        if isinstance(loc, Z):
            return 1
        if isinstance(loc, (Yp, R)):
            return 0
        if isinstance(loc, CZ):
            return 1
        return 2 + self.parent.distance(self.parent.witness, loc.inner)

    def _depth(self, locs):
        # the host sits 2 above line position 0, on its own branch
        total = 0
        for loc in locs:
            total += 1 if isinstance(loc, Z) else 2 + abs(_line_pos(loc)) + self._height(loc)
        return total

    def _gadget_distance(self, u, v):
        tu, tv = _line_pos(u), _line_pos(v)
        hu, hv = self._height(u), self._height(v)
        if tu != tv or hu == 0 or hv == 0:
            return hu + abs(tu - tv) + hv
        # same hanging branch off the line
        if isinstance(u, C) and isinstance(v, C):
            return self.parent.distance(u.inner, v.inner)
        return abs(hu - hv)

    # -- designated leaves ------------------------------------------------------
    def x_leaf(self, i: int) -> Addr:
        if not 0 <= i <= self.level + 1:
            raise ValueError(f"x_{i} is not designated at level {self.level}")
        if i <= self.level:
            if self.level == 0:
                return LeafV(0)
            return Base(self.parent.x_leaf(i))
        try:
            return self._x_cache[i]
        except KeyError:
            pass
        x = self._nearest_new_leaf()
        self._x_cache[i] = x
        return x

    def x_leaves(self) -> tuple:
        return tuple(self.x_leaf(i) for i in range(self.level + 2))

    def _nearest_new_leaf(self):
        taken = {self.x_leaf(i) for i in range(self.level + 1)}
        start = self.x_leaf(0)
        seen = {start}
        layer = [start]
        while layer:
            found = [v for v in layer if v not in taken and self.degree(v) == 1]
            if found:
                return min(found, key=addr_key)
            nxt = []
            for v in layer:
                for u in self.neighbors(v):
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            layer = nxt
        raise RuntimeError("tree has no further leaves")  # unreachable: T_n is infinite

    # -- materialisation ----------------------------------------------------------
    def ball_distances(self, center: Addr, r: int) -> dict:
        """Breadth-first distances from ``center`` out to radius ``r``."""
        self.check(center)
        dist = {center: 0}
        q = deque([center])
        while q:
            v = q.popleft()
            dv = dist[v]
            if dv == r:
                continue
            for u in self.neighbors(v):
                if u not in dist:
                    dist[u] = dv + 1
                    q.append(u)
        return dist

    def kind(self, a: Addr, dist: dict, r: int) -> str:
        nbrs = self.neighbors(a)
        if len(nbrs) == 1:
            return LEAF  # genuine, even when its neighbour lies outside (r = 0)
        if dist[a] == r and any(u not in dist for u in nbrs):
            return FRONTIER
        return INTERIOR

    def ball(self, center: Addr, r: int) -> FiniteTree:
        return ball_at(self, center, r)


def ball_at(spec: LevelSpec, center: Addr, r: int) -> FiniteTree:
    """Materialise the radius-``r`` ball around ``center`` as a marked tree."""
    dist = spec.ball_distances(center, r)
    handle = {a: i for i, a in enumerate(sorted(dist, key=addr_key))}
    labels = {i: render(a) for a, i in handle.items()}
    adj = {handle[a]: {handle[u] for u in spec.neighbors(a) if u in dist} for a in dist}
    kinds = {handle[a]: spec.kind(a, dist, r) for a in dist}
    return FiniteTree(labels, adj, kinds)


def _decompose(a):
    locs = []
    while isinstance(a, In):
        locs.append(a.local)
        a = a.host
    locs.reverse()
    return a.inner, locs


def _line_pos(loc):
    if isinstance(loc, (Z, Yp)):
        return 0
    return loc.j if loc.side == 1 else -loc.j


def _slide(g0, loc, e):
    """The shift along the line of the first gadget, by one step towards side 1 (e=+1)."""
    if isinstance(loc, C):
        t = _line_pos(loc) + e
        if t == 0:
            return Base(loc.inner)
        return In(g0, C(1 if t > 0 else 2, abs(t), loc.inner))
    if isinstance(loc, (Z, CZ)):
        t = _line_pos(loc) + e
        if t == 0:
            return In(g0, _Z)
        return In(g0, CZ(1 if t > 0 else 2, abs(t)))
    t = _line_pos(loc) + e
    if t == 0:
        return In(g0, _YP)
    return In(g0, R(1 if t > 0 else 2, abs(t)))


def build_tower(max_level: int, cls=LevelSpec) -> list:
    """Specs for levels ``0..max_level``, each the parent of the next."""
    specs = [cls(0)]
    for n in range(1, max_level + 1):
        specs.append(cls(n, specs[-1]))
    return specs


def limit_neighbors(tower, a: Addr, N: int) -> frozenset:
    """Neighbours of ``a`` in ``T_N``, after wrapping ``a`` up to level ``N``.

    A vertex of ``T_m`` keeps every neighbour at later levels and can gain
    only its gadget edge, so the result is monotone in ``N``.
    """
    m = addr_level(a)
    if m > N:
        raise InvalidAddress(f"{render(a)} first appears at level {m} > {N}")
    return tower[N].neighbors(wrap(a, N - m))
