"""Symbolic vertex addresses.

Level 0 vertices are ``RayV(k)`` (the doubly infinite ray) and ``LeafV(k)``
(pendant leaves at even non-negative ray positions).  A vertex of level
``n + 1`` is either ``Base(a)`` for a level-``n`` vertex ``a`` or
``In(host, local)``, a vertex of the gadget hanging at ``host``.

Rendering grammar (round-trips through :func:`parse_addr`)::

    ray(k)  leaf(k)  base(<addr>)
    in(h=<addr>;z)  in(h=<addr>;yp)  in(h=<addr>;r(s,j))
    in(h=<addr>;cz(s,j))  in(h=<addr>;c(s,j,<addr>))
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

__all__ = [
    "RayV", "LeafV", "Base", "In", "Z", "Yp", "R", "CZ", "C",
    "Addr", "GadgetLocal", "AddrParseError",
    "render", "parse_addr", "addr_key", "addr_level", "wrap", "unwrap",
]


class AddrParseError(ValueError):
    """Raised for address strings outside the rendering grammar."""

    def __init__(self, text, pos, rule):
        self.text = text
        self.pos = pos
        self.rule = rule
        super().__init__(f"cannot parse address {text!r} at offset {pos}: expected {rule}")


@dataclass(frozen=True, slots=True)
class RayV:
    k: int

    def __str__(self):
        return render(self)


@dataclass(frozen=True, slots=True)
class LeafV:
    k: int

    def __post_init__(self):
        if self.k < 0 or self.k % 2:
            raise ValueError(f"leaf({self.k}): leaves hang only at even non-negative ray vertices")

    def __str__(self):
        return render(self)


@dataclass(frozen=True, slots=True)
class Base:
    inner: "Addr"

    def __str__(self):
        return render(self)


@dataclass(frozen=True, slots=True)
class Z:
    """Centre of the path joining a host to its gadget."""


@dataclass(frozen=True, slots=True)
class Yp:
    """Far end of that path; the crossing point of the line R."""


@dataclass(frozen=True, slots=True)
class R:
    side: int
    j: int

    def __post_init__(self):
        _check_side(self.side, self.j)


@dataclass(frozen=True, slots=True)
class CZ:
    side: int
    j: int

    def __post_init__(self):
        _check_side(self.side, self.j)


@dataclass(frozen=True, slots=True)
class C:
    side: int
    j: int
    inner: "Addr"

    def __post_init__(self):
        _check_side(self.side, self.j)


GadgetLocal = Union[Z, Yp, R, CZ, C]


@dataclass(frozen=True, slots=True)
class In:
    host: "Addr"
    local: GadgetLocal

    def __str__(self):
        return render(self)


Addr = Union[RayV, LeafV, Base, In]

_Z = Z()
_YP = Yp()


def _check_side(side, j):
    if side not in (1, 2):
        raise ValueError(f"side must be 1 or 2, got {side}")
    if j < 1:
        raise ValueError(f"R-position must be >= 1, got {j}")


def addr_level(a: Addr) -> int:
    """Number of construction levels the address needs (0 for ray/leaf)."""
    depth = 0
    while True:
        if isinstance(a, (RayV, LeafV)):
            return depth
        if isinstance(a, Base):
            depth += 1
            a = a.inner
        else:
            a = a.host


def wrap(a: Addr, times: int = 1) -> Addr:
    for _ in range(times):
        a = Base(a)
    return a


def unwrap(a: Addr) -> Addr:
    """Strip every outer ``Base`` wrapper."""
    while isinstance(a, Base):
        a = a.inner
    return a


def render(a) -> str:
    if isinstance(a, RayV):
        return f"ray({a.k})"
    if isinstance(a, LeafV):
        return f"leaf({a.k})"
    if isinstance(a, Base):
        return f"base({render(a.inner)})"
    if isinstance(a, In):
        return f"in(h={render(a.host)};{_render_local(a.local)})"
    raise TypeError(f"not an address: {a!r}")


def _render_local(loc) -> str:
    if isinstance(loc, Z):
        return "z"
    if isinstance(loc, Yp):
        return "yp"
    if isinstance(loc, R):
        return f"r({loc.side},{loc.j})"
    if isinstance(loc, CZ):
        return f"cz({loc.side},{loc.j})"
    if isinstance(loc, C):
        return f"c({loc.side},{loc.j},{render(loc.inner)})"
    raise TypeError(f"not a gadget-local coordinate: {loc!r}")


def addr_key(a):
    """Structural sort key: Base < In, RayV < LeafV, then indices, recursively."""
    if isinstance(a, RayV):
        return (0, a.k)
    if isinstance(a, LeafV):
        return (1, a.k)
    if isinstance(a, Base):
        return (0, addr_key(a.inner))
    if isinstance(a, In):
        return (1, addr_key(a.host), _local_key(a.local))
    raise TypeError(f"not an address: {a!r}")


def _local_key(loc):
    if isinstance(loc, Z):
        return (0,)
    if isinstance(loc, Yp):
        return (1,)
    if isinstance(loc, R):
        return (2, loc.side, loc.j)
    if isinstance(loc, CZ):
        return (3, loc.side, loc.j)
    return (4, loc.side, loc.j, addr_key(loc.inner))


_INT = re.compile(r"-?\d+")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def fail(self, rule):
        raise AddrParseError(self.text, self.pos, rule)

    def eat(self, token, rule=None):
        if not self.text.startswith(token, self.pos):
            self.fail(rule or repr(token))
        self.pos += len(token)

    def integer(self):
        m = _INT.match(self.text, self.pos)
        if not m:
            self.fail("integer")
        self.pos = m.end()
        return int(m.group())

    def addr(self):
        t = self.text
        for head in ("ray(", "leaf("):
            if t.startswith(head, self.pos):
                self.pos += len(head)
                k = self.integer()
                self.eat(")")
                if head == "ray(":
                    return RayV(k)
                if k < 0 or k % 2:
                    self.fail("leaf(k) with k even and >= 0")
                return LeafV(k)
        if t.startswith("base(", self.pos):
            self.pos += 5
            inner = self.addr()
            self.eat(")")
            return Base(inner)
        if t.startswith("in(h=", self.pos):
            self.pos += 5
            host = self.addr()
            self.eat(";")
            loc = self.local()
            self.eat(")")
            return In(host, loc)
        self.fail("one of ray(k) | leaf(k) | base(<addr>) | in(h=<addr>;<local>)")

    def local(self):
        t = self.text
        if t.startswith("yp", self.pos):
            self.pos += 2
            return _YP
        if t.startswith("z", self.pos):
            self.pos += 1
            return _Z
        for head, cls in (("r(", R), ("cz(", CZ), ("c(", C)):
            if t.startswith(head, self.pos):
                self.pos += len(head)
                s = self.integer()
                self.eat(",")
                j = self.integer()
                if s not in (1, 2) or j < 1:
                    self.fail("side in {1,2} and position >= 1")
                if cls is C:
                    self.eat(",")
                    inner = self.addr()
                    self.eat(")")
                    return C(s, j, inner)
                self.eat(")")
                return cls(s, j)
        self.fail("one of z | yp | r(s,j) | cz(s,j) | c(s,j,<addr>)")


def parse_addr(text: str) -> Addr:
    p = _Parser(text.strip())
    a = p.addr()
    if p.pos != len(p.text):
        p.fail("end of input")
    return a
