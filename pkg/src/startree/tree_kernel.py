"""Finite labelled trees with leaf/frontier marks.

A :class:`FiniteTree` is immutable.  Vertices are integer handles; the
label string is the identity that survives regeneration.  Each vertex has
a kind: ``interior``, ``leaf`` (a genuine leaf of the tree being sampled)
or ``frontier`` (degree dropped because a ball cut it).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType

__all__ = [
    "INTERIOR", "LEAF", "FRONTIER", "KINDS",
    "FiniteTree", "RootedFiniteTree", "TreeBuilder", "TreeError",
    "degree", "leaves", "remove_leaf", "attach_sum", "ball",
    "export", "parse_json", "parse_edgelist",
]

INTERIOR = "interior"
LEAF = "leaf"
FRONTIER = "frontier"
KINDS = (INTERIOR, LEAF, FRONTIER)


class TreeError(ValueError):
    pass


class FiniteTree:
    """Immutable finite tree.  Build one with :class:`TreeBuilder`."""

    __slots__ = ("_label", "_adj", "_kind", "_by_label")

    def __init__(self, labels, adjacency, kinds):
        self._label = MappingProxyType(dict(labels))
        self._adj = MappingProxyType({v: frozenset(ns) for v, ns in adjacency.items()})
        self._kind = MappingProxyType(dict(kinds))
        self._by_label = MappingProxyType({lab: v for v, lab in self._label.items()})
        self._validate()

    def _validate(self):
        vs = set(self._label)
        if set(self._adj) != vs or set(self._kind) != vs:
            raise TreeError("labels, adjacency and kinds must cover the same vertices")
        if len(self._by_label) != len(vs):
            raise TreeError("labels must be unique")
        n_half_edges = 0
        for v, ns in self._adj.items():
            if v in ns:
                raise TreeError(f"self-loop at {self._label[v]}")
            for u in ns:
                if u not in vs or v not in self._adj[u]:
                    raise TreeError(f"asymmetric edge {self._label[v]}-{u}")
            n_half_edges += len(ns)
            if self._kind[v] not in KINDS:
                raise TreeError(f"bad kind {self._kind[v]!r}")
        if vs and n_half_edges // 2 != len(vs) - 1:
            raise TreeError("edge count must be |V| - 1")
        if vs:
            start = next(iter(vs))
            seen = {start}
            todo = [start]
            while todo:
                for u in self._adj[todo.pop()]:
                    if u not in seen:
                        seen.add(u)
                        todo.append(u)
            if len(seen) != len(vs):
                raise TreeError("tree must be connected")
        if len(vs) > 1:
            for v in vs:
                if len(self._adj[v]) == 1 and self._kind[v] == INTERIOR:
                    raise TreeError(f"degree-1 vertex {self._label[v]} marked interior")

    # -- read access -------------------------------------------------------
    @property
    def vertices(self):
        return frozenset(self._label)

    def __len__(self):
        return len(self._label)

    def __contains__(self, v):
        return v in self._label

    def __iter__(self):
        return iter(sorted(self._label, key=self._label.__getitem__))

    def label(self, v) -> str:
        return self._label[v]

    def kind(self, v) -> str:
        return self._kind[v]

    def adjacency(self, v) -> frozenset:
        try:
            return self._adj[v]
        except KeyError:
            raise TreeError(f"unknown vertex {v!r}") from None

    def vertex(self, label: str):
        try:
            return self._by_label[label]
        except KeyError:
            raise TreeError(f"no vertex labelled {label!r}") from None

    def has_label(self, label: str) -> bool:
        return label in self._by_label

    def edges(self):
        """Edges as sorted label pairs, sorted."""
        out = []
        for v, ns in self._adj.items():
            a = self._label[v]
            for u in ns:
                b = self._label[u]
                if a < b:
                    out.append((a, b))
        out.sort()
        return out

    def max_degree(self) -> int:
        return max((len(ns) for ns in self._adj.values()), default=0)

    def to_builder(self) -> "TreeBuilder":
        b = TreeBuilder()
        for v in self._label:
            b.add_vertex(self._label[v], self._kind[v])
        for a, c in self.edges():
            b.add_edge(a, c)
        return b

    def __eq__(self, other):
        if not isinstance(other, FiniteTree):
            return NotImplemented
        return self._signature() == other._signature()

    def __hash__(self):
        return hash(self._signature())

    def _signature(self):
        return (
            tuple(sorted((self._label[v], self._kind[v]) for v in self._label)),
            tuple(self.edges()),
        )

    def __repr__(self):
        return f"FiniteTree(|V|={len(self)}, |E|={max(len(self) - 1, 0)})"


@dataclass(frozen=True)
class RootedFiniteTree:
    tree: FiniteTree
    root: int

    def __post_init__(self):
        if self.root not in self.tree:
            raise TreeError("root must be a vertex of the tree")


@dataclass
class TreeBuilder:
    """Single-owner mutable builder keyed by label."""

    _ids: dict = field(default_factory=dict)
    _labels: dict = field(default_factory=dict)
    _adj: dict = field(default_factory=dict)
    _kinds: dict = field(default_factory=dict)

    def add_vertex(self, label: str, kind: str = INTERIOR) -> int:
        if label in self._ids:
            v = self._ids[label]
            self._kinds[v] = kind
            return v
        v = len(self._ids)
        self._ids[label] = v
        self._labels[v] = label
        self._adj[v] = set()
        self._kinds[v] = kind
        return v

    def add_edge(self, a: str, b: str):
        va, vb = self._ids[a], self._ids[b]
        self._adj[va].add(vb)
        self._adj[vb].add(va)

    def set_kind(self, label: str, kind: str):
        self._kinds[self._ids[label]] = kind

    def __contains__(self, label):
        return label in self._ids

    def build(self) -> FiniteTree:
        return FiniteTree(self._labels, self._adj, self._kinds)


def from_edges(edges, kinds=None, vertices=()):
    """Small convenience: build from label pairs; degree-1 vertices default to leaves."""
    b = TreeBuilder()
    for lab in vertices:
        b.add_vertex(lab)
    for a, c in edges:
        b.add_vertex(a)
        b.add_vertex(c)
    for a, c in edges:
        b.add_edge(a, c)
    kinds = dict(kinds or {})
    for lab, v in b._ids.items():
        if lab in kinds:
            b._kinds[v] = kinds[lab]
        elif len(b._adj[v]) == 1:
            b._kinds[v] = LEAF
    return b.build()


def degree(t: FiniteTree, v) -> int:
    return len(t.adjacency(v))


def leaves(t: FiniteTree) -> set:
    return {v for v in t.vertices if t.kind(v) == LEAF and len(t.adjacency(v)) == 1}


def remove_leaf(t: FiniteTree, x) -> FiniteTree:
    """Delete the genuine leaf ``x``.

    The neighbour becomes a leaf exactly when it had degree 2, so the leaf
    count drops by one or stays put.
    """
    if x not in t or t.kind(x) != LEAF or len(t.adjacency(x)) != 1:
        raise TreeError(f"{x!r} is not a genuine leaf")
    (nb,) = t.adjacency(x)
    labels = {v: t.label(v) for v in t.vertices if v != x}
    adj = {v: set(t.adjacency(v)) - {x} for v in labels}
    kinds = {v: t.kind(v) for v in labels}
    if len(adj[nb]) == 1 and kinds[nb] == INTERIOR:
        kinds[nb] = LEAF
    return FiniteTree(labels, adj, kinds)


def attach_sum(t: FiniteTree, W, s: RootedFiniteTree, tag: str = "") -> FiniteTree:
    """Glue a fresh copy of ``s`` at each vertex of ``W``, identifying roots.

    Copy vertices are relabelled ``<host label>/<copy label>`` (with an
    optional ``tag`` prefix) so they never collide with existing labels.
    """
    W = sorted(set(W), key=t.label)
    for w in W:
        if w not in t:
            raise TreeError(f"attachment point {w!r} not in tree")
    b = t.to_builder()
    st = s.tree
    for w in W:
        host = t.label(w)
        name = {s.root: host}
        for v in st:
            if v == s.root:
                continue
            lab = f"{tag}{host}/{st.label(v)}"
            while lab in b:
                lab = f"'{lab}"
            name[v] = lab
            b.add_vertex(lab, st.kind(v))
        for a, c in st.edges():
            b.add_edge(name[st.vertex(a)], name[st.vertex(c)])
        hv = b._ids[host]
        if len(b._adj[hv]) == 1 and b._kinds[hv] == INTERIOR:
            b.set_kind(host, LEAF)
        elif len(b._adj[hv]) > 1 and b._kinds[hv] == LEAF:
            b.set_kind(host, INTERIOR)
    return b.build()


def ball(t: FiniteTree, center, r: int) -> FiniteTree:
    """Induced subtree within distance ``r`` of ``center``.

    Vertices at distance exactly ``r`` that lost a neighbour become frontier;
    everything else keeps its mark, and genuine leaves always do.
    """
    if center not in t:
        raise TreeError(f"unknown vertex {center!r}")
    dist = {center: 0}
    q = deque([center])
    while q:
        v = q.popleft()
        if dist[v] == r:
            continue
        for u in t.adjacency(v):
            if u not in dist:
                dist[u] = dist[v] + 1
                q.append(u)
    labels = {v: t.label(v) for v in dist}
    adj = {v: {u for u in t.adjacency(v) if u in dist} for v in dist}
    kinds = {}
    for v in dist:
        cut = len(adj[v]) < len(t.adjacency(v))
        kinds[v] = FRONTIER if cut and t.kind(v) != LEAF else t.kind(v)
    return FiniteTree(labels, adj, kinds)


# -- export / parse ---------------------------------------------------------

_DOT_SHAPE = {FRONTIER: "none", LEAF: "point"}


def export(t: FiniteTree, fmt: str = "json") -> bytes:
    if fmt == "edgelist":
        body = "".join(f"{a}\t{b}\n" for a, b in t.edges())
        if len(t) == 1:
            body = f"{t.label(next(iter(t)))}\n"
        return body.encode("utf-8")
    if fmt == "json":
        doc = {
            "vertices": [{"label": t.label(v), "kind": t.kind(v)} for v in t],
            "edges": [list(e) for e in t.edges()],
        }
        return (json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")
    if fmt == "dot":
        lines = ["graph T {"]
        for v in t:
            shape = _DOT_SHAPE.get(t.kind(v))
            attr = f" [shape={shape}]" if shape else ""
            lines.append(f"  {json.dumps(t.label(v))}{attr};")
        for a, b in t.edges():
            lines.append(f"  {json.dumps(a)} -- {json.dumps(b)};")
        lines.append("}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown export format {fmt!r}")


def parse_json(data: bytes) -> FiniteTree:
    doc = json.loads(data.decode("utf-8"))
    b = TreeBuilder()
    for rec in doc["vertices"]:
        b.add_vertex(rec["label"], rec["kind"])
    for a, c in doc["edges"]:
        b.add_edge(a, c)
    return b.build()


def parse_edgelist(data: bytes) -> FiniteTree:
    """Inverse of the edgelist export.  Kinds are not stored: degree-1 vertices read back as leaves."""
    edges, lone = [], []
    for line in data.decode("utf-8").splitlines():
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) == 1:
            lone.append(parts[0])
        elif len(parts) == 2:
            edges.append((parts[0], parts[1]))
        else:
            raise TreeError(f"bad edgelist line {line!r}")
    return from_edges(edges, vertices=lone)
