"""Canonical forms and isomorphism witnesses for finite marked trees.

Rooted trees are canonised by the Aho-Hopcroft-Ullman scheme: a vertex's
code is its kind tag followed by the sorted codes of its children in
parentheses.  Interior vertices carry no tag, leaves ``L``, frontier
vertices ``F``, so a truncation artefact never matches a genuine leaf.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .tree_kernel import FRONTIER, LEAF, FiniteTree, RootedFiniteTree

__all__ = [
    "CanonicalCode", "IsoWitness", "IsoWord", "WordSyntaxError",
    "ahu_code", "centers", "tree_isomorphic", "verify_witness",
    "word_invert", "parse_word", "render_word",
]

CanonicalCode = str

_TAG = {LEAF: "L", FRONTIER: "F"}


def _children_map(t: FiniteTree, root):
    parent = {root: None}
    order = [root]
    for v in order:
        for u in t.adjacency(v):
            if u not in parent:
                parent[u] = v
                order.append(u)
    children = {v: [] for v in order}
    for v in order[1:]:
        children[parent[v]].append(v)
    return order, children


def _codes(t: FiniteTree, root):
    order, children = _children_map(t, root)
    code = {}
    for v in reversed(order):
        inner = "".join(sorted(code[c] for c in children[v]))
        code[v] = f"{_TAG.get(t.kind(v), '')}({inner})"
    return code, children


def ahu_code(rt: RootedFiniteTree) -> CanonicalCode:
    code, _ = _codes(rt.tree, rt.root)
    return code[rt.root]


def centers(t: FiniteTree) -> list:
    """The one or two centres of a tree, by repeated leaf stripping."""
    deg = {v: len(t.adjacency(v)) for v in t.vertices}
    remaining = len(deg)
    layer = [v for v, d in deg.items() if d <= 1]
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for u in t.adjacency(v):
                deg[u] -= 1
                if deg[u] == 1:
                    nxt.append(u)
        layer = nxt
    return sorted(layer, key=t.label)


@dataclass(frozen=True)
class IsoWitness:
    forward: dict
    source: FiniteTree
    target: FiniteTree


def _match(a, ca, cha, b, cb, chb, ra, rb):
    forward = {}
    stack = [(ra, rb)]
    while stack:
        u, v = stack.pop()
        forward[u] = v
        ka = sorted(cha[u], key=ca.__getitem__)
        kb = sorted(chb[v], key=cb.__getitem__)
        stack.extend(zip(ka, kb))
    return forward


def tree_isomorphic(a: FiniteTree, b: FiniteTree) -> Optional[IsoWitness]:
    """Mark-preserving unrooted isomorphism, or ``None``."""
    if len(a) != len(b):
        return None
    if len(a) == 0:
        return IsoWitness({}, a, b)
    ca_list, cb_list = centers(a), centers(b)
    if len(ca_list) != len(cb_list):
        return None
    ra = ca_list[0]
    code_a, ch_a = _codes(a, ra)
    for rb in cb_list:
        code_b, ch_b = _codes(b, rb)
        if code_a[ra] == code_b[rb]:
            return IsoWitness(_match(a, code_a, ch_a, b, code_b, ch_b, ra, rb), a, b)
    return None


def verify_witness(w: IsoWitness) -> bool:
    src, dst, f = w.source, w.target, w.forward
    if set(f) != set(src.vertices) or set(f.values()) != set(dst.vertices):
        return False
    if len(set(f.values())) != len(f):
        return False
    for v in src.vertices:
        if src.kind(v) != dst.kind(f[v]):
            return False
        if {f[u] for u in src.adjacency(v)} != set(dst.adjacency(f[v])):
            return False
    return True


# -- words over the generators ---------------------------------------------

IsoWord = tuple  # of (generator index, exponent +1/-1), applied right to left


class WordSyntaxError(ValueError):
    pass


def word_invert(w) -> IsoWord:
    return tuple((j, -e) for j, e in reversed(tuple(w)))


_LETTER = re.compile(r"^g(\d+)(\^-1|\^\+?1)?$")


def parse_word(text: str) -> IsoWord:
    """``"g1 g0^-1"`` -> ((1, 1), (0, -1)).  Letters apply right to left."""
    out = []
    for tok in text.split():
        m = _LETTER.match(tok)
        if not m:
            raise WordSyntaxError(f"bad letter {tok!r}: expected g<j> or g<j>^-1")
        out.append((int(m.group(1)), -1 if m.group(2) == "^-1" else 1))
    return tuple(out)


def render_word(w) -> str:
    return " ".join(f"g{j}" if e == 1 else f"g{j}^-1" for j, e in w)
