"""Exhaustive small-tree enumeration and brute-force oracles for the tests."""

import itertools
import random

import networkx as nx

from startree.tree_kernel import FRONTIER, LEAF, INTERIOR, FiniteTree


def unlabeled_trees(n):
    """One representative edge list per isomorphism class of trees on n vertices."""
    if n == 1:
        return [[]]
    return [sorted(g.edges()) for g in nx.nonisomorphic_trees(n)]


def all_trees(max_n):
    for n in range(1, max_n + 1):
        for edges in unlabeled_trees(n):
            yield n, edges


def make_tree(n, edges, kinds=None, perm=None, prefix="v"):
    """FiniteTree on vertices 0..n-1; degree-1 vertices default to leaves."""
    perm = perm or list(range(n))
    adj = {i: set() for i in range(n)}
    for a, b in edges:
        adj[perm[a]].add(perm[b])
        adj[perm[b]].add(perm[a])
    kinds = kinds or {}
    kind = {}
    for i in range(n):
        orig = perm.index(i)
        kind[i] = kinds.get(orig, LEAF if len(adj[i]) == 1 else INTERIOR)
    return FiniteTree({i: f"{prefix}{i}" for i in range(n)}, adj, kind)


def shuffled(n, edges, rng, kinds=None, prefix="v"):
    perm = list(range(n))
    rng.shuffle(perm)
    return make_tree(n, edges, kinds, perm, prefix)


def brute_isomorphic(a: FiniteTree, b: FiniteTree) -> bool:
    """Try every bijection that respects degree and kind classes."""
    if len(a) != len(b):
        return False
    sig_a = {v: (len(a.adjacency(v)), a.kind(v)) for v in a.vertices}
    sig_b = {v: (len(b.adjacency(v)), b.kind(v)) for v in b.vertices}
    classes = sorted(set(sig_a.values()))
    if sorted(sig_a.values()) != sorted(sig_b.values()):
        return False
    groups_a = [[v for v in sorted(a.vertices) if sig_a[v] == c] for c in classes]
    groups_b = [[v for v in sorted(b.vertices) if sig_b[v] == c] for c in classes]
    edges_a = [(a.vertex(x), a.vertex(y)) for x, y in a.edges()]
    edges_b = {frozenset((b.vertex(x), b.vertex(y))) for x, y in b.edges()}
    for choice in itertools.product(*(itertools.permutations(g) for g in groups_b)):
        f = {}
        for ga, gb in zip(groups_a, choice):
            f.update(zip(ga, gb))
        if all(frozenset((f[x], f[y])) in edges_b for x, y in edges_a):
            return True
    return False


def brute_rooted_isomorphic(a: FiniteTree, ra, b: FiniteTree, rb) -> bool:
    if len(a) != len(b) or a.kind(ra) != b.kind(rb):
        return False
    verts_a = [v for v in sorted(a.vertices) if v != ra]
    edges_b = {frozenset((b.vertex(x), b.vertex(y))) for x, y in b.edges()}
    others_b = [v for v in sorted(b.vertices) if v != rb]
    for perm in itertools.permutations(others_b):
        f = dict(zip(verts_a, perm))
        f[ra] = rb
        if any(a.kind(v) != b.kind(f[v]) for v in verts_a):
            continue
        if all(frozenset((f[a.vertex(x)], f[a.vertex(y)])) in edges_b for x, y in a.edges()):
            return True
    return False


def leaf_marking_variants(n, edges):
    """Every assignment of leaf/frontier to the degree-1 vertices."""
    deg = [0] * n
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    ends = [i for i in range(n) if deg[i] == 1]
    for marks in itertools.product((LEAF, FRONTIER), repeat=len(ends)):
        yield dict(zip(ends, marks))


def random_tree(rng: random.Random, n):
    """Random labelled tree via a Pruefer sequence."""
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    seq = [rng.randrange(n) for _ in range(n - 2)]
    return list(nx.from_prufer_sequence(seq).edges())
