"""Shared test helpers: brute-force oracles and random instance generators.

Every oracle here is deliberately naive (exhaustive enumeration) so it is an
independent check on the library's optimized implementations.
"""

from __future__ import annotations

import itertools

import numpy as np

from starcount.graphs import Graph, Shape


def rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_graph(gen: np.random.Generator, n: int, p: float = 0.5) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if gen.random() < p]
    return Graph.from_edges(n, edges)


def brute_labelled_copies(shape: Shape, host: Graph) -> int:
    """Injective edge-preserving maps V(S) -> V(host), by full enumeration."""
    count = 0
    for perm in itertools.permutations(range(host.n), shape.s):
        if all(host.has_edge(perm[u], perm[v]) for u, v in shape.edges):
            count += 1
    return count


def brute_automorphisms(shape: Shape) -> int:
    edge_set = {tuple(sorted(e)) for e in shape.edges}
    count = 0
    for perm in itertools.permutations(range(shape.s)):
        if {tuple(sorted((perm[u], perm[v]))) for u, v in edge_set} == edge_set:
            count += 1
    return count


def brute_subset_copies(shape: Shape, host: Graph) -> int:
    """Edge subsets of the host isomorphic (as shapes) to `shape`."""
    key = shape.canonical_key
    edges = host.edges()
    count = 0
    for subset in itertools.combinations(edges, shape.edge_count):
        if Shape.from_edges(subset).canonical_key == key:
            count += 1
    return count


def all_graphs(n: int):
    """Every labelled graph on n vertices (use only for tiny n)."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for bits in range(1 << len(pairs)):
        yield Graph.from_edges(
            n, [e for k, e in enumerate(pairs) if bits >> k & 1])


def degree_preserving_swap(gen: np.random.Generator, graph: Graph,
                           attempts: int = 200) -> Graph | None:
    """One random double edge swap (preserves the degree profile), or None."""
    edges = graph.edges()
    for _ in range(attempts):
        e1, e2 = (edges[i] for i in gen.choice(len(edges), 2, replace=False))
        (a, b), (c, d) = e1, e2
        if gen.random() < 0.5:
            c, d = d, c
        if len({a, b, c, d}) < 4:
            continue
        if graph.has_edge(a, c) or graph.has_edge(b, d):
            continue
        new = [e for e in edges if e not in (e1, e2)]
        new += [tuple(sorted((a, c))), tuple(sorted((b, d)))]
        return Graph.from_edges(graph.n, new)
    return None
