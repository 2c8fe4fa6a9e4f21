"""Exact combinatorics of graphs and shapes.

Copy counting, automorphism groups, canonical forms, shape enumeration and
intersecting patterns (gluings of two shapes).  Everything here is pure and
uses arbitrary-precision integers; nothing is randomized.

Conventions:
  * a "shape" is an edge-induced graph: vertices 0..s-1, no isolated vertex
    (the empty shape, s = 0, is allowed and has exactly one copy everywhere);
  * copy counting is by injective edge-preserving maps (non-induced), so the
    number of copies of a shape with v vertices in the complete graph K_n is
    the falling factorial n_(v).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb  # noqa: F401  (re-exported for convenience in callers)

import numpy as np

from .errors import BudgetError

# Per-component cap for the canonicalization search.  Connected components of
# shapes with <= 8 edges have <= 9 vertices, so this is never hit in the
# supported regime; it guards against pathological inputs.
_CANON_VERTEX_CAP = 12
_CANON_PERM_CAP = 3_000_000


def falling_factorial(n: int, k: int) -> int:
    """n_(k) = n(n-1)...(n-k+1); 1 for k = 0; 0 for k > n."""
    if n < 0 or k < 0:
        raise ValueError("falling_factorial needs nonnegative arguments")
    if k > n:
        return 0
    out = 1
    for i in range(k):
        out *= n - i
    return out


# ---------------------------------------------------------------------------
# pair <-> linear index over the upper triangle of K_n
# ---------------------------------------------------------------------------

def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_to_index(n: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def index_to_pairs(n: int, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized inverse of pair_to_index. idx must be int64 in [0, C(n,2))."""
    idx = np.asarray(idx, dtype=np.int64)
    b = 2 * n - 1
    i = ((b - np.sqrt(b * b - 8.0 * idx)) / 2.0).astype(np.int64)
    # float rounding can be off by one near block boundaries
    off = i * (2 * n - i - 1) // 2
    too_big = off > idx
    i[too_big] -= 1
    off = i * (2 * n - i - 1) // 2
    nxt = (i + 1) * (2 * n - i - 2) // 2
    spill = idx >= nxt
    i[spill] += 1
    off = i * (2 * n - i - 1) // 2
    j = idx - off + i + 1
    return i, j


# ---------------------------------------------------------------------------
# Graph
# ---------------------------------------------------------------------------

class Graph:
    """Simple undirected graph on vertices 0..n-1.

    Edges are held as sorted linear indices into the upper triangle so large
    sampled graphs stay cheap; adjacency sets and degree arrays are derived
    lazily and cached.
    """

    __slots__ = ("n", "edge_index", "_degrees", "_adj", "_edge_set")

    def __init__(self, n: int, edge_index: np.ndarray):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        idx = np.asarray(edge_index, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= pair_count(n)):
            raise ValueError("edge index out of range")
        self.n = n
        self.edge_index = np.unique(idx)
        self._degrees = None
        self._adj = None
        self._edge_set = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        idx = []
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError("self-loop")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError("endpoint out of range")
            idx.append(pair_to_index(n, u, v))
        return cls(n, np.array(idx, dtype=np.int64))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.empty(0, dtype=np.int64))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, np.arange(pair_count(n), dtype=np.int64))

    # -- derived views ------------------------------------------------------

    @property
    def m(self) -> int:
        return int(self.edge_index.size)

    def edge_endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        return index_to_pairs(self.n, self.edge_index)

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            rows, cols = self.edge_endpoints()
            deg = np.bincount(rows, minlength=self.n) + np.bincount(cols, minlength=self.n)
            self._degrees = deg.astype(np.int64)
        return self._degrees

    @property
    def adjacency(self) -> list[set[int]]:
        if self._adj is None:
            adj: list[set[int]] = [set() for _ in range(self.n)]
            rows, cols = self.edge_endpoints()
            for u, v in zip(rows.tolist(), cols.tolist()):
                adj[u].add(v)
                adj[v].add(u)
            self._adj = adj
        return self._adj

    @property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        if self._edge_set is None:
            rows, cols = self.edge_endpoints()
            self._edge_set = frozenset(zip(rows.tolist(), cols.tolist()))
        return self._edge_set

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        lo, hi = (u, v) if u < v else (v, u)
        return (lo, hi) in self.edge_set

    def edges(self) -> list[tuple[int, int]]:
        rows, cols = self.edge_endpoints()
        return list(zip(rows.tolist(), cols.tolist()))

    def degree_profile(self) -> "DegreeProfile":
        return DegreeProfile.from_degrees(self.degrees.tolist())

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and np.array_equal(self.edge_index, other.edge_index)
        )

    def __hash__(self):
        return hash((self.n, self.edge_index.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# edge-list text format:  "n <count>" header, then one "u v" pair per line
# ---------------------------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    n = None
    edges = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ValueError("edge list must start with 'n <vertex_count>'")
            n = int(parts[1])
            continue
        if len(parts) != 2:
            raise ValueError(f"bad edge line: {raw!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise ValueError("empty edge-list input")
    return Graph.from_edges(n, edges)


def format_edge_list(graph: Graph) -> str:
    lines = [f"n {graph.n}"]
    lines += [f"{u} {v}" for u, v in graph.edges()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# DegreeProfile
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegreeProfile:
    """Multiset of vertex degrees; the only feature of H the star analytics read.

    Degrees may be non-integral for analytic (expected-value) profiles, e.g.
    a planted dense subgraph cell with expected degree (k-1)q.
    """

    degrees: tuple  # sorted descending
    v: int
    max_degree: float
    edge_count: float
    _mult: tuple | None = field(default=None, repr=False, compare=False)

    def multiplicities(self) -> tuple:
        """((degree, count), ...) descending by degree; lets the star
        analytics run in O(#distinct degrees) instead of O(v)."""
        if self._mult is None:
            mult = tuple((d, len(list(g)))
                         for d, g in itertools.groupby(self.degrees))
            object.__setattr__(self, "_mult", mult)
        return self._mult

    @classmethod
    def from_degrees(cls, degrees) -> "DegreeProfile":
        degs = tuple(sorted(degrees, reverse=True))
        total = sum(degs)
        if degs and all(float(d).is_integer() for d in degs):
            degs = tuple(int(d) for d in degs)
            if sum(degs) % 2 != 0:
                raise ValueError("integer degree profile must have even sum")
        if any(d < 0 for d in degs):
            raise ValueError("negative degree")
        return cls(
            degrees=degs,
            v=len(degs),
            max_degree=max(degs) if degs else 0,
            edge_count=total / 2,
        )

    @classmethod
    def flat(cls, v: int, degree) -> "DegreeProfile":
        """v vertices of equal (possibly fractional, analytic) degree."""
        return cls(degrees=tuple([degree] * v), v=v,
                   max_degree=degree if v else 0, edge_count=v * degree / 2,
                   _mult=((degree, v),) if v else ())


# ---------------------------------------------------------------------------
# canonical forms
# ---------------------------------------------------------------------------

def _refine_classes(vertices: list[int], adj: dict[int, set[int]]) -> list[list[int]]:
    """Iterated neighborhood refinement; returns classes in invariant order."""
    sig = {v: (len(adj[v]),) for v in vertices}
    n_classes = 0
    while True:
        ranks = {s: r for r, s in enumerate(sorted(set(sig.values())))}
        if len(ranks) == n_classes:
            break
        n_classes = len(ranks)
        sig = {
            v: (ranks[sig[v]], tuple(sorted(ranks[sig[u]] for u in adj[v])))
            for v in vertices
        }
    classes: dict = {}
    for v in vertices:
        classes.setdefault(sig[v], []).append(v)
    return [classes[s] for s in sorted(classes)]


def _class_assignments(classes: list[list[int]]):
    """Yield dict vertex -> canonical position, classes filling position blocks."""
    blocks = []
    start = 0
    for cl in classes:
        blocks.append((cl, start))
        start += len(cl)
    for perms in itertools.product(*[itertools.permutations(cl) for cl, _ in blocks]):
        pos = {}
        for (cl, start), perm in zip(blocks, perms):
            for off, v in enumerate(perm):
                pos[v] = start + off
        yield pos


def _component_canonical(vertices: list[int], edges: list[tuple[int, int]]):
    """Canonical edge tuple (relabelled to 0..nv-1) and |Aut| of one component."""
    nv = len(vertices)
    if nv > _CANON_VERTEX_CAP:
        raise BudgetError(f"component with {nv} vertices exceeds canonicalization cap")
    adj = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    classes = _refine_classes(vertices, adj)
    total = 1
    for cl in classes:
        total *= falling_factorial(len(cl), len(cl))
        if total > _CANON_PERM_CAP:
            raise BudgetError("canonicalization permutation budget exceeded")
    best = None
    for pos in _class_assignments(classes):
        enc = tuple(sorted(
            (pos[u], pos[v]) if pos[u] < pos[v] else (pos[v], pos[u])
            for u, v in edges
        ))
        if best is None or enc < best:
            best = enc
    # automorphisms of the canonical representative (refinement classes are
    # isomorphism-invariant, so every automorphism respects them)
    canon_adj = {i: set() for i in range(nv)}
    for u, v in best:
        canon_adj[u].add(v)
        canon_adj[v].add(u)
    canon_classes = _refine_classes(list(range(nv)), canon_adj)
    best_set = set(best)
    aut = 0
    for pos in _class_assignments(canon_classes):
        ok = True
        for u, v in best:
            a, b = pos[u], pos[v]
            if ((a, b) if a < b else (b, a)) not in best_set:
                ok = False
                break
        if ok:
            aut += 1
    return nv, best, aut


def _canonicalize(edges) -> tuple[int, tuple, int]:
    """(vertex count, canonical global edge tuple, |Aut|) of an edge set.

    Isolated vertices are not representable in an edge set and are dropped,
    matching the edge-induced reading of shapes.
    """
    edge_list = []
    seen = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise ValueError("self-loop in edge set")
        key = (u, v) if u < v else (v, u)
        if key not in seen:
            seen.add(key)
            edge_list.append(key)
    if not edge_list:
        return 0, (), 1
    # connected components
    adj: dict[int, set[int]] = {}
    for u, v in edge_list:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    unvisited = set(adj)
    comps = []
    while unvisited:
        start = unvisited.pop()
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        unvisited -= comp
        comp_edges = [e for e in edge_list if e[0] in comp]
        comps.append(_component_canonical(sorted(comp), comp_edges))
    comps.sort(key=lambda c: (len(c[1]), c[0], c[1]))
    global_edges = []
    aut = 1
    offset = 0
    run = 0
    prev = None
    for nv, enc, a in comps:
        for u, v in enc:
            global_edges.append((u + offset, v + offset))
        offset += nv
        aut *= a
        if (nv, enc) == prev:
            run += 1
        else:
            aut *= falling_factorial(run, run)
            run = 1
            prev = (nv, enc)
    aut *= falling_factorial(run, run)
    return offset, tuple(sorted(global_edges)), aut


def canonical_form(edges_or_shape) -> bytes:
    """Deterministic canonical key; equal keys iff isomorphic (isolated
    vertices dropped)."""
    if isinstance(edges_or_shape, Shape):
        return edges_or_shape.canonical_key
    nv, enc, _ = _canonicalize(edges_or_shape)
    return _key_bytes(nv, enc)


def _key_bytes(nv: int, enc: tuple) -> bytes:
    body = ";".join(f"{u}-{v}" for u, v in enc)
    return f"{nv}|{body}".encode("ascii")


def _key_parse(key: bytes) -> tuple[int, list[tuple[int, int]]]:
    head, _, body = key.decode("ascii").partition("|")
    edges = []
    if body:
        for part in body.split(";"):
            u, _, v = part.partition("-")
            edges.append((int(u), int(v)))
    return int(head), edges


# ---------------------------------------------------------------------------
# Shape
# ---------------------------------------------------------------------------

class Shape:
    """Isomorphism-class representative of an edge-induced graph."""

    __slots__ = ("s", "edges", "_canon")

    def __init__(self, s: int, edges):
        edges = tuple(sorted(
            (int(u), int(v)) if u < v else (int(v), int(u)) for u, v in edges
        ))
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edges")
        touched = set()
        for u, v in edges:
            if u == v:
                raise ValueError("self-loop")
            if not (0 <= u < s and 0 <= v < s):
                raise ValueError("endpoint out of range")
            touched.add(u)
            touched.add(v)
        if len(touched) != s:
            raise ValueError("shape has an isolated vertex")
        self.s = s
        self.edges = edges
        self._canon = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_edges(cls, edges) -> "Shape":
        """Build a shape from an arbitrary edge set, relabelling the incident
        vertices to 0..s-1 (isolated vertices are dropped by construction)."""
        verts = sorted({v for e in edges for v in e})
        remap = {v: i for i, v in enumerate(verts)}
        return cls(len(verts), [(remap[u], remap[v]) for u, v in edges])

    @classmethod
    def from_graph(cls, graph: Graph) -> "Shape":
        return cls.from_edges(graph.edges())

    @classmethod
    def from_key(cls, key: bytes) -> "Shape":
        nv, edges = _key_parse(key)
        return cls(nv, edges)

    @classmethod
    def empty(cls) -> "Shape":
        return cls(0, [])

    @classmethod
    def edge(cls) -> "Shape":
        return cls(2, [(0, 1)])

    @classmethod
    def star(cls, t: int) -> "Shape":
        if t < 1:
            raise ValueError("star needs t >= 1")
        return cls(t + 1, [(0, i) for i in range(1, t + 1)])

    @classmethod
    def clique(cls, k: int) -> "Shape":
        if k < 2:
            raise ValueError("clique needs k >= 2")
        return cls(k, list(itertools.combinations(range(k), 2)))

    @classmethod
    def path(cls, length: int) -> "Shape":
        if length < 1:
            raise ValueError("path needs >= 1 edge")
        return cls(length + 1, [(i, i + 1) for i in range(length)])

    @classmethod
    def cycle(cls, length: int) -> "Shape":
        if length < 3:
            raise ValueError("cycle needs >= 3 edges")
        return cls(length, [(i, (i + 1) % length) for i in range(length)])

    @classmethod
    def matching(cls, k: int) -> "Shape":
        if k < 1:
            raise ValueError("matching needs >= 1 pair")
        return cls(2 * k, [(2 * i, 2 * i + 1) for i in range(k)])

    @classmethod
    def biclique(cls, a: int, b: int) -> "Shape":
        if a < 1 or b < 1:
            raise ValueError("biclique needs a, b >= 1")
        return cls(a + b, [(i, a + j) for i in range(a) for j in range(b)])

    # -- derived ------------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def _canonical(self):
        if self._canon is None:
            self._canon = _canonicalize(self.edges)
        return self._canon

    @property
    def canonical_key(self) -> bytes:
        nv, enc, _ = self._canonical()
        return _key_bytes(nv, enc)

    @property
    def aut_count(self) -> int:
        return self._canonical()[2]

    def as_graph(self) -> Graph:
        return Graph.from_edges(self.s, self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.s
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def star_order(self) -> int | None:
        """t if this shape is the star K_{1,t} (K_2 counts as t = 1), else None."""
        if self.s < 2 or self.edge_count != self.s - 1:
            return None
        deg = sorted(self.degrees())
        t = self.s - 1
        if deg[:-1] == [1] * t and deg[-1] == t:
            return t
        return None

    def __eq__(self, other):
        return isinstance(other, Shape) and self.s == other.s and self.edges == other.edges

    def __hash__(self):
        return hash((self.s, self.edges))

    def __repr__(self):
        return f"Shape(s={self.s}, edges={list(self.edges)})"


def count_in_complete(shape: Shape, n: int) -> int:
    """M_S = number of copies of the shape in K_n = n_(|V(S)|)."""
    return falling_factorial(n, shape.s)


def automorphism_count(shape: Shape) -> int:
    return shape.aut_count


# ---------------------------------------------------------------------------
# copy counting
# ---------------------------------------------------------------------------

def _search_order(shape: Shape) -> list[tuple[int, list[int], int]]:
    """Shape vertices in a connectivity-friendly order.

    Returns (vertex, earlier neighbours, degree) triples: within a component
    a BFS from a max-degree vertex, so each vertex after the first has at
    least one already-placed neighbour.
    """
    deg = shape.degrees()
    adj = [set() for _ in range(shape.s)]
    for u, v in shape.edges:
        adj[u].add(v)
        adj[v].add(u)
    order: list[int] = []
    placed: set[int] = set()
    remaining = set(range(shape.s))
    while remaining:
        start = max(remaining, key=lambda v: deg[v])
        queue = [start]
        remaining.discard(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            placed.add(v)
            nxt = sorted(adj[v] & remaining, key=lambda u: -deg[u])
            for u in nxt:
                remaining.discard(u)
                queue.append(u)
    placed_before: set[int] = set()
    out = []
    for v in order:
        out.append((v, [u for u in adj[v] if u in placed_before], deg[v]))
        placed_before.add(v)
    return out


def count_labelled_copies(shape: Shape, host) -> int:
    """M_{S,G}: injective maps from shape vertices to host vertices carrying
    every shape edge to a host edge.  Exact integer, backtracking search."""
    if isinstance(host, Shape):
        host = host.as_graph()
    if shape.s > host.n:
        return 0
    if shape.s == 0:
        return 1
    order = _search_order(shape)
    host_adj = host.adjacency
    host_deg = host.degrees
    n = host.n
    image: dict[int, int] = {}
    used: set[int] = set()

    def rec(depth: int) -> int:
        if depth == len(order):
            return 1
        v, earlier, dv = order[depth]
        if earlier:
            cands = set(host_adj[image[earlier[0]]])
            for u in earlier[1:]:
                cands &= host_adj[image[u]]
            cands -= used
        else:
            cands = {c for c in range(n) if c not in used}
        total = 0
        for c in cands:
            if host_deg[c] < dv:
                continue
            image[v] = c
            used.add(c)
            total += rec(depth + 1)
            used.discard(c)
        return total

    return rec(0)


def star_copy_count(profile_or_graph, t: int) -> int:
    """M_{K_{1,t},H} = sum over vertices of (d_v)_(t), from the degree profile."""
    if isinstance(profile_or_graph, Graph):
        degrees = profile_or_graph.degrees.tolist()
    elif isinstance(profile_or_graph, DegreeProfile):
        degrees = profile_or_graph.degrees
    else:
        degrees = list(profile_or_graph)
    return sum(falling_factorial(int(d), t) for d in degrees)


# ---------------------------------------------------------------------------
# shape enumeration
# ---------------------------------------------------------------------------

MAX_ENUM_EDGES = 8


def enumerate_shapes(max_edges: int) -> list[Shape]:
    """All shapes with 1..max_edges edges up to isomorphism, disconnected
    shapes included, sorted by (edge count, canonical key).

    Grown by adding one edge at a time to smaller shapes (every shape with
    m+1 edges contains an m-edge sub-shape, so the growth is complete),
    dedup by canonical key.
    """
    if not (1 <= max_edges <= MAX_ENUM_EDGES):
        raise BudgetError(f"enumerate_shapes supports 1..{MAX_ENUM_EDGES} edges")
    levels: list[dict[bytes, Shape]] = [{Shape.edge().canonical_key: Shape.edge()}]
    while len(levels) < max_edges:
        nxt: dict[bytes, Shape] = {}
        for shape in levels[-1].values():
            s = shape.s
            existing = set(shape.edges)
            candidates = [
                (u, v) for u, v in itertools.combinations(range(s), 2)
                if (u, v) not in existing
            ]
            candidates += [(u, s) for u in range(s)]          # one new vertex
            candidates += [(s, s + 1)]                        # fresh disjoint edge
            for e in candidates:
                grown = Shape.from_edges(list(shape.edges) + [e])
                key = grown.canonical_key
                if key not in nxt:
                    nxt[key] = grown
        levels.append(nxt)
    out: list[Shape] = []
    for level in levels:
        out.extend(level[k] for k in sorted(level))
    return out


# ---------------------------------------------------------------------------
# intersecting patterns
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntersectionPattern:
    """One gluing of two shapes: a bijection between equal-size vertex subsets.

    Right-shape vertices are relabelled into the union: glued vertices take
    their left partner's label, the rest follow after the left block.
    """

    left: Shape
    right: Shape
    gluing: tuple  # ((left_vertex, right_vertex), ...) sorted by left vertex
    union_edges: tuple = field(compare=False)
    symdiff_edges: tuple = field(compare=False)

    @property
    def union_shape(self) -> Shape:
        return Shape.from_edges(self.union_edges) if self.union_edges else Shape.empty()

    @property
    def symdiff_shape(self) -> Shape:
        return Shape.from_edges(self.symdiff_edges) if self.symdiff_edges else Shape.empty()

    @property
    def union_vertex_count(self) -> int:
        return self.left.s + self.right.s - len(self.gluing)

    @property
    def symdiff_vertex_count(self) -> int:
        return len({v for e in self.symdiff_edges for v in e})

    @property
    def symdiff_edge_count(self) -> int:
        return len(self.symdiff_edges)


def _build_pattern(left: Shape, right: Shape, gluing) -> IntersectionPattern:
    remap = {rv: lv for lv, rv in gluing}
    nxt = left.s
    for rv in range(right.s):
        if rv not in remap:
            remap[rv] = nxt
            nxt += 1
    left_edges = set(left.edges)
    right_edges = set()
    for u, v in right.edges:
        a, b = remap[u], remap[v]
        right_edges.add((a, b) if a < b else (b, a))
    union = tuple(sorted(left_edges | right_edges))
    symdiff = tuple(sorted(left_edges ^ right_edges))
    return IntersectionPattern(left, right, tuple(sorted(gluing)), union, symdiff)


def enumerate_patterns(left: Shape, right: Shape) -> list[IntersectionPattern]:
    """All gluings: for each k, each pair of k-subsets, each bijection.
    Count equals sum_k C(s1,k) C(s2,k) k!."""
    out = []
    for k in range(0, min(left.s, right.s) + 1):
        for lsub in itertools.combinations(range(left.s), k):
            for rsub in itertools.combinations(range(right.s), k):
                for perm in itertools.permutations(rsub):
                    gluing = tuple(zip(lsub, perm))
                    out.append(_build_pattern(left, right, gluing))
    return out


def pattern_shapes(pattern: IntersectionPattern):
    """Union shape, symmetric-difference shape and the vertex/edge counts the
    intersection-ratio diagnostics use."""
    counts = {
        "union_vertex_count": pattern.union_vertex_count,
        "symdiff_vertex_count": pattern.symdiff_vertex_count,
        "symdiff_edge_count": pattern.symdiff_edge_count,
    }
    return pattern.union_shape, pattern.symdiff_shape, counts
