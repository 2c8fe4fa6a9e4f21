"""Test-statistic evaluation on concrete graphs.

Walsh-Fourier characters chi_S, signed shape counts f_S (with a degree-
sequence fast path for stars and a trace fast path for triangles), and the
two counterexample statistics: unsigned k-clique counts and the +-1 closed-
path trace.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetError, ConfigError
from .graphs import Graph, Shape, falling_factorial

DEFAULT_WORK_LIMIT = 10**9
_WORK_LIMIT_ENV = "STARCOUNT_WORK_LIMIT"


def default_work_limit() -> int:
    raw = os.environ.get(_WORK_LIMIT_ENV)
    return int(raw) if raw else DEFAULT_WORK_LIMIT


@dataclass(frozen=True)
class EdgeWeighting:
    """Character weights: a for a present edge, b for an absent pair."""

    a: float
    b: float

    @classmethod
    def from_p(cls, p: float) -> "EdgeWeighting":
        if not (0 < p < 1):
            raise ValueError("p must lie in (0, 1)")
        return cls(a=math.sqrt((1 - p) / p), b=-math.sqrt(p / (1 - p)))


def chi(edge_set, graph: Graph, p: float) -> float:
    """chi_S(G): product over pairs in S of the +-sqrt weight; chi_empty = 1."""
    w = EdgeWeighting.from_p(p)
    out = 1.0
    for u, v in edge_set:
        out *= w.a if graph.has_edge(u, v) else w.b
    return out


def weight_matrix(graph: Graph, p: float) -> np.ndarray:
    """n x n matrix of pair weights (a on edges, b off edges, 0 diagonal)."""
    w = EdgeWeighting.from_p(p)
    W = np.full((graph.n, graph.n), w.b)
    np.fill_diagonal(W, 0.0)
    rows, cols = graph.edge_endpoints()
    W[rows, cols] = w.a
    W[cols, rows] = w.a
    return W


# ---------------------------------------------------------------------------
# signed shape counts
# ---------------------------------------------------------------------------

def signed_count_naive(shape: Shape, graph: Graph, p: float,
                       work_limit: int | None = None) -> float:
    """f_S(G) as the literal sum over injective maps, divided by |Aut(S)|.

    Reference implementation: O(n^{|V(S)|}), guarded by a work limit.
    """
    n = graph.n
    if shape.s > n:
        raise ValueError("shape larger than graph")
    limit = work_limit if work_limit is not None else default_work_limit()
    if n ** shape.s > limit:
        raise BudgetError(f"naive signed count needs n^{shape.s} = {n**shape.s} steps")
    if shape.s == 0:
        return 1.0
    W = weight_matrix(graph, p)
    total = 0.0
    edges = shape.edges
    for phi in itertools.permutations(range(n), shape.s):
        prod = 1.0
        for u, v in edges:
            prod *= W[phi[u], phi[v]]
        total += prod
    return total / shape.aut_count


def signed_star_count(t: int, graph: Graph, p: float) -> float:
    """f_{K_{1,t}}(G) from the degree sequence.

    Per center v the leaf sets contribute the elementary symmetric polynomial
    of its n-1 pair weights, i.e. sum_j C(d_v,j) C(n-1-d_v,t-j) a^j b^{t-j}.
    With beta = (1-p)/p this is beta^{-t/2} * P_v(beta) for a polynomial P_v
    with exact integer coefficients, so the alternating sum is accumulated in
    exact rational arithmetic and converted to float once at the end.
    t = 1 halves the (center, leaf) enumeration: both endpoints of a single
    edge act as the center, every other t determines the center uniquely.
    """
    n = graph.n
    if not (1 <= t <= n - 1):
        raise ValueError("star order must satisfy 1 <= t <= n-1")
    if not (0 < p < 1):
        raise ValueError("p must lie in (0, 1)")
    beta = Fraction(1 - p) / Fraction(p)
    counts = np.bincount(graph.degrees, minlength=n)
    total = Fraction(0)
    for d in np.flatnonzero(counts):
        d = int(d)
        poly = Fraction(0)
        for j in range(max(0, t - (n - 1 - d)), min(d, t) + 1):
            coef = math.comb(d, j) * math.comb(n - 1 - d, t - j)
            if (t - j) % 2:
                coef = -coef
            poly += coef * beta**j
        total += int(counts[d]) * poly
    total *= beta ** -(t // 2)
    value = float(total)
    if t % 2:
        value /= math.sqrt(float(beta))
    if t == 1:
        value /= 2.0
    return value


def _triangle_signed_count(graph: Graph, p: float) -> float:
    # tr(W^3)/6: the zero diagonal makes consecutive-distinct closed 3-walks
    # exactly the distinct ordered triples; 6 orderings per triangle subset.
    W = weight_matrix(graph, p)
    return float(np.trace(W @ W @ W)) / 6.0


def signed_count(shape: Shape, graph: Graph, p: float,
                 work_limit: int | None = None) -> float:
    """f_S(G) with closed-form fast paths where available (stars, triangle);
    falls back to the naive sum."""
    t = shape.star_order()
    if t is not None:
        return signed_star_count(t, graph, p)
    if shape.s == 3 and shape.edge_count == 3:
        return _triangle_signed_count(graph, p)
    return signed_count_naive(shape, graph, p, work_limit)


# ---------------------------------------------------------------------------
# counterexample statistics
# ---------------------------------------------------------------------------

def unsigned_clique_count(k: int, graph: Graph,
                          work_limit: int | None = None) -> int:
    """Number of k-vertex subsets inducing a complete subgraph.

    Bitset backtracking over ascending vertices; candidate sets shrink by
    adjacency intersection so sparse hosts stay fast.
    """
    if k < 2:
        raise ValueError("clique order must be >= 2")
    n = graph.n
    if k > n:
        return 0
    limit = work_limit if work_limit is not None else default_work_limit()
    masks = [0] * n
    rows, cols = graph.edge_endpoints()
    for u, v in zip(rows.tolist(), cols.tolist()):
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    steps = 0

    def rec(cands: int, need: int) -> int:
        nonlocal steps
        if need == 1:
            return cands.bit_count()
        total = 0
        rest = cands
        while rest:
            steps += 1
            if steps > limit:
                raise BudgetError("clique enumeration work limit exceeded")
            low = rest & -rest
            rest ^= low
            if rest.bit_count() < need - 1:
                break
            v = low.bit_length() - 1
            sub = rest & masks[v]
            if sub.bit_count() >= need - 1:
                total += rec(sub, need - 1)
        return total

    if k == 2:
        return graph.m
    return rec((1 << n) - 1, k)


def _pm_one_matrix(graph: Graph) -> np.ndarray:
    M = np.full((graph.n, graph.n), -1.0)
    np.fill_diagonal(M, 0.0)
    rows, cols = graph.edge_endpoints()
    M[rows, cols] = 1.0
    M[cols, rows] = 1.0
    return M


def _trace_dfs(M: np.ndarray, l: int, reduced: bool) -> float:
    n = M.shape[0]
    total = 0.0
    used = [False] * n

    def rec(first: int, second: int, last: int, depth: int, prod: float):
        nonlocal total
        if depth == l:
            if not reduced or second < last:
                total += prod * M[last, first]
            return
        lo = first + 1 if reduced else 0
        for v in range(lo, n):
            if not used[v]:
                used[v] = True
                rec(first, v if second < 0 else second, v, depth + 1, prod * M[last, v])
                used[v] = False

    for start in range(n):
        used[start] = True
        rec(start, -1, start, 1, 1.0)
        used[start] = False
    return total * (2 * l) if reduced else total


def closed_path_trace(l: int, graph: Graph,
                      work_limit: int | None = None,
                      mode: str = "auto") -> float:
    """Sum over ordered l-tuples of distinct vertices of the cyclic product of
    +-1 adjacency entries (each undirected cycle contributes 2l tuples).

    mode "dfs" extends simple paths with running products (the reference
    definition); "reduced" anchors the smallest vertex and one direction,
    multiplying by the 2l symmetry factor; "auto" uses exact trace identities
    for l in {3, 4} and falls back to the DFS otherwise:
      l=3: tr(M^3) (zero diagonal already forces distinctness),
      l=4: tr(M^4) - 2n(n-1)^2 + n(n-1)  (inclusion-exclusion over the
           coincidences i1=i3 / i2=i4, whose +-1 products square to 1).
    """
    n = graph.n
    if not (3 <= l <= n):
        raise ValueError("closed path length must satisfy 3 <= l <= n")
    if mode == "auto" and l in (3, 4):
        M = _pm_one_matrix(graph)
        if l == 3:
            return float(np.trace(M @ M @ M))
        M2 = M @ M
        tr4 = float(np.trace(M2 @ M2))
        return tr4 - 2.0 * n * (n - 1) ** 2 + n * (n - 1)
    limit = work_limit if work_limit is not None else default_work_limit()
    if falling_factorial(n, l) > limit:
        raise BudgetError(f"trace DFS needs n_({l}) = {falling_factorial(n, l)} tuples")
    M = _pm_one_matrix(graph)
    if mode in ("auto", "dfs"):
        return _trace_dfs(M, l, reduced=False)
    if mode == "reduced":
        return _trace_dfs(M, l, reduced=True)
    raise ValueError(f"unknown trace mode {mode!r}")


# ---------------------------------------------------------------------------
# TestStatistic dispatch
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestStatistic:
    """One of: star:t (signed star count), shape:<...> (signed shape count),
    clique-count:k (unsigned), trace:l.  p rides along for signed variants;
    the Monte Carlo harness fills it from the model when unset."""

    __test__ = False  # not a test-collection target despite the name

    kind: str
    t: int = 0
    shape: Shape | None = None
    p: float | None = None

    def __post_init__(self):
        if self.kind == "star" and self.t < 1:
            raise ConfigError("star statistic needs t >= 1")
        if self.kind == "clique-count" and self.t < 2:
            raise ConfigError("clique-count statistic needs k >= 2")
        if self.kind == "trace" and self.t < 3:
            raise ConfigError("trace statistic needs l >= 3")
        if self.kind == "shape" and self.shape is None:
            raise ConfigError("shape statistic needs a shape")
        if self.kind not in ("star", "shape", "clique-count", "trace"):
            raise ConfigError(f"unknown statistic kind {self.kind!r}")
        if self.p is not None and not (0 < self.p < 1):
            raise ConfigError("statistic p must lie in (0, 1)")

    def with_p(self, p: float) -> "TestStatistic":
        from dataclasses import replace

        return replace(self, p=p)

    def text(self) -> str:
        if self.kind == "shape":
            return f"shape:{self.shape.canonical_key.hex()}"
        return f"{self.kind}:{self.t}"


def parse_statistic(text: str) -> TestStatistic:
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind in ("star", "clique-count", "trace"):
            return TestStatistic(kind, t=int(rest))
        if kind == "shape":
            rest = rest.strip()
            if rest.startswith("file:"):
                with open(os.path.expanduser(rest[5:])) as fh:
                    from .graphs import parse_edge_list

                    return TestStatistic("shape", shape=Shape.from_graph(parse_edge_list(fh.read())))
            return TestStatistic("shape", shape=Shape.from_key(bytes.fromhex(rest)))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad statistic {text!r}: {exc}") from exc
    raise ConfigError(f"unknown statistic kind {kind!r}")


def evaluate(stat: TestStatistic, graph: Graph, p: float | None = None,
             work_limit: int | None = None) -> float:
    """Uniform dispatch for the Monte Carlo harness."""
    if stat.kind in ("star", "shape"):
        noise = stat.p if stat.p is not None else p
        if noise is None:
            raise ConfigError("signed statistic needs a noise level p")
    if stat.kind == "star":
        return signed_star_count(stat.t, graph, noise)
    if stat.kind == "shape":
        return signed_count(stat.shape, graph, noise, work_limit)
    if stat.kind == "clique-count":
        return float(unsigned_clique_count(stat.t, graph, work_limit))
    if stat.kind == "trace":
        return closed_path_trace(stat.t, graph, work_limit)
    raise ConfigError(f"unknown statistic kind {stat.kind!r}")
