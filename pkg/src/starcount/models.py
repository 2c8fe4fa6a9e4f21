"""Null and planted model samplers.

Q = G(n,p).  P = union of G(n,p) with a uniformly random labelled copy of H.

Seed derivation: every trial draws from
    default_rng(SeedSequence(master_seed, spawn_key=(arm, trial)))
with arm 0 = null, 1 = planted, 2 = frozen-H realization.  Streams for
distinct (arm, trial) pairs are independent and order-insensitive, so sweeps
and parallel harnesses reproduce bit-exactly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError
from .graphs import (
    DegreeProfile,
    Graph,
    pair_count,
    pair_to_index,
    parse_edge_list,
)

ARM_NULL = 0
ARM_PLANTED = 1
ARM_H = 2


def trial_rng(master_seed: int, trial: int, arm: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(arm, trial)))


# ---------------------------------------------------------------------------
# H specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HSpec:
    """Catalog entry for the planted graph H.

    variant: explicit | clique | star | biclique | cycle | matching | path | er
    er draws H from G(k,q) afresh per planted sample unless frozen is set,
    in which case one realization (derived from the master seed, arm 2) is
    reused for every draw.
    """

    variant: str
    params: tuple = ()
    graph: Graph | None = None
    frozen: bool = False

    def __post_init__(self):
        v = self.variant
        p = self.params
        if v == "explicit":
            if self.graph is None:
                raise ConfigError("explicit HSpec needs a graph")
        elif v in ("clique", "star", "cycle", "matching", "path"):
            if len(p) != 1 or p[0] < 1:
                raise ConfigError(f"{v} HSpec needs one positive size parameter")
            if v == "clique" and p[0] < 1:
                raise ConfigError("clique needs k >= 1")
            if v == "cycle" and p[0] < 3:
                raise ConfigError("cycle needs L >= 3")
        elif v == "biclique":
            if len(p) != 2 or p[0] < 1 or p[1] < 1:
                raise ConfigError("biclique HSpec needs a, b >= 1")
            if p[0] < p[1]:
                raise ConfigError("biclique expects a >= b")
        elif v == "er":
            if len(p) != 2:
                raise ConfigError("er HSpec needs k, q")
            k, q = p
            if k < 1 or not (0 < q <= 1):
                raise ConfigError("er HSpec needs k >= 1 and q in (0, 1]")
        else:
            raise ConfigError(f"unknown HSpec variant {v!r}")

    @property
    def is_random(self) -> bool:
        return self.variant == "er" and not self.frozen

    def text(self) -> str:
        if self.variant == "explicit":
            return "file:<inline>"
        body = ",".join(_fmt_param(x) for x in self.params)
        return f"{self.variant}:{body}" + (",frozen" if self.frozen else "")


def _fmt_param(x):
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def parse_hspec(text: str) -> HSpec:
    """Parse "clique:k", "star:t", "biclique:a,b", "cycle:L", "matching:k",
    "path:L", "er:k,q" or "file:<path>"."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "file":
        if not rest:
            raise ConfigError("file HSpec needs a path")
        with open(os.path.expanduser(rest)) as fh:
            return HSpec("explicit", graph=parse_edge_list(fh.read()))
    parts = [s.strip() for s in rest.split(",") if s.strip()] if rest else []
    frozen = False
    if parts and parts[-1] == "frozen":
        frozen = True
        parts = parts[:-1]
    try:
        if kind in ("clique", "star", "cycle", "matching", "path"):
            (k,) = parts
            return HSpec(kind, (int(k),))
        if kind == "biclique":
            a, b = parts
            return HSpec(kind, (int(a), int(b)))
        if kind == "er":
            k, q = parts
            return HSpec(kind, (int(k), float(q)), frozen=frozen)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad HSpec {text!r}: {exc}") from exc
    raise ConfigError(f"unknown HSpec kind {kind!r}")


def _strip_isolated(graph: Graph) -> Graph:
    """Isolated vertices of H are statistically invisible in the union model;
    drop them before planting."""
    deg = graph.degrees
    keep = np.flatnonzero(deg > 0)
    remap = {int(v): i for i, v in enumerate(keep)}
    return Graph.from_edges(len(keep), [(remap[u], remap[v]) for u, v in graph.edges()])


def realize_h(h: HSpec, rng: np.random.Generator | int | None = None) -> Graph:
    """Concrete H instance; seed-dependent only for the er variant."""
    v, p = h.variant, h.params
    if v == "explicit":
        return h.graph
    if v == "clique":
        return Graph.complete(p[0])
    if v == "star":
        t = p[0]
        return Graph.from_edges(t + 1, [(0, i) for i in range(1, t + 1)])
    if v == "biclique":
        a, b = p
        return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    if v == "cycle":
        L = p[0]
        return Graph.from_edges(L, [(i, (i + 1) % L) for i in range(L)])
    if v == "matching":
        k = p[0]
        return Graph.from_edges(2 * k, [(2 * i, 2 * i + 1) for i in range(k)])
    if v == "path":
        L = p[0]
        return Graph.from_edges(L + 1, [(i, i + 1) for i in range(L)])
    if v == "er":
        k, q = p
        if rng is None:
            rng = np.random.default_rng()
        elif not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(rng)
        return Graph(k, _er_edge_index(k, q, rng))
    raise ConfigError(f"unknown HSpec variant {v!r}")


def analytic_profile(h: HSpec) -> DegreeProfile:
    """Degree profile for analytic (no-sampling) cells.  Deterministic
    variants give the true profile; er gives the expected flat profile."""
    if h.variant == "er":
        k, q = h.params
        return DegreeProfile.flat(k, (k - 1) * q)
    return realize_h(h).degree_profile()


# ---------------------------------------------------------------------------
# models and samplers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlantedModel:
    n: int
    p: float
    h: HSpec

    def __post_init__(self):
        if not (0 < self.p < 1):
            raise ConfigError("p must lie in (0, 1)")
        if self.n < 1:
            raise ConfigError("n must be positive")

    def with_h(self, h: HSpec) -> "PlantedModel":
        return replace(self, h=h)

    def text(self) -> str:
        return f"n={self.n} p={self.p!r} h={self.h.text()}"


@dataclass(frozen=True)
class PlantedSample:
    graph: Graph
    embedding: tuple  # embedding[i] = ambient image of H vertex i
    realized_h: Graph


def _er_edge_index(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Exact G(n,p) edge-index sample: Binomial edge count, then a uniform
    subset of that size (the conditional law of G(n,p) given its edge count)."""
    M = pair_count(n)
    if M == 0 or p <= 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1:
        return np.arange(M, dtype=np.int64)
    m = int(rng.binomial(M, p))
    idx = rng.choice(M, size=m, replace=False).astype(np.int64)
    idx.sort()
    return idx


def sample_null(model: PlantedModel, rng_seed, trial: int = 0) -> Graph:
    rng = _as_rng(rng_seed, trial, ARM_NULL)
    return Graph(model.n, _er_edge_index(model.n, model.p, rng))


def sample_planted(model: PlantedModel, rng_seed, trial: int = 0) -> PlantedSample:
    rng = _as_rng(rng_seed, trial, ARM_PLANTED)
    if model.h.variant == "er" and model.h.frozen:
        h_graph = realize_h(model.h, _as_rng(rng_seed, 0, ARM_H))
    else:
        h_graph = realize_h(model.h, rng)
    h_graph = _strip_isolated(h_graph)
    if h_graph.n > model.n:
        raise ConfigError(f"|V(H)| = {h_graph.n} exceeds n = {model.n}")
    embedding = rng.permutation(model.n)[: h_graph.n].astype(np.int64)
    base = _er_edge_index(model.n, model.p, rng)
    rows, cols = h_graph.edge_endpoints()
    planted = np.array(
        [pair_to_index(model.n, int(embedding[u]), int(embedding[v]))
         for u, v in zip(rows, cols)],
        dtype=np.int64,
    )
    idx = np.union1d(base, planted)
    return PlantedSample(Graph(model.n, idx), tuple(int(x) for x in embedding), h_graph)


def _as_rng(rng_seed, trial: int, arm: int) -> np.random.Generator:
    if isinstance(rng_seed, np.random.Generator):
        return rng_seed
    return trial_rng(int(rng_seed), trial, arm)
