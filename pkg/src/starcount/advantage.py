"""Closed-form advantage analytics.

Per-shape moments and advantages, the degree-profile star criterion with t*
selection, the total degree-D advantage (shape-enumeration form and the
subset-enumeration brute-force oracle), regime classification, and the exact
tiny-scale oracles for intersecting-pattern diagnostics and the planted
second moment.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetError
from .graphs import (
    DegreeProfile,
    Graph,
    Shape,
    count_in_complete,
    count_labelled_copies,
    enumerate_shapes,
    falling_factorial,
    pair_count,
    star_copy_count,
)

# counts above this magnitude are combined in log space and flagged
_LOG_SPACE_CUTOFF = 1e300


def _ln_int(x: int) -> float:
    """Natural log of a (possibly huge) positive integer."""
    if x <= 0:
        raise ValueError("log of nonpositive count")
    shift = max(0, x.bit_length() - 500)
    return math.log(x >> shift) + shift * math.log(2.0)


def _safe_ratio(num: int, den: int) -> tuple[float, bool]:
    """num/den as float; falls back to exp(ln num - ln den) past float range."""
    if num == 0:
        return 0.0, False
    try:
        val = float(Fraction(num, den))
        if val < _LOG_SPACE_CUTOFF:
            return val, False
    except OverflowError:
        pass
    return math.exp(_ln_int(num) - _ln_int(den)), True


# ---------------------------------------------------------------------------
# per-shape moments and advantage
# ---------------------------------------------------------------------------

def shape_moments(shape: Shape, h: Graph, n: int, p: float):
    """(E_Q[f_S], E_Q[f_S^2], E_P[f_S]) in closed form."""
    c = (1 - p) / p
    aut = shape.aut_count
    m_s = count_in_complete(shape, n)
    m_sh = count_labelled_copies(shape, h)
    eq_second, _ = _safe_ratio(m_s, aut)
    ep_ratio, _ = _safe_ratio(m_sh, aut)
    ep_mean = ep_ratio * c ** (shape.edge_count / 2)
    return 0.0, eq_second, ep_mean


def shape_advantage(shape: Shape, h: Graph, n: int, p: float) -> float:
    """Adv(f_S) = M_{S,H} c^{|S|/2} / sqrt(M_S |Aut(S)|), c = (1-p)/p."""
    m_sh = count_labelled_copies(shape, h)
    if m_sh == 0:
        return 0.0
    m_s = count_in_complete(shape, n)
    if m_s == 0:
        return math.inf
    c = (1 - p) / p
    ratio, used_log = _safe_ratio(m_sh * m_sh, m_s * shape.aut_count)
    if used_log or ratio > _LOG_SPACE_CUTOFF:
        ln = (2 * _ln_int(m_sh) - _ln_int(m_s) - _ln_int(shape.aut_count)
              + shape.edge_count * math.log(c))
        return math.exp(0.5 * ln)
    return math.sqrt(ratio * c ** shape.edge_count)


# ---------------------------------------------------------------------------
# star criterion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StarAdvantage:
    t: int
    adv: float          # exact star advantage (includes 1/sqrt(|Aut|))
    adv_no_aut: float   # M_{K_{1,t},H} c^{t/2} / sqrt(M_{K_{1,t}})
    surrogate: float    # sum d^t / (n^{(1+t)/2} (p/(1-p))^{t/2})


@dataclass(frozen=True)
class StarCriterion:
    per_t: tuple
    t_star: int
    endpoint_argmax: bool  # surrogate argmax lies in {1, D}
    log_space: bool


def _real_falling(d, t: int):
    """(d)_(t) for integer or analytic (real) degrees; analytic values below
    the degenerate range clamp at 0."""
    if isinstance(d, int):
        return falling_factorial(d, t)
    prod = 1.0
    for i in range(t):
        f = d - i
        if f <= 0:
            return 0.0
        prod *= f
    return prod


def star_criterion(profile: DegreeProfile, n: int, p: float, D: int) -> StarCriterion:
    """Surrogate and exact star advantages for t = 1..D; t* = argmax of the
    surrogate, ties toward smaller t (the cheaper statistic)."""
    if D < 1:
        raise ValueError("D must be >= 1")
    r = p / (1 - p)
    c = 1.0 / r
    per_t = []
    log_space = False
    mult = profile.multiplicities()
    for t in range(1, D + 1):
        try:
            surr_num = math.fsum(cnt * float(d) ** t for d, cnt in mult)
            surrogate = surr_num / (n ** ((1 + t) / 2) * r ** (t / 2))
        except OverflowError:
            # degrees/n beyond float range: evaluate the ratio in log space
            ln_terms = [math.log(cnt) + t * math.log(d)
                        for d, cnt in mult if d > 0]
            ln_max = max(ln_terms)
            ln_num = ln_max + math.log(math.fsum(math.exp(x - ln_max)
                                                 for x in ln_terms))
            surrogate = math.exp(ln_num - (1 + t) / 2 * math.log(n)
                                 - t / 2 * math.log(r))
            log_space = True
        copies = sum(cnt * _real_falling(d, t) for d, cnt in mult)
        aut = 2 if t == 1 else falling_factorial(t, t)
        m_s = falling_factorial(n, t + 1)
        if copies == 0 or m_s == 0:
            adv = adv_no_aut = 0.0
        else:
            if isinstance(copies, int):
                num = copies * copies
                ratio, used_log = _safe_ratio(num, m_s)
                log_space = log_space or used_log
                if used_log:
                    ln = 2 * _ln_int(copies) - _ln_int(m_s) + t * math.log(c)
                    adv_no_aut = math.exp(0.5 * ln)
                else:
                    adv_no_aut = math.sqrt(ratio * c**t)
            else:
                adv_no_aut = copies * c ** (t / 2) / math.sqrt(float(m_s))
            adv = adv_no_aut / math.sqrt(aut)
        per_t.append(StarAdvantage(t=t, adv=adv, adv_no_aut=adv_no_aut,
                                   surrogate=surrogate))
    best = max(per_t, key=lambda x: x.surrogate)
    t_star = min(x.t for x in per_t if x.surrogate == best.surrogate)
    endpoint = best.surrogate in (per_t[0].surrogate, per_t[-1].surrogate)
    return StarCriterion(per_t=tuple(per_t), t_star=t_star,
                         endpoint_argmax=endpoint, log_space=log_space)


# ---------------------------------------------------------------------------
# total degree-D advantage and its brute-force oracle
# ---------------------------------------------------------------------------

def total_advantage(h: Graph, n: int, p: float, D: int) -> float:
    """Adv^{<=D} via the shape-grouped sum:
    (Adv)^2 = sum over shapes |S| <= D of M_{S,H}^2 c^{|S|} / (M_S |Aut(S)|)."""
    c = (1 - p) / p
    total = 0.0
    for shape in enumerate_shapes(D):
        m_sh = count_labelled_copies(shape, h)
        if m_sh == 0:
            continue
        m_s = count_in_complete(shape, n)
        if m_s == 0:
            continue
        ratio, used_log = _safe_ratio(m_sh * m_sh, m_s * shape.aut_count)
        if used_log:
            ratio = math.exp(2 * _ln_int(m_sh) - _ln_int(m_s)
                             - _ln_int(shape.aut_count) + shape.edge_count * math.log(c))
            total += ratio
        else:
            total += ratio * c**shape.edge_count
    return math.sqrt(total)


def brute_force_advantage(h: Graph, n: int, p: float, D: int,
                          work_limit: int | None = None) -> float:
    """Subset-enumeration oracle: (Adv)^2 = sum over edge subsets S of K_n
    with 1 <= |S| <= D of (M_{S,H}/M_S)^2 c^{|S|}."""
    limit = work_limit if work_limit is not None else 10**7
    pairs = list(itertools.combinations(range(n), 2))
    budget = sum(math.comb(len(pairs), d) for d in range(1, D + 1))
    if budget > limit:
        raise BudgetError(f"brute force would enumerate {budget} subsets")
    c = (1 - p) / p
    cache: dict[bytes, Fraction] = {}
    total = 0.0
    for d in range(1, D + 1):
        for subset in itertools.combinations(pairs, d):
            shape = Shape.from_edges(subset)
            key = shape.canonical_key
            ratio = cache.get(key)
            if ratio is None:
                m_sh = count_labelled_copies(shape, h)
                m_s = count_in_complete(shape, n)
                ratio = Fraction(m_sh, m_s) if m_s else Fraction(0)
                cache[key] = ratio
            if ratio:
                total += float(ratio) ** 2 * c**d
    return math.sqrt(total)


# ---------------------------------------------------------------------------
# regime classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegimeMargins:
    """Finite-n stand-ins for the asymptotic comparisons (all are knobs)."""

    c_edge: float = 1.0
    eps_min: float = 0.05
    tau: float = 10.0


@dataclass(frozen=True)
class RegimeLabel:
    label: str  # EdgesOptimal | LargeStarsOptimal | Gray | NoConstantDegreeSeparation
    t_suggest: int | None
    eps_hat: float | None
    max_surrogate: float
    quantities: dict = field(compare=False)
    margins: RegimeMargins = RegimeMargins()


def classify_regime(profile: DegreeProfile, n: int, p: float, D: int,
                    margins: RegimeMargins | None = None) -> RegimeLabel:
    """Edges vs large stars via the degree profile.

    Delta <= c_edge * sqrt(n p/(1-p)) -> EdgesOptimal;
    measured eps-hat = log(Delta)/log(n p/(1-p)) - 1/2 >= eps_min ->
    LargeStarsOptimal with t_suggest = ceil(3/(2 eps-hat)) + 1; Gray between.
    When no surrogate clears tau there is nothing for constant degree to
    detect at this scale -> NoConstantDegreeSeparation.
    """
    margins = margins or RegimeMargins()
    r = p / (1 - p)
    crit = star_criterion(profile, n, p, D)
    max_surr = max(x.surrogate for x in crit.per_t)
    delta = float(profile.max_degree)
    star_thr = math.sqrt(n * r)
    eps_hat = None
    if delta > 0 and n * r > 1:
        eps_hat = math.log(delta) / math.log(n * r) - 0.5
    quantities = {
        "delta": delta,
        "delta_threshold": star_thr,
        "m": float(profile.edge_count),
        "m_threshold": n * math.sqrt(r),
        "max_surrogate": max_surr,
        "t_star": crit.t_star,
        "endpoint_argmax": crit.endpoint_argmax,
    }
    if max_surr <= margins.tau:
        label, t_suggest = "NoConstantDegreeSeparation", None
    elif delta <= margins.c_edge * star_thr:
        label, t_suggest = "EdgesOptimal", None
    elif eps_hat is not None and eps_hat >= margins.eps_min:
        label, t_suggest = "LargeStarsOptimal", math.ceil(3 / (2 * eps_hat)) + 1
    else:
        label, t_suggest = "Gray", None
    return RegimeLabel(label=label, t_suggest=t_suggest, eps_hat=eps_hat,
                       max_surrogate=max_surr, quantities=quantities,
                       margins=margins)


# ---------------------------------------------------------------------------
# intersecting-pattern diagnostics (exact tiny-scale oracles)
# ---------------------------------------------------------------------------

def intersection_ratio(pattern, h: Graph, n: int, p: float, t: int) -> float:
    """Relative weight of one intersecting pattern of two t-stars:

        n^{|V(S1 u S2)| - |V(S1 d S2)|} M_{S1dS2,H} c^{|S1dS2|/2}
        ---------------------------------------------------------
                      M_{K_{1,t},H}^2 c^t

    with M_{empty,H} = 1.  Patterns with empty gluing are out of contract.
    """
    if not pattern.gluing:
        raise ValueError("intersection ratio is defined for non-empty gluings")
    star = Shape.star(t)
    if pattern.left.canonical_key != star.canonical_key or \
            pattern.right.canonical_key != star.canonical_key:
        raise ValueError("pattern must glue two t-stars")
    m_star = star_copy_count(h, t)
    if m_star == 0:
        raise ZeroDivisionError("H contains no t-star")
    c = (1 - p) / p
    sym = pattern.symdiff_shape
    m_sym = count_labelled_copies(sym, h)  # 1 for the empty shape
    exponent = pattern.union_vertex_count - pattern.symdiff_vertex_count
    num = float(n) ** exponent * m_sym * c ** (pattern.symdiff_edge_count / 2)
    return num / (float(m_star) ** 2 * c**t)


def exact_planted_second_moment(shape: Shape, h: Graph, n: int, p: float) -> float:
    """E_P[f_shape^2] by exhaustive enumeration at tiny scale.

    Sums over ordered pairs of shape copies (edge subsets of K_n) and over
    the uniformly random embedded copy of H the exact conditional expectation
    1{S d S' subset H} c^{|S d S'|/2} c^{|(S n S') n E(H)|}.
    """
    if n > 8 or h.n > 5 or shape.s > 4:
        raise BudgetError("exact planted second moment is a tiny-scale oracle")
    c = (1 - p) / p
    placements = _distinct_embeddings(h, n)
    copies = _distinct_copies(shape, n)
    total = 0.0
    for s1 in copies:
        for s2 in copies:
            sym = s1 ^ s2
            inter = s1 & s2
            acc = 0.0
            for emb in placements:
                if sym <= emb:
                    acc += c ** (len(sym) / 2) * c ** len(inter & emb)
            total += acc / len(placements)
    return total


def _distinct_embeddings(h: Graph, n: int) -> list[frozenset]:
    """Distinct embedded edge sets of H in K_n (uniform over labelled copies
    is uniform over these)."""
    h_edges = h.edges()
    out = set()
    for perm in itertools.permutations(range(n), h.n):
        out.add(frozenset(
            (perm[u], perm[v]) if perm[u] < perm[v] else (perm[v], perm[u])
            for u, v in h_edges
        ))
    return sorted(out, key=sorted)


def _distinct_copies(shape: Shape, n: int) -> list[frozenset]:
    out = set()
    for perm in itertools.permutations(range(n), shape.s):
        out.add(frozenset(
            (perm[u], perm[v]) if perm[u] < perm[v] else (perm[v], perm[u])
            for u, v in shape.edges
        ))
    return sorted(out, key=sorted)


# ---------------------------------------------------------------------------
# AdvantageReport
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdvantageReport:
    n: int
    p: float
    d: int
    degree_profile: tuple
    per_t: tuple
    t_star: int
    total_sq_adv: float | None
    regime: RegimeLabel
    log_space: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "d": self.d,
            "degree_profile": list(self.degree_profile),
            "per_t": [
                {"t": x.t, "adv": x.adv, "adv_no_aut": x.adv_no_aut,
                 "surrogate": x.surrogate}
                for x in self.per_t
            ],
            "t_star": self.t_star,
            "total_sq_adv": self.total_sq_adv,
            "regime": {
                "label": self.regime.label,
                "t_suggest": self.regime.t_suggest,
                "eps_hat": self.regime.eps_hat,
                "max_surrogate": self.regime.max_surrogate,
                "quantities": dict(self.regime.quantities),
                "margins": {
                    "c_edge": self.regime.margins.c_edge,
                    "eps_min": self.regime.margins.eps_min,
                    "tau": self.regime.margins.tau,
                },
            },
            "log_space": self.log_space,
        }


def analyze_profile(profile: DegreeProfile, n: int, p: float, D: int,
                    h: Graph | None = None,
                    margins: RegimeMargins | None = None,
                    total_budget_d: int = 8) -> AdvantageReport:
    """Full analytic report: star criterion + regime + (when D and H permit)
    the total degree-D advantage."""
    crit = star_criterion(profile, n, p, D)
    regime = classify_regime(profile, n, p, D, margins)
    total = None
    if h is not None and 1 <= D <= total_budget_d:
        total = total_advantage(h, n, p, D) ** 2
    return AdvantageReport(
        n=n, p=p, d=D, degree_profile=profile.degrees, per_t=crit.per_t,
        t_star=crit.t_star, total_sq_adv=total, regime=regime,
        log_space=crit.log_space,
    )
