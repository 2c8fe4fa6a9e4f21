"""Closed-form advantage analytics against oracles and hand values."""

import math

import mpmath
import pytest

from helpers import random_graph, rng
from starcount.advantage import (
    RegimeMargins,
    analyze_profile,
    brute_force_advantage,
    classify_regime,
    exact_planted_second_moment,
    intersection_ratio,
    shape_advantage,
    shape_moments,
    star_criterion,
    total_advantage,
)
from starcount.errors import BudgetError
from starcount.graphs import (
    DegreeProfile,
    Graph,
    Shape,
    enumerate_patterns,
    falling_factorial,
)


# ---------------------------------------------------------------------------
# per-shape moments and advantage
# ---------------------------------------------------------------------------

def test_shape_moments_hand_values():
    h = Graph.complete(20)
    eq1, eq2, ep = shape_moments(Shape.edge(), h, 200, 0.5)
    assert eq1 == 0.0
    assert eq2 == pytest.approx(200 * 199 / 2)          # M_S / |Aut|
    assert ep == pytest.approx(190.0)                    # C(20,2) * c^{1/2}, c = 1
    _, eq2_star, ep_star = shape_moments(Shape.star(2), h, 200, 0.5)
    assert eq2_star == pytest.approx(200 * 199 * 198 / 2)
    assert ep_star == pytest.approx(20 * 19 * 18 / 2)


def test_edge_advantage_planted_clique():
    # Adv(f_{K_2}) = k(k-1) sqrt((1-p)/p) / sqrt(2 n(n-1)) at k=80, n=400
    adv = shape_advantage(Shape.edge(), Graph.complete(80), 400, 0.5)
    assert adv == pytest.approx(6320 / math.sqrt(319200), rel=1e-12)
    assert adv == pytest.approx(11.1862787, rel=1e-6)


def test_shape_advantage_zero_when_absent():
    assert shape_advantage(Shape.clique(4), Graph.complete(3), 50, 0.5) == 0.0


def test_shape_advantage_log_space_consistent():
    # huge n forces the log-space path; cross-check against mpmath
    h = Graph.complete(10)
    n = 10**200
    adv = shape_advantage(Shape.edge(), h, n, 0.5)
    want = mpmath.mpf(90) / mpmath.sqrt(2 * mpmath.mpf(n) * (n - 1))
    assert adv == pytest.approx(float(want), rel=1e-9)


# ---------------------------------------------------------------------------
# star criterion
# ---------------------------------------------------------------------------

def test_star_criterion_matches_shape_advantage():
    gen = rng(3)
    for _ in range(8):
        h = random_graph(gen, int(gen.integers(4, 9)), 0.6)
        n, p = 60, float(gen.uniform(0.2, 0.8))
        crit = star_criterion(h.degree_profile(), n, p, 4)
        for entry in crit.per_t:
            want = shape_advantage(Shape.star(entry.t), h, n, p)
            assert entry.adv == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_star_criterion_tstar_ties_prefer_small_t():
    # flat profile of isolated-degree 0: all surrogates 0, t* = 1
    crit = star_criterion(DegreeProfile.flat(5, 0), 100, 0.5, 4)
    assert crit.t_star == 1


def test_star_criterion_log_space():
    profile = DegreeProfile.from_degrees([10**60] * 2)
    crit = star_criterion(profile, 10**61, 0.5, 6)
    assert crit.log_space
    for entry in crit.per_t:
        assert 0 <= entry.adv < math.inf


def test_endpoint_convexity_random_profiles():
    gen = rng(5)
    for _ in range(100):
        v = int(gen.integers(1, 12))
        degrees = [int(gen.integers(1, 200)) for _ in range(v)]
        if sum(degrees) % 2:
            degrees[0] += 1
        profile = DegreeProfile.from_degrees(degrees)
        n = int(gen.integers(max(degrees) + 2, 10**6))
        p = float(gen.uniform(0.05, 0.95))
        for D in (2, 5, 10):
            crit = star_criterion(profile, n, p, D)
            best = max(crit.per_t, key=lambda x: x.surrogate)
            assert best.surrogate in (crit.per_t[0].surrogate,
                                      crit.per_t[-1].surrogate)
            assert crit.endpoint_argmax


def test_falling_factorial_surrogate_sandwich():
    # (d)_t <= d^t always, and (d)_t >= d^t exp(-t^2/(d-t)) for d > t,
    # verified in exact/high-precision arithmetic
    for d in (10, 100, 10**4, 10**6):
        for t in range(1, 11):
            ff = falling_factorial(d, t)
            assert ff <= d**t
            if d > t:
                lower = mpmath.mpf(d) ** t * mpmath.e ** (-mpmath.mpf(t) ** 2 / (d - t))
                assert mpmath.mpf(ff) >= lower


# ---------------------------------------------------------------------------
# total advantage vs brute force
# ---------------------------------------------------------------------------

def test_total_advantage_vs_brute():
    gen = rng(7)
    for _ in range(5):
        n = int(gen.integers(4, 7))
        d = int(gen.integers(1, 4))
        p = [0.3, 0.5, 0.7][int(gen.integers(3))]
        h = random_graph(gen, int(gen.integers(3, 7)), 0.6)
        exact = brute_force_advantage(h, n, p, d)
        fast = total_advantage(h, n, p, d)
        assert fast == pytest.approx(exact, rel=1e-9, abs=1e-12)


def test_total_advantage_at_least_edge_term():
    h = Graph.complete(6)
    n, p = 30, 0.5
    assert total_advantage(h, n, p, 3) >= shape_advantage(Shape.edge(), h, n, p)


def test_brute_force_budget():
    with pytest.raises(BudgetError):
        brute_force_advantage(Graph.complete(4), 50, 0.5, 4)


# ---------------------------------------------------------------------------
# regime classification
# ---------------------------------------------------------------------------

def test_classify_edges_optimal():
    # modest flat degree, surrogate large, Delta below sqrt(n r)
    profile = DegreeProfile.flat(2000, 10)
    label = classify_regime(profile, 10**4, 0.5, 6,
                            RegimeMargins(tau=1.0))
    assert label.label == "EdgesOptimal"
    assert label.t_suggest is None


def test_classify_large_stars():
    profile = DegreeProfile.flat(80, 79)
    label = classify_regime(profile, 400, 0.5, 3, RegimeMargins(tau=1.0))
    assert label.label == "LargeStarsOptimal"
    assert label.t_suggest == math.ceil(3 / (2 * label.eps_hat)) + 1
    assert label.eps_hat > 0.05


def test_classify_no_separation():
    profile = DegreeProfile.flat(4, 3)
    label = classify_regime(profile, 10**6, 0.5, 6)
    assert label.label == "NoConstantDegreeSeparation"
    assert label.max_surrogate <= 10.0


def test_classify_margins_are_knobs():
    profile = DegreeProfile.flat(4, 3)
    loose = classify_regime(profile, 10**6, 0.5, 6, RegimeMargins(tau=1e-9))
    assert loose.label != "NoConstantDegreeSeparation"


def test_classify_quantities_present():
    label = classify_regime(DegreeProfile.flat(50, 10), 10**4, 0.5, 4)
    for key in ("delta", "delta_threshold", "m", "m_threshold",
                "max_surrogate", "t_star", "endpoint_argmax"):
        assert key in label.quantities


# ---------------------------------------------------------------------------
# intersecting-pattern diagnostics
# ---------------------------------------------------------------------------

def test_intersection_ratio_full_overlap_hand_value():
    h = Graph.complete(3)
    star = Shape.star(1)  # the edge, as a 1-star
    full = [p for p in enumerate_patterns(star, star) if len(p.gluing) == 2
            and p.union_shape.edge_count == 1]
    assert full
    # S1 = S2: ratio = n^2 / (M_{K_2,H}^2 c), M = 6, c = 1
    val = intersection_ratio(full[0], h, 10, 0.5, 1)
    assert val == pytest.approx(100 / 36)


def test_intersection_ratios_vanish_when_signal_grows():
    # overlap corrections are negligible relative to the disjoint term when
    # the planted clique grows faster than sqrt(n): k = n^{0.6}, edges (t = 1)
    star = Shape.star(1)
    pats = [p for p in enumerate_patterns(star, star) if p.gluing]
    totals = []
    for n in (100, 400, 1600):
        h = Graph.complete(round(n**0.6))
        totals.append(sum(intersection_ratio(p, h, n, 0.5, 1) for p in pats))
    assert totals[0] > totals[1] > totals[2]
    assert totals[2] < 0.3


def test_intersection_ratio_errors():
    h = Graph.complete(4)
    star = Shape.star(2)
    empty_gluing = [p for p in enumerate_patterns(star, star) if not p.gluing][0]
    with pytest.raises(ValueError):
        intersection_ratio(empty_gluing, h, 10, 0.5, 2)
    some = [p for p in enumerate_patterns(star, star) if p.gluing][0]
    with pytest.raises(ZeroDivisionError):
        intersection_ratio(some, Graph.empty(4), 10, 0.5, 2)


def test_exact_planted_second_moment_hand_value():
    # H = K_2, shape = edge, n = 5: cross terms vanish, so
    # E_P[f^2] = a^2 + (C(5,2)-1)(p a^2 + (1-p) b^2) = 7/3 + 9 at p = 0.3
    val = exact_planted_second_moment(Shape.edge(), Graph.complete(2), 5, 0.3)
    assert val == pytest.approx(7 / 3 + 9, rel=1e-12)


def test_exact_planted_second_moment_dominates_mean_sq():
    h = Graph.complete(3)
    for p in (0.3, 0.5, 0.7):
        second = exact_planted_second_moment(Shape.edge(), h, 6, p)
        _, _, mean = shape_moments(Shape.edge(), h, 6, p)
        assert second >= mean**2 - 1e-9


def test_exact_planted_second_moment_budget():
    with pytest.raises(BudgetError):
        exact_planted_second_moment(Shape.edge(), Graph.complete(3), 20, 0.5)


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------

def test_analyze_profile_report():
    h = Graph.complete(6)
    report = analyze_profile(h.degree_profile(), 50, 0.5, 3, h=h)
    d = report.to_dict()
    assert list(d) == ["n", "p", "d", "degree_profile", "per_t", "t_star",
                       "total_sq_adv", "regime", "log_space"]
    assert d["total_sq_adv"] == pytest.approx(total_advantage(h, 50, 0.5, 3) ** 2)
    assert len(d["per_t"]) == 3
    no_total = analyze_profile(h.degree_profile(), 50, 0.5, 3)
    assert no_total.to_dict()["total_sq_adv"] is None
