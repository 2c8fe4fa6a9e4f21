"""Acceptance suite: exact identities, oracle equivalences, and finite-n
quantitative checks with fixed seeds.  One criterion per test, each printing
a PASS line on success."""

import itertools
import math

import numpy as np
import pytest

from helpers import (
    brute_labelled_copies,
    degree_preserving_swap,
    random_graph,
    rng,
)
from starcount import cli
from starcount.advantage import (
    brute_force_advantage,
    star_criterion,
    total_advantage,
)
from starcount.graphs import (
    DegreeProfile,
    Graph,
    Shape,
    count_labelled_copies,
    enumerate_patterns,
    enumerate_shapes,
    falling_factorial,
    star_copy_count,
)
from starcount.models import PlantedModel, parse_hspec, sample_null, sample_planted
from starcount.montecarlo import (
    _jackknife_se_mean,
    degree_concentration_check,
    estimate_separation,
)
from starcount.stats import (
    evaluate,
    parse_statistic,
    signed_count,
    signed_count_naive,
    signed_star_count,
)


# ---------------------------------------------------------------------------
# 1. Exact identities: pair-of-copies double counting + star-copy formula
# ---------------------------------------------------------------------------

def test_criterion_01_exact_identities():
    gen = rng(1001)
    hosts = [random_graph(gen, int(gen.integers(3, 9)),
                          float(gen.uniform(0.2, 0.9))) for _ in range(50)]
    shapes = enumerate_shapes(3)

    # double counting: M_{S1,G} M_{S2,G} = sum over gluing patterns of
    # labelled copies of the glued union, exact integer equality
    for i, s1 in enumerate(shapes):
        for s2 in shapes[i:]:
            union_keys: dict[bytes, int] = {}
            for pat in enumerate_patterns(s1, s2):
                k = pat.union_shape.canonical_key
                union_keys[k] = union_keys.get(k, 0) + 1
            union_shapes = {k: Shape.from_key(k) for k in union_keys}
            for host in hosts:
                lhs = count_labelled_copies(s1, host) * count_labelled_copies(s2, host)
                rhs = sum(mult * count_labelled_copies(union_shapes[k], host)
                          for k, mult in union_keys.items())
                assert lhs == rhs, (s1, s2, host)

    # star-copy formula M_{K_{1,t},H} = sum_v (d_v)_(t), exact on 100 random H
    for j in range(100):
        h = random_graph(gen, int(gen.integers(2, 10)), float(gen.uniform(0.1, 1.0)))
        for t in range(1, 4):
            want = sum(falling_factorial(int(d), t) for d in h.degrees)
            assert star_copy_count(h, t) == want
            if t + 1 <= h.n:
                assert count_labelled_copies(Shape.star(t), h) == want
            if j < 10 and t + 1 <= h.n:
                assert brute_labelled_copies(Shape.star(t), h) == want
    print("criterion 1 (exact identities): PASS")


# ---------------------------------------------------------------------------
# 2. Oracle equivalence: total_advantage vs brute_force_advantage
# ---------------------------------------------------------------------------

def test_criterion_02_oracle_equivalence():
    gen = rng(1002)
    for i in range(20):
        n = int(gen.integers(4, 8))
        d = int(gen.integers(1, 4))
        p = [0.3, 0.5, 0.7][int(gen.integers(3))]
        h = random_graph(gen, int(gen.integers(3, n + 1)), 0.6)
        exact = brute_force_advantage(h, n, p, d)
        fast = total_advantage(h, n, p, d)
        assert abs(fast - exact) <= 1e-9 * max(1.0, abs(exact)), (i, n, d, p)
    print("criterion 2 (oracle equivalence): PASS")


# ---------------------------------------------------------------------------
# 3. Fast star evaluator vs naive subset enumeration
# ---------------------------------------------------------------------------

def test_criterion_03_fast_star_evaluator():
    gen = rng(1003)
    for i in range(200):
        n = int(gen.integers(5, 10))
        p = float(gen.uniform(0.1, 0.9))
        t = int(gen.integers(1, 5))
        g = random_graph(gen, n, float(gen.uniform(0.2, 0.9)))
        fast = signed_star_count(t, g, p)
        naive = signed_count_naive(Shape.star(t), g, p)
        assert abs(fast - naive) <= 1e-9 * max(1.0, abs(naive)), (i, n, p, t)
    print("criterion 3 (fast star evaluator): PASS")


# ---------------------------------------------------------------------------
# 4. Moment formulas vs MC at n = 200, H = K_20
# ---------------------------------------------------------------------------

def test_criterion_04_moment_formulas():
    n, p, trials, seed = 200, 0.5, 10**4, 1004
    model = PlantedModel(n, p, parse_hspec("clique:20"))
    shapes = {
        "K_2": Shape.edge(),
        "K_{1,2}": Shape.star(2),
        "K_{1,3}": Shape.star(3),
        "K_3": Shape.clique(3),
    }
    vq = {k: np.empty(trials) for k in shapes}
    vp = {k: np.empty(trials) for k in shapes}
    for i in range(trials):
        gq = sample_null(model, seed, i)
        gp = sample_planted(model, seed, i).graph
        for name, shape in shapes.items():
            vq[name][i] = signed_count(shape, gq, p)
            vp[name][i] = signed_count(shape, gp, p)
    h = Graph.complete(20)
    for name, shape in shapes.items():
        aut = shape.aut_count
        m_s = falling_factorial(n, shape.s)
        m_sh = count_labelled_copies(shape, h)
        # c = (1-p)/p = 1 at p = 1/2, so the closed forms are pure counts
        want_eq, want_eq2, want_ep = 0.0, m_s / aut, m_sh / aut
        se_q = _jackknife_se_mean(vq[name])
        assert abs(vq[name].mean() - want_eq) <= 4 * se_q, name
        sq = vq[name] ** 2
        assert abs(sq.mean() - want_eq2) <= 4 * _jackknife_se_mean(sq), name
        se_p = _jackknife_se_mean(vp[name])
        assert abs(vp[name].mean() - want_ep) <= 4 * se_p, name
    print("criterion 4 (moment formulas): PASS")


# ---------------------------------------------------------------------------
# 5. Planted-clique transition at n = 400
# ---------------------------------------------------------------------------

def test_criterion_05_planted_clique_transition():
    stat = parse_statistic("star:1")
    strong = estimate_separation(
        PlantedModel(400, 0.5, parse_hspec("clique:80")), stat, 10**4, seed=1005)
    assert strong.separation_ratio >= 8
    assert strong.type1 + strong.type2 <= 0.05
    weak = estimate_separation(
        PlantedModel(400, 0.5, parse_hspec("clique:20")), stat, 10**4, seed=1005)
    assert weak.type1 + weak.type2 >= 0.4
    print(f"criterion 5 (planted-clique transition): PASS "
          f"(ratio {strong.separation_ratio:.2f}, weak error "
          f"{weak.type1 + weak.type2:.2f})")


# ---------------------------------------------------------------------------
# 6. Degree-profile sufficiency
# ---------------------------------------------------------------------------

def test_criterion_06_degree_profile_sufficiency():
    c6 = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    two_c3 = Graph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    a = star_criterion(c6.degree_profile(), 500, 0.4, 6)
    b = star_criterion(two_c3.degree_profile(), 500, 0.4, 6)
    assert a == b  # bit-identical reports

    gen = rng(1006)
    made = 0
    while made < 5:
        g = random_graph(gen, 9, 0.5)
        swapped = degree_preserving_swap(gen, g)
        if swapped is None or swapped == g:
            continue
        pa = g.degree_profile()
        pb = swapped.degree_profile()
        assert pa == pb
        assert star_criterion(pa, 300, 0.5, 5) == star_criterion(pb, 300, 0.5, 5)
        made += 1
    print("criterion 6 (degree-profile sufficiency): PASS")


# ---------------------------------------------------------------------------
# 7. Endpoint convexity of the surrogate
# ---------------------------------------------------------------------------

def test_criterion_07_endpoint_convexity():
    gen = rng(1007)
    for i in range(10**3):
        v = int(gen.integers(1, 15))
        degrees = [int(gen.integers(1, 500)) for _ in range(v)]
        if sum(degrees) % 2:
            degrees[0] += 1
        profile = DegreeProfile.from_degrees(degrees)
        n = int(gen.integers(max(degrees) + 2, 10**7))
        p = float(gen.uniform(0.02, 0.98))
        D = int(gen.integers(2, 11))
        crit = star_criterion(profile, n, p, D)
        best = max(x.surrogate for x in crit.per_t)
        assert best in (crit.per_t[0].surrogate, crit.per_t[-1].surrogate), i
        assert crit.endpoint_argmax
    print("criterion 7 (endpoint convexity): PASS")


# ---------------------------------------------------------------------------
# 8. PDS phase boundary on a 0.01 sweep grid
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("alpha,gamma", [(0.2, 0.0), (0.4, 0.3)])
def test_criterion_08_pds_phase_boundary(alpha, gamma, tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code = cli.main(["sweep", "--preset", "pds", "--n", "10^6",
                     "--alpha", str(alpha), "--gamma", str(gamma),
                     "--beta", "0:1:0.01", "--out", str(out)])
    assert code == 0
    rows = [r.split(",") for r in out.read_text().splitlines()[2:]]
    assert len(rows) == 101
    assert not any(r[-1] for r in rows)  # no per-cell errors
    flips = [float(r[3]) for r in rows if r[14] == "true"]
    assert flips, "no separating cell found"
    flip = min(flips)
    target = (2 + 2 * alpha + gamma) / 4
    assert abs(flip - target) <= 0.01 + 1e-9, (flip, target)
    # labels flip once from no-separation to a separating regime
    labels = [r[13] for r in rows]
    first_sep = labels.index(next(l for l in labels if l != "NoConstantDegreeSeparation"))
    assert all(l == "NoConstantDegreeSeparation" for l in labels[:first_sep])
    print(f"criterion 8 (PDS boundary alpha={alpha} gamma={gamma}): PASS "
          f"(flip at {flip:.2f}, formula {target:.3f})")


# ---------------------------------------------------------------------------
# 9. Counterexample with vanishing p: stars blind, clique count separates
# ---------------------------------------------------------------------------

def test_criterion_09_vanishing_p_counterexample():
    k = 8
    profile = DegreeProfile.flat(k, k - 1)
    for exp in range(10, 15):
        n = 2**exp
        crit = star_criterion(profile, n, n**-0.5, 6)
        for entry in crit.per_t:
            assert entry.adv <= 1.0, (n, entry)

    n = 4096
    model = PlantedModel(n, n**-0.5, parse_hspec("clique:8"))
    rep = estimate_separation(model, parse_statistic("clique-count:8"),
                              200, seed=1009)
    assert rep.type1 + rep.type2 <= 0.01
    assert rep.mean_p >= 1.0  # the planted copy alone contributes one clique
    print(f"criterion 9 (vanishing-p counterexample): PASS "
          f"(total error {rep.type1 + rep.type2:.3f})")


# ---------------------------------------------------------------------------
# 10. Counterexample with growing degree: closed-path trace
# ---------------------------------------------------------------------------

def test_criterion_10_trace_counterexample():
    n, k, l, p, trials, seed = 50, 21, 4, 0.5, 10**4, 1010
    model = PlantedModel(n, p, parse_hspec(f"clique:{k}"))
    stat = parse_statistic(f"trace:{l}")
    rep = estimate_separation(model, stat, trials, seed=seed)

    want_mean_p = falling_factorial(k, l)  # 143640
    assert want_mean_p == 143640
    assert abs(rep.mean_p - want_mean_p) <= 4 * rep.se_mean_p
    want_var_q = 2 * l * falling_factorial(n, l)  # 44217600
    assert abs(rep.var_q - want_var_q) <= 0.10 * want_var_q

    # star advantages at the same (n, k): Adv^2 <= (k^2/n) (e k^2 / (t n))^t,
    # with the t-independent leading factor k^2/n below 10
    assert k**2 / n < 10
    crit = star_criterion(DegreeProfile.flat(k, k - 1), n, p, 6)
    for entry in crit.per_t:
        t = entry.t
        bound = (k**2 / n) * (math.e * k**2 / (t * n)) ** t
        assert entry.adv**2 <= bound, (t, entry.adv**2, bound)
    print(f"criterion 10 (trace counterexample): PASS "
          f"(mean_p {rep.mean_p:.0f}, var_q/target "
          f"{rep.var_q / want_var_q:.3f})")


# ---------------------------------------------------------------------------
# 11. Concentration band as specified
# ---------------------------------------------------------------------------

@pytest.mark.xfail(
    strict=True,
    reason="unattainable as stated: the max of 10^4 Binomial(9999, 0.01) "
    "degrees exceeds 1.2*(k-1)*q ~ 120 in essentially every trial (the "
    "per-vertex tail bound ~ exp(-delta^2 (k-1) q / 3) = exp(-1.33) is far "
    "too weak for a maximum over 10^4 vertices; delta must be ~ "
    "sqrt(3 ln(2k)/(k q)) ~ 0.55 for the band to hold w.p. 0.99)",
)
def test_criterion_11_concentration_as_stated():
    rep = degree_concentration_check(10**4, 0.01, delta=0.2, trials=100, seed=1011)
    assert rep.pass_rate >= 0.99
    print("criterion 11 (concentration, delta=0.2): PASS")


def test_criterion_11_concentration_attainable_band():
    # companion check: the union-bound-correct band does concentrate
    rep = degree_concentration_check(10**4, 0.01, delta=0.55, trials=100, seed=1011)
    assert rep.pass_rate >= 0.99
    assert rep.edge_rate >= 0.99
    print(f"criterion 11 companion (delta=0.55): PASS "
          f"(pass rate {rep.pass_rate:.2f})")


# ---------------------------------------------------------------------------
# 12. Reproducibility
# ---------------------------------------------------------------------------

def test_criterion_12_reproducibility(tmp_path):
    model = PlantedModel(80, 0.5, parse_hspec("er:15,0.4"))
    stat = parse_statistic("star:2")
    a = estimate_separation(model, stat, 300, seed=1012)
    b = estimate_separation(model, stat, 300, seed=1012)
    assert a.to_dict() == b.to_dict()
    assert a.to_csv_row() == b.to_csv_row()

    outs = []
    for name in ("x", "y"):
        out = tmp_path / name
        assert cli.main(["simulate", "--preset", "pds:12,0.5", "--n", "60",
                         "--trials", "100", "--seed", "7",
                         "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]

    sweeps = []
    for name in ("s1", "s2"):
        out = tmp_path / name
        assert cli.main(["sweep", "--preset", "pbc", "--n", "10^4",
                         "--alpha", "0.5", "--beta", "0.3:0.7:0.05",
                         "--out", str(out)]) == 0
        sweeps.append(out.read_bytes())
    assert sweeps[0] == sweeps[1]
    print("criterion 12 (reproducibility): PASS")
