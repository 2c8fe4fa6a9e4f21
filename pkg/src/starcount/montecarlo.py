"""Monte Carlo verification harness.

Moment estimation under both arms, finite-n separation ratios, midpoint
threshold-test error rates with a calibration/evaluation split, the planted
second-moment ratio, and the G(k,q) degree/edge concentration check.

Trials are keyed by (master seed, trial index, arm) through models.trial_rng
and reduced in index order, so reports are bit-identical regardless of how
trials are scheduled.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .graphs import pair_count
from .models import PlantedModel, sample_null, sample_planted, trial_rng, _er_edge_index
from .stats import TestStatistic, evaluate

# A finite-n separation ratio this large is reported as "separating at this
# scale"; strong separation itself is asymptotic and never claimed.
DEFAULT_SEPARATION_THRESHOLD = 5.0


@dataclass(frozen=True)
class MCReport:
    statistic: str
    model: str
    trials: int
    mean_q: float
    se_mean_q: float
    var_q: float
    se_var_q: float
    mean_p: float
    se_mean_p: float
    var_p: float
    se_var_p: float
    separation_ratio: float
    separating_at_scale: bool
    threshold: float
    type1: float
    type2: float
    master_seed: int
    flags: tuple
    wall_clock: float  # informational; excluded from the deterministic body

    def to_dict(self) -> dict:
        # fixed key order; wall clock deliberately omitted (bit-exact contract)
        return {
            "statistic": self.statistic,
            "model": self.model,
            "trials": self.trials,
            "mean_q": self.mean_q,
            "se_mean_q": self.se_mean_q,
            "var_q": self.var_q,
            "se_var_q": self.se_var_q,
            "mean_p": self.mean_p,
            "se_mean_p": self.se_mean_p,
            "var_p": self.var_p,
            "se_var_p": self.se_var_p,
            "separation_ratio": self.separation_ratio,
            "separating_at_scale": self.separating_at_scale,
            "threshold": self.threshold,
            "type1": self.type1,
            "type2": self.type2,
            "master_seed": self.master_seed,
            "flags": list(self.flags),
        }

    CSV_HEADER = (
        "statistic,model,trials,mean_q,se_mean_q,var_q,se_var_q,"
        "mean_p,se_mean_p,var_p,se_var_p,separation_ratio,"
        "separating_at_scale,threshold,type1,type2,master_seed,flags"
    )

    def to_csv_row(self) -> str:
        from .report import csv_line

        d = self.to_dict()
        d["model"] = d["model"].replace(",", ";")
        d["flags"] = "|".join(self.flags)
        return csv_line(d.values())


def _jackknife_se_mean(x: np.ndarray) -> float:
    n = len(x)
    if n < 2:
        return 0.0
    return float(np.std(x, ddof=1) / np.sqrt(n))


def _jackknife_se_var(x: np.ndarray) -> float:
    """SE of the ddof=1 sample variance via leave-one-out."""
    n = len(x)
    if n < 3:
        return 0.0
    xbar = x.mean()
    dev2 = (x - xbar) ** 2
    s = dev2.sum()
    loo = (s - dev2 * n / (n - 1)) / (n - 2)
    return float(np.sqrt((n - 1) / n * ((loo - loo.mean()) ** 2).sum()))


def sample_values(model: PlantedModel, stat: TestStatistic, trials: int,
                  seed: int, work_limit: int | None = None):
    """Evaluate the statistic on `trials` null and planted samples."""
    if stat.p is None and stat.kind in ("star", "shape"):
        stat = stat.with_p(model.p)
    vq = np.empty(trials)
    vp = np.empty(trials)
    for i in range(trials):
        vq[i] = evaluate(stat, sample_null(model, seed, i), work_limit=work_limit)
        vp[i] = evaluate(stat, sample_planted(model, seed, i).graph,
                         work_limit=work_limit)
    return vq, vp


def empirical_error(values_q: np.ndarray, values_p: np.ndarray):
    """Midpoint threshold errors with a calibration/evaluation split.

    The threshold is the midpoint of the two calibration-half means; errors
    are counted on the held-out halves; sides follow the sign of the
    calibration gap.  Returns (type1, type2, threshold, degenerate).
    """
    nq, npl = len(values_q), len(values_p)
    cq, cp = values_q[: nq // 2], values_p[: npl // 2]
    eq, ep = values_q[nq // 2:], values_p[npl // 2:]
    mq, mp = float(np.mean(cq)), float(np.mean(cp))
    threshold = (mq + mp) / 2
    if mp == mq:
        return 0.5, 0.5, threshold, True
    if mp > mq:
        type1 = float(np.mean(eq > threshold))
        type2 = float(np.mean(ep <= threshold))
    else:
        type1 = float(np.mean(eq < threshold))
        type2 = float(np.mean(ep >= threshold))
    return type1, type2, threshold, False


def estimate_separation(model: PlantedModel, stat: TestStatistic, trials: int,
                        seed: int, work_limit: int | None = None,
                        separation_threshold: float = DEFAULT_SEPARATION_THRESHOLD) -> MCReport:
    if trials < 2:
        raise ValueError("need at least 2 trials per arm")
    t0 = time.monotonic()
    vq, vp = sample_values(model, stat, trials, seed, work_limit)
    flags = []
    sd_q = float(np.std(vq, ddof=1))
    sd_p = float(np.std(vp, ddof=1))
    gap = abs(float(np.mean(vp)) - float(np.mean(vq)))
    if sd_q == 0.0 and sd_p == 0.0:
        ratio = 0.0
        flags.append("zero-variance")
    else:
        ratio = gap / max(sd_p, sd_q)
    type1, type2, threshold, degenerate = empirical_error(vq, vp)
    if degenerate:
        flags.append("degenerate-threshold")
    if stat.p is None and stat.kind in ("star", "shape"):
        stat = stat.with_p(model.p)
    return MCReport(
        statistic=stat.text(),
        model=model.text(),
        trials=trials,
        mean_q=float(np.mean(vq)),
        se_mean_q=_jackknife_se_mean(vq),
        var_q=float(np.var(vq, ddof=1)),
        se_var_q=_jackknife_se_var(vq),
        mean_p=float(np.mean(vp)),
        se_mean_p=_jackknife_se_mean(vp),
        var_p=float(np.var(vp, ddof=1)),
        se_var_p=_jackknife_se_var(vp),
        separation_ratio=ratio,
        separating_at_scale=ratio >= separation_threshold,
        threshold=threshold,
        type1=type1,
        type2=type2,
        master_seed=seed,
        flags=tuple(flags),
        wall_clock=time.monotonic() - t0,
    )


@dataclass(frozen=True)
class RatioEstimate:
    ratio: float
    se: float
    flags: tuple


def second_moment_ratio(model: PlantedModel, shape, trials: int, seed: int,
                        work_limit: int | None = None) -> RatioEstimate:
    """E_P[f^2]/E_P[f]^2 with jackknife SE; flagged unstable when the planted
    mean is within 4 SE of zero."""
    stat = TestStatistic("shape", shape=shape, p=model.p)
    vals = np.empty(trials)
    for i in range(trials):
        vals[i] = evaluate(stat, sample_planted(model, seed, i).graph,
                           work_limit=work_limit)
    n = trials
    s1, s2 = vals.sum(), (vals**2).sum()
    m1, m2 = s1 / n, s2 / n
    flags = []
    if m1 == 0:
        return RatioEstimate(float("nan"), float("nan"), ("undefined-mean",))
    if abs(m1) < 4 * _jackknife_se_mean(vals):
        flags.append("unstable-ratio")
    loo_m1 = (s1 - vals) / (n - 1)
    loo_m2 = (s2 - vals**2) / (n - 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        loo = loo_m2 / loo_m1**2
    ratio = m2 / m1**2
    se = float(np.sqrt((n - 1) / n * ((loo - loo.mean()) ** 2).sum()))
    return RatioEstimate(float(ratio), se, tuple(flags))


@dataclass(frozen=True)
class ConcentrationReport:
    pass_rate: float
    max_degree_rate: float
    edge_rate: float
    trials: int


def degree_concentration_check(k: int, q: float, delta: float, trials: int,
                               seed: int) -> ConcentrationReport:
    """Fraction of G(k,q) samples whose max degree lies in (1 +- delta)(k-1)q
    and edge count in (1 +- delta) C(k,2) q."""
    deg_target = (k - 1) * q
    edge_target = pair_count(k) * q
    both = deg_ok_n = edge_ok_n = 0
    for i in range(trials):
        rng = trial_rng(seed, i, 0)
        idx = _er_edge_index(k, q, rng)
        if idx.size:
            from .graphs import index_to_pairs

            rows, cols = index_to_pairs(k, idx)
            deg = np.bincount(rows, minlength=k) + np.bincount(cols, minlength=k)
            max_deg = int(deg.max())
        else:
            max_deg = 0
        deg_ok = abs(max_deg - deg_target) <= delta * deg_target
        edge_ok = abs(idx.size - edge_target) <= delta * edge_target
        deg_ok_n += deg_ok
        edge_ok_n += edge_ok
        both += deg_ok and edge_ok
    return ConcentrationReport(
        pass_rate=both / trials,
        max_degree_rate=deg_ok_n / trials,
        edge_rate=edge_ok_n / trials,
        trials=trials,
    )
