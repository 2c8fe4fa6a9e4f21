"""Command-line front door.

Subcommands: analyze (closed-form star criterion + regime), simulate
(Monte Carlo separation experiments), sweep (exponent phase diagrams, CSV),
oracle (exact cross-checks), shapes (canonical shape listing).

Every run embeds the library version, master seed, and its fully resolved
configuration in the output header; configurations round-trip through flat
key=value files (``--config``), with explicit flags taking precedence.

Exit codes: 0 ok, 2 configuration error, 3 budget error, 4 oracle residual.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .advantage import (
    RegimeMargins,
    analyze_profile,
    brute_force_advantage,
    classify_regime,
    exact_planted_second_moment,
    total_advantage,
)
from .errors import BudgetError, ConfigError
from .graphs import (
    DegreeProfile,
    Graph,
    Shape,
    count_labelled_copies,
    enumerate_patterns,
    enumerate_shapes,
    falling_factorial,
)
from .models import (
    ARM_H,
    HSpec,
    PlantedModel,
    parse_hspec,
    realize_h,
    sample_planted,
    trial_rng,
)
from .montecarlo import (
    DEFAULT_SEPARATION_THRESHOLD,
    MCReport,
    _jackknife_se_mean,
    estimate_separation,
)
from .report import csv_line, fmt_number, render_report
from .stats import TestStatistic, default_work_limit, evaluate, parse_statistic

# ---------------------------------------------------------------------------
# configuration plumbing
# ---------------------------------------------------------------------------


def parse_count(text) -> int:
    """Integer with scale notation: 400, 10^6, 2^14, 1e6."""
    s = str(text).strip().replace("_", "")
    if "^" in s:
        base, _, exp = s.partition("^")
        try:
            return int(base) ** int(exp)
        except ValueError as exc:
            raise ConfigError(f"bad count {text!r}") from exc
    try:
        return int(s)
    except ValueError:
        pass
    try:
        f = float(s)
    except ValueError as exc:
        raise ConfigError(f"bad count {text!r}") from exc
    if f != int(f):
        raise ConfigError(f"count {text!r} is not an integer")
    return int(f)


def _conv_float(text) -> float:
    try:
        return float(text)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad number {text!r}") from exc


def _conv_int(text) -> int:
    try:
        return int(str(text).strip())
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad integer {text!r}") from exc


@dataclass(frozen=True)
class Opt:
    name: str  # dest name; CLI flag is --name with '_' -> '-'
    conv: object = str
    default: str | None = None  # stored as string for exact round-trips
    required: bool = False
    help: str = ""


_COMMON = (
    Opt("seed", _conv_int, "0", help="master seed"),
    Opt("work_limit", parse_count, help="work budget override"),
    Opt("out", str, help="output path (default stdout)"),
    Opt("config", str, help="key=value config file (flags override)"),
)

OPTS: dict[str, tuple[Opt, ...]] = {
    "analyze": _COMMON + (
        Opt("h", str, required=True, help="HSpec, e.g. clique:80 or er:50,0.1"),
        Opt("n", parse_count, required=True),
        Opt("p", _conv_float, "0.5"),
        Opt("d", _conv_int, "3", help="max statistic degree D"),
        Opt("tau", _conv_float, "10"),
        Opt("eps_min", _conv_float, "0.05"),
        Opt("c_edge", _conv_float, "1"),
    ),
    "simulate": _COMMON + (
        Opt("preset", str, help="clique:k | pds:k,q | independent-set:k,d | "
                                "pbc:a,b | counterexample-small-p:gamma | "
                                "counterexample-trace:C,l"),
        Opt("h", str),
        Opt("n", parse_count, required=True),
        Opt("p", _conv_float),
        Opt("stat", str, help="star:t | shape:<hex> | clique-count:k | trace:l"),
        Opt("trials", parse_count, "1000"),
        Opt("threshold", _conv_float, str(DEFAULT_SEPARATION_THRESHOLD)),
        Opt("format", str, "report", help="report | csv"),
    ),
    "sweep": _COMMON + (
        Opt("preset", str, "pds", help="pds | pbc"),
        Opt("n", parse_count, required=True),
        Opt("alpha", _conv_float, required=True),
        Opt("gamma", _conv_float, "0"),
        Opt("beta", str, required=True, help="grid start:stop:step"),
        Opt("d", _conv_int, "6"),
        Opt("tau", _conv_float, "1", help="surrogate separation margin"),
        Opt("trials", parse_count, "0", help="MC trials per cell (0 = analytic)"),
    ),
    "oracle": _COMMON + (
        Opt("check", str, "battery",
            help="battery | double-count | pattern-count | aut | second-moment"),
        Opt("s1", str, "star:2"),
        Opt("s2", str, "star:2"),
        Opt("shape", str, "star:3"),
        Opt("trials", parse_count, "1500"),
        Opt("tol", _conv_float, "1e-9"),
    ),
    "shapes": _COMMON + (
        Opt("max_edges", _conv_int, "3"),
    ),
}


def emit_config(command: str, cfg: dict) -> str:
    lines = [f"command={command}"]
    for opt in OPTS[command]:
        if opt.name == "config":
            continue
        v = cfg.get(opt.name)
        if v is not None:
            lines.append(f"{opt.name}={v}")
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> dict:
    out = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"config line {ln}: expected key=value, got {raw!r}")
        out[key.strip()] = value.strip()
    return out


def resolve_config(command: str, ns: argparse.Namespace) -> dict:
    """defaults < config file < explicit flags; all values kept as strings."""
    cli = {opt.name: getattr(ns, opt.name) for opt in OPTS[command]}
    file_cfg = {}
    if cli.get("config"):
        with open(cli["config"]) as fh:
            file_cfg = parse_config(fh.read())
        cmd_key = file_cfg.pop("command", command)
        if cmd_key != command:
            raise ConfigError(
                f"config file is for {cmd_key!r}, not {command!r}")
        known = {o.name for o in OPTS[command]}
        unknown = set(file_cfg) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = {}
    for opt in OPTS[command]:
        v = cli.get(opt.name)
        if v is None:
            v = file_cfg.get(opt.name, opt.default)
        if v is None and opt.required:
            raise ConfigError(f"missing required option --{opt.name.replace('_', '-')}")
        cfg[opt.name] = v
    return cfg


def val(cfg: dict, command: str, name: str):
    raw = cfg.get(name)
    if raw is None:
        return None
    for opt in OPTS[command]:
        if opt.name == name:
            return opt.conv(raw)
    raise KeyError(name)


def header(command: str, cfg: dict) -> dict:
    return {
        "command": command,
        "version": __version__,
        "seed": val(cfg, command, "seed"),
        # out/config are I/O plumbing, not run identity; the same run must
        # produce bit-identical reports wherever it is written
        "config": {k: v for k, v in cfg.items()
                   if v is not None and k not in ("config", "out")},
    }


def _write(cfg: dict, text: str) -> None:
    out = cfg.get("out")
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_comment_header(command: str, cfg: dict) -> list[str]:
    items = " ".join(f"{k}={v}" for k, v in cfg.items()
                     if v is not None and k not in ("config", "out"))
    return [f"# starcount {__version__} {command} {items}"]


# ---------------------------------------------------------------------------
# shape text parsing (oracle/shapes helpers)
# ---------------------------------------------------------------------------


def parse_shape_text(text: str) -> Shape:
    kind, _, rest = text.strip().lower().partition(":")
    parts = [s for s in rest.split(",") if s] if rest else []
    try:
        if kind == "edge":
            return Shape.edge()
        if kind == "star":
            return Shape.star(int(parts[0]))
        if kind == "clique":
            return Shape.clique(int(parts[0]))
        if kind == "path":
            return Shape.path(int(parts[0]))
        if kind == "cycle":
            return Shape.cycle(int(parts[0]))
        if kind == "matching":
            return Shape.matching(int(parts[0]))
        if kind == "biclique":
            return Shape.biclique(int(parts[0]), int(parts[1]))
        if kind == "key":
            return Shape.from_key(bytes.fromhex(parts[0]))
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"bad shape {text!r}: {exc}") from exc
    raise ConfigError(f"unknown shape kind {kind!r}")


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------


def expand_preset(text: str, n: int) -> dict:
    """Preset -> {h, p, stat} defaults (explicit flags still win)."""
    name, _, rest = text.strip().partition(":")
    name = name.lower()
    parts = [s for s in rest.split(",") if s] if rest else []
    try:
        if name == "clique":
            k = parse_count(parts[0])
            p = float(parts[1]) if len(parts) > 1 else 0.5
            return {"h": f"clique:{k}", "p": p, "stat": "star:1"}
        if name == "pds":
            if len(parts) == 3:
                k, p, q = parse_count(parts[0]), float(parts[1]), float(parts[2])
            else:
                k, q = parse_count(parts[0]), float(parts[1])
                p = 0.5
            return {"h": f"er:{k},{q}", "p": p, "stat": "star:1"}
        if name == "independent-set":
            # planted independent set of size k in average degree d, analyzed
            # through the complement graph: planted k-clique at p = 1 - d/n
            k, d = parse_count(parts[0]), float(parts[1])
            if not 0 < d < n:
                raise ConfigError("independent-set needs 0 < d < n")
            return {"h": f"clique:{k}", "p": 1 - d / n, "stat": "star:1"}
        if name == "pbc":
            a, b = parse_count(parts[0]), parse_count(parts[1])
            p = float(parts[2]) if len(parts) > 2 else 0.5
            return {"h": f"biclique:{max(a, b)},{min(a, b)}",
                    "p": p, "stat": "star:1"}
        if name == "counterexample-small-p":
            gamma = float(parts[0])
            if gamma <= 0:
                raise ConfigError("counterexample-small-p needs gamma > 0")
            k = math.ceil(4 / gamma)
            return {"h": f"clique:{k}", "p": float(n) ** -gamma,
                    "stat": f"clique-count:{k}"}
        if name == "counterexample-trace":
            C, l = float(parts[0]), int(parts[1])
            k = round(C * math.sqrt(n))
            return {"h": f"clique:{k}", "p": 0.5, "stat": f"trace:{l}"}
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"bad preset {text!r}: {exc}") from exc
    raise ConfigError(f"unknown preset {name!r}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

# total_advantage walks labelled copies of every shape in H; skip it when the
# injective-map space outgrows this (override with --work-limit)
_TOTAL_BUDGET = 10**6


def cmd_analyze(cfg: dict) -> int:
    c = lambda name: val(cfg, "analyze", name)
    h_spec = parse_hspec(c("h"))
    n, p, d, seed = c("n"), c("p"), c("d"), c("seed")
    if not 0 < p < 1:
        raise ConfigError("p must lie in (0, 1)")
    h_graph = realize_h(h_spec, trial_rng(seed, 0, ARM_H))
    if h_graph.n > n:
        raise ConfigError(f"|V(H)| = {h_graph.n} exceeds n = {n}")
    margins = RegimeMargins(c_edge=c("c_edge"), eps_min=c("eps_min"), tau=c("tau"))
    budget = c("work_limit")
    if budget is None:
        budget = min(default_work_limit(), _TOTAL_BUDGET)
    within_budget = (1 <= d <= 8
                     and falling_factorial(h_graph.n, min(2 * d, h_graph.n)) <= budget)
    report = analyze_profile(
        h_graph.degree_profile(), n, p, d,
        h=h_graph if within_budget else None, margins=margins,
    )
    doc = header("analyze", cfg)
    doc["h"] = h_spec.text()
    doc["h_vertices"] = h_graph.n
    doc["h_edges"] = h_graph.m
    doc["result"] = report.to_dict()
    _write(cfg, render_report(doc))
    return 0


def cmd_simulate(cfg: dict) -> int:
    c = lambda name: val(cfg, "simulate", name)
    n = c("n")
    derived = expand_preset(cfg["preset"], n) if cfg.get("preset") else {}
    h_text = cfg.get("h") or derived.get("h")
    if h_text is None:
        raise ConfigError("simulate needs --h or --preset")
    p = c("p") if cfg.get("p") is not None else derived.get("p", 0.5)
    stat_text = cfg.get("stat") or derived.get("stat")
    if stat_text is None:
        raise ConfigError("simulate needs --stat or --preset")
    if not 0 < p < 1:
        raise ConfigError("p must lie in (0, 1)")
    model = PlantedModel(n, p, parse_hspec(h_text))
    stat = parse_statistic(stat_text)
    mc = estimate_separation(
        model, stat, c("trials"), c("seed"),
        work_limit=c("work_limit"), separation_threshold=c("threshold"),
    )
    if c("format") == "csv":
        lines = _csv_comment_header("simulate", cfg)
        lines.append(MCReport.CSV_HEADER)
        lines.append(mc.to_csv_row())
        _write(cfg, "\n".join(lines) + "\n")
    else:
        doc = header("simulate", cfg)
        doc["result"] = mc.to_dict()
        _write(cfg, render_report(doc))
    return 0


def _beta_grid(spec: str) -> list[float]:
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError as exc:
        raise ConfigError(f"bad grid {spec!r}; expected start:stop:step") from exc
    if step <= 0 or stop < start:
        raise ConfigError("grid needs step > 0 and stop >= start")
    count = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 12) for i in range(count)]


SWEEP_HEADER = (
    "preset,n,alpha,beta,gamma,size,p,delta,delta_threshold,m,m_threshold,"
    "max_surrogate,t_star,label,separating,edges_separating,mc_ratio,error"
)


def _sweep_cell(preset: str, n: int, alpha: float, beta: float, gamma: float):
    """(degree profile, HSpec, p, planted size) for one sweep cell."""
    r = float(n) ** gamma  # noise odds p/(1-p) = n^gamma
    p = r / (1 + r)
    if preset == "pds":
        k = max(2, round(float(n) ** beta))
        q = float(n) ** -alpha
        if q > 1:
            raise ConfigError("pds needs alpha >= 0")
        profile = DegreeProfile.flat(k, (k - 1) * q)
        return profile, HSpec("er", (k, q)), p, k
    if preset == "pbc":
        a = max(1, round(float(n) ** alpha))
        b = max(1, round(float(n) ** beta))
        profile = DegreeProfile.from_degrees([b] * a + [a] * b)
        return profile, HSpec("biclique", (max(a, b), min(a, b))), p, b
    raise ConfigError(f"unknown sweep preset {preset!r}")


def cmd_sweep(cfg: dict) -> int:
    c = lambda name: val(cfg, "sweep", name)
    preset = cfg["preset"]
    n, alpha, gamma = c("n"), c("alpha"), c("gamma")
    betas = _beta_grid(cfg["beta"])
    margins = RegimeMargins(tau=c("tau"))
    trials, seed, d = c("trials"), c("seed"), c("d")
    lines = _csv_comment_header("sweep", cfg)
    lines.append(SWEEP_HEADER)
    for beta in betas:
        row: list = [preset, n, alpha, beta, gamma]
        try:
            profile, h_spec, p, size = _sweep_cell(preset, n, alpha, beta, gamma)
            regime = classify_regime(profile, n, p, d, margins)
            q = regime.quantities
            separating = regime.max_surrogate > margins.tau
            edges_separating = q["m"] >= q["m_threshold"]
            mc_ratio = None
            if trials:
                model = PlantedModel(n, p, h_spec)
                stat = TestStatistic("star", t=q["t_star"], p=p)
                mc_ratio = estimate_separation(model, stat, trials, seed).separation_ratio
            row += [size, p, q["delta"], q["delta_threshold"], q["m"],
                    q["m_threshold"], regime.max_surrogate, q["t_star"],
                    regime.label, separating, edges_separating, mc_ratio, None]
        except (ConfigError, BudgetError, ValueError, OverflowError) as exc:
            row += [None] * 12 + [f"{type(exc).__name__}: {exc}"]
        lines.append(csv_line(row))
    _write(cfg, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# oracle battery
# ---------------------------------------------------------------------------


def _random_host(rng, max_n: int = 8) -> Graph:
    v = int(rng.integers(3, max_n + 1))
    edges = [(i, j) for i in range(v) for j in range(i + 1, v)
             if rng.random() < 0.5]
    return Graph.from_edges(v, edges)


def _check_double_count(s1: Shape, s2: Shape, host: Graph) -> int:
    """Residual of the pair-of-copies identity
    M_{S1,G} M_{S2,G} = sum over gluing patterns of M_{union,G}."""
    lhs = count_labelled_copies(s1, host) * count_labelled_copies(s2, host)
    by_union: dict[bytes, list] = {}
    for pat in enumerate_patterns(s1, s2):
        by_union.setdefault(pat.union_shape.canonical_key, []).append(pat)
    rhs = 0
    for key, pats in by_union.items():
        rhs += len(pats) * count_labelled_copies(Shape.from_key(key), host)
    return abs(lhs - rhs)


_BATTERY_PAIRS = (
    ("edge", "edge"),
    ("star:2", "star:2"),
    ("star:2", "edge"),
    ("clique:3", "edge"),
    ("clique:3", "star:2"),
    ("path:3", "star:2"),
    ("matching:2", "edge"),
)

_BATTERY_AUT = (
    ("edge", 2), ("star:2", 2), ("star:3", 6), ("clique:3", 6),
    ("clique:4", 24), ("path:3", 2), ("cycle:4", 8), ("matching:2", 8),
)


def cmd_oracle(cfg: dict) -> int:
    c = lambda name: val(cfg, "oracle", name)
    check, seed, tol = cfg["check"], c("seed"), c("tol")
    checks: list[dict] = []

    def add(name: str, residual: float, value=None):
        entry = {"name": name, "residual": residual, "pass": residual <= tol}
        if value is not None:
            entry["value"] = value
        checks.append(entry)

    if check in ("battery", "double-count"):
        rng = trial_rng(seed, 0, 0)
        hosts = [_random_host(rng) for _ in range(5)]
        pairs = _BATTERY_PAIRS if check == "battery" else ((cfg["s1"], cfg["s2"]),)
        for t1, t2 in pairs:
            s1, s2 = parse_shape_text(t1), parse_shape_text(t2)
            worst = max(_check_double_count(s1, s2, host) for host in hosts)
            add(f"double-count {t1} x {t2}", float(worst))
    if check == "battery":
        rng = trial_rng(seed, 1, 0)
        for i in range(20):
            n = int(rng.integers(4, 8))
            d = int(rng.integers(1, 4))
            p = [0.3, 0.5, 0.7][int(rng.integers(3))]
            h = _random_host(rng, max_n=min(n, 6))
            exact = brute_force_advantage(h, n, p, d)
            fast = total_advantage(h, n, p, d)
            resid = abs(fast - exact) / max(1.0, abs(exact))
            add(f"advantage oracle #{i} (n={n} d={d} p={p})", resid)
        for text, want in _BATTERY_AUT:
            got = parse_shape_text(text).aut_count
            add(f"aut {text}", float(abs(got - want)), value=got)
    if check in ("battery", "second-moment"):
        model = PlantedModel(6, 0.5, HSpec("clique", (3,)))
        shape = Shape.star(2)
        exact = exact_planted_second_moment(shape, realize_h(model.h), model.n, model.p)
        trials = c("trials")
        stat = TestStatistic("shape", shape=shape, p=model.p)
        sq = np.empty(trials)
        for i in range(trials):
            f = evaluate(stat, sample_planted(model, seed, i).graph)
            sq[i] = f * f
        se = _jackknife_se_mean(sq)
        resid = abs(float(sq.mean()) - exact)
        entry = {"name": "planted second moment (MC, 5 SE)",
                 "residual": resid, "se": se, "exact": exact,
                 "pass": resid <= 5 * se}
        checks.append(entry)
    if check == "pattern-count":
        s1, s2 = parse_shape_text(cfg["s1"]), parse_shape_text(cfg["s2"])
        count = len(enumerate_patterns(s1, s2))
        checks.append({"name": f"pattern-count {cfg['s1']} x {cfg['s2']}",
                       "value": count, "pass": True})
    if check == "aut":
        shape = parse_shape_text(cfg["shape"])
        checks.append({"name": f"aut {cfg['shape']}",
                       "value": shape.aut_count, "pass": True})
    if not checks:
        raise ConfigError(f"unknown check {check!r}")

    all_pass = all(e["pass"] for e in checks)
    doc = header("oracle", cfg)
    doc["checks"] = checks
    doc["all_pass"] = all_pass
    _write(cfg, render_report(doc))
    return 0 if all_pass else 4


def cmd_shapes(cfg: dict) -> int:
    max_edges = val(cfg, "shapes", "max_edges")
    shapes = enumerate_shapes(max_edges)  # raises on budget violation
    lines = _csv_comment_header("shapes", cfg)
    lines.append("key,vertices,edges,aut")
    for shape in shapes:
        lines.append(csv_line([shape.canonical_key.hex(), shape.s,
                               shape.edge_count, shape.aut_count]))
    _write(cfg, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

_DISPATCH = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "shapes": cmd_shapes,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starcount",
        description="Planted subgraph detection with constant-degree "
                    "polynomial (signed subgraph count) statistics.",
    )
    parser.add_argument("--version", action="version",
                        version=f"starcount {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for command, opts in OPTS.items():
        sp = sub.add_parser(command)
        for opt in opts:
            sp.add_argument(f"--{opt.name.replace('_', '-')}",
                            dest=opt.name, default=None, help=opt.help)
    return parser


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(ns.command, ns)
        # validate every typed option up front so bad configs exit 2 cleanly
        for opt in OPTS[ns.command]:
            val(cfg, ns.command, opt.name)
        return _DISPATCH[ns.command](cfg)
    except ConfigError as exc:
        print(f"starcount: config error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"starcount: budget error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"starcount: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
