"""Seeded Monte Carlo sweeps: generate, rewire and solve for every (lattice, p) cell."""

from __future__ import annotations

import csv
import io
import math
import os
import statistics
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._validation import check_positive_int, check_probability
from .lattice import LatticeSpec, generate
from .rewire import random_graph, rewire
from .rng import ALGORITHMS, derive_trial_rng
from .solver import DEFAULT_MAX_NODES, SolveBudget, Status, solve

CSV_COLUMNS = (
    "family", "L", "N", "gamma", "p", "trials", "colourable", "uncolourable", "exhausted",
    "fraction", "ci_lo", "ci_hi", "cost_mean", "cost_median", "cost_max",
)
WORKERS_ENV = "SWCOL_WORKERS"


def log_grid(start: float = 1e-3, stop: float = 1.0, count: int = 20) -> list[float]:
    """``count`` log-spaced values from ``start`` to ``stop`` inclusive."""
    return [float(x) for x in np.geomspace(start, stop, count)]


@dataclass
class ExperimentConfig:
    lattices: list[LatticeSpec]
    p_grid: list[float] = field(default_factory=log_grid)
    trials: int = 1000
    k: int = 3
    max_nodes: int | None = DEFAULT_MAX_NODES
    seed: int = 0
    rng: str = "default"
    workers: int = 1
    fix_first_colour: bool = True
    raw_dir: str | None = None

    def __post_init__(self):
        self.lattices = [s if isinstance(s, LatticeSpec) else LatticeSpec.parse(s) for s in self.lattices]
        if not self.lattices:
            raise ValueError("at least one lattice spec is required")
        if not self.p_grid:
            raise ValueError("p grid is empty")
        self.p_grid = sorted({check_probability(float(p)) for p in self.p_grid})
        check_positive_int(self.trials, "trials")
        check_positive_int(self.k, "k")
        check_positive_int(self.workers, "workers")
        SolveBudget(self.max_nodes)
        if self.rng not in ALGORITHMS:
            raise ValueError(f"unknown rng {self.rng!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError("seed must be a non-negative integer")

    def cells(self) -> list[tuple[LatticeSpec, float]]:
        """All (spec, p) cells in output order: by family, L, then p."""
        return [(s, p) for s in sorted(set(self.lattices)) for p in self.p_grid]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lattices"] = [str(s) for s in sorted(set(self.lattices))]
        return d


def load_config(text: str) -> ExperimentConfig:
    """Parse the flat ``key = value`` sweep configuration format.

    Blank lines and ``#`` comments are ignored. Keys:

    ``lattices`` (required)
        comma-separated ``family:L`` items
    ``p``
        comma-separated explicit probabilities
    ``p_log``
        ``start, stop, count`` for a log-spaced grid (merged with ``p``)
    ``trials``, ``k``, ``max_nodes`` (``none`` = unbounded), ``seed``,
    ``rng`` (``default`` | ``mitchell-moore``), ``workers``,
    ``fix_first_colour`` (true/false), ``raw_dir``
    """
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in raw:
            raise ValueError(f"config line {lineno}: duplicate key {key!r}")
        raw[key] = value

    def items(v: str) -> list[str]:
        return [s.strip() for s in v.split(",") if s.strip()]

    known = {"lattices", "p", "p_log", "trials", "k", "max_nodes", "seed", "rng", "workers", "fix_first_colour", "raw_dir"}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if "lattices" not in raw:
        raise ValueError("config must set 'lattices'")
    kwargs: dict = {"lattices": [LatticeSpec.parse(s) for s in items(raw["lattices"])]}
    grid: list[float] = []
    if "p" in raw:
        grid += [float(x) for x in items(raw["p"])]
    if "p_log" in raw:
        parts = items(raw["p_log"])
        if len(parts) != 3:
            raise ValueError("p_log needs start, stop, count")
        grid += log_grid(float(parts[0]), float(parts[1]), int(parts[2]))
    if grid:
        kwargs["p_grid"] = grid
    for key in ("trials", "k", "seed", "workers"):
        if key in raw:
            kwargs[key] = int(raw[key])
    if "max_nodes" in raw:
        kwargs["max_nodes"] = None if raw["max_nodes"].lower() == "none" else int(raw["max_nodes"])
    if "rng" in raw:
        kwargs["rng"] = raw["rng"]
    if "fix_first_colour" in raw:
        flag = raw["fix_first_colour"].lower()
        if flag not in ("true", "false"):
            raise ValueError("fix_first_colour must be true or false")
        kwargs["fix_first_colour"] = flag == "true"
    if "raw_dir" in raw:
        kwargs["raw_dir"] = raw["raw_dir"]
    return ExperimentConfig(**kwargs)


@dataclass(frozen=True)
class TrialRecord:
    spec: str
    p: float
    trial: int
    status: Status
    nodes_visited: int
    rewired: int
    skipped: int


@dataclass(frozen=True)
class SummaryRow:
    family: str
    L: int
    N: int
    gamma: float
    p: float
    trials: int
    colourable: int
    uncolourable: int
    exhausted: int
    fraction: float
    ci_lo: float
    ci_hi: float
    cost_mean: float
    cost_median: float
    cost_max: float

    @property
    def decided(self) -> int:
        return self.colourable + self.uncolourable

    @property
    def exhausted_fraction(self) -> float:
        return self.exhausted / self.trials

    @property
    def half_width(self) -> float:
        return (self.ci_hi - self.ci_lo) / 2


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("Wilson interval needs at least one trial")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes={successes} outside 0..{trials}")
    z = statistics.NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


CostStats = namedtuple("CostStats", "mean median max censored")


def cost_stats(records: Iterable[TrialRecord]) -> CostStats:
    """Mean, median and max of ``nodes_visited`` over decided trials.

    Budget-exhausted trials are left out of the statistics and counted in
    ``censored``.
    """
    costs = []
    censored = 0
    for r in records:
        if r.status is Status.BUDGET_EXHAUSTED:
            censored += 1
        else:
            costs.append(r.nodes_visited)
    if not costs:
        raise ValueError("no decided trials to summarise")
    return CostStats(statistics.fmean(costs), statistics.median(costs), max(costs), censored)


def _run_chunk(args) -> list[TrialRecord]:
    spec, p, first_index, count, cfg = args
    lattice = generate(spec)
    budget = SolveBudget(cfg["max_nodes"])
    out = []
    for t in range(first_index, first_index + count):
        rng = derive_trial_rng(cfg["seed"], t, cfg["rng"])
        rw = rewire(lattice, p, rng)
        g = rw.graph
        if g.m != lattice.m or sum(g.degrees()) != 2 * lattice.m:
            raise AssertionError(f"trial {t}: edge conservation violated")
        res = solve(g, cfg["k"], budget, cfg["fix_first_colour"])
        out.append(TrialRecord(str(spec), p, t, res.status, res.nodes_visited, rw.rewired, rw.skipped))
    return out


def _resolve_workers(config: ExperimentConfig) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return check_positive_int(int(env), WORKERS_ENV)
    return config.workers


def run_trials(config: ExperimentConfig, workers: int | None = None) -> list[list[TrialRecord]]:
    """Raw trial records, one list per cell in :meth:`ExperimentConfig.cells` order."""
    cells = config.cells()
    cfg = {"seed": config.seed, "rng": config.rng, "k": config.k,
           "max_nodes": config.max_nodes, "fix_first_colour": config.fix_first_colour}
    nworkers = workers if workers is not None else _resolve_workers(config)
    chunk = max(1, min(config.trials, 250))
    jobs = []
    for ci, (spec, p) in enumerate(cells):
        base = ci * config.trials
        for start in range(0, config.trials, chunk):
            jobs.append((spec, p, base + start, min(chunk, config.trials - start), cfg))
    if nworkers == 1:
        results = [_run_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            results = list(pool.map(_run_chunk, jobs))
    flat = sorted((r for chunk_out in results for r in chunk_out), key=lambda r: r.trial)
    return [flat[i * config.trials:(i + 1) * config.trials] for i in range(len(cells))]


def summarize_cell(family: str, L: int, N: int, gamma: float, p: float,
                   records: Sequence[TrialRecord]) -> SummaryRow:
    n_col = sum(r.status is Status.COLOURABLE for r in records)
    n_unc = sum(r.status is Status.UNCOLOURABLE for r in records)
    n_exh = len(records) - n_col - n_unc
    decided = n_col + n_unc
    if decided:
        frac = n_col / decided
        lo, hi = wilson_interval(n_col, decided)
        stats = cost_stats(records)
        mean, median, cmax = stats.mean, stats.median, stats.max
    else:
        frac = lo = hi = mean = median = cmax = math.nan
    return SummaryRow(family, L, N, gamma, p, len(records), n_col, n_unc, n_exh,
                      frac, lo, hi, mean, median, cmax)


def run_sweep(config: ExperimentConfig, workers: int | None = None) -> list[SummaryRow]:
    """Run every cell of ``config`` and aggregate it into one row per cell.

    The result depends only on ``config``: each trial draws from
    ``derive_trial_rng(seed, cell_ordinal * trials + t)`` regardless of
    which worker executes it. If ``config.raw_dir`` is set, raw records are
    also written there, one CSV per cell.
    """
    per_cell = run_trials(config, workers)
    rows = []
    for (spec, p), records in zip(config.cells(), per_cell):
        rows.append(summarize_cell(spec.family.value, spec.L, spec.N, spec.gamma, p, records))
        if config.raw_dir:
            write_raw_records(Path(config.raw_dir), spec, p, records)
    return rows


def run_gnm(n: int, m: int, trials: int, seed: int = 0, k: int = 3,
            max_nodes: int | None = DEFAULT_MAX_NODES, rng: str = "default") -> SummaryRow:
    """Same statistics as one sweep cell, for the uniform G(n, m) ensemble."""
    budget = SolveBudget(max_nodes)
    recs = []
    for t in range(trials):
        g = random_graph(n, m, derive_trial_rng(seed, t, rng))
        res = solve(g, k, budget)
        recs.append(TrialRecord(f"gnm:{n}:{m}", 1.0, t, res.status, res.nodes_visited, 0, 0))
    gamma = 2 * m // n if (2 * m) % n == 0 else 2 * m / n
    return summarize_cell("gnm", n, n, gamma, 1.0, recs)


def format_p(p: float) -> str:
    return np.format_float_positional(p, trim="-")


def _fmt6(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.6f}"


def summary_csv(rows: Iterable[SummaryRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([
            r.family, r.L, r.N, r.gamma, format_p(r.p), r.trials, r.colourable, r.uncolourable,
            r.exhausted, _fmt6(r.fraction), _fmt6(r.ci_lo), _fmt6(r.ci_hi), _fmt6(r.cost_mean),
            _fmt6(r.cost_median), "nan" if math.isnan(r.cost_max) else str(int(r.cost_max)),
        ])
    return buf.getvalue()


def read_summary_csv(text: str) -> list[SummaryRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}; expected {','.join(CSV_COLUMNS)}")
    rows = []
    for i, rec in enumerate(reader, 2):
        try:
            rows.append(SummaryRow(
                rec["family"], int(rec["L"]), int(rec["N"]), _num(rec["gamma"]), float(rec["p"]),
                int(rec["trials"]), int(rec["colourable"]), int(rec["uncolourable"]), int(rec["exhausted"]),
                float(rec["fraction"]), float(rec["ci_lo"]), float(rec["ci_hi"]),
                float(rec["cost_mean"]), float(rec["cost_median"]), float(rec["cost_max"]),
            ))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"CSV line {i}: {exc}") from None
    return rows


def _num(text: str):
    x = float(text)
    return int(x) if x.is_integer() else x


def write_raw_records(directory: Path, spec: LatticeSpec, p: float, records: Sequence[TrialRecord]) -> Path:
    from ._io import atomic_write_text

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["trial", "status", "nodes_visited", "rewired", "skipped"])
    for r in records:
        w.writerow([r.trial, r.status.value, r.nodes_visited, r.rewired, r.skipped])
    path = Path(directory) / f"{spec.family.value}_L{spec.L}_p{format_p(p)}.csv"
    atomic_write_text(path, buf.getvalue())
    return path


__all__ = [
    "CSV_COLUMNS", "CostStats", "ExperimentConfig", "SummaryRow", "TrialRecord",
    "cost_stats", "load_config", "log_grid", "read_summary_csv", "run_gnm", "run_sweep",
    "run_trials", "summarize_cell", "summary_csv", "wilson_interval",
]
