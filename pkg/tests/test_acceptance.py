"""Exit criteria for the package, run at their stated sizes and tolerances.

Each test records one PASS/FAIL line, printed in the terminal summary under
"acceptance criteria".
"""

import math
import random
import time
from collections import defaultdict

import numpy as np
import pytest

from swcol.cli import main as cli_main
from swcol.experiment import ExperimentConfig, log_grid, run_gnm, run_sweep, run_trials, summary_csv
from swcol.graph import Graph
from swcol.lattice import LatticeSpec, generate
from swcol.rewire import rewire
from swcol.rng import derive_trial_rng
from swcol.scaling import collapse_metric, curves_from_rows, find_best_exponent
from swcol.solver import Status, brute_force_colourable, solve

from conftest import ACCEPTANCE_LINES

TRIALS = 2000
PAPER_NU = 1.35


def report(number, ok, detail):
    ACCEPTANCE_LINES.append(f"C{number} {'PASS' if ok else 'FAIL'}: {detail}")
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail


@pytest.fixture(scope="module")
def square_sweep():
    cfg = ExperimentConfig(["square:4", "square:5", "square:6", "square:7"], log_grid(1e-3, 1, 20),
                           trials=TRIALS, seed=20_001)
    return run_sweep(cfg)


@pytest.fixture(scope="module")
def p1_rows():
    cfg = ExperimentConfig(["square:6", "cubic5:4", "cubic6:4"], [1.0], trials=TRIALS, seed=20_002)
    return {f"{r.family}:{r.L}": r for r in run_sweep(cfg)}


def test_c1_p0_colourability():
    specs = ["square:4", "square:5", "square:6", "square:7", "triangular:6", "triangular:9",
             "cubic6:3", "cubic6:4", "cubic6:5", "cubic5:4", "cubic5:6"]
    t0 = time.perf_counter()
    failed = [s for s in specs if solve(generate(LatticeSpec.parse(s)), 3).status is not Status.COLOURABLE]
    elapsed = time.perf_counter() - t0
    report(1, not failed and elapsed < 10,
           f"p=0 lattices 3-colourable: {len(specs) - len(failed)}/{len(specs)} in {elapsed:.2f}s (limit 10s)")


def test_c2_solver_matches_brute_force():
    rnd = random.Random(20_003)
    t0 = time.perf_counter()
    agree = total = 0
    for _ in range(1000):
        n = rnd.randint(1, 10)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        g = Graph.from_edges(n, rnd.sample(pairs, rnd.randint(0, len(pairs))))
        agree += (solve(g, 3).status is Status.COLOURABLE) == brute_force_colourable(g, 3)
        total += 1
    elapsed = time.perf_counter() - t0
    report(2, agree == total and elapsed < 60,
           f"solver vs brute force: {agree}/{total} agree in {elapsed:.1f}s (limit 60s)")


def test_c3_rewiring_invariants():
    specs = ["square:4", "square:5", "square:6", "square:7", "triangular:6", "cubic6:3", "cubic6:4", "cubic5:4"]
    ps = [0.001, 0.01, 0.1, 0.3, 0.5, 0.9, 1.0]
    seeds = 180  # 8 specs x 7 p x 180 seeds = 10,080 combinations
    lattices = {s: generate(LatticeSpec.parse(s)) for s in specs}
    moved = defaultdict(int)
    slots = defaultdict(int)
    violations = combos = 0
    t0 = time.perf_counter()
    for si, s in enumerate(specs):
        g = lattices[s]
        for pi, p in enumerate(ps):
            for seed in range(seeds):
                res = rewire(g, p, derive_trial_rng(20_004, (si * len(ps) + pi) * seeds + seed))
                h = res.graph
                edges = h.edges()
                ok = (h.m == g.m == len(edges) == len(set(edges))
                      and all(u != v for u, v in edges) and sum(h.degrees()) == 2 * g.m)
                violations += not ok
                moved[p] += res.rewired
                slots[p] += g.m
                combos += 1
    elapsed = time.perf_counter() - t0
    z = {}
    for p in ps:
        expected = p * slots[p]
        se = math.sqrt(slots[p] * p * (1 - p))
        z[p] = 0.0 if moved[p] == expected else (math.inf if se == 0 else (moved[p] - expected) / se)
    worst = max(abs(v) for v in z.values())
    report(3, violations == 0 and worst <= 3 and combos >= 10_000 and elapsed < 300,
           f"{combos} rewirings, {violations} invariant violations, worst pooled |z| of rewired count "
           f"{worst:.2f} (limit 3) in {elapsed:.1f}s")


def test_c4_gamma_ordering(p1_rows):
    sq, c5, c6 = p1_rows["square:6"], p1_rows["cubic5:4"], p1_rows["cubic6:4"]
    gap1 = sq.fraction - c5.fraction
    gap2 = c5.fraction - c6.fraction
    need1 = sq.half_width + c5.half_width
    need2 = c5.half_width + c6.half_width
    report(4, gap1 > need1 and gap2 > need2 and min(r.trials for r in (sq, c5, c6)) >= 2000,
           f"p=1 fractions square:6={sq.fraction:.4f} > cubic5:4={c5.fraction:.4f} > cubic6:4={c6.fraction:.4f}; "
           f"gaps {gap1:.4f}>{need1:.4f}, {gap2:.4f}>{need2:.4f}")


def test_c5_monotone_square7(square_sweep):
    rows = sorted((r for r in square_sweep if r.L == 7), key=lambda r: r.p)
    worst = max(b.fraction - a.fraction - (a.half_width + b.half_width) for a, b in zip(rows, rows[1:]))
    report(5, len(rows) == 20 and worst <= 0 and min(r.trials for r in rows) >= 2000,
           f"square:7 over {len(rows)} log-spaced p: largest rise beyond summed half-widths {worst:.4f} (must be <= 0)")


def test_c6_easy_hard_easy_cubic5():
    cfg = ExperimentConfig(["cubic5:4"], log_grid(1e-3, 1, 20), trials=TRIALS, seed=20_006)
    cells = run_trials(cfg)
    costs = [np.array([r.nodes_visited for r in recs if r.status is not Status.BUDGET_EXHAUSTED]) for recs in cells]
    medians = np.array([np.median(c) for c in costs])
    rng = np.random.default_rng(20_060)
    B = 1000
    boot = np.empty((B, len(costs)))
    for j, c in enumerate(costs):
        boot[:, j] = np.median(c[rng.integers(0, len(c), size=(B, len(c)))], axis=1)
    interior = boot[:, 1:-1].max(axis=1)
    support = float(np.mean((interior > boot[:, 0]) & (interior > boot[:, -1])))
    peak = int(np.argmax(medians))
    report(6, support >= 0.90 and 0 < peak < len(medians) - 1,
           f"cubic5:4 median cost {medians[0]:.0f} at p={cfg.p_grid[0]:g}, peak {medians[peak]:.0f} "
           f"at p={cfg.p_grid[peak]:.3g}, {medians[-1]:.0f} at p=1; bootstrap support {support:.3f} (need >= 0.90)")


def test_c7_square_collapse(square_sweep):
    curves = curves_from_rows(square_sweep, "square")
    a_star, m_star = find_best_exponent(curves, -3.0, 3.0, 0.05)
    m0 = collapse_metric(curves, 0.0)
    report(7, len(curves) == 4 and m_star <= 0.5 * m0,
           f"square L=4..7 collapse: best a*={a_star:+.2f} (|a*|={abs(a_star):.2f}; published exponent "
           f"{PAPER_NU}), metric {m_star:.3g} vs {m0:.3g} at a=0 (need <= 0.5x)")


def test_c8_random_graph_baseline(p1_rows):
    sq = p1_rows["square:6"]
    gnm = run_gnm(36, 72, sq.trials, seed=20_008)
    low = run_gnm(36, 63, TRIALS, seed=20_009)   # gamma = 3.5
    high = run_gnm(36, 99, TRIALS, seed=20_010)  # gamma = 5.5
    diff = abs(sq.fraction - gnm.fraction)
    widths = (low.ci_hi - low.ci_lo) + (high.ci_hi - high.ci_lo)
    straddle = low.fraction - high.fraction > widths
    report(8, diff <= 0.10 and straddle,
           f"p=1 square:6 fraction {sq.fraction:.4f} vs G(36,72) {gnm.fraction:.4f}: |diff|={diff:.4f} (limit 0.10); "
           f"G(36,63) {low.fraction:.4f} vs G(36,99) {high.fraction:.4f}, gap "
           f"{low.fraction - high.fraction:.4f} > CI widths {widths:.4f}: {straddle}")


def test_c9_determinism(tmp_path, monkeypatch):
    cfg = ExperimentConfig(["square:5", "cubic5:4", "triangular:6"], log_grid(0.01, 1, 6), trials=200, seed=20_011)
    texts = {w: summary_csv(run_sweep(cfg, workers=w)) for w in (1, 2, 3)}
    conf = tmp_path / "c.cfg"
    conf.write_text("lattices = square:5, cubic5:4, triangular:6\np_log = 0.01, 1, 6\ntrials = 200\nseed = 20011\n")
    outs = []
    for w in ("1", "3"):
        monkeypatch.setenv("SWCOL_WORKERS", w)
        out = tmp_path / f"w{w}.csv"
        assert cli_main(["sweep", "--config", str(conf), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    same = len(set(texts.values())) == 1 and outs[0] == outs[1] == texts[1].encode()
    report(9, same, f"sweep CSV byte-identical across worker counts 1/2/3 and via CLI: {same}")
