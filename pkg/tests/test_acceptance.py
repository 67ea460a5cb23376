"""Acceptance criteria, each checked at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary and also when this file is run as a script.
"""

import math
import time
from functools import lru_cache

import numpy as np
import pytest
from scipy.stats import spearmanr

from adaboostdb.core import PAPER_GRID, CostPair
from adaboostdb.csboost import CsRoundParams, balanced_weights, cs_alpha_solve
from adaboostdb.data import SynthSpec, gen_synth
from adaboostdb.dbsolve import (RoundStatics, contribution_condition, eval_poly, poly_coefficients,
                                sign_changes, solve_round_root)
from adaboostdb.evaluate import (CostLine, GaussianScenario, bayes_classifier, kfold_eval,
                                 lower_envelope, rates, rates_from_predictions)
from adaboostdb.train import TrainConfig, bound_trace, run, training_error_trace
from adaboostdb.weak import ClassErrors, build_stump_pool

RESULTS: dict[int, str] = {}

TRAIN_SEED, TEST_SEED, CLOUDS_SEED = 11, 12, 13
CS_POOL_THRESHOLDS = 64    # keeps the per-stump CS solve inside the time budget
PRUNE_POOL_THRESHOLDS = 200  # >= 5000 stumps after dedup


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} | {detail}"
    print(RESULTS[n])


@lru_cache(maxsize=None)
def bayes_train():
    return gen_synth(SynthSpec("bayes", 500, 500, seed=TRAIN_SEED, n_angles=16))[0]


@lru_cache(maxsize=None)
def bayes_test(n_pos=500, n_neg=500):
    return gen_synth(SynthSpec("bayes", n_pos, n_neg, seed=TEST_SEED, n_angles=16))


@lru_cache(maxsize=None)
def clouds_train():
    return gen_synth(SynthSpec("twoclouds", 500, 500, seed=CLOUDS_SEED, n_angles=16))[0]


# -- criterion 1 -----------------------------------------------------------

@lru_cache(maxsize=None)
def symmetric_runs():
    t0 = time.perf_counter()
    ds = bayes_train()
    pool = build_stump_pool(ds)
    db = run(ds, TrainConfig(CostPair(1, 1), 50, algo="db"), pool=pool)
    ada = run(ds, TrainConfig(CostPair(1, 1), 50, algo="adaboost"), pool=pool)
    return db, ada, time.perf_counter() - t0


def test_criterion_1_symmetric_reduction():
    db, ada, secs = symmetric_runs()
    same = [r.stump_index for r in db.per_round] == [r.stump_index for r in ada.per_round]
    n = min(len(db.per_round), len(ada.per_round))
    dalpha = max(abs(a - b) for a, b in zip(db.ensemble.alphas[:n], ada.ensemble.alphas[:n]))
    ok = same and len(db.per_round) == 50 and dalpha <= 1e-9 and secs < 10
    record(1, ok, f"identical stumps={same}, rounds={len(db.per_round)}, "
                  f"max|dalpha|={dalpha:.2e}, {secs:.2f}s (pool {db.pool_size})")
    assert ok


# -- criterion 2 -----------------------------------------------------------

@lru_cache(maxsize=None)
def grid_runs():
    t0 = time.perf_counter()
    ds = bayes_train()
    pool = build_stump_pool(ds, CS_POOL_THRESHOLDS)
    out = {}
    for c in PAPER_GRID:
        out[c] = (run(ds, TrainConfig(c, 25, algo="cs"), pool=pool),
                  run(ds, TrainConfig(c, 25, algo="db"), pool=pool))
    return out, time.perf_counter() - t0


def test_criterion_2_db_cs_equivalence():
    runs, secs = grid_runs()
    test = bayes_test()[0]
    diverged, worst_alpha, worst_nec = [], 0.0, 0.0
    for c, (cs, db) in runs.items():
        a = [r.stump_index for r in cs.per_round]
        b = [r.stump_index for r in db.per_round]
        if a != b:
            first = next((i for i, (u, v) in enumerate(zip(a, b)) if u != v), min(len(a), len(b)))
            diverged.append(f"{c}@r{first + 1}")
        n = min(len(a), len(b))
        worst_alpha = max(worst_alpha, max(abs(u - v) for u, v in
                                           zip(cs.ensemble.alphas[:n], db.ensemble.alphas[:n])))
        worst_nec = max(worst_nec, abs(rates(cs.ensemble, test, c).nec - rates(db.ensemble, test, c).nec))
    ok = not diverged and worst_alpha <= 1e-6 and worst_nec <= 1e-3 and secs < 300
    record(2, ok, f"costs with differing stumps={len(diverged)}/19 {diverged}, "
                  f"max|dalpha|={worst_alpha:.2e}, max|dNEC|={worst_nec:.4f}, {secs:.1f}s")
    assert ok


# -- criterion 3 -----------------------------------------------------------

PRUNE_COSTS = (CostPair(1, 10), CostPair(1, 1), CostPair(10, 1))


@lru_cache(maxsize=None)
def pruning_runs():
    out = {}
    for name, ds in (("bayes", bayes_train()), ("twoclouds", clouds_train())):
        pool = build_stump_pool(ds, PRUNE_POOL_THRESHOLDS)
        for c in PRUNE_COSTS:
            out[name, c] = (run(ds, TrainConfig(c, 50, algo="db"), pool=pool),
                            run(ds, TrainConfig(c, 50, algo="db_nocs"), pool=pool))
    return out


def test_criterion_3_conditional_search_pruning():
    details, ok = [], True
    for (name, c), (db, nocs) in pruning_runs().items():
        frac = db.roots_computed / nocs.roots_computed
        speed = 1 - db.wall_nanos / nocs.wall_nanos
        ok &= db.pool_size >= 5000 and frac <= 0.02
        details.append(f"{name}{c}: {100 * frac:.2f}% roots (pool {db.pool_size}, time -{100 * speed:.1f}%)")
    record(3, ok, "; ".join(details))
    assert ok


# -- criterion 4 -----------------------------------------------------------

def _bisect(f, lo, hi):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_criterion_4_root_solver_fuzz():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    n = bad_sign = bad_root = bad_cs = 0
    worst_root = worst_cs = 0.0
    while n < 10_000:
        cp, cn = (int(v) for v in rng.integers(1, 26, 2))
        if math.gcd(cp, cn) != 1:
            continue
        cost = CostPair(cp, cn)
        a = float(rng.uniform(0, 1))
        if not 0 < a < 1:
            continue
        st = RoundStatics.from_a(a, cost)
        e = ClassErrors(*rng.uniform(0, 1, 2)).clamped()
        if not contribution_condition(st, e):
            continue
        n += 1
        bad_sign += sign_changes(poly_coefficients(st, e).values()) != 1
        r = solve_round_root(st, e)
        hi = 2.0
        while eval_poly(st, e, hi) <= 0:
            hi *= 2
        ref = _bisect(lambda x: eval_poly(st, e, x), 1.0, hi)
        rel = abs(r - ref) / ref
        worst_root = max(worst_root, rel)
        bad_root += rel > 1e-9
        # CS parameters with the same static weights: a = Cp Tp / (Cp Tp + Cn Tn)
        tp = (a / cp) / (a / cp + (1 - a) / cn)
        alpha = cs_alpha_solve(CsRoundParams(tp, 1 - tp, tp * e.eps_pos, (1 - tp) * e.eps_neg), cost)
        rel_cs = abs(math.exp(alpha) - r) / r
        worst_cs = max(worst_cs, rel_cs)
        bad_cs += rel_cs > 1e-9
    secs = time.perf_counter() - t0
    ok = bad_sign == bad_root == bad_cs == 0 and secs < 60
    record(4, ok, f"{n} instances: sign-change failures={bad_sign}, bisection worst rel={worst_root:.1e}, "
                  f"cs worst rel={worst_cs:.1e}, {secs:.1f}s")
    assert ok


# -- criterion 5 -----------------------------------------------------------

def test_criterion_5_bound_monotone_and_dominating():
    recs = []
    db, ada, _ = symmetric_runs()
    recs += [(db, bayes_train()), (ada, bayes_train())]
    for cs, dbr in grid_runs()[0].values():
        recs += [(cs, bayes_train()), (dbr, bayes_train())]
    for (name, _), pair in pruning_runs().items():
        ds = bayes_train() if name == "bayes" else clouds_train()
        recs += [(r, ds) for r in pair]
    not_decreasing = not_dominated = 0
    for rec, ds in recs:
        tr = bound_trace(rec)
        assert all(a > 0 for a in rec.ensemble.alphas)
        not_decreasing += any(not (y < x) for x, y in zip(tr, tr[1:]))
        init = balanced_weights(ds) if rec.algo == "cs" else None
        err = training_error_trace(rec.ensemble, ds, init)
        not_dominated += any(e > b for e, b in zip(err, tr))
    ok = not_decreasing == 0 and not_dominated == 0
    record(5, ok, f"{len(recs)} runs: non-decreasing traces={not_decreasing}, "
                  f"error above bound={not_dominated}")
    assert ok


# -- criterion 6 -----------------------------------------------------------

def test_criterion_6_asymmetric_trend():
    ds = clouds_train()
    fn, fp, gam = [], [], []
    for c in PAPER_GRID:
        rp = kfold_eval(ds, TrainConfig(c, 50), 3, seed=CLOUDS_SEED)
        fn.append(rp.fn_rate)
        fp.append(rp.fp_rate)
        gam.append(c.gamma)
    r_fn, r_fp = spearmanr(fn, gam)[0], spearmanr(fp, gam)[0]
    ok = r_fn <= -0.8 and r_fp >= 0.8
    record(6, ok, f"spearman(FN, gamma)={r_fn:.3f}, spearman(FP, gamma)={r_fp:.3f}")
    assert ok


# -- criterion 7 -----------------------------------------------------------

def test_criterion_7_bayes_oracle_proximity():
    ds = bayes_train()
    pool = build_stump_pool(ds)
    test, pts = bayes_test(1000, 1000)
    sc = GaussianScenario.from_params(SynthSpec("bayes").params)
    gaps, ok = [], True
    for c in (CostPair(1, 10), CostPair(1, 3), CostPair(1, 1), CostPair(3, 1), CostPair(10, 1)):
        ens = run(ds, TrainConfig(c, 50), pool=pool).ensemble
        nec_db = rates(ens, test, c).nec
        nec_bayes = rates_from_predictions(bayes_classifier(sc, c).predict(pts), test.labels, c).nec
        ok &= nec_db <= nec_bayes + 0.05
        gaps.append(f"{c}: {nec_db:.4f} vs {nec_bayes:.4f}")
    record(7, ok, "NEC db vs bayes " + "; ".join(gaps))
    assert ok


# -- criterion 8 -----------------------------------------------------------

def test_criterion_8_envelope_correctness():
    test = bayes_test()[0]
    lines = [CostLine.of(rates(db.ensemble, test, c)) for c, (_, db) in grid_runs()[0].items()]
    env = lower_envelope(lines, 1000)
    violations = sum(v > ln.at(p) for p, v in env for ln in lines)
    ok = len(env) == 1001 and len(lines) == 19 and violations == 0
    record(8, ok, f"{len(lines)} lines x {len(env)} points, violations={violations}")
    assert ok


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
