"""Double-base asymmetric AdaBoost training loop and run dispatch."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import CostPair, Dataset, Ensemble, InputError, WeightState
from .csboost import adaboost_run, balanced_weights, cs_run
from .dbsolve import RoundErrors, RoundStatics, SearchStats, conditional_search, exhaustive_search
from .records import RoundLog, RunRecord
from .weak import StumpPool, ThresholdSpec, build_stump_pool

ALGOS = ("adaboost", "cs", "db", "db_nocs")


@dataclass(frozen=True)
class TrainConfig:
    cost: CostPair = CostPair(1, 1)
    rounds: int = 100
    pool_spec: ThresholdSpec = "all-midpoints"
    seed: int = 0
    algo: str = "db"
    # "default": uniform for adaboost/db, class-balanced for cs
    init: str = "default"

    def __post_init__(self):
        if int(self.rounds) != self.rounds or self.rounds < 1:
            raise InputError(f"rounds must be a positive integer, got {self.rounds}")
        if self.algo not in ALGOS:
            raise InputError(f"unknown algo {self.algo!r}; choose from {', '.join(ALGOS)}")
        if self.init not in ("default", "uniform", "balanced"):
            raise InputError(f"unknown init {self.init!r}")


def db_train(ds: Dataset, cfg: TrainConfig, initial_weights=None,
             pool: StumpPool | None = None) -> RunRecord:
    """Train with double-base subdistributions; ``algo="db_nocs"`` disables pruning."""
    if cfg.algo not in ("db", "db_nocs"):
        raise InputError(f"db_train needs algo db or db_nocs, got {cfg.algo!r}")
    pool = build_stump_pool(ds, cfg.pool_spec) if pool is None else pool
    if initial_weights is None and cfg.init == "balanced":
        initial_weights = balanced_weights(ds)
    w = WeightState.initial(ds, initial_weights)
    search = conditional_search if cfg.algo == "db" else exhaustive_search
    cost = cfg.cost
    cp, cn = cost.c_pos, cost.c_neg
    m = ds.pos_count
    ens = Ensemble(cost=cost)
    rec = RunRecord(cfg.algo, cost, ens, pool_size=len(pool),
                    initial_log_acc=(w.log_acc_pos, w.log_acc_neg))
    stats = SearchStats()
    d_pos, d_neg = w.d_pos.copy(), w.d_neg.copy()
    lap, lan = w.log_acc_pos, w.log_acc_neg
    t0 = time.perf_counter_ns()
    for t in range(1, cfg.rounds + 1):
        # fold this round's normalizers into the accumulators, then renormalize
        sp, sn = d_pos.sum(), d_neg.sum()
        lap += math.log(sp)
        lan += math.log(sn)
        d_pos /= sp
        d_neg /= sn
        w = WeightState(d_pos, d_neg, lap, lan, w.w_pos, w.w_neg)
        st = RoundStatics.from_state(w, cost)
        re = RoundErrors.compute(st, pool, w)
        res = search(st, pool, w, stats, re)
        if res is None:
            break
        stump = pool.stumps[res.stump_index]
        alpha = res.alpha
        h = stump.predict(ds.features).astype(float)
        d_pos = d_pos * np.exp(-cp * alpha * h[:m])
        d_neg = d_neg * np.exp(cn * alpha * h[m:])
        ens = ens.appended(stump, alpha)
        rec.per_round.append(RoundLog(
            t, res.stump_index, alpha, res.errors.eps_pos, res.errors.eps_neg, st.a, st.b,
            stats.roots_computed, stats.stumps_evaluated, time.perf_counter_ns() - t0,
            lap + math.log(d_pos.sum()), lan + math.log(d_neg.sum()),
        ))
    rec.ensemble = ens
    rec.roots_computed = stats.roots_computed
    rec.wall_nanos = time.perf_counter_ns() - t0
    return rec


def run(ds: Dataset, cfg: TrainConfig, pool: StumpPool | None = None,
        initial_weights=None) -> RunRecord:
    """Train ``ds`` with whichever algorithm ``cfg.algo`` names."""
    pool = build_stump_pool(ds, cfg.pool_spec) if pool is None else pool
    if initial_weights is None and cfg.init == "balanced":
        initial_weights = balanced_weights(ds)
    if cfg.algo == "adaboost":
        return adaboost_run(ds, pool, cfg.rounds, initial_weights)
    if cfg.algo == "cs":
        if initial_weights is None and cfg.init == "uniform":
            initial_weights = np.full(ds.n, 1.0 / ds.n)
        return cs_run(ds, pool, cfg.cost, cfg.rounds, initial_weights)
    return db_train(ds, cfg, initial_weights, pool)


def bound_trace(rec: RunRecord) -> list[float]:
    """Exponential bound W_P A_P + W_N A_N before training and after each round."""
    lp, ln_ = rec.initial_log_acc
    return [math.exp(lp) + math.exp(ln_)] + [r.bound for r in rec.per_round]


def direct_bound(ens: Ensemble, ds: Dataset, initial_weights=None) -> list[float]:
    """sum_i D_1(i) exp(-C_class y_i f_t(x_i)) for t = 0..T, from the ensemble itself."""
    D = np.full(ds.n, 1.0 / ds.n) if initial_weights is None else np.asarray(initial_weights)
    m = ds.pos_count
    C = np.where(np.arange(ds.n) < m, ens.cost.c_pos, ens.cost.c_neg)
    yf = ds.labels * ens.partial_scores(ds.features)
    return list(np.exp(-C * yf) @ D)


def training_error_trace(ens: Ensemble, ds: Dataset, initial_weights=None) -> list[float]:
    """Weighted 0/1 training error of each partial ensemble (score 0 -> +1)."""
    D = np.full(ds.n, 1.0 / ds.n) if initial_weights is None else np.asarray(initial_weights)
    scores = ens.partial_scores(ds.features)
    pred = np.where(scores >= 0, 1, -1)
    return list((pred != ds.labels) @ D)
