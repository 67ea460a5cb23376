"""Reference trainers: discrete AdaBoost and Cost-Sensitive AdaBoost.

Both share the stump pool and error sweeps with the double-base trainer so
that benchmark timings differ only in how each round's weight is found.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import CostPair, Dataset, Ensemble, InputError, NumericalError, PreconditionError
from .dbsolve import MAX_DOUBLINGS, ROOT_RTOL, TIE_RTOL
from .records import RoundLog, RunRecord
from .roots import zeroin
from .weak import StumpPool, clamp_errors


@dataclass(frozen=True)
class CsRoundParams:
    t_pos: float
    t_neg: float
    b_err: float
    d_err: float


def _exp(t: float) -> float:
    return math.exp(t) if t < 709.0 else math.inf


def _cs_equation(p: CsRoundParams, cp: int, cn: int):
    def g(alpha: float) -> float:
        ep, en = _exp(cp * alpha), _exp(cn * alpha)
        emp, emn = _exp(-cp * alpha), _exp(-cn * alpha)
        # 2 C B cosh(C a) written as C B (e^{Ca} + e^{-Ca})
        return (cp * p.b_err * (ep + emp) + cn * p.d_err * (en + emn)
                - cp * p.t_pos * emp - cn * p.t_neg * emn)
    return g


def cs_alpha_solve(p: CsRoundParams, cost: CostPair, rtol: float = ROOT_RTOL) -> float:
    """Solve 2CpB cosh(Cp a) + 2CnD cosh(Cn a) = Cp Tp e^{-Cp a} + Cn Tn e^{-Cn a}."""
    if not (p.b_err < p.t_pos or p.d_err < p.t_neg):
        raise PreconditionError("stump is wrong on every example; no finite solution")
    g = _cs_equation(p, cost.c_pos, cost.c_neg)
    g0 = g(0.0)
    if g0 == 0.0:
        return 0.0
    step = 1.0 if g0 < 0 else -1.0
    near, far = 0.0, step
    g_near, g_far = g0, g(far)
    for _ in range(MAX_DOUBLINGS):
        if (g_far > 0) != (g0 > 0):
            break
        near, g_near = far, g_far
        far *= 2.0
        g_far = g(far)
    else:
        raise NumericalError(f"no sign change for cost equation with {p}")
    if near < far:
        return zeroin(g, near, far, rtol=rtol, fa=g_near, fb=g_far)
    return zeroin(g, far, near, rtol=rtol, fa=g_far, fb=g_near)


def cs_loss(p: CsRoundParams, cost: CostPair, alpha: float) -> float:
    cp, cn = cost.c_pos, cost.c_neg
    return (p.b_err * (_exp(cp * alpha) - _exp(-cp * alpha)) + p.t_pos * _exp(-cp * alpha)
            + p.d_err * (_exp(cn * alpha) - _exp(-cn * alpha)) + p.t_neg * _exp(-cn * alpha))


def balanced_weights(ds: Dataset) -> np.ndarray:
    m, n = ds.pos_count, ds.n
    return np.concatenate([np.full(m, 0.5 / m), np.full(n - m, 0.5 / (n - m))])


def _check(ds: Dataset, pool: StumpPool, rounds: int):
    if rounds < 1:
        raise InputError("rounds must be >= 1")
    if len(pool) == 0:
        raise InputError("stump pool is empty")
    if pool.ds is not ds and pool.ds.n != ds.n:
        raise InputError("pool was built on a different dataset")


def adaboost_run(ds: Dataset, pool: StumpPool, rounds: int, initial_weights=None) -> RunRecord:
    """Discrete AdaBoost with the same stump pool, instrumented like the others."""
    _check(ds, pool, rounds)
    n, m = ds.n, ds.pos_count
    D = np.full(n, 1.0 / n) if initial_weights is None else np.array(initial_weights, dtype=float)
    log_scale = 0.0
    ens = Ensemble(cost=CostPair(1, 1))
    rec = RunRecord("adaboost", CostPair(1, 1), ens, pool_size=len(pool),
                    initial_log_acc=(math.log(D[:m].sum()), math.log(D[m:].sum())))
    evaluated = 0
    t0 = time.perf_counter_ns()
    for t in range(1, rounds + 1):
        eps = clamp_errors(pool.weighted_error_array(D))
        evaluated += len(pool)
        e_min = float(eps.min())
        if e_min >= 0.5:
            break
        f = int(np.flatnonzero(eps <= e_min * (1.0 + TIE_RTOL))[0])
        e = float(eps[f])
        alpha = 0.5 * math.log((1.0 - e) / e)
        stump = pool.stumps[f]
        yh = ds.labels * stump.predict(ds.features)
        wrong = yh < 0
        tp, tn = D[:m].sum(), D[m:].sum()
        eps_pos = D[:m][wrong[:m]].sum() / tp
        eps_neg = D[m:][wrong[m:]].sum() / tn
        D = D * np.exp(-alpha * yh)
        z = D.sum()
        log_scale += math.log(z)
        D /= z
        ens = ens.appended(stump, alpha)
        rec.per_round.append(RoundLog(
            t, f, alpha, float(eps_pos), float(eps_neg), float(tp), float(tn),
            0, evaluated, time.perf_counter_ns() - t0,
            log_scale + math.log(D[:m].sum()), log_scale + math.log(D[m:].sum()),
        ))
    rec.ensemble = ens
    rec.wall_nanos = time.perf_counter_ns() - t0
    return rec


def adaboost_train(ds: Dataset, pool: StumpPool, rounds: int, initial_weights=None) -> Ensemble:
    return adaboost_run(ds, pool, rounds, initial_weights).ensemble


def cs_round_params(D: np.ndarray, m: int, pool: StumpPool):
    """(T_P, T_N, B[F], D[F]) for the normalized joint distribution D."""
    t_pos, t_neg = float(D[:m].sum()), float(D[m:].sum())
    ep, en = pool.class_error_arrays(D[:m] / t_pos, D[m:] / t_neg)
    return t_pos, t_neg, t_pos * clamp_errors(ep), t_neg * clamp_errors(en)


def cs_run(ds: Dataset, pool: StumpPool, cost: CostPair, rounds: int,
           initial_weights=None) -> RunRecord:
    """Cost-Sensitive AdaBoost: solve and score every stump each round."""
    _check(ds, pool, rounds)
    n, m = ds.n, ds.pos_count
    cp, cn = cost.c_pos, cost.c_neg
    D = balanced_weights(ds) if initial_weights is None else np.array(initial_weights, dtype=float)
    D = D / D.sum()
    log_scale = 0.0
    ens = Ensemble(cost=cost)
    rec = RunRecord("cs", cost, ens, pool_size=len(pool),
                    initial_log_acc=(math.log(D[:m].sum()), math.log(D[m:].sum())))
    roots = evaluated = 0
    F = len(pool)
    t0 = time.perf_counter_ns()
    for t in range(1, rounds + 1):
        z = D.sum()
        log_scale += math.log(z)
        D = D / z
        t_pos, t_neg, B, Dm = cs_round_params(D, m, pool)
        alphas = np.empty(F)
        losses = np.empty(F)
        for f in range(F):
            p = CsRoundParams(t_pos, t_neg, float(B[f]), float(Dm[f]))
            a = cs_alpha_solve(p, cost)
            alphas[f] = a
            losses[f] = cs_loss(p, cost, a)
        roots += F
        evaluated += F
        ok = alphas > 0
        if not ok.any():
            break
        l_min = float(losses[ok].min())
        f = int(np.flatnonzero(ok & (losses <= l_min * (1.0 + TIE_RTOL)))[0])
        alpha = float(alphas[f])
        stump = pool.stumps[f]
        h = stump.predict(ds.features).astype(float)
        D = D * np.concatenate([np.exp(-cp * alpha * h[:m]), np.exp(cn * alpha * h[m:])])
        ens = ens.appended(stump, alpha)
        sp, sn = D[:m].sum(), D[m:].sum()
        rec.per_round.append(RoundLog(
            t, f, alpha, float(B[f] / t_pos), float(Dm[f] / t_neg),
            cp * t_pos / (cp * t_pos + cn * t_neg), cn * t_neg / (cp * t_pos + cn * t_neg),
            roots, evaluated, time.perf_counter_ns() - t0,
            log_scale + math.log(sp), log_scale + math.log(sn),
        ))
    rec.ensemble = ens
    rec.roots_computed = roots
    rec.wall_nanos = time.perf_counter_ns() - t0
    return rec


def cs_train(ds: Dataset, pool: StumpPool, cost: CostPair, rounds: int,
             initial_weights=None) -> Ensemble:
    return cs_run(ds, pool, cost, rounds, initial_weights).ensemble
