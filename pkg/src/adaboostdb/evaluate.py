"""Cost-space evaluation: rates, PCF/NEC, lower envelopes, Bayes oracle, k-fold CV."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .core import CostPair, Dataset, Ensemble, InputError
from .data import STREAM_CV, project, rng_for


@dataclass(frozen=True)
class RatePoint:
    fn_rate: float
    fp_rate: float
    ce: float
    nec: float
    pcf: float = 0.5

    @classmethod
    def mean(cls, points: list["RatePoint"]) -> "RatePoint":
        return cls(*(float(np.mean([getattr(p, f.name) for p in points])) for f in fields(cls)))


@dataclass(frozen=True)
class CostLine:
    """Expected normalized cost of one classifier as a function of PCF."""

    fp_at_0: float
    fn_at_1: float

    def at(self, pcf):
        return self.fn_at_1 * pcf + self.fp_at_0 * (1.0 - pcf)

    @classmethod
    def of(cls, rp: RatePoint) -> "CostLine":
        return cls(rp.fp_rate, rp.fn_rate)


def pcf(cost: CostPair, p_pos: float) -> float:
    """Probability cost function p(+)Cp / (p(+)Cp + p(-)Cn)."""
    num = p_pos * cost.c_pos
    return num / (num + (1.0 - p_pos) * cost.c_neg)


def nec(fn_rate: float, fp_rate: float, pc: float) -> float:
    return fn_rate * pc + fp_rate * (1.0 - pc)


def rates_from_predictions(pred, labels, cost: CostPair) -> RatePoint:
    pred = np.asarray(pred)
    labels = np.asarray(labels)
    pos = labels == 1
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    if n_pos == 0 or n_neg == 0:
        raise InputError("rates need both classes in the evaluated set")
    misses = int(np.count_nonzero(pred[pos] != 1))
    alarms = int(np.count_nonzero(pred[~pos] == 1))
    fn, fp = misses / n_pos, alarms / n_neg
    pc = pcf(cost, n_pos / (n_pos + n_neg))
    return RatePoint(fn, fp, (misses + alarms) / (n_pos + n_neg), nec(fn, fp, pc), pc)


def rates(e: Ensemble, ds: Dataset, cost: CostPair) -> RatePoint:
    """FN, FP, CE and NEC of ``e`` on ``ds`` under ``cost`` (empirical priors)."""
    return rates_from_predictions(e.predict(ds.features), ds.labels, cost)


def lower_envelope(lines, grid: int = 1000) -> list[tuple[float, float]]:
    """Pointwise minimum of the cost lines at grid+1 equally spaced PCF values."""
    lines = list(lines)
    if not lines:
        raise InputError("lower envelope needs at least one cost line")
    if int(grid) != grid or grid < 2:
        raise InputError("grid must be an integer >= 2")
    p = np.linspace(0.0, 1.0, int(grid) + 1)
    vals = np.min([ln.at(p) for ln in lines], axis=0)
    return list(zip(p.tolist(), vals.tolist()))


@dataclass(frozen=True)
class GaussianScenario:
    mean_pos: tuple[float, float] = (1.0, 0.0)
    mean_neg: tuple[float, float] = (-1.0, 0.0)
    shared_sigma: float = 1.0
    prior_pos: float = 0.5

    def __post_init__(self):
        if not self.shared_sigma > 0:
            raise InputError("sigma must be positive")
        if not 0 < self.prior_pos < 1:
            raise InputError("prior_pos must lie in (0, 1)")
        if tuple(self.mean_pos) == tuple(self.mean_neg):
            raise InputError("class means must differ")

    @classmethod
    def from_params(cls, params: dict, prior_pos: float = 0.5) -> "GaussianScenario":
        return cls(tuple(params["mu_pos"]), tuple(params["mu_neg"]), float(params["sigma"]), prior_pos)


@dataclass(frozen=True)
class BayesRule:
    """Halfspace w.x >= tau on raw 2-D points."""

    w: tuple[float, float]
    tau: float

    def predict(self, points) -> np.ndarray:
        s = np.asarray(points, float) @ np.asarray(self.w)
        return np.where(s >= self.tau, 1, -1).astype(np.int8)

    def predict_features(self, X, n_angles: int) -> np.ndarray:
        """Apply the rule to projection features by recovering the 2-D points."""
        dirs = project(np.eye(2), n_angles)
        pts = np.linalg.lstsq(dirs.T, np.asarray(X, float).T, rcond=None)[0].T
        return self.predict(pts)


def bayes_classifier(sc: GaussianScenario, cost: CostPair) -> BayesRule:
    mp, mn = np.asarray(sc.mean_pos, float), np.asarray(sc.mean_neg, float)
    w = (mp - mn) / sc.shared_sigma ** 2
    tau = 0.5 * w @ (mp + mn) + math.log(cost.c_neg * (1 - sc.prior_pos) / (cost.c_pos * sc.prior_pos))
    return BayesRule((float(w[0]), float(w[1])), float(tau))


def stratified_folds(ds: Dataset, k: int, seed: int) -> np.ndarray:
    """Fold id per example; each class is shuffled and dealt round-robin."""
    if int(k) != k or k < 2:
        raise InputError("k must be an integer >= 2")
    m = ds.pos_count
    if m < k or ds.n - m < k:
        raise InputError(f"cannot stratify {m} positives / {ds.n - m} negatives into {k} folds")
    rng = rng_for(seed, STREAM_CV)
    fold = np.empty(ds.n, dtype=np.int64)
    for lo, hi in ((0, m), (m, ds.n)):
        perm = rng.permutation(hi - lo)
        fold[lo + perm] = np.arange(hi - lo) % k
    return fold


def kfold_eval(ds: Dataset, cfg, k: int = 3, seed: int = 0, eval_cost: CostPair | None = None) -> RatePoint:
    """Mean RatePoint over k stratified folds (train on k-1, test on the rest)."""
    from .train import run

    fold = stratified_folds(ds, k, seed)
    cost = cfg.cost if eval_cost is None else eval_cost
    out = []
    for j in range(k):
        train = ds.subset(np.flatnonzero(fold != j))
        test = ds.subset(np.flatnonzero(fold == j))
        ens = run(train, cfg).ensemble
        out.append(rates(ens, test, cost))
    return RatePoint.mean(out)
