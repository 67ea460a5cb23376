"""Decision-stump pools and class-conditional weighted errors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import Dataset, InputError, Stump

EPS_MIN = 1e-10

ThresholdSpec = Union[int, str]


@dataclass(frozen=True)
class ClassErrors:
    eps_pos: float
    eps_neg: float

    def clamped(self, eps_min: float = EPS_MIN) -> "ClassErrors":
        return ClassErrors(
            min(max(self.eps_pos, eps_min), 1.0 - eps_min),
            min(max(self.eps_neg, eps_min), 1.0 - eps_min),
        )


def clamp_errors(eps: np.ndarray, eps_min: float = EPS_MIN) -> np.ndarray:
    return np.clip(eps, eps_min, 1.0 - eps_min)


def _midpoints(values: np.ndarray) -> tuple[np.ndarray, np.ndarray, float, float]:
    """Distinct sorted values, their midpoints, and the two sentinel thresholds."""
    u = np.unique(values)
    mids = 0.5 * (u[:-1] + u[1:])
    if len(u) > 1:
        lo = u[0] - 0.5 * (u[1] - u[0])
        hi = u[-1] + 0.5 * (u[-1] - u[-2])
    else:
        lo, hi = u[0] - 0.5, u[0] + 0.5
    return u, mids, lo, hi


def _quantile_midpoints(values: np.ndarray, k: int) -> np.ndarray:
    u, mids, _, _ = _midpoints(values)
    if len(mids) == 0:
        return mids
    # number of examples strictly below each midpoint
    below = np.searchsorted(np.sort(values), mids, side="left")
    targets = np.round(np.arange(1, k + 1) / (k + 1) * len(values))
    pos = np.clip(np.searchsorted(below, targets), 0, len(mids) - 1)
    prev = np.clip(pos - 1, 0, len(mids) - 1)
    pick = np.where(np.abs(below[prev] - targets) <= np.abs(below[pos] - targets), prev, pos)
    return mids[np.unique(pick)]


class StumpPool:
    """Deduplicated pool of stumps over a training set.

    Besides the stump list, the pool keeps for every stump its feature index,
    split position (number of training examples strictly below the threshold)
    and polarity, plus each feature's sort order. Pool-wide weighted errors are
    then prefix sums over the sorted weights, the same for every trainer.
    """

    def __init__(self, ds: Dataset, stumps: list[Stump]):
        if not stumps:
            raise InputError("stump pool is empty")
        self.ds = ds
        self.stumps = list(stumps)
        X = ds.features
        self.feature = np.array([s.feature for s in stumps], dtype=np.int64)
        self.threshold = np.array([s.threshold for s in stumps], dtype=float)
        self.polarity = np.array([s.polarity for s in stumps], dtype=np.int8)
        self.sort_order = np.argsort(X, axis=0, kind="stable").T.copy()  # d x n
        sorted_vals = np.take_along_axis(X.T, self.sort_order, axis=1)
        self.split = np.empty(len(stumps), dtype=np.int64)
        for f in np.unique(self.feature):
            sel = self.feature == f
            self.split[sel] = np.searchsorted(sorted_vals[f], self.threshold[sel], side="left")
        self._cache = None

    def __len__(self) -> int:
        return len(self.stumps)

    @property
    def m(self) -> int:
        return self.ds.pos_count

    @property
    def prediction_cache(self) -> np.ndarray:
        """n x F boolean matrix, True where stump f is correct on example i."""
        if self._cache is None:
            self._cache = self.predictions(self.ds.features) == self.ds.labels[:, None]
            self._cache.setflags(write=False)
        return self._cache

    def predictions(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        s = np.where(X[:, self.feature] >= self.threshold, 1, -1).astype(np.int8)
        return s * self.polarity

    def _split_sums(self, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Per stump: weight mass strictly below and at/above the threshold."""
        ws = w[self.sort_order]  # d x n, sorted by feature value
        d, n = ws.shape
        below = np.zeros((d, n + 1))
        np.cumsum(ws, axis=1, out=below[:, 1:])
        above = np.zeros((d, n + 1))
        np.cumsum(ws[:, ::-1], axis=1, out=above[:, -2::-1])
        return below[self.feature, self.split], above[self.feature, self.split]

    def class_error_arrays(self, d_pos: np.ndarray, d_neg: np.ndarray):
        """Unclamped (eps_pos, eps_neg) for every stump in the pool."""
        m = self.m
        wp = np.zeros(self.ds.n)
        wp[:m] = d_pos
        wn = np.zeros(self.ds.n)
        wn[m:] = d_neg
        bp, ap = self._split_sums(wp)
        bn, an = self._split_sums(wn)
        plus = self.polarity == 1
        # polarity +1 says -1 below the threshold: misses positives below, negatives above
        eps_pos = np.where(plus, bp, ap)
        eps_neg = np.where(plus, an, bn)
        return eps_pos, eps_neg

    def weighted_error_array(self, weights: np.ndarray) -> np.ndarray:
        m = self.m
        d_pos, d_neg = weights[:m], weights[m:]
        eps_pos, eps_neg = self.class_error_arrays(d_pos, d_neg)
        return eps_pos + eps_neg


def build_stump_pool(ds: Dataset, thresholds_per_feature: ThresholdSpec = "all-midpoints") -> StumpPool:
    """Enumerate stumps over every feature, both polarities, deduplicated.

    ``"all-midpoints"`` places a threshold between each pair of consecutive
    distinct values plus a sentinel beyond each end. An integer ``k`` uses k
    midpoints at equally spaced quantiles; the two constant classifiers are
    then contributed once, by a low sentinel on feature 0.
    """
    if thresholds_per_feature in ("all", "all-midpoints"):
        k = None
    else:
        try:
            k = int(thresholds_per_feature)
        except (TypeError, ValueError) as exc:
            raise InputError(f"invalid threshold spec {thresholds_per_feature!r}") from exc
        if k < 1:
            raise InputError("thresholds_per_feature must be positive")

    X = ds.features
    seen: dict[bytes, int] = {}
    stumps: list[Stump] = []

    def add(feature: int, thresholds: np.ndarray):
        above = X[:, feature][:, None] >= thresholds[None, :]
        for j, t in enumerate(thresholds):
            col = above[:, j]
            for pol, vec in ((1, col), (-1, ~col)):
                key = np.packbits(vec).tobytes()
                if key not in seen:
                    seen[key] = len(stumps)
                    stumps.append(Stump(int(feature), float(t), pol))

    for f in range(ds.d):
        values = X[:, f]
        if k is None:
            _, mids, lo, hi = _midpoints(values)
            add(f, np.concatenate([[lo], mids, [hi]]))
        else:
            if f == 0:
                _, _, lo, _ = _midpoints(values)
                add(f, np.array([lo]))
            add(f, _quantile_midpoints(values, k))
    return StumpPool(ds, stumps)


def class_errors(pool: StumpPool, f: int, w, clamp: bool = True) -> ClassErrors:
    """(eps_P, eps_N) of stump ``f`` under the subdistributions of ``w``."""
    wrong = ~pool.prediction_cache[:, f]
    m = pool.m
    e = ClassErrors(
        float(np.dot(wrong[:m], w.d_pos)),
        float(np.dot(wrong[m:], w.d_neg)),
    )
    return e.clamped() if clamp else e


def weighted_error(pool: StumpPool, f: int, weights) -> float:
    """Classic AdaBoost weighted error: total weight on misclassified examples."""
    wrong = ~pool.prediction_cache[:, f]
    return float(np.dot(wrong, np.asarray(weights, dtype=float)))
