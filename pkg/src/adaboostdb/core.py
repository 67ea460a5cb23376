"""Domain types shared by the trainers and evaluators."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class InputError(ValueError):
    """Invalid user input or data (maps to CLI exit code 2)."""


class PreconditionError(ValueError):
    """A caller violated a documented precondition."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge or bracket."""


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix with bipolar labels, ordered positives first.

    Use :meth:`from_arrays` to build one from unordered data; the stable
    permutation applied is kept in ``order`` (``order[j]`` is the input row
    that ended up at position ``j``).
    """

    features: np.ndarray
    labels: np.ndarray
    order: np.ndarray

    def __post_init__(self):
        X = np.ascontiguousarray(self.features, dtype=float)
        y = np.asarray(self.labels, dtype=np.int8)
        if X.ndim != 2:
            raise InputError(f"features must be 2-D, got shape {X.shape}")
        if y.shape != (X.shape[0],):
            raise InputError("labels length does not match number of rows")
        if not np.all(np.isfinite(X)):
            raise InputError("features contain non-finite values")
        if not np.all((y == 1) | (y == -1)):
            raise InputError("labels must be +1 or -1")
        m = int(np.count_nonzero(y == 1))
        if m == 0 or m == X.shape[0]:
            raise InputError("dataset must contain both classes")
        if not (np.all(y[:m] == 1) and np.all(y[m:] == -1)):
            raise InputError("dataset must be ordered positives first")
        X.setflags(write=False)
        y.setflags(write=False)
        order = np.asarray(self.order, dtype=np.int64)
        order.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "order", order)

    @classmethod
    def from_arrays(cls, features, labels) -> "Dataset":
        X = np.asarray(features, dtype=float)
        y = np.asarray(labels)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2 or len(y) != X.shape[0]:
            raise InputError("features/labels shape mismatch")
        # stable sort: positives (label +1) first, relative order preserved
        perm = np.argsort(np.where(y == 1, 0, 1), kind="stable")
        return cls(X[perm], y[perm], perm)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def pos_count(self) -> int:
        return int(np.count_nonzero(self.labels == 1))

    m = pos_count

    def subset(self, idx: Sequence[int]) -> "Dataset":
        idx = np.asarray(idx, dtype=np.int64)
        sub = Dataset.from_arrays(self.features[idx], self.labels[idx])
        return Dataset(sub.features, sub.labels, self.order[idx][sub.order])


@dataclass(frozen=True)
class CostPair:
    """Coprime positive integer misclassification costs (C_P, C_N)."""

    c_pos: int
    c_neg: int

    def __post_init__(self):
        if int(self.c_pos) != self.c_pos or int(self.c_neg) != self.c_neg:
            raise InputError("costs must be integers; use CostPair.from_ratio")
        if self.c_pos < 1 or self.c_neg < 1:
            raise InputError(f"costs must be positive, got {self.c_pos}, {self.c_neg}")
        if math.gcd(int(self.c_pos), int(self.c_neg)) != 1:
            raise InputError("costs must be coprime; use CostPair.from_ratio")

    @classmethod
    def from_ratio(cls, c_pos, c_neg) -> "CostPair":
        """Reduce any positive rational pair to coprime integers."""
        try:
            p, q = Fraction(str(c_pos)), Fraction(str(c_neg))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"invalid cost {c_pos!r}, {c_neg!r}") from exc
        if p <= 0 or q <= 0:
            raise InputError(f"costs must be positive, got {c_pos}, {c_neg}")
        r = p / q
        return cls(r.numerator, r.denominator)

    @property
    def gamma(self) -> float:
        return self.c_pos / (self.c_pos + self.c_neg)

    def as_list(self) -> list[int]:
        return [self.c_pos, self.c_neg]

    def __str__(self) -> str:
        return f"[{self.c_pos},{self.c_neg}]"

    @property
    def label(self) -> str:
        """``p:n`` form used in CSV cells and on the command line."""
        return f"{self.c_pos}:{self.c_neg}"


PAPER_GRID: tuple[CostPair, ...] = tuple(
    CostPair(p, n)
    for p, n in [
        (1, 100), (1, 50), (1, 25), (1, 10), (1, 7), (1, 5), (1, 3), (1, 2), (2, 3), (1, 1),
        (3, 2), (2, 1), (3, 1), (5, 1), (7, 1), (10, 1), (25, 1), (50, 1), (100, 1),
    ]
)


@dataclass(frozen=True)
class Stump:
    """h(x) = polarity * sign(x[feature] - threshold), with sign(0) = +1."""

    feature: int
    threshold: float
    polarity: int = 1

    def __post_init__(self):
        if self.polarity not in (1, -1):
            raise InputError("polarity must be +1 or -1")
        if self.feature < 0:
            raise InputError("feature index must be nonnegative")

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if self.feature >= X.shape[1]:
            raise InputError(
                f"stump uses feature {self.feature} but input has {X.shape[1]} features"
            )
        s = np.where(X[:, self.feature] >= self.threshold, 1, -1)
        return (self.polarity * s).astype(np.int8)


@dataclass(frozen=True)
class Ensemble:
    """Ordered (stump, alpha) pairs; H(x) = sign(sum alpha_t h_t(x)), 0 -> +1."""

    members: tuple[tuple[Stump, float], ...] = ()
    cost: CostPair = field(default_factory=lambda: CostPair(1, 1))

    def __post_init__(self):
        members = tuple((s, float(a)) for s, a in self.members)
        for _, a in members:
            if not (a > 0 and math.isfinite(a)):
                raise InputError(f"ensemble weights must be positive and finite, got {a}")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def alphas(self) -> list[float]:
        return [a for _, a in self.members]

    def appended(self, stump: Stump, alpha: float) -> "Ensemble":
        return Ensemble(self.members + ((stump, alpha),), self.cost)

    def _check_dim(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        need = max((s.feature for s, _ in self.members), default=-1) + 1
        if X.shape[1] < need:
            raise InputError(f"input has {X.shape[1]} features, ensemble needs {need}")
        return X

    def decision_function(self, X) -> np.ndarray:
        """Scores f(x) for every row of X."""
        X = self._check_dim(X)
        f = np.zeros(X.shape[0])
        for stump, alpha in self.members:
            f += alpha * stump.predict(X)
        return f

    def partial_scores(self, X) -> np.ndarray:
        """(T+1) x n array of scores after 0..T members."""
        X = self._check_dim(X)
        out = np.zeros((len(self.members) + 1, X.shape[0]))
        for t, (stump, alpha) in enumerate(self.members, start=1):
            out[t] = out[t - 1] + alpha * stump.predict(X)
        return out

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) >= 0, 1, -1).astype(np.int8)

    # -- serialization ---------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "cost": self.cost.as_list(),
            "members": [
                {
                    "feature": s.feature,
                    "threshold": s.threshold,
                    "polarity": s.polarity,
                    "alpha": a,
                }
                for s, a in self.members
            ],
        }

    def to_json(self) -> str:
        # repr-based float formatting round-trips every double exactly
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, obj: dict) -> "Ensemble":
        try:
            cost = CostPair(*obj["cost"])
            members = [
                (Stump(int(m["feature"]), float(m["threshold"]), int(m["polarity"])), float(m["alpha"]))
                for m in obj["members"]
            ]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed ensemble JSON: {exc}") from exc
        return cls(tuple(members), cost)

    @classmethod
    def from_json(cls, text: str) -> "Ensemble":
        return cls.from_dict(json.loads(text))


def ensemble_score(e: Ensemble, x: Iterable[float]) -> float:
    """f(x) = sum_t alpha_t h_t(x) for a single feature vector."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise InputError("ensemble_score expects a single feature vector")
    return float(e.decision_function(x[None, :])[0])


def ensemble_classify(e: Ensemble, x: Iterable[float]) -> int:
    return 1 if ensemble_score(e, x) >= 0 else -1


@dataclass(frozen=True, eq=False)
class WeightState:
    """Class-conditional subdistributions plus log-domain accumulators.

    ``log_acc_pos`` holds ln(W_P * A_P): the class's share of the initial
    distribution is folded into its accumulator.
    """

    d_pos: np.ndarray
    d_neg: np.ndarray
    log_acc_pos: float
    log_acc_neg: float
    w_pos: float
    w_neg: float

    @classmethod
    def initial(cls, ds: Dataset, weights=None) -> "WeightState":
        n, m = ds.n, ds.pos_count
        D = np.full(n, 1.0 / n) if weights is None else np.asarray(weights, dtype=float)
        if D.shape != (n,):
            raise InputError("initial weights must have one entry per example")
        if not np.all(D > 0) or not np.all(np.isfinite(D)):
            raise InputError("initial weights must be strictly positive and finite")
        if abs(D.sum() - 1.0) > 1e-9:
            raise InputError(f"initial weights must sum to 1, got {D.sum()!r}")
        w_pos, w_neg = float(D[:m].sum()), float(D[m:].sum())
        return cls(
            D[:m] / w_pos,
            D[m:] / w_neg,
            math.log(w_pos),
            math.log(w_neg),
            w_pos / (w_pos + w_neg),
            w_neg / (w_pos + w_neg),
        )

    @property
    def bound(self) -> float:
        """W_P A_P + W_N A_N."""
        return math.exp(self.log_acc_pos) + math.exp(self.log_acc_neg)

    def joint(self) -> np.ndarray:
        """Merged distribution proportional to W A D over all examples."""
        top = max(self.log_acc_pos, self.log_acc_neg)
        sp = math.exp(self.log_acc_pos - top) * self.d_pos
        sn = math.exp(self.log_acc_neg - top) * self.d_neg
        w = np.concatenate([sp, sn])
        return w / w.sum()
