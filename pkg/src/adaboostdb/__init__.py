"""Cost-sensitive boosting with double-base exponential bounds."""

from .core import (
    PAPER_GRID,
    CostPair,
    Dataset,
    Ensemble,
    InputError,
    NumericalError,
    PreconditionError,
    Stump,
    WeightState,
    ensemble_classify,
    ensemble_score,
)
from .csboost import adaboost_train, cs_alpha_solve, cs_train
from .dbsolve import conditional_search, solve_round_root
from .train import TrainConfig, bound_trace, db_train, run
from .weak import build_stump_pool, class_errors, weighted_error

__version__ = "0.1.0"
