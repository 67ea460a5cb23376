import json
import math

import numpy as np
import pytest

from adaboostdb.core import CostPair, Dataset, InputError
from adaboostdb.csboost import balanced_weights
from adaboostdb.train import (TrainConfig, bound_trace, db_train, direct_bound, run,
                              training_error_trace)
from adaboostdb.weak import build_stump_pool


def test_config_validation():
    with pytest.raises(InputError):
        TrainConfig(rounds=0)
    with pytest.raises(InputError):
        TrainConfig(algo="xgboost")
    with pytest.raises(InputError):
        TrainConfig(init="random")


@pytest.mark.parametrize("cost", [CostPair(1, 1), CostPair(1, 5), CostPair(10, 1)])
def test_db_and_nocs_are_bitwise_identical(bayes_small, cost):
    ds, pool = bayes_small
    a = run(ds, TrainConfig(cost, 25, algo="db"), pool=pool)
    b = run(ds, TrainConfig(cost, 25, algo="db_nocs"), pool=pool)
    assert [r.stump_index for r in a.per_round] == [r.stump_index for r in b.per_round]
    assert a.ensemble.alphas == b.ensemble.alphas
    assert a.roots_computed <= b.roots_computed


def test_symmetric_db_matches_adaboost(clouds_small):
    ds, pool = clouds_small
    a = run(ds, TrainConfig(CostPair(1, 1), 30, algo="adaboost"), pool=pool)
    d = run(ds, TrainConfig(CostPair(1, 1), 30, algo="db"), pool=pool)
    assert [r.stump_index for r in a.per_round] == [r.stump_index for r in d.per_round]
    assert np.allclose(a.ensemble.alphas, d.ensemble.alphas, rtol=0, atol=1e-9)


@pytest.mark.parametrize("algo", ["db", "cs", "adaboost"])
@pytest.mark.parametrize("cost", [CostPair(1, 3), CostPair(7, 1)])
def test_bound_consistency_and_domination(clouds_small, algo, cost):
    ds, pool = clouds_small
    rec = run(ds, TrainConfig(cost, 30, algo=algo), pool=pool)
    init = balanced_weights(ds) if algo == "cs" else None
    tr = bound_trace(rec)
    direct = direct_bound(rec.ensemble, ds, init)
    assert np.allclose(tr, direct, rtol=1e-8, atol=0)
    assert all(x > y for x, y in zip(tr, tr[1:]))
    err = training_error_trace(rec.ensemble, ds, init)
    assert all(e <= b * (1 + 1e-12) for e, b in zip(err, tr))


def test_separable_data_drives_bound_down():
    ds = Dataset.from_arrays(np.r_[np.arange(5.0), np.arange(5.0) + 10][:, None], [-1] * 5 + [1] * 5)
    rec = run(ds, TrainConfig(CostPair(1, 3), 3))
    assert bound_trace(rec)[-1] < 1e-6
    assert training_error_trace(rec.ensemble, ds)[-1] == 0


def test_determinism(bayes_small):
    ds, pool = bayes_small
    cfg = TrainConfig(CostPair(3, 2), 15)
    a, b = run(ds, cfg, pool=pool), run(ds, cfg, pool=pool)
    assert a.ensemble.to_json() == b.ensemble.to_json()


def test_balanced_init_and_statics_log(small_ds):
    rec = run(small_ds, TrainConfig(CostPair(2, 1), 5, init="balanced"))
    assert rec.initial_log_acc == pytest.approx((math.log(0.5), math.log(0.5)))
    assert rec.per_round[0].a == pytest.approx(2 / 3)
    with pytest.raises(InputError):
        db_train(small_ds, TrainConfig(algo="cs"))


def test_record_serialization(small_ds):
    rec = run(small_ds, TrainConfig(CostPair(1, 2), 4))
    d = json.loads(rec.to_json())
    assert d["totals"]["roots_computed"] == rec.roots_computed
    assert len(d["per_round"]) == 4
    rows = rec.to_csv().split("\n")
    assert rows[0].startswith("round,stump_index,alpha") and len(rows) == 6 and rows[-1] == ""
    assert float(rows[1].split(",")[2]) == rec.ensemble.alphas[0]
    cum = [r.roots_computed_cum for r in rec.per_round]
    assert cum == sorted(cum) and cum[-1] <= rec.roots_computed
