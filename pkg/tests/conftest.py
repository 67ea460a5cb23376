import numpy as np
import pytest

from adaboostdb.core import Dataset
from adaboostdb.data import SynthSpec, gen_synth
from adaboostdb.weak import build_stump_pool


def random_dataset(seed, n_pos=40, n_neg=60, d=3, ties=False):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n_pos + n_neg, d))
    if ties:
        X = np.round(X, 1)
    X[:n_pos] += 0.7
    y = np.r_[np.ones(n_pos), -np.ones(n_neg)]
    perm = rng.permutation(len(y))
    return Dataset.from_arrays(X[perm], y[perm])


@pytest.fixture
def small_ds():
    return random_dataset(0)


@pytest.fixture(scope="session")
def bayes_small():
    ds, _ = gen_synth(SynthSpec("bayes", 120, 80, seed=5, n_angles=6))
    return ds, build_stump_pool(ds)


@pytest.fixture(scope="session")
def clouds_small():
    ds, _ = gen_synth(SynthSpec("twoclouds", 100, 100, seed=6, n_angles=6))
    return ds, build_stump_pool(ds)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
