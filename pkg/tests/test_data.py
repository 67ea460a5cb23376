import math

import numpy as np
import pytest

from adaboostdb.core import InputError
from adaboostdb.data import SynthSpec, gen_synth, load_csv, load_spec, project, rng_for, save_csv
from adaboostdb.weak import build_stump_pool


def test_two_angles_are_raw_coordinates():
    ds, pts = gen_synth(SynthSpec("bayes", 30, 20, seed=1, n_angles=2))
    assert np.array_equal(ds.features, pts)


def test_projection_isometry_of_pools():
    ds, pts = gen_synth(SynthSpec("twoclouds", 30, 30, seed=2, n_angles=2))
    from adaboostdb.core import Dataset
    raw = Dataset.from_arrays(pts, ds.labels)
    a, b = build_stump_pool(ds), build_stump_pool(raw)
    assert [(s.feature, s.threshold, s.polarity) for s in a.stumps] == \
           [(s.feature, s.threshold, s.polarity) for s in b.stumps]


def test_projection_angles():
    X = project(np.array([[1.0, 0.0], [0.0, 1.0]]), 4)
    c = math.sqrt(0.5)
    assert np.allclose(X, [[1, c, 0, -c], [0, c, 1, c]], atol=1e-15)


def test_generation_is_deterministic_and_seeded():
    s = SynthSpec("twoclouds", 50, 60, seed=9)
    a, b = gen_synth(s)[0], gen_synth(s)[0]
    assert a.features.tobytes() == b.features.tobytes()
    c = gen_synth(SynthSpec("twoclouds", 50, 60, seed=10))[0]
    assert not np.array_equal(a.features, c.features)


def test_substreams_are_independent():
    assert rng_for(3, 0).random() != rng_for(3, 1).random()


def test_bayes_class_means_within_standard_error():
    _, pts = gen_synth(SynthSpec("bayes", 500, 500, seed=4))
    tol = 3 * 1.0 / math.sqrt(500)
    assert np.all(np.abs(pts[:500].mean(0) - [1, 0]) < tol)
    assert np.all(np.abs(pts[500:].mean(0) - [-1, 0]) < tol)


def test_twoclouds_geometry_and_overlap():
    _, pts = gen_synth(SynthSpec("twoclouds", 2000, 2000, seed=5))
    rp = np.linalg.norm(pts[:2000], axis=1)
    rn = np.linalg.norm(pts[2000:] - [0.4, 0], axis=1)
    assert rp.max() <= 1.0 and rn.min() >= 0.8 and rn.max() <= 1.8
    # some negatives fall inside the positive disk
    assert np.any(np.linalg.norm(pts[2000:], axis=1) < 1.0)


def test_spec_validation():
    with pytest.raises(InputError, match="sigma"):
        SynthSpec("bayes", params={"sigma": 0})
    with pytest.raises(InputError):
        SynthSpec("twoclouds", params={"neg_radii": [2.0, 1.0]})
    with pytest.raises(InputError):
        SynthSpec("moons")
    with pytest.raises(InputError):
        SynthSpec(n_angles=1)
    with pytest.raises(InputError):
        SynthSpec(params={"radius": 1})


def test_load_spec_toml_and_json(tmp_path):
    (tmp_path / "a.toml").write_text('[synth]\nkind = "twoclouds"\nn_pos = 7\nseed = 3\n'
                                     '[synth.params]\npos_radius = 2.0\n')
    s = load_spec(tmp_path / "a.toml")
    assert s.kind == "twoclouds" and s.n_pos == 7 and s.params["pos_radius"] == 2.0
    (tmp_path / "b.json").write_text('{"kind": "bayes", "n_angles": 4}')
    assert load_spec(tmp_path / "b.json").n_angles == 4
    (tmp_path / "c.json").write_text('{"kind": ')
    with pytest.raises(InputError):
        load_spec(tmp_path / "c.json")


def test_csv_round_trip(tmp_path):
    ds, _ = gen_synth(SynthSpec("bayes", 40, 30, seed=8, n_angles=5))
    save_csv(ds, tmp_path / "d.csv")
    back = load_csv(tmp_path / "d.csv")
    assert np.array_equal(back.features, ds.features)
    assert np.array_equal(back.labels, ds.labels)
    assert b"\r" not in (tmp_path / "d.csv").read_bytes()


def test_csv_relabeling_and_header(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("a,b,cls\n1,2,A\n3,4,B\n5,6,A\n")
    ds = load_csv(p, positive_label="A")
    assert ds.n == 3 and ds.pos_count == 2
    assert ds.order.tolist() == [0, 2, 1]
    q = tmp_path / "y.csv"
    q.write_text("g,1.0,2.0\nb,3.0,4.0\n")
    ds = load_csv(q, label_column=0, positive_label="g")
    assert ds.features.tolist() == [[1.0, 2.0], [3.0, 4.0]]


@pytest.mark.parametrize("text,msg", [
    ("1,2,A\n3,x,B\n", "row 2, column 2"),
    ("1,2,A\n3,4,A\n", "two values"),
    ("1,2,A\n3,4\n", "row 2"),
    ("1,2,A\n3,4,B\n5,6,C\n", "two values"),
])
def test_csv_errors(tmp_path, text, msg):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    with pytest.raises(InputError, match=msg):
        load_csv(p, positive_label="A")


def test_csv_missing_file(tmp_path):
    with pytest.raises(InputError):
        load_csv(tmp_path / "nope.csv")
