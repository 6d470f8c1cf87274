import json

import numpy as np
import pytest

import recontree


def test_two_point_fit_and_distortion():
    pts = np.array([[0.1], [0.9]])
    q = recontree.fit(pts, eta=0.3)
    assert q.leaf_count == 2
    assert recontree.distortion(q, pts) == pytest.approx(0.0, abs=1e-15)
    leaves = recontree.encode(q, pts)
    assert leaves == [(1, [0]), (1, [1])]
    assert recontree.decode(q, 1, [1]) == pytest.approx([0.9])


def test_root_quantizer_when_threshold_is_large():
    pts = recontree.sample("uniform_cube", 2, 500, seed=4)
    q = recontree.fit(pts, eta=1.0)
    assert q.leaf_count == 4
    assert all(depth == 1 for depth, _ in q.leaves)


def test_json_round_trip():
    pts = recontree.sample("circle", 2, 1000, seed=1)
    q = recontree.fit(pts, eta=0.05)
    back = recontree.Quantizer.from_json(q.to_json())
    assert back.leaves == q.leaves
    assert np.array_equal(back.codes, q.codes)
    assert json.loads(q.to_json())["dim"] == 2


def test_out_of_domain_points_rejected():
    with pytest.raises(ValueError):
        recontree.fit(np.array([[1.0]]), eta=0.1)


def test_sweep_is_nested():
    pts = recontree.sample("uniform_cube", 1, 2000, seed=2)
    rows = recontree.sweep(pts, [0.5, 0.05, 0.01])
    counts = [r["leaf_count"] for r in rows]
    assert counts == sorted(counts)
    dists = [r["train_distortion"] for r in rows]
    assert dists == sorted(dists, reverse=True)


def test_kmeans_single_center_is_mean():
    pts = recontree.sample("uniform_cube", 3, 300, seed=5)
    model = recontree.kmeans(pts, 1)
    assert np.allclose(model["centers"][0], pts.mean(axis=0), atol=1e-12)


def test_experiments_are_deterministic():
    a = recontree.rate_experiment("uniform_cube", 1, n_grid=[256, 512], seed=3, holdout_n=1000)
    b = recontree.rate_experiment("uniform_cube", 1, n_grid=[256, 512], seed=3, holdout_n=1000)
    assert a == b
    rows, slope, target = recontree.approximation_trend(1, 8, [0.5, 0.1, 0.02])
    assert target == pytest.approx(4.0 / 3.0)
    assert len(rows) == 3
