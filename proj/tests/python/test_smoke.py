import math

import numpy as np
import pytest

import boulderfit as bf


def small_dataset(seed=1):
    data, truth = bf.generate(bf.SynthSpec(m_climbers=20, n_problems=30, density=0.6, seed=seed))
    return data, truth


def test_dataset_from_records_and_grouping():
    records = [("W1", 2019, "Q", c, "B1", t, 1) for c in ("A", "B") for t in ("top", "zone")]
    ds = bf.Dataset.from_records(records)
    assert len(ds) == 4
    assert ds.num_climbers == 2
    assert ds.num_problems == 2
    merged = bf.apply_replacement_level(ds, 10)
    assert merged.climbers == [bf.REPLACEMENT]
    assert bf.Dataset.from_csv(ds.to_csv()).records() == ds.records()


def test_parse_error_is_value_error():
    with pytest.raises(ValueError, match=":2:"):
        bf.Dataset.from_csv("competition_id,year,round,climber,problem_key,hold_type,outcome\nW,2019,Q,A,B,top,2\n")


def test_generate_is_deterministic_and_reports_bayes_loss():
    a, ta = small_dataset(3)
    b, tb = small_dataset(3)
    assert a.records() == b.records()
    y = np.array(a.outcomes())
    p = np.clip(np.array(ta.cell_probabilities), 1e-12, 1 - 1e-12)
    bayes = -np.mean(y * np.log(p) + (1 - y) * np.log(1 - p))
    assert bayes == pytest.approx(ta.bayes_log_loss, abs=1e-12)
    assert ta.U.shape == (20, 2)


def test_logreg_train_predict_roundtrip():
    ds, _ = small_dataset()
    model = bf.train_logreg(ds, bf.LogRegConfig(epochs=500))
    p = model.predict("Q", "top", ds.climbers[0])
    assert 0.0 < p < 1.0
    again = bf.LogRegModel.from_text(model.to_text())
    assert again.predict("F", "zone", ds.climbers[1]) == model.predict("F", "zone", ds.climbers[1])
    coefs = model.coefficients()
    assert [c for _, c in coefs] == sorted((c for _, c in coefs), reverse=True)
    with pytest.raises(ValueError):
        model.predict("X", "top", ds.climbers[0])


def test_pmf_train_predict_and_loss_history():
    ds, _ = small_dataset()
    model, history = bf.train_pmf(ds, bf.PmfConfig(d=2, epochs=200, learning_rate=0.01, seed=4))
    assert len(history) == 201
    assert history[-1] < history[0]
    assert model.loss(ds) == pytest.approx(history[-1], abs=1e-15)
    assert model.U.shape == (ds.num_climbers, 2)
    again = bf.PmfModel.from_text(model.to_text())
    np.testing.assert_array_equal(again.V, model.V)
    p = model.predict(ds.climbers[0], ds.problems[0])
    u = model.U[0]
    v = model.V[:, 0]
    assert p == pytest.approx(1 / (1 + math.exp(-u @ v)), abs=1e-12)


def test_zero_pmf_gives_ln2():
    ds, _ = small_dataset()
    zero = bf.PmfModel(np.zeros((ds.num_climbers, 3)), np.zeros((3, ds.num_problems)), ds.climbers, ds.problems)
    assert zero.loss(ds) == pytest.approx(math.log(2), abs=1e-12)


def test_metrics():
    r = bf.evaluate([0, 0, 1, 1], [0.1, 0.4, 0.35, 0.8])
    assert r["roc_auc"] == 0.75
    assert bf.brier([1], [0.2]) == pytest.approx(0.64)
    assert bf.evaluate([1, 1], [0.3, 0.9])["roc_auc"] is None
    mean, half = bf.confidence_interval([1, 2, 3, 4, 5])
    assert mean == 3
    assert half == pytest.approx(1.963, abs=1e-3)


def test_pca_line_and_pearson():
    x = np.array([[0.0, 1.0], [1.0, 3.0], [2.0, 5.0], [3.0, 7.0]])
    r = bf.pca(x)
    assert r.explained_variance_ratio[0] == pytest.approx(1.0, abs=1e-10)
    assert bf.pearson([1, 2, 3, None], [2, 4, 6, 1]) == pytest.approx(1.0)


def test_run_grid_small():
    ds, _ = small_dataset()
    results = bf.run_grid(ds, levels=[5], dims=[1], k=3, pmf=bf.PmfConfig(epochs=50), logreg=bf.LogRegConfig(epochs=100))
    assert [(r.model, r.split) for r in results] == [
        ("logreg", "train"),
        ("logreg", "test"),
        ("pmf", "train"),
        ("pmf", "test"),
    ]
    assert len(results[1].per_fold) == 3
    assert results[1].summary["log_loss"]["mean"] > 0


def test_cli_entry_point(tmp_path):
    code, out, err = bf.cli(["synth", "--m", "10", "--n", "10", "--seed", "2", "--out", str(tmp_path / "s")])
    assert code == 0, err
    assert (tmp_path / "s" / "attempts.csv").exists()
    code, _, err = bf.cli(["synth", "--density", "0", "--out", str(tmp_path / "t")])
    assert code == 2
