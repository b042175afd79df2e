import numpy as np
import pytest
from scipy.stats import spearmanr

from noc.common.exceptions import ParameterError
from noc.search.forest import RegressionForest, fit_forest
from noc.search.models import TrainingDataset


def test_constant_targets_predict_the_constant():
    rng = np.random.default_rng(0)
    X = rng.random((40, 5))
    forest = RegressionForest(n_trees=10).fit(X, np.full(40, 7.0))
    np.testing.assert_allclose(forest.predict(rng.random((5, 5))), 7.0)


def test_single_row_forest(search_config):
    dataset = TrainingDataset()
    dataset.add_trajectory([np.arange(5.0)], 3.5)
    forest = fit_forest(dataset, search_config)
    assert forest.predict_one(np.ones(5) * 100) == pytest.approx(3.5)


@pytest.mark.parametrize("seed", range(5))
def test_forest_ranks_held_out_rows(seed):
    rng = np.random.default_rng(1)
    X = rng.random((500, 5))
    y = X[:, 0]
    forest = RegressionForest(n_trees=50, max_depth=8, min_leaf=5, seed=seed)
    forest.fit(X[:400], y[:400])
    correlation, _ = spearmanr(forest.predict(X[400:]), y[400:])
    assert correlation >= 0.8


def test_forest_is_deterministic():
    rng = np.random.default_rng(2)
    X, y = rng.random((60, 5)), rng.random(60)
    a = RegressionForest(n_trees=8, seed=11).fit(X, y).predict(X)
    b = RegressionForest(n_trees=8, seed=11).fit(X, y).predict(X)
    np.testing.assert_array_equal(a, b)


def test_empty_dataset_is_rejected(search_config):
    with pytest.raises(ParameterError):
        fit_forest(TrainingDataset(), search_config)
    with pytest.raises(ParameterError):
        RegressionForest().predict(np.zeros((1, 5)))


def test_dataset_rows_share_the_trajectory_target():
    dataset = TrainingDataset()
    dataset.add_trajectory([np.zeros(5), np.ones(5)], 2.0)
    dataset.add_trajectory([np.full(5, 2.0)], 1.0)
    X, y = dataset.as_arrays()
    assert X.shape == (3, 5)
    assert y.tolist() == [2.0, 2.0, 1.0]
