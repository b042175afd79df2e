import numpy as np
from sklearn.ensemble import RandomForestRegressor

from noc.common.exceptions import ParameterError
from noc.common.utils import derive_seed


class RegressionForest:
    """Bagged squared-error regression trees over min-max normalised features."""

    def __init__(self, n_trees=50, max_depth=8, min_leaf=5, seed=0, jobs=1):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.seed = seed
        self.jobs = jobs
        self._model = None

    def _scale(self, X):
        return (np.atleast_2d(X) - self._low) / self._span

    def fit(self, X, y):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        y = np.asarray(y, dtype=float)
        if len(y) == 0:
            raise ParameterError("Cannot fit a forest on an empty dataset.")
        self._low = X.min(axis=0)
        span = X.max(axis=0) - self._low
        span[span == 0] = 1.0
        self._span = span
        self._model = RandomForestRegressor(
            n_estimators=self.n_trees,
            max_depth=self.max_depth,
            min_samples_leaf=self.min_leaf,
            max_features=1.0,
            bootstrap=True,
            random_state=self.seed % 2**32,
            n_jobs=self.jobs,
        ).fit(self._scale(X), y)
        # Single-row predictions are cheaper without worker dispatch.
        self._model.set_params(n_jobs=None)
        return self

    def predict(self, X):
        if self._model is None:
            raise ParameterError("Forest is not fitted.")
        return self._model.predict(self._scale(np.asarray(X, dtype=float)))

    def predict_one(self, x):
        return float(self.predict(np.asarray(x, dtype=float).reshape(1, -1))[0])


def fit_forest(dataset, cfg, iteration=0):
    if len(dataset) == 0:
        raise ParameterError("Cannot fit a forest on an empty dataset.")
    X, y = dataset.as_arrays()
    forest = RegressionForest(
        n_trees=cfg.n_trees,
        max_depth=cfg.max_depth,
        min_leaf=cfg.min_leaf,
        seed=derive_seed(cfg.seed, "forest", iteration),
        jobs=cfg.jobs,
    )
    return forest.fit(X, y)
