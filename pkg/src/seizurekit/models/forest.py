"""Random forest of CART decision trees for binary labels.

Each tree trains on a bootstrap resample with a per-tree sub-seed and
considers floor(sqrt(d)) randomly chosen features at every node. Split
thresholds are midpoints of consecutive distinct sorted values, scored by
weighted Gini impurity. Prediction is a majority vote over trees; a tied
vote goes to class 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DataError


@dataclass(frozen=True)
class RFConfig:
    n_trees: int = 100
    max_depth: int | None = None
    min_samples_split: int = 2
    max_features: int | None = None  # None = floor(sqrt(d))
    seed: int = 0

    def __post_init__(self):
        if self.n_trees <= 0:
            raise ConfigError(f"n_trees must be positive, got {self.n_trees}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ConfigError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.min_samples_split < 2:
            raise ConfigError(
                f"min_samples_split must be >= 2, got {self.min_samples_split}"
            )
        if self.max_features is not None and self.max_features < 1:
            raise ConfigError(f"max_features must be >= 1, got {self.max_features}")


@dataclass(frozen=True)
class TreeNode:
    """Internal node (feature/threshold/children) or leaf (class counts)."""

    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    counts: tuple[int, int] | None = None  # (class 0, class 1) at a leaf

    @property
    def is_leaf(self) -> bool:
        return self.counts is not None


@dataclass(frozen=True)
class RFModel:
    trees: tuple[TreeNode, ...]
    config: RFConfig
    n_features: int


def gini(counts) -> float:
    """Gini impurity 1 - sum((c/n)^2) of a class-count vector."""
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - (p * p).sum())


def best_split(X, y, candidate_features):
    """Lowest weighted-Gini split over the candidate features, or None.

    For each feature the thresholds tried are midpoints between consecutive
    distinct sorted values. Returns (feature, threshold, gini_gain); None
    when no split strictly reduces impurity (pure nodes included).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n = len(y)
    if n < 2:
        return None
    parent = gini(np.bincount(y, minlength=2))
    if parent == 0.0:
        return None

    best = None  # (weighted_gini, feature, threshold)
    for f in candidate_features:
        f = int(f)
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        ys = y[order]
        # Prefix counts of class 1 let every boundary be scored in O(1).
        ones = np.cumsum(ys)
        boundaries = np.flatnonzero(xs[1:] > xs[:-1]) + 1
        for b in boundaries:
            n_l = int(b)
            n_r = n - n_l
            ones_l = int(ones[b - 1])
            ones_r = int(ones[-1]) - ones_l
            g_l = 1.0 - ((ones_l / n_l) ** 2 + ((n_l - ones_l) / n_l) ** 2)
            g_r = 1.0 - ((ones_r / n_r) ** 2 + ((n_r - ones_r) / n_r) ** 2)
            weighted = (n_l * g_l + n_r * g_r) / n
            threshold = (xs[b - 1] + xs[b]) / 2.0
            if best is None or weighted < best[0]:
                best = (weighted, f, threshold)
    if best is None:
        return None
    gain = parent - best[0]
    if gain <= 0.0:
        return None
    return best[1], best[2], gain


def _grow(X, y, rng, config: RFConfig, max_features: int, depth: int) -> TreeNode:
    counts = np.bincount(y, minlength=2)
    leaf = TreeNode(counts=(int(counts[0]), int(counts[1])))
    if (
        len(y) < config.min_samples_split
        or counts[0] == 0
        or counts[1] == 0
        or (config.max_depth is not None and depth >= config.max_depth)
    ):
        return leaf
    d = X.shape[1]
    candidates = rng.choice(d, size=min(max_features, d), replace=False)
    split = best_split(X, y, candidates)
    if split is None:
        return leaf
    f, threshold, _ = split
    mask = X[:, f] <= threshold
    left = _grow(X[mask], y[mask], rng, config, max_features, depth + 1)
    right = _grow(X[~mask], y[~mask], rng, config, max_features, depth + 1)
    return TreeNode(feature=f, threshold=threshold, left=left, right=right)


def _tree_predict_one(node: TreeNode, row: np.ndarray) -> int:
    while not node.is_leaf:
        node = node.left if row[node.feature] <= node.threshold else node.right
    c0, c1 = node.counts
    if c1 > c0:
        return 1
    return 0  # majority class 0, ties included


def rf_fit(X, y, config: RFConfig = RFConfig()) -> RFModel:
    """Train n_trees CART trees on bootstrap resamples."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if len(X) == 0:
        raise DataError("empty training set")
    if len(y) != len(X):
        raise DataError(f"{len(y)} labels for {len(X)} rows")
    if not np.isin(y, (0, 1)).all():
        raise DataError("labels must be 0 or 1")

    d = X.shape[1]
    max_features = (
        config.max_features if config.max_features is not None else max(1, math.floor(math.sqrt(d)))
    )
    seeds = np.random.SeedSequence(config.seed).spawn(config.n_trees)
    trees = []
    n = len(X)
    for t in range(config.n_trees):
        rng = np.random.default_rng(seeds[t])
        idx = rng.integers(0, n, size=n)
        trees.append(_grow(X[idx], y[idx], rng, config, max_features, depth=0))
    return RFModel(trees=tuple(trees), config=config, n_features=d)


def rf_predict(model: RFModel, X) -> np.ndarray:
    """Majority vote across trees; a tie predicts class 0."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise DataError(
            f"feature count mismatch: model expects {model.n_features}"
        )
    votes = np.zeros(len(X), dtype=np.int64)
    for tree in model.trees:
        votes += np.array([_tree_predict_one(tree, row) for row in X], dtype=np.int64)
    n_trees = len(model.trees)
    return (votes * 2 > n_trees).astype(np.int64)


def rf_scores(model: RFModel, X) -> np.ndarray:
    """Fraction of trees voting class 1, usable as a ranking score."""
    X = np.asarray(X, dtype=np.float64)
    votes = np.zeros(len(X), dtype=np.float64)
    for tree in model.trees:
        votes += np.array([_tree_predict_one(tree, row) for row in X], dtype=np.float64)
    return votes / len(model.trees)
