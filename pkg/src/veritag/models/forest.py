"""Random forest: bagged CART trees with Gini splits.

Trees are plain nested dicts (JSON-serializable) so forests with the same
seed can be compared bit-for-bit: internal nodes {"f", "t", "l", "r"},
leaves {"counts": per-class tallies}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError

DEFAULT_TREES = 100


def _gini_from_counts(counts: np.ndarray, total: int) -> float:
    p = counts / total
    return float(1.0 - (p * p).sum())


def _best_split(
    col: np.ndarray, labels: np.ndarray, n_classes: int, parent_gini: float
) -> tuple[float, float] | None:
    """Best (decrease, threshold) over midpoints of consecutive distinct
    values; ties keep the lowest threshold. None when the column is
    constant."""
    order = np.argsort(col, kind="stable")
    svals = col[order]
    slabs = labels[order]
    n = len(col)
    boundaries = np.nonzero(svals[1:] > svals[:-1])[0]
    if boundaries.size == 0:
        return None
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), slabs] = 1.0
    prefix = onehot.cumsum(axis=0)
    total = prefix[-1]

    nl = (boundaries + 1).astype(np.float64)
    nr = n - nl
    cl = prefix[boundaries]
    cr = total - cl
    gl = 1.0 - ((cl / nl[:, None]) ** 2).sum(axis=1)
    gr = 1.0 - ((cr / nr[:, None]) ** 2).sum(axis=1)
    decreases = parent_gini - (nl / n) * gl - (nr / n) * gr
    best = int(np.argmax(decreases))  # first max = lowest threshold
    thr = float((svals[boundaries[best]] + svals[boundaries[best] + 1]) / 2.0)
    return float(decreases[best]), thr


def _grow(
    X: np.ndarray,
    y: np.ndarray,
    idx: np.ndarray,
    n_classes: int,
    m: int,
    rng: np.random.Generator,
) -> dict:
    labels = y[idx]
    counts = np.bincount(labels, minlength=n_classes)
    gini = _gini_from_counts(counts, idx.size)
    if idx.size < 2 or gini == 0.0:
        return {"counts": counts.tolist()}
    candidates = rng.choice(X.shape[1], size=m, replace=False)
    best: tuple[float, float, int] | None = None
    for f in candidates:
        found = _best_split(X[idx, f], labels, n_classes, gini)
        if found is None:
            continue
        decrease, thr = found
        if best is None or decrease > best[0]:
            best = (decrease, thr, int(f))
    if best is None:
        return {"counts": counts.tolist()}
    _, thr, f = best
    left = X[idx, f] <= thr
    return {
        "f": f,
        "t": thr,
        "l": _grow(X, y, idx[left], n_classes, m, rng),
        "r": _grow(X, y, idx[~left], n_classes, m, rng),
    }


@dataclass(frozen=True)
class RandomForestModel:
    trees: list[dict]
    n_trees: int
    max_features: str
    seed: int
    n_classes: int
    n_features: int


def rf_train(
    X: np.ndarray, y: np.ndarray, n_trees: int = DEFAULT_TREES, seed: int = 0
) -> RandomForestModel:
    """Each tree grows on a bootstrap sample to purity (or single-example
    leaves), choosing the best Gini split among sqrt(d) candidate features
    per node. Per-tree seeds spawn from the master seed."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if n_trees < 1:
        raise DataError("need at least one tree")
    if np.unique(y).size < 2:
        raise DataError("training needs both classes present")
    n, d = X.shape
    n_classes = int(y.max()) + 1
    m = max(1, int(math.sqrt(d)))
    trees = []
    for child_seed in np.random.SeedSequence(seed).spawn(n_trees):
        rng = np.random.default_rng(child_seed)
        sample = rng.integers(0, n, size=n)
        trees.append(_grow(X, y, sample, n_classes, m, rng))
    return RandomForestModel(
        trees=trees,
        n_trees=n_trees,
        max_features="sqrt",
        seed=seed,
        n_classes=n_classes,
        n_features=d,
    )


def _tree_class(node: dict, x: np.ndarray) -> int:
    while "f" in node:
        node = node["l"] if x[node["f"]] <= node["t"] else node["r"]
    return int(np.argmax(node["counts"]))  # tie -> lowest class id


def rf_predict(model: RandomForestModel, x: np.ndarray) -> tuple[int, float]:
    """(class, vote fraction); vote ties go to the lowest class id."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.n_features,):
        raise DataError(
            f"vector has {x.shape} shape, model expects ({model.n_features},)"
        )
    votes = np.zeros(model.n_classes, dtype=np.int64)
    for tree in model.trees:
        votes[_tree_class(tree, x)] += 1
    winner = int(np.argmax(votes))
    return winner, float(votes[winner] / model.n_trees)
