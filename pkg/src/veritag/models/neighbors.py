"""K-nearest-neighbors classifier (Euclidean distance)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError, InvariantError

DEFAULT_K = 5


@dataclass(frozen=True)
class KnnModel:
    k: int
    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if points.ndim != 2 or points.shape[0] != labels.shape[0]:
            raise InvariantError("points and labels disagree")
        if not 1 <= self.k <= points.shape[0]:
            raise DataError(f"k={self.k} outside 1..{points.shape[0]}")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "labels", labels)


def knn_train(X: np.ndarray, y: np.ndarray, k: int = DEFAULT_K) -> KnnModel:
    y = np.asarray(y)
    if np.unique(y).size < 2:
        raise DataError("training needs both classes present")
    return KnnModel(k=k, points=X, labels=y)


def knn_predict(model: KnnModel, x: np.ndarray) -> tuple[int, float]:
    """(class, vote fraction among the k nearest).

    Neighbor order is (distance, coordinates, label), so the result never
    depends on the storage order of the training points. Vote ties break
    by the smaller summed distance, then the lower class id.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.points.shape[1],):
        raise DataError(
            f"vector has {x.shape} shape, model expects ({model.points.shape[1]},)"
        )
    diffs = model.points - x
    dists = np.sqrt((diffs * diffs).sum(axis=1))
    order = sorted(
        range(len(dists)),
        key=lambda i: (dists[i], tuple(model.points[i]), int(model.labels[i])),
    )
    chosen = order[: model.k]
    votes: dict[int, int] = {}
    summed: dict[int, float] = {}
    for i in chosen:
        c = int(model.labels[i])
        votes[c] = votes.get(c, 0) + 1
        summed[c] = summed.get(c, 0.0) + float(dists[i])
    winner = min(votes, key=lambda c: (-votes[c], summed[c], c))
    return winner, votes[winner] / model.k
