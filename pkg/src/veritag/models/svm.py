"""Linear SVM trained by dual coordinate descent.

L1-hinge primal: (1/2)||w||^2 + C * sum hinge(y_i, w.x_i + b), with the bias
folded into the weight vector through a constant augmented component (so it
is regularized, as in common dual solvers). Deterministic cyclic coordinate
order, no shrinking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError, InvariantError

DEFAULT_COST = 0.1
DUALITY_GAP_TOL = 1e-4
MAX_PASSES = 10_000
_MONOTONE_SLACK = 1e-9


@dataclass(frozen=True)
class LinearSvmModel:
    weights: np.ndarray
    bias: float
    cost: float

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=np.float64)
        if not np.all(np.isfinite(weights)) or not np.isfinite(self.bias):
            raise InvariantError("SVM parameters must be finite")
        object.__setattr__(self, "weights", weights)

    def decision(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != self.weights.shape:
            raise DataError(
                f"vector has {x.shape[0]} features, model expects "
                f"{self.weights.shape[0]}"
            )
        return float(self.weights @ x + self.bias)


def _check_binary(y: np.ndarray) -> None:
    present = set(np.unique(y))
    if present - {0, 1}:
        raise DataError("labels must be 0/1")
    if len(present) < 2:
        raise DataError("training needs both classes present")


def svm_train(
    X: np.ndarray,
    y: np.ndarray,
    C: float = DEFAULT_COST,
    tol: float = DUALITY_GAP_TOL,
    max_passes: int = MAX_PASSES,
) -> LinearSvmModel:
    """Fit by cyclic dual coordinate descent.

    Stops when the relative duality gap falls under tol or after
    max_passes sweeps. The solver's objective (the dual) is asserted
    monotone per pass within 1e-9 relative slack; the primal is tracked
    only for the gap test, since dual steps do not keep it monotone.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise DataError("X and y shapes disagree")
    _check_binary(y)
    if C <= 0:
        raise DataError("cost must be positive")

    n, d = X.shape
    t = np.where(y == 1, 1.0, -1.0)
    Xa = np.hstack([X, np.ones((n, 1))])  # bias component
    q = (Xa * Xa).sum(axis=1)  # Q_ii, >= 1 thanks to the bias column
    alpha = np.zeros(n)
    w = np.zeros(d + 1)

    def primal() -> float:
        margins = 1.0 - t * (Xa @ w)
        return 0.5 * float(w @ w) + C * float(np.clip(margins, 0.0, None).sum())

    def dual() -> float:
        return float(alpha.sum()) - 0.5 * float(w @ w)

    prev_dual = dual()
    for _ in range(max_passes):
        for i in range(n):
            g = t[i] * (w @ Xa[i]) - 1.0
            a_new = min(max(alpha[i] - g / q[i], 0.0), C)
            delta = a_new - alpha[i]
            if delta != 0.0:
                alpha[i] = a_new
                w += delta * t[i] * Xa[i]
        p = primal()
        dl = dual()
        if dl < prev_dual - _MONOTONE_SLACK * max(1.0, abs(prev_dual)):
            raise InvariantError("dual objective decreased during training")
        prev_dual = dl
        if p - dl <= tol * max(1.0, abs(p)):
            break
    return LinearSvmModel(weights=w[:-1].copy(), bias=float(w[-1]), cost=C)


def svm_predict(model: LinearSvmModel, x: np.ndarray) -> tuple[int, float]:
    """(class, signed margin); a margin of exactly 0 goes to class 0."""
    margin = model.decision(x)
    return (1 if margin > 0.0 else 0), margin
