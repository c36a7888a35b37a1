"""Built-in classifier, link-prediction heuristics, metrics, and evaluation.

The classifier is a deterministic full-batch gradient-descent logistic
regression with L2 regularization on the weights (not the bias). AUC-ROC
is rank-based (Mann-Whitney with tie correction) over raw scores.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .graph import StaticProjection

__all__ = [
    "TrainConfig",
    "LogisticModel",
    "Metrics",
    "HoldoutResult",
    "train_logistic",
    "logistic_loss",
    "logistic_gradient",
    "evaluate",
    "auc_roc",
    "f1_from",
    "repeated_holdout",
    "feature_importance",
    "jaccard",
    "adamic_adar",
]


# ---------------------------------------------------------------------------
# Link-prediction heuristics
# ---------------------------------------------------------------------------

def jaccard(proj: StaticProjection, u: int, v: int) -> float:
    """|N(u) & N(v)| / |N(u) | N(v)| over undirected neighbor sets."""
    nu, nv = proj.neighbors(u), proj.neighbors(v)
    union = nu | nv
    if not union:
        return 0.0
    return len(nu & nv) / len(union)


def adamic_adar(proj: StaticProjection, u: int, v: int) -> float:
    """Sum of 1/ln(degree) over common neighbors; degree-1 neighbors add 0."""
    score = 0.0
    for w in proj.neighbors(u) & proj.neighbors(v):
        d = len(proj.neighbors(w))
        if d > 1:
            score += 1.0 / math.log(d)
    return score


# ---------------------------------------------------------------------------
# Logistic regression
# ---------------------------------------------------------------------------

def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -50.0, 50.0)))


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 500
    l2: float = 1e-3
    seed: int = 0


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float
    config: TrainConfig
    feature_names: tuple[str, ...] | None = None
    final_loss: float = float("nan")
    loss_history: list[float] = field(default_factory=list, repr=False)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(np.asarray(X, dtype=np.float64) @ self.weights + self.bias)

    def predict(self, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) >= threshold).astype(np.int64)

    def to_json_obj(self) -> dict:
        return {
            "weights": [float(w) for w in self.weights],
            "bias": float(self.bias),
            "config": asdict(self.config),
            "feature_names": list(self.feature_names) if self.feature_names else None,
            "final_loss": float(self.final_loss),
        }

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_obj(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "LogisticModel":
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        names = obj.get("feature_names")
        return cls(
            weights=np.asarray(obj["weights"], dtype=np.float64),
            bias=float(obj["bias"]),
            config=TrainConfig(**obj["config"]),
            feature_names=tuple(names) if names else None,
            final_loss=float(obj.get("final_loss", float("nan"))),
        )


def _check_xy(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be 2-dimensional")
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"{X.shape[0]} rows vs {y.shape[0]} labels")
    if X.shape[0] < 2:
        raise ValueError("need at least 2 rows")
    if not np.isfinite(X).all():
        raise ValueError("features must be finite")
    if set(np.unique(y)) != {0.0, 1.0}:
        raise ValueError("labels must contain both classes 0 and 1")
    return X, y


def logistic_loss(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float) -> float:
    """Mean binary cross-entropy plus (l2/2)*||w||^2."""
    p = _sigmoid(X @ w + b)
    eps = 1e-12
    ce = -np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps))
    return float(ce + 0.5 * l2 * float(w @ w))


def logistic_gradient(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float
) -> tuple[np.ndarray, float]:
    p = _sigmoid(X @ w + b)
    err = p - y
    gw = X.T @ err / len(y) + l2 * w
    gb = float(np.mean(err))
    return gw, gb


def train_logistic(
    X: np.ndarray,
    y: np.ndarray,
    config: TrainConfig | None = None,
    feature_names: Sequence[str] | None = None,
) -> LogisticModel:
    """Full-batch gradient descent on the regularized logistic loss.

    Weights start at zero, so training is deterministic for a given input
    regardless of the seed (the seed is carried for split bookkeeping).
    """
    config = config or TrainConfig()
    X, y = _check_xy(X, y)
    if feature_names is not None and len(feature_names) != X.shape[1]:
        raise ValueError("feature_names length must match feature count")
    w = np.zeros(X.shape[1], dtype=np.float64)
    b = 0.0
    history = []
    for _ in range(config.epochs):
        gw, gb = logistic_gradient(w, b, X, y, config.l2)
        w -= config.learning_rate * gw
        b -= config.learning_rate * gb
        history.append(logistic_loss(w, b, X, y, config.l2))
    return LogisticModel(
        weights=w,
        bias=b,
        config=config,
        feature_names=tuple(feature_names) if feature_names else None,
        final_loss=history[-1] if history else float("nan"),
        loss_history=history,
    )


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float
    auc_roc: float
    tp: float
    fp: float
    tn: float
    fn: float

    def as_dict(self) -> dict[str, float]:
        return {k: float(v) for k, v in asdict(self).items()}


def f1_from(precision: float, recall: float) -> float:
    denom = precision + recall
    return 2.0 * precision * recall / denom if denom > 0 else 0.0


def auc_roc(y_true: Sequence[int], scores: Sequence[float]) -> float:
    """Rank-based AUC with average ranks on ties; 0.5 when one class is absent."""
    y = np.asarray(y_true, dtype=np.int64)
    s = np.asarray(scores, dtype=np.float64)
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())
    if n_pos == 0 or n_neg == 0:
        return 0.5
    order = np.argsort(s, kind="mergesort")
    ranks = np.empty(len(s), dtype=np.float64)
    sorted_scores = s[order]
    i = 0
    while i < len(s):
        j = i
        while j + 1 < len(s) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    rank_sum = float(ranks[y == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def evaluate(y_true: Sequence[int], scores: Sequence[float], threshold: float = 0.5) -> Metrics:
    """Thresholded confusion metrics plus rank-based AUC over the scores."""
    y = np.asarray(y_true, dtype=np.int64)
    s = np.asarray(scores, dtype=np.float64)
    if y.shape != s.shape:
        raise ValueError(f"{y.shape[0]} labels vs {s.shape[0]} scores")
    if not np.isfinite(s).all():
        raise ValueError("scores must be finite")
    pred = s >= threshold
    tp = int(np.sum(pred & (y == 1)))
    fp = int(np.sum(pred & (y == 0)))
    tn = int(np.sum(~pred & (y == 0)))
    fn = int(np.sum(~pred & (y == 1)))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return Metrics(
        precision=precision,
        recall=recall,
        f1=f1_from(precision, recall),
        auc_roc=auc_roc(y, s),
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
    )


# ---------------------------------------------------------------------------
# Repeated holdout
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HoldoutResult:
    mean: Metrics
    repeats: tuple[Metrics, ...]

    def to_json_obj(self) -> dict:
        return {
            "mean": self.mean.as_dict(),
            "repeats": [m.as_dict() for m in self.repeats],
        }


def _stratified_split(
    y: np.ndarray, split: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Class-preserving train/test indices with exact total train size."""
    n = len(y)
    target = int(math.floor(split * n + 0.5))
    classes = [0, 1]
    per_class = {c: np.flatnonzero(y == c) for c in classes}
    base = {c: int(math.floor(split * len(per_class[c]))) for c in classes}
    remainder = sorted(
        classes,
        key=lambda c: (-(split * len(per_class[c]) - base[c]), c),
    )
    short = target - sum(base.values())
    for c in remainder:
        if short <= 0:
            break
        if base[c] < len(per_class[c]):
            base[c] += 1
            short -= 1
    train_parts, test_parts = [], []
    for c in classes:
        idx = per_class[c].copy()
        rng.shuffle(idx)
        k = base[c]
        if k == 0:
            raise ValueError(f"split leaves class {c} out of the training set")
        train_parts.append(idx[:k])
        test_parts.append(idx[k:])
    train = np.sort(np.concatenate(train_parts))
    test = np.sort(np.concatenate(test_parts))
    return train, test


def repeated_holdout(
    X: np.ndarray,
    y: np.ndarray,
    split: float = 0.75,
    repeats: int = 1,
    seed: int = 0,
    trainer: Callable[[np.ndarray, np.ndarray], LogisticModel] | None = None,
    threshold: float = 0.5,
) -> HoldoutResult:
    """Average Metrics over stratified random train/test splits.

    Deterministic for a given seed; per-repeat metrics are kept for
    variance reporting. The trainer must return an object exposing
    ``predict_proba``.
    """
    if not 0.0 < split < 1.0:
        raise ValueError("split must be in (0, 1)")
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    X, y = _check_xy(X, y)
    if trainer is None:
        trainer = lambda Xt, yt: train_logistic(Xt, yt)  # noqa: E731
    results: list[Metrics] = []
    for rep in range(repeats):
        rng = np.random.default_rng([seed, rep])
        train, test = _stratified_split(y, split, rng)
        model = trainer(X[train], y[train])
        scores = model.predict_proba(X[test])
        results.append(evaluate(y[test].astype(np.int64), scores, threshold))
    mean = Metrics(
        **{
            name: float(np.mean([getattr(m, name) for m in results]))
            for name in ("precision", "recall", "f1", "auc_roc", "tp", "fp", "tn", "fn")
        }
    )
    return HoldoutResult(mean, tuple(results))


def feature_importance(
    model: LogisticModel,
    feature_names: Sequence[str] | None = None,
) -> list[tuple[str, float]]:
    """Features ranked by |weight| descending; ties keep canonical order."""
    names = feature_names or model.feature_names
    if names is None:
        names = tuple(f"f{i}" for i in range(len(model.weights)))
    if len(names) != len(model.weights):
        raise ValueError("feature_names length must match the weight vector")
    order = sorted(range(len(names)), key=lambda i: (-abs(float(model.weights[i])), i))
    return [(names[i], float(model.weights[i])) for i in order]
