"""Stratified k-fold cross-validation and the classification metric suite."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import forest, select
from .errors import ConfigError, DimensionError, EmptyCorpusError
from .features import FeatureMatrix
from .forest import ForestParams


@dataclass(frozen=True)
class FoldPlan:
    folds: tuple[np.ndarray, ...]

    @property
    def k(self) -> int:
        return len(self.folds)


def stratified_folds(labels, k: int, seed: int) -> FoldPlan:
    """Shuffle each class with one seeded RNG and deal it round-robin,
    so per-class fold counts differ by at most one."""
    labels = np.asarray(labels)
    n = labels.size
    if k < 2:
        raise ConfigError(f"need at least 2 folds, got {k}")
    if k > n:
        raise ConfigError(f"cannot split {n} rows into {k} folds")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    # the deal counter runs across classes so fold sizes stay balanced too
    next_fold = 0
    for cls in sorted(set(labels.tolist())):
        indices = np.flatnonzero(labels == cls)
        indices = rng.permutation(indices)
        for row in indices:
            folds[next_fold % k].append(int(row))
            next_fold += 1
    return FoldPlan(tuple(np.array(sorted(f), dtype=np.int64) for f in folds))


@dataclass
class MetricBlock:
    precision: float
    recall: float
    f1: float

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def _f1(p: float, r: float) -> float:
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def compute_metrics(confusion) -> dict:
    """Accuracy plus per-class / weighted / macro precision, recall, F1.

    Confusion rows are actual classes, columns predicted.  Weighted
    averages use class support, which makes weighted recall coincide
    with accuracy.
    """
    confusion = np.asarray(confusion)
    if confusion.ndim != 2 or confusion.shape[0] != confusion.shape[1]:
        raise DimensionError(f"confusion matrix must be square, got {confusion.shape}")
    if (confusion < 0).any():
        raise DimensionError("confusion matrix counts must be nonnegative")
    n = confusion.sum()
    n_classes = confusion.shape[0]
    row_sums = confusion.sum(axis=1)
    col_sums = confusion.sum(axis=0)
    diag = np.diag(confusion)

    per_class = []
    for c in range(n_classes):
        precision = diag[c] / col_sums[c] if col_sums[c] else 0.0
        recall = diag[c] / row_sums[c] if row_sums[c] else 0.0
        per_class.append(MetricBlock(float(precision), float(recall),
                                     _f1(precision, recall)))

    def averaged(weights) -> MetricBlock:
        p = sum(w * m.precision for w, m in zip(weights, per_class))
        r = sum(w * m.recall for w, m in zip(weights, per_class))
        f = sum(w * m.f1 for w, m in zip(weights, per_class))
        return MetricBlock(p, r, f)

    supports = row_sums / n if n else np.zeros(n_classes)
    uniform = np.full(n_classes, 1.0 / n_classes)
    return {
        "accuracy": float(diag.sum() / n) if n else 0.0,
        "per_class": per_class,
        "weighted": averaged(supports),
        "macro": averaged(uniform),
        "support": [int(s) for s in row_sums],
    }


@dataclass(frozen=True)
class SelectionConfig:
    mode: str = "threshold"        # "threshold" | "top_k" | "none"
    threshold: float = 0.0
    k: int | None = None
    global_fit: bool = False       # fit selection once on the full matrix


def select_columns(matrix: FeatureMatrix, selection: SelectionConfig) -> list[int]:
    if selection.mode == "none":
        return list(range(len(matrix.specs)))
    if selection.mode == "threshold":
        ranked = select.rank_features(matrix)
        keep = {r.spec.name for r in ranked if r.gain > selection.threshold}
    elif selection.mode == "top_k":
        if not selection.k or selection.k <= 0:
            raise ConfigError("top_k selection needs a positive k")
        ranked = select.rank_features(matrix)
        keep = {r.spec.name for r in ranked[: selection.k]}
    else:
        raise ConfigError(f"unknown selection mode {selection.mode!r}")
    indices = [i for i, s in enumerate(matrix.specs) if s.name in keep]
    # never hand the forest a zero-column matrix
    return indices or list(range(len(matrix.specs)))


@dataclass
class EvalReport:
    classes: list[str]
    confusion: np.ndarray
    accuracy: float
    per_class: dict
    weighted: MetricBlock
    macro: MetricBlock
    fold_accuracies: list[float]
    selected_per_fold: list[int]
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "classes": self.classes,
            "confusion": [[int(v) for v in row] for row in self.confusion],
            "accuracy": self.accuracy,
            "per_class": {c: m.to_dict() for c, m in self.per_class.items()},
            "weighted": self.weighted.to_dict(),
            "macro": self.macro.to_dict(),
            "fold_accuracies": self.fold_accuracies,
            "selected_per_fold": self.selected_per_fold,
            "config": self.config,
        }


def report_from_confusion(confusion, classes, config=None,
                          fold_accuracies=None, selected=None) -> EvalReport:
    metrics = compute_metrics(confusion)
    return EvalReport(
        classes=list(classes),
        confusion=np.asarray(confusion),
        accuracy=metrics["accuracy"],
        per_class=dict(zip(classes, metrics["per_class"])),
        weighted=metrics["weighted"],
        macro=metrics["macro"],
        fold_accuracies=fold_accuracies or [],
        selected_per_fold=selected or [],
        config=config or {},
    )


def cross_validate(matrix: FeatureMatrix, params: ForestParams, k: int,
                   seed: int, selection: SelectionConfig = SelectionConfig()) -> EvalReport:
    """Train and score per fold, pooling one confusion matrix.

    Selection defaults to a per-fold refit on the training rows only, so
    held-out rows never influence which columns survive; global_fit
    instead selects once on the full matrix before folding.
    """
    if matrix.rows.shape[0] == 0:
        raise EmptyCorpusError("cannot cross-validate an empty matrix")
    classes = sorted(set(matrix.labels))
    class_index = {c: i for i, c in enumerate(classes)}

    if selection.global_fit:
        cols = select_columns(matrix, selection)
        matrix = matrix.subset(col_indices=cols)

    plan = stratified_folds(matrix.labels, k, seed)
    n_classes = len(classes)
    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    fold_accuracies = []
    selected_per_fold = []
    all_rows = np.arange(matrix.rows.shape[0])
    for fold in plan.folds:
        train_rows = np.setdiff1d(all_rows, fold)
        train_matrix = matrix.subset(row_indices=train_rows)
        if selection.global_fit:
            cols = list(range(len(matrix.specs)))
        else:
            cols = select_columns(train_matrix, selection)
            train_matrix = train_matrix.subset(col_indices=cols)
        selected_per_fold.append(len(cols))
        model = forest.train(train_matrix, params)
        probe = matrix.rows[fold][:, cols]
        predicted = forest.predict_batch(model, probe)
        actual = matrix.labels[fold]
        hits = 0
        for a, p in zip(actual, predicted):
            confusion[class_index[a], class_index[p]] += 1
            hits += a == p
        fold_accuracies.append(hits / len(fold))
    return report_from_confusion(
        confusion, classes,
        config={
            "folds": k, "cv_seed": seed,
            "forest": {
                "n_trees": params.n_trees, "m_try": params.m_try,
                "criterion": params.criterion, "min_leaf": params.min_leaf,
                "max_depth": params.max_depth, "bootstrap": params.bootstrap,
                "seed": params.seed,
            },
            "selection": {
                "mode": selection.mode, "threshold": selection.threshold,
                "k": selection.k, "global_fit": selection.global_fit,
            },
        },
        fold_accuracies=fold_accuracies,
        selected=selected_per_fold,
    )


def majority_baseline_report(labels) -> EvalReport:
    """The always-predict-the-majority-class reference row."""
    labels = np.asarray(labels)
    classes = sorted(set(labels.tolist()))
    counts = np.array([(labels == c).sum() for c in classes])
    majority = int(np.argmax(counts))
    confusion = np.zeros((len(classes), len(classes)), dtype=np.int64)
    confusion[:, majority] = counts
    return report_from_confusion(confusion, classes,
                                 config={"baseline": "majority_class"})
