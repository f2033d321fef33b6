"""Random forest: bagged decision trees over random feature subspaces.

Split search is histogram-based: every column is coded once against its
sorted distinct values, so a node evaluates all candidate thresholds of
a drawn feature from one bincount.  Candidate thresholds are the
midpoints between consecutive distinct values present in the node, ties
resolve to the lowest feature index then the lowest threshold, and each
tree draws from its own RNG stream derived from (seed, tree index) so
results do not depend on training order.
"""

from __future__ import annotations

import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DimensionError, EmptyCorpusError
from .features import FeatureMatrix

_GAIN_EPS = 1e-12   # float dust is not an improvement


@dataclass
class Leaf:
    counts: np.ndarray


@dataclass
class Internal:
    feature: int
    threshold: float
    left: "Internal | Leaf"
    right: "Internal | Leaf"


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    m_try: int | None = None          # None -> floor(log2(m)) + 1
    criterion: str = "info_gain"      # "info_gain" | "gini"
    min_leaf: int = 1
    max_depth: int | None = None
    bootstrap: bool = True
    seed: int = 0
    n_jobs: int = 1


@dataclass
class ForestModel:
    trees: list = field(default_factory=list)
    params: ForestParams = ForestParams()
    classes: list[str] = field(default_factory=list)
    n_features: int = 0


def _impurity(counts: np.ndarray, criterion: str) -> np.ndarray:
    """Rows of class counts -> impurity per row."""
    totals = counts.sum(axis=-1, keepdims=True)
    safe = np.where(totals == 0, 1, totals)
    p = counts / safe
    if criterion == "gini":
        return 1.0 - (p * p).sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(p, where=p > 0), 0.0)
    return -terms.sum(axis=-1)


class _TreeBuilder:
    def __init__(self, codes, values, y, n_classes, params, m_try, rng):
        self.codes = codes          # N x m int32 value codes
        self.values = values       # per-column sorted distinct values
        self.y = y
        self.n_classes = n_classes
        self.params = params
        self.m_try = m_try
        self.rng = rng

    def build(self, rows: np.ndarray):
        root_holder = [None]
        stack = [(rows, 0, root_holder, 0)]
        while stack:
            rows, depth, holder, slot = stack.pop()
            node = self._make_node(rows, depth, stack)
            holder[slot] = node
        return root_holder[0]

    def _make_node(self, rows, depth, stack):
        y_node = self.y[rows]
        counts = np.bincount(y_node, minlength=self.n_classes)
        p = self.params
        if (
            (counts > 0).sum() <= 1
            or rows.size < 2 * p.min_leaf
            or (p.max_depth is not None and depth >= p.max_depth)
        ):
            return Leaf(counts)
        split = self._best_split(rows, y_node, counts)
        if split is None:
            return Leaf(counts)
        feature, threshold, code_bound = split
        mask = self.codes[rows, feature] <= code_bound
        # children are filled in by later stack iterations
        node = Internal(feature, threshold, None, None)
        stack.append((rows[mask], depth + 1, _NodeSlot(node, "left"), 0))
        stack.append((rows[~mask], depth + 1, _NodeSlot(node, "right"), 0))
        return node

    def _best_split(self, rows, y_node, parent_counts):
        p = self.params
        n = rows.size
        parent_imp = _impurity(parent_counts[None, :], p.criterion)[0]
        feats = np.sort(self.rng.choice(self.codes.shape[1], size=self.m_try,
                                        replace=False))
        best = None
        for f in feats:
            codes_f = self.codes[rows, f]
            hist = np.bincount(codes_f * self.n_classes + y_node,
                               minlength=len(self.values[f]) * self.n_classes)
            hist = hist.reshape(-1, self.n_classes)
            present = np.flatnonzero(hist.sum(axis=1))
            if present.size < 2:
                continue
            left = np.cumsum(hist[present], axis=0)[:-1]
            right = parent_counts - left
            n_left = left.sum(axis=1)
            n_right = n - n_left
            valid = (n_left >= p.min_leaf) & (n_right >= p.min_leaf)
            if not valid.any():
                continue
            child_imp = (
                n_left * _impurity(left, p.criterion)
                + n_right * _impurity(right, p.criterion)
            ) / n
            gains = np.where(valid, parent_imp - child_imp, -np.inf)
            i = int(np.argmax(gains))   # first max -> lowest threshold
            if gains[i] > _GAIN_EPS and (best is None or gains[i] > best[0]):
                vals = self.values[f]
                lo, hi = vals[present[i]], vals[present[i + 1]]
                best = (gains[i], int(f), (lo + hi) / 2.0, int(present[i]))
        if best is None:
            return None
        _, feature, threshold, code_bound = best
        return feature, threshold, code_bound


class _NodeSlot:
    """Lets the build stack assign a child onto its parent by name."""

    def __init__(self, node, side):
        self.node = node
        self.side = side

    def __setitem__(self, _, value):
        setattr(self.node, self.side, value)


def _resolve_m_try(m_try, n_features: int) -> int:
    if m_try is None:
        return int(np.floor(np.log2(n_features))) + 1 if n_features > 1 else 1
    if m_try > n_features:
        warnings.warn(
            f"m_try {m_try} exceeds feature count {n_features}; clamping",
            stacklevel=3,
        )
        return n_features
    if m_try < 1:
        raise ConfigError(f"m_try must be >= 1, got {m_try}")
    return m_try


def train(matrix: FeatureMatrix, params: ForestParams = ForestParams()) -> ForestModel:
    """Fit params.n_trees trees on bootstrap samples of the matrix."""
    n, m = matrix.rows.shape
    if n == 0 or m == 0:
        raise EmptyCorpusError("cannot train on an empty matrix")
    if params.n_trees < 1:
        raise ConfigError(f"n_trees must be >= 1, got {params.n_trees}")
    if params.criterion not in ("info_gain", "gini"):
        raise ConfigError(f"unknown criterion {params.criterion!r}")
    if params.min_leaf < 1:
        raise ConfigError(f"min_leaf must be >= 1, got {params.min_leaf}")

    classes = sorted(set(matrix.labels))
    class_index = {c: i for i, c in enumerate(classes)}
    y = np.array([class_index[label] for label in matrix.labels], dtype=np.int64)

    values = []
    codes = np.empty((n, m), dtype=np.int32)
    for j in range(m):
        vals, inverse = np.unique(matrix.rows[:, j], return_inverse=True)
        values.append(vals)
        codes[:, j] = inverse
    m_try = _resolve_m_try(params.m_try, m)

    def grow(t: int):
        rng = np.random.default_rng([params.seed, t])
        rows = rng.integers(0, n, size=n) if params.bootstrap else np.arange(n)
        builder = _TreeBuilder(codes, values, y, len(classes), params, m_try, rng)
        return builder.build(rows)

    if params.n_jobs > 1:
        with ThreadPoolExecutor(max_workers=params.n_jobs) as pool:
            trees = list(pool.map(grow, range(params.n_trees)))
    else:
        trees = [grow(t) for t in range(params.n_trees)]
    return ForestModel(trees, params, classes, m)


def _route(node, row: np.ndarray):
    while isinstance(node, Internal):
        node = node.left if row[node.feature] <= node.threshold else node.right
    return node


def predict(model: ForestModel, row) -> str:
    """Plurality vote over the trees' leaf-majority classes."""
    row = np.asarray(row, dtype=float)
    if row.shape != (model.n_features,):
        raise DimensionError(
            f"row has {row.size} values, model expects {model.n_features}")
    votes = np.zeros(len(model.classes), dtype=np.int64)
    for tree in model.trees:
        leaf = _route(tree, row)
        votes[int(np.argmax(leaf.counts))] += 1
    return model.classes[int(np.argmax(votes))]


def _route_batch(node, x: np.ndarray, indices: np.ndarray, out: np.ndarray):
    stack = [(node, indices)]
    while stack:
        node, idx = stack.pop()
        if isinstance(node, Leaf):
            out[idx] = int(np.argmax(node.counts))
            continue
        mask = x[idx, node.feature] <= node.threshold
        stack.append((node.left, idx[mask]))
        stack.append((node.right, idx[~mask]))


def predict_batch(model: ForestModel, rows) -> list[str]:
    """Elementwise predict, order-preserving."""
    x = rows.rows if isinstance(rows, FeatureMatrix) else np.asarray(rows, dtype=float)
    if x.ndim != 2 or x.shape[1] != model.n_features:
        raise DimensionError(
            f"matrix has {x.shape[1] if x.ndim == 2 else '?'} columns, "
            f"model expects {model.n_features}")
    if x.shape[0] == 0:
        return []
    votes = np.zeros((x.shape[0], len(model.classes)), dtype=np.int64)
    leaf_class = np.empty(x.shape[0], dtype=np.int64)
    all_rows = np.arange(x.shape[0])
    for tree in model.trees:
        _route_batch(tree, x, all_rows, leaf_class)
        votes[all_rows, leaf_class] += 1
    return [model.classes[i] for i in np.argmax(votes, axis=1)]


# ---------------------------------------------------------------------------
# serialization: flat node table, safe for arbitrarily deep trees


def _tree_to_records(root) -> list[dict]:
    records = []
    stack = [(root, None, None)]
    while stack:
        node, parent_idx, side = stack.pop()
        idx = len(records)
        if isinstance(node, Leaf):
            records.append({"counts": [int(c) for c in node.counts]})
        else:
            records.append({"feature": node.feature,
                            "threshold": node.threshold,
                            "left": -1, "right": -1})
            stack.append((node.left, idx, "left"))
            stack.append((node.right, idx, "right"))
        if parent_idx is not None:
            records[parent_idx][side] = idx
    return records


def _tree_from_records(records: list[dict]):
    nodes: list = [None] * len(records)
    for i in range(len(records) - 1, -1, -1):
        rec = records[i]
        if "counts" in rec:
            nodes[i] = Leaf(np.array(rec["counts"], dtype=np.int64))
        else:
            nodes[i] = Internal(rec["feature"], rec["threshold"],
                                nodes[rec["left"]], nodes[rec["right"]])
    return nodes[0]


def model_to_dict(model: ForestModel) -> dict:
    p = model.params
    return {
        "format": "carsent-forest/1",
        "params": {
            "n_trees": p.n_trees, "m_try": p.m_try, "criterion": p.criterion,
            "min_leaf": p.min_leaf, "max_depth": p.max_depth,
            "bootstrap": p.bootstrap, "seed": p.seed,
        },
        "classes": list(model.classes),
        "n_features": model.n_features,
        "trees": [_tree_to_records(t) for t in model.trees],
    }


def model_from_dict(data: dict) -> ForestModel:
    if data.get("format") != "carsent-forest/1":
        raise ConfigError("not a serialized forest model")
    params = ForestParams(**data["params"])
    trees = [_tree_from_records(records) for records in data["trees"]]
    return ForestModel(trees, params, list(data["classes"]), data["n_features"])


def save_model(model: ForestModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, sort_keys=True)


def load_model(path) -> ForestModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
