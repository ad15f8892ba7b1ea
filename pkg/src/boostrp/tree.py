"""Best-first regression trees with variance-reduction splits.

Leaves hold a vector of ``c`` values (``c = 1`` for scalar trees). A tree can
be relabelled: its structure kept and leaf values recomputed as per-leaf
means of another target matrix.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .data import make_rng
from .errors import ConfigError, RelabelError, ShapeError

# upper bound on rows * features * outputs materialized at once during split search
_CHUNK_CELLS = 1 << 22


@dataclass(frozen=True)
class TreeConfig:
    max_leaves: int = 2
    k_features: Optional[int] = None
    min_samples_leaf: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.max_leaves < 2:
            raise ConfigError("max_leaves must be at least 2")
        if self.k_features is not None and self.k_features < 1:
            raise ConfigError("k_features must be at least 1")
        if self.min_samples_leaf < 1:
            raise ConfigError("min_samples_leaf must be at least 1")


@dataclass(frozen=True)
class RegressionTree:
    """Node arrays in preorder; ``feature == -1`` marks a leaf.

    ``value`` is (n_nodes, c); internal nodes carry the mean of their subtree
    so the arrays stay dense, but only leaf values are used for prediction.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    n_samples: np.ndarray
    n_features: int

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.value.shape[1]

    @property
    def is_leaf(self) -> np.ndarray:
        return self.feature < 0

    @property
    def n_leaves(self) -> int:
        return int(self.is_leaf.sum())

    def apply(self, X) -> np.ndarray:
        """Index of the leaf reached by each row of ``X``."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ShapeError(f"tree was fit on {self.n_features} features, got input of shape {X.shape}")
        node = np.zeros(X.shape[0], dtype=np.intp)
        active = np.arange(X.shape[0])
        while active.size:
            nd = node[active]
            feat = self.feature[nd]
            inner = feat >= 0
            active, nd, feat = active[inner], nd[inner], feat[inner]
            if not active.size:
                break
            go_left = X[active, feat] <= self.threshold[nd]
            node[active] = np.where(go_left, self.left[nd], self.right[nd])
        return node

    def predict(self, X) -> np.ndarray:
        return self.value[self.apply(X)]


def presort(X) -> np.ndarray:
    """Row order of each feature column, shape (p, n); reusable across trees on the same X."""
    X = np.asarray(X, dtype=np.float64)
    return np.argsort(np.ascontiguousarray(X.T), axis=1, kind="stable")


def _split_search(XT, Y, rows, in_node, order, features, min_leaf):
    """Best (gain, feature, threshold, left_rows) for one node, or None.

    ``XT`` is X transposed (p, n), ``order`` its presorted row order and
    ``in_node`` a boolean mask of the node's rows.
    """
    m = rows.size
    c = Y.shape[1]
    if m < 2 * min_leaf:
        return None
    Yn = Y[rows]
    mean = Yn.mean(axis=0)
    Yc = Yn - mean
    parent = float(np.sum(Yc * Yc))
    if parent <= 0.0:
        return None
    Yc_full = Y - mean
    nl = np.arange(1, m, dtype=np.float64)
    scale = (1.0 / nl + 1.0 / (m - nl))[None, :]
    size_ok = ((nl >= min_leaf) & (m - nl >= min_leaf))[None, :]

    best = None
    step = max(1, _CHUNK_CELLS // max(1, m * c))
    for start in range(0, len(features), step):
        feats = features[start:start + step]
        sub = order[feats]
        # keep each feature's sorted order restricted to the node's rows
        node_order = sub[in_node[sub]].reshape(len(feats), m)
        xs = np.take_along_axis(XT[feats], node_order, axis=1)
        # centered targets: right-child sum is minus left-child sum
        left_sums = np.cumsum(Yc_full[node_order], axis=1)[:, :-1]
        gain = np.einsum("kic,kic->ki", left_sums, left_sums) * scale
        valid = (xs[:, 1:] > xs[:, :-1]) & size_ok
        gain = np.where(valid, gain, -np.inf)
        # feature-major flattening: first maximum = lowest feature, then lowest threshold
        flat = gain.reshape(-1)
        idx = int(np.argmax(flat))
        g = flat[idx]
        if not np.isfinite(g) or (best is not None and g <= best[0]):
            continue
        kf, i = divmod(idx, m - 1)
        lo, hi = xs[kf, i], xs[kf, i + 1]
        tau = 0.5 * (lo + hi)
        if not (lo <= tau < hi):
            tau = lo
        best = (float(g), int(feats[kf]), float(tau))
    if best is None or not best[0] > parent * 1e-12:
        return None
    gain, feat, tau = best
    return gain, feat, tau, XT[feat, rows] <= tau


def _label(feature, left, right, leaf_of_row, Y):
    """Per-node means of ``Y`` given the leaf of each row (preorder arrays)."""
    n_nodes = feature.shape[0]
    sums = np.zeros((n_nodes, Y.shape[1]))
    np.add.at(sums, leaf_of_row, Y)
    counts = np.bincount(leaf_of_row, minlength=n_nodes).astype(np.int64)
    for t in range(n_nodes - 1, -1, -1):
        if feature[t] >= 0:
            sums[t] = sums[left[t]] + sums[right[t]]
            counts[t] = counts[left[t]] + counts[right[t]]
    empty = (feature < 0) & (counts == 0)
    if empty.any():
        raise RelabelError(f"leaf {int(np.nonzero(empty)[0][0])} is reached by no sample")
    with np.errstate(invalid="ignore", divide="ignore"):
        values = sums / counts[:, None]
    return values, counts


def fit_tree(X, targets, config: TreeConfig = TreeConfig(), sorted_rows=None) -> RegressionTree:
    """Grow a tree best-first until ``config.max_leaves`` leaves or no useful split.

    ``sorted_rows`` may pass a cached :func:`presort` of ``X``.
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(targets, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y.reshape(-1, 1)
    if X.ndim != 2 or Y.ndim != 2 or X.shape[0] != Y.shape[0] or X.shape[0] < 1:
        raise ShapeError(f"incompatible shapes X{X.shape}, targets{Y.shape}")
    n, p = X.shape
    k = p if config.k_features is None else min(config.k_features, p)
    rng = make_rng(config.seed)
    XT = np.ascontiguousarray(X.T)
    order = presort(X) if sorted_rows is None else sorted_rows
    all_features = np.arange(p)

    def candidate_features():
        if k >= p:
            return all_features
        return np.sort(rng.choice(p, size=k, replace=False))

    # growth-order node storage: [feature, threshold, left, right]
    nodes = []
    heap = []
    tick = itertools.count()

    def new_leaf(rows, expandable=True):
        nid = len(nodes)
        nodes.append([-1, 0.0, -1, -1, rows])
        if not expandable:
            return nid
        in_node = np.zeros(n, dtype=bool)
        in_node[rows] = True
        split = _split_search(XT, Y, rows, in_node, order, candidate_features(), config.min_samples_leaf)
        if split is not None:
            # larger gain first; earlier nodes win ties
            heapq.heappush(heap, (-split[0], next(tick), nid, split))
        return nid

    new_leaf(np.arange(n))
    n_leaves = 1
    while heap and n_leaves < config.max_leaves:
        _, _, nid, (_, feat, tau, go_left) = heapq.heappop(heap)
        rows = nodes[nid][4]
        nodes[nid][0], nodes[nid][1] = feat, tau
        n_leaves += 1
        # children of the last permitted split are never expanded; skip their search
        grow = n_leaves < config.max_leaves
        nodes[nid][2] = new_leaf(rows[go_left], grow)
        nodes[nid][3] = new_leaf(rows[~go_left], grow)

    # renumber to preorder
    order = []
    stack = [0]
    while stack:
        t = stack.pop()
        order.append(t)
        if nodes[t][0] >= 0:
            stack.append(nodes[t][3])
            stack.append(nodes[t][2])
    new_id = {old: new for new, old in enumerate(order)}
    feature = np.array([nodes[t][0] for t in order], dtype=np.intp)
    threshold = np.array([nodes[t][1] for t in order], dtype=np.float64)
    left = np.array([new_id[nodes[t][2]] if nodes[t][0] >= 0 else -1 for t in order], dtype=np.intp)
    right = np.array([new_id[nodes[t][3]] if nodes[t][0] >= 0 else -1 for t in order], dtype=np.intp)
    leaf_of_row = np.empty(n, dtype=np.intp)
    for t in order:
        if nodes[t][0] < 0:
            leaf_of_row[nodes[t][4]] = new_id[t]
    value, counts = _label(feature, left, right, leaf_of_row, Y)
    return RegressionTree(feature, threshold, left, right, value, counts, p)


def predict_tree(tree: RegressionTree, X) -> np.ndarray:
    return tree.predict(X)


def relabel_leaves(tree: RegressionTree, X, new_targets) -> RegressionTree:
    """Keep the structure of ``tree``; set each leaf to the mean of ``new_targets`` over its rows."""
    Y = np.asarray(new_targets, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y.reshape(-1, 1)
    X = np.asarray(X, dtype=np.float64)
    if Y.ndim != 2 or Y.shape[0] != X.shape[0]:
        raise ShapeError(f"new_targets has {Y.shape[0]} rows, X has {X.shape[0]}")
    leaf = tree.apply(X)
    value, counts = _label(tree.feature, tree.left, tree.right, leaf, Y)
    return replace(tree, value=value, n_samples=counts)
