"""CART binary classification trees: Gini splitting, best-first growth with a
leaf cap, minimal cost-complexity pruning, and array-flattened fast predict.

Split search is vectorized per feature (sort + cumulative class counts), the
best candidate being the lowest-cost boundary; ties resolve to the earliest
feature index and lowest threshold, which keeps tree construction fully
deterministic for a given feature ordering.
"""

from __future__ import annotations

import heapq

import numpy as np


class Node:
    __slots__ = ("feature", "threshold", "left", "right", "n", "counts", "impurity", "depth")

    def __init__(self, n, counts, impurity, depth):
        self.feature = -1
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.n = n
        self.counts = counts  # class counts (absence, presence)
        self.impurity = impurity
        self.depth = depth

    @property
    def is_leaf(self):
        return self.left is None


def _gini(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - (p * p).sum())


def best_split(X, y, idx, features, min_samples_leaf):
    """Lowest weighted-child-Gini split of rows ``idx`` over ``features``.

    Returns (cost, feature, threshold) with cost = (nL*gL + nR*gR)/n, or
    (inf, -1, nan) when no admissible boundary exists.
    """
    ysub = y[idx]
    n = idx.size
    total1 = int(ysub.sum())
    best_cost, best_feature, best_threshold = np.inf, -1, np.nan

    sizes_l = np.arange(1, n, dtype=float)
    sizes_r = n - sizes_l
    size_ok = (sizes_l >= min_samples_leaf) & (sizes_r >= min_samples_leaf)

    for f in features:
        x = X[idx, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        valid = (xs[1:] > xs[:-1]) & size_ok
        if not valid.any():
            continue
        n1l = np.cumsum(ysub[order])[:-1].astype(float)
        n0l = sizes_l - n1l
        n1r = total1 - n1l
        n0r = sizes_r - n1r
        # (nL*gL + nR*gR)/n expanded to avoid forming child proportions
        cost = (sizes_l - (n0l * n0l + n1l * n1l) / sizes_l
                + sizes_r - (n0r * n0r + n1r * n1r) / sizes_r) / n
        cost[~valid] = np.inf
        i = int(cost.argmin())
        if cost[i] < best_cost:
            best_cost = float(cost[i])
            best_feature = int(f)
            best_threshold = float((xs[i] + xs[i + 1]) / 2.0)
    return best_cost, best_feature, best_threshold


def grow_tree(
    X,
    y,
    max_depth=None,
    min_samples_split=2,
    min_samples_leaf=1,
    max_leaf_nodes=None,
    max_features=None,
    rng=None,
) -> Node:
    """Grow a tree best-first by impurity improvement.

    ``max_features`` draws a fresh random feature subset (sorted ascending)
    for every candidate split; with ``max_features = d`` the candidate order
    matches a plain exhaustive CART, so the two coincide exactly.
    """
    n_total, d = X.shape
    if max_features is None or max_features >= d:
        feature_pool = None
    else:
        if rng is None:
            rng = np.random.default_rng()
        feature_pool = max_features

    def make_node(idx, depth):
        counts = np.bincount(y[idx], minlength=2).astype(float)
        return Node(idx.size, counts, _gini(counts), depth), idx

    def candidate(node, idx):
        """Evaluate the node's best split; returns (improvement, split) or None."""
        if node.impurity <= 0.0 or node.n < min_samples_split:
            return None
        if max_depth is not None and node.depth >= max_depth:
            return None
        feats = np.arange(d) if feature_pool is None else np.sort(rng.choice(d, feature_pool, replace=False))
        cost, f, thr = best_split(X, y, idx, feats, min_samples_leaf)
        if f < 0:
            return None
        improvement = (node.n / n_total) * (node.impurity - cost)
        if improvement <= 1e-15:
            return None
        return improvement, f, thr

    root, root_idx = make_node(np.arange(n_total), 0)
    heap = []
    counter = 0  # heap tie-break: earlier candidates first
    cand = candidate(root, root_idx)
    if cand is not None:
        heapq.heappush(heap, (-cand[0], counter, root, root_idx, cand[1], cand[2]))
        counter += 1

    n_leaves = 1
    cap = np.inf if max_leaf_nodes is None else max_leaf_nodes
    while heap and n_leaves < cap:
        _, _, node, idx, f, thr = heapq.heappop(heap)
        mask = X[idx, f] <= thr
        node.feature, node.threshold = f, thr
        node.left, left_idx = make_node(idx[mask], node.depth + 1)
        node.right, right_idx = make_node(idx[~mask], node.depth + 1)
        n_leaves += 1
        for child, child_idx in ((node.left, left_idx), (node.right, right_idx)):
            cand = candidate(child, child_idx)
            if cand is not None:
                heapq.heappush(heap, (-cand[0], counter, child, child_idx, cand[1], cand[2]))
                counter += 1
    return root


def _iter_nodes(root: Node):
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        if not node.is_leaf:
            stack.append(node.right)
            stack.append(node.left)


def prune_ccp(root: Node, ccp_alpha: float, n_total: int) -> Node:
    """Minimal cost-complexity pruning, weakest link first.

    R(t) = (n_t / n_total) * gini(t); internal nodes whose per-removed-leaf
    impurity gain g(t) = (R(t) - R(subtree)) / (leaves - 1) does not exceed
    ``ccp_alpha`` are collapsed, smallest g first.
    """
    if not np.isfinite(ccp_alpha):
        root.left = root.right = None
        root.feature = -1
        return root

    def risk(node):
        return (node.n / n_total) * node.impurity

    while True:
        internals = [t for t in _iter_nodes(root) if not t.is_leaf]
        if not internals:
            break
        best_g, best_node = np.inf, None
        for t in internals:
            leaves = [u for u in _iter_nodes(t) if u.is_leaf]
            g = (risk(t) - sum(risk(u) for u in leaves)) / (len(leaves) - 1)
            if g < best_g:
                best_g, best_node = g, t
        if best_g <= ccp_alpha + 1e-12:
            best_node.left = best_node.right = None
            best_node.feature = -1
        else:
            break
    return root


def tree_importance(root: Node, n_total: int, d: int) -> np.ndarray:
    """Total weighted impurity decrease contributed by each feature."""
    imp = np.zeros(d)
    for t in _iter_nodes(root):
        if t.is_leaf:
            continue
        child_cost = (t.left.n * t.left.impurity + t.right.n * t.right.impurity) / t.n
        imp[t.feature] += (t.n / n_total) * (t.impurity - child_cost)
    return imp


class FlatTree:
    """Array form of a tree for vectorized prediction and serialization."""

    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=int)
        self.threshold = np.asarray(threshold, dtype=float)
        self.left = np.asarray(left, dtype=int)
        self.right = np.asarray(right, dtype=int)
        self.value = np.asarray(value, dtype=float)  # (n_nodes, 2) leaf class frequencies

    @classmethod
    def from_node(cls, root: Node) -> "FlatTree":
        feature, threshold, left, right, value = [], [], [], [], []

        def add(node):
            i = len(feature)
            feature.append(node.feature)
            threshold.append(node.threshold)
            left.append(-1)
            right.append(-1)
            total = node.counts.sum()
            value.append(node.counts / total if total else np.array([0.5, 0.5]))
            if not node.is_leaf:
                left[i] = add(node.left)
                right[i] = add(node.right)
            return i

        add(root)
        return cls(feature, threshold, left, right, value)

    def leaf_proba(self, X: np.ndarray) -> np.ndarray:
        """Class-frequency vector of the leaf each row lands in."""
        node = np.zeros(X.shape[0], dtype=int)
        while True:
            internal = self.feature[node] >= 0
            if not internal.any():
                break
            rows = np.flatnonzero(internal)
            at = node[rows]
            go_left = X[rows, self.feature[at]] <= self.threshold[at]
            node[rows] = np.where(go_left, self.left[at], self.right[at])
        return self.value[node]

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FlatTree":
        return cls(d["feature"], d["threshold"], d["left"], d["right"], d["value"])
