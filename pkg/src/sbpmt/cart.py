"""Weighted axis-parallel CART partition builder.

Classification splitting with weighted Gini impurity.  Trees only provide
the partition; leaf models are attached one level up.  Routing convention:
x goes left iff x[feature] <= threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_GAIN_TOL = 1e-12


@dataclass
class Leaf:
    leaf_id: int
    rows: np.ndarray  # training row indices landing here


@dataclass
class Internal:
    feature: int
    threshold: float
    left: "Internal | Leaf"
    right: "Internal | Leaf"


TreeNode = Internal | Leaf


def _weighted_gini_sum(class_weights: np.ndarray) -> float:
    # W * gini = W - sum_c w_c^2 / W; additive over children.
    total = float(np.sum(class_weights))
    if total <= 0.0:
        return 0.0
    return total - float(np.sum(np.square(class_weights))) / total


def _best_split(X, y, w, rows, n_classes, min_leaf_size):
    """Best (gain, feature, threshold) over all midpoint candidates.

    Ties break to the lowest feature index, then the lowest threshold
    (the first maximum along each sorted feature).
    """
    n = rows.size
    y_node = y[rows]
    w_node = w[rows]
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), y_node] = 1.0
    onehot *= w_node[:, None]
    parent_impurity = _weighted_gini_sum(onehot.sum(axis=0))

    best = None  # (gain, feature, threshold)
    for j in range(X.shape[1]):
        v = X[rows, j]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        # candidate boundaries: between consecutive distinct values, with
        # enough raw rows on both sides
        cut = np.arange(1, n)
        ok = vs[1:] > vs[:-1]
        ok &= (cut >= min_leaf_size) & (n - cut >= min_leaf_size)
        if not np.any(ok):
            continue
        cw = np.cumsum(onehot[order], axis=0)  # class-weight mass left of cut
        left = cw[:-1][ok]
        total_cw = cw[-1]
        right = total_cw - left
        lt = left.sum(axis=1)
        rt = right.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            gl = lt - np.where(lt > 0, np.square(left).sum(axis=1) / lt, 0.0)
            gr = rt - np.where(rt > 0, np.square(right).sum(axis=1) / rt, 0.0)
        gains = parent_impurity - gl - gr
        k = int(np.argmax(gains))
        if gains[k] > _GAIN_TOL and (best is None or gains[k] > best[0]):
            idx = cut[ok][k]
            thr = 0.5 * (vs[idx - 1] + vs[idx])
            best = (float(gains[k]), j, float(thr))
    return best


def build_tree(X, y, n_classes: int, sample_weights, max_depth: int,
               min_leaf_size: int) -> TreeNode:
    """Greedy recursive partitioning by weighted Gini decrease.

    Stops at max_depth, on pure nodes, when no split leaves min_leaf_size
    raw rows on both sides, or when the best impurity decrease is below
    tolerance.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    w = np.asarray(sample_weights, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("empty data")
    if max_depth < 0 or min_leaf_size < 1:
        raise ValueError("bad tree configuration")

    leaves: list[Leaf] = []

    def grow(rows: np.ndarray, depth: int) -> TreeNode:
        if depth < max_depth and np.unique(y[rows]).size > 1:
            found = _best_split(X, y, w, rows, n_classes, min_leaf_size)
            if found is not None:
                _, j, thr = found
                mask = X[rows, j] <= thr
                left = grow(rows[mask], depth + 1)
                right = grow(rows[~mask], depth + 1)
                return Internal(feature=j, threshold=thr, left=left, right=right)
        leaf = Leaf(leaf_id=len(leaves), rows=rows)
        leaves.append(leaf)
        return leaf

    return grow(np.arange(X.shape[0]), 0)


def iter_leaves(tree: TreeNode) -> list[Leaf]:
    out: list[Leaf] = []

    def walk(node):
        if isinstance(node, Leaf):
            out.append(node)
        else:
            walk(node.left)
            walk(node.right)

    walk(tree)
    return out


def route(tree: TreeNode, x) -> int:
    """Leaf id of the unique partition cell containing x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    node = tree
    while isinstance(node, Internal):
        if node.feature >= x.shape[0]:
            raise ValueError("feature dimension mismatch")
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.leaf_id


def route_many(tree: TreeNode, X) -> np.ndarray:
    """Vectorized routing; returns one leaf id per row of X."""
    X = np.asarray(X, dtype=float)
    out = np.empty(X.shape[0], dtype=int)

    def walk(node, idx):
        if idx.size == 0:
            return
        if isinstance(node, Leaf):
            out[idx] = node.leaf_id
            return
        if node.feature >= X.shape[1]:
            raise ValueError("feature dimension mismatch")
        mask = X[idx, node.feature] <= node.threshold
        walk(node.left, idx[mask])
        walk(node.right, idx[~mask])

    walk(tree, np.arange(X.shape[0]))
    return out
