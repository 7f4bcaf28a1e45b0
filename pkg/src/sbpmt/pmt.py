"""Probit Model Tree: CART partition + per-leaf ProbitBoost models.

Binary leaves carry one LinearScore (positive margin predicts class 1);
multi-class leaves carry one LinearScore per class, decided by argmax.
Binary ties go to class 0 (the sign(0) = -1 convention); multi-class ties
go to the smallest class index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cart, numerics, probitboost
from .probitboost import LinearScore


@dataclass
class PmtModel:
    tree: cart.TreeNode
    leaf_models: dict[int, LinearScore | list[LinearScore]]
    n_classes: int
    depth: int
    probit_iters: int
    # Weighted probit risk of the whole tree (binary only; None for J > 2).
    # Feeds the Theorem-6-style bound on boosted training error.
    probit_risk: float | None = None


def fit_pmt(X, y, n_classes: int, sample_weights, depth: int,
            min_leaf_size: int, probit_iters: int) -> PmtModel:
    """Fit the CART partition, then ProbitBoost within each leaf.

    sample_weights are used both for splitting and, renormalized within
    each leaf, for the leaf fits.  A leaf whose weight mass underflowed to
    zero falls back to uniform weights over its rows.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    w = np.asarray(sample_weights, dtype=float)
    total = float(np.sum(w))
    if total <= 0:
        raise ValueError("sample weights must have positive sum")
    w = w / total

    tree = cart.build_tree(X, y, n_classes, w, depth, min_leaf_size)
    leaf_models: dict[int, LinearScore | list[LinearScore]] = {}
    risk = 0.0
    for leaf in cart.iter_leaves(tree):
        rows = leaf.rows
        lw = w[rows]
        mass = float(np.sum(lw))
        if mass <= 0.0:
            lw = np.ones(rows.size)
            mass = 0.0
        if n_classes == 2:
            ypm = np.where(y[rows] == 1, 1.0, -1.0)
            score, trace = probitboost.fit_probitboost(
                X[rows], ypm, lw, probit_iters)
            leaf_models[leaf.leaf_id] = score
            risk += mass * trace.risks[-1]
        else:
            leaf_models[leaf.leaf_id] = probitboost.fit_probitboost_ova(
                X[rows], y[rows], n_classes, lw, probit_iters)
    return PmtModel(tree=tree, leaf_models=leaf_models, n_classes=n_classes,
                    depth=depth, probit_iters=probit_iters,
                    probit_risk=risk if n_classes == 2 else None)


def _decide(model: PmtModel, leaf_id: int, x) -> int:
    entry = model.leaf_models[leaf_id]
    if model.n_classes == 2:
        return 1 if entry.margin(x) > 0 else 0
    margins = [s.margin(x) for s in entry]
    return int(np.argmax(margins))


def predict_pmt(model: PmtModel, x) -> int:
    """Class index for one feature vector."""
    return _decide(model, cart.route(model.tree, x), x)


def predict_pmt_many(model: PmtModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    leaf_ids = cart.route_many(model.tree, X)
    out = np.empty(X.shape[0], dtype=int)
    for leaf_id in np.unique(leaf_ids):
        idx = np.flatnonzero(leaf_ids == leaf_id)
        entry = model.leaf_models[leaf_id]
        if model.n_classes == 2:
            out[idx] = (entry.margins(X[idx]) > 0).astype(int)
        else:
            margins = np.column_stack([s.margins(X[idx]) for s in entry])
            out[idx] = np.argmax(margins, axis=1)
    return out


def weighted_probit_risk(model: PmtModel, X, y, sample_weights) -> float:
    """Binary PMT probit risk sum_i w_i * Q(y_i * f_leaf(x_i)) on given data."""
    if model.n_classes != 2:
        raise ValueError("probit risk is defined for binary models")
    X = np.asarray(X, dtype=float)
    ypm = np.where(np.asarray(y) == 1, 1.0, -1.0)
    w = np.asarray(sample_weights, dtype=float)
    w = w / float(np.sum(w))
    leaf_ids = cart.route_many(model.tree, X)
    margins = np.empty(X.shape[0])
    for leaf_id in np.unique(leaf_ids):
        idx = np.flatnonzero(leaf_ids == leaf_id)
        margins[idx] = model.leaf_models[leaf_id].margins(X[idx])
    return float(np.dot(w, numerics.probit_loss(ypm * margins)))
