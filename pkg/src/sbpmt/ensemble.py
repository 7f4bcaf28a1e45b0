"""Boosting and subagging layers over Probit Model Trees.

Binary AdaBoost and multi-class SAMME share one loop: SAMME adds ln(J-1)
to the stage weight and retains a stage iff err_t < 1 - 1/J; for J = 2
that is exactly AdaBoost.  The subagging layer draws M index subsets of
size floor(alpha * n) without replacement (with replacement at the subset
level) and majority-votes the boosted members.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import pmt

ERR_CLAMP = 1e-10

# Paper-default hyperparameters used for the real-dataset benchmarks.
PAPER_DEFAULT = dict(M=21, T=5, B=100, alpha=0.7, depth=6, min_leaf_size=20)


@dataclass
class BoostStage:
    alpha: float
    model: pmt.PmtModel
    err: float       # clamped error used for alpha
    raw_err: float   # weighted error as observed
    probit_risk: float | None  # PMT-level probit risk under this round's weights


@dataclass
class BoostedPmt:
    stages: list[BoostStage]
    n_classes: int

    @property
    def errors(self) -> list[float]:
        return [s.raw_err for s in self.stages]


@dataclass
class Design:
    subsets: list[np.ndarray]
    seed: int

    @property
    def M(self) -> int:
        return len(self.subsets)


@dataclass
class SbpmtConfig:
    M: int = PAPER_DEFAULT["M"]
    T: int = PAPER_DEFAULT["T"]
    B: int = PAPER_DEFAULT["B"]
    alpha: float = PAPER_DEFAULT["alpha"]
    depth: int = PAPER_DEFAULT["depth"]
    min_leaf_size: int = PAPER_DEFAULT["min_leaf_size"]
    seed: int = 0


@dataclass
class SbpmtModel:
    members: list[BoostedPmt]
    design: Design
    config: SbpmtConfig
    n_classes: int
    schema: dict | None = field(default=None)


def _fit_boosted(X, y, n_classes, T, depth, min_leaf_size, probit_iters):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    m = X.shape[0]
    if m == 0:
        raise ValueError("empty data")
    if T < 1:
        raise ValueError("need at least one boosting round")
    err_ceiling = 1.0 - 1.0 / n_classes
    shift = math.log(n_classes - 1)
    w = np.full(m, 1.0 / m)
    stages: list[BoostStage] = []
    for t in range(T):
        model = pmt.fit_pmt(X, y, n_classes, w, depth, min_leaf_size,
                            probit_iters)
        miss = pmt.predict_pmt_many(model, X) != y
        raw_err = float(np.dot(w, miss))
        if raw_err >= err_ceiling - ERR_CLAMP and t > 0:
            break  # weak learner no better than chance; keep prior stages
        err = min(max(raw_err, ERR_CLAMP), err_ceiling - ERR_CLAMP)
        alpha = 0.5 * math.log((1.0 - err) / err) + shift
        stages.append(BoostStage(alpha=alpha, model=model, err=err,
                                 raw_err=raw_err,
                                 probit_risk=model.probit_risk))
        if raw_err >= err_ceiling - ERR_CLAMP:
            break  # clamped first stage; further rounds would repeat it
        w = w * np.exp(alpha * miss)
        w = w / float(np.sum(w))
    return BoostedPmt(stages=stages, n_classes=n_classes)


def fit_adaboost(X, y, T: int, depth: int, min_leaf_size: int,
                 probit_iters: int) -> BoostedPmt:
    """Binary AdaBoost over PMT base learners (class indices 0/1)."""
    return _fit_boosted(X, y, 2, T, depth, min_leaf_size, probit_iters)


def fit_samme(X, y, n_classes: int, T: int, depth: int, min_leaf_size: int,
              probit_iters: int) -> BoostedPmt:
    """SAMME multi-class AdaBoost; for n_classes = 2 it equals fit_adaboost."""
    if n_classes < 2:
        raise ValueError("need at least 2 classes")
    return _fit_boosted(X, y, n_classes, T, depth, min_leaf_size, probit_iters)


def predict_boosted_many(model: BoostedPmt, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    votes = np.zeros((X.shape[0], model.n_classes))
    for stage in model.stages:
        preds = pmt.predict_pmt_many(stage.model, X)
        votes[np.arange(X.shape[0]), preds] += stage.alpha
    # argmax takes the smallest class index on ties; for the binary case
    # that is the sign(0) = -1 (class 0) convention
    return np.argmax(votes, axis=1)


def predict_boosted(model: BoostedPmt, x) -> int:
    return int(predict_boosted_many(model, np.asarray(x, dtype=float)[None, :])[0])


def draw_design(n: int, alpha: float, M: int, seed: int) -> Design:
    """M subsets of size floor(alpha*n), sampled without replacement each,
    independently across subsets; reproducible from seed."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("subagging ratio must be in (0, 1]")
    m = int(math.floor(alpha * n))
    if m < 1:
        raise ValueError("subsample size floor(alpha*n) must be >= 1")
    rng = np.random.default_rng(seed)
    subsets = [np.sort(rng.choice(n, size=m, replace=False)) for _ in range(M)]
    return Design(subsets=subsets, seed=seed)


def fit_sbpmt(X, y, n_classes: int, config: SbpmtConfig,
              schema: dict | None = None) -> SbpmtModel:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.shape[0] == 0:
        raise ValueError("empty data")
    design = draw_design(X.shape[0], config.alpha, config.M, config.seed)
    members = [
        _fit_boosted(X[idx], y[idx], n_classes, config.T, config.depth,
                     config.min_leaf_size, config.B)
        for idx in design.subsets
    ]
    return SbpmtModel(members=members, design=design, config=config,
                      n_classes=n_classes, schema=schema)


def predict_sbpmt_many(model: SbpmtModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if model.n_classes == 2:
        # sign of the mean of member outputs in {-1,+1}; ties -> class 0
        total = np.zeros(X.shape[0])
        for member in model.members:
            total += 2 * predict_boosted_many(member, X) - 1
        return (total > 0).astype(int)
    counts = np.zeros((X.shape[0], model.n_classes), dtype=int)
    for member in model.members:
        preds = predict_boosted_many(member, X)
        counts[np.arange(X.shape[0]), preds] += 1
    return np.argmax(counts, axis=1)


def predict_sbpmt(model: SbpmtModel, x) -> int:
    return int(predict_sbpmt_many(model, np.asarray(x, dtype=float)[None, :])[0])
