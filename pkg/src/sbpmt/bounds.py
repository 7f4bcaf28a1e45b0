"""Finite-sample generalization-bound calculators.

Covers the incomplete-U-statistic voting bound (with its Q_A/Q_B/Q_C
design quantiles), exact design statistics A/B/C, the VC complexity bound
for boosted classifiers, the weighted-training-error product bound, and
its probit-risk variant.  The kernel quantities sigma1_sq, beta_kernel and
gamma_kernel are not estimable from a single dataset and must be supplied
by the caller.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import numerics
from .ensemble import Design, SbpmtModel, predict_boosted_many


@dataclass
class DesignStats:
    """Coverage statistics of a subagging design.

    R_k counts how many subsets contain instance k;
    A = sum_k R_k^2 / M^2, B = sum_{k != l} R_kl^2 / M^2 (ordered pairs,
    each unordered pair counted twice), C = max_k R_k / M.
    """

    R: np.ndarray
    A: float
    B: float
    C: float


def design_stats(design: Design, n: int) -> DesignStats:
    M = design.M
    incidence = np.zeros((M, n), dtype=np.int64)
    for i, subset in enumerate(design.subsets):
        incidence[i, subset] = 1
    R = incidence.sum(axis=0)
    co = incidence.T @ incidence  # co[k, l] = R_kl, diagonal = R_k
    off_sq = float(np.sum(np.square(co))) - float(np.sum(np.square(np.diag(co))))
    return DesignStats(
        R=R,
        A=float(np.sum(np.square(R))) / M**2,
        B=off_sq / M**2,
        C=float(np.max(R)) / M,
    )


@dataclass
class BoundInputs:
    n: int
    m: int
    M: int
    delta: float
    p_sub: float
    sigma1_sq: float
    beta_kernel: float
    gamma_kernel: float


@dataclass
class BoundReport:
    Q_A: float
    Q_B: float
    Q_C: float
    rhs: float
    hypothesis_ok: bool
    degenerate: bool = False  # set when the exponent margin t is <= 0


def theorem3_bound(inputs: BoundInputs) -> BoundReport:
    """Voting-classifier generalization bound for a random subagging design.

    rhs = exp(-t^2 / (2 Q_A^2 sigma1^2 + Q_B^2 beta/2
                      + (sqrt(Q_B gamma) + 4 Q_C^2 / 3) t))
    with t = (ceil(M/2) - M/2)/M + 1 - 2 p_sub.  hypothesis_ok flags the
    M > ln^2(n) requirement and p_sub < 1/2; a nonpositive t makes the
    bound vacuous (rhs = 1, degenerate).
    """
    n, m, M, delta = inputs.n, inputs.m, inputs.M, inputs.delta
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must be in (0, 1)")
    if m > n:
        raise ValueError("subsample size m cannot exceed n")
    if min(inputs.sigma1_sq, inputs.beta_kernel, inputs.gamma_kernel) < 0:
        raise ValueError("kernel moment inputs must be nonnegative")
    log3d = math.log(3.0 / delta)
    c = 1.0 + 4.0 * math.sqrt(log3d)
    Q_A = math.sqrt(m**2 / n) + c * math.sqrt(m / M)
    Q_B = m**2 / n + c * m / math.sqrt(M)
    Q_C = m / n + (math.sqrt(2.0 * m) + 3.0) / math.sqrt(M) * log3d
    t = (math.ceil(M / 2) - M / 2) / M + 1.0 - 2.0 * inputs.p_sub
    hypothesis_ok = M > math.log(n) ** 2 and inputs.p_sub < 0.5
    if t <= 0.0:
        return BoundReport(Q_A=Q_A, Q_B=Q_B, Q_C=Q_C, rhs=1.0,
                           hypothesis_ok=hypothesis_ok, degenerate=True)
    denom = (2.0 * Q_A**2 * inputs.sigma1_sq
             + Q_B**2 * inputs.beta_kernel / 2.0
             + (math.sqrt(Q_B * inputs.gamma_kernel) + 4.0 * Q_C**2 / 3.0) * t)
    rhs = math.exp(-t * t / denom) if denom > 0.0 else 0.0
    return BoundReport(Q_A=Q_A, Q_B=Q_B, Q_C=Q_C, rhs=rhs,
                       hypothesis_ok=hypothesis_ok)


def theorem4_bound(n: int, T: int, d_vc: int, delta: float,
                   empirical_error: float) -> float:
    """VC complexity bound for a T-round boosted classifier on n samples."""
    if n < max(d_vc, T):
        raise ValueError("requires n >= max(d_vc, T)")
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must be in (0, 1)")
    inner = (T * math.log(math.e * n / T)
             + d_vc * math.log(math.e * n / d_vc)
             + math.log(8.0 / delta))
    return empirical_error + math.sqrt(32.0 * inner / n)


def theorem5_bound(errors, theta: float = 0.0) -> float:
    """Margin bound 2^T prod_t sqrt(err_t^(1-theta) (1-err_t)^(1+theta))."""
    errors = np.asarray(errors, dtype=float)
    if np.any((errors < 0) | (errors > 1)):
        raise ValueError("stage errors must lie in [0, 1]")
    T = errors.size
    prod = float(np.prod(np.sqrt(errors ** (1.0 - theta)
                                 * (1.0 - errors) ** (1.0 + theta))))
    return 2.0**T * prod


@dataclass
class Theorem6Report:
    training_term: float
    complexity_term: float
    total: float
    hypothesis_ok: bool


def theorem6_bound(probit_risks, n: int, T: int, d_vc: int,
                   delta: float) -> Theorem6Report:
    """Generalization bound driven by per-round PMT probit risks.

    gamma_t = 1/2 - eps_t / ln 2; requires 0 <= eps_t/ln2 < 1/2 for every
    round, otherwise the training term is reported as 1 and flagged.
    """
    risks = np.asarray(probit_risks, dtype=float)
    if risks.size != T:
        raise ValueError("need one probit risk per boosting round")
    scaled = risks / numerics.LN2
    ok = bool(np.all((scaled >= 0.0) & (scaled < 0.5)))
    if ok:
        gammas = 0.5 - scaled
        training = math.exp(-2.0 * float(np.sum(np.square(gammas))))
    else:
        training = 1.0
    complexity = theorem4_bound(n, T, d_vc, delta, 0.0)
    return Theorem6Report(training_term=training, complexity_term=complexity,
                          total=training + complexity, hypothesis_ok=ok)


def estimate_p_sub(model: SbpmtModel, X, y) -> float:
    """Out-of-subset plug-in estimate of the member error rate p_sub.

    Each member is scored on the rows outside its own design subset; the
    estimates are averaged.  With alpha = 1 nothing is held out and the
    (optimistic) training error is returned with a warning.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    n = X.shape[0]
    rates = []
    for member, subset in zip(model.members, model.design.subsets):
        held_out = np.setdiff1d(np.arange(n), subset)
        if held_out.size == 0:
            warnings.warn("alpha = 1 leaves no held-out rows; "
                          "falling back to training error for p_sub")
            held_out = np.arange(n)
        preds = predict_boosted_many(member, X[held_out])
        rates.append(float(np.mean(preds != y[held_out])))
    return float(np.mean(rates))
