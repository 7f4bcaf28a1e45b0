"""Numerically stable probit kernel and the single-feature WLS solver.

Everything here is pure and operates on scalars or numpy arrays alike.
The central object is the margin u = y*f(x); all response/weight algebra
is expressed through the inverse Mills ratio r(u) = phi(u)/Phi(u) so that
nothing overflows or cancels for u far below zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

# Margins are clamped to [-U_MAX, U_MAX] before entering response/weight
# formulas; beyond |u| = 8 the loss curvature underflows double precision.
U_MAX = 8.0

LN2 = math.log(2.0)

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def norm_pdf(x):
    """Standard normal density phi(x)."""
    return _INV_SQRT_2PI * np.exp(-0.5 * np.square(x))


def norm_cdf(x):
    """Standard normal cdf Phi(x), via erfc so the lower tail keeps
    relative accuracy (Phi(-8) ~ 6.2e-16 is exact to ~1 ulp)."""
    return 0.5 * special.erfc(-np.asarray(x, dtype=float) / _SQRT2)


def inv_mills(u):
    """Inverse Mills ratio r(u) = phi(u)/Phi(u).

    Uses the scaled complementary error function: r(u) = sqrt(2/pi) /
    erfcx(-u/sqrt(2)), which stays finite for u << 0 where phi and Phi
    both underflow.
    """
    return _SQRT_2_OVER_PI / special.erfcx(-np.asarray(u, dtype=float) / _SQRT2)


def probit_loss(u):
    """Probit loss Q(u) = -log Phi(u), evaluated in log space."""
    return -special.log_ndtr(u)


def working_response_and_weight(y, f):
    """Newton working response z and Hessian weight w at margin y*f.

    The margin is clamped to [-U_MAX, U_MAX] first.  With r = r(u) and
    t = u + r:  z = y / t,  w = r * t.  Both are finite and w > 0 always
    (t = (u*Phi(u) + phi(u)) / Phi(u) > 0 for every real u).
    """
    y = np.asarray(y, dtype=float)
    u = np.clip(y * np.asarray(f, dtype=float), -U_MAX, U_MAX)
    r = inv_mills(u)
    t = u + r
    return y / t, r * t


@dataclass(frozen=True)
class WlsFit:
    """Weighted simple-regression fit z ~ slope*x + intercept."""

    slope: float
    intercept: float
    weighted_sse: float


# Weighted feature variance below this is treated as a constant feature.
_VAR_TOL = 1e-12


def wls_fit(x, z, w) -> WlsFit:
    """Closed-form weighted least squares of z on a single feature x.

    A feature whose weighted variance falls below tolerance yields slope 0
    and intercept equal to the weighted mean of z, so feature selection
    simply never prefers a constant column.

    Raises ValueError on empty input or nonpositive total weight.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    if x.size == 0:
        raise ValueError("empty regression")
    sw = float(np.sum(w))
    if sw <= 0.0:
        raise ValueError("total weight must be positive")
    xm = float(np.dot(w, x)) / sw
    zm = float(np.dot(w, z)) / sw
    dx = x - xm
    dz = z - zm
    sxx = float(np.dot(w, dx * dx))
    szz = float(np.dot(w, dz * dz))
    if sxx / sw < _VAR_TOL:
        return WlsFit(slope=0.0, intercept=zm, weighted_sse=szz)
    sxz = float(np.dot(w, dx * dz))
    slope = sxz / sxx
    sse = max(szz - slope * sxz, 0.0)
    return WlsFit(slope=slope, intercept=zm - slope * xm, weighted_sse=sse)


def wls_fit_columns(X, z, w):
    """wls_fit applied to every column of X at once.

    Returns (slopes, intercepts, sses) arrays of length p.  This is the
    inner loop of ProbitBoost, so it is fully vectorized.
    """
    X = np.asarray(X, dtype=float)
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    if X.size == 0:
        raise ValueError("empty regression")
    sw = float(np.sum(w))
    if sw <= 0.0:
        raise ValueError("total weight must be positive")
    wx = w @ X
    xm = wx / sw
    zm = float(np.dot(w, z)) / sw
    dz = z - zm
    sxx = np.maximum((w @ np.square(X)) - sw * np.square(xm), 0.0)
    szz = float(np.dot(w, dz * dz))
    sxz = ((w * dz) @ X)  # sum w * (x - xm) * (z - zm), since sum w*dz*xm = 0
    degenerate = sxx / sw < _VAR_TOL
    slopes = np.where(degenerate, 0.0, sxz / np.where(degenerate, 1.0, sxx))
    intercepts = zm - slopes * xm
    sses = np.maximum(szz - slopes * sxz, 0.0)
    return slopes, intercepts, sses
