"""Extremal line fits over (distance, log-norm) clouds.

Both exponential bounds in the library reduce to the same picture: a
cloud of points ``(d_i, L_i)`` with ``d_i >= 0`` that must sit below a
line ``L = intercept + slope * d``.  The two fits differ in which
extreme they pin down first.

``fit_growth`` finds the smallest slope that still allows a unit
prefactor: the steepest ray from the origin that touches the cloud.
Used for upper bounds, where the prefactor is secondary.

``fit_decay`` finds the most negative sustainable slope: the terminal
edge of the cloud's upper concave chain.  Any steeper decay would need
a prefactor that grows with the sampled horizon, so the terminal edge
is the tightest rate the data supports; the prefactor then comes from
the supporting line at that slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyGrid

# Slopes below this are clamped: downstream formulas assume a strictly
# positive rate even for strongly contracting families.
MIN_RATE = 1e-12


@dataclass(frozen=True)
class LineFit:
    slope: float
    log_intercept: float  # max(0, supporting intercept)
    max_slack: float      # max over cloud of L - (intercept + slope*d); <= 0 when valid

    @property
    def prefactor(self) -> float:
        return math.exp(self.log_intercept)


def upper_chain(d: np.ndarray, L: np.ndarray) -> np.ndarray:
    """Indices of the upper concave chain of the cloud, by increasing d.

    For ties in d only the highest L survives.  The chain's edge slopes
    are non-increasing left to right.
    """
    order = np.lexsort((-L, d))
    ds, Ls = d[order], L[order]
    keep = np.concatenate([[True], np.diff(ds) > 0])
    ds, Ls, order = ds[keep], Ls[keep], order[keep]

    chain: list[int] = []
    for i in range(len(ds)):
        while len(chain) >= 2:
            i0, i1 = chain[-2], chain[-1]
            # Drop the middle point when it falls below the new edge.
            lhs = (Ls[i1] - Ls[i0]) * (ds[i] - ds[i1])
            rhs = (Ls[i] - Ls[i1]) * (ds[i1] - ds[i0])
            if lhs <= rhs:
                chain.pop()
            else:
                break
        chain.append(i)
    return order[chain]


def _validate(d: np.ndarray, L: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = np.asarray(d, dtype=float)
    L = np.asarray(L, dtype=float)
    if d.size == 0:
        raise EmptyGrid("no pairs supplied to envelope fit")
    if np.any(d < 0):
        raise ValueError("cloud distances must be nonnegative")
    return d, L


def fit_growth(d: np.ndarray, L: np.ndarray) -> LineFit:
    """Smallest slope admitting a unit prefactor, then the prefactor.

    The slope is the maximum of ``L_i / d_i`` over positive distances;
    zero-distance points only contribute to the intercept.
    """
    d, L = _validate(d, L)
    pos = d > 0
    if not np.any(pos):
        raise EmptyGrid("growth fit needs at least one positive distance")
    slope = float(np.max(L[pos] / d[pos]))
    slope = max(slope, MIN_RATE)
    resid = L - slope * d
    intercept = max(0.0, float(np.max(resid)))
    slack = float(np.max(resid - intercept))
    return LineFit(slope, intercept, slack)


def fit_decay(d: np.ndarray, L: np.ndarray) -> LineFit:
    """Terminal-edge slope of the upper chain, then its intercept.

    The returned slope is the slope of the chain edge ending at the
    largest sampled distance.  With a single distinct distance the ray
    through the origin is used instead.
    """
    d, L = _validate(d, L)
    idx = upper_chain(d, L)
    if len(idx) == 1:
        i = idx[0]
        if d[i] <= 0:
            raise EmptyGrid("decay fit needs a positive distance")
        slope = float(L[i] / d[i])
    else:
        i0, i1 = idx[-2], idx[-1]
        slope = float((L[i1] - L[i0]) / (d[i1] - d[i0]))
    resid = L - slope * d
    intercept = max(0.0, float(np.max(resid)))
    slack = float(np.max(resid - intercept))
    return LineFit(slope, intercept, slack)
