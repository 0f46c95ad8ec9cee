"""Admissible growth rates: monotone time scales on the real line.

A growth rate is a continuous, strictly increasing function ``mu`` with
``mu(-inf) = -inf`` and an upper limit ``ell`` that is either finite or
``+inf``.  Rates reparametrize time for every construction downstream:
semiflows are generated by ``mu``, exponential bounds are measured in
``mu``-distance, and the Green-operator weight is ``mu'``.

The catalog here covers the closed forms used throughout the test
battery plus two constructive routes: integrating a nonnegative rate
density, and interpolating a monotone table (which is how recovered
rates come back from orbit data).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import probes, rootfind
from .errors import (
    DegenerateDensity,
    NegativeDensity,
    ProbeInconclusive,
    RangeExceeded,
)
from .quadrature import integrate

INVERT_XTOL = 1e-10
TABLE_TOL = 1e-10
PROBE_HORIZON = 1.0e6


@dataclass(frozen=True)
class GrowthRate:
    """A strictly increasing time scale ``s -> mu(s)``.

    Parameters
    ----------
    fn:
        The scale itself.  Must accept floats; accepting ndarrays too
        keeps bulk evaluations cheap but is not required.
    ell:
        Upper limit ``lim_{s->+inf} mu(s)``; ``math.inf`` when the rate
        is unbounded above.
    derivative:
        Optional pointwise derivative.  ``None`` when the rate has no
        usable closed-form slope.
    inverse:
        Optional closed-form inverse; when absent, ``invert`` falls
        back to bracketed root finding.
    kinks:
        Points where the derivative is not trustworthy (table edges,
        declared corners).  Consistency checks skip neighborhoods of
        these.
    """

    fn: Callable[[float], float]
    ell: float = math.inf
    derivative: Callable[[float], float] | None = None
    inverse: Callable[[float], float] | None = None
    label: str = "custom"
    kinks: tuple[float, ...] = field(default=())

    def __call__(self, s):
        return self.fn(s)

    def prime(self, s):
        if self.derivative is None:
            raise ValueError(f"rate {self.label!r} carries no derivative")
        return self.derivative(s)

    def invert(self, r: float, xtol: float = INVERT_XTOL) -> float:
        """Solve ``mu(s) = r`` for ``s``.

        Raises RangeExceeded when ``r`` is not below ``ell``, and
        BracketFailure when the bracket search cannot enclose the
        preimage (which for an admissible rate indicates a bad window
        or a degenerate table run).
        """
        if not r < self.ell:
            raise RangeExceeded(
                f"target {r} is not below the upper limit {self.ell}"
            )
        if self.inverse is not None:
            return float(self.inverse(r))
        f = lambda s: float(self.fn(s)) - r
        f0 = f(0.0)
        if f0 == 0.0:
            return 0.0
        step = 1.0 if f0 < 0.0 else -1.0
        a, b, fa, fb = rootfind.expand_bracket(f, 0.0, step=step)
        return rootfind.solve_bracketed(f, a, b, fa, fb, xtol=xtol)


@dataclass(frozen=True)
class EllProbe:
    """Outcome of the upper-limit probe."""

    value: float            # math.inf when the probe diverged
    uncertainty: float      # tail estimate for finite limits, 0.0 otherwise
    samples: tuple[tuple[float, float], ...]

    @property
    def diverged(self) -> bool:
        return math.isinf(self.value)


def classify_ell(
    rate_or_fn,
    start: float = 1.0,
    horizon: float = PROBE_HORIZON,
    tol: float = 1e-9,
) -> EllProbe:
    """Estimate ``lim_{s->+inf} mu(s)`` from geometric samples.

    Evaluates the rate at ``start * 2**k`` up to ``horizon`` and
    classifies the increment sequence: sustained increments mean the
    limit is ``+inf``; geometrically dying increments give a finite
    estimate with a tail-sum uncertainty.  Raises Inconclusive when the
    samples settle neither way.
    """
    fn = rate_or_fn.fn if isinstance(rate_or_fn, GrowthRate) else rate_or_fn
    xs = [start]
    while xs[-1] * 2.0 <= horizon:
        xs.append(xs[-1] * 2.0)
    vals = np.array([float(fn(x)) for x in xs])
    verdict = probes.classify_tail(vals, tol=tol, what="upper-limit probe")
    samples = tuple(zip(xs, vals.tolist()))
    if verdict.diverges:
        return EllProbe(math.inf, 0.0, samples)
    return EllProbe(verdict.estimate, verdict.uncertainty, samples)


# ---------------------------------------------------------------------------
# Catalog


def identity() -> GrowthRate:
    return GrowthRate(
        fn=lambda s: s,
        ell=math.inf,
        derivative=lambda s: np.ones_like(np.asarray(s, dtype=float))
        if np.ndim(s)
        else 1.0,
        inverse=lambda r: r,
        label="identity",
    )


def polynomial_log() -> GrowthRate:
    """``mu(s) = sign(s) * ln(1 + |s|)``: logarithmic compression."""

    def fn(s):
        s = np.asarray(s, dtype=float)
        out = np.sign(s) * np.log1p(np.abs(s))
        return float(out) if out.ndim == 0 else out

    def deriv(s):
        s = np.asarray(s, dtype=float)
        out = 1.0 / (1.0 + np.abs(s))
        return float(out) if out.ndim == 0 else out

    def inv(r):
        r = np.asarray(r, dtype=float)
        out = np.sign(r) * np.expm1(np.abs(r))
        return float(out) if out.ndim == 0 else out

    return GrowthRate(fn=fn, ell=math.inf, derivative=deriv, inverse=inv,
                      label="polynomial_log")


def neg_exp() -> GrowthRate:
    """``mu(s) = -exp(-s)``: bounded above with limit zero."""
    return GrowthRate(
        fn=lambda s: -np.exp(-np.asarray(s, dtype=float))
        if np.ndim(s)
        else -math.exp(-s),
        ell=0.0,
        derivative=lambda s: np.exp(-np.asarray(s, dtype=float))
        if np.ndim(s)
        else math.exp(-s),
        inverse=lambda r: -math.log(-r),
        label="neg_exp",
    )


def odd_power(n: int = 1) -> GrowthRate:
    """``mu(s) = s**(2n+1)``; the derivative vanishes at the origin."""
    if n < 1:
        raise ValueError("odd_power needs n >= 1")
    p = 2 * n + 1

    def fn(s):
        s = np.asarray(s, dtype=float)
        out = np.sign(s) * np.abs(s) ** p
        return float(out) if out.ndim == 0 else out

    def deriv(s):
        s = np.asarray(s, dtype=float)
        out = p * np.abs(s) ** (p - 1)
        return float(out) if out.ndim == 0 else out

    def inv(r):
        r = np.asarray(r, dtype=float)
        out = np.sign(r) * np.abs(r) ** (1.0 / p)
        return float(out) if out.ndim == 0 else out

    return GrowthRate(fn=fn, ell=math.inf, derivative=deriv, inverse=inv,
                      label=f"odd_power_{p}")


def from_table(
    nodes: Sequence[float],
    values: Sequence[float],
    ell: float = math.inf,
    derivative: Callable[[float], float] | None = None,
    label: str = "table",
) -> GrowthRate:
    """Monotone-cubic rate through ``(nodes, values)``.

    Inside the table a shape-preserving piecewise cubic is used;
    outside, the edge secants continue linearly so inversion brackets
    keep working slightly beyond the window.  Nodes and values must
    both be strictly increasing.
    """
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    if nodes.ndim != 1 or nodes.shape != values.shape or nodes.size < 2:
        raise ValueError("table needs matching 1-d nodes and values")
    if np.any(np.diff(nodes) <= 0):
        raise ValueError("table nodes must be strictly increasing")
    if np.any(np.diff(values) <= 0):
        raise ValueError("table values must be strictly increasing")

    interp = PchipInterpolator(nodes, values, extrapolate=False)
    dinterp = interp.derivative()
    lo, hi = nodes[0], nodes[-1]
    slope_lo = (values[1] - values[0]) / (nodes[1] - nodes[0])
    slope_hi = (values[-1] - values[-2]) / (nodes[-1] - nodes[-2])

    def fn(s):
        s = np.asarray(s, dtype=float)
        out = np.where(
            s < lo,
            values[0] + slope_lo * (s - lo),
            np.where(
                s > hi,
                values[-1] + slope_hi * (s - hi),
                interp(np.clip(s, lo, hi)),
            ),
        )
        return float(out) if out.ndim == 0 else out

    if derivative is None:
        def derivative(s):
            s = np.asarray(s, dtype=float)
            out = np.where(
                s < lo,
                slope_lo,
                np.where(s > hi, slope_hi, dinterp(np.clip(s, lo, hi))),
            )
            return float(out) if out.ndim == 0 else out

    return GrowthRate(fn=fn, ell=ell, derivative=derivative, label=label,
                      kinks=(float(lo), float(hi)))


def from_rate_density(
    rho: Callable[[float], float],
    window: tuple[float, float] = (-50.0, 50.0),
    num: int = 2001,
    tol: float = TABLE_TOL,
    label: str = "density",
) -> GrowthRate:
    """Rate ``mu(t) = integral of rho from 0 to t`` from a density.

    ``rho`` must be nonnegative; the window must contain zero.  The
    integral is tabulated by per-interval Simpson steps on a uniform
    grid and interpolated monotonically; beyond the window the library
    integrates on demand.  Divergence of both tails is probed
    numerically and the derivative is ``rho`` itself.

    Raises NegativeDensity on any sampled negative value and warns
    (DegenerateDensity) when the density vanishes on a whole sampled
    subinterval, since the resulting rate is then only nondecreasing.
    """
    lo, hi = float(window[0]), float(window[1])
    if not lo < 0.0 < hi:
        raise ValueError("density window must contain zero")
    if num < 3:
        raise ValueError("density table needs at least 3 nodes")

    nodes = np.linspace(lo, hi, num)
    h = nodes[1] - nodes[0]
    rho_nodes = np.array([float(rho(x)) for x in nodes])
    rho_mid = np.array([float(rho(x + 0.5 * h)) for x in nodes[:-1]])
    sampled = np.concatenate([rho_nodes, rho_mid])
    if np.any(sampled < 0.0):
        worst = float(np.min(sampled))
        raise NegativeDensity(f"density reaches {worst} on the sample grid")

    dead = (rho_nodes[:-1] == 0.0) & (rho_mid == 0.0) & (rho_nodes[1:] == 0.0)
    if np.any(dead):
        i = int(np.argmax(dead))
        warnings.warn(
            f"density vanishes on [{nodes[i]:.6g}, {nodes[i + 1]:.6g}]; "
            "the rate is not strictly increasing there",
            DegenerateDensity,
            stacklevel=2,
        )

    # Cumulative Simpson: each interval uses its endpoints and midpoint.
    steps = (h / 6.0) * (rho_nodes[:-1] + 4.0 * rho_mid + rho_nodes[1:])
    cumulative = np.concatenate([[0.0], np.cumsum(steps)])
    anchor = np.interp(0.0, nodes, cumulative)
    values = cumulative - anchor

    interp = PchipInterpolator(nodes, values, extrapolate=False)

    def fn(t):
        if np.ndim(t):
            return np.array([fn(float(x)) for x in np.asarray(t, dtype=float)])
        t = float(t)
        if lo <= t <= hi:
            return float(interp(t))
        if t > hi:
            scalar = lambda x: np.float64(rho(x))
            return float(values[-1]) + float(
                integrate(scalar, hi, t, abs_tol=tol).value
            )
        scalar = lambda x: np.float64(rho(x))
        return float(values[0]) - float(integrate(scalar, t, lo, abs_tol=tol).value)

    def deriv(t):
        if np.ndim(t):
            return np.array([float(rho(float(x))) for x in np.asarray(t)])
        return float(rho(float(t)))

    ell = math.inf
    up = _tail_diverges(rho, start=max(hi, 1.0), direction=+1)
    down = _tail_diverges(rho, start=min(lo, -1.0), direction=-1)
    if up is False:
        ell = fn(PROBE_HORIZON)
        warnings.warn(
            "upper tail integral of the density converges; "
            f"treating the upper limit as {ell:.6g}",
            ProbeInconclusive,
            stacklevel=2,
        )
    elif up is None:
        warnings.warn(
            "upper tail divergence probe was inconclusive; assuming +inf",
            ProbeInconclusive,
            stacklevel=2,
        )
    if down is not True:
        warnings.warn(
            "lower tail probe did not confirm divergence to -inf",
            ProbeInconclusive,
            stacklevel=2,
        )

    return GrowthRate(fn=fn, ell=ell, derivative=deriv, label=label,
                      kinks=(lo, hi))


def _tail_diverges(rho, start: float, direction: int) -> bool | None:
    """True/False/None: does the tail integral of ``rho`` diverge?

    Fixed-resolution trapezoid increments over geometric segments; only
    the classification matters here, not high accuracy.
    """
    edges = [abs(start)]
    while edges[-1] * 2.0 <= PROBE_HORIZON:
        edges.append(edges[-1] * 2.0)
    totals = [0.0]
    for a, b in zip(edges[:-1], edges[1:]):
        xs = np.linspace(a, b, 257) * (1 if direction > 0 else -1)
        ys = np.array([float(rho(float(x))) for x in xs])
        seg = float(np.abs(np.trapezoid(ys, xs)))
        totals.append(totals[-1] + seg)
    try:
        verdict = probes.classify_tail(
            np.asarray(totals), tol=1e-9, what="density tail"
        )
    except Exception:
        return None
    return bool(verdict.diverges)
