"""Evolution families: two-parameter transition operators on R^n.

A family ``U(t, s)`` (defined for ``t >= s``) is the solution operator
of a linear non-autonomous system: ``U(t, t)`` is the identity and
``U(t, tau) U(tau, s) = U(t, s)``.  Families either wrap a closed-form
matrix function or are propagated from a coefficient matrix ``A(t)``
by an adaptive one-step integrator.

Propagated families cache panel products between integer breakpoints,
so long transitions cost one cached product chain plus at most two
partial panels.  Exponential envelopes in a growth rate's distance are
fitted from sampled transition norms; the fit degrades into an
explicit violation report when the sampled cloud shows super-linear
log-norm growth, which is the numerical signature of a family that no
finite rate constant can bound.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .envelope import fit_growth
from .errors import EmptyGrid, IntegratorFailure, TimeOrderViolation
from .growth import GrowthRate

DEFAULT_ODE_TOL = 1e-9
# The per-panel solver runs a decade tighter than the requested
# composite tolerance to absorb error growth across panel products.
SOLVER_SAFETY = 0.1
DIVERGENCE_RATIO = 1.5
DIVERGENCE_MARGIN = 1e-9


@dataclass(eq=False)
class EvolutionFamily:
    """Transition operators ``U(t, s)`` for ``t >= s`` on R^dim."""

    kind: str
    dim: int
    fn: Callable[[float, float], np.ndarray] | None = None
    coeff: Callable[[float], np.ndarray] | None = None
    ode_tol: float = DEFAULT_ODE_TOL
    label: str = "family"
    _panels: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @staticmethod
    def closed_form(
        fn: Callable[[float, float], np.ndarray],
        dim: int,
        label: str = "closed_form",
    ) -> "EvolutionFamily":
        return EvolutionFamily(kind="closed_form", dim=dim, fn=fn, label=label)

    @staticmethod
    def from_ode(
        coeff: Callable[[float], np.ndarray],
        dim: int,
        tol: float = DEFAULT_ODE_TOL,
        label: str = "ode",
    ) -> "EvolutionFamily":
        return EvolutionFamily(kind="ode", dim=dim, coeff=coeff,
                               ode_tol=tol, label=label)

    def __call__(self, t: float, s: float) -> np.ndarray:
        return transition(self, t, s)

    def rate_density(self) -> Callable[[float], float]:
        """Spectral norm of the coefficient, ``t -> ||A(t)||``."""
        if self.kind != "ode":
            raise ValueError("rate_density needs a propagated family")
        return lambda t: float(np.linalg.norm(
            np.asarray(self.coeff(float(t)), dtype=float), 2))

    # -- propagation ----------------------------------------------------

    def _integrate(self, a: float, b: float) -> np.ndarray:
        """Propagate the identity from time ``a`` to ``b > a``."""
        rhs = lambda t, y: (
            np.asarray(self.coeff(t), dtype=float) @ y.reshape(self.dim, self.dim)
        ).ravel()
        tol = self.ode_tol * SOLVER_SAFETY
        sol = solve_ivp(rhs, (a, b), np.eye(self.dim).ravel(),
                        method="DOP853", rtol=tol, atol=tol)
        if not sol.success:
            raise IntegratorFailure(
                f"propagation {a} -> {b} failed: {sol.message}"
            )
        return sol.y[:, -1].reshape(self.dim, self.dim)

    def _panel(self, k: int) -> np.ndarray:
        got = self._panels.get(k)
        if got is not None:
            return got
        mat = self._integrate(float(k), float(k + 1))
        with self._lock:
            return self._panels.setdefault(k, mat)


def transition(family: EvolutionFamily, t: float, s: float) -> np.ndarray:
    """Evaluate ``U(t, s)``; raises TimeOrderViolation when ``t < s``."""
    t, s = float(t), float(s)
    if t < s:
        raise TimeOrderViolation(f"transition asked for t={t} < s={s}")
    if family.kind == "closed_form":
        if t == s:
            return np.eye(family.dim)
        mat = np.asarray(family.fn(t, s), dtype=float)
        if mat.shape != (family.dim, family.dim):
            raise ValueError(
                f"family returned shape {mat.shape}, "
                f"expected {(family.dim, family.dim)}"
            )
        return mat
    if t == s:
        return np.eye(family.dim)
    k0 = math.ceil(s)
    k1 = math.floor(t)
    if k0 > k1:
        return family._integrate(s, t)
    mat = family._integrate(s, float(k0)) if s < k0 else np.eye(family.dim)
    for k in range(k0, k1):
        mat = family._panel(k) @ mat
    if float(k1) < t:
        mat = family._integrate(float(k1), t) @ mat
    return mat


# -- checks -------------------------------------------------------------


@dataclass(frozen=True)
class CocycleReport:
    n_triples: int
    identity_residual: float
    max_residual: float
    worst_triple: tuple[float, float, float]

    def passed(self, tol: float) -> bool:
        return max(self.identity_residual, self.max_residual) <= tol


def check_cocycle(
    family: EvolutionFamily,
    triples: Sequence[tuple[float, float, float]],
) -> CocycleReport:
    """Spectral-norm residual of the composition law on given triples.

    Each triple ``(t, tau, s)`` must satisfy ``t >= tau >= s``.  The
    identity residual reuses the triple endpoints.
    """
    if len(triples) == 0:
        raise EmptyGrid("no triples supplied")
    worst = (0.0, 0.0, 0.0)
    max_res = 0.0
    ident = 0.0
    for t, tau, s in triples:
        if not t >= tau >= s:
            raise TimeOrderViolation(f"triple {(t, tau, s)} is not ordered")
        whole = transition(family, t, s)
        split = transition(family, t, tau) @ transition(family, tau, s)
        r = float(np.linalg.norm(split - whole, 2))
        if r > max_res:
            max_res, worst = r, (t, tau, s)
        ident = max(ident, float(np.linalg.norm(
            transition(family, t, t) - np.eye(family.dim), 2)))
    return CocycleReport(len(triples), ident, max_res, worst)


def random_triples(
    window: tuple[float, float],
    count: int,
    seed: int = 0,
) -> list[tuple[float, float, float]]:
    """Sorted random ``(t, tau, s)`` triples inside a window."""
    rng = np.random.default_rng(seed)
    lo, hi = window
    pts = np.sort(rng.uniform(lo, hi, size=(count, 3)), axis=1)
    return [(float(c), float(b), float(a)) for a, b, c in pts]


def ordered_pairs(
    window: tuple[float, float],
    count: int,
    seed: int | None = None,
) -> np.ndarray:
    """Pairs ``(later, earlier)`` covering a window, shape (m, 2).

    With a seed the pairs are uniform random; otherwise a triangular
    mesh of roughly ``count`` pairs is generated deterministically.
    """
    lo, hi = window
    if seed is not None:
        rng = np.random.default_rng(seed)
        pts = np.sort(rng.uniform(lo, hi, size=(count, 2)), axis=1)
        return pts[:, ::-1].copy()
    m = max(2, math.ceil((math.sqrt(8.0 * count + 1.0) - 1.0) / 2.0))
    grid = np.linspace(lo, hi, m)
    out = [(float(b), float(a)) for i, a in enumerate(grid)
           for b in grid[i:]]
    return np.asarray(out)


# -- growth bounds ------------------------------------------------------


@dataclass(eq=False, frozen=True)
class GrowthBound:
    """Certified envelope ``||U(s, tau)|| <= K exp(alpha d)`` on a grid."""

    alpha: float
    K: float
    rate_label: str
    n_pairs: int
    max_slack: float
    cloud: np.ndarray = field(repr=False)  # columns: distance, log-norm

    def holds(self) -> bool:
        return self.max_slack <= 0.0


@dataclass(eq=False, frozen=True)
class GrowthBoundViolation:
    """The sampled cloud is not exponentially bounded in this rate.

    ``alpha_by_radius`` records the fitted slope on nested sub-windows;
    a slope that keeps climbing with the window radius means no finite
    rate constant works.
    """

    rate_label: str
    alpha_by_radius: tuple[tuple[float, float], ...]
    ratio: float
    worst_pair: tuple[float, float]
    cloud: np.ndarray = field(repr=False)


def fit_growth_bound(
    family: EvolutionFamily,
    mu: GrowthRate,
    pairs: np.ndarray,
    divergence_ratio: float = DIVERGENCE_RATIO,
) -> GrowthBound | GrowthBoundViolation:
    """Fit the tightest exponential envelope in ``mu``-distance.

    ``pairs`` has rows ``(s, tau)`` with ``s >= tau``.  The fitted
    slope is the smallest admitting a unit prefactor; the prefactor
    then absorbs whatever sticks out.  Before returning a bound, the
    fit is re-run on the inner half of the sampled window: if the
    full-window slope exceeds the inner slope by ``divergence_ratio``,
    the cloud is growing super-linearly and a violation report is
    returned instead.
    """
    pairs = np.asarray(pairs, dtype=float)
    if pairs.size == 0:
        raise EmptyGrid("no pairs supplied to fit_growth_bound")
    d = np.empty(len(pairs))
    L = np.empty(len(pairs))
    radius = np.empty(len(pairs))
    for i, (s, tau) in enumerate(pairs):
        d[i] = float(mu(s)) - float(mu(tau))
        L[i] = math.log(np.linalg.norm(transition(family, s, tau), 2))
        radius[i] = max(abs(s), abs(tau))
    d = np.maximum(d, 0.0)

    fit = fit_growth(d, L)
    i_worst = int(np.argmax(np.where(d > 0, L / np.where(d > 0, d, 1.0),
                                     -math.inf)))
    cloud = np.column_stack([d, L])

    inner = radius <= 0.5 * float(np.max(radius))
    if np.count_nonzero(inner & (d > 0)) >= 8:
        inner_fit = fit_growth(d[inner], L[inner])
        by_radius = (
            (0.5 * float(np.max(radius)), inner_fit.slope),
            (float(np.max(radius)), fit.slope),
        )
        if fit.slope > divergence_ratio * inner_fit.slope + DIVERGENCE_MARGIN:
            return GrowthBoundViolation(
                rate_label=mu.label,
                alpha_by_radius=by_radius,
                ratio=fit.slope / max(inner_fit.slope, DIVERGENCE_MARGIN),
                worst_pair=(float(pairs[i_worst, 0]), float(pairs[i_worst, 1])),
                cloud=cloud,
            )

    return GrowthBound(
        alpha=fit.slope,
        K=fit.prefactor,
        rate_label=mu.label,
        n_pairs=len(pairs),
        max_slack=fit.max_slack,
        cloud=cloud,
    )


# -- rescaling ----------------------------------------------------------


def rescale_family(family: EvolutionFamily, mu: GrowthRate) -> EvolutionFamily:
    """The rescaled family ``V(t, s) = U(mu^{-1}(t), mu^{-1}(s))``.

    ``V`` is again an evolution family, now naturally compared against
    the identity rate; rescaling preserves transition norms pairwise.
    """
    def fn(t: float, s: float) -> np.ndarray:
        return transition(family, mu.invert(t), mu.invert(s))

    return EvolutionFamily.closed_form(fn, family.dim,
                                       label=f"rescaled({family.label})")


def continuity_modulus(
    family: EvolutionFamily,
    window: tuple[float, float],
    n_steps: int = 64,
    anchors: Sequence[float] | None = None,
) -> float:
    """Grid-Lipschitz modulus ``max ||U(t+dt, s) - U(t, s)|| / dt``.

    A sampled stand-in for strong continuity: finite and stable values
    across refinements are recorded, never asserted as proof.
    """
    lo, hi = window
    ts = np.linspace(lo, hi, n_steps + 1)
    if anchors is None:
        anchors = [lo, 0.5 * (lo + hi)]
    worst = 0.0
    for s in anchors:
        prev = transition(family, max(float(s), ts[0]), float(s))
        for a, b in zip(ts[:-1], ts[1:]):
            if b <= s:
                continue
            cur = transition(family, float(b), float(s))
            dt = float(b) - max(float(a), float(s))
            if dt > 0:
                worst = max(worst, float(
                    np.linalg.norm(cur - prev, 2)) / dt)
            prev = cur
    return worst
