"""Dichotomy certification, the Green function, and its integral tests.

A family has an exponential dichotomy in a growth rate when a
projection field splits the state space into a part the family
contracts forward and a part it contracts backward, both at a uniform
rate in the rate's distance ``d = mu(t) - mu(s)``.  Certification
samples both log-norm branches over a pair grid and fits the steepest
common decay line by the upper concave chain of the merged cloud: the
fitted slope is the certified rate, its intercept the constant.

The Green function built from a certified splitting is the kernel of
the inverse generator; convolving it against a forcing term solves
``Gu = -f``, which is then verifiable pair-by-pair through the
variation-of-constants identity without ever referencing the
generator directly.

Backward values on the complement are never formed by inverting the
family; the restricted forward block is solved instead, with a floor
on its smallest singular value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import envelope, quadrature
from .errors import (
    EmptyGrid,
    HypothesisViolation,
    Inconclusive,
    RankMismatch,
    SingularRestriction,
)
from .family import EvolutionFamily, transition
from .growth import GrowthRate
from .semigroup import GridFunction

IDEMPOTENCY_TOL = 1e-10
SINGULAR_FLOOR = 1e-10
DEFAULT_QUAD_TOL = 1e-8
EXPONENT_GAP = 0.5


@dataclass(frozen=True, eq=False)
class ProjectionField:
    """A time-indexed idempotent ``P(t)`` with complement ``Q(t)``.

    Closed-form fields evaluate their callable; tabulated fields use
    nearest-node lookup, never interpolation (a blend of two
    idempotents is generally not idempotent).
    """

    dim: int
    fn: Callable[[float], np.ndarray] | None = None
    times: np.ndarray | None = None
    mats: np.ndarray | None = None
    label: str = "projection"

    @staticmethod
    def from_callable(
        fn: Callable[[float], np.ndarray],
        dim: int,
        label: str = "projection",
    ) -> "ProjectionField":
        return ProjectionField(dim=dim, fn=fn, label=label)

    @staticmethod
    def constant(mat: np.ndarray, label: str = "constant") -> "ProjectionField":
        mat = np.asarray(mat, dtype=float)
        return ProjectionField(dim=mat.shape[0], fn=lambda t: mat, label=label)

    @staticmethod
    def tabulated(
        times: Sequence[float],
        mats: Sequence[np.ndarray],
        label: str = "tabulated",
    ) -> "ProjectionField":
        times = np.asarray(times, dtype=float)
        mats = np.asarray(mats, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise EmptyGrid("a tabulated projection needs nodes")
        if not np.all(np.diff(times) > 0):
            raise ValueError("projection nodes must be strictly increasing")
        if mats.shape != (times.size, mats.shape[1], mats.shape[1]):
            raise ValueError("mats must be square and match the node count")
        return ProjectionField(dim=mats.shape[1], times=times, mats=mats,
                               label=label)

    def __call__(self, t: float) -> np.ndarray:
        if self.fn is not None:
            mat = np.asarray(self.fn(float(t)), dtype=float)
            if mat.shape != (self.dim, self.dim):
                raise ValueError(
                    f"projection returned shape {mat.shape}, "
                    f"expected {(self.dim, self.dim)}"
                )
            return mat
        i = int(np.argmin(np.abs(self.times - float(t))))
        return self.mats[i]

    def complement(self, t: float) -> np.ndarray:
        return np.eye(self.dim) - self(t)

    def rank_at(self, t: float) -> int:
        # Idempotency makes the trace count the rank.
        return int(round(float(np.trace(self(t)))))

    def check(self, times: Sequence[float]) -> "ProjectionReport":
        """Sample idempotency, rank constancy, and the norm bound."""
        worst = 0.0
        norms = []
        ranks = set()
        for t in times:
            mat = self(float(t))
            worst = max(worst, float(np.linalg.norm(mat @ mat - mat, 2)))
            norms.append(float(np.linalg.norm(mat, 2)))
            ranks.add(self.rank_at(float(t)))
        return ProjectionReport(worst, tuple(sorted(ranks)),
                                float(max(norms)))


@dataclass(frozen=True)
class ProjectionReport:
    max_idempotency_residual: float
    ranks: tuple[int, ...]
    max_norm: float

    def passed(self, tol: float = IDEMPOTENCY_TOL) -> bool:
        return (self.max_idempotency_residual <= tol
                and len(self.ranks) == 1)


# Green-function quadrature hits the same projection matrices thousands
# of times; keying on content keeps the memo exact for any field kind.
_BASIS_MEMO: dict[tuple[bytes, int], np.ndarray] = {}
_BASIS_MEMO_CAP = 8192


def _range_basis(mat: np.ndarray, rank: int) -> np.ndarray:
    """Orthonormal basis (columns) of the leading range of ``mat``."""
    if rank == 0:
        return np.zeros((mat.shape[0], 0))
    key = (mat.tobytes(), rank)
    hit = _BASIS_MEMO.get(key)
    if hit is None:
        if len(_BASIS_MEMO) >= _BASIS_MEMO_CAP:
            _BASIS_MEMO.clear()
        u, _, _ = np.linalg.svd(mat)
        hit = _BASIS_MEMO[key] = u[:, :rank]
    return hit


def _backward_complement(
    family: EvolutionFamily,
    proj: ProjectionField,
    a: float,
    b: float,
    floor: float = SINGULAR_FLOOR,
) -> np.ndarray:
    """The matrix of ``U_Q(a, b) Q(b)`` for ``a < b``.

    The forward family maps the complement at ``a`` onto the
    complement at ``b``; expressing that block in orthonormal bases
    and solving the resulting square system realizes the backward
    map without inverting anything larger.
    """
    Qb = proj.complement(b)
    q = int(round(float(np.trace(Qb))))
    if q == 0:
        return np.zeros((proj.dim, proj.dim))
    Qa = proj.complement(a)
    Ba = _range_basis(Qa, q)
    Bb = _range_basis(Qb, q)
    M = Bb.T @ transition(family, b, a) @ Ba
    if q == 1:
        smallest = abs(float(M[0, 0]))
    else:
        smallest = float(np.linalg.svd(M, compute_uv=False)[-1])
    if smallest < floor:
        raise SingularRestriction(
            f"restricted block {a} -> {b} has smallest singular value "
            f"{smallest:.3e} below the floor {floor:.1e}"
        )
    return Ba @ np.linalg.solve(M, Bb.T @ Qb)


# -- compatibility -------------------------------------------------------


@dataclass(frozen=True)
class CompatibilityReport:
    n_pairs: int
    max_commutation: float
    max_idempotency: float
    min_restricted_sv: float
    rank: int

    def passed(self, tol: float, floor: float = SINGULAR_FLOOR) -> bool:
        return (self.max_commutation <= tol
                and self.max_idempotency <= IDEMPOTENCY_TOL
                and self.min_restricted_sv >= floor)


def check_compatibility(
    family: EvolutionFamily,
    proj: ProjectionField,
    pairs: np.ndarray,
    floor: float = SINGULAR_FLOOR,
) -> CompatibilityReport:
    """Commutation ``P(t)U(t,s) = U(t,s)P(s)`` plus restricted invertibility.

    Raises RankMismatch when the projection rank drifts across the
    sampled times; everything else lands in the report.
    """
    pairs = np.asarray(pairs, dtype=float)
    if pairs.size == 0:
        raise EmptyGrid("no pairs supplied to check_compatibility")
    ranks = {proj.rank_at(float(x)) for x in pairs.ravel()}
    if len(ranks) != 1:
        raise RankMismatch(f"projection rank varies across times: {ranks}")
    rank = ranks.pop()
    q = proj.dim - rank
    worst_comm = 0.0
    worst_idem = 0.0
    min_sv = math.inf
    for t, s in pairs:
        t, s = float(t), float(s)
        Pt, Ps = proj(t), proj(s)
        U = transition(family, t, s)
        worst_comm = max(worst_comm, float(
            np.linalg.norm(Pt @ U - U @ Ps, 2)))
        for mat in (Pt, Ps):
            worst_idem = max(worst_idem, float(
                np.linalg.norm(mat @ mat - mat, 2)))
        if q > 0:
            Bs = _range_basis(np.eye(proj.dim) - Ps, q)
            Bt = _range_basis(np.eye(proj.dim) - Pt, q)
            M = Bt.T @ U @ Bs
            min_sv = min(min_sv, float(
                np.linalg.svd(M, compute_uv=False)[-1]))
    return CompatibilityReport(len(pairs), worst_comm, worst_idem,
                               min_sv, rank)


# -- certification -------------------------------------------------------


@dataclass(eq=False, frozen=True)
class DichotomyCertificate:
    """Certified two-sided decay: ``L <= ln N - nu d`` on the grid.

    ``cloud`` rows are (d, log-norm, branch) with branch 0 for the
    forward-projected inequality and 1 for the backward complement.
    """

    projections: ProjectionField
    N: float
    nu: float
    rate_label: str
    n_pairs: int
    slack_forward: float
    slack_backward: float
    cloud: np.ndarray = field(repr=False)

    def bound(self, d: float) -> float:
        return self.N * math.exp(-self.nu * abs(d))

    def holds(self) -> bool:
        return max(self.slack_forward, self.slack_backward) <= 0.0


@dataclass(eq=False, frozen=True)
class DichotomyViolation:
    """No positive rate bounds the sampled cloud from above."""

    rate_label: str
    nu_fitted: float
    worst_pair: tuple[float, float]
    worst_branch: int
    cloud: np.ndarray = field(repr=False)


def certify_dichotomy(
    family: EvolutionFamily,
    mu: GrowthRate,
    proj: ProjectionField,
    pairs: np.ndarray,
    compat_tol: float = 1e-8,
    floor: float = SINGULAR_FLOOR,
) -> DichotomyCertificate | DichotomyViolation:
    """Fit the steepest (rate, constant) pair certifying both inequalities.

    Compatibility is a precondition and is re-checked here; a failure
    raises HypothesisViolation since fitted decay lines mean nothing
    when the projection does not commute with the family.  The decay
    rate comes first (terminal slope of the merged cloud's upper
    chain), the constant mops up afterwards; a nonpositive fitted rate
    is returned as a violation with the flattest sampled pair.
    """
    pairs = np.asarray(pairs, dtype=float)
    if pairs.size == 0:
        raise EmptyGrid("no pairs supplied to certify_dichotomy")
    compat = check_compatibility(family, proj, pairs, floor=floor)
    if not compat.passed(compat_tol, floor):
        raise HypothesisViolation(
            "projection is not compatible with the family "
            f"(commutation residual {compat.max_commutation:.3e}, "
            f"restricted sv {compat.min_restricted_sv:.3e})"
        )

    ds: list[float] = []
    Ls: list[float] = []
    branches: list[int] = []
    owners: list[tuple[float, float]] = []
    for t, s in pairs:
        t, s = float(t), float(s)
        d = float(mu(t)) - float(mu(s))
        fwd = float(np.linalg.norm(
            transition(family, t, s) @ proj(s), 2))
        if fwd > 0.0:
            ds.append(d)
            Ls.append(math.log(fwd))
            branches.append(0)
            owners.append((t, s))
        if proj.dim - compat.rank > 0:
            bwd = float(np.linalg.norm(
                _backward_complement(family, proj, s, t, floor), 2))
            if bwd > 0.0:
                ds.append(d)
                Ls.append(math.log(bwd))
                branches.append(1)
                owners.append((t, s))
    if not ds:
        raise EmptyGrid("both dichotomy branches are empty on this grid")

    d_arr = np.asarray(ds)
    L_arr = np.asarray(Ls)
    fit = envelope.fit_decay(d_arr, L_arr)
    cloud = np.column_stack([d_arr, L_arr, np.asarray(branches, dtype=float)])
    nu = -fit.slope

    if nu <= 0.0:
        chain = envelope.upper_chain(d_arr, L_arr)
        i = int(chain[-1])
        return DichotomyViolation(
            rate_label=mu.label,
            nu_fitted=nu,
            worst_pair=owners[i],
            worst_branch=branches[i],
            cloud=cloud,
        )

    line = fit.log_intercept + fit.slope * d_arr
    b_arr = np.asarray(branches)
    slack = L_arr - line
    slack_fwd = float(np.max(slack[b_arr == 0])) if np.any(b_arr == 0) else -math.inf
    slack_bwd = float(np.max(slack[b_arr == 1])) if np.any(b_arr == 1) else -math.inf
    return DichotomyCertificate(
        projections=proj,
        N=max(1.0, fit.prefactor),
        nu=nu,
        rate_label=mu.label,
        n_pairs=len(pairs),
        slack_forward=slack_fwd,
        slack_backward=slack_bwd,
        cloud=cloud,
    )


# -- the Green function and its integral identities -----------------------


def green(
    family: EvolutionFamily,
    proj: ProjectionField,
    t: float,
    s: float,
    floor: float = SINGULAR_FLOOR,
) -> np.ndarray:
    """Green kernel: forward-projected flow above the diagonal,
    negated backward complement below it; undefined on it."""
    t, s = float(t), float(s)
    if t == s:
        raise ValueError("the Green function is undefined at t = s")
    if t > s:
        return transition(family, t, s) @ proj(s)
    return -_backward_complement(family, proj, t, s, floor)


def solve_green(
    family: EvolutionFamily,
    mu: GrowthRate,
    cert: DichotomyCertificate,
    f: GridFunction,
    out_nodes: Sequence[float] | None = None,
    quad_tol: float = DEFAULT_QUAD_TOL,
) -> GridFunction:
    """Solve ``Gu = -f`` by convolving the Green kernel against ``f``.

    The integral runs over ``f``'s support only (the zero extension is
    exact), weighted by the rate's derivative, and is split at the
    kernel's diagonal jump and at ``f``'s interpolation kinks.
    """
    proj = cert.projections
    nodes = np.asarray(f.nodes if out_nodes is None
                       else np.asarray(out_nodes, dtype=float))
    if nodes.ndim != 1 or nodes.size == 0:
        raise EmptyGrid("solve_green needs output nodes")
    lo, hi = f.span
    values = np.zeros((nodes.size, f.dim))
    if f.sup_norm == 0.0:
        return GridFunction(nodes, values)
    inner_kinks = [float(x) for x in f.nodes[1:-1]]
    for i, t in enumerate(nodes):
        t = float(t)

        def integrand(xi: float) -> np.ndarray:
            return float(mu.prime(xi)) * (green(family, proj, t, xi)
                                          @ f(xi))

        brk = sorted(k for k in {*inner_kinks, t} if lo < k < hi)
        res = quadrature.integrate(integrand, lo, hi, abs_tol=quad_tol,
                                   breakpoints=brk)
        values[i] = res.value
    return GridFunction(nodes, values)


@dataclass(frozen=True)
class IntegralEquationReport:
    """Residuals of the variation-of-constants identity on pairs."""

    n_pairs: int
    max_residual: float
    worst_pair: tuple[float, float]
    residuals: tuple[float, ...]

    def passed(self, tol: float) -> bool:
        return self.max_residual <= tol


def verify_integral_equation(
    family: EvolutionFamily,
    mu: GrowthRate,
    u: GridFunction,
    f: GridFunction,
    pairs: np.ndarray,
    quad_tol: float = DEFAULT_QUAD_TOL,
) -> IntegralEquationReport:
    """Check ``u(t) = U(t,s)u(s) + int_s^t mu'(xi) U(t,xi) f(xi) dxi``.

    Holding on every ordered pair is the sampled meaning of ``u``
    solving ``Gu = -f``.  Pairs must sit inside ``u``'s node span;
    outside it the zero extension would poison the residual.
    """
    pairs = np.asarray(pairs, dtype=float)
    if pairs.size == 0:
        raise EmptyGrid("no pairs supplied to verify_integral_equation")
    lo, hi = u.span
    residuals = []
    worst = (0.0, 0.0)
    worst_r = -1.0
    for t, s in pairs:
        t, s = float(t), float(s)
        if not s <= t:
            raise ValueError(f"pair {(t, s)} is not ordered t >= s")
        if s < lo or t > hi:
            raise ValueError(
                f"pair {(t, s)} leaves the node span [{lo}, {hi}]"
            )

        def integrand(xi: float) -> np.ndarray:
            return float(mu.prime(xi)) * (
                transition(family, t, xi) @ f(xi))

        brk = sorted(k for k in f.nodes if s < k < t)
        quad = quadrature.integrate(integrand, s, t, abs_tol=quad_tol,
                                    breakpoints=brk)
        r = float(np.linalg.norm(
            u(t) - transition(family, t, s) @ u(s) - quad.value))
        residuals.append(r)
        if r > worst_r:
            worst_r, worst = r, (t, s)
    return IntegralEquationReport(len(pairs), worst_r, worst,
                                  tuple(residuals))


# -- projection inference and rescaling -----------------------------------


@dataclass(frozen=True, eq=False)
class InferredProjection:
    """Heuristic spectral splitting; never a certificate by itself."""

    field: ProjectionField
    exponents: tuple[float, ...]
    n_stable: int
    n_unstable: int
    confidence: float
    heuristic: bool = True


def infer_projection_heuristic(
    family: EvolutionFamily,
    mu: GrowthRate,
    window: tuple[float, float],
    n_panels: int = 32,
    t_grid: int = 17,
    gap: float = EXPONENT_GAP,
    floor: float = SINGULAR_FLOOR,
) -> InferredProjection:
    """Guess the dichotomy projection from growth-direction splitting.

    Rate-rescaled Lyapunov exponents come from a QR frame sweep across
    the window; they must clear a symmetric gap around zero or the
    split is refused.  Per-time stable directions are the trailing
    right singular vectors of the forward transition to the window
    edge, unstable ones the leading left singular vectors of the
    transition from the opposite edge; the oblique projector onto
    stable along unstable is tabulated on an interior grid.
    """
    a, b = float(window[0]), float(window[1])
    if not a < b:
        raise ValueError("window must have positive length")
    n = family.dim
    span = float(mu(b)) - float(mu(a))

    frame = np.eye(n)
    logs = np.zeros(n)
    ts = np.linspace(a, b, n_panels + 1)
    for t0, t1 in zip(ts[:-1], ts[1:]):
        mat = transition(family, float(t1), float(t0)) @ frame
        q, r = np.linalg.qr(mat)
        signs = np.where(np.diag(r) < 0, -1.0, 1.0)
        frame = q * signs
        logs += np.log(np.abs(np.diag(r)))
    exponents = logs / span

    n_unstable = int(np.count_nonzero(exponents >= gap / 2.0))
    n_stable = int(np.count_nonzero(exponents <= -gap / 2.0))
    if n_unstable + n_stable != n:
        raise Inconclusive(
            f"rescaled exponents {np.sort(exponents)} are not separated "
            f"by the gap {gap}; no spectral splitting is visible"
        )

    margin = 0.1 * (b - a)
    times = np.linspace(a + margin, b - margin, t_grid)
    mats = []
    confidence = math.inf
    for t in times:
        t = float(t)
        fwd = transition(family, b, t)
        _, sf, vt = np.linalg.svd(fwd)
        stable = vt.T[:, n_unstable:]
        bwd = transition(family, t, a)
        w, sb, _ = np.linalg.svd(bwd)
        unstable = w[:, :n_unstable]
        if 0 < n_unstable < n:
            confidence = min(confidence,
                             float(sf[n_unstable - 1] / sf[n_unstable]),
                             float(sb[n_unstable - 1] / sb[n_unstable]))
        basis = np.hstack([stable, unstable])
        smallest = float(np.linalg.svd(basis, compute_uv=False)[-1])
        if smallest < floor:
            raise Inconclusive(
                f"stable and unstable candidates overlap at t={t}"
            )
        proj = np.hstack([stable, np.zeros((n, n_unstable))]) @ \
            np.linalg.inv(basis)
        mats.append(proj)

    field = ProjectionField.tabulated(times, np.asarray(mats),
                                      label="inferred")
    return InferredProjection(
        field=field,
        exponents=tuple(float(x) for x in exponents),
        n_stable=n_stable,
        n_unstable=n_unstable,
        confidence=confidence,
    )


def rescale_projection(proj: ProjectionField, mu: GrowthRate) -> ProjectionField:
    """The projection seen through the rate change, ``P(mu^{-1}(r))``."""
    return ProjectionField.from_callable(
        lambda r: proj(mu.invert(r)), proj.dim,
        label=f"rescaled({proj.label})",
    )
