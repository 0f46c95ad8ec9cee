"""Scalar root finding for monotone functions.

Two pieces: a geometric bracket search and a guarded secant/bisection
hybrid.  Both are deliberately plain so their failure modes stay
legible; callers wrap the errors in domain-specific types.
"""

from __future__ import annotations

from typing import Callable

from .errors import BracketFailure

# Expansion factor for bracket growth.  Doubling keeps the number of
# probe evaluations logarithmic in the distance to the root.
EXPANSION = 2.0
DEFAULT_XTOL = 1e-10
DEFAULT_MAXITER = 200


def expand_bracket(
    f: Callable[[float], float],
    x0: float,
    step: float = 1.0,
    max_doublings: int = 64,
) -> tuple[float, float, float, float]:
    """Grow an interval from ``x0`` until ``f`` changes sign across it.

    Searches in the direction of ``step`` (which may be negative); the
    step doubles on every failed probe.  Returns ``(a, b, fa, fb)`` with
    ``f(a) * f(b) <= 0`` and ``a < b``.

    Raises BracketFailure if no sign change is found within
    ``max_doublings`` expansions.
    """
    fa = f(x0)
    if fa == 0.0:
        return x0, x0, fa, fa
    a, b = x0, x0
    h = step
    for _ in range(max_doublings):
        x = x0 + h
        fx = f(x)
        if fx == 0.0 or (fx < 0.0) != (fa < 0.0):
            lo, hi = (a, x) if x > a else (x, a)
            flo, fhi = (fa, fx) if x > a else (fx, fa)
            return lo, hi, flo, fhi
        a, fa = x, fx
        h *= EXPANSION
    raise BracketFailure(
        f"no sign change within {max_doublings} doublings from {x0}"
    )


def solve_bracketed(
    f: Callable[[float], float],
    a: float,
    b: float,
    fa: float | None = None,
    fb: float | None = None,
    xtol: float = DEFAULT_XTOL,
    ftol: float = 0.0,
    maxiter: int = DEFAULT_MAXITER,
) -> float:
    """Root of ``f`` inside ``[a, b]`` by a secant/bisection hybrid.

    The bracket must straddle a sign change.  Each iteration tries a
    secant step; whenever that step leaves the bracket or fails to
    shrink it fast enough, the iteration falls back to bisection, so
    convergence is never worse than binary search.

    Stops when the bracket width drops below ``xtol`` or ``|f|`` drops
    to ``ftol`` (the latter is off by default: monotone interpolants
    with flat spots make pure residual tests unreliable).
    """
    if fa is None:
        fa = f(a)
    if fb is None:
        fb = f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa < 0.0) == (fb < 0.0):
        raise BracketFailure(f"bracket [{a}, {b}] does not straddle a root")

    for _ in range(maxiter):
        width = b - a
        if width <= xtol:
            break
        # Secant proposal, clipped away from the bracket endpoints.
        denom = fb - fa
        if denom != 0.0:
            x = a - fa * width / denom
        else:
            x = 0.5 * (a + b)
        margin = 0.1 * width
        if not (a + margin <= x <= b - margin):
            x = 0.5 * (a + b)
        fx = f(x)
        if fx == 0.0:
            return x
        if ftol > 0.0 and abs(fx) <= ftol:
            return x
        if (fx < 0.0) == (fa < 0.0):
            a, fa = x, fx
        else:
            b, fb = x, fx
    return a if abs(fa) <= abs(fb) else b
