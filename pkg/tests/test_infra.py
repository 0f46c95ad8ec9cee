"""Bracketed roots, adaptive panels, envelope fits, tail classification."""

import math

import numpy as np
import pytest
from hypothesis import given, seed, strategies as st

from evosemi import BracketFailure, EmptyGrid, Inconclusive, QuadratureBudgetExceeded
from evosemi.envelope import fit_decay, fit_growth, upper_chain
from evosemi.probes import classify_tail
from evosemi.quadrature import integrate
from evosemi.rootfind import expand_bracket, solve_bracketed

ROOT_TOL = 1e-9
EXACT = 1e-12


def test_expand_then_solve():
    f = lambda x: x * x - 4.0
    a, b, fa, fb = expand_bracket(f, 0.1)
    assert fa * fb <= 0.0
    root = solve_bracketed(f, a, b, fa, fb)
    assert abs(abs(root) - 2.0) <= ROOT_TOL


def test_expand_bracket_gives_up():
    with pytest.raises(BracketFailure):
        expand_bracket(lambda x: 1.0 + x * x, 0.0, max_doublings=20)


def test_integrate_polynomial():
    res = integrate(lambda x: x**3, 0.0, 1.0)
    assert abs(res.value - 0.25) <= EXACT
    assert res.error <= 1e-8


def test_integrate_kink_with_breakpoint():
    res = integrate(lambda x: abs(x - 1.0 / 3.0), 0.0, 1.0,
                    breakpoints=(1.0 / 3.0,))
    assert abs(res.value - 5.0 / 18.0) <= EXACT


def test_integrate_vector_valued():
    res = integrate(lambda x: np.array([1.0, 2.0 * x]), 0.5, 2.0)
    assert np.allclose(res.value, [1.5, 4.0 - 0.25], atol=EXACT)


def test_integrate_orientation():
    fwd = integrate(lambda x: x, 0.0, 1.0)
    rev = integrate(lambda x: x, 1.0, 0.0)
    assert abs(fwd.value + rev.value) <= EXACT
    assert integrate(lambda x: x, 2.0, 2.0).value == 0.0


def test_integrate_budget_exhausted():
    with pytest.raises(QuadratureBudgetExceeded):
        integrate(lambda x: math.sin(1.0 / (x + 1e-12)), 0.0, 1.0,
                  abs_tol=1e-14, max_intervals=8)


def test_fit_growth_tight_line():
    d = np.array([0.5, 1.0, 2.0, 4.0])
    fit = fit_growth(d, 0.8 * d)
    assert abs(fit.slope - 0.8) <= EXACT
    assert abs(fit.prefactor - 1.0) <= EXACT
    assert fit.max_slack <= EXACT


def test_fit_decay_terminal_slope():
    d = np.array([1.0, 2.0, 3.0, 4.0])
    fit = fit_decay(d, 0.2 - 1.5 * d)
    assert abs(fit.slope + 1.5) <= EXACT
    assert abs(fit.log_intercept - 0.2) <= EXACT
    assert abs(fit.prefactor - math.exp(0.2)) <= EXACT


def test_fits_need_positive_distances():
    with pytest.raises(EmptyGrid):
        fit_growth(np.zeros(3), np.zeros(3))
    with pytest.raises(EmptyGrid):
        fit_decay(np.array([]), np.array([]))


cloud = st.lists(
    st.tuples(st.floats(0.1, 10.0), st.floats(-5.0, 5.0)),
    min_size=1, max_size=24,
)


@seed(1)
@given(cloud)
def test_fitted_lines_dominate_the_cloud(pairs):
    d = np.array([p[0] for p in pairs])
    L = np.array([p[1] for p in pairs])
    up = fit_growth(d, L)
    assert np.all(L <= up.slope * d + up.log_intercept + 1e-9)
    down = fit_decay(d, L)
    assert np.all(L <= down.slope * d + down.log_intercept + 1e-9)


def test_upper_chain_drops_interior_points():
    d = np.array([1.0, 2.0, 3.0])
    assert list(upper_chain(d, np.array([0.0, -1.0, 0.5]))) == [0, 2]
    assert list(upper_chain(d, np.array([0.0, 1.0, 0.5]))) == [0, 1, 2]


def test_classify_tail_verdicts():
    grow = classify_tail(2.0 ** np.arange(12), 1e-9, "probe")
    assert grow.diverges and grow.estimate == math.inf

    settle = classify_tail(5.0 - 2.0 ** -np.arange(12.0), 1e-2, "probe")
    assert not settle.diverges
    assert abs(settle.estimate - 5.0) <= 1e-2


def test_classify_tail_refusals():
    with pytest.raises(ValueError):
        classify_tail(np.array([1.0, 2.0]), 1e-9, "short")
    with pytest.raises(ValueError):
        classify_tail(np.array([3.0, 2.0, 1.0]), 1e-9, "falling")
    with pytest.raises(Inconclusive):
        classify_tail(np.array([1.0, 2.0, math.nan]), 1e-9, "nan")
    # A dormant sequence waking back up cannot be extrapolated.
    with pytest.raises(Inconclusive):
        classify_tail(np.array([1.0, 2.0, 3.0, 3.0, 3.0, 5.0]), 1e-9, "waker")
    # Ratio 0.85 decay: neither trusted to converge nor sustained growth.
    slow = np.cumsum(0.85 ** np.arange(15.0))
    with pytest.raises(Inconclusive):
        classify_tail(slow, 1e-9, "slow")
