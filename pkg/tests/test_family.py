"""Propagators: closed forms vs ODE integration, cocycle law, growth fits."""

import math

import numpy as np
import pytest

from evosemi import (
    EmptyGrid,
    EvolutionFamily,
    GrowthBound,
    GrowthBoundViolation,
    TimeOrderViolation,
    check_cocycle,
    continuity_modulus,
    fit_growth_bound,
    identity,
    ordered_pairs,
    polynomial_log,
    random_triples,
    rescale_family,
    transition,
)

COS_09 = 0.6216099682706644   # rotation angle t - s = 0.9
SIN_09 = 0.7833269096274834
EXP_1875 = 6.5208191203301125  # exp((2^2 - 0.5^2)/2), commuting diagonal run

ODE_TOL = 5e-9
RK4_TOL = 1e-7


def rotation_closed() -> EvolutionFamily:
    def fn(t, s):
        th = t - s
        return np.array([[math.cos(th), math.sin(th)],
                         [-math.sin(th), math.cos(th)]])
    return EvolutionFamily.closed_form(fn, dim=2, label="rotation")


def _rk4(coeff, a, b, n=4000):
    # Deliberately different integrator from the library's: fixed-step
    # classical Runge-Kutta on the matrix equation.
    h = (b - a) / n
    U = np.eye(len(coeff(a)))
    t = a
    for _ in range(n):
        k1 = coeff(t) @ U
        k2 = coeff(t + h / 2) @ (U + h / 2 * k1)
        k3 = coeff(t + h / 2) @ (U + h / 2 * k2)
        k4 = coeff(t + h) @ (U + h * k3)
        U = U + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return U


def test_closed_form_rotation_values():
    fam = rotation_closed()
    got = transition(fam, 1.3, 0.4)
    want = np.array([[COS_09, SIN_09], [-SIN_09, COS_09]])
    assert np.max(np.abs(got - want)) <= 1e-12
    assert np.array_equal(transition(fam, 0.7, 0.7), np.eye(2))
    with pytest.raises(TimeOrderViolation):
        transition(fam, 0.0, 1.0)


def test_ode_rotation_matches_frozen_values():
    fam = EvolutionFamily.from_ode(
        lambda t: np.array([[0.0, 1.0], [-1.0, 0.0]]), dim=2)
    want = np.array([[COS_09, SIN_09], [-SIN_09, COS_09]])
    assert np.max(np.abs(transition(fam, 1.3, 0.4) - want)) <= ODE_TOL


def test_ode_commuting_diagonal():
    fam = EvolutionFamily.from_ode(lambda t: np.diag([-t, t]), dim=2)
    got = transition(fam, 2.0, 0.5)
    assert abs(got[0, 0] - 1.0 / EXP_1875) <= 1e-10
    assert abs(got[1, 1] - EXP_1875) <= 1e-6
    assert abs(got[0, 1]) <= 1e-12 and abs(got[1, 0]) <= 1e-12


def test_ode_nonautonomous_vs_rk4():
    coeff = lambda t: np.array([[0.0, 1.0], [-1.0 - 0.1 * t, -0.2]])
    fam = EvolutionFamily.from_ode(coeff, dim=2)
    want = _rk4(coeff, 0.2, 1.7)
    assert np.max(np.abs(transition(fam, 1.7, 0.2) - want)) <= RK4_TOL


def test_panel_cache_respects_cocycle():
    coeff = lambda t: np.array([[0.0, 1.0], [-1.0 - 0.1 * t, -0.2]])
    fam = EvolutionFamily.from_ode(coeff, dim=2)
    whole = transition(fam, 3.6, -1.2)
    split = transition(fam, 3.6, 1.1) @ transition(fam, 1.1, -1.2)
    assert np.max(np.abs(whole - split)) <= 1e-8
    again = transition(fam, 3.6, -1.2)
    assert np.array_equal(whole, again)


def test_rate_density_reports_coefficient_norm():
    coeff = lambda t: np.array([[0.0, 1.0], [-1.0, 0.0]])
    fam = EvolutionFamily.from_ode(coeff, dim=2)
    assert abs(fam.rate_density()(0.3) - 1.0) <= 1e-12
    with pytest.raises(ValueError):
        rotation_closed().rate_density()


def test_check_cocycle_clean_and_corrupted():
    triples = random_triples((-5.0, 5.0), 100)
    report = check_cocycle(rotation_closed(), triples)
    assert report.passed(1e-12)
    assert report.n_triples == 100

    # Squaring the offset breaks composition: (t-r)^2 != (t-m)^2 + (m-r)^2.
    broken = EvolutionFamily.closed_form(
        lambda t, s: np.array([[1.0, (t - s) ** 2], [0.0, 1.0]]),
        dim=2, label="broken")
    assert check_cocycle(broken, triples).max_residual > 1e-3


def test_check_cocycle_validates_input():
    fam = rotation_closed()
    with pytest.raises(EmptyGrid):
        check_cocycle(fam, [])
    with pytest.raises(TimeOrderViolation):
        check_cocycle(fam, [(0.0, 1.0, 2.0)])


def test_ordered_pairs_mesh_and_random():
    mesh = ordered_pairs((-8.0, 8.0), 1000)
    assert np.array_equal(mesh, ordered_pairs((-8.0, 8.0), 1000))
    assert 1000 <= len(mesh) <= 1100
    assert np.all(mesh[:, 0] >= mesh[:, 1])
    drawn = ordered_pairs((-8.0, 8.0), 100, seed=5)
    assert len(drawn) == 100
    assert np.all(drawn[:, 0] >= drawn[:, 1])
    assert np.all((drawn >= -8.0) & (drawn <= 8.0))


def diag_polylog_family() -> EvolutionFamily:
    mu = polynomial_log()

    def fn(t, s):
        d = mu(t) - mu(s)
        return np.diag([math.exp(-d), math.exp(d)])
    return EvolutionFamily.closed_form(fn, dim=2, label="diag")


def test_fit_growth_bound_unit_envelope():
    pairs = ordered_pairs((-8.0, 8.0), 1000)
    bound = fit_growth_bound(diag_polylog_family(), polynomial_log(), pairs)
    assert isinstance(bound, GrowthBound)
    assert abs(bound.alpha - 1.0) <= 1e-9
    assert abs(bound.K - 1.0) <= 1e-9
    assert bound.holds()
    assert bound.rate_label == "polynomial_log"
    assert bound.n_pairs == len(pairs)


def test_fit_growth_bound_detects_superexponential():
    fam = EvolutionFamily.closed_form(
        lambda t, s: np.array([[math.exp((t * t - s * s) / 2.0)]]),
        dim=1, label="super")
    verdict = fit_growth_bound(fam, identity(), ordered_pairs((-8.0, 8.0), 1000))
    assert isinstance(verdict, GrowthBoundViolation)
    assert verdict.ratio > 1.5
    radii = [r for r, _ in verdict.alpha_by_radius]
    slopes = [a for _, a in verdict.alpha_by_radius]
    assert radii == sorted(radii)
    assert slopes[-1] > slopes[0]


def test_rescale_family_preserves_transitions():
    mu = polynomial_log()
    fam = rotation_closed()
    resc = rescale_family(fam, mu)
    got = transition(resc, mu(1.3), mu(0.4))
    assert np.max(np.abs(got - transition(fam, 1.3, 0.4))) <= 1e-10


def test_continuity_modulus_is_order_one_for_rotation():
    m = continuity_modulus(rotation_closed(), (-2.0, 2.0))
    assert 0.5 <= m <= 2.0
