"""Grid functions, context hypotheses, the weighted shift, and its generator."""

import math

import numpy as np
import pytest

from evosemi import (
    EmptyGrid,
    EvolutionFamily,
    GridFunction,
    HypothesisViolation,
    RealSemiflow,
    SemigroupContext,
    apply,
    apply_S_classical,
    apply_T,
    apply_generator_fd,
    check_semigroup_law,
    check_similarity,
    check_strong_continuity,
    generator_sweep,
    identity,
    neg_exp,
    polynomial_log,
    rescale_F,
    rescale_Finv,
    richardson_pair,
)

EXACT = 1e-12
PL = polynomial_log()

PHI_TRANS = RealSemiflow.generated(identity())
PHI_PL = RealSemiflow.generated(PL)
PHI_FLOOR = RealSemiflow.closed_form(
    lambda t, s: math.floor(s) + (s - math.floor(s)) * math.exp(-t),
    label="floor_pinned",
)
PHI_PINCH = RealSemiflow.closed_form(
    lambda t, s: s * math.exp(t) if s < 0 else s / (1.0 + t * s),
    label="pinch",
)


def scalar_family() -> EvolutionFamily:
    return EvolutionFamily.closed_form(
        lambda t, s: np.eye(1), dim=1, label="unit")


def diag_family() -> EvolutionFamily:
    def fn(t, s):
        d = PL(t) - PL(s)
        return np.diag([math.exp(-d), math.exp(d)])
    return EvolutionFamily.closed_form(fn, dim=2, label="diag")


def bump(s: float) -> float:
    return math.exp(-1.0 / (1.0 - s * s / 4.0)) if abs(s) < 2.0 else 0.0


def bump_prime(s: float) -> float:
    if abs(s) >= 2.0:
        return 0.0
    g = 1.0 - s * s / 4.0
    return bump(s) * (-s / 2.0) / (g * g)


# -- grid functions ---------------------------------------------------------

def test_grid_validation():
    with pytest.raises(EmptyGrid):
        GridFunction(np.array([]), np.array([]))
    with pytest.raises(ValueError):
        GridFunction([0.0, 0.0, 1.0], [[1.0], [2.0], [3.0]])
    with pytest.raises(ValueError):
        GridFunction([0.0, 1.0], [[1.0], [2.0], [3.0]])
    flat = GridFunction([0.0, 1.0], [1.0, 2.0])
    assert flat.dim == 1


def test_interp_and_zero_extension():
    u = GridFunction([0.0, 1.0, 2.0], [[0.0], [1.0], [0.0]])
    assert u(0.5)[0] == 0.5
    assert u(2.0)[0] == 0.0
    assert u(2.1)[0] == 0.0
    assert u(-5.0)[0] == 0.0
    batch = u(np.array([-1.0, 0.5, 1.0, 3.0]))
    assert batch.shape == (4, 1)
    assert np.allclose(batch[:, 0], [0.0, 0.5, 1.0, 0.0])
    assert u.span == (0.0, 2.0)
    assert u.sup_norm == 1.0


def test_grid_algebra():
    u = GridFunction([0.0, 1.0, 2.0], [[0.0], [1.0], [0.0]])
    assert (u + u)(1.0)[0] == 2.0
    assert (u - u).sup_norm == 0.0
    assert (u * 3.0)(1.0)[0] == 3.0
    other = GridFunction([0.0, 1.0], [[1.0], [1.0]])
    with pytest.raises(ValueError):
        u + other


def test_hat_plateau_and_tables():
    hat = GridFunction.hat(0.5, 0.5, [1.0, 0.0])
    assert list(hat.nodes) == [0.0, 0.5, 1.0]
    assert np.allclose(hat(0.5), [1.0, 0.0])
    top = GridFunction.plateau(0.5, 4096.0, 4.0)
    assert list(top.nodes) == [-3.5, 0.5, 4096.0, 4100.0]
    assert top(100.0)[0] == 1.0
    assert top.sup_norm == 1.0
    back = GridFunction.from_table(top.to_table())
    assert np.array_equal(back.nodes, top.nodes)
    assert np.array_equal(back.values, top.values)


def test_from_callable_vector_valued():
    u = GridFunction.from_callable(
        lambda s: [math.sin(s), math.cos(s)], np.linspace(0, 1, 5))
    assert u.dim == 2
    assert abs(u(0.25)[1] - math.cos(0.25)) <= 5e-3


# -- context hypotheses -----------------------------------------------------

def test_create_generated_flow():
    ctx = SemigroupContext.create(scalar_family(), PHI_TRANS)
    assert ctx.hypotheses_checked
    assert any("non-degenerate" in n for n in ctx.notes)
    assert ctx.mu.label == "identity"


def test_create_rejects_bounded_rate():
    with pytest.raises(HypothesisViolation):
        SemigroupContext.create(scalar_family(),
                                RealSemiflow.generated(neg_exp()))


def test_create_accepts_escaping_degenerate_flow():
    ctx = SemigroupContext.create(scalar_family(), PHI_FLOOR)
    assert ctx.hypotheses_checked
    assert any("degenerate" in n for n in ctx.notes)
    with pytest.raises(ValueError):
        ctx.mu


def test_create_refuses_pinched_flow_unless_told_not_to_check():
    with pytest.raises(HypothesisViolation):
        SemigroupContext.create(scalar_family(), PHI_PINCH)
    ctx = SemigroupContext.create(scalar_family(), PHI_PINCH, validate=False)
    assert not ctx.hypotheses_checked
    assert any("skipped" in n for n in ctx.notes)


def test_create_classifies_closed_form_translation():
    phi = RealSemiflow.closed_form(lambda t, s: s - t, label="shift")
    ctx = SemigroupContext.create(scalar_family(), phi)
    assert any("states escape" in n for n in ctx.notes)


# -- the weighted shift -----------------------------------------------------

def test_apply_T_translation():
    ctx = SemigroupContext.create(scalar_family(), PHI_TRANS)
    u = GridFunction.hat(0.0, 1.0)
    same = apply_T(ctx, 0.0, u)
    assert np.array_equal(same.values, u.values)
    shifted = apply_T(ctx, 0.25, u)
    assert np.array_equal(shifted.nodes, u.nodes)
    assert abs(shifted(0.0)[0] - 0.75) <= EXACT


def test_apply_T_weights_with_the_family():
    ctx = SemigroupContext.create(diag_family(), PHI_PL)
    nodes = np.linspace(-4.0, 4.0, 81)
    u = GridFunction.from_callable(
        lambda s: [bump(s), 0.5 * bump(s)], nodes)
    moved = apply_T(ctx, 1.0, u)
    x = apply(PHI_PL, 1.0, 2.0)
    expected = np.array([math.exp(-1.0), math.exp(1.0)]) * u(x)
    assert np.max(np.abs(moved(2.0) - expected)) <= EXACT


def test_semigroup_law_residual_is_interpolation_noise():
    ctx = SemigroupContext.create(scalar_family(), PHI_TRANS)
    nodes = np.linspace(-6.0, 6.0, 1201)
    u = GridFunction.from_callable(bump, nodes)
    res = check_semigroup_law(ctx, 1.0 / 3.0, 2.0 / 7.0, u)
    assert 0.0 < res <= 1e-3
    with pytest.raises(ValueError):
        check_semigroup_law(ctx, -0.1, 0.2, u)


def test_strong_continuity_translation():
    ctx = SemigroupContext.create(scalar_family(), PHI_TRANS)
    u = GridFunction.hat(0.0, 1.0)
    times = [2.0 ** -n for n in range(13)]
    report = check_strong_continuity(ctx, u, times)
    assert report.passed(1e-3)
    assert report.residuals[-1] < report.residuals[0]
    assert report.floor == min(report.residuals)


# -- similarity with the classical semigroup --------------------------------

def test_similarity_is_node_exact_on_aligned_grids():
    ctx = SemigroupContext.create(diag_family(), PHI_PL)
    r_nodes = np.linspace(-4.0, 4.0, 81)
    s_nodes = [PL.invert(r) for r in r_nodes]
    rng = np.random.default_rng(7)
    u = GridFunction(s_nodes, rng.standard_normal((81, 2)))
    for t in (0.1, 1.0, 3.0):
        assert check_similarity(ctx, t, u) <= 1e-12


def test_rescale_round_trip():
    nodes = [PL.invert(r) for r in np.linspace(-2.0, 2.0, 11)]
    u = GridFunction.from_callable(lambda s: [bump(s)], nodes)
    v = rescale_F(u, PL)
    assert np.max(np.abs(v.nodes - np.linspace(-2.0, 2.0, 11))) <= 1e-12
    back = rescale_Finv(v, PL)
    assert np.max(np.abs(back.nodes - u.nodes)) <= 1e-12
    assert np.array_equal(back.values, u.values)


def test_apply_S_classical_shifts():
    v = GridFunction.hat(0.0, 1.0)
    moved = apply_S_classical(scalar_family(), 0.25, v)
    assert abs(moved(0.0)[0] - 0.75) <= EXACT
    with pytest.raises(ValueError):
        apply_S_classical(scalar_family(), -1.0, v)


# -- the generator by differencing ------------------------------------------

def test_generator_quotient_and_richardson():
    ctx = SemigroupContext.create(scalar_family(), PHI_TRANS)
    nodes = np.round(np.arange(-3.0, 3.0001, 0.01), 10)
    u = GridFunction.from_callable(bump, nodes)
    # Steps aligned with the node spacing make the quotients exact
    # backward differences, so only the Taylor error remains.
    d_small = apply_generator_fd(ctx, u, 0.01)
    d_big = apply_generator_fd(ctx, u, 0.02)
    target = -bump_prime(0.5)
    assert abs(d_small(0.5)[0] - target) <= 5e-3
    extrapolated = richardson_pair(d_big, 0.02, d_small, 0.01)
    assert abs(extrapolated(0.5)[0] - target) <= 2e-4
    with pytest.raises(ValueError):
        apply_generator_fd(ctx, u, 0.0)


def test_generator_sweep_stabilizes():
    ctx = SemigroupContext.create(scalar_family(), PHI_TRANS)
    nodes = np.round(np.arange(-3.0, 3.0001, 0.01), 10)
    u = GridFunction.from_callable(bump, nodes)
    sweep = generator_sweep(ctx, u, hs=(0.08, 0.04, 0.02, 0.01))
    assert len(sweep.extrapolants) == 3
    gaps = sweep.stabilization()
    assert len(gaps) == 2
    assert gaps[1] < gaps[0]
    with pytest.raises(ValueError):
        generator_sweep(ctx, u, hs=(0.01,))
