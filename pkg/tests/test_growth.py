"""Catalog rates, table and density constructors, and the upper-limit probe."""

import math

import numpy as np
import pytest

from evosemi import (
    DegenerateDensity,
    GrowthRate,
    Inconclusive,
    NegativeDensity,
    ProbeInconclusive,
    RangeExceeded,
    classify_ell,
    from_rate_density,
    from_table,
    identity,
    neg_exp,
    odd_power,
    polynomial_log,
)

EXACT = 1e-12
ROUNDTRIP_TOL = 1e-9

LN3 = 1.0986122886681098          # value at s = 2
MINUS_LN4 = -1.3862943611198906   # value at s = -3
E_MINUS_1 = 1.718281828459045     # preimage of r = 1


def test_identity_catalog():
    mu = identity()
    assert mu(3.7) == 3.7
    assert mu.prime(-2.0) == 1.0
    assert mu.invert(0.25) == 0.25
    assert math.isinf(mu.ell)
    assert mu.label == "identity"


def test_polynomial_log_frozen_values():
    mu = polynomial_log()
    assert mu(0.0) == 0.0
    assert abs(mu(2.0) - LN3) <= EXACT
    assert abs(mu(-3.0) - MINUS_LN4) <= EXACT
    assert abs(mu.invert(1.0) - E_MINUS_1) <= EXACT
    assert abs(mu.prime(2.0) - 1.0 / 3.0) <= EXACT
    assert abs(mu.prime(-3.0) - 1.0 / 4.0) <= EXACT


def test_odd_power_values():
    mu = odd_power(1)
    assert mu.label == "odd_power_3"
    assert mu(2.0) == 8.0
    assert mu(-2.0) == -8.0
    assert abs(mu.invert(-8.0) + 2.0) <= EXACT
    assert abs(mu.prime(2.0) - 12.0) <= EXACT


def test_neg_exp_has_finite_upper_limit():
    mu = neg_exp()
    assert mu.ell == 0.0
    assert mu(0.0) == -1.0
    assert abs(mu.invert(-1.0)) <= ROUNDTRIP_TOL
    with pytest.raises(RangeExceeded):
        mu.invert(0.0)
    with pytest.raises(RangeExceeded):
        mu.invert(0.5)


def test_prime_needs_a_derivative():
    mu = GrowthRate(fn=lambda s: s)
    with pytest.raises(ValueError):
        mu.prime(0.0)


def test_invert_falls_back_to_bracketing():
    mu = GrowthRate(fn=lambda s: s + 0.25 * math.sin(s))
    for r in (-7.3, -0.2, 0.0, 4.9):
        assert abs(mu(mu.invert(r)) - r) <= ROUNDTRIP_TOL


def test_from_table_tracks_the_source_rate():
    src = polynomial_log()
    nodes = np.linspace(-5.0, 5.0, 201)
    tab = from_table(nodes, [src(s) for s in nodes])
    assert tab.label == "table"
    assert tab.kinks == (-5.0, 5.0)
    dense = np.linspace(-5.0, 5.0, 1001)
    assert max(abs(tab(x) - src(x)) for x in dense) <= 1e-3
    assert abs(tab.invert(tab(1.3)) - 1.3) <= 1e-8


def test_from_table_rejects_non_monotone_values():
    with pytest.raises(ValueError):
        from_table([0.0, 1.0, 2.0], [0.0, 1.0, 0.5])


def test_from_rate_density_cubic_antiderivative():
    # Simpson steps are exact on cubics, so only roundoff remains inside
    # the window; outside it the on-demand integration takes over.
    md = from_rate_density(lambda s: 3.0 * s * s + 1.0, window=(-10.0, 10.0))
    for s in (-9.5, -2.0, 0.0, 0.3, 7.0):
        assert abs(md(s) - (s**3 + s)) <= 1e-9
    assert abs(md(20.0) - (20.0**3 + 20.0)) <= 1e-6
    assert abs(md.prime(1.5) - (3.0 * 1.5**2 + 1.0)) <= EXACT
    assert abs(md.invert(md(4.2)) - 4.2) <= 1e-8


def test_from_rate_density_rejects_negative_density():
    with pytest.raises(NegativeDensity):
        from_rate_density(lambda s: math.cos(s), window=(-5.0, 5.0))


def test_from_rate_density_warns_on_dead_interval():
    # the flat stretch also makes the lower tail probe inconclusive
    with pytest.warns((DegenerateDensity, ProbeInconclusive)):
        md = from_rate_density(lambda s: max(s, 0.0), window=(-2.0, 2.0))
    assert abs(md(-1.0) - md(-2.0)) <= 1e-9


def test_classify_ell_verdicts():
    assert classify_ell(identity()).diverged
    probe = classify_ell(neg_exp())
    assert not probe.diverged
    assert abs(probe.value) <= 1e-6

    # Increments shrinking at ratio 0.85 sit between trust and sustain:
    # too slow to bound the tail, too fast to call divergent.
    slow = lambda s: -(0.85 ** math.log2(max(s, 1.0)))
    with pytest.raises(Inconclusive):
        classify_ell(slow)
