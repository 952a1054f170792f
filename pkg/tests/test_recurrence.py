"""Tests for regime classification and the exact / precision-tracked orbits."""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadrec.errors import DomainError, ExactCapError
from quadrec.numerics import PrecReal
from quadrec.recurrence import (
    EXACT_STEP_CAP,
    Params,
    Regime,
    classify,
    final_value,
    iterate_exact,
    iterate_real,
    logistic_iterate,
)

# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "p, regime, r, q",
    [
        (Fraction(1, 5), Regime.SUBCRITICAL, Fraction(1), Fraction(2, 5)),
        (Fraction(1, 2), Regime.CRITICAL, Fraction(1), Fraction(1)),
        (Fraction(3, 4), Regime.SUPERCRITICAL, Fraction(1, 3), Fraction(1, 2)),
    ],
)
def test_classify_examples(p, regime, r, q):
    params = classify(p)
    assert params.regime is regime
    assert params.r == r
    assert params.q == q


@pytest.mark.parametrize("p", [0, 1, Fraction(3, 2), -1, Fraction(-1, 4)])
def test_classify_rejects_out_of_range(p):
    with pytest.raises(DomainError):
        classify(p)


def test_classify_accepts_strings_and_floats_of_exact_halves():
    assert classify("2/5").p == Fraction(2, 5)
    assert classify("0.5").regime is Regime.CRITICAL


probabilities = st.fractions(
    min_value=Fraction(1, 50), max_value=Fraction(49, 50), max_denominator=50
)


@settings(max_examples=80, deadline=None)
@given(probabilities)
def test_classify_multiplier_below_one_iff_noncritical(p):
    params = classify(p)
    if params.regime is Regime.CRITICAL:
        assert params.q == 1
    else:
        assert 0 < params.q < 1


@settings(max_examples=60, deadline=None)
@given(
    st.fractions(
        min_value=Fraction(51, 100), max_value=Fraction(99, 100), max_denominator=200
    )
)
def test_classify_supercritical_fixed_point_identity(p):
    # above the critical point the fixed point satisfies r*p = 1 - p
    params = classify(p)
    assert params.regime is Regime.SUPERCRITICAL
    assert params.r * p == 1 - p


# ---------------------------------------------------------------------------
# exact orbits
# ---------------------------------------------------------------------------


def test_exact_orbit_critical_prefix():
    params = classify(Fraction(1, 2))
    orbit = iterate_exact(params, 3)
    assert [s.a for s in orbit] == [
        Fraction(0),
        Fraction(1, 2),
        Fraction(5, 8),
        Fraction(89, 128),
    ]
    assert [s.k for s in orbit] == [0, 1, 2, 3]
    assert orbit[3].b == 1 - Fraction(89, 128)


def test_exact_orbit_subcritical_value():
    params = classify(Fraction(2, 5))
    orbit = iterate_exact(params, 3)
    assert orbit[3].a == Fraction(64173, 78125)


def test_exact_orbit_supercritical_first_step():
    params = classify(Fraction(3, 4))
    orbit = iterate_exact(params, 1)
    assert orbit[1].a == Fraction(1, 4)
    assert orbit[1].b == Fraction(1, 3) - Fraction(1, 4)


def test_exact_orbit_cap_and_domain():
    params = classify(Fraction(1, 2))
    with pytest.raises(ExactCapError):
        iterate_exact(params, EXACT_STEP_CAP + 1)
    with pytest.raises(DomainError):
        iterate_exact(params, -1)
    # the cap is adjustable in both directions (values double in bit length
    # per step, so raising it far beyond the default is hopeless, not slow)
    with pytest.raises(ExactCapError):
        iterate_exact(params, 5, cap=4)
    assert len(iterate_exact(params, 5, cap=5)) == 6


def test_orbit_seed_is_pinned_at_zero():
    params = classify(Fraction(1, 2))
    with pytest.raises(DomainError):
        iterate_exact(params, 2, seed=Fraction(1, 2))
    with pytest.raises(DomainError):
        iterate_real(params, 2, 30, seed=Fraction(1, 3))


@settings(max_examples=40, deadline=None)
@given(probabilities)
def test_orbit_is_monotone_and_bounded(p):
    params = classify(p)
    orbit = iterate_exact(params, 12)
    values = [s.a for s in orbit]
    assert all(earlier < later for earlier, later in zip(values, values[1:]))
    assert all(0 <= v < params.r for v in values)


@settings(max_examples=40, deadline=None)
@given(probabilities.filter(lambda p: p != Fraction(1, 2)))
def test_residual_below_geometric_envelope(p):
    # b_k = r - a_k stays below r * q**k in both non-critical regimes
    params = classify(p)
    for sample in iterate_exact(params, 12)[1:]:
        assert sample.b < params.r * params.q**sample.k


# ---------------------------------------------------------------------------
# precision-tracked orbits
# ---------------------------------------------------------------------------


def test_real_orbit_matches_exact_prefix():
    params = classify(Fraction(1, 2))
    orbit = iterate_real(params, 3, 30)
    assert orbit[3].a.value == Decimal("0.6953125")  # 89/128 exactly
    assert orbit[3].b.value == Decimal("0.3046875")


def test_real_orbit_default_sampling_is_dense_then_logarithmic():
    params = classify(Fraction(1, 2))
    dense = iterate_real(params, 100, 20)
    assert [s.k for s in dense] == list(range(101))
    sparse = iterate_real(params, 50_000, 20)
    ks = [s.k for s in sparse]
    assert ks[0] == 0 and ks[-1] == 50_000
    assert len(ks) < 40
    assert all(a < b for a, b in zip(ks, ks[1:]))


def test_real_orbit_explicit_sample_ks():
    params = classify(Fraction(1, 3))
    orbit = iterate_real(params, 64, 25, sample_ks=[0, 8, 64])
    assert [s.k for s in orbit] == [0, 8, 64]
    exact = iterate_exact(params, 8)[8].a
    assert abs(orbit[1].a.value - PrecReal(exact, 25).value) < Decimal("1e-20")


def test_final_value_agrees_with_orbit_endpoint():
    params = classify(Fraction(2, 5))
    lone = final_value(params, 200, 30)
    orbit = iterate_real(params, 200, 30)
    assert lone.value == orbit[-1].a.value


@settings(max_examples=25, deadline=None)
@given(probabilities, st.integers(min_value=5, max_value=400))
def test_precision_ladder_agreement(p, n):
    # the same orbit at 30 and 50 digits agrees to well past 30 - guard room
    params = classify(p)
    low = final_value(params, n, 30)
    high = final_value(params, n, 50)
    assert abs(low.value - high.value) < Decimal("1e-22")


def test_deep_critical_orbit_tracks_asymptotic_shape(reference_estimate):
    # 1 - a_n should be within 1% of 2 / (n + ln n + C/2) at n = 10**6
    n = 10**6
    params = classify(Fraction(1, 2))
    a_n = final_value(params, n, 40)
    gap = 1 - a_n.value
    c_half = reference_estimate.C.value / 2
    predicted = 2 / (Decimal(n) + Decimal(n).ln() + c_half)
    assert abs(gap - predicted) / predicted < Decimal("0.01")


# ---------------------------------------------------------------------------
# logistic form
# ---------------------------------------------------------------------------


def test_logistic_exact_prefix():
    assert logistic_iterate(3) == [
        Fraction(1, 2),
        Fraction(1, 4),
        Fraction(3, 16),
        Fraction(39, 256),
    ]


def test_logistic_is_half_complement_of_critical_orbit():
    # alpha_k = (1 - a_k) / 2 links the two exact orbits
    params = classify(Fraction(1, 2))
    quad = iterate_exact(params, 12)
    logi = logistic_iterate(12)
    for sample, alpha in zip(quad, logi):
        assert alpha == (1 - sample.a) / 2


def test_logistic_precision_mode_matches_exact():
    exact = logistic_iterate(10)
    real = logistic_iterate(10, precision=30)
    for e, r in zip(exact, real):
        assert abs(r.value - PrecReal(e, 30).value) < Decimal("1e-25")


def test_logistic_cap():
    with pytest.raises(ExactCapError):
        logistic_iterate(EXACT_STEP_CAP + 1)
    # precision mode has no cap
    assert len(logistic_iterate(EXACT_STEP_CAP + 1, precision=20)) == EXACT_STEP_CAP + 2
