from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from citemetrics.curves import (
    ACCRUAL_DEVIATION,
    CLASS_HARE,
    CLASS_INTERMEDIATE,
    CLASS_TORTOISE,
    KIND_CUMULATIVE,
    KIND_RAW,
    SELF_CITATION_SPIKE,
    AccrualCurve,
    AnomalyThresholds,
    ClassificationThresholds,
    accrual_curve,
    classify_journal,
    cumulative,
    curves_to_csv,
    detect_anomalous_volumes,
    mean_accrual_curve,
    standardize_to_age2,
    standardized_volume_curves,
    volume_curves,
)
from citemetrics.errors import ConfigError, DegenerateVolumeError

from conftest import make_profile


def raw(values, journal="J", pub_year=1990):
    return AccrualCurve(journal, pub_year, KIND_RAW, tuple(values))


# --- accrual_curve ------------------------------------------------------


def test_accrual_curve_reads_cells():
    profile = make_profile("J", {(1996, 1996): (2, 0), (1996, 1998): (7, 0)})
    curve = accrual_curve(profile, 1996, 3)
    assert curve.values == (2, 0, 7, 0)
    assert curve.kind == KIND_RAW


def test_accrual_curve_empty_volume_is_zeros():
    profile = make_profile("J", {(1990, 1991): (4, 0)})
    assert accrual_curve(profile, 1985, 2).values == (0, 0, 0)


def test_accrual_curve_nonself_mode():
    profile = make_profile("J", {(1993, 1993): (44, 38)})
    assert accrual_curve(profile, 1993, 0, use="nonself").values == (6,)


# --- cumulative ---------------------------------------------------------


def test_cumulative_prefix_sums():
    assert cumulative(raw([2, 0, 7, 0])).values == (2, 2, 9, 9)


def test_cumulative_zeros():
    assert cumulative(raw([0, 0, 0])).values == (0, 0, 0)


def test_cumulative_single_age():
    assert cumulative(raw([5])).values == (5,)


def test_cumulative_requires_raw():
    with pytest.raises(ValueError):
        cumulative(cumulative(raw([1, 2])))


# --- standardize --------------------------------------------------------


def test_standardize_scales_to_100_at_age2():
    curve = standardize_to_age2(cumulative(raw([5, 10, 10, 15, 20])))
    assert curve.values == (20, 60, 100, 160, 240)


def test_standardize_anchor_is_always_100():
    curve = standardize_to_age2(cumulative(raw([3, 1, 4, 1, 5])))
    assert curve.values[2] == 100


def test_standardize_zero_anchor_rejected():
    with pytest.raises(DegenerateVolumeError):
        standardize_to_age2(cumulative(raw([0, 0, 0, 4])))


def test_standardize_short_curve_rejected():
    with pytest.raises(DegenerateVolumeError):
        standardize_to_age2(cumulative(raw([5, 5])))


# --- ragged mean --------------------------------------------------------


def test_ragged_mean_hand_case():
    curves = [raw([1, 2, 3], pub_year=1990), raw([2, 4], pub_year=1991)]
    mean = mean_accrual_curve(curves, 2)
    assert mean.values == (Fraction(3, 2), 3, 3)
    assert mean.observations == (2, 2, 1)
    assert mean.pub_year is None


def test_ragged_mean_single_volume():
    mean = mean_accrual_curve([raw([4, 5, 6])], 2)
    assert mean.values == (4, 5, 6)


def test_ragged_mean_observation_counts_taper():
    curves = [raw([1] * (21 - i), pub_year=1984 + i) for i in range(14)]
    mean = mean_accrual_curve(curves, 20)
    assert mean.observations[0] == 14
    assert mean.observations[20] == 1


def test_ragged_mean_unobserved_age_is_error():
    with pytest.raises(ValueError, match="age 2"):
        mean_accrual_curve([raw([1, 1])], 2)


def test_ragged_mean_rejects_duplicate_pub_years():
    with pytest.raises(ValueError):
        mean_accrual_curve([raw([1]), raw([2])], 0)


@given(st.lists(st.lists(st.integers(0, 50), min_size=4, max_size=4), min_size=1, max_size=6))
def test_ragged_mean_equal_lengths_is_pointwise_mean(rows):
    curves = [raw(values, pub_year=1990 + i) for i, values in enumerate(rows)]
    mean = mean_accrual_curve(curves, 3)
    for age in range(4):
        assert mean.values[age] == Fraction(sum(r[age] for r in rows), len(rows))


# --- scale invariance ---------------------------------------------------


@given(
    st.lists(st.integers(0, 40), min_size=3, max_size=12),
    st.integers(min_value=1, max_value=100),
)
def test_standardized_curve_ignores_uniform_scaling(values, k):
    if sum(values[:3]) == 0:
        values[0] += 1
    base = standardize_to_age2(cumulative(raw(values)))
    scaled = standardize_to_age2(cumulative(raw([v * k for v in values])))
    assert base.values == scaled.values


@given(
    st.lists(st.integers(0, 40), min_size=3, max_size=12),
    st.fractions(min_value=Fraction(1, 10), max_value=10),
)
def test_standardized_curve_absorbs_proportional_boost(values, multiple):
    # one heavily cited paper lifts every age of a volume by the same factor
    if sum(values[:3]) == 0:
        values[0] += 1
    boosted = [v + v * multiple for v in values]
    base = standardize_to_age2(cumulative(raw(values)))
    lifted = standardize_to_age2(cumulative(raw(boosted)))
    assert base.values == lifted.values


# --- anomaly detection --------------------------------------------------


def _standardized(volumes):
    return {year: standardize_to_age2(cumulative(raw(v, pub_year=year)))
            for year, v in volumes.items()}


def test_no_findings_when_volumes_identical_and_no_self():
    std = _standardized({1990: [10, 10, 10, 10], 1991: [10, 10, 10, 10], 1992: [10, 10, 10, 10]})
    assert detect_anomalous_volumes(std, {}) == []


def test_self_citation_spike_flagged():
    std = _standardized({y: [10, 10, 10] for y in (1990, 1991, 1992, 1993)})
    rates = {1993: {1993: Fraction(38, 44)}}
    findings = detect_anomalous_volumes(std, rates)
    assert len(findings) == 1
    f = findings[0]
    assert f.reason == SELF_CITATION_SPIKE
    assert (f.pub_year, f.age) == (1993, 0)
    assert f.deviation == Fraction(38, 44) * 100


def test_self_rate_below_threshold_not_flagged():
    std = _standardized({y: [10, 10, 10] for y in (1990, 1991, 1992)})
    rates = {1990: {1991: Fraction(49, 100)}}
    assert detect_anomalous_volumes(std, rates) == []


def test_accrual_deviation_against_median():
    flat = [10] * 8
    bumped = [10, 10, 10, 10, 20, 10, 10, 10]
    std = _standardized({1990: flat, 1991: flat, 1992: flat, 1993: bumped})
    findings = detect_anomalous_volumes(std, {})
    assert all(f.reason == ACCRUAL_DEVIATION and f.pub_year == 1993 for f in findings)
    assert any(f.age == 4 and f.deviation >= 25 for f in findings)


def test_detection_needs_three_volumes():
    std = _standardized({1990: [1, 1, 1], 1991: [1, 1, 1]})
    with pytest.raises(ValueError):
        detect_anomalous_volumes(std, {})


def test_threshold_validation():
    with pytest.raises(ConfigError):
        AnomalyThresholds(self_rate=Fraction(0))
    with pytest.raises(ConfigError):
        AnomalyThresholds(deviation_pp=Fraction(-1))


# --- classification -----------------------------------------------------


@pytest.mark.parametrize(
    "coverage,expected",
    [
        (Fraction(38, 100), CLASS_HARE),
        (Fraction(6, 100), CLASS_TORTOISE),
        (Fraction(20, 100), CLASS_INTERMEDIATE),
        (Fraction(1, 4), CLASS_HARE),       # boundaries are inclusive
        (Fraction(3, 20), CLASS_TORTOISE),
    ],
)
def test_classification(coverage, expected):
    assert classify_journal(coverage) == expected


def test_classification_threshold_order_enforced():
    with pytest.raises(ConfigError):
        ClassificationThresholds(hare=Fraction(1, 10), tortoise=Fraction(2, 10))


@given(
    st.fractions(min_value=0, max_value=1),
    st.fractions(min_value=0, max_value=1),
)
def test_classification_monotone(a, b):
    lo, hi = sorted((a, b))
    order = {CLASS_TORTOISE: 0, CLASS_INTERMEDIATE: 1, CLASS_HARE: 2}
    assert order[classify_journal(lo)] <= order[classify_journal(hi)]


# --- profile plumbing and CSV -------------------------------------------


def test_volume_curves_lengths_follow_observation_end():
    profile = make_profile(
        "J", {(1990, 1990): (1, 0), (1990, 1994): (2, 0), (1992, 1993): (3, 0)}
    )
    volumes = volume_curves(profile)
    assert volumes[1990].values == (1, 0, 0, 0, 2)
    assert volumes[1992].values == (0, 3, 0)


def test_standardized_volume_curves_skips_degenerates():
    profile = make_profile(
        "J",
        {
            (1990, 1990): (5, 0), (1990, 1991): (5, 0), (1990, 1992): (5, 0),
            (1992, 1992): (0, 0),
        },
    )
    std, skipped = standardized_volume_curves(volume_curves(profile))
    assert list(std) == [1990]
    assert skipped == [1992]


def test_curves_csv_layout():
    text = curves_to_csv([raw([1, 2]), mean_accrual_curve([raw([1, 2])], 1)])
    lines = text.splitlines()
    assert lines[0] == "journal,pub_year,kind,age,value,observations"
    assert lines[1] == "J,1990,raw,0,1.0,"
    assert lines[3] == "J,,raw,0,1.0,1"
