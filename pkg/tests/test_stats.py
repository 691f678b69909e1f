from __future__ import annotations

import random

import pytest
import scipy.stats as scipy_stats

from maze_mentor.stats import (
    ALPHA_HIGH,
    ALPHA_LOW,
    StatsError,
    cohens_d,
    kruskal_wallis,
    mann_whitney_u,
    midranks,
    shapiro_wilk,
)

from .oracles import exact_mwu_two_sided, kw_h_by_formula

# the weight-gain sample from the original test's worked example; W = 0.79
PUBLISHED_SW_SAMPLE = [148, 154, 158, 160, 161, 162, 166, 170, 182, 195, 236]


def test_midranks_with_ties():
    assert midranks([10, 20, 20, 30]) == [1.0, 2.5, 2.5, 4.0]


# ---------------------------------------------------------------------------
# Kruskal-Wallis


def test_kw_hand_computed_example():
    result = kruskal_wallis([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert result.statistic == pytest.approx(7.2, abs=1e-12)


def test_kw_group_order_invariance():
    a = kruskal_wallis([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    b = kruskal_wallis([[7, 8, 9], [1, 2, 3], [4, 5, 6]])
    assert a.statistic == pytest.approx(b.statistic)
    assert a.p_value == pytest.approx(b.p_value)


def test_kw_identical_groups_h_zero():
    assert kruskal_wallis([[1, 5, 9], [1, 5, 9]]).statistic == pytest.approx(0.0, abs=1e-12)


def test_kw_all_observations_identical():
    result = kruskal_wallis([[3, 3], [3, 3], [3]])
    assert result.statistic == 0.0 and result.p_value == 1.0


def test_kw_matches_scipy():
    rng = random.Random(4)
    for _ in range(100):
        groups = [
            [rng.randint(0, 12) for _ in range(rng.randint(2, 9))]
            for _ in range(rng.randint(2, 4))
        ]
        pooled = [v for g in groups for v in g]
        if len(set(pooled)) == 1:
            continue
        mine = kruskal_wallis(groups)
        ref = scipy_stats.kruskal(*groups)
        assert mine.statistic == pytest.approx(ref.statistic, abs=1e-9)
        assert mine.p_value == pytest.approx(ref.pvalue, abs=1e-9)


def test_kw_matches_formula_oracle():
    rng = random.Random(8)
    for _ in range(60):
        groups = [
            [rng.randint(0, 8) for _ in range(rng.randint(2, 6))]
            for _ in range(rng.randint(2, 4))
        ]
        if len({v for g in groups for v in g}) == 1:
            continue
        assert kruskal_wallis(groups).statistic == pytest.approx(
            kw_h_by_formula(groups), abs=1e-9
        )


def test_kw_exact_mode():
    result = kruskal_wallis([[1, 2], [3, 4], [5, 6]], mode="exact")
    assert 0 < result.p_value <= 1
    with pytest.raises(StatsError):
        kruskal_wallis([[1] * 6, [2] * 6], mode="exact")


def test_kw_input_validation():
    with pytest.raises(StatsError):
        kruskal_wallis([[1, 2]])
    with pytest.raises(StatsError):
        kruskal_wallis([[1, 2], []])
    with pytest.raises(StatsError):
        kruskal_wallis([[1], [2]])


# ---------------------------------------------------------------------------
# Mann-Whitney U


def test_mwu_spec_example():
    result = mann_whitney_u([1, 2, 3], [4, 5, 6])
    assert result.statistic == 0.0
    assert result.p_value == pytest.approx(0.1, abs=1e-12)


def test_mwu_u_identity():
    rng = random.Random(11)
    for _ in range(50):
        na, nb = rng.randint(1, 8), rng.randint(1, 8)
        a = [rng.random() for _ in range(na)]
        b = [rng.random() for _ in range(nb)]
        ua = mann_whitney_u(a, b).statistic
        ub = mann_whitney_u(b, a).statistic
        assert ua + ub == pytest.approx(na * nb)


def test_mwu_same_multiset():
    result = mann_whitney_u([3, 1, 2], [1, 2, 3], mode="normal")
    assert result.statistic == pytest.approx(4.5)  # n^2 / 2
    assert result.p_value == pytest.approx(1.0, abs=0.05)


def test_mwu_exact_matches_enumeration_oracle():
    rng = random.Random(21)
    for _ in range(150):
        na, nb = rng.randint(1, 6), rng.randint(1, 6)
        values = rng.sample(range(10_000), na + nb)
        a, b = values[:na], values[na:]
        mine = mann_whitney_u(a, b)
        u_ref, p_ref = exact_mwu_two_sided(a, b)
        assert mine.statistic == pytest.approx(u_ref, abs=1e-9)
        assert mine.p_value == pytest.approx(p_ref, abs=1e-9)


def test_mwu_normal_approx_matches_scipy_with_ties():
    rng = random.Random(31)
    for _ in range(60):
        na, nb = rng.randint(8, 25), rng.randint(8, 25)
        a = [rng.randint(0, 6) for _ in range(na)]
        b = [rng.randint(0, 6) for _ in range(nb)]
        if len(set(a + b)) == 1:
            continue
        mine = mann_whitney_u(a, b)
        ref = scipy_stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic")
        assert mine.statistic == pytest.approx(ref.statistic, abs=1e-9)
        assert mine.p_value == pytest.approx(ref.pvalue, abs=1e-9)


def test_mwu_exact_mode_refuses_ties():
    with pytest.raises(StatsError):
        mann_whitney_u([1, 1, 2], [2, 3, 4], mode="exact")


def test_mwu_empty_sample_rejected():
    with pytest.raises(StatsError):
        mann_whitney_u([], [1])


# ---------------------------------------------------------------------------
# Cohen's d


def test_cohens_d_zero_for_equal_samples():
    assert cohens_d([1, 2, 3, 4], [1, 2, 3, 4]).statistic == 0.0


def test_cohens_d_antisymmetry():
    d1 = cohens_d([5, 6, 7], [1, 2, 3]).statistic
    d2 = cohens_d([1, 2, 3], [5, 6, 7]).statistic
    assert d1 == pytest.approx(-d2)


def test_cohens_d_affine_invariance():
    a, b = [1.0, 2.0, 4.0], [3.0, 5.0, 6.0]
    base = cohens_d(a, b).statistic
    shifted = cohens_d([x + 11 for x in a], [x + 11 for x in b]).statistic
    scaled = cohens_d([x * 3 for x in a], [x * 3 for x in b]).statistic
    assert shifted == pytest.approx(base)
    assert scaled == pytest.approx(base)


def test_cohens_d_errors():
    with pytest.raises(StatsError):
        cohens_d([1], [2, 3])
    with pytest.raises(StatsError):
        cohens_d([2, 2], [2, 2])


# ---------------------------------------------------------------------------
# Shapiro-Wilk


def test_sw_published_worked_example():
    result = shapiro_wilk(PUBLISHED_SW_SAMPLE)
    assert result.statistic == pytest.approx(0.79, abs=1e-2)
    # high-precision reference value, frozen from the AS R94 algorithm
    assert result.statistic == pytest.approx(0.788815, abs=1e-3)
    assert result.p_value == pytest.approx(0.006704, abs=1e-3)


def test_sw_matches_scipy():
    rng = random.Random(41)
    for _ in range(120):
        n = rng.randint(3, 120)
        xs = [rng.gauss(0, 1) * rng.uniform(0.5, 4) + rng.uniform(-3, 3) for _ in range(n)]
        mine = shapiro_wilk(xs)
        ref = scipy_stats.shapiro(xs)
        assert mine.statistic == pytest.approx(ref.statistic, abs=2e-3)
        assert mine.p_value == pytest.approx(ref.pvalue, abs=5e-3)


def test_sw_detects_non_normal():
    skewed = [0.0] * 30 + [1.0] * 10 + [8.0, 9.0, 10.0, 20.0]
    assert shapiro_wilk(skewed).p_value < 0.001


def test_sw_range_errors():
    with pytest.raises(StatsError):
        shapiro_wilk([1, 2])
    with pytest.raises(StatsError):
        shapiro_wilk(list(range(5001)))


def test_sw_constant_sample_error():
    with pytest.raises(StatsError):
        shapiro_wilk([4.2] * 10)


# ---------------------------------------------------------------------------
# Significance flags


def test_flags_follow_thresholds():
    assert ALPHA_LOW == pytest.approx(0.05 / 3)
    assert ALPHA_HIGH == pytest.approx(0.01 / 3)
    r = mann_whitney_u(list(range(20)), list(range(40, 60)))
    assert r.p_value < ALPHA_HIGH
    assert r.significant_0033 and r.significant_0166 and r.stars == "**"
    r2 = mann_whitney_u([1, 2, 3], [2, 3, 4])
    assert not r2.significant_0166 and r2.stars == ""
    d = cohens_d([1, 2], [3, 4])
    assert d.p_value is None and not d.significant_0166
