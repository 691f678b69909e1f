"""Nonparametric tests and effect size used by the study analysis.

Shapiro-Wilk follows the AS R94 approximation (Royston 1995); Mann-Whitney
offers exact enumeration for small untied samples and a tie- and
continuity-corrected normal approximation otherwise; Kruskal-Wallis uses the
midrank tie correction with a chi-square tail (regularized incomplete gamma),
plus exhaustive permutation for tiny inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from scipy.special import gammaincc, ndtri

# Bonferroni-corrected reporting thresholds (three pairwise comparisons)
ALPHA_LOW = 0.05 / 3
ALPHA_HIGH = 0.01 / 3


class StatsError(ValueError):
    pass


@dataclass(frozen=True)
class StatResult:
    test: str
    statistic: float
    p_value: float | None
    significant_0166: bool = False
    significant_0033: bool = False

    @property
    def stars(self) -> str:
        if self.significant_0033:
            return "**"
        if self.significant_0166:
            return "*"
        return ""

    def to_record(self) -> dict:
        return {
            "test": self.test,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "significant_0166": self.significant_0166,
            "significant_0033": self.significant_0033,
        }


def _result(test: str, statistic: float, p: float | None) -> StatResult:
    return StatResult(
        test=test,
        statistic=float(statistic),
        p_value=None if p is None else float(p),
        significant_0166=p is not None and p < ALPHA_LOW,
        significant_0033=p is not None and p < ALPHA_HIGH,
    )


def _phi(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def midranks(values: Sequence[float]) -> list[float]:
    """Ranks 1..n with ties sharing their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _tie_sizes(values: Sequence[float]) -> list[int]:
    sizes = []
    for v in sorted(set(values)):
        t = sum(1 for x in values if x == v)
        if t > 1:
            sizes.append(t)
    return sizes


# ---------------------------------------------------------------------------
# Shapiro-Wilk (AS R94)


def shapiro_wilk(sample: Sequence[float]) -> StatResult:
    """W statistic and p-value via the Royston AS R94 approximation."""
    n = len(sample)
    if not (3 <= n <= 5000):
        raise StatsError(f"shapiro_wilk needs 3 <= n <= 5000, got {n}")
    x = sorted(float(v) for v in sample)
    if x[-1] - x[0] == 0.0:
        raise StatsError("shapiro_wilk is undefined for a constant sample")

    m = [float(ndtri((i - 0.375) / (n + 0.25))) for i in range(1, n + 1)]
    ssumm2 = sum(v * v for v in m)
    rsn = 1.0 / math.sqrt(n)
    a = [0.0] * n
    if n == 3:
        a[0] = -math.sqrt(0.5)
        a[2] = math.sqrt(0.5)
    else:
        an = (
            -2.706056 * rsn**5
            + 4.434685 * rsn**4
            - 2.071190 * rsn**3
            - 0.147981 * rsn**2
            + 0.221157 * rsn
            + m[n - 1] / math.sqrt(ssumm2)
        )
        if n > 5:
            an1 = (
                -3.582633 * rsn**5
                + 5.682633 * rsn**4
                - 1.752461 * rsn**3
                - 0.293762 * rsn**2
                + 0.042981 * rsn
                + m[n - 2] / math.sqrt(ssumm2)
            )
            phi = (ssumm2 - 2 * m[n - 1] ** 2 - 2 * m[n - 2] ** 2) / (
                1 - 2 * an**2 - 2 * an1**2
            )
            a[n - 1], a[0] = an, -an
            a[n - 2], a[1] = an1, -an1
            lo, hi = 2, n - 2
        else:
            phi = (ssumm2 - 2 * m[n - 1] ** 2) / (1 - 2 * an**2)
            a[n - 1], a[0] = an, -an
            lo, hi = 1, n - 1
        root = math.sqrt(phi)
        for i in range(lo, hi):
            a[i] = m[i] / root

    mean = sum(x) / n
    ssq = sum((v - mean) ** 2 for v in x)
    w_num = sum(a[i] * x[i] for i in range(n)) ** 2
    w = w_num / ssq
    w = min(w, 1.0)

    if n == 3:
        p = (6.0 / math.pi) * (math.asin(math.sqrt(w)) - math.asin(math.sqrt(0.75)))
        p = min(max(p, 0.0), 1.0)
    elif n <= 11:
        g = -2.273 + 0.459 * n
        wt = -math.log(g - math.log(1.0 - w))
        mu = 0.5440 - 0.39978 * n + 0.025054 * n**2 - 0.0006714 * n**3
        sigma = math.exp(1.3822 - 0.77857 * n + 0.062767 * n**2 - 0.0020322 * n**3)
        p = 1.0 - _phi((wt - mu) / sigma)
    else:
        u = math.log(n)
        wt = math.log(1.0 - w)
        mu = -1.5861 - 0.31082 * u - 0.083751 * u**2 + 0.0038915 * u**3
        sigma = math.exp(-0.4803 - 0.082676 * u + 0.0030302 * u**2)
        p = 1.0 - _phi((wt - mu) / sigma)
    return _result("shapiro_wilk", w, p)


# ---------------------------------------------------------------------------
# Mann-Whitney U


def mann_whitney_u(
    a: Sequence[float], b: Sequence[float], mode: str = "auto"
) -> StatResult:
    """Two-sided Mann-Whitney U; exact by enumeration for small untied samples.

    The reported statistic is U for the first sample.
    """
    if mode not in ("auto", "exact", "normal"):
        raise StatsError(f"unknown mode {mode!r}")
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        raise StatsError("mann_whitney_u needs two non-empty samples")
    pooled = [float(v) for v in a] + [float(v) for v in b]
    ranks = midranks(pooled)
    ra = sum(ranks[:na])
    ua = ra - na * (na + 1) / 2
    ub = na * nb - ua
    ties = _tie_sizes(pooled)

    exact = mode == "exact" or (mode == "auto" and na + nb <= 16 and not ties)
    if exact and ties:
        raise StatsError("exact mode requires untied samples")
    if exact:
        n = na + nb
        u_min = min(ua, ub)
        total = 0
        extreme = 0
        rank_values = list(range(1, n + 1))
        for chosen in combinations(rank_values, na):
            u = sum(chosen) - na * (na + 1) / 2
            total += 1
            if u <= u_min + 1e-12:
                extreme += 1
        p = min(1.0, 2.0 * extreme / total)
        return _result("mann_whitney_u", ua, p)

    n = na + nb
    mu = na * nb / 2
    tie_term = sum(t**3 - t for t in ties) / (n * (n - 1)) if n > 1 else 0.0
    var = na * nb / 12 * ((n + 1) - tie_term)
    if var <= 0:
        return _result("mann_whitney_u", ua, 1.0)
    diff = ua - mu
    # continuity correction pulls the statistic toward the mean
    if diff > 0:
        diff -= 0.5
    elif diff < 0:
        diff += 0.5
    z = diff / math.sqrt(var)
    p = min(1.0, 2.0 * (1.0 - _phi(abs(z))))
    return _result("mann_whitney_u", ua, p)


# ---------------------------------------------------------------------------
# Kruskal-Wallis


def _kw_h(groups: list[list[float]]) -> float:
    sizes = [len(g) for g in groups]
    pooled = [v for g in groups for v in g]
    n = len(pooled)
    ranks = midranks(pooled)
    h = 0.0
    offset = 0
    for size in sizes:
        r = sum(ranks[offset : offset + size])
        h += r * r / size
        offset += size
    h = 12.0 / (n * (n + 1)) * h - 3 * (n + 1)
    tie_sum = sum(t**3 - t for t in _tie_sizes(pooled))
    denom = 1.0 - tie_sum / (n**3 - n)
    if denom <= 0:
        return 0.0
    return h / denom


def kruskal_wallis(groups: Sequence[Sequence[float]], mode: str = "chi2") -> StatResult:
    """H with midrank tie correction; p from the chi-square tail.

    ``mode='exact'`` enumerates every assignment of the pooled values to the
    group sizes (combined n <= 10).
    """
    if mode not in ("chi2", "exact"):
        raise StatsError(f"unknown mode {mode!r}")
    gs = [[float(v) for v in g] for g in groups]
    if len(gs) < 2:
        raise StatsError("kruskal_wallis needs at least two groups")
    if any(len(g) == 0 for g in gs):
        raise StatsError("kruskal_wallis groups must be non-empty")
    pooled = [v for g in gs for v in g]
    n = len(pooled)
    if n < 3:
        raise StatsError("kruskal_wallis needs a combined n of at least 3")
    if len(set(pooled)) == 1:
        # the tie correction degenerates; defined as no effect
        return _result("kruskal_wallis", 0.0, 1.0)

    h = _kw_h(gs)
    if mode == "exact":
        if n > 10:
            raise StatsError("exact kruskal_wallis is limited to combined n <= 10")
        sizes = [len(g) for g in gs]
        total = 0
        extreme = 0

        def assignments(values: tuple[float, ...], remaining: list[int]):
            if not remaining:
                yield []
                return
            size = remaining[0]
            for idx in combinations(range(len(values)), size):
                chosen = [values[i] for i in idx]
                rest = tuple(v for i, v in enumerate(values) if i not in set(idx))
                for tail in assignments(rest, remaining[1:]):
                    yield [chosen] + tail

        for grouping in assignments(tuple(pooled), sizes):
            total += 1
            if _kw_h(grouping) >= h - 1e-12:
                extreme += 1
        return _result("kruskal_wallis", h, extreme / total)

    df = len(gs) - 1
    p = float(gammaincc(df / 2.0, h / 2.0))
    return _result("kruskal_wallis", h, p)


# ---------------------------------------------------------------------------
# Cohen's d


def cohens_d(a: Sequence[float], b: Sequence[float]) -> StatResult:
    """(mean_a - mean_b) / pooled SD with (n-1)-weighted pooling."""
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise StatsError("cohens_d needs at least two observations per sample")
    mean_a = sum(a) / na
    mean_b = sum(b) / nb
    var_a = sum((v - mean_a) ** 2 for v in a) / (na - 1)
    var_b = sum((v - mean_b) ** 2 for v in b) / (nb - 1)
    pooled = math.sqrt(((na - 1) * var_a + (nb - 1) * var_b) / (na + nb - 2))
    if pooled == 0:
        raise StatsError("cohens_d is undefined for zero pooled variance")
    return _result("cohens_d", (mean_a - mean_b) / pooled, None)
