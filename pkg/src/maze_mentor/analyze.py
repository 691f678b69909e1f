"""Statistical report over a study dataset, shaped like the study's tables.

For every reported slice: per-group mean and standard error, an omnibus
Kruskal-Wallis across the four groups, and pairwise Mann-Whitney tests of
each intervention against the control with Bonferroni-style thresholds
(p < 0.05/3 and p < 0.01/3) plus Cohen's d. Normality is pre-checked with
Shapiro-Wilk and recorded; the pipeline stays non-parametric regardless.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .sessions import GROUPS, GROUP_NONE
from .simulate import StudyDataset
from .stats import StatsError, cohens_d, kruskal_wallis, mann_whitney_u, shapiro_wilk

# slice key -> human label, higher-is-better flag irrelevant for tests
LEARNING_SUCCESS_SLICES = [
    ("overall_l", "Overall HoC (T01-T12)"),
    ("easy_l", "Easy_L (T01-T04)"),
    ("hard_l", "Hard_L (T05-T12)"),
    ("common_l", "Common_L"),
]
LEARNING_TIME_SLICES = [
    ("time_l", "Time on tasks (s)"),
    ("intervention_time", "Intervention time (s)"),
    ("intervention_rate", "Intervention rate"),
]
POST_SUCCESS_SLICES = [
    ("overall_pl", "Overall PostHoC (P01-P15)"),
    ("easy_pl", "Easy_PL (P01, P02, P08)"),
    ("hard_pl", "Hard_PL (rest)"),
    ("common_pl", "Common_PL (P01, P02, P04-P07)"),
    ("new_pl", "New_PL (P12-P14)"),
    ("p12", "P12"),
    ("p13", "P13"),
    ("p14", "P14"),
]

GROUP_LABELS = {
    "none": "None",
    "code_rec": "Code-Rec",
    "code_quiz": "Code-Quiz",
    "plan_quiz": "Plan-Quiz",
}


def _mean(xs: list[float]) -> float:
    return sum(xs) / len(xs)


def _se(xs: list[float]) -> float:
    n = len(xs)
    if n < 2:
        return 0.0
    m = _mean(xs)
    sd = math.sqrt(sum((x - m) ** 2 for x in xs) / (n - 1))
    return sd / math.sqrt(n)


def _slice_values(dataset: StudyDataset, group: str, key: str) -> list[float]:
    return [s.slices[key] for s in dataset.groups[group]]


def _analyze_slice(dataset: StudyDataset, key: str, baseline: str) -> dict[str, Any]:
    per_group: dict[str, Any] = {}
    for group in GROUPS:
        values = _slice_values(dataset, group, key)
        per_group[group] = {"mean": round(_mean(values), 6), "se": round(_se(values), 6), "n": len(values)}
    omnibus = kruskal_wallis([_slice_values(dataset, g, key) for g in GROUPS])
    base_values = _slice_values(dataset, baseline, key)
    pairwise = {}
    for group in GROUPS:
        if group == baseline:
            continue
        values = _slice_values(dataset, group, key)
        mwu = mann_whitney_u(values, base_values)
        try:
            effect = cohens_d(values, base_values).statistic
        except StatsError:
            effect = 0.0
        pairwise[group] = {
            "u": mwu.statistic,
            "p_value": mwu.p_value,
            "significant_0166": mwu.significant_0166,
            "significant_0033": mwu.significant_0033,
            "stars": mwu.stars,
            "cohens_d": round(effect, 6),
        }
    return {"per_group": per_group, "omnibus": omnibus.to_record(), "vs_baseline": pairwise}


def _normality_checks(dataset: StudyDataset) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key in ("overall_l", "time_l", "overall_pl"):
        per_group = {}
        for group in GROUPS:
            values = _slice_values(dataset, group, key)
            try:
                res = shapiro_wilk(values)
                per_group[group] = {"w": round(res.statistic, 6), "p_value": res.p_value}
            except StatsError as err:
                per_group[group] = {"error": str(err)}
        out[key] = per_group
    return out


def analyze(dataset: StudyDataset, baseline: str = GROUP_NONE) -> dict[str, Any]:
    """Full study report as a JSON-serializable dictionary."""
    for group in GROUPS:
        if group not in dataset.groups or not dataset.groups[group]:
            raise ValueError(f"dataset is missing group {group!r}")
    report: dict[str, Any] = {
        "baseline": baseline,
        "students_per_group": {g: len(dataset.groups[g]) for g in GROUPS},
        "seed": dataset.seed,
        "normality": _normality_checks(dataset),
        "learning_success": {
            key: _analyze_slice(dataset, key, baseline) for key, _ in LEARNING_SUCCESS_SLICES
        },
        "learning_time": {
            key: _analyze_slice(dataset, key, baseline) for key, _ in LEARNING_TIME_SLICES
        },
        "post_success": {
            key: _analyze_slice(dataset, key, baseline) for key, _ in POST_SUCCESS_SLICES
        },
    }
    return report


def report_to_json(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def _render_table(
    title: str, slices: list[tuple[str, str]], section: dict[str, Any], percent: bool
) -> list[str]:
    lines = [f"### {title}", ""]
    headers = ["Group"] + [label for _, label in slices]
    lines.append("| " + " | ".join(headers) + " |")
    lines.append("|" + "---|" * len(headers))
    for group in GROUPS:
        row = [GROUP_LABELS[group]]
        for key, _ in slices:
            cell = section[key]["per_group"][group]
            stars = ""
            if group != GROUP_NONE:
                stars = section[key]["vs_baseline"][group]["stars"]
            value = f"{cell['mean']:.1f}" if percent else f"{cell['mean']:.2f}"
            row.append(f"{value} ({cell['se']:.2f}){stars}")
        lines.append("| " + " | ".join(row) + " |")
    lines.append("")
    return lines


def report_to_markdown(report: dict[str, Any]) -> str:
    lines = [
        "# Study report",
        "",
        f"Baseline group: {GROUP_LABELS[report['baseline']]}. "
        "Stars mark Mann-Whitney significance against the baseline: "
        "`*` p < 0.05/3, `**` p < 0.01/3. Values are means with standard errors.",
        "",
    ]
    lines += _render_table(
        "Learning phase: success rate (%)",
        LEARNING_SUCCESS_SLICES,
        report["learning_success"],
        percent=True,
    )
    lines += _render_table(
        "Learning phase: time and intervention usage",
        LEARNING_TIME_SLICES,
        report["learning_time"],
        percent=False,
    )
    lines += _render_table(
        "Post-learning phase: success rate (%)",
        POST_SUCCESS_SLICES,
        report["post_success"],
        percent=True,
    )
    omnibus = report["post_success"]["overall_pl"]["omnibus"]
    lines.append(
        f"Post-learning omnibus Kruskal-Wallis on overall success: "
        f"H = {omnibus['statistic']:.3f}, p = {omnibus['p_value']:.4f}."
    )
    lines.append("")
    return "\n".join(lines)


def write_report(report: dict[str, Any], path: str | Path) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(report_to_json(report) + "\n", encoding="utf-8")
    elif path.suffix in (".md", ".markdown"):
        path.write_text(report_to_markdown(report), encoding="utf-8")
    else:
        raise ValueError("report path must end in .json or .md")
