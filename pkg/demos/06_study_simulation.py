"""A miniature end-to-end study: simulate four groups, analyze, render.

The full-size run (100 students per group) lives in the acceptance suite;
this demo keeps the cohort small so it finishes in under a minute.

Run with: python demos/06_study_simulation.py
"""

import copy

from maze_mentor import analyze, report_to_markdown, simulate_study
from maze_mentor.simulate import default_config

config = copy.deepcopy(default_config())
config["students_per_group"] = 15
config["seed"] = 7

dataset = simulate_study(config)
report = analyze(dataset)

print(report_to_markdown(report))

overall = report["learning_success"]["overall_l"]["per_group"]
print("learning success means:",
      {group: round(cell["mean"], 1) for group, cell in overall.items()})

post = report["post_success"]["overall_pl"]["omnibus"]
print(f"post-learning omnibus: H={post['statistic']:.2f} p={post['p_value']:.3f}")
