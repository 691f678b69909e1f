"""The bundled two-phase curriculum: 12 learning tasks, 15 post-learning.

Run with: python demos/02_task_catalog.py
"""

from maze_mentor import bundled_catalog, is_solution, validate_program, parse_program

catalog = bundled_catalog()

print(f"{len(catalog.learning)} learning tasks, {len(catalog.post_learning)} post-learning\n")
print(f"{'id':4} {'difficulty':8} {'novelty':10} {'concept':28} grid")
for task in catalog.tasks:
    print(
        f"{task.id:4} {task.difficulty:8} {task.novelty or '-':10} "
        f"{task.concepts[0]:28} {task.grid.height}x{task.grid.width}"
    )

# Every task ships a reference solution that actually solves it:
assert all(is_solution(t.solution, t) for t in catalog.tasks)

t10 = catalog["T10"]
print("\nT10 grid:")
print("\n".join(t10.grid.render_rows()))
print("\nT10 solution:")
print(t10.solution.text)

# Validation reports palette and block-limit problems without executing:
over_budget = parse_program("move move move move move move")
report = validate_program(over_budget, t10)
for violation in report.violations:
    print(f"violation: {violation.kind}: {violation.message}")
